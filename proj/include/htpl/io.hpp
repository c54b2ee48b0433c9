#pragma once

#include <filesystem>
#include <string>

#include "htpl/satsim.hpp"
#include "htpl/signature.hpp"
#include "htpl/template.hpp"
#include "htpl/theory.hpp"
#include "htpl/typecheck.hpp"

// Line-oriented text formats. Every document starts with "htpl-<kind> 1"
// and ends with "end"; blank lines and lines starting with '#' are skipped.
// Stems are written "(3,0,1)", the empty stem "()". Writers emit canonical
// form (sorted edges, fixed field order) so equal values give equal bytes.

namespace htpl {

std::string format_stem(const LeafStem& s);
LeafStem parse_stem(const std::string& token);

std::string write_template(const Template& t);
Template read_template(const std::string& text);

std::string write_model(const FiniteModel& m);
FiniteModel read_model(const std::string& text);

/// A positive or qf type spec, as stored in one file.
struct TypeSpecFile {
    enum class Kind { positive, qf } kind = Kind::positive;
    int arity = 2;
    PositiveTypeSpec positive;
    /// qf specs only.
    int level = 0;
    QfFormulaSpec qf;
};

std::string write_typespec(const TypeSpecFile& spec);
TypeSpecFile read_typespec(const std::string& text);

std::string write_certificate(const OplusCertificate& cert, int arity);
OplusCertificate read_certificate(const std::string& text);

/// The template is stored by reference; `template_ref` is written as given
/// and resolved against the scenario file's directory on reading.
std::string write_scenario(const Scenario& sc, const std::string& template_ref);

struct ScenarioFile {
    Scenario scenario;
    std::string template_ref;
};

ScenarioFile read_scenario(const std::string& text, const std::filesystem::path& base_dir);
/// Parses with an already loaded template (the reference is kept but not
/// opened).
ScenarioFile read_scenario(const std::string& text, const Template& tmpl);

struct RealizationFile {
    Distribution dist;
    RealizationReport report;
};

std::string write_realization(const Distribution& dist, const RealizationReport* report);
RealizationFile read_realization(const std::string& text);

/// Reads a whole file; missing or unreadable files throw InputError.
std::string read_file(const std::filesystem::path& path);
/// First token of the header line ("htpl-template", ...), or "" if none.
std::string document_kind(const std::string& text);

} // namespace htpl
