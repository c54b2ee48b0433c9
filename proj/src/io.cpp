#include "htpl/io.hpp"

#include <algorithm>
#include <charconv>
#include <fstream>
#include <sstream>

#include "htpl/errors.hpp"

namespace htpl {

namespace {

constexpr const char* kVersion = "1";

struct Line {
    int number;
    std::vector<std::string> tokens;
};

class Reader {
public:
    Reader(const std::string& text, const std::string& kind) {
        std::istringstream in(text);
        std::string raw;
        int number = 0;
        while (std::getline(in, raw)) {
            ++number;
            if (!raw.empty() && raw.back() == '\r') {
                raw.pop_back();
            }
            std::istringstream ls(raw);
            Line line{number, {}};
            std::string tok;
            while (ls >> tok) {
                line.tokens.push_back(tok);
            }
            if (line.tokens.empty() || line.tokens.front().front() == '#') {
                continue;
            }
            lines_.push_back(std::move(line));
        }
        if (lines_.empty()) {
            throw FormatError("empty document, expected header '" + kind + " " + kVersion + "'", 1);
        }
        const auto& h = lines_.front();
        if (h.tokens.size() != 2 || h.tokens[0] != kind) {
            throw FormatError("expected header '" + kind + " " + kVersion + "'", h.number);
        }
        if (h.tokens[1] != kVersion) {
            throw FormatError("unsupported " + kind + " version " + h.tokens[1], h.number);
        }
        pos_ = 1;
    }

    // Next line, which must start with `key`; returns the remaining tokens.
    std::vector<std::string> expect(const std::string& key) {
        const Line& l = next(key);
        if (l.tokens.front() != key) {
            throw FormatError("expected '" + key + "', found '" + l.tokens.front() + "'", l.number);
        }
        current_ = l.number;
        return {l.tokens.begin() + 1, l.tokens.end()};
    }

    bool peek_is(const std::string& key) const {
        return pos_ < lines_.size() && lines_[pos_].tokens.front() == key;
    }

    void finish() {
        expect("end");
        if (pos_ != lines_.size()) {
            throw FormatError("content after 'end'", lines_[pos_].number);
        }
    }

    [[noreturn]] void fail(const std::string& what) const { throw FormatError(what, current_); }
    int line() const { return current_; }

    long long integer(const std::string& tok) const {
        long long v = 0;
        const auto* end = tok.data() + tok.size();
        const auto r = std::from_chars(tok.data(), end, v);
        if (r.ec != std::errc() || r.ptr != end) {
            fail("expected an integer, found '" + tok + "'");
        }
        return v;
    }

    int small(const std::string& tok) const {
        const long long v = integer(tok);
        if (v < -2147483647LL || v > 2147483647LL) {
            fail("integer out of range: " + tok);
        }
        return static_cast<int>(v);
    }

    std::uint64_t unsigned_integer(const std::string& tok) const {
        std::uint64_t v = 0;
        const auto* end = tok.data() + tok.size();
        const auto r = std::from_chars(tok.data(), end, v);
        if (r.ec != std::errc() || r.ptr != end) {
            fail("expected a non-negative integer, found '" + tok + "'");
        }
        return v;
    }

    LeafStem stem(const std::string& tok) const {
        try {
            return parse_stem(tok);
        } catch (const InputError& e) {
            fail(e.what());
        }
    }

    // "key v" with a single integer value.
    int single(const std::string& key) {
        const auto rest = expect(key);
        if (rest.size() != 1) {
            fail("'" + key + "' takes one value");
        }
        return small(rest[0]);
    }

    std::vector<int> ints(const std::vector<std::string>& toks, std::size_t from = 0) const {
        std::vector<int> out;
        for (std::size_t i = from; i < toks.size(); ++i) {
            out.push_back(small(toks[i]));
        }
        return out;
    }

private:
    const Line& next(const std::string& wanted) {
        if (pos_ >= lines_.size()) {
            throw FormatError("unexpected end of document, expected '" + wanted + "'",
                              lines_.back().number);
        }
        return lines_[pos_++];
    }

    std::vector<Line> lines_;
    std::size_t pos_ = 0;
    int current_ = 1;
};

std::string join_ints(const std::vector<int>& v) {
    std::string out;
    for (std::size_t i = 0; i < v.size(); ++i) {
        out += (i ? " " : "") + std::to_string(v[i]);
    }
    return out;
}

std::string format_optional(const std::optional<int>& v) {
    return v ? std::to_string(*v) : "inf";
}

std::string format_tuple(const StemTuple& tup) {
    std::string out;
    for (std::size_t i = 0; i < tup.size(); ++i) {
        out += (i ? " " : "") + format_stem(tup[i]);
    }
    return out;
}

StemTuple parse_tuple(const Reader& r, const std::vector<std::string>& toks, std::size_t from) {
    StemTuple out;
    for (std::size_t i = from; i < toks.size(); ++i) {
        out.push_back(r.stem(toks[i]));
    }
    return out;
}

template <typename Fn>
auto rethrow_as_format(const Reader& r, Fn&& fn) -> decltype(fn()) {
    try {
        return fn();
    } catch (const FormatError&) {
        throw;
    } catch (const InputError& e) {
        r.fail(e.what());
    }
}

} // namespace

std::string format_stem(const LeafStem& s) {
    std::string out = "(";
    for (std::size_t i = 0; i < s.length(); ++i) {
        out += (i ? "," : "") + std::to_string(s[i]);
    }
    return out + ")";
}

LeafStem parse_stem(const std::string& token) {
    if (token.size() < 2 || token.front() != '(' || token.back() != ')') {
        throw InputError("stem must look like (a,b,...), found '" + token + "'");
    }
    std::vector<int> path;
    const std::string body = token.substr(1, token.size() - 2);
    if (body.empty()) {
        return LeafStem{};
    }
    std::size_t start = 0;
    for (;;) {
        const std::size_t comma = body.find(',', start);
        const std::string part = body.substr(start, comma == std::string::npos ? std::string::npos : comma - start);
        int v = 0;
        const auto r = std::from_chars(part.data(), part.data() + part.size(), v);
        if (part.empty() || r.ec != std::errc() || r.ptr != part.data() + part.size() || v < 0) {
            throw InputError("bad stem coordinate '" + part + "' in '" + token + "'");
        }
        path.push_back(v);
        if (comma == std::string::npos) {
            break;
        }
        start = comma + 1;
    }
    return LeafStem(std::move(path));
}

// ---- template ----

std::string write_template(const Template& t) {
    std::ostringstream out;
    out << "htpl-template " << kVersion << "\n";
    out << "arity " << t.arity() << "\n";
    out << "tail " << (t.tail().kind == TailKind::complete_growing ? "complete_growing" : "repeat_last_complete")
        << " " << t.tail().growth << "\n";
    out << "levels " << t.prefix_depth() << "\n";
    for (int n = 0; n < t.prefix_depth(); ++n) {
        const Level& lv = t.prefix()[static_cast<std::size_t>(n)];
        out << "level " << n << " size " << lv.graph.size() << " f " << lv.f;
        if (lv.graph.is_complete()) {
            out << " complete\n";
            continue;
        }
        const auto edges = lv.graph.uniform_edges();
        out << " edges " << edges.size() << "\n";
        for (const auto& e : edges) {
            out << "edge " << join_ints(e) << "\n";
        }
    }
    out << "end\n";
    return out.str();
}

Template read_template(const std::string& text) {
    Reader r(text, "htpl-template");
    const int arity = r.single("arity");
    const auto tail_toks = r.expect("tail");
    if (tail_toks.size() != 2) {
        r.fail("'tail' takes a kind and a growth");
    }
    TailPolicy tail;
    if (tail_toks[0] == "complete_growing") {
        tail.kind = TailKind::complete_growing;
    } else if (tail_toks[0] == "repeat_last_complete") {
        tail.kind = TailKind::repeat_last_complete;
    } else {
        r.fail("unknown tail kind '" + tail_toks[0] + "'");
    }
    tail.growth = r.small(tail_toks[1]);
    const int count = r.single("levels");
    if (count < 1) {
        r.fail("a template needs at least one level");
    }
    std::vector<Level> levels;
    for (int n = 0; n < count; ++n) {
        const auto toks = r.expect("level");
        if (toks.size() < 6 || r.small(toks[0]) != n || toks[1] != "size" || toks[3] != "f") {
            r.fail("expected 'level " + std::to_string(n) + " size H f F (complete | edges E)'");
        }
        const int size = r.small(toks[2]);
        const int f = r.small(toks[4]);
        if (size < 1) {
            r.fail("level size must be >= 1");
        }
        if (toks[5] == "complete" && toks.size() == 6) {
            levels.push_back({rethrow_as_format(r, [&] { return Hypergraph::complete(arity, size); }), f});
            continue;
        }
        if (toks[5] != "edges" || toks.size() != 7) {
            r.fail("expected 'complete' or 'edges E'");
        }
        const int e = r.small(toks[6]);
        std::vector<Tuple> edges;
        for (int i = 0; i < e; ++i) {
            edges.push_back(r.ints(r.expect("edge")));
        }
        levels.push_back({rethrow_as_format(r, [&] { return Hypergraph(arity, size, edges); }), f});
    }
    r.finish();
    return rethrow_as_format(r, [&] { return Template(arity, std::move(levels), tail); });
}

// ---- model ----

std::string write_model(const FiniteModel& m) {
    std::ostringstream out;
    out << "htpl-model " << kVersion << "\n";
    out << "arity " << m.arity << "\n";
    out << "level " << m.level << "\n";
    out << "elements " << m.size() << "\n";
    for (std::size_t i = 0; i < m.size(); ++i) {
        out << "element " << i << " " << format_stem(m.leaves[i]) << "\n";
    }
    out << "edges " << m.edges.size() << "\n";
    for (const auto& e : m.edges) {
        out << "edge " << join_ints(e) << "\n";
    }
    out << "end\n";
    return out.str();
}

FiniteModel read_model(const std::string& text) {
    Reader r(text, "htpl-model");
    FiniteModel m;
    m.arity = r.single("arity");
    m.level = r.single("level");
    const int count = r.single("elements");
    for (int i = 0; i < count; ++i) {
        const auto toks = r.expect("element");
        if (toks.size() != 2 || r.small(toks[0]) != i) {
            r.fail("expected 'element " + std::to_string(i) + " (stem)'");
        }
        m.leaves.push_back(r.stem(toks[1]));
    }
    const int e = r.single("edges");
    for (int i = 0; i < e; ++i) {
        auto edge = r.ints(r.expect("edge"));
        std::sort(edge.begin(), edge.end());
        m.edges.insert(std::move(edge));
    }
    r.finish();
    return m;
}

// ---- type specs ----

std::string write_typespec(const TypeSpecFile& spec) {
    std::ostringstream out;
    out << "htpl-typespec " << kVersion << "\n";
    out << "arity " << spec.arity << "\n";
    if (spec.kind == TypeSpecFile::Kind::positive) {
        out << "kind positive\n";
        out << "x " << (spec.positive.x_stem ? format_stem(*spec.positive.x_stem) : "none") << "\n";
        out << "tuples " << spec.positive.params.size() << "\n";
        for (const auto& tup : spec.positive.params) {
            out << "tuple " << format_tuple(tup) << "\n";
        }
    } else {
        const auto& q = spec.qf;
        out << "kind qf\n";
        out << "level " << spec.level << "\n";
        out << "x " << format_stem(q.x_leaf) << "\n";
        out << "x_equals " << (q.x_equals ? std::to_string(*q.x_equals) : "none") << "\n";
        out << "params " << q.params.size() << "\n";
        for (std::size_t i = 0; i < q.params.size(); ++i) {
            out << "param " << i << " class " << q.classes[i] << " " << format_stem(q.params[i]) << "\n";
        }
        auto positive = q.positive;
        auto negative = q.negative;
        std::sort(positive.begin(), positive.end());
        std::sort(negative.begin(), negative.end());
        out << "positive " << positive.size() << "\n";
        for (const auto& t : positive) {
            out << "edge " << join_ints(t) << "\n";
        }
        out << "negative " << negative.size() << "\n";
        for (const auto& t : negative) {
            out << "edge " << join_ints(t) << "\n";
        }
    }
    out << "end\n";
    return out.str();
}

TypeSpecFile read_typespec(const std::string& text) {
    Reader r(text, "htpl-typespec");
    TypeSpecFile spec;
    spec.arity = r.single("arity");
    const auto kind = r.expect("kind");
    if (kind.size() != 1 || (kind[0] != "positive" && kind[0] != "qf")) {
        r.fail("kind must be 'positive' or 'qf'");
    }
    if (kind[0] == "positive") {
        spec.kind = TypeSpecFile::Kind::positive;
        const auto x = r.expect("x");
        if (x.size() != 1) {
            r.fail("'x' takes a stem or 'none'");
        }
        if (x[0] != "none") {
            spec.positive.x_stem = r.stem(x[0]);
        }
        const int count = r.single("tuples");
        for (int i = 0; i < count; ++i) {
            const auto toks = r.expect("tuple");
            auto tup = parse_tuple(r, toks, 0);
            if (static_cast<int>(tup.size()) != spec.arity - 1) {
                r.fail("tuples need k-1 stems");
            }
            spec.positive.params.push_back(std::move(tup));
        }
    } else {
        spec.kind = TypeSpecFile::Kind::qf;
        spec.level = r.single("level");
        const auto x = r.expect("x");
        if (x.size() != 1) {
            r.fail("'x' takes a stem");
        }
        spec.qf.x_leaf = r.stem(x[0]);
        const auto xe = r.expect("x_equals");
        if (xe.size() != 1) {
            r.fail("'x_equals' takes an index or 'none'");
        }
        if (xe[0] != "none") {
            spec.qf.x_equals = r.small(xe[0]);
        }
        const int count = r.single("params");
        for (int i = 0; i < count; ++i) {
            const auto toks = r.expect("param");
            if (toks.size() != 4 || r.small(toks[0]) != i || toks[1] != "class") {
                r.fail("expected 'param " + std::to_string(i) + " class C (stem)'");
            }
            spec.qf.classes.push_back(r.small(toks[2]));
            spec.qf.params.push_back(r.stem(toks[3]));
        }
        const int pos = r.single("positive");
        for (int i = 0; i < pos; ++i) {
            spec.qf.positive.push_back(r.ints(r.expect("edge")));
        }
        const int neg = r.single("negative");
        for (int i = 0; i < neg; ++i) {
            spec.qf.negative.push_back(r.ints(r.expect("edge")));
        }
    }
    r.finish();
    return spec;
}

// ---- certificates ----

std::string write_certificate(const OplusCertificate& cert, int arity) {
    std::ostringstream out;
    out << "htpl-certificate " << kVersion << "\n";
    out << "arity " << arity << "\n";
    out << "s " << cert.s << "\n";
    out << "n " << cert.n << "\n";
    out << "agreement " << cert.agreement << "\n";
    out << "failing_level " << cert.b_failing_level << "\n";
    for (const auto& tup : cert.a_family) {
        out << "a " << format_tuple(tup) << "\n";
    }
    for (const auto& tup : cert.b_family) {
        out << "b " << format_tuple(tup) << "\n";
    }
    out << "end\n";
    return out.str();
}

OplusCertificate read_certificate(const std::string& text) {
    Reader r(text, "htpl-certificate");
    OplusCertificate cert;
    const int arity = r.single("arity");
    cert.s = r.single("s");
    if (cert.s < 1) {
        r.fail("s must be >= 1");
    }
    auto one = [&](const char* key) {
        const auto toks = r.expect(key);
        if (toks.size() != 1) {
            r.fail(std::string("'") + key + "' takes one value");
        }
        return r.unsigned_integer(toks[0]);
    };
    cert.n = one("n");
    cert.agreement = one("agreement");
    cert.b_failing_level = r.single("failing_level");
    for (const char* key : {"a", "b"}) {
        for (int i = 0; i < cert.s; ++i) {
            auto tup = parse_tuple(r, r.expect(key), 0);
            if (static_cast<int>(tup.size()) != arity - 1) {
                r.fail("certificate tuples need k-1 stems");
            }
            (key[0] == 'a' ? cert.a_family : cert.b_family).push_back(std::move(tup));
        }
    }
    r.finish();
    return cert;
}

// ---- scenarios ----

std::string write_scenario(const Scenario& sc, const std::string& template_ref) {
    std::ostringstream out;
    out << "htpl-scenario " << kVersion << "\n";
    out << "template " << template_ref << "\n";
    out << "depths " << join_ints(sc.depths) << "\n";
    out << "instances " << sc.instances.size() << "\n";
    for (std::size_t a = 0; a < sc.instances.size(); ++a) {
        const auto& inst = sc.instances[a];
        out << "instance " << a << " " << format_tuple(inst.limit) << "\n";
        for (std::size_t t = 0; t < inst.per_index.size(); ++t) {
            out << "approx " << t << " " << format_tuple(inst.per_index[t]) << "\n";
        }
    }
    out << "end\n";
    return out.str();
}

namespace {

ScenarioFile parse_scenario_body(Reader& r, const Template* given, const std::filesystem::path* base) {
    const auto ref = r.expect("template");
    if (ref.size() != 1) {
        r.fail("'template' takes one path without spaces");
    }
    const int ref_line = r.line();
    std::optional<Template> loaded;
    if (!given) {
        std::filesystem::path p = ref[0];
        if (p.is_relative()) {
            p = *base / p;
        }
        try {
            loaded = read_template(read_file(p));
        } catch (const InputError& e) {
            throw FormatError(std::string("template reference: ") + e.what(), ref_line);
        }
    }
    ScenarioFile file{Scenario{given ? *given : *loaded, {}, {}}, ref[0]};
    auto& sc = file.scenario;
    sc.depths = r.ints(r.expect("depths"));
    if (sc.depths.empty()) {
        r.fail("'depths' needs at least one index");
    }
    const int count = r.single("instances");
    for (int a = 0; a < count; ++a) {
        const auto toks = r.expect("instance");
        if (toks.empty() || r.small(toks[0]) != a) {
            r.fail("expected 'instance " + std::to_string(a) + " stems...'");
        }
        Instance inst;
        inst.limit = parse_tuple(r, toks, 1);
        for (std::size_t t = 0; t < sc.depths.size(); ++t) {
            const auto at = r.expect("approx");
            if (at.empty() || r.small(at[0]) != static_cast<int>(t)) {
                r.fail("expected 'approx " + std::to_string(t) + " stems...'");
            }
            inst.per_index.push_back(parse_tuple(r, at, 1));
        }
        sc.instances.push_back(std::move(inst));
    }
    r.finish();
    return file;
}

} // namespace

ScenarioFile read_scenario(const std::string& text, const std::filesystem::path& base_dir) {
    Reader r(text, "htpl-scenario");
    return parse_scenario_body(r, nullptr, &base_dir);
}

ScenarioFile read_scenario(const std::string& text, const Template& tmpl) {
    Reader r(text, "htpl-scenario");
    return parse_scenario_body(r, &tmpl, nullptr);
}

// ---- realization ----

std::string write_realization(const Distribution& dist, const RealizationReport* report) {
    std::ostringstream out;
    out << "htpl-realization " << kVersion << "\n";
    out << "feasible " << (dist.feasible ? 1 : 0) << "\n";
    out << "strict " << (dist.strict ? 1 : 0) << "\n";
    out << "bounds";
    for (const auto& b : dist.bound) {
        out << " " << format_optional(b);
    }
    out << "\n";
    out << "unplaced " << dist.unplaced << "\n";
    out << "instances " << dist.d.size() << "\n";
    for (std::size_t a = 0; a < dist.d.size(); ++a) {
        out << "d " << a << (dist.d[a].empty() ? "" : " ") << join_ints(dist.d[a]) << "\n";
    }
    if (report) {
        out << "indices " << report->per_index.size() << "\n";
        for (const auto& r : report->per_index) {
            out << "index " << r.index << " consistent " << (r.consistent ? 1 : 0) << " failing "
                << r.failing_level << " witness " << format_stem(r.witness) << " assigned"
                << (r.assigned.empty() ? "" : " ") << join_ints(r.assigned) << "\n";
        }
        out << "failures " << report->failures << "\n";
    } else {
        out << "indices 0\n";
        out << "failures 0\n";
    }
    out << "end\n";
    return out.str();
}

RealizationFile read_realization(const std::string& text) {
    Reader r(text, "htpl-realization");
    RealizationFile file;
    auto& dist = file.dist;
    dist.feasible = r.single("feasible") != 0;
    dist.strict = r.single("strict") != 0;
    for (const auto& tok : r.expect("bounds")) {
        dist.bound.push_back(tok == "inf" ? std::nullopt : std::optional<int>(r.small(tok)));
    }
    dist.unplaced = r.single("unplaced");
    const int count = r.single("instances");
    for (int a = 0; a < count; ++a) {
        const auto toks = r.expect("d");
        if (toks.empty() || r.small(toks[0]) != a) {
            r.fail("expected 'd " + std::to_string(a) + " indices...'");
        }
        dist.d.push_back(r.ints(toks, 1));
    }
    dist.U.assign(dist.bound.size(), {});
    for (int a = 0; a < count; ++a) {
        for (int t : dist.d[static_cast<std::size_t>(a)]) {
            if (t < 0 || t >= static_cast<int>(dist.U.size())) {
                r.fail("distribution index out of range");
            }
            dist.U[static_cast<std::size_t>(t)].push_back(a);
        }
    }
    const int indices = r.single("indices");
    for (int i = 0; i < indices; ++i) {
        const auto toks = r.expect("index");
        if (toks.size() < 8 || toks[1] != "consistent" || toks[3] != "failing" ||
            toks[5] != "witness" || toks[7] != "assigned") {
            r.fail("expected 'index t consistent c failing l witness (stem) assigned ...'");
        }
        IndexRealization ir;
        ir.index = r.small(toks[0]);
        ir.consistent = r.small(toks[2]) != 0;
        ir.failing_level = r.small(toks[4]);
        ir.witness = r.stem(toks[6]);
        ir.assigned = r.ints(toks, 8);
        file.report.per_index.push_back(std::move(ir));
    }
    file.report.failures = r.single("failures");
    r.finish();
    return file;
}

std::string read_file(const std::filesystem::path& path) {
    std::ifstream in(path, std::ios::binary);
    if (!in) {
        throw InputError("cannot open " + path.string());
    }
    std::ostringstream ss;
    ss << in.rdbuf();
    return ss.str();
}

std::string document_kind(const std::string& text) {
    std::istringstream in(text);
    std::string line;
    while (std::getline(in, line)) {
        std::istringstream ls(line);
        std::string tok;
        if (ls >> tok && tok.front() != '#') {
            return tok;
        }
    }
    return "";
}

} // namespace htpl
