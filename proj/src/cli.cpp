#include "htpl/cli.hpp"

#include <CLI11.hpp>

#include <algorithm>
#include <filesystem>
#include <fstream>
#include <optional>
#include <sstream>

#include "brute_force.hpp"
#include "htpl/errors.hpp"
#include "htpl/io.hpp"
#include "htpl/parallel.hpp"
#include "htpl/satsim.hpp"
#include "htpl/signature.hpp"
#include "htpl/theory.hpp"
#include "htpl/typecheck.hpp"

namespace htpl {

namespace {

namespace fs = std::filesystem;

struct Common {
    std::uint64_t seed = 0;
    int depth = -1;
    std::uint64_t trials = 0;
    std::uint64_t budget = 0;
    int workers = 1;
    std::string out;
};

class Report {
public:
    Report(const std::string& verb, std::uint64_t seed) {
        head_ << "htpl-report 1\nverb " << verb << "\nseed " << seed << "\n";
    }

    template <typename T>
    void add(const std::string& key, const T& value) {
        body_ << key << " " << value << "\n";
    }
    void line(const std::string& text) { body_ << text << "\n"; }

    std::string finish(const std::string& result) const {
        return head_.str() + body_.str() + "result " + result + "\n";
    }

private:
    std::ostringstream head_;
    std::ostringstream body_;
};

struct Io {
    std::ostream& out;
    std::ostream& err;
};

void write_text(const fs::path& path, const std::string& text) {
    std::ofstream f(path, std::ios::binary);
    if (!f || !(f << text)) {
        throw InputError("cannot write " + path.string());
    }
}

// Artifact verbs: with --out the artifact goes to the file and the report to
// stdout; without it the artifact goes to stdout and the report to stderr.
void emit_artifact(Io io, const Common& c, const std::string& report, const std::string& artifact) {
    if (c.out.empty()) {
        io.out << artifact;
        io.err << report;
    } else {
        write_text(c.out, artifact);
        io.out << report;
    }
}

std::string join(const std::vector<int>& v, const char* sep = " ") {
    std::string s;
    for (std::size_t i = 0; i < v.size(); ++i) {
        s += (i ? sep : "") + std::to_string(v[i]);
    }
    return s;
}

std::string tuple_text(const Tuple& t) { return join(t, ","); }

std::string stems_text(const StemTuple& tup) {
    std::string s;
    for (std::size_t i = 0; i < tup.size(); ++i) {
        s += (i ? " " : "") + format_stem(tup[i]);
    }
    return s;
}

Template load_template(const std::string& path) { return read_template(read_file(path)); }

FiniteModel load_model(const std::string& path) { return read_model(read_file(path)); }

void add_common(CLI::App* sub, Common& c, bool with_out = true) {
    sub->add_option("--seed", c.seed, "Random seed");
    sub->add_option("--depth", c.depth, "Depth (verb specific)");
    sub->add_option("--trials", c.trials, "Trial count");
    sub->add_option("--budget", c.budget, "Search or element budget");
    sub->add_option("--workers", c.workers, "Worker threads")->check(CLI::Range(1, 256));
    if (with_out) {
        sub->add_option("--out", c.out, "Output file");
    }
}

// ---- verbs ----

struct GenArgs {
    int arity = 3;
    std::vector<int> sizes;
    std::vector<int> target;
    double edge_prob = 0.9;
    int retries = 32;
    std::string tail = "complete_growing";
    int growth = 1;
    bool complete = false;
};

int gen_template(Io io, const Common& c, const GenArgs& a) {
    TailPolicy tail;
    if (a.tail == "complete_growing") {
        tail.kind = TailKind::complete_growing;
    } else if (a.tail == "repeat_last_complete") {
        tail.kind = TailKind::repeat_last_complete;
    } else {
        throw InputError("unknown tail kind '" + a.tail + "'");
    }
    tail.growth = a.growth;
    std::optional<Template> t;
    if (a.complete) {
        t = complete_template(a.arity, c.depth < 0 ? 4 : c.depth, 1, a.growth);
    } else {
        if (a.sizes.empty()) {
            throw InputError("--sizes is required unless --complete is given");
        }
        std::vector<int> target = a.target;
        if (target.empty()) {
            target.assign(a.sizes.size(), 1);
        }
        RandomTemplateOptions opt;
        opt.retry_budget = a.retries;
        opt.tail = tail;
        t = random_template(a.arity, a.sizes, a.edge_prob, target, c.seed, opt);
    }
    Report r("gen-template", c.seed);
    r.add("arity", t->arity());
    r.add("levels", t->prefix_depth());
    std::vector<int> f;
    for (int n = 0; n < t->prefix_depth(); ++n) {
        f.push_back(t->f(n));
    }
    r.add("f", join(f));
    emit_artifact(io, c, r.finish("ok"), write_template(*t));
    return kExitOk;
}

int validate_template(Io io, const Common& c, const std::string& path) {
    const Template t = load_template(path);
    ExtensionOptions opt;
    opt.seed = c.seed;
    if (c.budget > 0) {
        opt.node_budget = c.budget;
    }
    if (c.trials > 0) {
        opt.sample_trials = c.trials;
    }
    const int depth = c.depth < 0 ? t.prefix_depth() : c.depth;
    const auto rep = validate(t, depth, opt);
    Report r("validate-template", c.seed);
    r.add("depth", rep.depth);
    r.add("exhaustive", rep.exhaustive ? 1 : 0);
    r.add("issues", rep.issues.size());
    for (const auto& is : rep.issues) {
        std::string cx;
        for (const auto& tup : is.counterexample) {
            cx += " " + tuple_text(tup);
        }
        r.line("issue level " + std::to_string(is.level) + " condition " + to_string(is.condition) +
               " detail " + is.detail + (cx.empty() ? "" : " tuples" + cx));
    }
    std::string result = "valid";
    int code = kExitOk;
    if (!rep.valid) {
        result = "invalid";
        code = kExitNegative;
    } else if (!rep.exhaustive) {
        result = "budget-exhausted";
        code = kExitBudget;
    }
    io.out << r.finish(result);
    return code;
}

void check_arity(const Template& t, int arity, const char* what) {
    if (arity != t.arity()) {
        throw InputError(std::string(what) + " arity " + std::to_string(arity) +
                         " does not match template arity " + std::to_string(t.arity()));
    }
}

int decide_type(Io io, const Common& c, const std::string& tpath, const std::string& spath, bool limit) {
    const Template t = load_template(tpath);
    const std::string text = read_file(spath);
    Report r("decide-type", c.seed);
    if (document_kind(text) == "htpl-certificate") {
        const auto cert = read_certificate(text);
        r.add("kind", "certificate");
        r.add("s", cert.s);
        r.add("n", cert.n);
        const bool ok = verify_certificate(t, cert);
        io.out << r.finish(ok ? "replays" : "does-not-replay");
        return ok ? kExitOk : kExitNegative;
    }
    const auto spec = read_typespec(text);
    check_arity(t, spec.arity, "type spec");
    if (spec.kind == TypeSpecFile::Kind::positive) {
        const int depth = c.depth < 0 ? required_check_depth(t, spec.positive) : c.depth;
        const auto d = decide_positive_type(t, spec.positive, depth);
        r.add("kind", "positive");
        r.add("depth", d.depth);
        r.add("consistent", d.consistent ? 1 : 0);
        r.add("failing_level", d.failing_level);
        if (d.consistent) {
            r.add("witness", format_stem(d.witness));
        }
        io.out << r.finish(d.consistent ? "consistent" : "inconsistent");
        return d.consistent ? kExitOk : kExitNegative;
    }
    const bool ok = decide_qf_formula(t, spec.level, spec.qf, limit);
    r.add("kind", "qf");
    r.add("level", spec.level);
    r.add("limit_theory", limit ? 1 : 0);
    r.add("consistent", ok ? 1 : 0);
    io.out << r.finish(ok ? "consistent" : "inconsistent");
    return ok ? kExitOk : kExitNegative;
}

void add_violations(Report& r, const ViolationReport& v) {
    r.add("violations", v.violations.size());
    for (const auto& x : v.violations) {
        r.line("violation " + to_string(x.kind) + " element " + std::to_string(x.element) + " edge " +
               (x.edge.empty() ? "-" : tuple_text(x.edge)) + " level " + std::to_string(x.level));
    }
}

int check_model_verb(Io io, const Common& c, const std::string& tpath, const std::string& mpath) {
    const Template t = load_template(tpath);
    const FiniteModel m = load_model(mpath);
    const auto v = check_model(t, m);
    Report r("check-model", c.seed);
    r.add("level", m.level);
    r.add("elements", m.size());
    r.add("edges", m.edges.size());
    add_violations(r, v);
    io.out << r.finish(v.ok() ? "ok" : "violations");
    return v.ok() ? kExitOk : kExitNegative;
}

struct BuildArgs {
    int level = 1;
    int count = 1;
    double edge_prob = 0.5;
};

int build_model_verb(Io io, const Common& c, const std::string& tpath, const BuildArgs& a) {
    const Template t = load_template(tpath);
    const auto m = build_random_model(t, a.level, a.count, a.edge_prob, c.seed);
    Report r("build-model", c.seed);
    r.add("level", m.level);
    r.add("elements", m.size());
    r.add("edges", m.edges.size());
    emit_artifact(io, c, r.finish("ok"), write_model(m));
    return kExitOk;
}

int close_model_verb(Io io, const Common& c, const std::string& tpath, const std::string& mpath, int s) {
    const Template t = load_template(tpath);
    const FiniteModel m = load_model(mpath);
    const auto rep = close_existentially(t, m, s, c.budget == 0 ? 1000 : c.budget, c.seed);
    Report r("close-model", c.seed);
    r.add("params", s);
    r.add("added", rep.added);
    r.add("passes", rep.passes);
    r.add("elements", rep.model.size());
    r.add("edges", rep.model.edges.size());
    r.add("fixpoint", rep.fixpoint ? 1 : 0);
    emit_artifact(io, c, r.finish(rep.fixpoint ? "fixpoint" : "budget-exhausted"), write_model(rep.model));
    return rep.fixpoint ? kExitOk : kExitBudget;
}

int amalgamate_verb(Io io, const Common& c, const std::string& tpath, const std::vector<std::string>& models,
                    const std::vector<int>& emb1, const std::vector<int>& emb2) {
    const Template t = load_template(tpath);
    const auto m0 = load_model(models[0]);
    const auto m1 = load_model(models[1]);
    const auto m2 = load_model(models[2]);
    const auto u = amalgamate(t, m0.level, m0, m1, m2, emb1, emb2);
    const auto v = check_model(t, u);
    Report r("amalgamate", c.seed);
    r.add("level", u.level);
    r.add("elements", u.size());
    r.add("edges", u.edges.size());
    add_violations(r, v);
    emit_artifact(io, c, r.finish(v.ok() ? "ok" : "violations"), write_model(u));
    return v.ok() ? kExitOk : kExitNegative;
}

int qe_transfer(Io io, const Common& c, const std::string& tpath, int m) {
    const Template t = load_template(tpath);
    const auto rep = transfer_check(t, m, c.trials == 0 ? 1000 : c.trials, c.seed, c.workers);
    Report r("qe-transfer", c.seed);
    r.add("m", rep.m);
    r.add("m_star", rep.m_star);
    r.add("trials", rep.trials);
    r.add("consistent_trials", rep.consistent_trials);
    r.add("extensions_checked", rep.extensions_checked);
    r.add("counterexamples", rep.counterexamples.size());
    for (std::size_t i = 0; i < rep.counterexamples.size() && i < 5; ++i) {
        const auto& cx = rep.counterexamples[i];
        std::string params;
        for (const auto& p : cx.formula.params) {
            params += " " + format_stem(p);
        }
        std::string ext;
        for (const auto& p : cx.extended_params) {
            ext += " " + format_stem(p);
        }
        std::string pos;
        for (const auto& tup : cx.formula.positive) {
            pos += " " + tuple_text(tup);
        }
        r.line("counterexample trial " + std::to_string(cx.trial) + " x " + format_stem(cx.formula.x_leaf) +
               " params" + params + " positive" + (pos.empty() ? " -" : pos) + " extended" + ext +
               " at_m_star " + std::to_string(cx.consistent_at_m_star) + " at_next " +
               std::to_string(cx.consistent_at_next));
    }
    const bool ok = rep.counterexamples.empty();
    io.out << r.finish(ok ? "holds" : "counterexample");
    return ok ? kExitOk : kExitNegative;
}

int signature_verb(Io io, const Common& c, const std::string& tpath, const std::vector<std::string>& stems,
                   std::vector<int> classes, bool predicates) {
    const Template t = load_template(tpath);
    const int depth = c.depth < 0 ? 8 : c.depth;
    Report r("signature", c.seed);
    r.add("depth", depth);
    if (predicates) {
        const auto preds = predicate_enumeration(t, depth);
        r.add("predicates", preds.size());
        for (std::size_t i = 0; i < preds.size(); ++i) {
            r.line("psi " + std::to_string(i + 1) + " " + format_stem(preds[i]));
        }
        io.out << r.finish("ok");
        return kExitOk;
    }
    ParamType p;
    for (const auto& s : stems) {
        p.stems.push_back(parse_stem(s));
    }
    if (classes.empty()) {
        p = distinct_params(p.stems);
    } else {
        p.classes = std::move(classes);
    }
    const auto sig = f_signature(t, p, depth);
    std::vector<int> values(sig.values.begin(), sig.values.end());
    r.add("equality_code", values.empty() ? -1 : values[0]);
    r.add("values", join(values));
    io.out << r.finish("ok");
    return kExitOk;
}

struct SearchArgs {
    int stem_depth = 2;
    int alphabet = 3;
};

SearchBudget make_budget(const Common& c, const SearchArgs& a) {
    SearchBudget b;
    b.stem_depth = a.stem_depth;
    b.alphabet = a.alphabet;
    if (c.budget > 0) {
        b.max_nodes = c.budget;
    }
    b.workers = c.workers;
    return b;
}

std::string certificate_line(const OplusCertificate& cert) {
    std::string s = "certificate s " + std::to_string(cert.s) + " n " + std::to_string(cert.n) + " agreement " +
                    std::to_string(cert.agreement) + " failing_level " + std::to_string(cert.b_failing_level);
    for (const auto& tup : cert.a_family) {
        s += " a " + stems_text(tup);
    }
    for (const auto& tup : cert.b_family) {
        s += " b " + stems_text(tup);
    }
    return s;
}

int estimate_fg(Io io, const Common& c, const std::string& tpath, int s_max, int n_max, const SearchArgs& a) {
    const Template t = load_template(tpath);
    const auto budget = make_budget(c, a);
    Report r("estimate-fg", c.seed);
    bool exhausted = false;
    for (int s = 1; s <= s_max; ++s) {
        const auto f = F_estimate(t, s, budget);
        exhausted = exhausted || f.exhausted;
        r.line("F " + std::to_string(s) + " value " + std::to_string(f.value) + " analytic " +
               std::to_string(f.analytic ? 1 : 0) + " analytic_bound " + std::to_string(f.analytic_bound) +
               " certificates " + std::to_string(f.certificates.size()) + " exhausted " +
               std::to_string(f.exhausted ? 1 : 0));
        for (const auto& cert : f.certificates) {
            r.line(certificate_line(cert));
        }
    }
    for (int n = 0; n <= n_max; ++n) {
        const auto g = G_estimate(t, static_cast<std::uint64_t>(n), s_max, budget);
        exhausted = exhausted || g.exhausted;
        r.line("G " + std::to_string(n) + " value " + (g.infinite ? std::string("inf") : std::to_string(g.value)) +
               " analytic_lower " + (g.infinite ? std::string("inf") : std::to_string(g.analytic_lower)) +
               " certified " + std::to_string(g.certificate ? 1 : 0) + " exhausted " +
               std::to_string(g.exhausted ? 1 : 0));
    }
    io.out << r.finish(exhausted ? "budget-exhausted" : "ok");
    return exhausted ? kExitBudget : kExitOk;
}

int oplus_verb(Io io, const Common& c, const std::string& tpath, int s, std::uint64_t n, const SearchArgs& a) {
    const Template t = load_template(tpath);
    const auto res = oplus_test(t, s, n, make_budget(c, a));
    Report r("oplus", c.seed);
    r.add("s", s);
    r.add("n", n);
    r.add("nodes", res.nodes);
    std::string result = "holds-up-to-budget";
    int code = kExitOk;
    if (res.status == OplusStatus::counterexample) {
        r.line(certificate_line(*res.certificate));
        result = "counterexample";
        code = kExitNegative;
        if (!c.out.empty()) {
            write_text(c.out, write_certificate(*res.certificate, t.arity()));
        }
    } else if (res.status == OplusStatus::budget_exhausted) {
        result = "budget-exhausted";
        code = kExitBudget;
    }
    io.out << r.finish(result);
    return code;
}

struct SatArgs {
    bool strict = false;
    int indices = 6;
    int instances = 4;
    int min_depth = 2;
    int max_depth = 8;
    double perturb = 0.5;
    std::string save_scenario;
};

int simulate_saturation(Io io, const Common& c, const std::string& input, const SatArgs& a) {
    const std::string text = read_file(input);
    std::optional<Scenario> sc;
    if (document_kind(text) == "htpl-scenario") {
        sc = read_scenario(text, fs::path(input).parent_path()).scenario;
    } else {
        ScenarioOptions opt;
        opt.index_count = a.indices;
        opt.instance_count = a.instances;
        opt.min_depth = a.min_depth;
        opt.max_depth = c.depth >= 0 ? c.depth : a.max_depth;
        opt.perturb_prob = a.perturb;
        sc = random_scenario(read_template(text), c.seed, opt);
        if (!a.save_scenario.empty()) {
            const fs::path dir = fs::absolute(fs::path(a.save_scenario)).parent_path();
            const auto ref = fs::relative(fs::absolute(input), dir).generic_string();
            write_text(a.save_scenario, write_scenario(*sc, ref));
        }
    }
    check_scenario(*sc);
    const int max_depth = *std::max_element(sc->depths.begin(), sc->depths.end());
    const GTable g = g_table_analytic(sc->tmpl, max_depth + 1);
    DistributionOptions dopt;
    dopt.strict = a.strict;
    const auto dist = build_distribution(*sc, g, c.seed, dopt);

    Report r("simulate-saturation", c.seed);
    r.add("indices", sc->index_count());
    r.add("instances", sc->instance_count());
    r.add("strict", a.strict ? 1 : 0);
    std::string bounds;
    for (const auto& b : dist.bound) {
        bounds += " " + (b ? std::to_string(*b) : std::string("inf"));
    }
    r.line("bounds" + bounds);
    r.add("feasible", dist.feasible ? 1 : 0);
    if (!dist.feasible) {
        r.add("diagnostic", dist.diagnostic);
        if (!c.out.empty()) {
            write_text(c.out, write_realization(dist, nullptr));
        }
        io.out << r.finish("infeasible");
        return kExitNegative;
    }
    const auto rep = verify_realization(*sc, dist, c.workers);
    for (const auto& ix : rep.per_index) {
        r.line("index " + std::to_string(ix.index) + " assigned " + (ix.assigned.empty() ? "-" : join(ix.assigned, ",")) +
               " consistent " + std::to_string(ix.consistent ? 1 : 0) +
               (ix.consistent ? " witness " + format_stem(ix.witness)
                              : " failing_level " + std::to_string(ix.failing_level)));
    }
    r.add("failures", rep.failures);
    if (!c.out.empty()) {
        write_text(c.out, write_realization(dist, &rep));
    }
    io.out << r.finish(rep.failures == 0 ? "realized" : "failures");
    return rep.failures == 0 ? kExitOk : kExitNegative;
}

int oracle_verb(Io io, const Common& c, const std::vector<std::string>& files) {
    Report r("oracle", c.seed);
    if (files.size() == 2) {
        const Template t = load_template(files[0]);
        const auto spec = read_typespec(read_file(files[1]));
        check_arity(t, spec.arity, "type spec");
        bool agree = false;
        if (spec.kind == TypeSpecFile::Kind::positive) {
            const int depth = c.depth < 0 ? required_check_depth(t, spec.positive) : c.depth;
            const auto d = decide_positive_type(t, spec.positive, depth);
            const auto o = oracle::positive_type(t, spec.positive, d.depth);
            r.add("oracle_consistent", o.consistent ? 1 : 0);
            r.add("decision_consistent", d.consistent ? 1 : 0);
            agree = o.consistent == d.consistent && (!o.consistent || o.witness == d.witness);
        } else {
            const bool o = oracle::qf_formula(t, spec.level, spec.qf);
            const bool d = decide_qf_formula(t, spec.level, spec.qf, false);
            r.add("oracle_consistent", o ? 1 : 0);
            r.add("decision_consistent", d ? 1 : 0);
            agree = o == d;
        }
        io.out << r.finish(agree ? "agree" : "disagree");
        return agree ? kExitOk : kExitNegative;
    }
    if (!files.empty()) {
        throw InputError("oracle takes either no files or TEMPLATE SPEC");
    }
    const std::uint64_t trials = c.trials == 0 ? 500 : c.trials;
    std::vector<int> verdict(trials, 0);  // 0 agree, 1 disagree
    std::vector<int> consistent(trials, 0);
    parallel_for(trials, c.workers, [&](std::size_t i) {
        const Template t = oracle::tiny_template(splitmix64(c.seed + i));
        Rng rng = derived_rng(c.seed, i);
        const auto spec = oracle::tiny_spec(t, rng);
        const auto d = decide_positive_type(t, spec);
        const auto o = oracle::positive_type(t, spec, d.depth);
        consistent[i] = d.consistent ? 1 : 0;
        verdict[i] = (o.consistent == d.consistent && (!o.consistent || o.witness == d.witness)) ? 0 : 1;
    });
    std::uint64_t bad = 0;
    std::uint64_t yes = 0;
    for (std::size_t i = 0; i < trials; ++i) {
        bad += verdict[i];
        yes += consistent[i];
        if (verdict[i]) {
            r.line("disagreement trial " + std::to_string(i));
        }
    }
    r.add("trials", trials);
    r.add("consistent", yes);
    r.add("disagreements", bad);
    io.out << r.finish(bad == 0 ? "agree" : "disagree");
    return bad == 0 ? kExitOk : kExitNegative;
}

std::vector<char*> to_argv(std::vector<std::string>& storage) {
    std::vector<char*> argv;
    for (auto& s : storage) {
        argv.push_back(s.data());
    }
    return argv;
}

} // namespace

int run_cli(const std::vector<std::string>& args, std::ostream& out, std::ostream& err) {
    CLI::App app{"Hypergraph template workbench", "htpl"};
    app.require_subcommand(1);
    Common c;
    Io io{out, err};

    GenArgs gen;
    auto* gen_cmd = app.add_subcommand("gen-template", "Generate a random or complete template");
    add_common(gen_cmd, c);
    gen_cmd->add_option("--arity", gen.arity, "Arity k");
    gen_cmd->add_option("--sizes", gen.sizes, "Level sizes")->delimiter(',');
    gen_cmd->add_option("--target-f", gen.target, "Target f per level")->delimiter(',');
    gen_cmd->add_option("--edge-prob", gen.edge_prob, "Edge probability");
    gen_cmd->add_option("--retries", gen.retries, "Resampling attempts per level");
    gen_cmd->add_option("--tail", gen.tail, "complete_growing or repeat_last_complete");
    gen_cmd->add_option("--growth", gen.growth, "Tail growth");
    gen_cmd->add_flag("--complete", gen.complete, "Complete template of --depth stored levels");

    std::string tpath;
    std::string spath;
    std::string mpath;

    auto* val_cmd = app.add_subcommand("validate-template", "Check the template axioms");
    add_common(val_cmd, c);
    val_cmd->add_option("template", tpath)->required();

    bool limit = false;
    auto* dec_cmd = app.add_subcommand("decide-type", "Decide a type spec or replay a certificate");
    add_common(dec_cmd, c);
    dec_cmd->add_option("template", tpath)->required();
    dec_cmd->add_option("spec", spath)->required();
    dec_cmd->add_flag("--limit", limit, "Decide qf specs against the limit theory");

    auto* chk_cmd = app.add_subcommand("check-model", "Check a finite model");
    add_common(chk_cmd, c);
    chk_cmd->add_option("template", tpath)->required();
    chk_cmd->add_option("model", mpath)->required();

    BuildArgs build;
    auto* bld_cmd = app.add_subcommand("build-model", "Build a random finite model");
    add_common(bld_cmd, c);
    bld_cmd->add_option("template", tpath)->required();
    bld_cmd->add_option("--level", build.level, "Level m");
    bld_cmd->add_option("--count", build.count, "Elements per leaf");
    bld_cmd->add_option("--edge-prob", build.edge_prob, "Probability for allowed edges");

    int params = 1;
    auto* cls_cmd = app.add_subcommand("close-model", "Bounded existential closure");
    add_common(cls_cmd, c);
    cls_cmd->add_option("template", tpath)->required();
    cls_cmd->add_option("model", mpath)->required();
    cls_cmd->add_option("--params", params, "Parameter bound s");

    std::vector<std::string> models;
    std::vector<int> emb1;
    std::vector<int> emb2;
    auto* amg_cmd = app.add_subcommand("amalgamate", "Amalgamate M1 and M2 over M0");
    add_common(amg_cmd, c);
    amg_cmd->add_option("template", tpath)->required();
    amg_cmd->add_option("models", models, "M0 M1 M2")->expected(3)->required();
    amg_cmd->add_option("--emb1", emb1, "Image of M0 in M1")->delimiter(',');
    amg_cmd->add_option("--emb2", emb2, "Image of M0 in M2")->delimiter(',');

    int qe_m = 2;
    auto* qe_cmd = app.add_subcommand("qe-transfer", "Level transfer check");
    add_common(qe_cmd, c);
    qe_cmd->add_option("template", tpath)->required();
    qe_cmd->add_option("--m", qe_m, "Formula size bound m");

    std::vector<std::string> stems;
    std::vector<int> classes;
    bool predicates = false;
    auto* sig_cmd = app.add_subcommand("signature", "Signature function of a parameter type");
    add_common(sig_cmd, c);
    sig_cmd->add_option("template", tpath)->required();
    sig_cmd->add_option("--stem", stems, "Stem of one variable, e.g. (0,1); repeat k-1 times");
    sig_cmd->add_option("--classes", classes, "Equality classes")->delimiter(',');
    sig_cmd->add_flag("--predicates", predicates, "List the predicate enumeration instead");

    SearchArgs search;
    int s_max = 3;
    int n_max = 4;
    auto* fg_cmd = app.add_subcommand("estimate-fg", "Estimate F and G");
    add_common(fg_cmd, c);
    fg_cmd->add_option("template", tpath)->required();
    fg_cmd->add_option("--s-max", s_max, "Largest s");
    fg_cmd->add_option("--n-max", n_max, "Largest n");
    fg_cmd->add_option("--stem-depth", search.stem_depth, "Stem length in the search");
    fg_cmd->add_option("--alphabet", search.alphabet, "Coordinate bound in the search");

    int op_s = 1;
    std::uint64_t op_n = 0;
    auto* op_cmd = app.add_subcommand("oplus", "Search for a counterexample to oplus(s,n)");
    add_common(op_cmd, c);
    op_cmd->add_option("template", tpath)->required();
    op_cmd->add_option("--s", op_s, "Instance count s");
    op_cmd->add_option("--n", op_n, "Signature agreement n");
    op_cmd->add_option("--stem-depth", search.stem_depth, "Stem length in the search");
    op_cmd->add_option("--alphabet", search.alphabet, "Coordinate bound in the search");

    SatArgs sat;
    std::string input;
    auto* sat_cmd = app.add_subcommand("simulate-saturation", "Saturation surrogate on a scenario");
    add_common(sat_cmd, c);
    sat_cmd->add_option("input", input, "Scenario file, or a template to draw one from")->required();
    sat_cmd->add_flag("--strict", sat.strict, "Use min - 1 for the per-index bound");
    sat_cmd->add_option("--indices", sat.indices, "Index count for drawn scenarios");
    sat_cmd->add_option("--instances", sat.instances, "Instance count for drawn scenarios");
    sat_cmd->add_option("--min-depth", sat.min_depth, "Least index depth for drawn scenarios");
    sat_cmd->add_option("--perturb", sat.perturb, "Perturbation probability for drawn scenarios");
    sat_cmd->add_option("--save-scenario", sat.save_scenario, "Write the drawn scenario here");

    std::vector<std::string> oracle_files;
    auto* orc_cmd = app.add_subcommand("oracle", "Brute-force cross-check");
    add_common(orc_cmd, c);
    orc_cmd->add_option("files", oracle_files, "TEMPLATE SPEC (optional)");

    std::vector<std::string> storage{"htpl"};
    storage.insert(storage.end(), args.begin(), args.end());
    auto argv = to_argv(storage);
    try {
        app.parse(static_cast<int>(argv.size()), argv.data());
    } catch (const CLI::CallForHelp&) {
        out << app.help();
        return kExitOk;
    } catch (const CLI::CallForAllHelp&) {
        out << app.help("", CLI::AppFormatMode::All);
        return kExitOk;
    } catch (const CLI::ParseError& e) {
        err << "error: " << e.what() << "\n";
        return kExitInputError;
    }

    try {
        if (*gen_cmd) return gen_template(io, c, gen);
        if (*val_cmd) return validate_template(io, c, tpath);
        if (*dec_cmd) return decide_type(io, c, tpath, spath, limit);
        if (*chk_cmd) return check_model_verb(io, c, tpath, mpath);
        if (*bld_cmd) return build_model_verb(io, c, tpath, build);
        if (*cls_cmd) return close_model_verb(io, c, tpath, mpath, params);
        if (*amg_cmd) return amalgamate_verb(io, c, tpath, models, emb1, emb2);
        if (*qe_cmd) return qe_transfer(io, c, tpath, qe_m);
        if (*sig_cmd) return signature_verb(io, c, tpath, stems, classes, predicates);
        if (*fg_cmd) return estimate_fg(io, c, tpath, s_max, n_max, search);
        if (*op_cmd) return oplus_verb(io, c, tpath, op_s, op_n, search);
        if (*sat_cmd) return simulate_saturation(io, c, input, sat);
        if (*orc_cmd) return oracle_verb(io, c, oracle_files);
    } catch (const InputError& e) {
        err << "error: " << e.what() << "\n";
        return kExitInputError;
    } catch (const BudgetError& e) {
        err << "budget exhausted: " << e.what() << " (lower bound " << e.partial() << ")\n";
        return kExitBudget;
    } catch (const ConsistencyError& e) {
        err << "template inconsistency: " << e.what() << "\n";
        return kExitNegative;
    } catch (const GenerationError& e) {
        err << "generation failed: " << e.what() << "\n";
        return kExitNegative;
    }
    return kExitInputError;
}

} // namespace htpl
