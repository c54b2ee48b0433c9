#include <doctest.h>

#include <filesystem>
#include <fstream>
#include <sstream>

#include "htpl/cli.hpp"
#include "htpl/io.hpp"

using namespace htpl;
namespace fs = std::filesystem;

namespace {

struct Run {
    int code;
    std::string out;
    std::string err;
};

Run run(const std::vector<std::string>& args) {
    std::ostringstream out;
    std::ostringstream err;
    const int code = run_cli(args, out, err);
    return {code, out.str(), err.str()};
}

struct TempDir {
    fs::path path;
    TempDir() : path(fs::temp_directory_path() / "htpl_cli_unit") {
        fs::remove_all(path);
        fs::create_directories(path);
    }
    ~TempDir() { fs::remove_all(path); }
    std::string file(const std::string& name, const std::string& text) const {
        const auto p = path / name;
        std::ofstream(p) << text;
        return p.string();
    }
    std::string at(const std::string& name) const { return (path / name).string(); }
};

Template sparse_template() {
    return Template(3, {{Hypergraph(3, 3, {{0, 1, 2}}), 1}, {Hypergraph(3, 6, {{3, 4, 5}}), 1}});
}

} // namespace

TEST_CASE("validate-template on the complete template") {
    TempDir d;
    const auto c = run({"gen-template", "--complete", "--arity", "3", "--depth", "4", "--out", d.at("c.txt")});
    CHECK(c.code == kExitOk);
    CHECK(c.out.rfind("htpl-report 1\nverb gen-template\nseed 0\n", 0) == 0);
    const auto v = run({"validate-template", d.at("c.txt")});
    CHECK(v.code == kExitOk);
    CHECK(v.out.find("result valid\n") != std::string::npos);
}

TEST_CASE("input errors exit 2") {
    CHECK(run({"validate-template", "/nonexistent"}).code == kExitInputError);
    CHECK(run({"no-such-verb"}).code == kExitInputError);
    CHECK(run({"gen-template", "--arity", "3"}).code == kExitInputError);
    TempDir d;
    const auto bad = d.file("bad.txt", "htpl-template 1\narity x\nend\n");
    const auto r = run({"validate-template", bad});
    CHECK(r.code == kExitInputError);
    CHECK(r.err.find("line 2") != std::string::npos);
}

TEST_CASE("decide-type reports the blocked level") {
    TempDir d;
    const auto t = d.file("t.txt", write_template(sparse_template()));
    TypeSpecFile spec;
    spec.arity = 3;
    spec.positive.params = {{LeafStem{1, 4}, LeafStem{2, 5}}};
    spec.positive.x_stem = LeafStem{0, 0};
    const auto blocked = d.file("blocked.txt", write_typespec(spec));
    const auto r = run({"decide-type", t, blocked});
    CHECK(r.code == kExitNegative);
    CHECK(r.out.find("failing_level 1\n") != std::string::npos);

    spec.positive.x_stem = LeafStem{0};
    const auto free = d.file("free.txt", write_typespec(spec));
    const auto ok = run({"decide-type", t, free});
    CHECK(ok.code == kExitOk);
    CHECK(ok.out.find("witness (0,3)\n") != std::string::npos);

    CHECK(run({"oracle", t, blocked}).code == kExitOk);
}

TEST_CASE("oracle cross-check over random tiny specs") {
    const auto r = run({"oracle", "--trials", "500", "--seed", "3"});
    CHECK(r.code == kExitOk);
    CHECK(r.out.find("disagreements 0\n") != std::string::npos);
}

TEST_CASE("reports are deterministic across runs and workers") {
    TempDir d;
    const auto g1 = run({"gen-template", "--arity", "3", "--sizes", "5,6,6", "--target-f", "2,2,3",
                         "--edge-prob", "0.85", "--seed", "9"});
    const auto g2 = run({"gen-template", "--arity", "3", "--sizes", "5,6,6", "--target-f", "2,2,3",
                         "--edge-prob", "0.85", "--seed", "9"});
    CHECK(g1.code == kExitOk);
    CHECK(g1.out == g2.out);
    CHECK(g1.err == g2.err);
    const auto t = d.file("t.txt", g1.out);

    for (const std::vector<std::string>& verb :
         {std::vector<std::string>{"qe-transfer", t, "--m", "2", "--trials", "200", "--seed", "4"},
          std::vector<std::string>{"oplus", t, "--s", "2", "--n", "1"},
          std::vector<std::string>{"simulate-saturation", t, "--seed", "2"}}) {
        auto one = verb;
        one.insert(one.end(), {"--workers", "1"});
        auto four = verb;
        four.insert(four.end(), {"--workers", "4"});
        const auto a = run(one);
        const auto b = run(four);
        CHECK(a.code == b.code);
        CHECK(a.out == b.out);
        CHECK(a.code != kExitInputError);
    }
}

TEST_CASE("model verbs chain") {
    TempDir d;
    const auto t = d.file("t.txt", write_template(sparse_template()));
    const auto m = run({"build-model", t, "--level", "2", "--count", "1", "--edge-prob", "0.5", "--seed", "1",
                        "--out", d.at("m.txt")});
    CHECK(m.code == kExitOk);
    CHECK(run({"check-model", t, d.at("m.txt")}).code == kExitOk);
    const auto c = run({"close-model", t, d.at("m.txt"), "--params", "1", "--budget", "500", "--out",
                        d.at("closed.txt")});
    CHECK((c.code == kExitOk || c.code == kExitBudget));
    CHECK(run({"check-model", t, d.at("closed.txt")}).code == kExitOk);

    FiniteModel empty;
    empty.arity = 3;
    empty.level = 2;
    const auto e = d.file("e.txt", write_model(empty));
    const auto a = run({"amalgamate", t, e, d.at("m.txt"), d.at("m.txt"), "--out", d.at("u.txt")});
    CHECK(a.code == kExitOk);
    CHECK(run({"check-model", t, d.at("u.txt")}).code == kExitOk);

    FiniteModel bad = read_model(read_file(d.at("m.txt")));
    bad.leaves = {{0, 3}, {1, 4}, {2, 0}};
    bad.edges = {{0, 1, 2}};
    const auto b = d.file("bad.txt", write_model(bad));
    const auto r = run({"check-model", t, b});
    CHECK(r.code == kExitNegative);
}

TEST_CASE("signature and estimates") {
    TempDir d;
    const Template small(2, {{Hypergraph(2, 3, {{0, 1}}), 1}, {Hypergraph::complete(2, 3), 3}});
    const auto t = d.file("t.txt", write_template(small));
    const auto s = run({"signature", t, "--stem", "(0,1)", "--depth", "4"});
    CHECK(s.code == kExitOk);
    const auto o = run({"oplus", t, "--s", "2", "--n", "0", "--out", d.at("cert.txt")});
    CHECK(o.code == kExitNegative);
    const auto replay = run({"decide-type", t, d.at("cert.txt")});
    CHECK(replay.code == kExitOk);
    const auto fg = run({"estimate-fg", t, "--s-max", "2", "--n-max", "3"});
    CHECK(fg.code == kExitOk);
}
