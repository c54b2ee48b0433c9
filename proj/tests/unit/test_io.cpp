#include <doctest.h>

#include <filesystem>
#include <fstream>

#include "fixtures.hpp"
#include "htpl/errors.hpp"
#include "htpl/io.hpp"

using namespace htpl;

TEST_CASE("stems") {
    CHECK(format_stem(LeafStem{3, 0, 1}) == "(3,0,1)");
    CHECK(format_stem(LeafStem{}) == "()");
    CHECK(parse_stem("(3,0,1)") == LeafStem{3, 0, 1});
    CHECK(parse_stem("()") == LeafStem{});
    CHECK_THROWS_AS(parse_stem("3,0"), InputError);
    CHECK_THROWS_AS(parse_stem("(3,,0)"), InputError);
    CHECK_THROWS_AS(parse_stem("(-1)"), InputError);
}

TEST_CASE("template round trip") {
    const auto t = fixtures::validated_template(3, 4, 4, 6, 0.8, 2, 5);
    const auto text = write_template(t);
    CHECK(text.rfind("htpl-template 1\n", 0) == 0);
    CHECK(read_template(text) == t);
    CHECK(write_template(read_template(text)) == text);
    const auto c = complete_template(2, 3, 2, 2);
    CHECK(read_template(write_template(c)) == c);
    CHECK(document_kind(text) == "htpl-template");
}

TEST_CASE("template parse errors") {
    CHECK_THROWS_AS(read_template("htpl-template 2\narity 2\nend\n"), FormatError);
    CHECK_THROWS_AS(read_template("htpl-model 1\nend\n"), FormatError);
    const std::string truncated = "htpl-template 1\narity 2\ntail complete_growing 1\nlevels 1\n"
                                  "level 0 size 3 f 1 edges 2\nedge 0 1\nend\n";
    CHECK_THROWS_AS(read_template(truncated), FormatError);
    const std::string commented = "# a comment\nhtpl-template 1\n\narity 2\ntail complete_growing 1\n"
                                  "levels 1\nlevel 0 size 3 f 1 edges 1\nedge 1 0\nend\n";
    const auto t = read_template(commented);
    CHECK(t.stored_graph(0).is_edge({0, 1}));
}

TEST_CASE("model round trip") {
    const auto t = fixtures::validated_template(3, 3, 3, 4, 0.8, 2, 6);
    const auto m = build_random_model(t, 2, 1, 0.5, 3);
    const auto text = write_model(m);
    CHECK(read_model(text) == m);
    CHECK(write_model(read_model(text)) == text);
}

TEST_CASE("type spec round trip") {
    TypeSpecFile pos;
    pos.arity = 3;
    pos.positive.x_stem = LeafStem{0, 1};
    pos.positive.params = {{LeafStem{1, 0}, LeafStem{2, 2}}, {LeafStem{0, 0}, LeafStem{}}};
    const auto a = read_typespec(write_typespec(pos));
    CHECK(a.kind == TypeSpecFile::Kind::positive);
    CHECK(a.positive.x_stem == pos.positive.x_stem);
    CHECK(a.positive.params == pos.positive.params);

    TypeSpecFile qf;
    qf.kind = TypeSpecFile::Kind::qf;
    qf.arity = 3;
    qf.level = 2;
    qf.qf = make_qf_spec({LeafStem{1, 4}, LeafStem{2, 5}, LeafStem{0, 0}}, LeafStem{0, 3}, {{0, 1}}, 3);
    qf.qf.classes = {0, 1, 1};
    qf.qf.x_equals = 2;
    const auto text = write_typespec(qf);
    const auto b = read_typespec(text);
    CHECK(b.kind == TypeSpecFile::Kind::qf);
    CHECK(b.level == 2);
    CHECK(b.qf.params == qf.qf.params);
    CHECK(b.qf.classes == qf.qf.classes);
    CHECK(b.qf.positive == qf.qf.positive);
    CHECK(b.qf.negative == qf.qf.negative);
    CHECK(b.qf.x_equals == 2);
    CHECK(write_typespec(b) == text);
}

TEST_CASE("certificate round trip") {
    const Template t(2, {{Hypergraph(2, 3, {{0, 1}}), 1}, {Hypergraph::complete(2, 3), 3}});
    const auto r = oplus_test(t, 2, 0);
    REQUIRE(r.certificate.has_value());
    const auto text = write_certificate(*r.certificate, 2);
    const auto c = read_certificate(text);
    CHECK(c.s == r.certificate->s);
    CHECK(c.n == r.certificate->n);
    CHECK(c.a_family == r.certificate->a_family);
    CHECK(c.b_family == r.certificate->b_family);
    CHECK(verify_certificate(t, c));
    CHECK(write_certificate(c, 2) == text);
}

TEST_CASE("scenario and realization round trip") {
    const auto t = fixtures::validated_template(3, 4, 4, 6, 0.85, 3, 12);
    const auto sc = random_scenario(t, 4, {});
    const auto text = write_scenario(sc, "tmpl.txt");
    const auto back = read_scenario(text, t);
    CHECK(back.scenario == sc);
    CHECK(back.template_ref == "tmpl.txt");

    const auto dir = std::filesystem::temp_directory_path() / "htpl_io_test";
    std::filesystem::create_directories(dir);
    std::ofstream(dir / "tmpl.txt") << write_template(t);
    CHECK(read_scenario(text, dir).scenario == sc);
    CHECK_THROWS_AS(read_scenario(text, dir / "missing"), InputError);

    const auto dist = build_distribution(sc, g_table_analytic(t, 9), 4);
    const RealizationReport* rep = nullptr;
    RealizationReport report;
    if (dist.feasible) {
        report = verify_realization(sc, dist);
        rep = &report;
    }
    const auto rtext = write_realization(dist, rep);
    const auto rf = read_realization(rtext);
    CHECK(rf.dist.feasible == dist.feasible);
    CHECK(rf.dist.d == dist.d);
    CHECK(rf.dist.bound == dist.bound);
    CHECK(rf.report.failures == report.failures);
    CHECK(write_realization(rf.dist, rep ? &rf.report : nullptr) == rtext);
    std::filesystem::remove_all(dir);
}

TEST_CASE("missing files are input errors") {
    CHECK_THROWS_AS(read_file("/nonexistent/htpl/file"), InputError);
}
