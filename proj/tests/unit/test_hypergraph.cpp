#include <doctest.h>

#include "brute_force.hpp"
#include "htpl/errors.hpp"
#include "htpl/hypergraph.hpp"

using namespace htpl;

TEST_CASE("repeated entries are always edges") {
    Hypergraph h(3, 4);
    CHECK(h.is_edge({1, 1, 2}));
    CHECK(h.is_edge({3, 3, 3}));
    CHECK_FALSE(h.is_edge({0, 1, 2}));
}

TEST_CASE("complete hypergraph accepts every tuple") {
    const auto h = Hypergraph::complete(3, 4);
    CHECK(h.is_edge({3, 1, 0}));
    CHECK(h.is_complete());
    CHECK(h.uniform_edge_count() == 4);
}

TEST_CASE("edges are unordered") {
    Hypergraph h(3, 5, {{0, 2, 4}});
    CHECK(h.is_edge({4, 0, 2}));
    CHECK(h.is_edge({2, 4, 0}));
    CHECK_FALSE(h.is_edge({0, 2, 3}));
    h.set_uniform_edge(std::vector<int>{4, 2, 0}, false);
    CHECK(h.uniform_edge_count() == 0);
}

TEST_CASE("bad tuples are input errors") {
    Hypergraph h(3, 4);
    CHECK_THROWS_AS(h.is_edge({0, 1}), InputError);
    CHECK_THROWS_AS(h.is_edge({0, 1, 4}), InputError);
    CHECK_THROWS_AS(h.is_edge({-1, 1, 2}), InputError);
    CHECK_THROWS_AS(Hypergraph(1, 3), InputError);
}

TEST_CASE("least extension witness") {
    CHECK(extension_witness(Hypergraph::complete(3, 6), {{0, 1}, {2, 3}}) == 0);
    // s = 0 already repeats an entry of (0,1)
    CHECK(extension_witness(Hypergraph(3, 3, {{0, 1, 2}}), {{0, 1}}) == 0);
    CHECK(extension_witness(Hypergraph(3, 2), {{0, 1}}) == 0);
    CHECK(extension_witness(Hypergraph(3, 5, {{0, 1, 4}}), {{0, 1}, {2, 4}}) == 4);
    CHECK_FALSE(extension_witness(Hypergraph(3, 5), {{0, 1}, {2, 3}}).has_value());
    CHECK_THROWS_AS(extension_witness(Hypergraph(3, 2), {}), InputError);
}

TEST_CASE("extension property on small graphs") {
    CHECK(has_extension_property(Hypergraph::complete(3, 5), 7));
    const Hypergraph h(3, 4, {{0, 1, 2}});
    CHECK(has_extension_property(h, 1));
    CHECK(has_extension_property(h, 2));
    const auto r = check_extension_property(h, 3);
    CHECK_FALSE(r.holds);
    CHECK(r.exhaustive);
    REQUIRE(r.counterexample.size() == 3);
    CHECK_FALSE(extension_witness(h, r.counterexample).has_value());

    CHECK(has_extension_property(Hypergraph(3, 3), 2));
    CHECK_FALSE(has_extension_property(Hypergraph(3, 4), 2));
    CHECK_FALSE(has_extension_property(Hypergraph(2, 2), 2));
}

TEST_CASE("extension checker matches enumeration on every small hypergraph") {
    int checked = 0;
    for (int k = 2; k <= 3; ++k) {
        for (int n = 1; n <= (k == 2 ? 5 : 4); ++n) {
            for (const auto& h : oracle::all_hypergraphs(k, n)) {
                bool prev = true;
                for (int t = 1; t <= 3; ++t) {
                    const bool got = has_extension_property(h, t);
                    CHECK(got == oracle::extension(h, t));
                    // holding at t implies holding below t
                    CHECK((prev || !got));
                    prev = got;
                    ++checked;
                }
            }
        }
    }
    CHECK(checked > 100);
}

TEST_CASE("cliques and independent sets") {
    CHECK(find_k_full_clique(Hypergraph::complete(3, 5), 5) == std::vector<int>{0, 1, 2, 3, 4});
    CHECK(find_k_independent(Hypergraph(3, 5), 4) == std::vector<int>{0, 1, 2, 3});
    const Hypergraph h(3, 4, {{0, 1, 2}, {0, 1, 3}});
    CHECK_FALSE(find_k_full_clique(h, 4).has_value());
    CHECK(find_k_full_clique(h, 3) == std::vector<int>{0, 1, 2});
    CHECK(find_k_independent(h, 3) == std::vector<int>{0, 2, 3});
    CHECK_THROWS_AS(find_k_independent(h, 2), InputError);

    for (const auto& g : oracle::all_hypergraphs(3, 4)) {
        for (int s = 3; s <= 4; ++s) {
            CHECK(find_k_full_clique(g, s) == oracle::clique(g, s));
            CHECK(find_k_independent(g, s) == oracle::independent(g, s));
        }
    }
}
