#include <doctest.h>

#include "brute_force.hpp"
#include "fixtures.hpp"
#include "htpl/errors.hpp"
#include "htpl/typecheck.hpp"

using namespace htpl;

namespace {

Template sparse_template() {
    return Template(3, {{Hypergraph(3, 3, {{0, 1, 2}}), 1}, {Hypergraph(3, 6, {{3, 4, 5}}), 1}});
}

Template with_f(const std::vector<int>& f) {
    std::vector<Level> levels;
    for (int v : f) {
        levels.push_back({Hypergraph::complete(2, 4), v});
    }
    return Template(2, levels);
}

} // namespace

TEST_CASE("m_star") {
    const auto t = with_f({1, 1, 2, 2, 3, 3});
    CHECK(m_star(t, 3) == 4);
    CHECK(m_star(t, 2) == 2);
    CHECK(m_star(t, 1) == 0);
    // the tail grows from 4 + 1 onward, so large counts land in the tail
    CHECK(m_star(t, 7) == 8 - 1 + 1);
    const auto c = complete_template(3);
    for (int k = 1; k <= 6; ++k) {
        CHECK(m_star(c, k) == k - 1);
        CHECK(m_star(c, k) == oracle::m_star(c, k));
    }
    const auto dip = with_f({3, 1, 3, 2});
    CHECK(m_star(dip, 3) == oracle::m_star(dip, 3));
    CHECK(m_star(dip, 3) == 4);
    CHECK_THROWS_AS(m_star(c, 0), InputError);
}

TEST_CASE("positive types on the complete template") {
    const auto t = complete_template(3, 3);
    PositiveTypeSpec spec;
    spec.params = {{LeafStem{0, 1}, LeafStem{0, 0}}, {LeafStem{0, 1}, LeafStem{0, 1}}};
    const auto d = decide_positive_type(t, spec);
    CHECK(d.consistent);
    CHECK(d.witness == LeafStem(std::vector<int>(static_cast<std::size_t>(d.depth), 0)));
}

TEST_CASE("a level-0 repetition-only graph forces the witness") {
    const Template t(3, {{Hypergraph(3, 3), 1}, {Hypergraph::complete(3, 4), 4}});
    PositiveTypeSpec spec;
    spec.params = {{LeafStem{1, 0}, LeafStem{2, 0}}};
    const auto d = decide_positive_type(t, spec, 2);
    const auto o = oracle::positive_type(t, spec, 2);
    CHECK(d.consistent == o.consistent);
    CHECK(d.consistent);
    CHECK(d.witness == LeafStem{1, 0});
    CHECK(d.witness == o.witness);

    spec.params.push_back({LeafStem{0, 0}, LeafStem{2, 1}});
    spec.params.push_back({LeafStem{0, 0}, LeafStem{1, 1}});
    const auto d2 = decide_positive_type(t, spec, 2);
    CHECK(d2.consistent == oracle::positive_type(t, spec, 2).consistent);
    CHECK_FALSE(d2.consistent);
    CHECK(d2.failing_level == 0);
}

TEST_CASE("an x stem can block a level") {
    const auto t = sparse_template();
    PositiveTypeSpec spec;
    spec.params = {{LeafStem{1, 4}, LeafStem{2, 5}}};
    spec.x_stem = LeafStem{0};
    const auto free = decide_positive_type(t, spec, 2);
    CHECK(free.consistent);
    CHECK(free.witness == LeafStem{0, 3});
    spec.x_stem = LeafStem{0, 0};
    const auto blocked = decide_positive_type(t, spec, 2);
    CHECK_FALSE(blocked.consistent);
    CHECK(blocked.failing_level == 1);
    CHECK_FALSE(oracle::positive_type(t, spec, 2).consistent);
}

TEST_CASE("check depth below the guarantee is rejected") {
    const auto t = complete_template(3, 4);
    PositiveTypeSpec spec;
    spec.params = {{LeafStem{0, 0}, LeafStem{0, 1}}, {LeafStem{0, 1}, LeafStem{0, 0}},
                   {LeafStem{0, 1}, LeafStem{0, 1}}};
    CHECK(required_check_depth(t, spec) == m_star(t, 3) + 1);
    CHECK_THROWS_AS(decide_positive_type(t, spec, 2), InputError);
    CHECK_NOTHROW(decide_positive_type(t, spec, 3));
}

TEST_CASE("positive types agree with stem enumeration") {
    int disagreements = 0;
    for (std::uint64_t seed = 0; seed < 20; ++seed) {
        const auto t = oracle::tiny_template(seed);
        Rng rng = derived_rng(seed, 77);
        for (int i = 0; i < 40; ++i) {
            const auto spec = oracle::tiny_spec(t, rng);
            const int depth = required_check_depth(t, spec);
            const auto d = decide_positive_type(t, spec, depth);
            const auto o = oracle::positive_type(t, spec, d.depth);
            disagreements += d.consistent != o.consistent || (d.consistent && d.witness != o.witness);
        }
    }
    CHECK(disagreements == 0);
}

TEST_CASE("removing a constraint keeps a type consistent") {
    const auto t = oracle::tiny_template(5);
    Rng rng = derived_rng(5, 1);
    for (int i = 0; i < 100; ++i) {
        auto spec = oracle::tiny_spec(t, rng);
        const int depth = required_check_depth(t, spec);
        if (!decide_positive_type(t, spec, depth).consistent || spec.params.size() < 2) {
            continue;
        }
        spec.params.pop_back();
        CHECK(decide_positive_type(t, spec, depth).consistent);
    }
}

TEST_CASE("qf formulas") {
    const auto t = sparse_template();
    auto spec = make_qf_spec({LeafStem{1, 4}, LeafStem{2, 5}}, LeafStem{0, 3}, {{0, 1}}, 3);
    CHECK(decide_qf_formula(t, 2, spec, false));
    CHECK(oracle::qf_formula(t, 2, spec));

    auto blocked = make_qf_spec({LeafStem{1, 4}, LeafStem{2, 0}}, LeafStem{0, 3}, {{0, 1}}, 3);
    CHECK_FALSE(decide_qf_formula(t, 2, blocked, false));
    CHECK_FALSE(oracle::qf_formula(t, 2, blocked));

    // no required edges: only the equality pattern matters
    auto none = make_qf_spec({LeafStem{1, 4}, LeafStem{2, 0}}, LeafStem{0, 3}, {}, 3);
    CHECK(decide_qf_formula(t, 2, none, false));
    none.x_equals = 0;
    CHECK_FALSE(decide_qf_formula(t, 2, none, false));
    none.x_leaf = LeafStem{1, 4};
    CHECK(decide_qf_formula(t, 2, none, false));

    auto malformed = spec;
    malformed.negative.clear();
    malformed.positive.push_back({1, 0});
    CHECK_THROWS_AS(decide_qf_formula(t, 2, malformed, false), InputError);
}

TEST_CASE("limit consistency implies consistency at every finite level") {
    const auto t = fixtures::validated_template(3, 4, 4, 6, 0.85, 2, 21);
    Rng rng = derived_rng(21, 0);
    int limit_yes = 0;
    for (int trial = 0; trial < 200; ++trial) {
        const int m = uniform_int(rng, 1, 3);
        std::vector<LeafStem> params;
        for (int i = 0; i < 3; ++i) {
            std::vector<int> p;
            for (int n = 0; n < m; ++n) {
                p.push_back(uniform_int(rng, 0, t.level_size(n) - 1));
            }
            params.emplace_back(p);
        }
        std::vector<int> x;
        for (int n = 0; n < m; ++n) {
            x.push_back(uniform_int(rng, 0, t.level_size(n) - 1));
        }
        std::vector<Tuple> pos;
        for (const auto& tup : increasing_tuples(3, 2)) {
            if (bernoulli(rng, 0.5)) {
                pos.push_back(tup);
            }
        }
        const auto spec = make_qf_spec(params, LeafStem(x), pos, 3);
        const bool finite = decide_qf_formula(t, m, spec, false);
        CHECK(finite == oracle::qf_formula(t, m, spec));
        if (decide_qf_formula(t, m, spec, true)) {
            ++limit_yes;
            CHECK(finite);
        }
    }
    CHECK(limit_yes > 0);
}

TEST_CASE("transfer on complete and validated templates") {
    const auto c = complete_template(3, 4);
    const auto r = transfer_check(c, 3, 200, 1);
    CHECK(r.counterexamples.empty());
    CHECK(r.m_star == m_star(c, 3));

    const auto t = fixtures::validated_template(3, 4, 4, 8, 0.85, 2, 1002);
    CHECK(transfer_check(t, 2, 300, 5).counterexamples.empty());
    CHECK_THROWS_AS(transfer_check(t, 0, 10, 5), InputError);
}

TEST_CASE("transfer detects a broken Extension level") {
    const auto t = fixtures::validated_template(2, 4, 4, 8, 0.85, 3, 5000);
    const int ms = m_star(t, 3);
    const auto bad = fixtures::corrupt_level(t, ms, 2, 0);
    REQUIRE(bad.has_value());
    const auto r = transfer_check(*bad, 3, 500, 0);
    CHECK_FALSE(r.counterexamples.empty());
    for (const auto& cx : r.counterexamples) {
        CHECK(cx.consistent_at_m_star != cx.consistent_at_next);
    }
}

TEST_CASE("transfer is independent of the worker count") {
    const auto t = fixtures::validated_template(3, 4, 4, 6, 0.85, 2, 9);
    const auto a = transfer_check(t, 2, 200, 3, 1);
    const auto b = transfer_check(t, 2, 200, 3, 4);
    CHECK(a.consistent_trials == b.consistent_trials);
    CHECK(a.extensions_checked == b.extensions_checked);
    CHECK(a.counterexamples.size() == b.counterexamples.size());
}
