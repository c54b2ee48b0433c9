#include <doctest.h>

#include "fixtures.hpp"
#include "htpl/errors.hpp"
#include "htpl/satsim.hpp"
#include "htpl/signature.hpp"

using namespace htpl;

namespace {

Template small_template() {
    return Template(2, {{Hypergraph(2, 3, {{0, 1}}), 1}, {Hypergraph::complete(2, 3), 3}});
}

// Two indices of depth 3, limit stems of length 3.
Scenario manual_scenario(int instances) {
    Scenario sc{small_template(), {3, 3}, {}};
    for (int a = 0; a < instances; ++a) {
        Instance inst;
        inst.limit = {LeafStem{0, a % 3, 0}};
        inst.per_index = {{LeafStem{0, a % 3, 0}}, {LeafStem{1, 0, 0}}};
        sc.instances.push_back(inst);
    }
    return sc;
}

} // namespace

TEST_CASE("scenario checks") {
    CHECK_NOTHROW(check_scenario(manual_scenario(3)));
    auto sc = manual_scenario(2);
    sc.instances[0].per_index.pop_back();
    CHECK_THROWS_AS(check_scenario(sc), InputError);
    auto shortlimit = manual_scenario(1);
    shortlimit.instances[0].limit = {LeafStem{0, 0}};
    CHECK_THROWS_AS(check_scenario(shortlimit), InputError);
    // limit leaves (0) and (2) have no common neighbour at level 0
    auto clash = manual_scenario(1);
    clash.instances.push_back(clash.instances[0]);
    clash.instances[1].limit = {LeafStem{2, 0, 0}};
    CHECK_THROWS_AS(check_scenario(clash), InputError);
}

TEST_CASE("agreement levels") {
    const auto sc = manual_scenario(2);
    // index 0 copies the limit, index 1 differs at the predicate (0)
    CHECK(agreement_level(sc, 0, 0) == 3);
    CHECK(agreement_level(sc, 1, 0) == 3);
    CHECK(agreement_level(sc, 0, 1) == 1);
    CHECK_THROWS_AS(agreement_level(sc, 2, 0), InputError);

    // truncating the approximation never raises agreement
    auto shorter = sc;
    shorter.depths = {2, 2};
    for (auto& inst : shorter.instances) {
        for (auto& tup : inst.per_index) {
            tup[0] = tup[0].prefix(2);
        }
    }
    CHECK(agreement_level(shorter, 0, 0) <= agreement_level(sc, 0, 0));
}

TEST_CASE("capacities") {
    const auto sc = manual_scenario(2);
    const auto g = g_table_analytic(sc.tmpl, 8);
    CHECK(capacity(sc, 0, 0, g) == G_analytic(sc.tmpl, 3));
    CHECK(capacity(sc, 0, 1, g) == G_analytic(sc.tmpl, 1));
    CHECK_THROWS_AS(capacity(sc, 0, 0, GTable(2, 1)), InputError);
    const auto inf = g_table_analytic(complete_template(2), 4);
    CHECK(inf.size() == 4);
    CHECK_FALSE(inf[3].has_value());
}

TEST_CASE("distributions") {
    const auto one = manual_scenario(1);
    const auto d1 = build_distribution(one, g_table_analytic(one.tmpl, 8), 0);
    CHECK(d1.feasible);
    CHECK_FALSE(d1.d[0].empty());

    // every capacity 1: three instances cannot share two indices
    const auto three = manual_scenario(3);
    const auto pig = build_distribution(three, GTable(8, 1), 0);
    CHECK_FALSE(pig.feasible);
    CHECK(pig.unplaced >= 0);
    CHECK(pig.diagnostic.find("capacity 2") != std::string::npos);
    CHECK_THROWS_AS(verify_realization(three, pig), InputError);

    const auto two = manual_scenario(2);
    const auto ok = build_distribution(two, GTable(8, 1), 0);
    REQUIRE(ok.feasible);
    for (const auto& u : ok.U) {
        CHECK(u.size() <= 1);
    }
    CHECK(verify_realization(two, ok).failures == 0);
}

TEST_CASE("strict bounds drop by one with floor one") {
    const auto sc = manual_scenario(2);
    const GTable g(8, 3);
    const auto loose = build_distribution(sc, g, 0);
    DistributionOptions opt;
    opt.strict = true;
    const auto strict = build_distribution(sc, g, 0, opt);
    CHECK(loose.bound[0] == 3);
    CHECK(strict.bound[0] == 2);
    CHECK(strict.strict);
    const auto floor = build_distribution(sc, GTable(8, 1), 0, opt);
    CHECK(floor.bound[0] == 1);
}

TEST_CASE("complete templates place every instance everywhere") {
    const auto t = complete_template(3, 4);
    ScenarioOptions o;
    o.max_depth = 4;
    const auto sc = random_scenario(t, 2, o);
    const auto dist = build_distribution(sc, g_table_analytic(t, 5), 2);
    REQUIRE(dist.feasible);
    for (const auto& d : dist.d) {
        CHECK(static_cast<int>(d.size()) == sc.index_count());
    }
    CHECK(verify_realization(sc, dist).failures == 0);
}

TEST_CASE("unperturbed approximations realize at every index") {
    const auto t = fixtures::validated_template(3, 5, 4, 7, 0.85, 3, 17);
    ScenarioOptions o;
    o.perturb_prob = 0.0;
    o.max_depth = 5;
    const auto sc = random_scenario(t, 5, o);
    check_scenario(sc);
    Distribution all;
    all.feasible = true;
    all.d.assign(static_cast<std::size_t>(sc.instance_count()), {});
    all.U.assign(static_cast<std::size_t>(sc.index_count()), {});
    for (int a = 0; a < sc.instance_count(); ++a) {
        for (int i = 0; i < sc.index_count(); ++i) {
            all.d[static_cast<std::size_t>(a)].push_back(i);
            all.U[static_cast<std::size_t>(i)].push_back(a);
        }
    }
    CHECK(verify_realization(sc, all).failures == 0);
}

TEST_CASE("seeded scenarios realize and ignore the worker count") {
    const auto t = fixtures::validated_template(3, 5, 4, 7, 0.85, 3, 23);
    const auto g = g_table_analytic(t, 9);
    for (std::uint64_t seed = 0; seed < 20; ++seed) {
        const auto sc = random_scenario(t, seed, {});
        check_scenario(sc);
        const auto dist = build_distribution(sc, g, seed);
        if (!dist.feasible) {
            continue;
        }
        const auto r1 = verify_realization(sc, dist, 1);
        const auto r4 = verify_realization(sc, dist, 4);
        CHECK(r1.failures == 0);
        CHECK(r4.failures == r1.failures);
        for (std::size_t i = 0; i < r1.per_index.size(); ++i) {
            CHECK(r1.per_index[i].witness == r4.per_index[i].witness);
        }
    }
}
