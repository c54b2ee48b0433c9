// One PASS/FAIL line per acceptance criterion; exits non-zero if any fails.

#include <chrono>
#include <filesystem>
#include <fstream>
#include <iostream>
#include <sstream>
#include <string>

#include "brute_force.hpp"
#include "fixtures.hpp"
#include "htpl/cli.hpp"
#include "htpl/errors.hpp"
#include "htpl/io.hpp"
#include "htpl/satsim.hpp"
#include "htpl/signature.hpp"

using namespace htpl;
namespace fs = std::filesystem;

namespace {

int failures = 0;

void report(int id, bool pass, const std::string& detail) {
    std::cout << (pass ? "PASS" : "FAIL") << " criterion " << id << ": " << detail << std::endl;
    failures += pass ? 0 : 1;
}

double seconds_since(std::chrono::steady_clock::time_point t0) {
    return std::chrono::duration<double>(std::chrono::steady_clock::now() - t0).count();
}

void oracle_equivalence() {
    const auto t0 = std::chrono::steady_clock::now();
    std::uint64_t specs = 0;
    std::uint64_t disagree = 0;
    std::uint64_t consistent = 0;
    for (std::uint64_t seed = 0; seed < 200; ++seed) {
        const auto t = oracle::tiny_template(seed);
        Rng rng = derived_rng(seed, 0xacce);
        for (int i = 0; i < 500; ++i) {
            const auto spec = oracle::tiny_spec(t, rng);
            const int depth = required_check_depth(t, spec);
            const auto d = decide_positive_type(t, spec, depth);
            const auto o = oracle::positive_type(t, spec, d.depth);
            disagree += d.consistent != o.consistent || (d.consistent && d.witness != o.witness);
            consistent += d.consistent;
            ++specs;
        }
    }
    const double secs = seconds_since(t0);
    std::ostringstream s;
    s << specs << " specs, " << consistent << " consistent, " << disagree << " disagreements, " << secs
      << " s";
    report(1, disagree == 0 && secs < 300, s.str());
}

LeafStem random_stem(const Template& t, int len, Rng& rng) {
    std::vector<int> p;
    for (int n = 0; n < len; ++n) {
        p.push_back(uniform_int(rng, 0, t.level_size(n) - 1));
    }
    return LeafStem(p);
}

void completion_soundness() {
    std::uint64_t inputs = 0;
    std::uint64_t failed = 0;
    std::uint64_t resampled = 0;
    for (std::uint64_t i = 0; i < 100; ++i) {
        const int k = 2 + static_cast<int>(i % 2);
        const auto t = fixtures::validated_template(k, 5, 4, 7, 0.85, 2, 2000 + i);
        Rng rng = derived_rng(i, 0xc0de);
        for (int trial = 0; trial < 1000; ++trial) {
            const int m = uniform_int(rng, 1, 2);
            const int nu_len = m_star(t, m) + 1 + uniform_int(rng, 0, 1);
            const int target = nu_len + uniform_int(rng, 0, 4);
            std::vector<StemTuple> cons;
            std::vector<int> nu;
            for (int attempt = 0; attempt < 100 && static_cast<int>(nu.size()) < nu_len; ++attempt) {
                resampled += attempt > 0 ? 1 : 0;
                cons.assign(static_cast<std::size_t>(m), {});
                for (auto& tup : cons) {
                    for (int j = 0; j < k - 1; ++j) {
                        tup.push_back(random_stem(t, target, rng));
                    }
                }
                nu.clear();
                for (int n = 0; n < nu_len; ++n) {
                    VertexSet common(t.level_size(n), true);
                    for (const auto& tup : cons) {
                        Tuple p;
                        for (const auto& s : tup) {
                            p.push_back(s[static_cast<std::size_t>(n)]);
                        }
                        common &= t.level(n).graph.witness_set(p);
                    }
                    const auto members = common.members();
                    if (members.empty()) {
                        break;
                    }
                    nu.push_back(members[uniform_below(rng, members.size())]);
                }
            }
            if (static_cast<int>(nu.size()) < nu_len) {
                continue;
            }
            ++inputs;
            try {
                const auto leaf = complete_to_leaf(t, LeafStem(nu), cons, static_cast<std::size_t>(target));
                bool ok = leaf.length() == static_cast<std::size_t>(target) && LeafStem(nu).is_prefix_of(leaf);
                for (const auto& tup : cons) {
                    std::vector<LeafStem> e{leaf};
                    e.insert(e.end(), tup.begin(), tup.end());
                    ok = ok && einfty_prefix(t, e);
                }
                failed += ok ? 0 : 1;
            } catch (const std::exception&) {
                ++failed;
            }
        }
    }
    std::ostringstream s;
    s << inputs << " inputs on 100 templates, " << failed << " failures, " << resampled
      << " constraint redraws";
    report(2, failed == 0 && inputs >= 90000, s.str());
}

void qe_transfer() {
    std::uint64_t cx = 0;
    std::uint64_t consistent = 0;
    for (int i = 0; i < 50; ++i) {
        const int m = 1 + i % 3;
        const auto t = fixtures::validated_template(3, 4, 4, 8, 0.85, m, 1000 + static_cast<std::uint64_t>(i));
        const auto r = transfer_check(t, m, 1000, static_cast<std::uint64_t>(i));
        cx += r.counterexamples.size();
        consistent += r.consistent_trials;
    }
    int runs = 0;
    int detected = 0;
    for (int k = 2; k <= 3; ++k) {
        const int m = k + 1;
        for (std::uint64_t i = 0; i < 20; ++i) {
            const auto t = fixtures::validated_template(k, 4, 4, 8, 0.85, m, 5000 + i);
            const auto bad = fixtures::corrupt_level(t, m_star(t, m), 2, i);
            if (!bad) {
                continue;
            }
            ++runs;
            detected += transfer_check(*bad, m, 1000, i).counterexamples.empty() ? 0 : 1;
        }
    }
    std::ostringstream s;
    s << "50x1000 trials: " << cx << " counterexamples (" << consistent << " consistent); corrupted: "
      << detected << "/" << runs << " runs flagged";
    report(3, cx == 0 && runs > 0 && detected * 5 >= runs * 4, s.str());
}

void amalgamation() {
    int triples = 0;
    int ok = 0;
    for (std::uint64_t i = 0; i < 10; ++i) {
        const int k = 2 + static_cast<int>(i % 2);
        const auto t = fixtures::validated_template(k, 3, 3, 5, 0.8, 2, 3000 + i);
        Rng rng = derived_rng(i, 0xa3a1);
        for (int j = 0; j < 100; ++j) {
            const int m = uniform_int(rng, 0, 3);
            const auto m0 = fixtures::random_extension(t, build_random_model(t, m, 0, 0.0, 0),
                                                       uniform_int(rng, 0, 4), 0.5, rng);
            auto shuffled = [&](const FiniteModel& base, std::vector<int>& emb) {
                const auto grown = fixtures::random_extension(t, base, uniform_int(rng, 0, 4), 0.5, rng);
                std::vector<int> perm = fixtures::identity_map(grown.size());
                shuffle_in_place(perm, rng);
                FiniteModel out = grown;
                for (std::size_t e = 0; e < perm.size(); ++e) {
                    out.leaves[static_cast<std::size_t>(perm[e])] = grown.leaves[e];
                }
                out.edges.clear();
                for (const auto& edge : grown.edges) {
                    Tuple mapped;
                    for (int v : edge) {
                        mapped.push_back(perm[static_cast<std::size_t>(v)]);
                    }
                    std::sort(mapped.begin(), mapped.end());
                    out.edges.insert(mapped);
                }
                emb.assign(perm.begin(), perm.begin() + static_cast<long>(base.size()));
                return out;
            };
            std::vector<int> e1;
            std::vector<int> e2;
            const auto m1 = shuffled(m0, e1);
            const auto m2 = shuffled(m0, e2);
            ++triples;
            try {
                const auto u = amalgamate(t, m, m0, m1, m2, e1, e2);
                ok += check_model(t, u).ok() && u.size() == m1.size() + m2.size() - m0.size();
            } catch (const std::exception&) {
            }
        }
    }
    std::ostringstream s;
    s << ok << "/" << triples << " unions pass check_model";
    report(4, ok == triples && triples == 1000, s.str());
}

void oplus_machinery() {
    bool pass = true;
    std::ostringstream s;
    const auto c = complete_template(3, 3);
    for (int sv = 1; sv <= 5; ++sv) {
        const auto f = F_estimate(c, sv);
        pass = pass && f.value == 0 && f.analytic;
    }
    for (std::uint64_t n = 0; n <= 10; ++n) {
        pass = pass && G_estimate(c, n, 5).infinite;
    }
    s << "complete: F=0 (s<=5), G=inf (n<=10) " << (pass ? "exact" : "wrong");

    const Template t(2, {{Hypergraph(2, 3, {{0, 1}}), 1}, {Hypergraph::complete(2, 3), 3}});
    const auto f2 = F_estimate(t, 2);
    bool replay = !f2.certificates.empty();
    for (const auto& cert : f2.certificates) {
        replay = replay && verify_certificate(t, cert) && cert.n < f2.value;
        replay = replay && verify_certificate(t, read_certificate(write_certificate(cert, 2)));
    }
    const bool bounded = f2.value <= f2.analytic_bound && f2.analytic_bound == analytic_F_bound(t, 2);
    s << "; fixed template: F(2)=" << f2.value << " <= bound " << f2.analytic_bound << ", "
      << f2.certificates.size() << " certificates " << (replay ? "replay" : "do not replay");
    report(5, pass && replay && bounded && f2.value == 3, s.str());
}

void saturation() {
    int scenarios = 0;
    int feasible = 0;
    int failed = 0;
    for (std::uint64_t i = 0; i < 20; ++i) {
        const auto t = fixtures::validated_template(2 + static_cast<int>(i % 2), 5, 4, 7, 0.85, 3, 4000 + i);
        const auto g = g_table_analytic(t, 9);
        for (std::uint64_t j = 0; j < 10; ++j) {
            const auto sc = random_scenario(t, i * 100 + j, {});
            check_scenario(sc);
            ++scenarios;
            const auto dist = build_distribution(sc, g, j);
            if (!dist.feasible) {
                continue;
            }
            ++feasible;
            failed += verify_realization(sc, dist).failures;
        }
    }
    // pigeonhole: one slot per index, more instances than indices
    const auto t = fixtures::validated_template(3, 5, 4, 7, 0.85, 3, 4100);
    ScenarioOptions o;
    o.index_count = 3;
    o.instance_count = 4;
    const auto sc = random_scenario(t, 1, o);
    const auto pig = build_distribution(sc, GTable(9, 1), 1);
    std::ostringstream s;
    s << scenarios << " scenarios, " << feasible << " feasible, " << failed
      << " per-index failures; pigeonhole case " << (pig.feasible ? "feasible" : "infeasible");
    report(6, failed == 0 && feasible > 0 && !pig.feasible, s.str());
}

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

void determinism() {
    const auto dir = fs::temp_directory_path() / "htpl_acceptance";
    fs::remove_all(dir);
    fs::create_directories(dir);
    auto at = [&](const std::string& name) { return (dir / name).string(); };
    int mismatches = 0;
    int checks = 0;
    auto same = [&](const Run& a, const Run& b) {
        ++checks;
        mismatches += (a.code != b.code || a.out != b.out || a.err != b.err) ? 1 : 0;
    };

    const std::vector<std::string> gen{"gen-template", "--arity", "3", "--sizes", "5,6,6,7",
                                       "--target-f", "2,2,3,3", "--edge-prob", "0.85", "--seed", "7"};
    const auto g1 = run(gen);
    same(g1, run(gen));
    std::ofstream(at("t.txt")) << g1.out;
    const auto tmpl = at("t.txt");

    const std::vector<std::vector<std::string>> verbs{
        {"validate-template", tmpl},
        {"qe-transfer", tmpl, "--m", "2", "--trials", "300", "--seed", "5"},
        {"oplus", tmpl, "--s", "2", "--n", "1"},
        {"estimate-fg", tmpl, "--s-max", "2", "--n-max", "2"},
        {"signature", tmpl, "--stem", "(0,1,2)", "--stem", "(1,1,0)", "--depth", "6"},
        {"build-model", tmpl, "--level", "2", "--count", "1", "--seed", "3"},
        {"simulate-saturation", tmpl, "--seed", "11"},
        {"oracle", "--trials", "100", "--seed", "2"},
    };
    for (const auto& v : verbs) {
        auto w1 = v;
        w1.insert(w1.end(), {"--workers", "1"});
        auto w4 = v;
        w4.insert(w4.end(), {"--workers", "4"});
        const auto a = run(w1);
        same(a, run(w1));
        same(a, run(w4));
    }

    // round trips of every artifact kind
    int trips = 0;
    int broken = 0;
    auto trip = [&](bool ok) {
        ++trips;
        broken += ok ? 0 : 1;
    };
    const auto t = read_template(g1.out);
    trip(write_template(t) == g1.out);
    const auto m = build_random_model(t, 2, 1, 0.5, 4);
    trip(read_model(write_model(m)) == m && check_model(t, read_model(write_model(m))).ok());
    TypeSpecFile spec;
    spec.arity = 3;
    spec.positive.params = {{LeafStem{0, 1}, LeafStem{2, 0}}};
    const auto spec_text = write_typespec(spec);
    trip(write_typespec(read_typespec(spec_text)) == spec_text);
    const Template small(2, {{Hypergraph(2, 3, {{0, 1}}), 1}, {Hypergraph::complete(2, 3), 3}});
    const auto cert = *oplus_test(small, 2, 0).certificate;
    const auto cert_text = write_certificate(cert, 2);
    trip(write_certificate(read_certificate(cert_text), 2) == cert_text &&
         verify_certificate(small, read_certificate(cert_text)));
    const auto sc = random_scenario(t, 3, {});
    const auto sc_text = write_scenario(sc, "t.txt");
    trip(read_scenario(sc_text, dir).scenario == sc);
    const auto dist = build_distribution(sc, g_table_analytic(t, 9), 3);
    RealizationReport rep;
    if (dist.feasible) {
        rep = verify_realization(sc, dist);
    }
    const auto real_text = write_realization(dist, dist.feasible ? &rep : nullptr);
    const auto back = read_realization(real_text);
    trip(write_realization(back.dist, dist.feasible ? &back.report : nullptr) == real_text);
    fs::remove_all(dir);

    std::ostringstream s;
    s << checks << " repeated runs, " << mismatches << " byte mismatches; " << trips << " round trips, "
      << broken << " broken";
    report(7, mismatches == 0 && broken == 0, s.str());
}

} // namespace

int main() {
    const std::vector<void (*)()> criteria{oracle_equivalence, completion_soundness, qe_transfer,
                                           amalgamation,       oplus_machinery,      saturation,
                                           determinism};
    for (std::size_t i = 0; i < criteria.size(); ++i) {
        try {
            criteria[i]();
        } catch (const std::exception& e) {
            report(static_cast<int>(i + 1), false, std::string("exception: ") + e.what());
        }
    }
    return failures == 0 ? 0 : 1;
}
