#include "clonelab/verify.hpp"

#include <chrono>
#include <functional>

#include "clonelab/closure.hpp"
#include "clonelab/median_constructions.hpp"
#include "clonelab/order_stats.hpp"
#include "clonelab/wildness.hpp"

namespace clonelab::verify {

namespace {

using Clock = std::chrono::steady_clock;

template <typename Body>
CheckReport run_criterion(int id, const std::string& name, Body&& body) {
    CheckReport report;
    report.id = id;
    report.name = name;
    report.verdict = "pass";
    const Clock::time_point start = Clock::now();
    try {
        body(report);
    } catch (const std::exception& e) {
        report.verdict = "fail";
        report.counterexample = std::string("exception: ") + e.what();
    }
    report.seconds = std::chrono::duration<double>(Clock::now() - start).count();
    return report;
}

void fail(CheckReport& report, const std::string& counterexample) {
    report.verdict = "fail";
    if (report.counterexample.empty()) report.counterexample = counterexample;
}

std::uint64_t pow_u64(std::uint64_t base, int exp) {
    std::uint64_t out = 1;
    for (int i = 0; i < exp; ++i) out *= base;
    return out;
}

}  // namespace

Term random_monotone_term(Rng& rng, int ambient, int max_depth, int max_symbol_arity) {
    if (max_depth == 0 || rng.below(4) == 0)
        return Term::var(1 + static_cast<int>(rng.below(static_cast<std::uint64_t>(ambient))));
    const int n = 1 + static_cast<int>(rng.below(static_cast<std::uint64_t>(max_symbol_arity)));
    const int k = 1 + static_cast<int>(rng.below(static_cast<std::uint64_t>(n)));
    std::vector<Term> children;
    children.reserve(static_cast<std::size_t>(n));
    for (int i = 0; i < n; ++i)
        children.push_back(random_monotone_term(rng, ambient, max_depth - 1, max_symbol_arity));
    return Term::apply("m:" + std::to_string(n) + ":" + std::to_string(k), std::move(children));
}

Term random_mn2_term(Rng& rng, int n, int ambient, int max_depth) {
    if (max_depth == 0 || rng.below(3) == 0)
        return Term::var(1 + static_cast<int>(rng.below(static_cast<std::uint64_t>(ambient))));
    std::vector<Term> children;
    children.reserve(static_cast<std::size_t>(n));
    for (int i = 0; i < n; ++i)
        children.push_back(random_mn2_term(rng, n, ambient, max_depth - 1));
    return Term::apply("m:" + std::to_string(n) + ":2", std::move(children));
}

CheckReport criterion_median_identification(const Options&) {
    return run_criterion(1, "median identification by almost divisibility", [](CheckReport& r) {
        const Chain chain(4);
        for (int k = 3; k <= 9; k += 2)
            for (int n = k; n <= 9; n += 2) {
                if (!is_almost_divisible(n, k)) continue;
                const VarMap map = ident_med_map(n, k);
                const OpTable lhs = identify_vars(median_table(n, chain), map);
                const OpTable rhs = median_table(k, chain);
                r.tuples_checked += pow_u64(4, n);
                if (lhs != rhs) {
                    fail(r, "identification of med_" + std::to_string(n) + " misses med_" +
                                std::to_string(k) + " at " + first_difference(lhs, rhs));
                    return;
                }
                r.details.push_back("med_" + std::to_string(k) + " from med_" +
                                    std::to_string(n));
            }
    });
}

CheckReport criterion_med3_from_medn(const Options&) {
    return run_criterion(2, "med_3 from med_n by the doubling map", [](CheckReport& r) {
        const Chain chain(5);
        for (int n : {5, 7, 9}) {
            const VarMap map = med3_doubling_map(n);
            const OpTable lhs = identify_vars(median_table(n, chain), map);
            const OpTable rhs = median_table(3, chain);
            r.tuples_checked += pow_u64(5, n);
            if (lhs != rhs) {
                fail(r, "doubling map fails for n = " + std::to_string(n) + " at " +
                            first_difference(lhs, rhs));
                return;
            }
        }
    });
}

CheckReport criterion_majority_amplifier(const Options&) {
    return run_criterion(3, "majority amplification by two", [](CheckReport& r) {
        const Chain c3(3);
        const OpTable med3 = median_table(3, c3);
        Registry reg3(c3);
        reg3.add("maj3", med3);
        const OpTable maj5 = term_to_table(grow_majority_term("maj3", med3, 5), 5, reg3);
        r.tuples_checked += maj5.values.size();
        if (!is_majority(maj5)) {
            fail(r, "grow(med_3 -> 5) fails is_majority on the 3-chain");
            return;
        }

        const Chain c2(2);
        const OpTable med3b = median_table(3, c2);
        Registry reg2(c2);
        reg2.add("maj3", med3b);
        const OpTable maj5b = term_to_table(grow_majority_term("maj3", med3b, 5), 5, reg2);
        Registry reg5(c2);
        reg5.add("maj5", maj5b);
        const OpTable maj7 = term_to_table(grow_majority_term("maj5", maj5b, 7), 7, reg5);
        r.tuples_checked += maj7.values.size();
        if (!is_majority(maj7)) {
            fail(r, "iterated grow(5 -> 7) fails is_majority on the 2-chain");
            return;
        }

        const OpTable med5 = median_table(5, c3);
        Registry reg5c3(c3);
        reg5c3.add("maj5", med5);
        const OpTable maj4 = term_to_table(even_majority_term("maj5", med5), 4, reg5c3);
        r.tuples_checked += maj4.values.size();
        if (!is_majority(maj4)) fail(r, "even extraction med_5 -> maj_4 fails on the 3-chain");
    });
}

CheckReport criterion_majority_ladder(const Options&) {
    return run_criterion(4, "majority ladder across arities", [](CheckReport& r) {
        const Chain c2(2);
        for (int source : {3, 4, 5}) {
            const OpTable start = default_majority_table(source, c2);
            for (int target = 2; target <= 8; ++target) {
                const LadderPlan plan = majority_ladder(source, target);
                const OpTable out = run_ladder(plan, start);
                r.tuples_checked += out.values.size();
                if (out.arity != target || !is_majority(out)) {
                    fail(r, "ladder " + std::to_string(source) + " -> " +
                                std::to_string(target) + " fails");
                    return;
                }
            }
        }
    });
}

CheckReport criterion_amplification_schedule(const Options&) {
    return run_criterion(5, "amplification schedule and expansion counts", [](CheckReport& r) {
        const AmplificationSchedule s5 = amplification_schedule(5);
        if (s5.steps.size() != 3 || s5.steps[0].r != BigRat(1, 5) ||
            s5.steps[1].r != BigRat(4, 10) || s5.steps[2].r != BigRat(76, 120) ||
            s5.b != 120) {
            fail(r, "n = 5 schedule deviates from r = 1/5, 4/10, 76/120, b = 120");
            return;
        }
        r.details.push_back("n=5: r = 1/5, 4/10, 76/120; b = 120");

        const std::vector<std::int64_t> five{11, 3, 7, 52, 21};
        const ExpansionResult once = simulate_expansion(five);
        if (once.frequency.at(11) != 4) {
            fail(r, "one expansion of a distinct 5-tuple gives median frequency " +
                        std::to_string(once.frequency.at(11)) + ", expected 4");
            return;
        }
        const ExpansionResult twice = simulate_expansion(once.expanded);
        r.tuples_checked += twice.expanded.size();
        if (twice.expanded.size() != 120 || twice.frequency.at(11) < 76) {
            fail(r, "second expansion fails the k_2 = 76 bound");
            return;
        }
        r.details.push_back("median frequency 4 after one step, " +
                            std::to_string(twice.frequency.at(11)) + " >= 76 after two");

        for (int n = 5; n <= 15; n += 2) {
            const AmplificationSchedule s = amplification_schedule(n, BigRat(99, 100), 20);
            if (!s.converged || s.steps.size() > 21) {
                fail(r, "n = " + std::to_string(n) + " does not pass 0.99 within 20 steps");
                return;
            }
            if (!schedule_satisfies_lower_bound(s)) {
                fail(r, "lower-bound inequality fails for n = " + std::to_string(n));
                return;
            }
            r.details.push_back("n=" + std::to_string(n) + ": r > 0.99 after " +
                                std::to_string(s.steps.size() - 1) + " steps");
        }
    });
}

CheckReport criterion_minimality_landscape(const Options&) {
    return run_criterion(6, "minimality landscape of the m^n_k", [](CheckReport& r) {
        const Chain c4(4);
        for (int n = 4; n <= 6; ++n) {
            for (int k = 2; k <= n / 2; ++k) {
                r.tuples_checked += pow_u64(4, n);
                if (identify_vars(order_stat_table(n, k, c4), min_from_mnk(n, k)) !=
                    order_stat_table(2, 1, c4)) {
                    fail(r, "min identification fails at (n,k) = (" + std::to_string(n) + "," +
                                std::to_string(k) + ")");
                    return;
                }
            }
            for (int k = (n + 1) / 2 + 1; k <= n - 1; ++k) {
                r.tuples_checked += pow_u64(4, n);
                if (identify_vars(order_stat_table(n, k, c4), max_from_mnk(n, k)) !=
                    order_stat_table(2, 2, c4)) {
                    fail(r, "max identification fails at (n,k) = (" + std::to_string(n) + "," +
                                std::to_string(k) + ")");
                    return;
                }
            }
        }

        const Chain c3(3);
        ClosureBudget budget;  // defaults: arity 3, 200000 tables
        const MinimalityProbe med_probe = minimality_probe(median_table(3, c3), c3, budget);
        r.tables_enumerated += med_probe.fragment.members().size();
        if (!med_probe.all_regenerate()) {
            fail(r, "a member of <med_3> fails to regenerate med_3");
            return;
        }
        r.details.push_back("med_3 probe: " + std::to_string(med_probe.results.size()) +
                            " members regenerate");

        const MinimalityProbe m42_probe =
            minimality_probe(order_stat_table(4, 2, c3), c3, budget);
        r.tables_enumerated += m42_probe.fragment.members().size();
        const OpTable min2 = order_stat_table(2, 1, c3);
        bool min2_witnessed = false;
        for (std::uint32_t idx : m42_probe.failing)
            if (m42_probe.fragment.members()[idx].table == min2) min2_witnessed = true;
        if (!min2_witnessed) {
            fail(r, "the m^4_2 probe does not expose min_2 as a non-regenerating member");
            return;
        }
        r.details.push_back("m^4_2 probe: " + std::to_string(m42_probe.failing.size()) +
                            " non-regenerating members, min_2 among them");
    });
}

CheckReport criterion_lower_median(const Options&) {
    return run_criterion(7, "lower medians", [](CheckReport& r) {
        const Chain c4(4);
        for (int n : {6, 8}) {
            const VarMap map = lower_median_to_med3(n);
            r.tuples_checked += pow_u64(4, n);
            if (identify_vars(order_stat_table(n, n / 2, c4), map) != median_table(3, c4)) {
                fail(r, "med^low_" + std::to_string(n) + " identification fails");
                return;
            }
        }
        r.tuples_checked += 81 * 64;
        if (lower_median4_generates_med3(c4)) {
            fail(r, "an identification of med^low_4 unexpectedly yields med_3");
            return;
        }
        r.details.push_back("all 81 identifications of med^low_4 miss med_3");
    });
}

CheckReport criterion_wildness_oracle(const Options& options) {
    return run_criterion(8, "wildness oracle agreement", [&options](CheckReport& r) {
        Rng rng(options.seed);
        const int count = options.quick ? 200 : 400;
        for (int t = 0; t < count; ++t) {
            const int ambient = 2 + static_cast<int>(rng.below(5));  // 2..6
            const Term term = random_monotone_term(rng, ambient, 3, 5);
            const WildFamily family = wild_family_of_term(term, ambient);
            for (std::uint32_t mask = 0; mask < (1u << ambient); ++mask) {
                const GrowthVerdict v = oracle_wild_check({term, ambient, mask, 32});
                ++r.tuples_checked;
                if (family.contains(mask) != (v == GrowthVerdict::Unbounded)) {
                    fail(r, "two-point family and growth oracle disagree on " +
                                term_to_string(term));
                    return;
                }
            }
        }
        r.details.push_back(std::to_string(count) + " terms, every subset cross-checked at M=32");
    });
}

CheckReport criterion_pol_t1(const Options&) {
    return run_criterion(9, "Pol(T_1) membership criterion", [](CheckReport& r) {
        for (int n = 1; n <= 9; ++n)
            for (int k = 1; k <= n; ++k) {
                ++r.tuples_checked;
                if (in_pol_t1(wild_family_of_order_stat(n, k)) != (2 * k <= n + 1)) {
                    fail(r, "in_pol_t1(m^" + std::to_string(n) + "_" + std::to_string(k) +
                                ") deviates from k <= (n+1)/2");
                    return;
                }
            }

        const Term g = Term::apply("med:3", {Term::var(1), Term::var(2), Term::var(3)});
        const Term f = Term::apply(
            "med:5", {Term::var(1), Term::var(1), Term::var(2), Term::var(3), Term::var(4)});
        const WildFamily gf = wild_family_of_term(g, 4);
        const WildFamily ff = wild_family_of_term(f, 4);
        if (wild_leq(ff, gf).has_value() || wild_leq(gf, ff).has_value()) {
            fail(r, "the no-converse pair is unexpectedly <=_W comparable");
            return;
        }
        r.details.push_back("no-converse pair incomparable in both directions");
    });
}

CheckReport criterion_intersecting_builder(const Options&) {
    return run_criterion(10, "intersecting-family term builder", [](CheckReport& r) {
        for (int n = 1; n <= 5; ++n) {
            std::vector<std::uint32_t> chosen;
            std::uint64_t antichains = 0;
            bool failed = false;
            const std::function<void(std::uint32_t)> recurse = [&](std::uint32_t start) {
                if (failed) return;
                ++antichains;
                const Term term = build_intersecting_term(chosen, n);
                const WildFamily family = wild_family_of_term(term, n);
                for (std::uint32_t s : chosen)
                    if (!family.contains(s)) {
                        fail(r, "family of the built term misses a set (n = " +
                                    std::to_string(n) + ")");
                        failed = true;
                        return;
                    }
                for (std::uint32_t s = start; s < (1u << n); ++s) {
                    bool admissible = true;
                    for (std::uint32_t c : chosen) {
                        if ((c & s) == 0) admissible = false;          // must intersect
                        if ((c & s) == c || (c & s) == s) admissible = false;  // antichain
                        if (!admissible) break;
                    }
                    if (!admissible) continue;
                    chosen.push_back(s);
                    recurse(s + 1);
                    chosen.pop_back();
                }
            };
            recurse(1);
            if (failed) return;
            r.tables_enumerated += antichains;
            r.details.push_back("n=" + std::to_string(n) + ": " + std::to_string(antichains) +
                                " intersecting antichains");
        }
    });
}

CheckReport criterion_chain_classification(const Options&) {
    return run_criterion(11, "chain classification of the M_n^k", [](CheckReport& r) {
        const Chain c3(3);
        const std::pair<int, int> cases[] = {{5, 3}, {7, 3}, {7, 4}, {9, 4}, {9, 5}};
        for (const auto& [n, k] : cases) {
            const int level = chain_level(n, k);
            if (level != (n + k - 2) / (k - 1)) {
                fail(r, "chain_level deviates at (n,k) = (" + std::to_string(n) + "," +
                            std::to_string(k) + ")");
                return;
            }
            const VarMap map = classification_identity_map(n, k);
            const OpTable lhs = identify_vars(order_stat_table(n, k, c3), map);
            const OpTable rhs = order_stat_table(level, 2, c3);
            r.tuples_checked += pow_u64(3, n);
            if (lhs != rhs) {
                fail(r, "classification identity fails at (n,k) = (" + std::to_string(n) + "," +
                            std::to_string(k) + ") at " + first_difference(lhs, rhs));
                return;
            }
            r.details.push_back("M_" + std::to_string(n) + "^" + std::to_string(k) + " = M_" +
                                std::to_string(level));
        }

        for (int n = 2; n <= 4; ++n) {
            std::vector<Term> vars;
            for (int i = 1; i <= n; ++i) vars.push_back(Term::var(i));
            const Term padded = Term::apply("m:" + std::to_string(n) + ":2", std::move(vars));
            const WildFamily padded_family = wild_family_of_term(padded, n + 1);
            if (!wild_leq(wild_family_of_order_stat(n + 1, 2), padded_family).has_value()) {
                fail(r, "padded witness fails for n = " + std::to_string(n));
                return;
            }
        }
        r.details.push_back("padded m^{n+1}_2 witnesses confirmed for n = 2, 3, 4");
    });
}

CheckReport criterion_arity_collapse(const Options& options) {
    return run_criterion(12, "arity-below-n collapse to almost unary", [&options](CheckReport& r) {
        Rng rng(options.seed ^ 0xa5a5a5a5ULL);
        const int count = options.quick ? 100 : 200;
        for (int t = 0; t < count; ++t) {
            const int n = 3 + static_cast<int>(rng.below(3));  // 3..5
            const int ambient = 2 + static_cast<int>(rng.below(static_cast<std::uint64_t>(n - 2)));
            Term term = random_mn2_term(rng, n, ambient, 3);
            while (!term.is_apply()) term = random_mn2_term(rng, n, ambient, 3);
            const WildFamily family = wild_family_of_term(term, ambient);
            ++r.tuples_checked;
            if (!is_almost_unary_family(family)) {
                fail(r, "a term over m:" + std::to_string(n) +
                            ":2 of arity " + std::to_string(ambient) + " is not almost unary: " +
                            term_to_string(term));
                return;
            }
        }
        r.details.push_back(std::to_string(count) + " terms, all almost unary");
    });
}

std::vector<CheckReport> run_all(const Options& options) {
    std::vector<CheckReport> reports;
    reports.push_back(criterion_median_identification(options));
    reports.push_back(criterion_med3_from_medn(options));
    reports.push_back(criterion_majority_amplifier(options));
    reports.push_back(criterion_majority_ladder(options));
    reports.push_back(criterion_amplification_schedule(options));
    reports.push_back(criterion_minimality_landscape(options));
    reports.push_back(criterion_lower_median(options));
    reports.push_back(criterion_wildness_oracle(options));
    reports.push_back(criterion_pol_t1(options));
    reports.push_back(criterion_intersecting_builder(options));
    reports.push_back(criterion_chain_classification(options));
    reports.push_back(criterion_arity_collapse(options));
    return reports;
}

}  // namespace clonelab::verify
