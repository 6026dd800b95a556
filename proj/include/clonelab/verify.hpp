#ifndef CLONELAB_VERIFY_HPP
#define CLONELAB_VERIFY_HPP

#include <cstdint>
#include <string>
#include <vector>

#include "clonelab/term.hpp"

namespace clonelab::verify {

/// Deterministic generator for the seeded corpora. A thin splitmix64; the
/// stream is stable across platforms and standard library versions.
class Rng {
public:
    explicit Rng(std::uint64_t seed) : state_(seed) {}

    std::uint64_t next() {
        state_ += 0x9e3779b97f4a7c15ULL;
        std::uint64_t z = state_;
        z = (z ^ (z >> 30)) * 0xbf58476d1ce4e5b9ULL;
        z = (z ^ (z >> 27)) * 0x94d049bb133111ebULL;
        return z ^ (z >> 31);
    }

    std::uint64_t below(std::uint64_t bound) { return next() % bound; }

private:
    std::uint64_t state_;
};

/// A random term over order-statistic symbols of arity <= max_symbol_arity
/// and variables x_1..x_ambient, of nesting depth <= max_depth.
Term random_monotone_term(Rng& rng, int ambient, int max_depth, int max_symbol_arity);

/// A random term whose only operation symbol is m:n:2, at ambient arity j.
Term random_mn2_term(Rng& rng, int n, int ambient, int max_depth);

struct Options {
    std::uint64_t seed = 20040803;  // settable via --seed
    bool quick = true;              // quick = exactly the stated bounds
};

struct CheckReport {
    int id = 0;
    std::string name;
    std::string verdict;  // "pass" | "fail" | "unknown"
    std::uint64_t tuples_checked = 0;
    std::uint64_t tables_enumerated = 0;
    std::string counterexample;  // set when the verdict is "fail"
    std::vector<std::string> details;
    double seconds = 0.0;

    bool passed() const { return verdict == "pass"; }
};

CheckReport criterion_median_identification(const Options&);   // 1
CheckReport criterion_med3_from_medn(const Options&);          // 2
CheckReport criterion_majority_amplifier(const Options&);      // 3
CheckReport criterion_majority_ladder(const Options&);         // 4
CheckReport criterion_amplification_schedule(const Options&);  // 5
CheckReport criterion_minimality_landscape(const Options&);    // 6
CheckReport criterion_lower_median(const Options&);            // 7
CheckReport criterion_wildness_oracle(const Options&);         // 8
CheckReport criterion_pol_t1(const Options&);                  // 9
CheckReport criterion_intersecting_builder(const Options&);    // 10
CheckReport criterion_chain_classification(const Options&);    // 11
CheckReport criterion_arity_collapse(const Options&);          // 12

std::vector<CheckReport> run_all(const Options& options);

}  // namespace clonelab::verify

#endif  // CLONELAB_VERIFY_HPP
