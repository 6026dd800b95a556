#ifndef CLONELAB_MEDIAN_CONSTRUCTIONS_HPP
#define CLONELAB_MEDIAN_CONSTRUCTIONS_HPP

#include <cstdint>
#include <map>
#include <span>
#include <vector>

#include "clonelab/op_table.hpp"
#include "clonelab/rational.hpp"
#include "clonelab/term.hpp"

namespace clonelab {

/// R(n/k): the remainder of the division n/k.
std::int64_t remainder_of_division(std::int64_t n, std::int64_t k);

/// n is almost divisible by k iff R(n/k) <= n/k or (k-1) - R(n/k) <= n/k,
/// evaluated in exact arithmetic.
bool is_almost_divisible(std::int64_t n, std::int64_t k);

/// The identification map behind med_k = med_n(x_1,...,x_1,...,x_k,...,x_k):
/// x_j occurs floor(n/k)+1 times if j <= R(n/k) and floor(n/k) times
/// otherwise. Requires k <= n both odd and n almost divisible by k.
VarMap ident_med_map(int n, int k);

/// The doubling map med_3(x_1,x_2,x_3) = med_n(x_1,x_2,...,x_2,x_3,...,x_3)
/// where x_2 and x_3 each occur (n-1)/2 times. Requires odd n >= 3.
VarMap med3_doubling_map(int n);

/// A ternary majority term by identification out of an n-ary majority
/// function, n >= 5: x_j occurs floor(n/3)+1 times if j <= R(n/3) and
/// floor(n/3) times otherwise.
Term ternary_majority_term(const std::string& source_name, const OpTable& source);

/// An n-ary majority term out of an (n+1)-ary one for even n >= 2 by
/// doubling the last variable.
Term even_majority_term(const std::string& source_name, const OpTable& source);

/// The depth-three n-ary majority term over an (n-2)-ary majority function:
/// gamma_i^j drops x_i and the next component that is not x_j, z_j collects
/// the gamma_i^j, and the root collects z_2,...,z_{n-1}. Requires n >= 5.
Term grow_majority_term(const std::string& source_name, const OpTable& source, int n);

/// Depth of the term counted in nested applications of the named operation.
int apply_depth(const Term& term);

/// One step of a majority-arity conversion plan.
struct LadderStep {
    enum class Kind { Grow, Even, Ternary };
    Kind kind;
    int from_arity;
    int to_arity;
};

/// A plan converting a majority function of one arity into another, following
/// the case analysis for generating majority functions of every arity:
/// same-parity iteration by growing, odd-to-even by doubling the last
/// variable, mixed parity via ternary extraction first, and arity 4 via a
/// 6-ary majority.
struct LadderPlan {
    int source_arity;
    int target_arity;
    std::vector<LadderStep> steps;
};

LadderPlan majority_ladder(int source_arity, int target_arity);

/// Runs a plan on a concrete majority table, tabulating after each step.
/// Every intermediate is checked with is_majority; the names of the
/// intermediate tables are recorded in `trace` when given.
OpTable run_ladder(const LadderPlan& plan, const OpTable& source, Registry* trace = nullptr);

/// A convenient majority table of the requested arity: med_n for odd n, the
/// doubled-last-variable table out of med_{n+1} for even n.
OpTable default_majority_table(int n, Chain chain);

/// One recorded state of the amplification recurrences.
struct ScheduleStep {
    int j;
    BigInt n;   // n_0 = n, n_{j+1} = C(n_j, 3)
    BigRat k;   // k_0 = 1, k_{j+1} = C(k_j,3) + C(k_j,2)(n_j-k_j) + k_j((n_j-k_j)/2)^2
    BigRat r;   // r_j = k_j / n_j, kept unreduced over n_j
};

/// The exact-rational trajectory of the median-amplification recurrences,
/// run until the relative frequency r_j exceeds the threshold.
struct AmplificationSchedule {
    int n;
    BigRat threshold;
    std::vector<ScheduleStep> steps;  // entries j = 0 .. J
    BigInt b;                         // n_J at the first r_J > threshold
    bool degenerate;                  // b < n (the n = 3 collapse)
    bool converged;                   // false only if the step cap was hit
};

AmplificationSchedule amplification_schedule(int n, const BigRat& threshold = BigRat(1, 2),
                                             int step_cap = 64);

/// Exact check of r_{j+1} >= r_j (3/2 - r_j^2/2 - 1/(n_j-1)) at every
/// consecutive recorded step with n_j >= 4.
bool schedule_satisfies_lower_bound(const AmplificationSchedule& schedule);

/// One expansion step of the amplification procedure: med_3 applied to every
/// 3-element selection of the tuple, in lexicographic subset order, plus the
/// value frequencies of the result.
struct ExpansionResult {
    std::vector<std::int64_t> expanded;
    std::map<std::int64_t, std::int64_t> frequency;
};

ExpansionResult simulate_expansion(std::span<const std::int64_t> tuple);

/// med_3 out of the lower median med^low_n = m^n_{n/2} by identification,
/// for even n >= 6: the same multiplicities as the ternary majority map.
VarMap lower_median_to_med3(int n);

/// Exhaustive search over all 3^4 identification maps {1..4} -> {1..3}:
/// returns true iff some identification of med^low_4 equals med_3 on the
/// given chain. The classification corollary predicts false.
bool lower_median4_generates_med3(Chain chain);

/// The two-block identifications min_2 = m^n_k(x,...,x,y,...,y) and
/// max_2 = m^n_k(x,...,x,y,...,y), x occurring exactly floor(n/2) times.
/// Stated ranges: min needs n >= 4 and 2 <= k <= floor(n/2); max needs
/// ceil(n/2) < k < n.
VarMap min_from_mnk(int n, int k);
VarMap max_from_mnk(int n, int k);

}  // namespace clonelab

#endif  // CLONELAB_MEDIAN_CONSTRUCTIONS_HPP
