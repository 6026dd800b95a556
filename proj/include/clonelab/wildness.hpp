#ifndef CLONELAB_WILDNESS_HPP
#define CLONELAB_WILDNESS_HPP

#include <cstdint>
#include <optional>
#include <span>
#include <string>
#include <vector>

#include "clonelab/op_table.hpp"
#include "clonelab/term.hpp"

namespace clonelab {

/// An upward-closed family of subsets of N = {1,...,n}, subsets stored as
/// bitmasks (bit i-1 <-> coordinate i). The home of the wild-set families.
class WildFamily {
public:
    /// Validates upward closure; throws otherwise.
    WildFamily(int ambient_arity, std::vector<std::uint32_t> members);

    static WildFamily upward_closure(int ambient_arity, std::span<const std::uint32_t> sets);

    int ambient_arity() const { return n_; }
    std::uint32_t full_mask() const { return n_ == 32 ? ~0u : (1u << n_) - 1; }

    const std::vector<std::uint32_t>& members() const { return members_; }
    bool contains(std::uint32_t mask) const;

    /// The antichain of minimal members, ascending by mask value.
    std::vector<std::uint32_t> minimal_sets() const;

    /// The family with every member mapped through a permutation of N
    /// (1-based images: perm[i-1] is the image of coordinate i).
    WildFamily permuted(std::span<const int> perm) const;

    friend bool operator==(const WildFamily& a, const WildFamily& b) {
        return a.n_ == b.n_ && a.members_ == b.members_;
    }

private:
    int n_;
    std::vector<std::uint32_t> members_;  // sorted, unique
};

/// Wild family of m^n_k: exactly the subsets of size >= n-k+1.
WildFamily wild_family_of_order_stat(int n, int k);

/// Wild family of a term over monotone order-statistic symbols under the
/// two-point {0,infinity} semantics: A is wild iff evaluating with infinity
/// at the positions of A and 0 elsewhere yields infinity, where m:n:k on a
/// tuple with a infinite entries yields infinity iff a >= n-k+1.
WildFamily wild_family_of_term(const Term& term, int ambient_arity);

/// Finite surrogate for unboundedness: grows the coordinates of A along the
/// naturals and watches the term's value.
struct GrowthProbe {
    Term term;
    int ambient_arity;
    std::uint32_t subset_mask;
    int prefix_bound = 32;
};

enum class GrowthVerdict { Unbounded, BoundedUpToM };

/// Evaluates the probe term with the A-coordinates set to m and the rest to
/// 0 for m = 0..M; unbounded iff the value sequence is eventually exactly m.
GrowthVerdict oracle_wild_check(const GrowthProbe& probe);

/// Pol(T_1) criterion: every two (minimal) wild sets intersect.
bool in_pol_t1(const WildFamily& family);

/// Almost-unary criterion: some (n-1)-element subset of N is not wild.
bool is_almost_unary_family(const WildFamily& family);

/// <=_W: a permutation of N taking every f-wild set to a g-wild set.
/// Returns the first witnessing permutation in lexicographic order, if any.
/// The search is over S_n and refuses n > 8.
std::optional<std::vector<int>> wild_leq(const WildFamily& f, const WildFamily& g);

/// ~_W: <=_W in both directions.
bool wild_equiv(const WildFamily& f, const WildFamily& g);

/// The med_3 recursion building a monotone term whose wild family contains
/// the given pairwise-intersecting sets: t_A = med_3(t_B, t_C, t_D) over
/// B = {A_1..A_{k-1}}, C = {A_1..A_{k-2}, A_k}, D = {A_{k-1}, A_k}.
Term build_intersecting_term(std::span<const std::uint32_t> sets, int ambient_arity);

/// ceil(n/(k-1)): the chain level with M_n^k = M_{ceil(n/(k-1))}.
int chain_level(int n, int k);

/// The identification m^{ceil(n/(k-1))}_2 = m^n_k(x_1,...): x_j occurs k-1
/// times for j <= floor(n/(k-1)) and R(n/(k-1)) times for the final block.
VarMap classification_identity_map(int n, int k);

/// From a k-element wild set of a not almost unary function: the chain level
/// k+1 is a lower bound, witnessed by padding with the last variable.
struct ChainBound {
    int level;       // k + 1
    VarMap witness;  // f(x_1,...,x_k,x_{k+1},...,x_{k+1})
};

ChainBound chain_lower_bound_from_wild_set(const WildFamily& family, int k);

/// Families serialize as sorted lists of sorted 1-based index lists.
std::string family_to_json(const WildFamily& family);

}  // namespace clonelab

#endif  // CLONELAB_WILDNESS_HPP
