#ifndef CLONELAB_ORDER_STATS_HPP
#define CLONELAB_ORDER_STATS_HPP

#include <cstdint>
#include <optional>
#include <span>
#include <string>

#include "clonelab/op_table.hpp"

namespace clonelab {

/// A symbolic order statistic: the k-th smallest of n arguments.
struct SymbolicOp {
    int n;
    int k;
};

/// Parses the symbolic operation names resolvable in term files:
/// `m:n:k`, `med:n` (odd n), `min:n`, `max:n`. Returns nullopt for
/// anything else.
std::optional<SymbolicOp> parse_symbolic_op(const std::string& name);

/// k-th smallest entry of a tuple, counted with multiplicity (1-based k).
Element order_stat_value(int k, std::span<const Element> tuple);
std::int64_t order_stat_value(int k, std::span<const std::int64_t> tuple);

/// Table of m^n_k on a chain: the k-th smallest of n arguments.
OpTable order_stat_table(int n, int k, Chain chain,
                         std::uint64_t budget = kDefaultTableBudget);

/// med_n = m^n_{(n+1)/2} for odd n.
OpTable median_table(int n, Chain chain, std::uint64_t budget = kDefaultTableBudget);

/// True iff f(x_1,...,x_n) = x whenever x occurs at least ceil((n+1)/2)
/// times among the arguments.
bool is_majority(const OpTable& table);

/// True iff the output is invariant under every permutation of the input.
bool is_totally_symmetric(const OpTable& table);

/// A finite lattice given by its meet and join tables. Idempotency,
/// commutativity, associativity and both absorption laws are checked
/// exhaustively on construction.
class FiniteLattice {
public:
    FiniteLattice(OpTable meet, OpTable join);

    int size() const { return meet_.domain.size(); }
    const OpTable& meet() const { return meet_; }
    const OpTable& join() const { return join_; }

    Element meet_of(Element a, Element b) const {
        return meet_.values[static_cast<std::uint64_t>(a) * size() + b];
    }
    Element join_of(Element a, Element b) const {
        return join_.values[static_cast<std::uint64_t>(a) * size() + b];
    }

private:
    OpTable meet_;
    OpTable join_;
};

/// The lattice induced by a chain: meet = min, join = max.
FiniteLattice chain_lattice(Chain chain);

/// The lattice generalization of m^n_k: the meet over all k-tuples
/// (j_1,...,j_k) of indices in {1,...,n}^k of the join of the selected
/// variables, computed literally from that formula.
OpTable lattice_order_stat(int n, int k, const FiniteLattice& lattice,
                           std::uint64_t budget = kDefaultTableBudget);

/// Lattice file format: `lattice <size>` followed by the meet table and the
/// join table in OpTable format.
void print_lattice(std::ostream& out, const FiniteLattice& lattice);
FiniteLattice parse_lattice(std::istream& in);

}  // namespace clonelab

#endif  // CLONELAB_ORDER_STATS_HPP
