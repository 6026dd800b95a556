#ifndef CLONELAB_OP_TABLE_HPP
#define CLONELAB_OP_TABLE_HPP

#include <cstdint>
#include <iosfwd>
#include <span>
#include <string>
#include <vector>

#include "clonelab/chain.hpp"
#include "clonelab/errors.hpp"

namespace clonelab {

/// Default cap on table entries for exhaustive tabulation. Larger requests
/// must stay with pure term evaluation.
inline constexpr std::uint64_t kDefaultTableBudget = 10'000'000;

/// Number of entries of an n-ary table over a chain of the given size,
/// i.e. size^arity. Throws BudgetExceeded when the count would exceed `budget`.
std::uint64_t table_entry_count(int domain_size, int arity,
                                std::uint64_t budget = kDefaultTableBudget);

/// A total finitary operation on a finite chain, stored as a flat value
/// vector indexed by the lexicographic rank of the input tuple (leftmost
/// coordinate most significant).
struct OpTable {
    int arity;
    Chain domain;
    std::vector<Element> values;

    OpTable(int arity_, Chain domain_, std::vector<Element> values_);

    friend bool operator==(const OpTable& a, const OpTable& b) {
        return a.arity == b.arity && a.domain == b.domain && a.values == b.values;
    }
    friend bool operator!=(const OpTable& a, const OpTable& b) { return !(a == b); }
};

/// Lexicographic rank of a tuple, leftmost coordinate most significant.
std::uint64_t lex_rank(std::span<const Element> tuple, int domain_size);

/// Inverse of lex_rank.
std::vector<Element> rank_to_tuple(std::uint64_t rank, int domain_size, int arity);

/// Enumerates all tuples of a fixed arity over a chain in lexicographic
/// (= rank) order.
class TupleOdometer {
public:
    TupleOdometer(int arity, int domain_size)
        : tuple_(static_cast<std::size_t>(arity), 0), domain_size_(domain_size) {}

    std::span<const Element> tuple() const { return tuple_; }

    /// Advances to the next tuple; returns false after the last one.
    bool advance() {
        for (int i = static_cast<int>(tuple_.size()) - 1; i >= 0; --i) {
            if (tuple_[static_cast<std::size_t>(i)] + 1 < domain_size_) {
                ++tuple_[static_cast<std::size_t>(i)];
                return true;
            }
            tuple_[static_cast<std::size_t>(i)] = 0;
        }
        return false;
    }

private:
    std::vector<Element> tuple_;
    int domain_size_;
};

/// Function application: values[lex_rank(input)].
Element eval_op(const OpTable& table, std::span<const Element> input);

/// The projection pi^n_k as a table (1-based k).
OpTable projection_table(int n, int k, Chain chain,
                         std::uint64_t budget = kDefaultTableBudget);

/// Whether the table equals some projection pi^n_k; returns k (1-based) or 0.
int projection_index(const OpTable& table);

/// Clone composition f(g_1,...,g_n): all inners share one arity and the
/// outer's domain; the result has the inners' arity.
OpTable compose(const OpTable& outer, std::span<const OpTable> inners);

/// A total assignment {1,...,source_arity} -> {1,...,target_arity}
/// describing a simple identification of variables.
struct VarMap {
    int source_arity;
    int target_arity;
    std::vector<int> assignment;  // 1-based targets, one per source position

    VarMap(int source_arity_, int target_arity_, std::vector<int> assignment_);
};

/// result(y) = table(y_{map(1)},...,y_{map(n)}).
OpTable identify_vars(const OpTable& table, const VarMap& map,
                      std::uint64_t budget = kDefaultTableBudget);

/// Injective byte-string key on (arity, domain, values): equal tables give
/// equal keys and vice versa. Used as the dedup key in closure search.
std::string canonical_key(const OpTable& table);

/// First input tuple where two same-shape tables differ, rendered as
/// "(x_1,...,x_n): lhs=a rhs=b"; empty when the tables are equal.
std::string first_difference(const OpTable& lhs, const OpTable& rhs);

/// Text format: header line `optable <arity> <domain_size>`, then
/// domain_size^arity whitespace-separated integers in lexicographic order.
void print_op_table(std::ostream& out, const OpTable& table);
OpTable parse_op_table(std::istream& in);
std::string op_table_to_string(const OpTable& table);
OpTable op_table_from_string(const std::string& text);

}  // namespace clonelab

#endif  // CLONELAB_OP_TABLE_HPP
