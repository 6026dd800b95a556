#ifndef CLONELAB_TERM_HPP
#define CLONELAB_TERM_HPP

#include <cstdint>
#include <iosfwd>
#include <memory>
#include <span>
#include <string>
#include <unordered_map>
#include <vector>

#include "clonelab/op_table.hpp"

namespace clonelab {

/// Abstract syntax tree over named operations, projections and variable
/// leaves. Terms are immutable; copies share structure.
///
/// Variable and projection indices are 1-based, matching x_1,...,x_n.
class Term {
public:
    enum class Kind { Var, Proj, Apply };

    static Term var(int index);
    static Term proj(int arity, int index);
    static Term apply(std::string op, std::vector<Term> children);

    Kind kind() const { return kind_; }
    bool is_var() const { return kind_ == Kind::Var; }
    bool is_proj() const { return kind_ == Kind::Proj; }
    bool is_apply() const { return kind_ == Kind::Apply; }

    int var_index() const { return a_; }
    int proj_arity() const { return a_; }
    int proj_index() const { return b_; }
    const std::string& op_name() const { return *op_; }
    const std::vector<Term>& children() const { return *children_; }

    std::size_t node_count() const;

    /// Smallest ambient arity this term can be evaluated at: the largest
    /// variable index or leaf projection arity occurring in it.
    int min_ambient_arity() const;

private:
    Term(Kind kind, int a, int b) : kind_(kind), a_(a), b_(b) {}

    Kind kind_;
    int a_ = 0;  // Var index / Proj arity
    int b_ = 0;  // Proj index
    std::shared_ptr<const std::string> op_;
    std::shared_ptr<const std::vector<Term>> children_;
};

/// Named operation tables over one fixed chain. Symbolic order-statistic
/// names (m:n:k, med:n, min:n, max:n) are always resolvable and never need
/// to be registered.
class Registry {
public:
    explicit Registry(Chain chain) : chain_(chain) {}

    Chain chain() const { return chain_; }

    void add(const std::string& name, OpTable table);
    bool has(const std::string& name) const { return tables_.count(name) > 0; }
    const OpTable& table(const std::string& name) const;

private:
    Chain chain_;
    std::unordered_map<std::string, OpTable> tables_;
};

/// Checks arity consistency, variable bounds against the ambient arity, and
/// that every op name is registered or symbolic. Throws on violation.
void validate_term(const Term& term, int ambient_arity, const Registry& registry);

/// Recursive evaluation on chain elements. Symbolic order-statistic symbols
/// are computed directly from the input values, without tabulation.
Element eval_term(const Term& term, std::span<const Element> input, const Registry& registry);

/// Exhaustive tabulation of a term at the given ambient arity.
OpTable term_to_table(const Term& term, int ambient_arity, const Registry& registry,
                      std::uint64_t budget = kDefaultTableBudget);

/// Evaluation over arbitrary naturals. Only projections, variables and
/// symbolic order-statistic symbols are allowed; a reference to a registered
/// table has no meaning off the chain and raises NonMonotoneSymbol.
std::int64_t eval_term_on_naturals(const Term& term, std::span<const std::int64_t> input);

/// Throws NonMonotoneSymbol unless every Apply node uses a symbolic
/// order-statistic name.
void require_monotone_symbols(const Term& term);

/// S-expression text format: `(var i)`, `(proj n k)`, `(op NAME child...)`.
void print_term(std::ostream& out, const Term& term);
std::string term_to_string(const Term& term);
Term parse_term(std::istream& in);
Term term_from_string(const std::string& text);

}  // namespace clonelab

#endif  // CLONELAB_TERM_HPP
