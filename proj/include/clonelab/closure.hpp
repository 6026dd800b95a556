#ifndef CLONELAB_CLOSURE_HPP
#define CLONELAB_CLOSURE_HPP

#include <cstdint>
#include <iosfwd>
#include <optional>
#include <string>
#include <unordered_map>
#include <vector>

#include "clonelab/op_table.hpp"
#include "clonelab/term.hpp"

namespace clonelab {

/// Truncation budget for closure search; <F> is infinite in general.
struct ClosureBudget {
    int max_arity = 3;
    std::size_t max_tables = 200'000;
    std::optional<int> max_depth;  // BFS rounds per arity
    std::uint64_t max_compositions = 200'000'000;
    bool validate_witnesses = false;  // tabulate every witness on insertion
};

enum class Membership { Yes, No, Unknown };

/// The set of canonical tables generated from a generator set up to the
/// budget, with witness terms reconstructible for every member.
///
/// Closure runs per arity: composing generators over member tuples of a
/// common arity never changes that arity, so each arity reaches its own
/// fixpoint independently.
class CloneFragment {
public:
    /// How a member arose; witnesses are rebuilt from this on demand.
    struct Provenance {
        enum class Kind { Proj, Gen, Comp };
        Kind kind;
        int a = 0;                          // Proj: arity; Gen/Comp: generator index
        int b = 0;                          // Proj: coordinate
        std::vector<std::uint32_t> inners;  // Comp: member indices, all of one arity
    };

    struct Member {
        OpTable table;
        Provenance prov;
    };

    Chain chain() const { return chain_; }
    const ClosureBudget& budget() const { return budget_; }
    const std::vector<Member>& members() const { return members_; }
    const std::vector<std::string>& generator_names() const { return gen_names_; }
    const std::vector<OpTable>& generators() const { return generators_; }

    bool exhausted(int arity) const;
    std::optional<std::uint32_t> find(const OpTable& table) const;
    bool is_projection_member(std::uint32_t index) const;

    /// The witness term of a member; evaluates to the member's table.
    Term witness(std::uint32_t index) const;

    /// One OpTable record per member plus its witness s-expression.
    void dump(std::ostream& out) const;

private:
    friend class ClosureRun;
    CloneFragment(Chain chain, ClosureBudget budget) : chain_(chain), budget_(budget) {}

    Chain chain_;
    ClosureBudget budget_;
    std::vector<OpTable> generators_;
    std::vector<std::string> gen_names_;
    std::vector<Member> members_;
    std::unordered_map<std::uint64_t, std::vector<std::uint32_t>> index_;
    std::vector<bool> exhausted_;  // per arity, 1-based
};

/// Bounded BFS closure of the clone generated by the tables. Budget
/// exhaustion is reported through the per-arity exhausted flags, never as an
/// exception. Generators may exceed max_arity (they then act only as outer
/// operations).
CloneFragment close(const std::vector<OpTable>& generators, Chain chain,
                    const ClosureBudget& budget, std::vector<std::string> names = {});

struct ContainsResult {
    Membership status;
    std::optional<Term> witness;  // set iff status == Yes
};

/// Membership of the target in the fragment. `No` is only reported from an
/// exhausted fixpoint at the target's arity.
ContainsResult contains(const CloneFragment& fragment, const OpTable& target);

/// Closure that stops early as soon as the target appears.
struct CloseUntilResult {
    CloneFragment fragment;
    ContainsResult membership;
};
CloseUntilResult close_until(const std::vector<OpTable>& generators, Chain chain,
                             const ClosureBudget& budget, const OpTable& target,
                             std::vector<std::string> names = {});

/// Desk-scale minimality probe: closes <f>, then asks for every
/// non-projection member g whether <g> regenerates f.
struct MinimalityProbe {
    struct Entry {
        std::uint32_t member;
        Membership regenerates;
    };

    CloneFragment fragment;
    std::vector<Entry> results;             // one per non-projection member
    std::vector<std::uint32_t> failing;     // members whose clone lacks f
    std::vector<std::uint32_t> unknown;     // budget-censored members
    std::string note;

    bool all_regenerate() const { return failing.empty() && unknown.empty(); }
};

MinimalityProbe minimality_probe(const OpTable& f, Chain chain, const ClosureBudget& budget);

}  // namespace clonelab

#endif  // CLONELAB_CLOSURE_HPP
