#include "clonelab/wildness.hpp"

#include <algorithm>
#include <bit>
#include <numeric>
#include <sstream>

#include "clonelab/order_stats.hpp"

namespace clonelab {

namespace {

void check_family_arity(int n) {
    if (n < 1) throw ArityMismatch("family arity must be positive");
    if (n > 20) throw ArityTooLargeForSearch("families are capped at 20 coordinates");
}

}  // namespace

WildFamily::WildFamily(int ambient_arity, std::vector<std::uint32_t> members)
    : n_(ambient_arity), members_(std::move(members)) {
    check_family_arity(n_);
    std::sort(members_.begin(), members_.end());
    members_.erase(std::unique(members_.begin(), members_.end()), members_.end());
    const std::uint32_t full = full_mask();
    for (std::uint32_t mask : members_) {
        if (mask & ~full) throw IndexOutOfRange("family member outside {1,...,n}");
        // Closure under adding one element is closure under taking supersets.
        for (int i = 0; i < n_; ++i) {
            const std::uint32_t larger = mask | (1u << i);
            if (larger != mask && !std::binary_search(members_.begin(), members_.end(), larger))
                throw Error("family is not upward closed");
        }
    }
}

WildFamily WildFamily::upward_closure(int ambient_arity, std::span<const std::uint32_t> sets) {
    check_family_arity(ambient_arity);
    const std::uint32_t full =
        ambient_arity == 32 ? ~0u : (1u << ambient_arity) - 1;
    std::vector<std::uint32_t> members;
    for (std::uint32_t seed : sets) {
        if (seed & ~full) throw IndexOutOfRange("set outside {1,...,n}");
        // All supersets of seed: iterate over subsets of the complement.
        const std::uint32_t rest = full & ~seed;
        std::uint32_t sub = rest;
        for (;;) {
            members.push_back(seed | sub);
            if (sub == 0) break;
            sub = (sub - 1) & rest;
        }
    }
    std::sort(members.begin(), members.end());
    members.erase(std::unique(members.begin(), members.end()), members.end());
    return WildFamily(ambient_arity, std::move(members));
}

bool WildFamily::contains(std::uint32_t mask) const {
    return std::binary_search(members_.begin(), members_.end(), mask);
}

std::vector<std::uint32_t> WildFamily::minimal_sets() const {
    std::vector<std::uint32_t> minimal;
    for (std::uint32_t a : members_) {
        bool is_minimal = true;
        for (std::uint32_t b : members_) {
            if (b == a) continue;
            if ((a & b) == b) {  // b is a proper subset of a
                is_minimal = false;
                break;
            }
        }
        if (is_minimal) minimal.push_back(a);
    }
    return minimal;
}

WildFamily WildFamily::permuted(std::span<const int> perm) const {
    if (static_cast<int>(perm.size()) != n_)
        throw ArityMismatch("permutation length does not match the family arity");
    std::vector<std::uint32_t> mapped;
    mapped.reserve(members_.size());
    for (std::uint32_t mask : members_) {
        std::uint32_t image = 0;
        for (int i = 0; i < n_; ++i)
            if (mask & (1u << i)) image |= 1u << (perm[static_cast<std::size_t>(i)] - 1);
        mapped.push_back(image);
    }
    return WildFamily(n_, std::move(mapped));
}

WildFamily wild_family_of_order_stat(int n, int k) {
    check_family_arity(n);
    if (k < 1 || k > n) throw IndexOutOfRange("order statistic index out of range");
    std::vector<std::uint32_t> members;
    const std::uint32_t full = n == 32 ? ~0u : (1u << n) - 1;
    const int threshold = n - k + 1;
    for (std::uint32_t mask = 0; mask <= full; ++mask)
        if (std::popcount(mask) >= threshold) members.push_back(mask);
    return WildFamily(n, std::move(members));
}

namespace {

bool eval_two_point(const Term& term, std::uint32_t mask) {
    switch (term.kind()) {
        case Term::Kind::Var:
            return (mask >> (term.var_index() - 1)) & 1u;
        case Term::Kind::Proj:
            return (mask >> (term.proj_index() - 1)) & 1u;
        case Term::Kind::Apply: {
            const auto sym = parse_symbolic_op(term.op_name());
            int infinite = 0;
            for (const Term& c : term.children())
                if (eval_two_point(c, mask)) ++infinite;
            return infinite >= sym->n - sym->k + 1;
        }
    }
    throw Error("unreachable");
}

}  // namespace

WildFamily wild_family_of_term(const Term& term, int ambient_arity) {
    check_family_arity(ambient_arity);
    require_monotone_symbols(term);
    validate_term(term, ambient_arity, Registry(Chain(2)));
    const std::uint32_t full = (1u << ambient_arity) - 1;
    std::vector<std::uint32_t> members;
    for (std::uint32_t mask = 0; mask <= full; ++mask)
        if (eval_two_point(term, mask)) members.push_back(mask);
    return WildFamily(ambient_arity, std::move(members));
}

GrowthVerdict oracle_wild_check(const GrowthProbe& probe) {
    check_family_arity(probe.ambient_arity);
    require_monotone_symbols(probe.term);
    validate_term(probe.term, probe.ambient_arity, Registry(Chain(2)));
    if (probe.prefix_bound < 1) throw IndexOutOfRange("the prefix bound must be at least 1");
    if (probe.subset_mask & ~((probe.ambient_arity == 32 ? ~0u : (1u << probe.ambient_arity) - 1)))
        throw IndexOutOfRange("subset outside {1,...,n}");

    std::vector<std::int64_t> values(static_cast<std::size_t>(probe.prefix_bound) + 1);
    std::vector<std::int64_t> input(static_cast<std::size_t>(probe.ambient_arity));
    for (int m = 0; m <= probe.prefix_bound; ++m) {
        for (int i = 0; i < probe.ambient_arity; ++i)
            input[static_cast<std::size_t>(i)] = ((probe.subset_mask >> i) & 1u) ? m : 0;
        values[static_cast<std::size_t>(m)] = eval_term_on_naturals(probe.term, input);
    }
    // Eventually strictly equal to m: some tail with value(m) = m throughout.
    int tail_start = probe.prefix_bound + 1;
    for (int m = probe.prefix_bound; m >= 0; --m) {
        if (values[static_cast<std::size_t>(m)] != m) break;
        tail_start = m;
    }
    return tail_start <= probe.prefix_bound ? GrowthVerdict::Unbounded
                                            : GrowthVerdict::BoundedUpToM;
}

bool in_pol_t1(const WildFamily& family) {
    const std::vector<std::uint32_t> minimal = family.minimal_sets();
    for (std::size_t i = 0; i < minimal.size(); ++i)
        for (std::size_t j = i + 1; j < minimal.size(); ++j)
            if ((minimal[i] & minimal[j]) == 0) return false;
    return true;
}

bool is_almost_unary_family(const WildFamily& family) {
    const int n = family.ambient_arity();
    if (n < 2) throw ArityTooSmall("almost unarity needs at least two coordinates");
    const std::uint32_t full = family.full_mask();
    for (int i = 0; i < n; ++i)
        if (!family.contains(full & ~(1u << i))) return true;
    return false;
}

std::optional<std::vector<int>> wild_leq(const WildFamily& f, const WildFamily& g) {
    const int n = f.ambient_arity();
    if (n != g.ambient_arity())
        throw ArityMismatch("wildness comparison needs equal ambient arities");
    if (n > 8) throw ArityTooLargeForSearch("permutation search is capped at n = 8");

    // Mapping the minimal sets into g suffices: images of supersets are
    // supersets of images, and g is upward closed.
    const std::vector<std::uint32_t> minimal = f.minimal_sets();
    std::vector<int> perm(static_cast<std::size_t>(n));
    std::iota(perm.begin(), perm.end(), 1);
    do {
        bool ok = true;
        for (std::uint32_t mask : minimal) {
            std::uint32_t image = 0;
            for (int i = 0; i < n; ++i)
                if (mask & (1u << i)) image |= 1u << (perm[static_cast<std::size_t>(i)] - 1);
            if (!g.contains(image)) {
                ok = false;
                break;
            }
        }
        if (ok) return perm;
    } while (std::next_permutation(perm.begin(), perm.end()));
    return std::nullopt;
}

bool wild_equiv(const WildFamily& f, const WildFamily& g) {
    return wild_leq(f, g).has_value() && wild_leq(g, f).has_value();
}

Term build_intersecting_term(std::span<const std::uint32_t> sets, int ambient_arity) {
    check_family_arity(ambient_arity);
    const std::uint32_t full =
        ambient_arity == 32 ? ~0u : (1u << ambient_arity) - 1;
    for (std::uint32_t a : sets)
        if (a & ~full) throw IndexOutOfRange("set outside {1,...,n}");
    for (std::size_t i = 0; i < sets.size(); ++i)
        for (std::size_t j = i; j < sets.size(); ++j)
            if ((sets[i] & sets[j]) == 0)
                throw NotPairwiseIntersecting("sets must pairwise intersect and be nonempty");

    const auto lowest_index = [](std::uint32_t mask) {
        return std::countr_zero(mask) + 1;  // 1-based coordinate
    };

    const std::size_t k = sets.size();
    if (k == 0) return Term::proj(ambient_arity, 1);
    if (k == 1) return Term::proj(ambient_arity, lowest_index(sets[0]));
    if (k == 2) return Term::proj(ambient_arity, lowest_index(sets[0] & sets[1]));

    std::vector<std::uint32_t> b(sets.begin(), sets.end() - 1);
    std::vector<std::uint32_t> c(sets.begin(), sets.end() - 2);
    c.push_back(sets[k - 1]);
    const std::uint32_t d[2] = {sets[k - 2], sets[k - 1]};
    return Term::apply("med:3", {build_intersecting_term(b, ambient_arity),
                                 build_intersecting_term(c, ambient_arity),
                                 build_intersecting_term(d, ambient_arity)});
}

int chain_level(int n, int k) {
    if (k < 2 || k > n) throw IndexOutOfRange("chain levels need 2 <= k <= n");
    return (n + k - 2) / (k - 1);  // ceil(n/(k-1))
}

VarMap classification_identity_map(int n, int k) {
    if (k < 2 || k > n) throw IndexOutOfRange("classification needs 2 <= k <= n");
    const int q = n / (k - 1);
    const int r = n % (k - 1);
    std::vector<int> assignment;
    assignment.reserve(static_cast<std::size_t>(n));
    for (int j = 1; j <= q; ++j)
        for (int c = 0; c < k - 1; ++c) assignment.push_back(j);
    for (int c = 0; c < r; ++c) assignment.push_back(q + 1);
    return VarMap(n, chain_level(n, k), std::move(assignment));
}

ChainBound chain_lower_bound_from_wild_set(const WildFamily& family, int k) {
    if (is_almost_unary_family(family))
        throw AlmostUnary("almost unary families yield no chain bound");
    const int n = family.ambient_arity();
    if (k < 1 || k > n) throw IndexOutOfRange("wild-set size out of range");
    bool found = false;
    for (std::uint32_t mask : family.members())
        if (std::popcount(mask) == k) {
            found = true;
            break;
        }
    if (!found)
        throw IndexOutOfRange("the family has no wild set of " + std::to_string(k) + " elements");
    std::vector<int> assignment;
    assignment.reserve(static_cast<std::size_t>(n));
    for (int i = 1; i <= n; ++i) assignment.push_back(std::min(i, k + 1));
    return ChainBound{k + 1, VarMap(n, k + 1, std::move(assignment))};
}

std::string family_to_json(const WildFamily& family) {
    std::vector<std::vector<int>> lists;
    for (std::uint32_t mask : family.members()) {
        std::vector<int> indices;
        for (int i = 0; i < family.ambient_arity(); ++i)
            if (mask & (1u << i)) indices.push_back(i + 1);
        lists.push_back(std::move(indices));
    }
    std::sort(lists.begin(), lists.end());
    std::ostringstream out;
    out << '[';
    for (std::size_t i = 0; i < lists.size(); ++i) {
        if (i) out << ',';
        out << '[';
        for (std::size_t j = 0; j < lists[i].size(); ++j) {
            if (j) out << ',';
            out << lists[i][j];
        }
        out << ']';
    }
    out << ']';
    return out.str();
}

}  // namespace clonelab
