#include <algorithm>
#include <set>
#include <sstream>

#include "clonelab/closure.hpp"
#include "clonelab/order_stats.hpp"
#include "doctest.h"

using namespace clonelab;

namespace {

std::set<std::string> member_keys(const CloneFragment& fragment) {
    std::set<std::string> keys;
    for (const auto& member : fragment.members()) keys.insert(canonical_key(member.table));
    return keys;
}

// max over the variables selected by a bitmask.
OpTable max_of_subset(int arity, unsigned mask, Chain chain) {
    const int m = chain.size();
    std::vector<Element> values(table_entry_count(m, arity));
    TupleOdometer it(arity, m);
    std::uint64_t rank = 0;
    do {
        Element best = 0;
        for (int i = 0; i < arity; ++i)
            if (mask & (1u << i)) best = std::max(best, it.tuple()[static_cast<std::size_t>(i)]);
        values[rank++] = best;
    } while (it.advance());
    return OpTable(arity, chain, std::move(values));
}

}  // namespace

TEST_CASE("the empty generator set closes to the projections") {
    ClosureBudget budget;
    budget.max_arity = 2;
    budget.validate_witnesses = true;
    const CloneFragment frag = close({}, Chain(2), budget);
    REQUIRE(frag.members().size() == 3);
    CHECK(frag.exhausted(1));
    CHECK(frag.exhausted(2));

    budget.max_arity = 3;
    const CloneFragment frag3 = close({}, Chain(2), budget);
    CHECK(frag3.members().size() == 6);  // pi^1_1, pi^2_*, pi^3_*
}

TEST_CASE("every projection within the arity budget is a member") {
    ClosureBudget budget;
    budget.max_arity = 3;
    const Chain c3(3);
    const CloneFragment frag = close({order_stat_table(2, 2, c3)}, c3, budget);
    for (int n = 1; n <= 3; ++n)
        for (int k = 1; k <= n; ++k) {
            auto idx = frag.find(projection_table(n, k, c3));
            REQUIRE(idx.has_value());
            CHECK(frag.is_projection_member(*idx));
        }
}

TEST_CASE("the clone of max_2 consists of the maxima of nonempty subsets") {
    ClosureBudget budget;
    budget.max_arity = 3;
    budget.validate_witnesses = true;
    const Chain c3(3);
    const CloneFragment frag = close({order_stat_table(2, 2, c3)}, c3, budget);
    for (int a = 1; a <= 3; ++a) CHECK(frag.exhausted(a));

    std::set<std::string> expected;
    for (int a = 1; a <= 3; ++a)
        for (unsigned mask = 1; mask < (1u << a); ++mask)
            expected.insert(canonical_key(max_of_subset(a, mask, c3)));
    CHECK(member_keys(frag) == expected);
    CHECK(frag.members().size() == 11);
}

TEST_CASE("close({med_5}) on the 5-chain reaches med_3") {
    ClosureBudget budget;
    budget.max_arity = 3;
    const Chain c5(5);
    const CloneFragment frag = close({median_table(5, c5)}, c5, budget);
    const ContainsResult r = contains(frag, median_table(3, c5));
    REQUIRE(r.status == Membership::Yes);
    REQUIRE(r.witness.has_value());
    // The witness must actually evaluate to med_3.
    Registry reg(c5);
    reg.add("g1", median_table(5, c5));
    CHECK(term_to_table(*r.witness, 3, reg) == median_table(3, c5));
}

TEST_CASE("a generator is contained with a depth-zero witness") {
    ClosureBudget budget;
    budget.max_arity = 3;
    const Chain c3(3);
    const OpTable med3 = median_table(3, c3);
    const CloneFragment frag = close({med3}, c3, budget);
    const ContainsResult r = contains(frag, med3);
    REQUIRE(r.status == Membership::Yes);
    CHECK(term_to_string(*r.witness) == "(op g1 (var 1) (var 2) (var 3))");
}

TEST_CASE("min generates no max: an exhausted No") {
    ClosureBudget budget;
    budget.max_arity = 2;
    const Chain c3(3);
    const CloneFragment frag = close({order_stat_table(2, 1, c3)}, c3, budget);
    REQUIRE(frag.exhausted(2));
    const ContainsResult r = contains(frag, order_stat_table(2, 2, c3));
    CHECK(r.status == Membership::No);
}

TEST_CASE("the binary part of <med_3> is projections only") {
    ClosureBudget budget;
    budget.max_arity = 2;
    const Chain c4(4);
    const CloneFragment frag = close({median_table(3, c4)}, c4, budget);
    REQUIRE(frag.exhausted(2));
    CHECK(frag.members().size() == 3);  // pi^1_1, pi^2_1, pi^2_2
    CHECK(contains(frag, order_stat_table(2, 1, c4)).status == Membership::No);
}

TEST_CASE("contains rejects over-budget arities and foreign chains") {
    ClosureBudget budget;
    budget.max_arity = 2;
    const Chain c3(3);
    const CloneFragment frag = close({}, c3, budget);
    CHECK_THROWS_AS(contains(frag, median_table(3, c3)), ArityOverBudget);
    CHECK_THROWS_AS(contains(frag, order_stat_table(2, 1, Chain(2))), DomainMismatch);
}

TEST_CASE("budget truncation reports Unknown, never a false No") {
    ClosureBudget budget;
    budget.max_arity = 3;
    budget.max_compositions = 2;
    const Chain c3(3);
    const CloneFragment frag = close({median_table(3, c3)}, c3, budget);
    CHECK(!frag.exhausted(3));
    const ContainsResult r = contains(frag, order_stat_table(3, 1, c3));
    CHECK(r.status == Membership::Unknown);
}

TEST_CASE("max_depth caps the BFS rounds") {
    ClosureBudget budget;
    budget.max_arity = 2;
    budget.max_depth = 0;
    const Chain c2(2);
    const CloneFragment frag = close({order_stat_table(2, 2, c2)}, c2, budget);
    CHECK(!frag.exhausted(2));
    CHECK(contains(frag, order_stat_table(2, 1, c2)).status == Membership::Unknown);
}

TEST_CASE("closure is idempotent on exhausted fragments") {
    ClosureBudget budget;
    budget.max_arity = 2;
    const Chain c2(2);
    const CloneFragment once = close({order_stat_table(2, 2, c2)}, c2, budget);
    REQUIRE(once.exhausted(1));
    REQUIRE(once.exhausted(2));
    std::vector<OpTable> regenerators;
    for (const auto& member : once.members()) regenerators.push_back(member.table);
    const CloneFragment twice = close(regenerators, c2, budget);
    CHECK(member_keys(once) == member_keys(twice));
}

TEST_CASE("closure is monotone in the generator set") {
    ClosureBudget budget;
    budget.max_arity = 2;
    const Chain c2(2);
    const CloneFragment small = close({order_stat_table(2, 2, c2)}, c2, budget);
    const CloneFragment large =
        close({order_stat_table(2, 2, c2), order_stat_table(2, 1, c2)}, c2, budget);
    const auto small_keys = member_keys(small);
    const auto large_keys = member_keys(large);
    CHECK(std::includes(large_keys.begin(), large_keys.end(), small_keys.begin(),
                        small_keys.end()));
}

TEST_CASE("witnesses evaluate to their tables across a whole fragment") {
    ClosureBudget budget;
    budget.max_arity = 3;
    budget.validate_witnesses = true;  // validated on every insertion
    const Chain c3(3);
    CHECK_NOTHROW(close({order_stat_table(4, 2, c3)}, c3, budget));
}

TEST_CASE("fragment dump interleaves tables and witnesses") {
    ClosureBudget budget;
    budget.max_arity = 1;
    const Chain c2(2);
    const CloneFragment frag = close({}, c2, budget);
    std::ostringstream out;
    frag.dump(out);
    CHECK(out.str() == "optable 1 2\n0 1\n(proj 1 1)\n");
}

namespace {

// Independent closure route: one-step composition with arbitrary members as
// outer operations, iterated to a fixpoint. Exponential, test-only.
std::set<std::string> member_outer_fixpoint(const std::vector<OpTable>& generators, Chain chain,
                                            int max_arity) {
    std::vector<OpTable> members;
    std::set<std::string> keys;
    const auto add = [&](const OpTable& t) {
        if (keys.insert(canonical_key(t)).second) members.push_back(t);
    };
    for (int a = 1; a <= max_arity; ++a)
        for (int k = 1; k <= a; ++k) add(projection_table(a, k, chain));
    for (const OpTable& g : generators)
        if (g.arity <= max_arity) add(g);

    std::vector<OpTable> outers = generators;  // arities above the budget stay usable
    for (;;) {
        const std::size_t before = members.size();
        std::vector<OpTable> all_outers = outers;
        all_outers.insert(all_outers.end(), members.begin(), members.end());
        for (const OpTable& f : all_outers) {
            for (int m = 1; m <= max_arity; ++m) {
                std::vector<const OpTable*> pool;
                for (const OpTable& t : members)
                    if (t.arity == m) pool.push_back(&t);
                std::vector<std::size_t> pick(static_cast<std::size_t>(f.arity), 0);
                if (pool.empty()) continue;
                for (;;) {
                    std::vector<OpTable> inners;
                    for (std::size_t i : pick) inners.push_back(*pool[i]);
                    add(compose(f, inners));
                    int pos = f.arity - 1;
                    while (pos >= 0 && ++pick[static_cast<std::size_t>(pos)] == pool.size())
                        pick[static_cast<std::size_t>(pos--)] = 0;
                    if (pos < 0) break;
                }
            }
        }
        if (members.size() == before) break;
    }
    return keys;
}

}  // namespace

TEST_CASE("generator-outer closure matches the member-outer rule at fixpoint") {
    const Chain c2(2);

    // Non-symmetric generator: x and-not y exercises the tuple enumeration.
    std::vector<Element> andnot{0, 0, 1, 0};  // (0,0),(0,1),(1,0),(1,1)
    const OpTable g(2, c2, std::move(andnot));
    ClosureBudget budget;
    budget.max_arity = 2;
    budget.validate_witnesses = true;
    const CloneFragment frag = close({g}, c2, budget);
    REQUIRE(frag.exhausted(2));
    CHECK(member_keys(frag) == member_outer_fixpoint({g}, c2, 2));

    // Symmetric generator above the arity budget exercises the multiset path.
    const OpTable m42 = order_stat_table(4, 2, c2);
    budget.max_arity = 3;
    const CloneFragment frag42 = close({m42}, c2, budget);
    for (int a = 1; a <= 3; ++a) REQUIRE(frag42.exhausted(a));
    CHECK(member_keys(frag42) == member_outer_fixpoint({m42}, c2, 3));

    // Boolean implication: non-monotone, non-conservative, produces the
    // constant 1 (x -> x) and a rich binary part.
    std::vector<Element> imp{1, 1, 0, 1};
    const OpTable implication(2, c2, std::move(imp));
    budget.max_arity = 2;
    const CloneFragment fragimp = close({implication}, c2, budget);
    REQUIRE(fragimp.exhausted(2));
    CHECK(member_keys(fragimp) == member_outer_fixpoint({implication}, c2, 2));
    CHECK(fragimp.find(OpTable(2, c2, {1, 1, 1, 1})).has_value());  // the constant 1
}

TEST_CASE("minimality probe accepts med_3 as minimal at desk scale") {
    ClosureBudget budget;
    budget.max_arity = 3;
    const Chain c3(3);
    const MinimalityProbe probe = minimality_probe(median_table(3, c3), c3, budget);
    CHECK(!probe.results.empty());
    CHECK(probe.all_regenerate());
    CHECK(probe.note.find("not a minimality proof") != std::string::npos);
}

TEST_CASE("minimality probe rejects projections") {
    ClosureBudget budget;
    const Chain c3(3);
    CHECK_THROWS_AS(minimality_probe(projection_table(3, 2, c3), c3, budget),
                    ProjectionGenerator);
}

TEST_CASE("the bounded closure of med^low_4 misses med_3 entirely") {
    // Stronger than the 81-map identification search: no ternary member of
    // the bounded closure of m^4_2 equals med_3, from an exhausted fixpoint.
    ClosureBudget budget;
    budget.max_arity = 3;
    for (int m = 3; m <= 4; ++m) {
        const Chain chain(m);
        const CloneFragment frag = close({order_stat_table(4, 2, chain)}, chain, budget);
        REQUIRE(frag.exhausted(3));
        CHECK(contains(frag, median_table(3, chain)).status == Membership::No);
    }
}

TEST_CASE("minimality probe finds min_2 inside <m^4_2>") {
    ClosureBudget budget;
    budget.max_arity = 3;
    const Chain c3(3);
    const MinimalityProbe probe = minimality_probe(order_stat_table(4, 2, c3), c3, budget);
    REQUIRE(!probe.failing.empty());
    const OpTable min2 = order_stat_table(2, 1, c3);
    bool min2_fails = false;
    for (std::uint32_t idx : probe.failing)
        if (probe.fragment.members()[idx].table == min2) min2_fails = true;
    CHECK(min2_fails);
}
