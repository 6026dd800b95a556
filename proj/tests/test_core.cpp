#include <algorithm>
#include <vector>

#include "clonelab/op_table.hpp"
#include "clonelab/order_stats.hpp"
#include "clonelab/term.hpp"
#include "doctest.h"

using namespace clonelab;

namespace {

// Independent oracle: full sort, then index. The library itself selects by
// value counting, so the two routes share no code.
Element sorted_kth(std::vector<Element> tuple, int k) {
    std::sort(tuple.begin(), tuple.end());
    return tuple[static_cast<std::size_t>(k - 1)];
}

std::vector<Element> t(std::initializer_list<int> xs) {
    std::vector<Element> out;
    for (int x : xs) out.push_back(static_cast<Element>(x));
    return out;
}

}  // namespace

TEST_CASE("chain rejects degenerate sizes") {
    CHECK_THROWS_AS(Chain(1), InvalidChain);
    CHECK_THROWS_AS(Chain(0), InvalidChain);
    CHECK_NOTHROW(Chain(2));
}

TEST_CASE("lex_rank is a bijection for all chains <= 4, arities <= 5") {
    for (int m = 2; m <= 4; ++m) {
        for (int n = 1; n <= 5; ++n) {
            const std::uint64_t count = table_entry_count(m, n);
            for (std::uint64_t r = 0; r < count; ++r) {
                const std::vector<Element> tuple = rank_to_tuple(r, m, n);
                CHECK(lex_rank(tuple, m) == r);
            }
        }
    }
}

TEST_CASE("eval_op on projections and medians") {
    const Chain c3(3);
    const OpTable pi32 = projection_table(3, 2, c3);
    CHECK(eval_op(pi32, t({0, 2, 1})) == 2);

    const OpTable med3 = median_table(3, c3);
    CHECK(eval_op(med3, t({0, 2, 1})) == 1);

    const OpTable m42 = order_stat_table(4, 2, c3);
    CHECK(eval_op(m42, t({1, 1, 2, 0})) == sorted_kth(t({1, 1, 2, 0}), 2));
    CHECK(eval_op(m42, t({1, 1, 2, 0})) == 1);
}

TEST_CASE("eval_op validates input") {
    const Chain c3(3);
    const OpTable med3 = median_table(3, c3);
    CHECK_THROWS_AS(eval_op(med3, t({0, 1})), ArityMismatch);
    CHECK_THROWS_AS(eval_op(med3, t({0, 1, 3})), ElementOutOfRange);
}

TEST_CASE("composition with projections") {
    const Chain c3(3);
    const OpTable pi21 = projection_table(2, 1, c3);
    const OpTable min2 = order_stat_table(2, 1, c3);
    const OpTable max2 = order_stat_table(2, 2, c3);

    // Projection absorbs composition.
    std::vector<OpTable> fg{min2, max2};
    CHECK(compose(pi21, fg) == min2);

    // max_2(min_2, max_2) at (1,2) = max(1,2).
    const OpTable nested = compose(max2, fg);
    CHECK(eval_op(nested, t({1, 2})) == 2);
}

TEST_CASE("med_3 over doubled projections collapses to a projection") {
    // The median of the multiset {x,x,y} is x whatever the order of x and y,
    // so the composition is pi^2_1 and in particular not min_2. Verified here
    // by exhaustive 4-tuple evaluation on the two-element chain.
    const Chain c2(2);
    const OpTable med3 = median_table(3, c2);
    std::vector<OpTable> inners{projection_table(2, 1, c2), projection_table(2, 1, c2),
                                projection_table(2, 2, c2)};
    const OpTable result = compose(med3, inners);
    CHECK(result == projection_table(2, 1, c2));
    CHECK(result.values == std::vector<Element>{0, 0, 1, 1});
    CHECK(result != order_stat_table(2, 1, c2));
}

TEST_CASE("compose validates shapes") {
    const Chain c3(3);
    const OpTable med3 = median_table(3, c3);
    const OpTable min2 = order_stat_table(2, 1, c3);
    std::vector<OpTable> two{min2, min2};
    CHECK_THROWS_AS(compose(med3, two), ArityMismatch);
    std::vector<OpTable> mixed{min2, min2, projection_table(1, 1, c3)};
    CHECK_THROWS_AS(compose(med3, mixed), ArityMismatch);
    std::vector<OpTable> wrong_domain{min2, min2, order_stat_table(2, 1, Chain(2))};
    CHECK_THROWS_AS(compose(med3, wrong_domain), DomainMismatch);
}

TEST_CASE("identify_vars: identity map leaves med_3 unchanged") {
    const Chain c3(3);
    const OpTable med3 = median_table(3, c3);
    const VarMap id(3, 3, {1, 2, 3});
    CHECK(identify_vars(med3, id) == med3);
}

TEST_CASE("identify_vars: med_5 with (1,2,2,3,3) is med_3 on chains up to 4") {
    for (int m = 2; m <= 4; ++m) {
        const Chain chain(m);
        const OpTable med5 = median_table(5, chain);
        const VarMap map(5, 3, {1, 2, 2, 3, 3});
        CHECK(identify_vars(med5, map) == median_table(3, chain));
    }
}

TEST_CASE("identify_vars: m^4_2 with (1,1,2,2) is min_2") {
    for (int m = 2; m <= 4; ++m) {
        const Chain chain(m);
        const OpTable m42 = order_stat_table(4, 2, chain);
        const VarMap map(4, 2, {1, 1, 2, 2});
        CHECK(identify_vars(m42, map) == order_stat_table(2, 1, chain));
    }
}

TEST_CASE("identify_vars validates the map") {
    const Chain c3(3);
    const OpTable med3 = median_table(3, c3);
    CHECK_THROWS_AS(identify_vars(med3, VarMap(2, 2, {1, 2})), ArityMismatch);
    CHECK_THROWS_AS(VarMap(3, 2, {1, 2, 3}), InvalidVarMap);
    CHECK_THROWS_AS(VarMap(3, 2, {1, 2}), InvalidVarMap);
}

TEST_CASE("compose over projections agrees with identify_vars") {
    const Chain c3(3);
    const std::vector<OpTable> corpus{median_table(3, c3), order_stat_table(3, 1, c3),
                                      order_stat_table(3, 3, c3)};
    // Every map {1,2,3} -> {1,2} induces both a projection tuple and a VarMap.
    for (const OpTable& f : corpus) {
        for (int a = 1; a <= 2; ++a)
            for (int b = 1; b <= 2; ++b)
                for (int c = 1; c <= 2; ++c) {
                    std::vector<OpTable> projections{projection_table(2, a, c3),
                                                     projection_table(2, b, c3),
                                                     projection_table(2, c, c3)};
                    const VarMap map(3, 2, {a, b, c});
                    CHECK(compose(f, projections) == identify_vars(f, map));
                }
    }
}

TEST_CASE("composition is associative at the table level") {
    const Chain c2(2);
    const std::vector<OpTable> binary{order_stat_table(2, 1, c2), order_stat_table(2, 2, c2),
                                      projection_table(2, 1, c2), projection_table(2, 2, c2)};
    const std::vector<OpTable> ternary{median_table(3, c2), projection_table(3, 1, c2),
                                       projection_table(3, 2, c2), projection_table(3, 3, c2)};
    for (const OpTable& f : ternary) {
        for (const OpTable& g1 : binary)
            for (const OpTable& g2 : binary)
                for (const OpTable& g3 : binary) {
                    const std::vector<OpTable> gs{g1, g2, g3};
                    for (const OpTable& h1 : ternary)
                        for (const OpTable& h2 : ternary) {
                            const std::vector<OpTable> hs{h1, h2};
                            const OpTable lhs = compose(compose(f, gs), hs);
                            std::vector<OpTable> inner;
                            inner.reserve(gs.size());
                            for (const OpTable& g : gs) inner.push_back(compose(g, hs));
                            const OpTable rhs = compose(f, inner);
                            REQUIRE(lhs == rhs);
                        }
                }
    }
}

TEST_CASE("canonical_key separates tables exactly") {
    const Chain c2(2);
    const OpTable med3a = median_table(3, c2);
    const OpTable med3b = order_stat_table(3, 2, c2);
    CHECK(canonical_key(med3a) == canonical_key(med3b));

    const OpTable max3 = order_stat_table(3, 3, c2);
    CHECK(canonical_key(med3a) != canonical_key(max3));
    // They differ at (0,0,1): med = 0, max = 1.
    CHECK(eval_op(med3a, t({0, 0, 1})) == 0);
    CHECK(eval_op(max3, t({0, 0, 1})) == 1);

    // Same value bytes, different shape must differ too.
    const OpTable unary = OpTable(1, Chain(4), {0, 1, 0, 1});
    const OpTable pi22 = projection_table(2, 2, Chain(2));
    CHECK(unary.values == pi22.values);
    CHECK(canonical_key(unary) != canonical_key(pi22));
}

TEST_CASE("optable text format round-trips bit-exactly") {
    const Chain c3(3);
    const std::vector<OpTable> corpus{median_table(3, c3), order_stat_table(4, 2, c3),
                                      projection_table(2, 2, c3)};
    for (const OpTable& table : corpus) {
        const std::string once = op_table_to_string(table);
        const OpTable parsed = op_table_from_string(once);
        CHECK(parsed == table);
        CHECK(canonical_key(parsed) == canonical_key(table));
        CHECK(op_table_to_string(parsed) == once);
    }
}

TEST_CASE("optable parser rejects malformed input") {
    CHECK_THROWS_AS(op_table_from_string("noptable 1 2\n0 1"), ParseError);
    CHECK_THROWS_AS(op_table_from_string("optable 2 2\n0 1 0"), ParseError);
    CHECK_THROWS_AS(op_table_from_string("optable 1 2\n0 2"), ParseError);
}

TEST_CASE("eval_term basics") {
    const Chain c6(6);
    const Registry reg(c6);
    const Term v1 = Term::var(1);
    std::vector<Element> input{4};
    CHECK(eval_term(v1, input, reg) == 4);

    const Term med = Term::apply("m:3:2", {Term::var(1), Term::var(2), Term::var(3)});
    CHECK(eval_term(med, t({0, 2, 1}), reg) == 1);
}

TEST_CASE("term_to_table tabulates projections and symbolic ops") {
    const Chain c2(2);
    const Registry reg(c2);
    const OpTable p = term_to_table(Term::proj(2, 1), 2, reg);
    CHECK(p.values == std::vector<Element>{0, 0, 1, 1});

    const Term max3 = Term::apply("m:3:3", {Term::var(1), Term::var(2), Term::var(3)});
    const OpTable disj = term_to_table(max3, 3, reg);
    CHECK(disj == order_stat_table(3, 3, c2));
}

TEST_CASE("term evaluation agrees with tabulation on small chains") {
    std::vector<Term> corpus;
    corpus.push_back(Term::apply("m:3:2", {Term::var(1), Term::var(2), Term::var(3)}));
    corpus.push_back(Term::apply(
        "m:3:2", {Term::var(2), Term::apply("max:2", {Term::var(1), Term::var(3)}), Term::var(1)}));
    corpus.push_back(Term::apply("min:2", {Term::apply("m:3:1", {Term::var(1), Term::var(1),
                                                                 Term::var(2)}),
                                           Term::var(3)}));
    corpus.push_back(Term::proj(3, 3));
    for (int m = 2; m <= 4; ++m) {
        const Chain chain(m);
        const Registry reg(chain);
        for (const Term& term : corpus) {
            const OpTable table = term_to_table(term, 3, reg);
            TupleOdometer it(3, m);
            std::uint64_t rank = 0;
            do {
                REQUIRE(table.values[rank++] == eval_term(term, it.tuple(), reg));
            } while (it.advance());
        }
    }
}

TEST_CASE("registered tables resolve in terms") {
    const Chain c3(3);
    Registry reg(c3);
    reg.add("f", median_table(3, c3));
    const Term term = Term::apply("f", {Term::var(1), Term::var(1), Term::var(2)});
    const OpTable table = term_to_table(term, 2, reg);
    CHECK(table == projection_table(2, 1, c3));  // med_3(x,x,y) = x

    const Term bad = Term::apply("g", {Term::var(1)});
    CHECK_THROWS_AS(term_to_table(bad, 1, reg), UnknownOp);
}

TEST_CASE("validate_term catches arity violations") {
    const Chain c2(2);
    const Registry reg(c2);
    CHECK_THROWS_AS(validate_term(Term::var(3), 2, reg), ArityMismatch);
    CHECK_THROWS_AS(validate_term(Term::proj(3, 1), 2, reg), ArityMismatch);
    CHECK_THROWS_AS(
        validate_term(Term::apply("m:3:2", {Term::var(1), Term::var(2)}), 2, reg),
        ArityMismatch);
    CHECK_NOTHROW(validate_term(Term::proj(2, 2), 2, reg));
}

TEST_CASE("term s-expressions round-trip") {
    const std::vector<std::string> texts{
        "(var 1)",
        "(proj 3 2)",
        "(op m:3:2 (var 1) (var 2) (var 3))",
        "(op med:3 (op min:2 (var 1) (var 2)) (var 2) (proj 3 3))",
    };
    for (const std::string& text : texts) {
        const Term term = term_from_string(text);
        CHECK(term_to_string(term) == text);
    }
    CHECK_THROWS_AS(term_from_string("(var 1) junk"), ParseError);
    CHECK_THROWS_AS(term_from_string("(op f"), ParseError);
    CHECK_THROWS_AS(term_from_string("(bogus 1)"), ParseError);
}

TEST_CASE("tabulation refuses tables beyond the budget") {
    const Chain c4(4);
    const Registry reg(c4);
    // 4^13 entries exceed the default cap of 10^7.
    CHECK_THROWS_AS(term_to_table(Term::var(1), 13, reg), BudgetExceeded);
    CHECK_THROWS_AS(order_stat_table(13, 2, c4), BudgetExceeded);
}

TEST_CASE("first_difference pinpoints the earliest mismatch") {
    const Chain c2(2);
    const OpTable med3 = median_table(3, c2);
    const OpTable max3 = order_stat_table(3, 3, c2);
    CHECK(first_difference(med3, med3).empty());
    CHECK(first_difference(med3, max3) == "(0,0,1): lhs=0 rhs=1");
}

TEST_CASE("eval_term_on_naturals handles symbolic terms only") {
    const Term term = Term::apply("m:3:2", {Term::var(1), Term::var(2), Term::var(3)});
    std::vector<std::int64_t> input{100, 7, 55};
    CHECK(eval_term_on_naturals(term, input) == 55);

    const Term named = Term::apply("f", {Term::var(1)});
    std::vector<std::int64_t> one{3};
    CHECK_THROWS_AS(eval_term_on_naturals(named, one), NonMonotoneSymbol);
}
