#include <algorithm>
#include <sstream>
#include <vector>

#include "clonelab/op_table.hpp"
#include "clonelab/order_stats.hpp"
#include "doctest.h"

using namespace clonelab;

namespace {

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

TEST_CASE("symbolic op names") {
    auto m53 = parse_symbolic_op("m:5:3");
    REQUIRE(m53.has_value());
    CHECK(m53->n == 5);
    CHECK(m53->k == 3);

    auto med5 = parse_symbolic_op("med:5");
    REQUIRE(med5.has_value());
    CHECK(med5->k == 3);

    CHECK(parse_symbolic_op("min:4")->k == 1);
    CHECK(parse_symbolic_op("max:4")->k == 4);
    CHECK(!parse_symbolic_op("foo").has_value());
    CHECK(!parse_symbolic_op("m:x:1").has_value());
    CHECK_THROWS_AS(parse_symbolic_op("med:4"), EvenArity);
    CHECK_THROWS_AS(parse_symbolic_op("m:3:4"), IndexOutOfRange);
}

TEST_CASE("order statistics return the k-th smallest with multiplicity") {
    const Chain c3(3);
    CHECK(eval_op(order_stat_table(3, 2, c3), t({0, 2, 1})) == 1);

    const Chain c4(4);
    CHECK(eval_op(order_stat_table(5, 5, c4), t({1, 0, 3, 2, 2})) == 3);

    CHECK(eval_op(order_stat_table(4, 2, c3), t({2, 2, 0, 1})) == sorted_kth(t({2, 2, 0, 1}), 2));
    CHECK(eval_op(order_stat_table(4, 2, c3), t({2, 2, 0, 1})) == 1);
}

TEST_CASE("order_stat matches a full sorting oracle exhaustively") {
    for (int m = 2; m <= 4; ++m) {
        const Chain chain(m);
        for (int n = 1; n <= 4; ++n)
            for (int k = 1; k <= n; ++k) {
                const OpTable table = order_stat_table(n, k, chain);
                TupleOdometer it(n, m);
                std::uint64_t rank = 0;
                do {
                    const std::vector<Element> copy(it.tuple().begin(), it.tuple().end());
                    REQUIRE(table.values[rank++] == sorted_kth(copy, k));
                } while (it.advance());
            }
    }
}

TEST_CASE("median specializations") {
    const Chain c4(4);
    CHECK(median_table(1, c4) == projection_table(1, 1, c4));
    CHECK(eval_op(median_table(5, c4), t({3, 0, 2, 2, 1})) == 2);
    CHECK_THROWS_AS(median_table(4, c4), EvenArity);

    // On the two-element chain the ternary median is the Boolean majority.
    const Chain c2(2);
    const OpTable med3 = median_table(3, c2);
    CHECK(med3.values == std::vector<Element>{0, 0, 0, 1, 0, 1, 1, 1});
}

TEST_CASE("min and max are the extreme order statistics") {
    const Chain c3(3);
    CHECK(order_stat_table(3, 1, c3).values == order_stat_table(3, 1, c3).values);
    TupleOdometer it(3, 3);
    const OpTable mn = order_stat_table(3, 1, c3);
    const OpTable mx = order_stat_table(3, 3, c3);
    std::uint64_t rank = 0;
    do {
        const auto x = it.tuple();
        REQUIRE(mn.values[rank] == *std::min_element(x.begin(), x.end()));
        REQUIRE(mx.values[rank] == *std::max_element(x.begin(), x.end()));
        ++rank;
    } while (it.advance());
}

TEST_CASE("medians are majority functions") {
    for (int m = 2; m <= 4; ++m) {
        const Chain chain(m);
        for (int n = 1; n <= 7; n += 2) CHECK(is_majority(median_table(n, chain)));
    }
}

TEST_CASE("projections and maxima are not majority functions") {
    const Chain c2(2);
    CHECK(!is_majority(projection_table(3, 1, c2)));  // (0,1,1) must yield 1
    CHECK(!is_majority(order_stat_table(3, 3, c2)));  // (0,0,1) has majority 0, max is 1
    const Chain c3(3);
    CHECK(!is_majority(projection_table(3, 1, c3)));
    CHECK(!is_majority(order_stat_table(3, 3, c3)));
}

TEST_CASE("total symmetry") {
    const Chain c3(3);
    for (int n = 1; n <= 4; ++n)
        for (int k = 1; k <= n; ++k) CHECK(is_totally_symmetric(order_stat_table(n, k, c3)));

    const Chain c2(2);
    CHECK(!is_totally_symmetric(projection_table(2, 1, c2)));

    // med_3 over a repeated projection ignores x_3 entirely.
    const OpTable med3 = median_table(3, c2);
    std::vector<OpTable> inners{projection_table(3, 1, c2), projection_table(3, 1, c2),
                                projection_table(3, 2, c2)};
    CHECK(!is_totally_symmetric(compose(med3, inners)));
}

TEST_CASE("order statistics are conservative") {
    for (int m = 2; m <= 4; ++m) {
        const Chain chain(m);
        for (int n = 1; n <= 4; ++n)
            for (int k = 1; k <= n; ++k) {
                const OpTable table = order_stat_table(n, k, chain);
                TupleOdometer it(n, m);
                std::uint64_t rank = 0;
                do {
                    const auto x = it.tuple();
                    REQUIRE(std::count(x.begin(), x.end(), table.values[rank]) > 0);
                    ++rank;
                } while (it.advance());
            }
    }
}

TEST_CASE("order statistics are monotone") {
    for (int m = 2; m <= 3; ++m) {
        const Chain chain(m);
        for (int n = 1; n <= 5; ++n)
            for (int k = 1; k <= n; ++k) {
                const OpTable table = order_stat_table(n, k, chain);
                const std::uint64_t count = table.values.size();
                for (std::uint64_t a = 0; a < count; ++a) {
                    const std::vector<Element> x = rank_to_tuple(a, m, n);
                    for (std::uint64_t b = 0; b < count; ++b) {
                        const std::vector<Element> y = rank_to_tuple(b, m, n);
                        bool leq = true;
                        for (int i = 0; i < n && leq; ++i)
                            leq = x[static_cast<std::size_t>(i)] <= y[static_cast<std::size_t>(i)];
                        if (leq) REQUIRE(table.values[a] <= table.values[b]);
                    }
                }
            }
    }
}

TEST_CASE("duality: m^n_k(x) = (m-1) - m^n_{n+1-k}(complement of x)") {
    for (int m = 2; m <= 4; ++m) {
        const Chain chain(m);
        for (int n = 1; n <= 4; ++n)
            for (int k = 1; k <= n; ++k) {
                const OpTable table = order_stat_table(n, k, chain);
                const OpTable dual = order_stat_table(n, n + 1 - k, chain);
                TupleOdometer it(n, m);
                std::uint64_t rank = 0;
                do {
                    std::vector<Element> comp(it.tuple().begin(), it.tuple().end());
                    for (Element& v : comp) v = static_cast<Element>(m - 1 - v);
                    REQUIRE(static_cast<int>(table.values[rank]) ==
                            m - 1 - static_cast<int>(eval_op(dual, comp)));
                    ++rank;
                } while (it.advance());
            }
    }
}

TEST_CASE("sorted input returns the k-th coordinate") {
    const Chain c4(4);
    const int n = 4;
    for (int k = 1; k <= n; ++k) {
        const OpTable table = order_stat_table(n, k, c4);
        TupleOdometer it(n, 4);
        do {
            const auto x = it.tuple();
            if (std::is_sorted(x.begin(), x.end()))
                REQUIRE(eval_op(table, x) == x[static_cast<std::size_t>(k - 1)]);
        } while (it.advance());
    }
}

namespace {

// The four-element diamond: 0 < a, b < 3 with a, b incomparable.
FiniteLattice diamond() {
    const Chain c4(4);
    const auto meet = [](int a, int b) -> int {
        if (a == b) return a;
        if (a > b) std::swap(a, b);
        if (a == 0) return 0;
        if (b == 3) return a;
        return 0;  // {1,2} meet
    };
    const auto join = [](int a, int b) -> int {
        if (a == b) return a;
        if (a > b) std::swap(a, b);
        if (b == 3) return 3;
        if (a == 0) return b;
        return 3;  // {1,2} join
    };
    std::vector<Element> mt(16), jn(16);
    for (int a = 0; a < 4; ++a)
        for (int b = 0; b < 4; ++b) {
            mt[static_cast<std::size_t>(a * 4 + b)] = static_cast<Element>(meet(a, b));
            jn[static_cast<std::size_t>(a * 4 + b)] = static_cast<Element>(join(a, b));
        }
    return FiniteLattice(OpTable(2, c4, std::move(mt)), OpTable(2, c4, std::move(jn)));
}

}  // namespace

TEST_CASE("lattice laws are verified on construction") {
    CHECK_NOTHROW(chain_lattice(Chain(4)));
    CHECK_NOTHROW(diamond());

    // meet = join = max violates absorption.
    const Chain c3(3);
    const OpTable mx = order_stat_table(2, 2, c3);
    CHECK_THROWS_AS(FiniteLattice(mx, mx), InvalidLattice);
}

TEST_CASE("lattice order statistic agrees with m^n_k on chains") {
    for (int m = 2; m <= 3; ++m) {
        const FiniteLattice lat = chain_lattice(Chain(m));
        for (int n = 1; n <= 4; ++n)
            for (int k = 1; k <= n; ++k)
                CHECK(lattice_order_stat(n, k, lat) == order_stat_table(n, k, Chain(m)));
    }
}

TEST_CASE("lattice order statistic extremes on the diamond") {
    const FiniteLattice lat = diamond();
    const int n = 3;

    // k = 1 is the n-ary meet, k = n the n-ary join.
    const OpTable bottom = lattice_order_stat(n, 1, lat);
    const OpTable top = lattice_order_stat(n, n, lat);
    TupleOdometer it(n, lat.size());
    std::uint64_t rank = 0;
    do {
        const auto x = it.tuple();
        Element mt = x[0], jn = x[0];
        for (std::size_t i = 1; i < x.size(); ++i) {
            mt = lat.meet_of(mt, x[i]);
            jn = lat.join_of(jn, x[i]);
        }
        REQUIRE(bottom.values[rank] == mt);
        REQUIRE(top.values[rank] == jn);
        ++rank;
    } while (it.advance());
}

TEST_CASE("lattice file format round-trips") {
    const FiniteLattice lat = diamond();
    std::ostringstream out;
    print_lattice(out, lat);
    std::istringstream in(out.str());
    const FiniteLattice parsed = parse_lattice(in);
    CHECK(parsed.meet() == lat.meet());
    CHECK(parsed.join() == lat.join());
}
