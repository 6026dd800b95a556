#include "clonelab/order_stats.hpp"

#include <algorithm>
#include <array>
#include <climits>
#include <istream>
#include <ostream>

namespace clonelab {

namespace {

bool parse_int_strict(const std::string& text, int& out) {
    if (text.empty()) return false;
    int value = 0;
    for (char c : text) {
        if (c < '0' || c > '9') return false;
        if (value > (INT_MAX - (c - '0')) / 10) return false;
        value = value * 10 + (c - '0');
    }
    out = value;
    return true;
}

}  // namespace

std::optional<SymbolicOp> parse_symbolic_op(const std::string& name) {
    const auto split = [](const std::string& s) {
        std::vector<std::string> parts;
        std::size_t start = 0;
        for (std::size_t i = 0; i <= s.size(); ++i) {
            if (i == s.size() || s[i] == ':') {
                parts.push_back(s.substr(start, i - start));
                start = i + 1;
            }
        }
        return parts;
    };
    const std::vector<std::string> parts = split(name);
    if (parts.size() == 3 && parts[0] == "m") {
        int n = 0, k = 0;
        if (!parse_int_strict(parts[1], n) || !parse_int_strict(parts[2], k)) return std::nullopt;
        if (n < 1) throw IndexOutOfRange("order statistic arity must be positive in '" + name + "'");
        if (k < 1 || k > n)
            throw IndexOutOfRange("order statistic index out of range in '" + name + "'");
        return SymbolicOp{n, k};
    }
    if (parts.size() == 2 && (parts[0] == "med" || parts[0] == "min" || parts[0] == "max")) {
        int n = 0;
        if (!parse_int_strict(parts[1], n)) return std::nullopt;
        if (n < 1) throw IndexOutOfRange("arity must be positive in '" + name + "'");
        if (parts[0] == "med") {
            if (n % 2 == 0) throw EvenArity("median is only defined for odd arity: '" + name + "'");
            return SymbolicOp{n, (n + 1) / 2};
        }
        return SymbolicOp{n, parts[0] == "min" ? 1 : n};
    }
    return std::nullopt;
}

Element order_stat_value(int k, std::span<const Element> tuple) {
    if (k < 1 || k > static_cast<int>(tuple.size()))
        throw IndexOutOfRange("order statistic index out of range");
    // Selection by value counting: the k-th smallest is the least value v
    // with |{i : x_i <= v}| >= k.
    std::array<int, 256> counts{};
    for (Element x : tuple) ++counts[x];
    int seen = 0;
    for (int v = 0; v < 256; ++v) {
        seen += counts[static_cast<std::size_t>(v)];
        if (seen >= k) return static_cast<Element>(v);
    }
    throw Error("unreachable");
}

std::int64_t order_stat_value(int k, std::span<const std::int64_t> tuple) {
    if (k < 1 || k > static_cast<int>(tuple.size()))
        throw IndexOutOfRange("order statistic index out of range");
    std::vector<std::int64_t> copy(tuple.begin(), tuple.end());
    std::nth_element(copy.begin(), copy.begin() + (k - 1), copy.end());
    return copy[static_cast<std::size_t>(k - 1)];
}

OpTable order_stat_table(int n, int k, Chain chain, std::uint64_t budget) {
    if (n < 1) throw IndexOutOfRange("arity must be positive");
    if (k < 1 || k > n) throw IndexOutOfRange("order statistic index out of range");
    const std::uint64_t count = table_entry_count(chain.size(), n, budget);
    std::vector<Element> values(count);
    TupleOdometer it(n, chain.size());
    std::uint64_t rank = 0;
    do {
        values[rank++] = order_stat_value(k, it.tuple());
    } while (it.advance());
    return OpTable(n, chain, std::move(values));
}

OpTable median_table(int n, Chain chain, std::uint64_t budget) {
    if (n % 2 == 0) throw EvenArity("median is only defined for odd arity");
    return order_stat_table(n, (n + 1) / 2, chain, budget);
}

bool is_majority(const OpTable& table) {
    const int n = table.arity;
    const int threshold = (n + 2) / 2;  // ceil((n+1)/2)
    std::array<int, 256> counts{};
    TupleOdometer it(n, table.domain.size());
    std::uint64_t rank = 0;
    do {
        const std::span<const Element> x = it.tuple();
        for (Element v : x) ++counts[v];
        for (Element v : x) {
            if (counts[v] >= threshold) {
                if (table.values[rank] != v) return false;
                break;
            }
        }
        for (Element v : x) counts[v] = 0;
        ++rank;
    } while (it.advance());
    return true;
}

bool is_totally_symmetric(const OpTable& table) {
    const int m = table.domain.size();
    std::vector<Element> sorted(static_cast<std::size_t>(table.arity));
    TupleOdometer it(table.arity, m);
    std::uint64_t rank = 0;
    do {
        const std::span<const Element> x = it.tuple();
        sorted.assign(x.begin(), x.end());
        std::sort(sorted.begin(), sorted.end());
        if (table.values[rank] != table.values[lex_rank(sorted, m)]) return false;
        ++rank;
    } while (it.advance());
    return true;
}

FiniteLattice::FiniteLattice(OpTable meet, OpTable join)
    : meet_(std::move(meet)), join_(std::move(join)) {
    if (meet_.arity != 2 || join_.arity != 2)
        throw InvalidLattice("meet and join must be binary");
    if (meet_.domain != join_.domain)
        throw InvalidLattice("meet and join must share one domain");
    const int m = meet_.domain.size();
    const auto mt = [this](int a, int b) {
        return meet_.values[static_cast<std::uint64_t>(a) * meet_.domain.size() + b];
    };
    const auto jn = [this](int a, int b) {
        return join_.values[static_cast<std::uint64_t>(a) * join_.domain.size() + b];
    };
    for (int a = 0; a < m; ++a) {
        if (mt(a, a) != a || jn(a, a) != a) throw InvalidLattice("idempotency fails");
        for (int b = 0; b < m; ++b) {
            if (mt(a, b) != mt(b, a)) throw InvalidLattice("meet is not commutative");
            if (jn(a, b) != jn(b, a)) throw InvalidLattice("join is not commutative");
            if (mt(a, jn(a, b)) != a) throw InvalidLattice("absorption a /\\ (a \\/ b) fails");
            if (jn(a, mt(a, b)) != a) throw InvalidLattice("absorption a \\/ (a /\\ b) fails");
            for (int c = 0; c < m; ++c) {
                if (mt(a, mt(b, c)) != mt(mt(a, b), c))
                    throw InvalidLattice("meet is not associative");
                if (jn(a, jn(b, c)) != jn(jn(a, b), c))
                    throw InvalidLattice("join is not associative");
            }
        }
    }
}

FiniteLattice chain_lattice(Chain chain) {
    const int m = chain.size();
    std::vector<Element> meet(static_cast<std::size_t>(m) * m);
    std::vector<Element> join(static_cast<std::size_t>(m) * m);
    for (int a = 0; a < m; ++a)
        for (int b = 0; b < m; ++b) {
            meet[static_cast<std::size_t>(a) * m + b] = static_cast<Element>(std::min(a, b));
            join[static_cast<std::size_t>(a) * m + b] = static_cast<Element>(std::max(a, b));
        }
    return FiniteLattice(OpTable(2, chain, std::move(meet)), OpTable(2, chain, std::move(join)));
}

OpTable lattice_order_stat(int n, int k, const FiniteLattice& lattice, std::uint64_t budget) {
    if (n < 1) throw IndexOutOfRange("arity must be positive");
    if (k < 1 || k > n) throw IndexOutOfRange("order statistic index out of range");
    const Chain chain = lattice.meet().domain;
    const std::uint64_t inputs = table_entry_count(chain.size(), n, budget);
    std::uint64_t index_tuples = 1;
    for (int i = 0; i < k; ++i) {
        index_tuples *= static_cast<std::uint64_t>(n);
        if (index_tuples > budget / std::max<std::uint64_t>(inputs, 1))
            throw BudgetExceeded("n^k index tuples times size^n inputs exceeds the budget");
    }
    std::vector<Element> values(inputs);
    TupleOdometer input_it(n, chain.size());
    std::uint64_t rank = 0;
    do {
        const std::span<const Element> x = input_it.tuple();
        // Indices (j_1,...,j_k) run over the injective tuples in {1,...,n}^k,
        // without symmetry reduction. Tuples with a repeated index would
        // contribute joins of fewer than k variables and collapse the meet to
        // the minimum, losing the agreement with m^n_k on chains.
        std::vector<int> idx(static_cast<std::size_t>(k), 0);
        bool first = true;
        Element acc = 0;
        for (;;) {
            bool injective = true;
            for (int i = 1; i < k && injective; ++i)
                for (int j = 0; j < i && injective; ++j)
                    injective = idx[static_cast<std::size_t>(i)] != idx[static_cast<std::size_t>(j)];
            if (injective) {
                Element sel = x[static_cast<std::size_t>(idx[0])];
                for (int i = 1; i < k; ++i)
                    sel = lattice.join_of(sel,
                                          x[static_cast<std::size_t>(idx[static_cast<std::size_t>(i)])]);
                acc = first ? sel : lattice.meet_of(acc, sel);
                first = false;
            }
            int pos = k - 1;
            while (pos >= 0 && idx[static_cast<std::size_t>(pos)] == n - 1)
                idx[static_cast<std::size_t>(pos--)] = 0;
            if (pos < 0) break;
            ++idx[static_cast<std::size_t>(pos)];
        }
        values[rank++] = acc;
    } while (input_it.advance());
    return OpTable(n, chain, std::move(values));
}

void print_lattice(std::ostream& out, const FiniteLattice& lattice) {
    out << "lattice " << lattice.size() << '\n';
    print_op_table(out, lattice.meet());
    print_op_table(out, lattice.join());
}

FiniteLattice parse_lattice(std::istream& in) {
    std::string tag;
    if (!(in >> tag) || tag != "lattice") throw ParseError("expected 'lattice' header");
    int size = 0;
    if (!(in >> size)) throw ParseError("expected lattice size");
    OpTable meet = parse_op_table(in);
    OpTable join = parse_op_table(in);
    if (meet.domain.size() != size || join.domain.size() != size)
        throw ParseError("lattice tables do not match the declared size");
    return FiniteLattice(std::move(meet), std::move(join));
}

}  // namespace clonelab
