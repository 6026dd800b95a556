#include "clonelab/op_table.hpp"

#include <istream>
#include <ostream>
#include <sstream>

namespace clonelab {

std::uint64_t table_entry_count(int domain_size, int arity, std::uint64_t budget) {
    std::uint64_t count = 1;
    for (int i = 0; i < arity; ++i) {
        count *= static_cast<std::uint64_t>(domain_size);
        if (count > budget)
            throw BudgetExceeded("table with " + std::to_string(domain_size) + "^" +
                                 std::to_string(arity) + " entries exceeds the budget of " +
                                 std::to_string(budget));
    }
    return count;
}

OpTable::OpTable(int arity_, Chain domain_, std::vector<Element> values_)
    : arity(arity_), domain(domain_), values(std::move(values_)) {
    if (arity < 1) throw ArityMismatch("operation arity must be positive");
    const std::uint64_t expected = table_entry_count(domain.size(), arity, UINT64_MAX);
    if (values.size() != expected)
        throw ArityMismatch("value vector has " + std::to_string(values.size()) +
                            " entries, expected " + std::to_string(expected));
    for (Element v : values)
        if (static_cast<int>(v) >= domain.size())
            throw ElementOutOfRange("table value " + std::to_string(v) +
                                    " outside chain of size " + std::to_string(domain.size()));
}

std::uint64_t lex_rank(std::span<const Element> tuple, int domain_size) {
    std::uint64_t rank = 0;
    for (Element x : tuple) rank = rank * static_cast<std::uint64_t>(domain_size) + x;
    return rank;
}

std::vector<Element> rank_to_tuple(std::uint64_t rank, int domain_size, int arity) {
    std::vector<Element> tuple(static_cast<std::size_t>(arity));
    for (int i = arity - 1; i >= 0; --i) {
        tuple[static_cast<std::size_t>(i)] =
            static_cast<Element>(rank % static_cast<std::uint64_t>(domain_size));
        rank /= static_cast<std::uint64_t>(domain_size);
    }
    return tuple;
}

Element eval_op(const OpTable& table, std::span<const Element> input) {
    if (static_cast<int>(input.size()) != table.arity)
        throw ArityMismatch("input length " + std::to_string(input.size()) +
                            " does not match arity " + std::to_string(table.arity));
    for (Element x : input)
        if (static_cast<int>(x) >= table.domain.size())
            throw ElementOutOfRange("input entry " + std::to_string(x) +
                                    " outside chain of size " +
                                    std::to_string(table.domain.size()));
    return table.values[lex_rank(input, table.domain.size())];
}

OpTable projection_table(int n, int k, Chain chain, std::uint64_t budget) {
    if (k < 1 || k > n) throw IndexOutOfRange("projection index out of range");
    const std::uint64_t count = table_entry_count(chain.size(), n, budget);
    std::vector<Element> values(count);
    TupleOdometer it(n, chain.size());
    std::uint64_t rank = 0;
    do {
        values[rank++] = it.tuple()[static_cast<std::size_t>(k - 1)];
    } while (it.advance());
    return OpTable(n, chain, std::move(values));
}

int projection_index(const OpTable& table) {
    const int m = table.domain.size();
    for (int k = 1; k <= table.arity; ++k) {
        TupleOdometer it(table.arity, m);
        std::uint64_t rank = 0;
        bool match = true;
        do {
            if (table.values[rank++] != it.tuple()[static_cast<std::size_t>(k - 1)]) {
                match = false;
                break;
            }
        } while (it.advance());
        if (match) return k;
    }
    return 0;
}

OpTable compose(const OpTable& outer, std::span<const OpTable> inners) {
    if (static_cast<int>(inners.size()) != outer.arity)
        throw ArityMismatch("composition needs exactly " + std::to_string(outer.arity) +
                            " inner operations, got " + std::to_string(inners.size()));
    const int inner_arity = inners.empty() ? 0 : inners[0].arity;
    for (const OpTable& g : inners) {
        if (g.domain != outer.domain)
            throw DomainMismatch("inner operation on a different chain");
        if (g.arity != inner_arity)
            throw ArityMismatch("inner operations must share one arity");
    }
    const int m = outer.domain.size();
    const std::uint64_t count = inners[0].values.size();
    std::vector<Element> values(count);
    for (std::uint64_t r = 0; r < count; ++r) {
        // Inners live on the same chain and arity, so they are indexed by the
        // same rank r as the result.
        std::uint64_t outer_rank = 0;
        for (std::size_t i = 0; i < inners.size(); ++i)
            outer_rank = outer_rank * static_cast<std::uint64_t>(m) + inners[i].values[r];
        values[r] = outer.values[outer_rank];
    }
    return OpTable(inner_arity, outer.domain, std::move(values));
}

VarMap::VarMap(int source_arity_, int target_arity_, std::vector<int> assignment_)
    : source_arity(source_arity_), target_arity(target_arity_), assignment(std::move(assignment_)) {
    if (source_arity < 1 || target_arity < 1)
        throw InvalidVarMap("arities must be positive");
    if (assignment.size() != static_cast<std::size_t>(source_arity))
        throw InvalidVarMap("assignment must cover every source position");
    for (int t : assignment)
        if (t < 1 || t > target_arity) throw InvalidVarMap("assignment target out of range");
}

OpTable identify_vars(const OpTable& table, const VarMap& map, std::uint64_t budget) {
    if (map.source_arity != table.arity)
        throw ArityMismatch("variable map source arity does not match the table");
    const int m = table.domain.size();
    const std::uint64_t count = table_entry_count(m, map.target_arity, budget);
    std::vector<Element> values(count);
    std::vector<Element> source(static_cast<std::size_t>(map.source_arity));
    TupleOdometer it(map.target_arity, m);
    std::uint64_t rank = 0;
    do {
        const std::span<const Element> y = it.tuple();
        for (std::size_t i = 0; i < source.size(); ++i)
            source[i] = y[static_cast<std::size_t>(map.assignment[i] - 1)];
        values[rank++] = table.values[lex_rank(source, m)];
    } while (it.advance());
    return OpTable(map.target_arity, table.domain, std::move(values));
}

std::string canonical_key(const OpTable& table) {
    std::string key;
    key.reserve(8 + table.values.size());
    const auto put_u32 = [&key](std::uint32_t v) {
        key.push_back(static_cast<char>(v & 0xff));
        key.push_back(static_cast<char>((v >> 8) & 0xff));
        key.push_back(static_cast<char>((v >> 16) & 0xff));
        key.push_back(static_cast<char>((v >> 24) & 0xff));
    };
    put_u32(static_cast<std::uint32_t>(table.arity));
    put_u32(static_cast<std::uint32_t>(table.domain.size()));
    key.append(reinterpret_cast<const char*>(table.values.data()), table.values.size());
    return key;
}

std::string first_difference(const OpTable& lhs, const OpTable& rhs) {
    if (lhs.arity != rhs.arity || lhs.domain != rhs.domain)
        return "tables have different shapes";
    for (std::uint64_t r = 0; r < lhs.values.size(); ++r) {
        if (lhs.values[r] == rhs.values[r]) continue;
        const std::vector<Element> tuple = rank_to_tuple(r, lhs.domain.size(), lhs.arity);
        std::string out = "(";
        for (std::size_t i = 0; i < tuple.size(); ++i) {
            if (i) out += ",";
            out += std::to_string(tuple[i]);
        }
        out += "): lhs=" + std::to_string(lhs.values[r]) + " rhs=" + std::to_string(rhs.values[r]);
        return out;
    }
    return "";
}

void print_op_table(std::ostream& out, const OpTable& table) {
    out << "optable " << table.arity << ' ' << table.domain.size() << '\n';
    const int m = table.domain.size();
    // One row per input prefix keeps the dump readable; the format itself is
    // whitespace-insensitive.
    const std::uint64_t row = static_cast<std::uint64_t>(m);
    for (std::uint64_t r = 0; r < table.values.size(); ++r) {
        out << static_cast<int>(table.values[r]);
        out << (((r + 1) % row == 0) ? '\n' : ' ');
    }
}

OpTable parse_op_table(std::istream& in) {
    std::string tag;
    if (!(in >> tag) || tag != "optable")
        throw ParseError("expected 'optable' header");
    int arity = 0, domain_size = 0;
    if (!(in >> arity >> domain_size))
        throw ParseError("expected arity and domain size after 'optable'");
    Chain chain(domain_size);
    const std::uint64_t count = table_entry_count(domain_size, arity, UINT64_MAX);
    std::vector<Element> values;
    values.reserve(count);
    for (std::uint64_t i = 0; i < count; ++i) {
        int v = 0;
        if (!(in >> v)) throw ParseError("table truncated: expected " + std::to_string(count) +
                                         " values, got " + std::to_string(i));
        if (v < 0 || v >= domain_size)
            throw ParseError("table value " + std::to_string(v) + " out of range");
        values.push_back(static_cast<Element>(v));
    }
    return OpTable(arity, chain, std::move(values));
}

std::string op_table_to_string(const OpTable& table) {
    std::ostringstream out;
    print_op_table(out, table);
    return out.str();
}

OpTable op_table_from_string(const std::string& text) {
    std::istringstream in(text);
    return parse_op_table(in);
}

}  // namespace clonelab
