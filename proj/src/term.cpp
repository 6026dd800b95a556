#include "clonelab/term.hpp"

#include <cctype>
#include <istream>
#include <ostream>
#include <sstream>

#include "clonelab/order_stats.hpp"

namespace clonelab {

Term Term::var(int index) {
    if (index < 1) throw IndexOutOfRange("variable index must be positive");
    return Term(Kind::Var, index, 0);
}

Term Term::proj(int arity, int index) {
    if (arity < 1) throw ArityMismatch("projection arity must be positive");
    if (index < 1 || index > arity) throw IndexOutOfRange("projection index out of range");
    return Term(Kind::Proj, arity, index);
}

Term Term::apply(std::string op, std::vector<Term> children) {
    if (op.empty()) throw UnknownOp("empty operation name");
    if (children.empty()) throw ArityMismatch("application needs at least one child");
    Term t(Kind::Apply, 0, 0);
    t.op_ = std::make_shared<const std::string>(std::move(op));
    t.children_ = std::make_shared<const std::vector<Term>>(std::move(children));
    return t;
}

std::size_t Term::node_count() const {
    if (kind_ != Kind::Apply) return 1;
    std::size_t n = 1;
    for (const Term& c : *children_) n += c.node_count();
    return n;
}

int Term::min_ambient_arity() const {
    switch (kind_) {
        case Kind::Var: return a_;
        case Kind::Proj: return a_;
        case Kind::Apply: {
            int n = 1;
            for (const Term& c : *children_) n = std::max(n, c.min_ambient_arity());
            return n;
        }
    }
    return 1;
}

void Registry::add(const std::string& name, OpTable table) {
    if (table.domain != chain_)
        throw DomainMismatch("table registered under '" + name + "' lives on a different chain");
    tables_.insert_or_assign(name, std::move(table));
}

const OpTable& Registry::table(const std::string& name) const {
    auto it = tables_.find(name);
    if (it == tables_.end()) throw UnknownOp("no table registered under '" + name + "'");
    return it->second;
}

namespace {

// Shared shape check for all evaluators; `resolve_arity` reports the arity of
// a named op or -1 when unresolvable.
template <typename ResolveArity>
void validate_impl(const Term& term, int ambient, const ResolveArity& resolve_arity) {
    switch (term.kind()) {
        case Term::Kind::Var:
            if (term.var_index() > ambient)
                throw ArityMismatch("variable x_" + std::to_string(term.var_index()) +
                                    " exceeds ambient arity " + std::to_string(ambient));
            return;
        case Term::Kind::Proj:
            if (term.proj_arity() != ambient)
                throw ArityMismatch("projection of arity " + std::to_string(term.proj_arity()) +
                                    " used at ambient arity " + std::to_string(ambient));
            return;
        case Term::Kind::Apply: {
            const int op_arity = resolve_arity(term.op_name());
            if (op_arity < 0) throw UnknownOp("unresolvable operation '" + term.op_name() + "'");
            if (static_cast<int>(term.children().size()) != op_arity)
                throw ArityMismatch("operation '" + term.op_name() + "' of arity " +
                                    std::to_string(op_arity) + " applied to " +
                                    std::to_string(term.children().size()) + " children");
            for (const Term& c : term.children()) validate_impl(c, ambient, resolve_arity);
            return;
        }
    }
}

}  // namespace

void validate_term(const Term& term, int ambient_arity, const Registry& registry) {
    if (ambient_arity < 1) throw ArityMismatch("ambient arity must be positive");
    validate_impl(term, ambient_arity, [&registry](const std::string& name) {
        if (auto sym = parse_symbolic_op(name)) return sym->n;
        if (registry.has(name)) return registry.table(name).arity;
        return -1;
    });
}

Element eval_term(const Term& term, std::span<const Element> input, const Registry& registry) {
    switch (term.kind()) {
        case Term::Kind::Var: {
            const int i = term.var_index();
            if (i > static_cast<int>(input.size()))
                throw ArityMismatch("variable x_" + std::to_string(i) + " out of input range");
            return input[static_cast<std::size_t>(i - 1)];
        }
        case Term::Kind::Proj: {
            if (term.proj_arity() != static_cast<int>(input.size()))
                throw ArityMismatch("projection arity does not match the input length");
            return input[static_cast<std::size_t>(term.proj_index() - 1)];
        }
        case Term::Kind::Apply: {
            const std::vector<Term>& children = term.children();
            std::vector<Element> args(children.size());
            for (std::size_t i = 0; i < children.size(); ++i)
                args[i] = eval_term(children[i], input, registry);
            if (auto sym = parse_symbolic_op(term.op_name())) {
                if (static_cast<int>(children.size()) != sym->n)
                    throw ArityMismatch("symbolic op '" + term.op_name() + "' misapplied");
                return order_stat_value(sym->k, std::span<const Element>(args));
            }
            return eval_op(registry.table(term.op_name()), args);
        }
    }
    throw Error("unreachable");
}

OpTable term_to_table(const Term& term, int ambient_arity, const Registry& registry,
                      std::uint64_t budget) {
    validate_term(term, ambient_arity, registry);
    const int m = registry.chain().size();
    const std::uint64_t count = table_entry_count(m, ambient_arity, budget);
    std::vector<Element> values(count);
    TupleOdometer it(ambient_arity, m);
    std::uint64_t rank = 0;
    do {
        values[rank++] = eval_term(term, it.tuple(), registry);
    } while (it.advance());
    return OpTable(ambient_arity, registry.chain(), std::move(values));
}

std::int64_t eval_term_on_naturals(const Term& term, std::span<const std::int64_t> input) {
    switch (term.kind()) {
        case Term::Kind::Var: {
            const int i = term.var_index();
            if (i > static_cast<int>(input.size()))
                throw ArityMismatch("variable x_" + std::to_string(i) + " out of input range");
            return input[static_cast<std::size_t>(i - 1)];
        }
        case Term::Kind::Proj: {
            if (term.proj_arity() != static_cast<int>(input.size()))
                throw ArityMismatch("projection arity does not match the input length");
            return input[static_cast<std::size_t>(term.proj_index() - 1)];
        }
        case Term::Kind::Apply: {
            auto sym = parse_symbolic_op(term.op_name());
            if (!sym)
                throw NonMonotoneSymbol("operation '" + term.op_name() +
                                        "' has no meaning on the naturals");
            const std::vector<Term>& children = term.children();
            if (static_cast<int>(children.size()) != sym->n)
                throw ArityMismatch("symbolic op '" + term.op_name() + "' misapplied");
            std::vector<std::int64_t> args(children.size());
            for (std::size_t i = 0; i < children.size(); ++i)
                args[i] = eval_term_on_naturals(children[i], input);
            return order_stat_value(sym->k, std::span<const std::int64_t>(args));
        }
    }
    throw Error("unreachable");
}

void require_monotone_symbols(const Term& term) {
    if (term.is_apply()) {
        if (!parse_symbolic_op(term.op_name()))
            throw NonMonotoneSymbol("operation '" + term.op_name() +
                                    "' is not a symbolic order statistic");
        for (const Term& c : term.children()) require_monotone_symbols(c);
    }
}

void print_term(std::ostream& out, const Term& term) {
    switch (term.kind()) {
        case Term::Kind::Var:
            out << "(var " << term.var_index() << ')';
            return;
        case Term::Kind::Proj:
            out << "(proj " << term.proj_arity() << ' ' << term.proj_index() << ')';
            return;
        case Term::Kind::Apply:
            out << "(op " << term.op_name();
            for (const Term& c : term.children()) {
                out << ' ';
                print_term(out, c);
            }
            out << ')';
            return;
    }
}

std::string term_to_string(const Term& term) {
    std::ostringstream out;
    print_term(out, term);
    return out.str();
}

namespace {

void skip_ws(std::istream& in) {
    while (std::isspace(in.peek())) in.get();
}

std::string read_token(std::istream& in) {
    std::string token;
    while (in.peek() != EOF && !std::isspace(in.peek()) && in.peek() != '(' && in.peek() != ')')
        token.push_back(static_cast<char>(in.get()));
    if (token.empty()) throw ParseError("expected a token");
    return token;
}

int read_int(std::istream& in) {
    skip_ws(in);
    const std::string token = read_token(in);
    try {
        std::size_t pos = 0;
        const int v = std::stoi(token, &pos);
        if (pos != token.size()) throw std::invalid_argument(token);
        return v;
    } catch (const std::exception&) {
        throw ParseError("expected an integer, got '" + token + "'");
    }
}

Term parse_term_impl(std::istream& in) {
    skip_ws(in);
    if (in.get() != '(') throw ParseError("expected '('");
    skip_ws(in);
    const std::string head = read_token(in);
    if (head == "var") {
        const int i = read_int(in);
        skip_ws(in);
        if (in.get() != ')') throw ParseError("expected ')' after (var i)");
        return Term::var(i);
    }
    if (head == "proj") {
        const int n = read_int(in);
        const int k = read_int(in);
        skip_ws(in);
        if (in.get() != ')') throw ParseError("expected ')' after (proj n k)");
        return Term::proj(n, k);
    }
    if (head == "op") {
        skip_ws(in);
        const std::string name = read_token(in);
        std::vector<Term> children;
        for (;;) {
            skip_ws(in);
            const int c = in.peek();
            if (c == ')') {
                in.get();
                break;
            }
            if (c == EOF) throw ParseError("unterminated (op ...)");
            children.push_back(parse_term_impl(in));
        }
        return Term::apply(name, std::move(children));
    }
    throw ParseError("unknown term head '" + head + "'");
}

}  // namespace

Term parse_term(std::istream& in) { return parse_term_impl(in); }

Term term_from_string(const std::string& text) {
    std::istringstream in(text);
    Term t = parse_term_impl(in);
    skip_ws(in);
    if (in.peek() != EOF) throw ParseError("trailing text after term");
    return t;
}

}  // namespace clonelab
