#include "clonelab/closure.hpp"

#include <algorithm>
#include <ostream>

#include "clonelab/order_stats.hpp"

namespace clonelab {

namespace {

std::uint64_t table_hash(int arity, const Element* data, std::size_t len) {
    std::uint64_t h = 1469598103934665603ULL ^ (static_cast<std::uint64_t>(arity) * 0x9e3779b97f4a7c15ULL);
    for (std::size_t i = 0; i < len; ++i) {
        h ^= data[i];
        h *= 1099511628211ULL;
    }
    return h;
}

}  // namespace

bool CloneFragment::exhausted(int arity) const {
    if (arity < 1 || arity > budget_.max_arity) return false;
    return exhausted_[static_cast<std::size_t>(arity)];
}

std::optional<std::uint32_t> CloneFragment::find(const OpTable& table) const {
    if (table.domain != chain_) return std::nullopt;
    const std::uint64_t h = table_hash(table.arity, table.values.data(), table.values.size());
    auto it = index_.find(h);
    if (it == index_.end()) return std::nullopt;
    for (std::uint32_t idx : it->second)
        if (members_[idx].table == table) return idx;
    return std::nullopt;
}

bool CloneFragment::is_projection_member(std::uint32_t index) const {
    return members_.at(index).prov.kind == Provenance::Kind::Proj;
}

Term CloneFragment::witness(std::uint32_t index) const {
    const Member& member = members_.at(index);
    switch (member.prov.kind) {
        case Provenance::Kind::Proj:
            return Term::proj(member.prov.a, member.prov.b);
        case Provenance::Kind::Gen: {
            const OpTable& gen = generators_[static_cast<std::size_t>(member.prov.a)];
            std::vector<Term> vars;
            vars.reserve(static_cast<std::size_t>(gen.arity));
            for (int i = 1; i <= gen.arity; ++i) vars.push_back(Term::var(i));
            return Term::apply(gen_names_[static_cast<std::size_t>(member.prov.a)],
                               std::move(vars));
        }
        case Provenance::Kind::Comp: {
            std::vector<Term> children;
            children.reserve(member.prov.inners.size());
            for (std::uint32_t inner : member.prov.inners) children.push_back(witness(inner));
            return Term::apply(gen_names_[static_cast<std::size_t>(member.prov.a)],
                               std::move(children));
        }
    }
    throw Error("unreachable");
}

void CloneFragment::dump(std::ostream& out) const {
    for (std::uint32_t i = 0; i < members_.size(); ++i) {
        print_op_table(out, members_[i].table);
        print_term(out, witness(i));
        out << '\n';
    }
}

/// Drives one bounded closure computation; writes into a CloneFragment.
class ClosureRun {
public:
    ClosureRun(const std::vector<OpTable>& generators, Chain chain, const ClosureBudget& budget,
               std::vector<std::string> names, const OpTable* target)
        : frag_(chain, budget), target_(target) {
        if (budget.max_arity < 1) throw ArityMismatch("max_arity must be positive");
        frag_.generators_ = generators;
        if (names.empty())
            for (std::size_t i = 0; i < generators.size(); ++i)
                names.push_back("g" + std::to_string(i + 1));
        if (names.size() != generators.size())
            throw Error("one name per generator expected");
        frag_.gen_names_ = std::move(names);
        for (const OpTable& g : generators)
            if (g.domain != chain) throw DomainMismatch("generator on a different chain");
        gen_symmetric_.reserve(generators.size());
        for (const OpTable& g : generators) gen_symmetric_.push_back(is_totally_symmetric(g));
        if (budget.validate_witnesses) {
            validation_registry_.emplace(chain);
            for (std::size_t i = 0; i < generators.size(); ++i)
                validation_registry_->add(frag_.gen_names_[i], generators[i]);
        }
        frag_.exhausted_.assign(static_cast<std::size_t>(budget.max_arity) + 1, false);
        by_arity_.assign(static_cast<std::size_t>(budget.max_arity) + 1, {});
        frag_.members_.reserve(budget.max_tables + 64);
    }

    CloneFragment run() {
        seed();
        for (int a = 1; a <= frag_.budget_.max_arity && !found_; ++a) close_arity(a);
        return std::move(frag_);
    }

    std::optional<std::uint32_t> found() const { return found_; }

private:
    using Provenance = CloneFragment::Provenance;

    void seed() {
        const Chain chain = frag_.chain_;
        for (int a = 1; a <= frag_.budget_.max_arity; ++a)
            for (int k = 1; k <= a; ++k) {
                OpTable pi = projection_table(a, k, chain);
                insert(std::move(pi.values), a, Provenance{Provenance::Kind::Proj, a, k, {}});
                if (found_) return;
            }
        for (std::size_t g = 0; g < frag_.generators_.size(); ++g) {
            const OpTable& table = frag_.generators_[g];
            if (table.arity > frag_.budget_.max_arity) continue;
            std::vector<Element> values = table.values;
            insert(std::move(values), table.arity,
                   Provenance{Provenance::Kind::Gen, static_cast<int>(g), 0, {}});
            if (found_) return;
        }
    }

    // Insert-if-absent; returns the member index, or nullopt when the table
    // cap stops the insertion.
    std::optional<std::uint32_t> insert(std::vector<Element>&& values, int arity,
                                        Provenance&& prov) {
        const std::uint64_t h = table_hash(arity, values.data(), values.size());
        auto [it, fresh] = frag_.index_.try_emplace(h);
        if (!fresh) {
            for (std::uint32_t idx : it->second) {
                const Member& m = frag_.members_[idx];
                if (m.table.arity == arity && m.table.values == values) return idx;
            }
        }
        const bool is_seed = prov.kind != Provenance::Kind::Comp;
        if (!is_seed && frag_.members_.size() >= frag_.budget_.max_tables) {
            table_cap_hit_ = true;
            return std::nullopt;
        }
        const auto idx = static_cast<std::uint32_t>(frag_.members_.size());
        frag_.members_.push_back(
            Member{OpTable(arity, frag_.chain_, std::move(values)), std::move(prov)});
        it->second.push_back(idx);
        by_arity_[static_cast<std::size_t>(arity)].push_back(idx);
        if (validation_registry_) {
            const OpTable check =
                term_to_table(frag_.witness(idx), arity, *validation_registry_);
            if (check != frag_.members_[idx].table)
                throw Error("witness term does not evaluate to its member table");
        }
        if (target_ && frag_.members_[idx].table == *target_) found_ = idx;
        return idx;
    }

    void close_arity(int a) {
        auto& roster = by_arity_[static_cast<std::size_t>(a)];
        std::size_t old_count = 0;
        bool clean = true;
        int rounds = 0;
        while (!found_) {
            const std::size_t total = roster.size();
            if (old_count == total) break;  // fixpoint
            if (frag_.budget_.max_depth && rounds >= *frag_.budget_.max_depth) {
                clean = false;
                break;
            }
            if (!expand_round(a, old_count, total)) {
                clean = false;
                break;
            }
            old_count = total;
            ++rounds;
        }
        frag_.exhausted_[static_cast<std::size_t>(a)] = clean && !found_;
    }

    // Composes every generator over all member tuples of arity a with at
    // least one index in [old_count, total). Returns false when a budget
    // stopped the round early.
    bool expand_round(int a, std::size_t old_count, std::size_t total) {
        const auto& roster = by_arity_[static_cast<std::size_t>(a)];
        value_ptrs_.resize(total);
        for (std::size_t j = 0; j < total; ++j)
            value_ptrs_[j] = frag_.members_[roster[j]].table.values.data();
        const std::uint64_t entry_count = table_entry_count(frag_.chain_.size(), a);
        scratch_.resize(entry_count);

        for (std::size_t g = 0; g < frag_.generators_.size(); ++g) {
            const OpTable& gen = frag_.generators_[g];
            const int nf = gen.arity;
            idx_.assign(static_cast<std::size_t>(nf), 0);
            if (gen_symmetric_[g]) {
                if (!emit_multisets(a, static_cast<int>(g), gen, 0, 0, old_count, total))
                    return false;
            } else {
                if (!emit_tuples(a, static_cast<int>(g), gen, old_count, total)) return false;
            }
            if (found_) return true;
        }
        return true;
    }

    // Non-decreasing index tuples whose largest entry is new. Valid exactly
    // for totally symmetric outer operations.
    bool emit_multisets(int a, int gen_idx, const OpTable& gen, int pos, std::size_t start,
                        std::size_t old_count, std::size_t total) {
        const int nf = gen.arity;
        if (pos == nf - 1) {
            for (std::size_t j = std::max(start, old_count); j < total; ++j) {
                idx_[static_cast<std::size_t>(pos)] = j;
                if (!emit(a, gen_idx, gen)) return false;
                if (found_) return true;
            }
            return true;
        }
        for (std::size_t j = start; j < total; ++j) {
            idx_[static_cast<std::size_t>(pos)] = j;
            if (!emit_multisets(a, gen_idx, gen, pos + 1, j, old_count, total)) return false;
            if (found_) return true;
        }
        return true;
    }

    // All index tuples with at least one new entry, partitioned by the first
    // position holding a new member.
    bool emit_tuples(int a, int gen_idx, const OpTable& gen, std::size_t old_count,
                     std::size_t total) {
        const int nf = gen.arity;
        if (total == old_count) return true;
        for (int p = 0; p < nf; ++p) {
            if (p > 0 && old_count == 0) break;  // no old members to fill earlier slots
            for (int i = 0; i < nf; ++i)
                idx_[static_cast<std::size_t>(i)] = (i == p) ? old_count : 0;
            lo_.assign(static_cast<std::size_t>(nf), 0);
            hi_.assign(static_cast<std::size_t>(nf), total);
            for (int i = 0; i < p; ++i) hi_[static_cast<std::size_t>(i)] = old_count;
            lo_[static_cast<std::size_t>(p)] = old_count;
            for (;;) {
                if (!emit(a, gen_idx, gen)) return false;
                if (found_) return true;
                int pos = nf - 1;
                while (pos >= 0) {
                    std::size_t& v = idx_[static_cast<std::size_t>(pos)];
                    if (++v < hi_[static_cast<std::size_t>(pos)]) break;
                    v = lo_[static_cast<std::size_t>(pos)];
                    --pos;
                }
                if (pos < 0) break;
            }
        }
        return true;
    }

    bool emit(int a, int gen_idx, const OpTable& gen) {
        if (++compositions_ > frag_.budget_.max_compositions) {
            composition_cap_hit_ = true;
            return false;
        }
        const int m = frag_.chain_.size();
        const int nf = gen.arity;
        const Element* out = gen.values.data();
        const std::uint64_t count = scratch_.size();
        for (std::uint64_t r = 0; r < count; ++r) {
            std::uint64_t orank = 0;
            for (int i = 0; i < nf; ++i)
                orank = orank * static_cast<std::uint64_t>(m) + value_ptrs_[idx_[static_cast<std::size_t>(i)]][r];
            scratch_[r] = out[orank];
        }
        const std::uint64_t h = table_hash(a, scratch_.data(), count);
        auto it = frag_.index_.find(h);
        if (it != frag_.index_.end()) {
            for (std::uint32_t cand : it->second) {
                const Member& mem = frag_.members_[cand];
                if (mem.table.arity == a && mem.table.values == scratch_) return true;  // known
            }
        }
        if (frag_.members_.size() >= frag_.budget_.max_tables) {
            table_cap_hit_ = true;
            return false;
        }
        const auto& roster = by_arity_[static_cast<std::size_t>(a)];
        std::vector<std::uint32_t> inners(static_cast<std::size_t>(nf));
        for (int i = 0; i < nf; ++i) inners[static_cast<std::size_t>(i)] = roster[idx_[static_cast<std::size_t>(i)]];
        std::vector<Element> values = scratch_;
        insert(std::move(values), a,
               Provenance{Provenance::Kind::Comp, gen_idx, 0, std::move(inners)});
        return true;
    }

    using Member = CloneFragment::Member;

    CloneFragment frag_;
    const OpTable* target_;
    std::optional<std::uint32_t> found_;
    std::vector<std::vector<std::uint32_t>> by_arity_;
    std::vector<bool> gen_symmetric_;
    std::optional<Registry> validation_registry_;

    std::vector<const Element*> value_ptrs_;
    std::vector<Element> scratch_;
    std::vector<std::size_t> idx_, lo_, hi_;
    std::uint64_t compositions_ = 0;
    bool table_cap_hit_ = false;
    bool composition_cap_hit_ = false;
};

CloneFragment close(const std::vector<OpTable>& generators, Chain chain,
                    const ClosureBudget& budget, std::vector<std::string> names) {
    ClosureRun run(generators, chain, budget, std::move(names), nullptr);
    return run.run();
}

ContainsResult contains(const CloneFragment& fragment, const OpTable& target) {
    if (target.domain != fragment.chain())
        throw DomainMismatch("target lives on a different chain");
    if (target.arity > fragment.budget().max_arity)
        throw ArityOverBudget("target arity exceeds the fragment's arity budget");
    if (auto idx = fragment.find(target))
        return ContainsResult{Membership::Yes, fragment.witness(*idx)};
    if (fragment.exhausted(target.arity)) return ContainsResult{Membership::No, std::nullopt};
    return ContainsResult{Membership::Unknown, std::nullopt};
}

CloseUntilResult close_until(const std::vector<OpTable>& generators, Chain chain,
                             const ClosureBudget& budget, const OpTable& target,
                             std::vector<std::string> names) {
    if (target.arity > budget.max_arity)
        throw ArityOverBudget("target arity exceeds the arity budget");
    ClosureRun run(generators, chain, budget, std::move(names), &target);
    CloneFragment fragment = run.run();
    ContainsResult membership =
        run.found() ? ContainsResult{Membership::Yes, fragment.witness(*run.found())}
                    : contains(fragment, target);
    return CloseUntilResult{std::move(fragment), std::move(membership)};
}

MinimalityProbe minimality_probe(const OpTable& f, Chain chain, const ClosureBudget& budget) {
    if (projection_index(f) != 0)
        throw ProjectionGenerator("minimality probes reject projections");
    MinimalityProbe probe{close({f}, chain, budget, {"f"}), {}, {}, {}, {}};
    ClosureBudget inner = budget;
    inner.max_arity = std::max(budget.max_arity, f.arity);
    const auto& members = probe.fragment.members();
    for (std::uint32_t idx = 0; idx < members.size(); ++idx) {
        if (probe.fragment.is_projection_member(idx)) continue;
        const CloseUntilResult r = close_until({members[idx].table}, chain, inner, f, {"g"});
        probe.results.push_back({idx, r.membership.status});
        if (r.membership.status == Membership::No) probe.failing.push_back(idx);
        if (r.membership.status == Membership::Unknown) probe.unknown.push_back(idx);
    }
    probe.note =
        "bounded-arity, bounded-chain evidence under the configured budget; not a minimality proof";
    return probe;
}

}  // namespace clonelab
