// clonelab: batch verification workbench for clone-theoretic constructions
// on finite chains. Every subcommand prints a human-readable report and can
// mirror it as JSON via --json PATH.

#include <atomic>
#include <chrono>
#include <cstdlib>
#include <fstream>
#include <iostream>
#include <thread>

#include "CLI11.hpp"
#include "json.hpp"

#include "clonelab/closure.hpp"
#include "clonelab/median_constructions.hpp"
#include "clonelab/order_stats.hpp"
#include "clonelab/verify.hpp"
#include "clonelab/wildness.hpp"

using json = nlohmann::ordered_json;
using namespace clonelab;

namespace {

using Clock = std::chrono::steady_clock;

struct Report {
    json body;
    bool all_pass = true;
    bool any_unknown = false;
    Clock::time_point start = Clock::now();

    explicit Report(const std::string& command) {
        body["command"] = command;
        body["parameters"] = json::object();
        body["verdicts"] = json::array();
        body["counts"] = json::object();
    }

    void param(const std::string& key, const json& value) { body["parameters"][key] = value; }
    void count(const std::string& key, std::uint64_t value) { body["counts"][key] = value; }

    void verdict(const std::string& check, const std::string& state,
                 const std::string& counterexample = "") {
        json v;
        v["check"] = check;
        v["verdict"] = state;
        if (!counterexample.empty()) v["counterexample"] = counterexample;
        body["verdicts"].push_back(v);
        if (state == "fail") all_pass = false;
        if (state == "unknown") any_unknown = true;
    }

    double seconds() const {
        return std::chrono::duration<double>(Clock::now() - start).count();
    }

    // Wall time goes to the console only by default: the JSON report stays
    // byte-deterministic for identical inputs.
    int finish(const std::string& json_path, bool timings) {
        if (timings) body["wall_seconds"] = seconds();
        if (!json_path.empty()) {
            std::ofstream out(json_path);
            if (!out) {
                std::cerr << "cannot write JSON report to " << json_path << "\n";
                return 2;
            }
            out << body.dump(2) << "\n";
        }
        std::printf("wall time: %.3f s\n", seconds());
        if (!all_pass) return 1;
        if (any_unknown) return 1;
        return 0;
    }
};

int thread_cap() {
    unsigned hw = std::thread::hardware_concurrency();
    if (hw == 0) hw = 1;
    if (const char* env = std::getenv("CLONELAB_THREADS")) {
        const long cap = std::strtol(env, nullptr, 10);
        if (cap >= 1 && static_cast<unsigned>(cap) < hw) hw = static_cast<unsigned>(cap);
    }
    return static_cast<int>(hw);
}

// A table spec is either a symbolic order-statistic name (m:n:k, med:n,
// min:n, max:n) or a path to an optable file.
OpTable resolve_table_spec(const std::string& spec, Chain chain) {
    if (auto sym = parse_symbolic_op(spec)) return order_stat_table(sym->n, sym->k, chain);
    std::ifstream in(spec);
    if (!in) throw Error("cannot open table file or parse symbolic name '" + spec + "'");
    OpTable table = parse_op_table(in);
    if (table.domain != chain)
        throw DomainMismatch("table in '" + spec + "' lives on a chain of size " +
                             std::to_string(table.domain.size()) + ", expected " +
                             std::to_string(chain.size()));
    return table;
}

json family_minimal_sets_json(const WildFamily& family) {
    json sets = json::array();
    for (std::uint32_t mask : family.minimal_sets()) {
        json indices = json::array();
        for (int i = 0; i < family.ambient_arity(); ++i)
            if (mask & (1u << i)) indices.push_back(i + 1);
        sets.push_back(indices);
    }
    return sets;
}

std::string membership_name(Membership m) {
    switch (m) {
        case Membership::Yes: return "yes";
        case Membership::No: return "no";
        case Membership::Unknown: return "unknown";
    }
    return "?";
}

int cmd_median_gen(int n, int k, int chain_size, const std::string& json_path, bool timings) {
    Report report("median-gen");
    report.param("n", n);
    report.param("k", k);
    report.param("chain", chain_size);
    const Chain chain(chain_size);
    const VarMap map = ident_med_map(n, k);
    json assignment = json::array();
    for (int t : map.assignment) assignment.push_back(t);
    report.body["identification"] = assignment;
    const OpTable lhs = identify_vars(median_table(n, chain), map);
    const OpTable rhs = median_table(k, chain);
    const bool ok = lhs == rhs;
    const std::uint64_t tuples = table_entry_count(chain_size, n);
    report.count("tuples_checked", tuples);
    report.verdict("identify_vars(med_" + std::to_string(n) + ") = med_" + std::to_string(k),
                   ok ? "pass" : "fail", ok ? "" : first_difference(lhs, rhs));
    std::printf("med_%d from med_%d on the %d-chain: %s (%llu tuples)\n", k, n, chain_size,
                ok ? "pass" : "FAIL", static_cast<unsigned long long>(tuples));
    return report.finish(json_path, timings);
}

int cmd_amplify(int n, const std::string& threshold_text, const std::string& json_path,
                bool timings) {
    Report report("amplify");
    report.param("n", n);
    report.param("threshold", threshold_text);
    const BigRat threshold = BigRat::from_string(threshold_text);
    const AmplificationSchedule schedule = amplification_schedule(n, threshold);

    report.body["n"] = n;
    json steps = json::array();
    for (const ScheduleStep& s : schedule.steps) {
        json row;
        row["j"] = s.j;
        row["n_j"] = s.n.str();
        row["k_j"] = s.k.is_integer() ? BigInt(s.k.num() / s.k.den()).str() : s.k.to_string();
        row["r_j"] = s.r.to_string();
        steps.push_back(row);
        std::printf("j=%-2d  n_j=%s  k_j=%s  r_j=%s\n", s.j, row["n_j"].get<std::string>().c_str(),
                    row["k_j"].get<std::string>().c_str(),
                    row["r_j"].get<std::string>().c_str());
    }
    report.body["steps"] = steps;
    report.body["b"] = schedule.b.str();
    report.body["degenerate"] = schedule.degenerate;
    std::printf("b = %s%s\n", schedule.b.str().c_str(),
                schedule.degenerate ? "  (degenerate: b < n)" : "");

    report.verdict("schedule converged", schedule.converged ? "pass" : "fail",
                   schedule.converged ? "" : "step cap reached");
    report.verdict("lower-bound inequality r_{j+1} >= r_j(3/2 - r_j^2/2 - 1/(n_j-1))",
                   schedule_satisfies_lower_bound(schedule) ? "pass" : "fail");
    return report.finish(json_path, timings);
}

int cmd_majority_ladder(int from, int to, int chain_size, const std::string& json_path,
                        bool timings) {
    Report report("majority-ladder");
    report.param("from", from);
    report.param("to", to);
    report.param("chain", chain_size);
    const Chain chain(chain_size);
    const LadderPlan plan = majority_ladder(from, to);
    json steps = json::array();
    for (const LadderStep& s : plan.steps) {
        const char* kind = s.kind == LadderStep::Kind::Grow    ? "grow"
                           : s.kind == LadderStep::Kind::Even ? "even"
                                                              : "ternary";
        json row;
        row["kind"] = kind;
        row["from"] = s.from_arity;
        row["to"] = s.to_arity;
        steps.push_back(row);
        std::printf("step: %s %d -> %d\n", kind, s.from_arity, s.to_arity);
    }
    report.body["plan"] = steps;
    const OpTable out = run_ladder(plan, default_majority_table(from, chain));
    const bool ok = out.arity == to && is_majority(out);
    report.count("tuples_checked", out.values.size());
    report.verdict("final table is a majority function", ok ? "pass" : "fail");
    std::printf("maj_%d from maj_%d on the %d-chain: %s\n", to, from, chain_size,
                ok ? "pass" : "FAIL");
    return report.finish(json_path, timings);
}

ClosureBudget budget_from(int max_arity, std::size_t max_tables) {
    ClosureBudget budget;
    budget.max_arity = max_arity;
    budget.max_tables = max_tables;
    return budget;
}

int cmd_closure(const std::vector<std::string>& gens, int chain_size, int max_arity,
                std::size_t max_tables, const std::string& out_path,
                const std::string& json_path, bool timings) {
    Report report("closure");
    report.param("generators", gens);
    report.param("chain", chain_size);
    report.param("max_arity", max_arity);
    report.param("max_tables", max_tables);
    const Chain chain(chain_size);
    std::vector<OpTable> tables;
    for (const std::string& g : gens) tables.push_back(resolve_table_spec(g, chain));
    const CloneFragment frag = close(tables, chain, budget_from(max_arity, max_tables),
                                     std::vector<std::string>(gens));
    report.count("tables_enumerated", frag.members().size());
    json exhausted = json::array();
    for (int a = 1; a <= max_arity; ++a) exhausted.push_back(frag.exhausted(a));
    report.body["exhausted_per_arity"] = exhausted;
    std::printf("members: %zu\n", frag.members().size());
    for (int a = 1; a <= max_arity; ++a)
        std::printf("arity %d: %s\n", a, frag.exhausted(a) ? "exhausted" : "budget-truncated");
    bool all_exhausted = true;
    for (int a = 1; a <= max_arity; ++a) all_exhausted = all_exhausted && frag.exhausted(a);
    report.verdict("fixpoint reached at every arity", all_exhausted ? "pass" : "unknown",
                   all_exhausted ? "" : "budget truncated the search");
    if (!out_path.empty()) {
        std::ofstream out(out_path);
        if (!out) throw Error("cannot write fragment dump to " + out_path);
        frag.dump(out);
        std::printf("fragment dumped to %s\n", out_path.c_str());
    }
    return report.finish(json_path, timings);
}

int cmd_member(const std::vector<std::string>& gens, const std::string& target_spec,
               int chain_size, int max_arity, std::size_t max_tables,
               const std::string& json_path, bool timings) {
    Report report("member");
    report.param("generators", gens);
    report.param("target", target_spec);
    report.param("chain", chain_size);
    report.param("max_arity", max_arity);
    report.param("max_tables", max_tables);
    const Chain chain(chain_size);
    std::vector<OpTable> tables;
    for (const std::string& g : gens) tables.push_back(resolve_table_spec(g, chain));
    const OpTable target = resolve_table_spec(target_spec, chain);
    const CloseUntilResult result = close_until(tables, chain, budget_from(max_arity, max_tables),
                                                target, std::vector<std::string>(gens));
    report.count("tables_enumerated", result.fragment.members().size());
    report.body["membership"] = membership_name(result.membership.status);
    switch (result.membership.status) {
        case Membership::Yes: {
            const std::string witness = term_to_string(*result.membership.witness);
            report.body["witness"] = witness;
            report.verdict("membership decided", "pass");
            std::printf("yes: %s\n", witness.c_str());
            break;
        }
        case Membership::No:
            report.verdict("membership decided", "pass");
            std::printf("no (fixpoint exhausted at arity %d)\n", target.arity);
            break;
        case Membership::Unknown:
            report.verdict("membership decided", "unknown", "budget truncated the search");
            std::printf("unknown (budget truncated the search)\n");
            break;
    }
    return report.finish(json_path, timings);
}

int cmd_minimality(const std::string& gen, int chain_size, int max_arity,
                   std::size_t max_tables, const std::string& json_path, bool timings) {
    Report report("minimality");
    report.param("generator", gen);
    report.param("chain", chain_size);
    report.param("max_arity", max_arity);
    report.param("max_tables", max_tables);
    const Chain chain(chain_size);
    const OpTable f = resolve_table_spec(gen, chain);
    const MinimalityProbe probe = minimality_probe(f, chain, budget_from(max_arity, max_tables));
    report.count("tables_enumerated", probe.fragment.members().size());
    report.count("members_probed", probe.results.size());
    report.body["note"] = probe.note;

    json failing = json::array();
    for (std::uint32_t idx : probe.failing) {
        json entry;
        entry["member"] = idx;
        entry["witness"] = term_to_string(probe.fragment.witness(idx));
        failing.push_back(entry);
    }
    report.body["non_regenerating"] = failing;
    report.body["unknown_members"] = probe.unknown.size();

    std::printf("probed %zu non-projection members of the fragment (%zu tables)\n",
                probe.results.size(), probe.fragment.members().size());
    if (probe.all_regenerate()) {
        std::printf("every member regenerates the generator: minimality evidence\n");
        report.verdict("all members regenerate the generator", "pass");
    } else if (!probe.failing.empty()) {
        std::printf("non-minimality witnessed by %zu member(s), e.g. %s\n",
                    probe.failing.size(),
                    term_to_string(probe.fragment.witness(probe.failing.front())).c_str());
        report.verdict("all members regenerate the generator", "fail",
                       "member " + std::to_string(probe.failing.front()) +
                           " generates a proper subclone");
    } else {
        report.verdict("all members regenerate the generator", "unknown",
                       "budget truncated some member closures");
    }
    std::printf("note: %s\n", probe.note.c_str());
    return report.finish(json_path, timings);
}

int cmd_wild(const std::string& term_path, int arity, int oracle_bound,
             const std::string& json_path, bool timings) {
    Report report("wild");
    report.param("term", term_path);
    std::ifstream in(term_path);
    if (!in) throw Error("cannot open term file '" + term_path + "'");
    const Term term = parse_term(in);
    const int ambient = arity > 0 ? arity : term.min_ambient_arity();
    report.param("arity", ambient);
    const WildFamily family = wild_family_of_term(term, ambient);

    report.body["minimal_wild_sets"] = family_minimal_sets_json(family);
    const bool pol = in_pol_t1(family);
    const bool almost_unary = ambient >= 2 && is_almost_unary_family(family);
    report.body["in_pol_t1"] = pol;
    report.body["almost_unary"] = almost_unary;
    std::printf("term: %s\n", term_to_string(term).c_str());
    std::printf("minimal wild sets: %s\n", report.body["minimal_wild_sets"].dump().c_str());
    std::printf("in Pol(T_1): %s\n", pol ? "yes" : "no");
    std::printf("almost unary: %s\n", almost_unary ? "yes" : "no");
    report.verdict("wild family computed", "pass");

    if (oracle_bound > 0) {
        report.param("oracle", oracle_bound);
        const std::uint32_t full = (1u << ambient) - 1;
        const int threads = std::min<int>(thread_cap(), static_cast<int>(full) + 1);
        std::vector<std::uint8_t> agree(static_cast<std::size_t>(full) + 1, 0);
        std::atomic<std::uint32_t> next{0};
        auto sweep = [&]() {
            for (;;) {
                const std::uint32_t mask = next.fetch_add(1);
                if (mask > full) return;
                const GrowthVerdict v =
                    oracle_wild_check({term, ambient, mask, oracle_bound});
                agree[mask] =
                    family.contains(mask) == (v == GrowthVerdict::Unbounded) ? 1 : 0;
            }
        };
        std::vector<std::thread> pool;
        for (int t = 1; t < threads; ++t) pool.emplace_back(sweep);
        sweep();
        for (std::thread& t : pool) t.join();
        std::uint64_t mismatches = 0;
        for (std::uint32_t mask = 0; mask <= full; ++mask)
            if (!agree[mask]) ++mismatches;
        report.count("subsets_checked", static_cast<std::uint64_t>(full) + 1);
        report.verdict("growth oracle agrees on every subset",
                       mismatches == 0 ? "pass" : "fail",
                       mismatches ? std::to_string(mismatches) + " subsets disagree" : "");
        std::printf("oracle agreement at M=%d: %s\n", oracle_bound,
                    mismatches == 0 ? "pass" : "FAIL");
    }
    return report.finish(json_path, timings);
}

int cmd_classify(int n, int k, int chain_size, const std::string& json_path, bool timings) {
    Report report("classify");
    report.param("n", n);
    report.param("k", k);
    report.param("chain", chain_size);
    const int level = chain_level(n, k);
    report.body["chain_level"] = level;
    std::printf("M_%d^%d = M_%d\n", n, k, level);

    const Chain chain(chain_size);
    const VarMap map = classification_identity_map(n, k);
    const OpTable lhs = identify_vars(order_stat_table(n, k, chain), map);
    const OpTable rhs = order_stat_table(level, 2, chain);
    const bool ok = lhs == rhs;
    report.count("tuples_checked", table_entry_count(chain_size, n));
    report.verdict("identification yields m^" + std::to_string(level) + "_2",
                   ok ? "pass" : "fail", ok ? "" : first_difference(lhs, rhs));
    std::printf("identification m^%d_%d -> m^%d_2 on the %d-chain: %s\n", n, k, level,
                chain_size, ok ? "pass" : "FAIL");
    return report.finish(json_path, timings);
}

int cmd_verify_all(std::uint64_t seed, bool full, const std::string& json_path, bool timings) {
    Report report("verify-all");
    verify::Options options;
    options.seed = seed;
    options.quick = !full;
    report.param("seed", options.seed);
    report.param("quick", options.quick);
    std::printf("seed: %llu\n", static_cast<unsigned long long>(options.seed));

    const auto reports = verify::run_all(options);
    json criteria = json::array();
    for (const auto& c : reports) {
        json entry;
        entry["id"] = c.id;
        entry["name"] = c.name;
        entry["verdict"] = c.verdict;
        entry["tuples_checked"] = c.tuples_checked;
        entry["tables_enumerated"] = c.tables_enumerated;
        if (!c.counterexample.empty()) entry["counterexample"] = c.counterexample;
        entry["details"] = c.details;
        criteria.push_back(entry);
        report.verdict("criterion " + std::to_string(c.id) + ": " + c.name, c.verdict,
                       c.counterexample);
        std::printf("[%s] criterion %2d: %s (%.3f s)\n", c.passed() ? "PASS" : "FAIL", c.id,
                    c.name.c_str(), c.seconds);
        if (!c.passed()) std::printf("       counterexample: %s\n", c.counterexample.c_str());
    }
    report.body["criteria"] = criteria;
    return report.finish(json_path, timings);
}

}  // namespace

int main(int argc, char** argv) {
    CLI::App app{"clonelab: clone-theoretic constructions on finite chains, verified"};
    app.require_subcommand(1);
    app.fallthrough();  // app-level flags may follow the subcommand name

    std::string json_path;
    bool timings = false;
    app.add_option("--json", json_path, "write the report as JSON to this path");
    app.add_flag("--timings", timings, "include wall time in the JSON report");

    int n = 0, k = 0, from = 0, to = 0, max_arity = 3, arity = 0, oracle = 0;
    int chain_gen = 4, chain_ladder = 2, chain_closure = 4, chain_cls = 3;
    std::size_t max_tables = 200'000;
    std::uint64_t seed = verify::Options{}.seed;
    std::string threshold = "1/2", out_path, target, term_path;
    std::vector<std::string> gens;
    bool full = false, quick = false;

    auto* median_gen = app.add_subcommand("median-gen", "med_k from med_n by identification");
    median_gen->add_option("--n", n)->required();
    median_gen->add_option("--k", k)->required();
    median_gen->add_option("--chain", chain_gen)->capture_default_str();

    auto* amplify = app.add_subcommand("amplify", "exact amplification schedule");
    amplify->add_option("--n", n)->required();
    amplify->add_option("--threshold", threshold, "stop once r_j exceeds P/Q")
        ->capture_default_str();

    auto* ladder = app.add_subcommand("majority-ladder", "majority function arity conversion");
    ladder->add_option("--from", from)->required();
    ladder->add_option("--to", to)->required();
    ladder->add_option("--chain", chain_ladder)->capture_default_str();

    auto* closure_cmd = app.add_subcommand("closure", "bounded clone closure of generators");
    closure_cmd->add_option("--gen", gens, "symbolic name (m:n:k, med:n, ...) or optable file")
        ->required();
    closure_cmd->add_option("--chain", chain_closure)->capture_default_str();
    closure_cmd->add_option("--max-arity", max_arity)->capture_default_str();
    closure_cmd->add_option("--max-tables", max_tables)->capture_default_str();
    closure_cmd->add_option("--out", out_path, "dump the fragment (tables + witnesses)");

    auto* member = app.add_subcommand("member", "membership of a target in a bounded closure");
    member->add_option("--gen", gens)->required();
    member->add_option("--target", target)->required();
    member->add_option("--chain", chain_closure)->capture_default_str();
    member->add_option("--max-arity", max_arity)->capture_default_str();
    member->add_option("--max-tables", max_tables)->capture_default_str();

    auto* minimality = app.add_subcommand("minimality", "desk-scale minimality probe");
    minimality->add_option("--gen", target)->required();
    minimality->add_option("--chain", chain_cls)->capture_default_str();
    minimality->add_option("--max-arity", max_arity)->capture_default_str();
    minimality->add_option("--max-tables", max_tables)->capture_default_str();

    auto* wild = app.add_subcommand("wild", "wild family of a monotone term");
    wild->add_option("--term", term_path, "term file (s-expression)")->required();
    wild->add_option("--arity", arity, "ambient arity (default: inferred)");
    wild->add_option("--oracle", oracle, "cross-check with the growth oracle up to M");

    auto* classify = app.add_subcommand("classify", "chain level of M_n^k with identity check");
    classify->add_option("--n", n)->required();
    classify->add_option("--k", k)->required();
    classify->add_option("--chain", chain_cls)->capture_default_str();

    auto* verify_all = app.add_subcommand("verify-all", "run the full verification suite");
    verify_all->add_option("--seed", seed)->capture_default_str();
    verify_all->add_flag("--quick", quick, "the standard bounds (default)");
    verify_all->add_flag("--full", full, "extended corpora");

    try {
        app.parse(argc, argv);
    } catch (const CLI::CallForHelp& e) {
        return app.exit(e);
    } catch (const CLI::ParseError& e) {
        app.exit(e);
        return 2;
    }

    try {
        if (median_gen->parsed()) return cmd_median_gen(n, k, chain_gen, json_path, timings);
        if (amplify->parsed()) return cmd_amplify(n, threshold, json_path, timings);
        if (ladder->parsed())
            return cmd_majority_ladder(from, to, chain_ladder, json_path, timings);
        if (closure_cmd->parsed())
            return cmd_closure(gens, chain_closure, max_arity, max_tables, out_path, json_path,
                               timings);
        if (member->parsed())
            return cmd_member(gens, target, chain_closure, max_arity, max_tables, json_path,
                              timings);
        if (minimality->parsed())
            return cmd_minimality(target, chain_cls, max_arity, max_tables, json_path, timings);
        if (wild->parsed()) return cmd_wild(term_path, arity, oracle, json_path, timings);
        if (classify->parsed()) return cmd_classify(n, k, chain_cls, json_path, timings);
        if (verify_all->parsed()) return cmd_verify_all(seed, full, json_path, timings);
    } catch (const std::exception& e) {
        std::cerr << "error: " << e.what() << "\n";
        return 1;
    }
    return 2;
}
