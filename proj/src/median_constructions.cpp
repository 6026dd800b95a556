#include "clonelab/median_constructions.hpp"

#include <algorithm>

#include "clonelab/order_stats.hpp"

namespace clonelab {

BigRat::BigRat(BigInt num, BigInt den) : num_(std::move(num)), den_(std::move(den)) {
    if (den_ == 0) throw Error("rational with zero denominator");
    if (den_ < 0) {
        num_ = -num_;
        den_ = -den_;
    }
}

BigRat BigRat::reduced() const {
    BigInt g = boost::multiprecision::gcd(num_ < 0 ? BigInt(-num_) : num_, den_);
    if (g == 0) return BigRat(0, 1);
    return BigRat(num_ / g, den_ / g);
}

std::string BigRat::to_string() const {
    if (den_ == 1) return num_.str();
    return num_.str() + "/" + den_.str();
}

BigRat BigRat::from_string(const std::string& text) {
    const std::size_t slash = text.find('/');
    try {
        if (slash == std::string::npos) return BigRat(BigInt(text), 1);
        return BigRat(BigInt(text.substr(0, slash)), BigInt(text.substr(slash + 1)));
    } catch (const std::exception&) {
        throw ParseError("cannot parse rational '" + text + "'");
    }
}

std::int64_t remainder_of_division(std::int64_t n, std::int64_t k) {
    if (n < 1 || k < 1) throw IndexOutOfRange("remainder needs positive arguments");
    return n % k;
}

bool is_almost_divisible(std::int64_t n, std::int64_t k) {
    const std::int64_t r = remainder_of_division(n, k);
    // R <= n/k or (k-1) - R <= n/k, cleared of the denominator k.
    return r * k <= n || ((k - 1) - r) * k <= n;
}

namespace {

VarMap block_map(int source_arity, std::span<const int> multiplicities) {
    std::vector<int> assignment;
    assignment.reserve(static_cast<std::size_t>(source_arity));
    for (std::size_t j = 0; j < multiplicities.size(); ++j)
        for (int c = 0; c < multiplicities[j]; ++c) assignment.push_back(static_cast<int>(j) + 1);
    return VarMap(source_arity, static_cast<int>(multiplicities.size()), std::move(assignment));
}

// Multiplicities floor(n/k)+1 for j <= R(n/k), floor(n/k) otherwise.
std::vector<int> remainder_multiplicities(int n, int k) {
    const int q = n / k;
    const int r = n % k;
    std::vector<int> mult(static_cast<std::size_t>(k), q);
    for (int j = 0; j < r; ++j) ++mult[static_cast<std::size_t>(j)];
    return mult;
}

}  // namespace

VarMap ident_med_map(int n, int k) {
    if (n % 2 == 0 || k % 2 == 0)
        throw ParityViolation("median identification needs odd arities");
    if (k > n) throw IndexOutOfRange("k must not exceed n");
    if (!is_almost_divisible(n, k))
        throw NotAlmostDivisible(std::to_string(n) + " is not almost divisible by " +
                                 std::to_string(k));
    return block_map(n, remainder_multiplicities(n, k));
}

VarMap med3_doubling_map(int n) {
    if (n % 2 == 0) throw ParityViolation("the doubling map needs odd n");
    if (n < 3) throw ArityTooSmall("the doubling map needs n >= 3");
    std::vector<int> mult{1, (n - 1) / 2, (n - 1) / 2};
    return block_map(n, mult);
}

namespace {

Term identification_term(const std::string& source_name, const VarMap& map) {
    std::vector<Term> children;
    children.reserve(static_cast<std::size_t>(map.source_arity));
    for (int target : map.assignment) children.push_back(Term::var(target));
    return Term::apply(source_name, std::move(children));
}

void require_majority(const OpTable& table, const std::string& name) {
    if (!is_majority(table))
        throw NotAMajority("table '" + name + "' is not a majority function");
}

}  // namespace

Term ternary_majority_term(const std::string& source_name, const OpTable& source) {
    const int n = source.arity;
    if (n < 5) throw ArityTooSmall("ternary extraction needs arity >= 5");
    require_majority(source, source_name);
    return identification_term(source_name, block_map(n, remainder_multiplicities(n, 3)));
}

Term even_majority_term(const std::string& source_name, const OpTable& source) {
    const int n = source.arity - 1;
    if (n < 2 || n % 2 != 0)
        throw ParityViolation("even extraction produces even arity from odd arity");
    require_majority(source, source_name);
    std::vector<Term> children;
    children.reserve(static_cast<std::size_t>(n + 1));
    for (int i = 1; i <= n; ++i) children.push_back(Term::var(i));
    children.push_back(Term::var(n));
    return Term::apply(source_name, std::move(children));
}

Term grow_majority_term(const std::string& source_name, const OpTable& source, int n) {
    if (n < 5) throw ArityTooSmall("growing needs target arity >= 5");
    if (source.arity != n - 2)
        throw ArityMismatch("growing to arity " + std::to_string(n) + " needs an (n-2)-ary source");
    require_majority(source, source_name);

    // gamma_i^j ignores x_i and the next component that is not x_j.
    const auto gamma = [&](int i, int j) {
        std::vector<Term> args;
        args.reserve(static_cast<std::size_t>(n - 2));
        const int second_dropped = (j == i + 1) ? i + 2 : i + 1;
        for (int v = 1; v <= n; ++v)
            if (v != i && v != second_dropped) args.push_back(Term::var(v));
        return Term::apply(source_name, std::move(args));
    };

    std::vector<Term> zs;
    zs.reserve(static_cast<std::size_t>(n - 2));
    for (int j = 2; j <= n - 1; ++j) {
        std::vector<Term> gammas;
        gammas.reserve(static_cast<std::size_t>(n - 2));
        for (int i = 1; i <= n - 1; ++i)
            if (i != j) gammas.push_back(gamma(i, j));
        zs.push_back(Term::apply(source_name, std::move(gammas)));
    }
    return Term::apply(source_name, std::move(zs));
}

int apply_depth(const Term& term) {
    if (!term.is_apply()) return 0;
    int best = 0;
    for (const Term& c : term.children()) best = std::max(best, apply_depth(c));
    return 1 + best;
}

LadderPlan majority_ladder(int source_arity, int target_arity) {
    if (source_arity < 3) throw ArityTooSmall("ladder sources start at arity 3");
    if (target_arity < 2) throw ArityTooSmall("ladder targets start at arity 2");
    LadderPlan plan{source_arity, target_arity, {}};
    int cur = source_arity;

    const auto grow_to = [&plan, &cur](int target) {
        while (cur < target) {
            plan.steps.push_back({LadderStep::Kind::Grow, cur, cur + 2});
            cur += 2;
        }
    };
    const auto ternary = [&plan, &cur]() {
        plan.steps.push_back({LadderStep::Kind::Ternary, cur, 3});
        cur = 3;
    };
    const auto even_step = [&plan, &cur]() {
        plan.steps.push_back({LadderStep::Kind::Even, cur, cur - 1});
        cur -= 1;
    };

    if (cur == target_arity) return plan;

    if (target_arity % 2 == 1) {
        // Odd target: reach it on the odd grow ladder.
        if (cur % 2 == 1) {
            if (target_arity > cur) {
                grow_to(target_arity);
            } else {
                ternary();
                grow_to(target_arity);
            }
        } else {
            // Even source: arity 4 first detours through a 6-ary majority,
            // everything else extracts a ternary majority directly.
            if (cur == 4) grow_to(6);
            ternary();
            grow_to(target_arity);
        }
    } else {
        // Even target: reach target+1 on the odd ladder, then double the
        // last variable.
        if (cur % 2 == 1) {
            if (target_arity > cur) {
                grow_to(target_arity + 1);
            } else if (target_arity != cur - 1) {
                ternary();
                grow_to(target_arity + 1);
            }
        } else {
            if (cur == 4) grow_to(6);
            ternary();
            grow_to(target_arity + 1);
        }
        even_step();
    }
    return plan;
}

OpTable run_ladder(const LadderPlan& plan, const OpTable& source, Registry* trace) {
    if (source.arity != plan.source_arity)
        throw ArityMismatch("source table arity does not match the plan");
    require_majority(source, "ladder source");
    OpTable current = source;
    int step_index = 0;
    for (const LadderStep& step : plan.steps) {
        const std::string name =
            "maj" + std::to_string(step.from_arity) + "_s" + std::to_string(step_index++);
        Registry reg(current.domain);
        reg.add(name, current);
        Term term = [&]() {
            switch (step.kind) {
                case LadderStep::Kind::Grow: return grow_majority_term(name, current, step.to_arity);
                case LadderStep::Kind::Even: return even_majority_term(name, current);
                case LadderStep::Kind::Ternary: return ternary_majority_term(name, current);
            }
            throw Error("unreachable");
        }();
        current = term_to_table(term, step.to_arity, reg);
        require_majority(current, name + " output");
        if (trace) trace->add(name, current);
    }
    return current;
}

OpTable default_majority_table(int n, Chain chain) {
    if (n < 2) throw ArityTooSmall("majority tables start at arity 2");
    if (n % 2 == 1) return median_table(n, chain);
    std::vector<int> assignment;
    for (int i = 1; i <= n; ++i) assignment.push_back(i);
    assignment.push_back(n);
    return identify_vars(median_table(n + 1, chain), VarMap(n + 1, n, std::move(assignment)));
}

namespace {

BigInt binom3(const BigInt& x) { return x * (x - 1) * (x - 2) / 6; }

// Polynomial forms of the binomials, exact over the rationals; k_j need not
// stay integral once (n_j - k_j)/2 does not.
BigRat binom3(const BigRat& x) { return x * (x - BigRat(1)) * (x - BigRat(2)) / BigRat(6); }
BigRat binom2(const BigRat& x) { return x * (x - BigRat(1)) / BigRat(2); }

}  // namespace

AmplificationSchedule amplification_schedule(int n, const BigRat& threshold, int step_cap) {
    if (n < 3 || n % 2 == 0) throw ParityViolation("amplification starts from odd n >= 3");
    AmplificationSchedule schedule{n, threshold, {}, BigInt(0), false, true};
    BigInt nj(n);
    BigRat kj(1);
    BigRat rj(BigInt(1), BigInt(n));
    schedule.steps.push_back({0, nj, kj, rj});
    int j = 0;
    while (rj <= threshold) {
        if (j >= step_cap) {
            schedule.converged = false;
            break;
        }
        const BigRat nr(nj);
        const BigRat diff = nr - kj;
        const BigRat half = diff / BigRat(2);
        kj = (binom3(kj) + binom2(kj) * diff + kj * half * half).reduced();
        nj = binom3(nj);
        if (nj == 0) throw Error("amplification step collapsed to an empty tuple");
        rj = BigRat(kj.num(), kj.den() * nj);
        schedule.steps.push_back({++j, nj, kj, rj});
    }
    if (schedule.converged) {
        schedule.b = schedule.steps.back().n;
        schedule.degenerate = schedule.b < n;
    }
    return schedule;
}

bool schedule_satisfies_lower_bound(const AmplificationSchedule& schedule) {
    for (std::size_t i = 0; i + 1 < schedule.steps.size(); ++i) {
        const ScheduleStep& cur = schedule.steps[i];
        const ScheduleStep& next = schedule.steps[i + 1];
        if (cur.n < 4) continue;
        const BigRat bound =
            cur.r * (BigRat(3, 2) - cur.r * cur.r / BigRat(2) - BigRat(BigInt(1), cur.n - 1));
        if (next.r < bound) return false;
    }
    return true;
}

ExpansionResult simulate_expansion(std::span<const std::int64_t> tuple) {
    const std::size_t len = tuple.size();
    if (len < 3) throw TupleTooShort("expansion needs at least three elements");
    ExpansionResult result;
    result.expanded.reserve(len * (len - 1) * (len - 2) / 6);
    for (std::size_t i = 0; i < len; ++i)
        for (std::size_t j = i + 1; j < len; ++j)
            for (std::size_t l = j + 1; l < len; ++l) {
                const std::int64_t a = tuple[i], b = tuple[j], c = tuple[l];
                const std::int64_t med = std::max(std::min(a, b), std::min(std::max(a, b), c));
                result.expanded.push_back(med);
                ++result.frequency[med];
            }
    return result;
}

VarMap lower_median_to_med3(int n) {
    if (n % 2 != 0) throw OddArity("the lower median is only defined for even n");
    if (n < 6) throw ArityTooSmall("med^low generates the medians only for n >= 6");
    return block_map(n, remainder_multiplicities(n, 3));
}

bool lower_median4_generates_med3(Chain chain) {
    const OpTable low4 = order_stat_table(4, 2, chain);
    const OpTable med3 = median_table(3, chain);
    for (int a = 1; a <= 3; ++a)
        for (int b = 1; b <= 3; ++b)
            for (int c = 1; c <= 3; ++c)
                for (int d = 1; d <= 3; ++d)
                    if (identify_vars(low4, VarMap(4, 3, {a, b, c, d})) == med3) return true;
    return false;
}

VarMap min_from_mnk(int n, int k) {
    if (n < 4 || k < 2 || k > n / 2)
        throw OutOfStatedRange("min identification needs n >= 4 and 2 <= k <= floor(n/2)");
    std::vector<int> mult{n / 2, n - n / 2};
    return block_map(n, mult);
}

VarMap max_from_mnk(int n, int k) {
    if (k <= (n + 1) / 2 || k >= n)
        throw OutOfStatedRange("max identification needs ceil(n/2) < k < n");
    std::vector<int> mult{n / 2, n - n / 2};
    return block_map(n, mult);
}

}  // namespace clonelab
