#include "chorefair/exact_solver.hpp"

#include <algorithm>
#include <future>
#include <string>
#include <thread>

namespace chorefair {
namespace {

std::uint64_t pow_clamped(std::uint64_t base, std::size_t exp, std::uint64_t clamp) {
    std::uint64_t r = 1;
    for (std::size_t i = 0; i < exp; ++i) {
        if (base != 0 && r > clamp / base) return clamp + 1;
        r *= base;
    }
    return r;
}

// Per-agent bundle costs, memoized densely when 2^m is small enough.
class CostOracle {
  public:
    explicit CostOracle(const Instance& inst) : inst_(inst) {
        constexpr std::size_t kMemoCap = 18;
        if (inst.chores() <= kMemoCap) {
            const ChoreSet size = ChoreSet{1} << inst.chores();
            memo_.resize(inst.agents());
            for (std::size_t i = 0; i < inst.agents(); ++i) {
                auto& table = memo_[i];
                table.resize(size);
                if (const auto* add = std::get_if<AdditiveModel>(&inst.model(i))) {
                    for (ChoreSet mask = 1; mask < size; ++mask)
                        table[mask] = table[mask & (mask - 1)] + add->costs[lowest_chore(mask)];
                } else {
                    for (ChoreSet mask = 0; mask < size; ++mask) table[mask] = inst.cost(i, mask);
                }
            }
        }
    }

    // The returned reference is valid until this thread's next eval call.
    const CostValue& eval(std::size_t agent, ChoreSet bundle) const {
        if (!memo_.empty()) return memo_[agent][bundle];
        static thread_local CostValue scratch;
        scratch = inst_.cost(agent, bundle);
        return scratch;
    }

  private:
    const Instance& inst_;
    std::vector<std::vector<CostValue>> memo_;
};

struct RangeResult {
    bool best_set = false;
    CostValue best;
    std::uint64_t best_index = 0;
    std::vector<ChoreSet> best_bundles;
    bool efx_found = false;
    std::uint64_t efx_index = 0;
    std::vector<ChoreSet> efx_bundles;
    std::uint64_t explored = 0;
};

// Sweeps enumeration indices [lo, hi). Each index encodes a chore -> agent
// assignment in mixed radix with chore 0 as the most significant digit.
RangeResult sweep_range(const Instance& inst, const CostOracle& oracle, std::uint64_t lo,
                        std::uint64_t hi, bool stop_at_first_efx) {
    const std::size_t n = inst.agents();
    const std::size_t m = inst.chores();
    const CostValue one(1);

    std::vector<std::size_t> digit(m, 0);
    std::vector<ChoreSet> bundles(n, 0);
    {
        std::uint64_t rem = lo;
        for (std::size_t c = m; c-- > 0;) {
            digit[c] = static_cast<std::size_t>(rem % n);
            rem /= n;
            bundles[digit[c]] |= ChoreSet{1} << c;
        }
    }

    RangeResult out;
    for (std::uint64_t index = lo; index < hi; ++index) {
        ++out.explored;

        // worst pair ratio with early bail once it cannot matter
        CostValue worst;
        bool bailed = false;
        for (std::size_t i = 0; i < n && !bailed; ++i) {
            const ChoreSet own = bundles[i];
            if (own == 0) continue;
            CostValue removed;
            ChoreSet rest = own;
            while (rest) {
                const std::size_t e = lowest_chore(rest);
                rest &= rest - 1;
                const CostValue& v = oracle.eval(i, own & ~(ChoreSet{1} << e));
                if (removed < v) removed = v;
            }
            for (std::size_t j = 0; j < n; ++j) {
                if (i == j) continue;
                CostValue r = CostValue::ratio(removed, oracle.eval(i, bundles[j]));
                if (worst < r) worst = r;
                if (stop_at_first_efx && worst > one) {
                    bailed = true;
                    break;
                }
                if (out.best_set && worst >= out.best) {
                    bailed = true;
                    break;
                }
            }
        }

        if (!bailed) {
            if (!out.best_set || worst < out.best) {
                out.best_set = true;
                out.best = worst;
                out.best_index = index;
                out.best_bundles = bundles;
            }
            if (!out.efx_found && worst <= one) {
                out.efx_found = true;
                out.efx_index = index;
                out.efx_bundles = bundles;
                if (stop_at_first_efx) return out;
            }
        }

        if (index + 1 == hi) break;
        // mixed-radix increment, chore m-1 fastest
        for (std::size_t c = m; c-- > 0;) {
            bundles[digit[c]] &= ~(ChoreSet{1} << c);
            digit[c] = (digit[c] + 1) % n;
            bundles[digit[c]] |= ChoreSet{1} << c;
            if (digit[c] != 0) break;
        }
    }
    return out;
}

RangeResult sweep_parallel(const Instance& inst, const SolveOptions& opts,
                           bool stop_at_first_efx) {
    const std::uint64_t total = pow_clamped(inst.agents(), inst.chores(), opts.budget);
    if (total > opts.budget)
        throw ResourceError("enumeration needs n^m = " + std::to_string(inst.agents()) + "^" +
                            std::to_string(inst.chores()) + " > budget " +
                            std::to_string(opts.budget));

    const CostOracle oracle(inst);
    unsigned threads = opts.threads;
    if (threads == 0)
        threads = std::clamp(std::thread::hardware_concurrency(), 1u, 8u);
    if (total < 4096) threads = 1;

    std::vector<RangeResult> parts;
    if (threads <= 1) {
        parts.push_back(sweep_range(inst, oracle, 0, total, stop_at_first_efx));
    } else {
        std::vector<std::future<RangeResult>> futures;
        const std::uint64_t chunk = (total + threads - 1) / threads;
        for (unsigned t = 0; t < threads; ++t) {
            const std::uint64_t lo = std::min<std::uint64_t>(total, t * chunk);
            const std::uint64_t hi = std::min<std::uint64_t>(total, lo + chunk);
            if (lo >= hi) continue;
            futures.push_back(std::async(std::launch::async, [&, lo, hi] {
                return sweep_range(inst, oracle, lo, hi, stop_at_first_efx);
            }));
        }
        for (auto& f : futures) parts.push_back(f.get());
    }

    // deterministic merge: lexicographic min on (ratio, enumeration index)
    RangeResult merged;
    for (RangeResult& part : parts) {
        merged.explored += part.explored;
        if (part.best_set &&
            (!merged.best_set || part.best < merged.best ||
             (part.best == merged.best && part.best_index < merged.best_index))) {
            merged.best_set = true;
            merged.best = part.best;
            merged.best_index = part.best_index;
            merged.best_bundles = std::move(part.best_bundles);
        }
        if (part.efx_found && (!merged.efx_found || part.efx_index < merged.efx_index)) {
            merged.efx_found = true;
            merged.efx_index = part.efx_index;
            merged.efx_bundles = std::move(part.efx_bundles);
        }
    }
    return merged;
}

} // namespace

SolveResult best_efx_ratio(const Instance& inst, const SolveOptions& opts) {
    SolveResult result;
    if (inst.chores() == 0) {
        Allocation empty(inst.agents());
        result.efx_allocation = empty;
        result.best_ratio = CostValue();
        result.argmin_allocation = empty;
        result.explored = 1;
        return result;
    }
    RangeResult sweep = sweep_parallel(inst, opts, /*stop_at_first_efx=*/false);
    result.best_ratio = sweep.best;
    result.argmin_allocation.bundles = std::move(sweep.best_bundles);
    result.explored = sweep.explored;
    if (sweep.efx_found) {
        Allocation a;
        a.bundles = std::move(sweep.efx_bundles);
        result.efx_allocation = std::move(a);
    }
    return result;
}

std::optional<Allocation> find_efx(const Instance& inst, const SolveOptions& opts) {
    if (inst.chores() == 0) return Allocation(inst.agents());
    RangeResult sweep = sweep_parallel(inst, opts, /*stop_at_first_efx=*/true);
    if (!sweep.efx_found) return std::nullopt;
    Allocation a;
    a.bundles = std::move(sweep.efx_bundles);
    return a;
}

SolveResult naive_enumerate(const Instance& inst, std::uint64_t budget) {
    const std::size_t n = inst.agents();
    const std::size_t m = inst.chores();
    if (pow_clamped(n, m, budget) > budget)
        throw ResourceError("naive enumeration needs n^m > budget " + std::to_string(budget));

    SolveResult result;
    Allocation current(n);
    bool best_set = false;
    const CostValue one(1);

    auto rec = [&](auto&& self, std::size_t chore) -> void {
        if (chore == m) {
            ++result.explored;
            CostValue worst;
            for (std::size_t i = 0; i < n; ++i) {
                if (current.bundles[i] == 0) continue;
                CostValue removed;
                for (std::size_t e : chores_of(current.bundles[i])) {
                    CostValue v = inst.cost(i, current.bundles[i] & ~(ChoreSet{1} << e));
                    if (removed < v) removed = v;
                }
                for (std::size_t j = 0; j < n; ++j) {
                    if (i == j) continue;
                    CostValue r = CostValue::ratio(removed, inst.cost(i, current.bundles[j]));
                    if (worst < r) worst = r;
                }
            }
            if (!best_set || worst < result.best_ratio) {
                best_set = true;
                result.best_ratio = worst;
                result.argmin_allocation = current;
            }
            if (!result.efx_allocation && worst <= one) result.efx_allocation = current;
            return;
        }
        for (std::size_t agent = 0; agent < n; ++agent) {
            current.bundles[agent] |= ChoreSet{1} << chore;
            self(self, chore + 1);
            current.bundles[agent] &= ~(ChoreSet{1} << chore);
        }
    };
    if (m == 0) {
        result.explored = 1;
        result.best_ratio = CostValue();
        result.argmin_allocation = current;
        result.efx_allocation = current;
    } else {
        rec(rec, 0);
    }
    return result;
}

bool cross_check_enumerators(const Instance& inst, std::uint64_t budget) {
    SolveOptions opts;
    opts.budget = budget;
    SolveResult fast = best_efx_ratio(inst, opts);
    SolveResult slow = naive_enumerate(inst, budget);
    if (fast.best_ratio != slow.best_ratio) return false;
    if (fast.efx_allocation.has_value() != slow.efx_allocation.has_value()) return false;
    if (fast.efx_allocation && !(*fast.efx_allocation == *slow.efx_allocation)) return false;
    if (!(fast.argmin_allocation == slow.argmin_allocation)) return false;
    return fast.explored == slow.explored;
}

} // namespace chorefair
