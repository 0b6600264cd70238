#include "chorefair/fairness.hpp"

#include <string>

namespace chorefair {
namespace {

CostValue max_removal_cost(const Instance& inst, std::size_t agent, ChoreSet bundle) {
    CostValue best; // zero; also the answer for empty bundles
    ChoreSet rest = bundle;
    while (rest) {
        const std::size_t e = lowest_chore(rest);
        rest &= rest - 1;
        CostValue v = inst.cost(agent, bundle & ~(ChoreSet{1} << e));
        if (best < v) best = v;
    }
    return best;
}

std::uint64_t pow_clamped(std::uint64_t base, std::size_t exp, std::uint64_t clamp) {
    std::uint64_t r = 1;
    for (std::size_t i = 0; i < exp; ++i) {
        if (r > clamp / (base == 0 ? 1 : base)) return clamp + 1;
        r *= base;
    }
    return r;
}

} // namespace

CostValue envy_ratio(const Instance& inst, const Allocation& alloc, std::size_t i, std::size_t j) {
    require_valid_partial(inst, alloc, "envy_ratio");
    if (i == j) throw UsageError("envy_ratio needs two distinct agents");
    if (i >= inst.agents() || j >= inst.agents()) throw UsageError("envy_ratio: agent out of range");
    const CostValue removed = max_removal_cost(inst, i, alloc.bundles[i]);
    return CostValue::ratio(removed, inst.cost(i, alloc.bundles[j]));
}

CostValue worst_ratio(const Instance& inst, const Allocation& alloc) {
    require_valid_partial(inst, alloc, "worst_ratio");
    CostValue worst;
    for (std::size_t i = 0; i < inst.agents(); ++i) {
        if (alloc.bundles[i] == 0) continue;
        const CostValue removed = max_removal_cost(inst, i, alloc.bundles[i]);
        for (std::size_t j = 0; j < inst.agents(); ++j) {
            if (i == j) continue;
            CostValue r = CostValue::ratio(removed, inst.cost(i, alloc.bundles[j]));
            if (worst < r) worst = r;
        }
    }
    return worst;
}

bool is_alpha_efx(const Instance& inst, const Allocation& alloc, const CostValue& alpha) {
    return worst_ratio(inst, alloc) <= alpha;
}

bool is_ef1(const Instance& inst, const Allocation& alloc) {
    require_valid_partial(inst, alloc, "is_ef1");
    for (std::size_t i = 0; i < inst.agents(); ++i) {
        const ChoreSet own = alloc.bundles[i];
        const CostValue own_cost = inst.cost(i, own);
        // cheapest single-removal cost, reused across targets
        CostValue min_removed;
        bool first = true;
        ChoreSet rest = own;
        while (rest) {
            const std::size_t e = lowest_chore(rest);
            rest &= rest - 1;
            CostValue v = inst.cost(i, own & ~(ChoreSet{1} << e));
            if (first || v < min_removed) min_removed = v;
            first = false;
        }
        for (std::size_t j = 0; j < inst.agents(); ++j) {
            if (i == j) continue;
            const CostValue other = inst.cost(i, alloc.bundles[j]);
            if (own_cost <= other) continue; // no envy
            if (own == 0 || min_removed > other) return false;
        }
    }
    return true;
}

bool is_envy_free(const Instance& inst, const Allocation& alloc) {
    require_valid_partial(inst, alloc, "is_envy_free");
    for (std::size_t i = 0; i < inst.agents(); ++i) {
        const CostValue own = inst.cost(i, alloc.bundles[i]);
        for (std::size_t j = 0; j < inst.agents(); ++j)
            if (i != j && own > inst.cost(i, alloc.bundles[j])) return false;
    }
    return true;
}

CostValue mms_value(const Instance& inst, std::size_t agent, std::uint64_t budget) {
    if (agent >= inst.agents()) throw UsageError("mms_value: agent out of range");
    const std::size_t n = inst.agents();
    const std::size_t m = inst.chores();
    if (pow_clamped(n, m, budget) > budget)
        throw ResourceError("mms enumeration needs n^m = " + std::to_string(n) + "^" +
                            std::to_string(m) + " > budget " + std::to_string(budget));
    if (m == 0) return CostValue();

    // Canonical set partitions into at most n blocks (restricted growth
    // strings): chore 0 is pinned to block 0, block t+1 may open only after
    // block t. Bundles are interchangeable in the minimax, so this prunes
    // nothing but relabelings.
    std::vector<ChoreSet> blocks(n, 0);
    CostValue best = inst.cost(agent, full_set(m));

    auto rec = [&](auto&& self, std::size_t chore, std::size_t used) -> void {
        if (chore == m) {
            CostValue worst;
            for (std::size_t b = 0; b < used; ++b) {
                CostValue v = inst.cost(agent, blocks[b]);
                if (worst < v) worst = v;
            }
            if (worst < best) best = worst;
            return;
        }
        const std::size_t limit = std::min(used + 1, n);
        for (std::size_t b = 0; b < limit; ++b) {
            blocks[b] |= ChoreSet{1} << chore;
            self(self, chore + 1, std::max(used, b + 1));
            blocks[b] &= ~(ChoreSet{1} << chore);
        }
    };
    rec(rec, 0, 0);
    return best;
}

bool is_mms(const Instance& inst, const Allocation& alloc, std::uint64_t budget) {
    require_valid_partial(inst, alloc, "is_mms");
    for (std::size_t i = 0; i < inst.agents(); ++i)
        if (inst.cost(i, alloc.bundles[i]) > mms_value(inst, i, budget)) return false;
    return true;
}

FairnessReport fairness_report(const Instance& inst, const Allocation& alloc,
                               const ReportOptions& opts) {
    require_valid_partial(inst, alloc, "fairness_report");
    const std::size_t n = inst.agents();
    FairnessReport rep;
    rep.n = n;
    rep.envy.assign(n * n, CostValue());
    for (std::size_t i = 0; i < n; ++i) {
        const CostValue removed = max_removal_cost(inst, i, alloc.bundles[i]);
        for (std::size_t j = 0; j < n; ++j) {
            if (i == j) continue;
            CostValue r = CostValue::ratio(removed, inst.cost(i, alloc.bundles[j]));
            if (rep.worst < r) rep.worst = r;
            rep.envy[i * n + j] = std::move(r);
        }
    }
    rep.efx = rep.worst <= CostValue(1);
    rep.ef1 = is_ef1(inst, alloc);
    if (opts.with_mms) {
        std::vector<MmsVerdict> verdicts;
        verdicts.reserve(n);
        for (std::size_t i = 0; i < n; ++i) {
            CostValue share = mms_value(inst, i, opts.budget);
            CostValue bundle = inst.cost(i, alloc.bundles[i]);
            bool ok = bundle <= share;
            verdicts.push_back({std::move(share), std::move(bundle), ok});
        }
        rep.mms = std::move(verdicts);
    }
    return rep;
}

} // namespace chorefair
