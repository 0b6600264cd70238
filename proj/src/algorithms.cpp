#include "chorefair/algorithms.hpp"

#include <algorithm>
#include <sstream>
#include <string>

namespace chorefair {
namespace {

std::vector<CostValue> bundle_costs_for(const Instance& inst, std::size_t viewer,
                                        const Allocation& alloc) {
    std::vector<CostValue> costs(alloc.agents());
    for (std::size_t j = 0; j < alloc.agents(); ++j) costs[j] = inst.cost(viewer, alloc.bundles[j]);
    return costs;
}

} // namespace

EnvyGraph envy_graph(const Instance& inst, const Allocation& alloc) {
    require_valid_partial(inst, alloc, "envy_graph");
    const std::size_t n = inst.agents();
    EnvyGraph g;
    g.edge.assign(n, std::nullopt);
    for (std::size_t i = 0; i < n; ++i) {
        const std::vector<CostValue> costs = bundle_costs_for(inst, i, alloc);
        std::size_t best = i; // prefer the own bundle, making i a sink
        for (std::size_t j = 0; j < n; ++j)
            if (costs[j] < costs[best]) best = j;
        if (best == i)
            g.sinks.push_back(i);
        else {
            // lowest index among the strict minimizers
            for (std::size_t j = 0; j < n; ++j)
                if (costs[j] == costs[best]) {
                    g.edge[i] = j;
                    break;
                }
        }
    }
    return g;
}

namespace {

// One rotation along a cycle of the (sink-free) envy graph: every agent on
// the cycle receives the bundle she points to.
void rotate_cycle(const EnvyGraph& g, Allocation& alloc) {
    std::size_t start = 0;
    while (g.edge[start] == std::nullopt) ++start;
    // walk until a node repeats; that node is on a cycle
    std::vector<bool> seen(alloc.agents(), false);
    std::size_t cur = start;
    while (!seen[cur]) {
        seen[cur] = true;
        cur = *g.edge[cur];
    }
    std::vector<ChoreSet> old = alloc.bundles;
    std::size_t node = cur;
    do {
        alloc.bundles[node] = old[*g.edge[node]];
        node = *g.edge[node];
    } while (node != cur);
}

} // namespace

Allocation ttece(const Instance& inst, const Allocation& start,
                 const std::vector<std::size_t>& item_order, const TteceOptions& opts,
                 TteceStats* stats) {
    require_valid_partial(inst, start, "ttece");
    ChoreSet remaining = full_set(inst.chores()) & ~start.assigned();
    {
        ChoreSet order_set = 0;
        for (std::size_t c : item_order) {
            if (c >= inst.chores()) throw UsageError("ttece: item order references chore out of range");
            if (contains(order_set, c)) throw UsageError("ttece: item order repeats a chore");
            order_set |= ChoreSet{1} << c;
        }
        if (order_set != remaining)
            throw UsageError("ttece: item order must list exactly the unallocated chores");
    }

    Allocation alloc = start;
    TteceStats local;
    // One rotation always creates sinks, so the true bound is one rotation
    // per placement; keep slack so a bug trips the guard instead of looping.
    const std::uint64_t guard = 8 * (item_order.size() + 1) * (inst.agents() + 1);
    std::uint64_t steps = 0;

    for (std::size_t chore : item_order) {
        if (opts.before_placement) opts.before_placement(alloc, remaining);
        EnvyGraph g = envy_graph(inst, alloc);
        std::uint64_t rotations_here = 0;
        while (g.sinks.empty()) {
            if (++steps > guard) throw InternalFault("ttece exceeded its termination bound");
            rotate_cycle(g, alloc);
            ++local.rotations;
            ++rotations_here;
            if (opts.observer) opts.observer(alloc);
            g = envy_graph(inst, alloc);
        }
        local.max_rotations_between_placements =
            std::max(local.max_rotations_between_placements, rotations_here);
        const std::size_t s = opts.pick_sink ? opts.pick_sink(g.sinks) : g.sinks.front();
        if (std::find(g.sinks.begin(), g.sinks.end(), s) == g.sinks.end())
            throw UsageError("ttece: sink rule chose a non-sink agent");
        alloc.bundles[s] |= ChoreSet{1} << chore;
        remaining &= ~(ChoreSet{1} << chore);
        ++local.placements;
        if (++steps > guard) throw InternalFault("ttece exceeded its termination bound");
        if (opts.observer) opts.observer(alloc);
    }
    if (stats) *stats = local;
    return alloc;
}

RatioMatrix ratio_matrix(const Instance& inst, const Allocation& partial) {
    require_valid_partial(inst, partial, "ratio_matrix");
    const ChoreSet unallocated = full_set(inst.chores()) & ~partial.assigned();
    if (unallocated == 0) throw UsageError("ratio_matrix needs at least one unallocated chore");
    const std::size_t n = inst.agents();
    RatioMatrix mat;
    mat.n = n;
    mat.r.assign(n * n, CostValue());
    for (std::size_t i = 0; i < n; ++i) {
        CostValue top; // most costly unallocated chore for agent i
        for (std::size_t e : chores_of(unallocated)) {
            CostValue v = inst.singleton_cost(i, e);
            if (top < v) top = v;
        }
        for (std::size_t j = 0; j < n; ++j)
            mat.r[i * n + j] = CostValue::ratio(inst.cost(i, partial.bundles[j]), top);
    }
    return mat;
}

namespace {

// The ratio property of a seeded partial: every unallocated chore satisfies
// c_i(e) <= beta * c_i(Y_j) for all i and all j != i. Returns a description
// of the first violated triple, or nullopt.
std::optional<std::string> ratio_property_violation(const Instance& inst, const Allocation& partial,
                                                    const CostValue& beta) {
    const ChoreSet unallocated = full_set(inst.chores()) & ~partial.assigned();
    for (std::size_t i = 0; i < inst.agents(); ++i) {
        CostValue top;
        for (std::size_t e : chores_of(unallocated)) {
            CostValue v = inst.singleton_cost(i, e);
            if (top < v) top = v;
        }
        for (std::size_t j = 0; j < inst.agents(); ++j) {
            if (i == j) continue;
            if (top > beta * inst.cost(i, partial.bundles[j])) {
                std::ostringstream os;
                os << "ratio property violated for agents (" << i << "," << j
                   << "): max unallocated cost " << top.str() << " > beta * " <<
                    inst.cost(i, partial.bundles[j]).str();
                return os.str();
            }
        }
    }
    return std::nullopt;
}

} // namespace

SeededPartial seed_top_n_agreement(const Instance& inst) {
    const std::size_t n = inst.agents();
    const std::size_t m = inst.chores();
    if (m < n) throw ConditionNotMet("top-n agreement needs at least n chores");
    TopSets sets = top_sets(inst, n);
    if (!agree(sets)) throw ConditionNotMet("agents do not share the top-n set");

    SeededPartial out;
    out.partial = Allocation(n);
    const std::vector<std::size_t> shared = chores_of(sets.top[0]); // ascending
    for (std::size_t i = 0; i < n; ++i) out.partial.bundles[i] = ChoreSet{1} << shared[i];
    out.alpha = CostValue(1);
    out.beta = CostValue(1);

    if (!is_alpha_efx(inst, out.partial, out.alpha))
        throw InternalFault("top-n agreement partial is not EFX");
    if (auto issue = ratio_property_violation(inst, out.partial, out.beta))
        throw InternalFault("top-n agreement: " + *issue);
    return out;
}

SeededPartial seed_top_n_minus1_agreement(const Instance& inst) {
    const std::size_t n = inst.agents();
    const std::size_t m = inst.chores();
    if (n < 2) throw ConditionNotMet("top-(n-1) agreement needs at least two agents");
    if (m < n) throw ConditionNotMet("top-(n-1) agreement needs at least n chores");
    TopSets sets = top_sets(inst, n - 1);
    if (!agree(sets)) throw ConditionNotMet("agents do not share the top-(n-1) set");

    SeededPartial out;
    out.partial = Allocation(n);
    const std::vector<std::size_t> shared = chores_of(sets.top[0]);
    for (std::size_t i = 0; i + 1 < n; ++i) out.partial.bundles[i] = ChoreSet{1} << shared[i];
    for (std::size_t j = 0; j + 1 < n; ++j)
        out.partial.bundles[n - 1] |= ChoreSet{1} << sigma(inst, j, n, full_set(m));
    out.alpha = CostValue(std::max<std::int64_t>(1, static_cast<std::int64_t>(n) - 2));
    out.beta = CostValue(1);

    if (!is_alpha_efx(inst, out.partial, out.alpha))
        throw InternalFault("top-(n-1) agreement partial is not alpha-EFX");
    if (auto issue = ratio_property_violation(inst, out.partial, out.beta))
        throw InternalFault("top-(n-1) agreement: " + *issue);
    return out;
}

SeededPartial seed_top_n_minus1_disagreement(const Instance& inst) {
    const std::size_t n = inst.agents();
    const std::size_t m = inst.chores();
    if (n < 2) throw ConditionNotMet("top-(n-1) disagreement needs at least two agents");
    if (m < n * (n - 1))
        throw ConditionNotMet("top-(n-1) disagreement needs at least n(n-1) chores");
    TopSets sets = top_sets(inst, n - 1);
    if (!pairwise_disjoint(sets))
        throw ConditionNotMet("top-(n-1) sets are not pairwise disjoint");

    SeededPartial out;
    out.partial = Allocation(n);
    ChoreSet pool = full_set(m);
    for (std::size_t i = 0; i < n; ++i) {
        for (std::size_t j = 0; j < n; ++j) {
            if (j == i) continue;
            const std::size_t star = sigma(inst, i, 1, pool);
            out.partial.bundles[j] |= ChoreSet{1} << star;
            pool &= ~(ChoreSet{1} << star);
        }
    }
    out.alpha = CostValue(std::max<std::int64_t>(1, static_cast<std::int64_t>(n) - 2));
    out.beta = CostValue(1);

    if (!is_alpha_efx(inst, out.partial, out.alpha))
        throw InternalFault("top-(n-1) disagreement partial is not alpha-EFX");
    if (auto issue = ratio_property_violation(inst, out.partial, out.beta))
        throw InternalFault("top-(n-1) disagreement: " + *issue);
    return out;
}

FrameworkResult framework_run(const Instance& inst, const SeededPartial& seeded,
                              std::vector<std::size_t> item_order, const TteceOptions& opts) {
    if (!inst.all_additive())
        throw UsageError("framework_run requires additive cost models");
    require_valid_partial(inst, seeded.partial, "framework_run");
    for (std::size_t i = 0; i < inst.agents(); ++i)
        if (seeded.partial.bundles[i] == 0)
            throw UsageError("framework_run: seeded bundle of agent " + std::to_string(i) +
                             " is empty");
    if (!is_alpha_efx(inst, seeded.partial, seeded.alpha))
        throw UsageError("framework_run: seeded partial fails its claimed alpha");
    if (auto issue = ratio_property_violation(inst, seeded.partial, seeded.beta))
        throw UsageError("framework_run: " + *issue);

    const ChoreSet remaining = full_set(inst.chores()) & ~seeded.partial.assigned();
    if (item_order.empty()) item_order = chores_of(remaining);

    FrameworkResult result;
    result.certified_factor = seeded.alpha;
    const CostValue beta_plus_one = seeded.beta + CostValue(1);
    if (result.certified_factor < beta_plus_one) result.certified_factor = beta_plus_one;

    std::uint64_t checks = 0;
    TteceOptions wrapped = opts;
    wrapped.before_placement = [&](const Allocation& running, ChoreSet unallocated) {
        if (auto issue = ratio_property_violation(inst, running, seeded.beta))
            throw InternalFault("framework loop invariant failed: " + *issue);
        ++checks;
        if (opts.before_placement) opts.before_placement(running, unallocated);
    };

    result.allocation = ttece(inst, seeded.partial, item_order, wrapped);
    result.invariant_checks = checks;
    if (!is_alpha_efx(inst, result.allocation, result.certified_factor))
        throw InternalFault("framework output fails its certified factor");
    return result;
}

TopSets top_sets(const Instance& inst, std::size_t k) {
    if (k < 1 || k > inst.chores()) throw UsageError("top_sets: k out of range");
    TopSets sets;
    sets.k = k;
    sets.top.resize(inst.agents());
    sets.two_smallest.assign(inst.agents(), 0);
    for (std::size_t i = 0; i < inst.agents(); ++i) {
        const std::vector<std::size_t> order = sigma_order(inst, i, full_set(inst.chores()));
        ChoreSet top = 0;
        for (std::size_t r = 0; r < k; ++r) top |= ChoreSet{1} << order[r];
        sets.top[i] = top;
        if (inst.chores() >= 2) {
            sets.two_smallest[i] = (ChoreSet{1} << order[order.size() - 1]) |
                                   (ChoreSet{1} << order[order.size() - 2]);
        }
    }
    return sets;
}

bool agree(const TopSets& sets) {
    return std::all_of(sets.top.begin(), sets.top.end(),
                       [&](ChoreSet s) { return s == sets.top.front(); });
}

bool pairwise_disjoint(const TopSets& sets) {
    ChoreSet seen = 0;
    for (ChoreSet s : sets.top) {
        if (seen & s) return false;
        seen |= s;
    }
    return true;
}

// ---------------------------------------------------------------------------
// Exact EFX for m <= n+2
// ---------------------------------------------------------------------------

namespace {

// Distributes the chores of `pool` one each to the agents of `agents`,
// ascending on both sides.
void singletons(Allocation& alloc, ChoreSet pool, const std::vector<std::size_t>& agents) {
    std::size_t idx = 0;
    for (std::size_t c : chores_of(pool)) alloc.bundles[agents[idx++]] |= ChoreSet{1} << c;
}

std::vector<std::size_t> other_agents(std::size_t n, std::size_t skip_a, std::size_t skip_b) {
    std::vector<std::size_t> out;
    for (std::size_t a = 0; a < n; ++a)
        if (a != skip_a && a != skip_b) out.push_back(a);
    return out;
}

Allocation few_chores_build(const Instance& inst) {
    const std::size_t n = inst.agents();
    const std::size_t m = inst.chores();
    Allocation alloc(n);
    if (n == 1) {
        alloc.bundles[0] = full_set(m);
        return alloc;
    }
    if (m <= n) {
        for (std::size_t c = 0; c < m; ++c) alloc.bundles[c] = ChoreSet{1} << c;
        return alloc;
    }

    // per-agent rankings; two smallest = the last two ranks
    std::vector<std::vector<std::size_t>> order(n);
    for (std::size_t i = 0; i < n; ++i) order[i] = sigma_order(inst, i, full_set(m));
    const ChoreSet z1 = (ChoreSet{1} << order[0][m - 1]) | (ChoreSet{1} << order[0][m - 2]);

    if (m == n + 1) {
        alloc.bundles[0] = z1;
        singletons(alloc, full_set(m) & ~z1, other_agents(n, 0, 0));
        return alloc;
    }

    // m == n + 2: anchor agent 0 and her two smallest chores z1
    for (std::size_t j = 1; j < n; ++j) {
        for (std::size_t rank = 0; rank + 3 < m; ++rank) { // ranks 1..n-1
            if (!contains(z1, order[j][rank])) continue;
            // agent j ranks a z1 chore high: she can take her two smallest
            // remaining chores without strong envy toward the anchor
            alloc.bundles[0] = z1;
            const ChoreSet rest = full_set(m) & ~z1;
            const std::vector<std::size_t> jo = sigma_order(inst, j, rest);
            alloc.bundles[j] =
                (ChoreSet{1} << jo[jo.size() - 1]) | (ChoreSet{1} << jo[jo.size() - 2]);
            singletons(alloc, rest & ~alloc.bundles[j], other_agents(n, 0, j));
            return alloc;
        }
    }

    // every agent ranks both z1 chores among her three smallest
    const ChoreSet rest = full_set(m) & ~z1; // n chores
    std::vector<std::size_t> smallest(n);
    for (std::size_t i = 0; i < n; ++i) smallest[i] = sigma_order(inst, i, rest).back();

    for (std::size_t j = 1; j < n; ++j) {
        if (smallest[j] == smallest[0]) continue;
        // disagreement on the smallest remaining chore: split z1 between
        // agent 0 and agent j, each alongside her own smallest
        const std::vector<std::size_t> z1_chores = chores_of(z1);
        alloc.bundles[0] = (ChoreSet{1} << smallest[0]) | (ChoreSet{1} << z1_chores[0]);
        alloc.bundles[j] = (ChoreSet{1} << smallest[j]) | (ChoreSet{1} << z1_chores[1]);
        singletons(alloc, rest & ~(ChoreSet{1} << smallest[0]) & ~(ChoreSet{1} << smallest[j]),
                   other_agents(n, 0, j));
        return alloc;
    }

    // full agreement: the three smallest chores are common
    const ChoreSet m_minus = z1 | (ChoreSet{1} << smallest[0]);
    const ChoreSet singles_pool = full_set(m) & ~m_minus; // n-1 chores
    CostValue cheapest_single = CostValue::infinity();
    for (std::size_t c : chores_of(singles_pool)) {
        CostValue v = inst.singleton_cost(0, c);
        if (v < cheapest_single) cheapest_single = v;
    }
    CostValue worst_pair;
    ChoreSet worst_pair_mask = 0;
    for (std::size_t e : chores_of(m_minus)) {
        const ChoreSet pair = m_minus & ~(ChoreSet{1} << e);
        CostValue v = inst.cost(0, pair);
        if (worst_pair_mask == 0 || worst_pair < v) {
            worst_pair = v;
            worst_pair_mask = pair;
        }
    }
    if (worst_pair <= cheapest_single) {
        // the anchor can absorb all three smallest chores
        alloc.bundles[0] = m_minus;
        singletons(alloc, singles_pool, other_agents(n, 0, 0));
        return alloc;
    }
    // otherwise hand the offending pair to agent 1 and pad the anchor with
    // her rank-(n-1) chore plus the leftover small chore
    const std::size_t anchor_extra = order[0][n - 2]; // rank n-1
    alloc.bundles[0] = (ChoreSet{1} << anchor_extra) | (m_minus & ~worst_pair_mask);
    alloc.bundles[1] = worst_pair_mask;
    singletons(alloc, singles_pool & ~(ChoreSet{1} << anchor_extra), other_agents(n, 0, 1));
    return alloc;
}

} // namespace

Allocation few_chores_efx(const Instance& inst) {
    if (inst.chores() > inst.agents() + 2)
        throw UsageError("few_chores_efx requires m <= n + 2");
    Allocation alloc = few_chores_build(inst);
    if (!alloc.complete(inst.chores())) throw InternalFault("few_chores_efx: incomplete output");
    if (!is_efx(inst, alloc)) throw InternalFault("few_chores_efx: output failed EFX verification");
    return alloc;
}

// ---------------------------------------------------------------------------
// Three additive agents, factor 2
// ---------------------------------------------------------------------------

namespace {

std::vector<std::size_t> descending_for(const Instance& inst, std::size_t agent, ChoreSet pool) {
    return sigma_order(inst, agent, pool);
}

// Seeds the pair branch: agents p and q agree on at least one top-2 chore,
// r is the outsider whose costs drive the completion order.
std::optional<Allocation> three_agent_branch(const Instance& inst, std::size_t p, std::size_t q,
                                             std::size_t r, bool swap_pair) {
    const std::size_t m = inst.chores();
    const ChoreSet all = full_set(m);
    TopSets sets = top_sets(inst, 2);
    if ((sets.top[p] & sets.top[q]) == 0) return std::nullopt;
    if (swap_pair) std::swap(p, q);

    const std::size_t p_top = sigma(inst, p, 1, all);
    const std::size_t q_top = sigma(inst, q, 1, all);

    Allocation seed(3);
    if (!contains(sets.top[q], p_top) && !contains(sets.top[p], q_top)) {
        if (swap_pair) return std::nullopt; // symmetric; one direction suffices
        // agreement only on the common second chore: give it to the
        // outsider, then swap the pair's top chores
        const std::size_t common = sigma(inst, p, 2, all);
        seed.bundles[r] = ChoreSet{1} << common;
        seed.bundles[p] = ChoreSet{1} << q_top;
        seed.bundles[q] = ChoreSet{1} << p_top;
    } else {
        if (!contains(sets.top[q], p_top)) return std::nullopt; // wrong direction
        seed.bundles[r] = ChoreSet{1} << p_top;
        const std::size_t for_p = sigma(inst, q, 1, all & ~seed.assigned());
        seed.bundles[p] = ChoreSet{1} << for_p;
        const std::size_t for_q = sigma(inst, p, 1, all & ~seed.assigned());
        seed.bundles[q] = ChoreSet{1} << for_q;
    }

    // complete with the outsider's most costly chores first, sinks
    // lexicographic in the relabeled order (r last)
    std::vector<std::size_t> item_order = descending_for(inst, r, all & ~seed.assigned());
    TteceOptions opts;
    const std::size_t prio[3] = {p, q, r};
    opts.pick_sink = [prio](const std::vector<std::size_t>& sinks) {
        for (std::size_t cand : prio)
            if (std::find(sinks.begin(), sinks.end(), cand) != sinks.end()) return cand;
        return sinks.front();
    };
    return ttece(inst, seed, item_order, opts);
}

} // namespace

Allocation three_agent_2efx(const Instance& inst) {
    if (inst.agents() != 3) throw UsageError("three_agent_2efx requires exactly three agents");
    if (!inst.all_additive()) throw UsageError("three_agent_2efx requires additive cost models");
    const std::size_t m = inst.chores();
    const CostValue two(2);

    if (m <= 3) {
        Allocation alloc(3);
        for (std::size_t c = 0; c < m; ++c) alloc.bundles[c] = ChoreSet{1} << c;
        return alloc; // singletons are exact EFX
    }

    TopSets sets = top_sets(inst, 2);
    if (pairwise_disjoint(sets)) {
        FrameworkResult res = framework_run(inst, seed_top_n_minus1_disagreement(inst));
        if (!(res.certified_factor <= two) || !is_alpha_efx(inst, res.allocation, two))
            throw InternalFault("three_agent_2efx: disagreement branch exceeded factor 2");
        return res.allocation;
    }

    // Some pair agrees on a top-2 chore. The choice of pair and of the
    // direction inside the pair are symmetric degrees of freedom; search
    // them in a fixed order and return the first verified completion.
    static constexpr std::size_t kPairs[3][3] = {{0, 1, 2}, {0, 2, 1}, {1, 2, 0}};
    for (const auto& pair : kPairs) {
        for (bool swap_pair : {false, true}) {
            std::optional<Allocation> out =
                three_agent_branch(inst, pair[0], pair[1], pair[2], swap_pair);
            if (out && is_alpha_efx(inst, *out, two)) return *out;
        }
    }
    throw InternalFault("three_agent_2efx: no seeding branch verified at factor 2");
}

} // namespace chorefair
