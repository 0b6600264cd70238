#pragma once

#include <cstdint>
#include <functional>
#include <optional>
#include <vector>

#include "chorefair/fairness.hpp"
#include "chorefair/instance.hpp"

namespace chorefair {

// ---------------------------------------------------------------------------
// Envy graph and top trading envy cycle elimination
// ---------------------------------------------------------------------------

/// Directed envy structure of an allocation. edge[i] points to the owner of
/// agent i's strictly cheapest bundle (lowest owner index on ties); absent
/// when i's own bundle is already among her cheapest, which makes i a sink.
struct EnvyGraph {
    std::vector<std::optional<std::size_t>> edge;
    std::vector<std::size_t> sinks; // ascending
};

EnvyGraph envy_graph(const Instance& inst, const Allocation& alloc);

struct TteceOptions {
    /// Chooses the receiving agent among the current sinks (ascending
    /// order). Default: the first, i.e. lexicographic.
    std::function<std::size_t(const std::vector<std::size_t>&)> pick_sink;

    /// Invoked with the running allocation after every cycle rotation and
    /// every placement. Test hook.
    std::function<void(const Allocation&)> observer;

    /// Invoked before each placement with the running allocation and the
    /// not-yet-allocated chores (the chore about to be placed included).
    std::function<void(const Allocation&, ChoreSet)> before_placement;
};

struct TteceStats {
    std::uint64_t placements = 0;
    std::uint64_t rotations = 0;
    std::uint64_t max_rotations_between_placements = 0;
};

/// Runs envy cycle elimination from `start`, handing each chore of
/// `item_order` (which must list exactly the unallocated chores) to a sink,
/// rotating bundles along an envy cycle whenever no sink exists. Always
/// terminates; a hard internal bound guards against bugs.
Allocation ttece(const Instance& inst, const Allocation& start,
                 const std::vector<std::size_t>& item_order, const TteceOptions& opts = {},
                 TteceStats* stats = nullptr);

// ---------------------------------------------------------------------------
// Ratio matrix and the seeded approximation framework
// ---------------------------------------------------------------------------

/// r_ij = c_i(Y_j) / max cost (for i) of an unallocated chore, under the
/// CostValue ratio conventions. Defined only while unallocated chores
/// remain.
struct RatioMatrix {
    std::size_t n = 0;
    std::vector<CostValue> r; // row-major
    const CostValue& at(std::size_t i, std::size_t j) const { return r[i * n + j]; }
};

RatioMatrix ratio_matrix(const Instance& inst, const Allocation& partial);

/// A partial allocation together with the guarantees it claims: the partial
/// is alpha-EFX and every unallocated chore e satisfies
/// c_i(e) <= beta * c_i(Y_j) for all i and all j != i.
struct SeededPartial {
    Allocation partial;
    CostValue alpha;
    CostValue beta;
};

/// Seeds one chore of the shared top-n set to each agent. Requires all
/// agents to agree on the top-n set; alpha = beta = 1.
SeededPartial seed_top_n_agreement(const Instance& inst);

/// Shared top-(n-1) set: agents 1..n-1 take its chores, agent n takes the
/// union of the other agents' rank-n chores; alpha = max(1, n-2), beta = 1.
SeededPartial seed_top_n_minus1_agreement(const Instance& inst);

/// Pairwise-disjoint top-(n-1) sets: every agent hands her currently most
/// costly chore to each other agent in turn; alpha = max(1, n-2), beta = 1.
SeededPartial seed_top_n_minus1_disagreement(const Instance& inst);

struct FrameworkResult {
    Allocation allocation;
    CostValue certified_factor;      // max(alpha, beta + 1), re-verified
    std::uint64_t invariant_checks = 0;
};

/// Completes a seeded partial with TTECE. The seeded claims are re-verified
/// up front, the ratio property is re-checked before every placement, and
/// the output is verified at the certified factor. Additive models only.
FrameworkResult framework_run(const Instance& inst, const SeededPartial& seeded,
                              std::vector<std::size_t> item_order = {},
                              const TteceOptions& opts = {});

// ---------------------------------------------------------------------------
// Top sets
// ---------------------------------------------------------------------------

struct TopSets {
    std::size_t k = 0;
    std::vector<ChoreSet> top;          // L_i^k per agent
    std::vector<ChoreSet> two_smallest; // Z_i per agent; empty masks when m < 2
};

TopSets top_sets(const Instance& inst, std::size_t k);
bool agree(const TopSets& sets);
bool pairwise_disjoint(const TopSets& sets);

// ---------------------------------------------------------------------------
// Constructive algorithms with certified factors
// ---------------------------------------------------------------------------

/// Exact EFX allocation for m <= n+2 chores under any monotone models,
/// built case by case and re-verified before returning.
Allocation few_chores_efx(const Instance& inst);

/// 2-EFX allocation for three additive agents. Seeds per the agreement
/// structure of the top-2 sets, completes with TTECE driven by the third
/// agent's costs, and re-verifies the factor. The seeding step is searched
/// over its symmetric variants until one verifies.
Allocation three_agent_2efx(const Instance& inst);

} // namespace chorefair
