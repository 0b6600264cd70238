#pragma once

#include <cstdint>
#include <span>
#include <vector>

#include "chorefair/instance.hpp"

namespace chorefair {

/// Substitute a finite dominating constant for INF in the reductions:
/// big = 1 + 3 * (sum of all finite singleton costs).
enum class BigMode { infinite, finite };

/// Three agents, six chores with singleton costs (k,1,1,0,0,0) and cost k^2
/// on the trigger bundles. Chore order is fixed: the heavy chore, the two
/// unit chores, then the three zero chores; agent i's own zero chore is 3+i.
/// Requires k > 2.
Instance theorem1(const Rational& k);

/// 3-way-number-partitioning reduction: 3 agents, |ints|+3 chores.
/// Integer chores come first, then the three zero chores.
Instance npc(std::vector<std::int64_t> ints, BigMode big = BigMode::infinite);

/// 3-partition reduction: n agents, 4n chores (3n integer chores then the n
/// zero chores).
Instance strong_np(std::vector<std::int64_t> ints, std::size_t n, BigMode big = BigMode::infinite);

/// Exhaustive oracle: can the multiset be split into `parts` sets of equal
/// sum? Sets must be non-empty (an empty set would sum to 0 < S).
bool has_equal_partition(std::span<const std::int64_t> ints, std::size_t parts = 3);

/// Exhaustive oracle: can the multiset (|A| = 3n) be split into n triplets
/// each summing to sum/n?
bool has_triplet_partition(std::span<const std::int64_t> ints);

/// Instance family showing that common top-chore rankings do not improve the
/// framework's certified factor: k shared top chores (2n < k < m), a tail of
/// chores costing 1-eps to everyone but the last agent, and the designated
/// allocation of the top block that is envy-free.
struct CommonTopRanking {
    Instance instance;
    Allocation designated; // partial: covers exactly the top k chores
    std::size_t top_k;
};
CommonTopRanking observation_cntr(std::size_t n, std::size_t k, std::size_t m,
                                  const CostValue& m_big, const Rational& eps);

// Random families for the test corpus. All deterministic per seed.

/// Additive costs, integers uniform in [lo, hi].
Instance random_additive(std::size_t n, std::size_t m, std::uint64_t seed, std::int64_t lo = 0,
                         std::int64_t hi = 9);

/// Monotone table built by cumulative random increments.
Instance random_monotone_table(std::size_t n, std::size_t m, std::uint64_t seed,
                               std::int64_t max_increment = 3);

/// Identical-order instance: all agents rank chores the same way (strictly,
/// so sigma agrees across agents at every rank).
Instance random_ido(std::size_t n, std::size_t m, std::uint64_t seed, std::int64_t max_step = 5);

/// Additive instance whose agents all share the same top-k set (the set, not
/// necessarily the order). Used to exercise the agreement seeders.
Instance random_shared_top(std::size_t n, std::size_t m, std::size_t k, std::uint64_t seed);

/// Additive instance with pairwise-disjoint top-k sets (needs m >= n*k).
Instance random_disjoint_top(std::size_t n, std::size_t m, std::size_t k, std::uint64_t seed);

/// Materializes any instance as an equivalent table-model instance.
Instance to_table(const Instance& inst);

/// Sub-instance on a chore subset, chores renumbered in increasing order of
/// their original index. Closed-form models are materialized first.
Instance restrict_chores(const Instance& inst, ChoreSet keep);

} // namespace chorefair
