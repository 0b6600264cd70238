#pragma once

#include <cstdint>
#include <optional>

#include "chorefair/fairness.hpp"
#include "chorefair/instance.hpp"

namespace chorefair {

struct SolveOptions {
    std::uint64_t budget = kDefaultBudget;
    unsigned threads = 0; // 0 = pick from hardware, clamped to [1, 8]
};

struct SolveResult {
    std::optional<Allocation> efx_allocation; // present exactly when best_ratio <= 1
    CostValue best_ratio;                     // min over complete allocations of worst_ratio
    Allocation argmin_allocation;             // first allocation achieving best_ratio
    std::uint64_t explored = 0;               // number of complete allocations visited
};

/// Full sweep over all n^m complete allocations in mixed-radix order
/// (chore 0 most significant). Deterministic regardless of thread count:
/// ties on best_ratio resolve to the smallest enumeration index.
SolveResult best_efx_ratio(const Instance& inst, const SolveOptions& opts = {});

/// First complete allocation (in enumeration order) with worst_ratio <= 1,
/// or nullopt after an exhaustive sweep.
std::optional<Allocation> find_efx(const Instance& inst, const SolveOptions& opts = {});

/// Independent oracle: a plain recursive enumerator with no memoization,
/// pruning, or sharding. Used to cross-check the optimized sweep.
SolveResult naive_enumerate(const Instance& inst, std::uint64_t budget = 100'000);

/// True when the optimized sweep and the naive enumerator agree bit-exactly
/// on verdict, best ratio, and argmin allocation.
bool cross_check_enumerators(const Instance& inst, std::uint64_t budget = 100'000);

} // namespace chorefair
