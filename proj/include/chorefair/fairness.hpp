#pragma once

#include <cstdint>
#include <optional>
#include <vector>

#include "chorefair/instance.hpp"

namespace chorefair {

/// Default cap on n^m for the exhaustive enumerations (MMS, exact solver).
/// Overridable per call and via the CHOREFAIR_BUDGET environment variable
/// in the CLI.
inline constexpr std::uint64_t kDefaultBudget = 20'000'000;

/// max_{e in Xi} c_i(Xi \ e) / c_i(Xj), under the CostValue ratio
/// conventions. Empty Xi gives 0. The pair (i, j) satisfies alpha-EFX
/// exactly when the result is <= alpha.
CostValue envy_ratio(const Instance& inst, const Allocation& alloc, std::size_t i, std::size_t j);

/// max over ordered pairs of envy_ratio; 0 when n = 1.
CostValue worst_ratio(const Instance& inst, const Allocation& alloc);

bool is_alpha_efx(const Instance& inst, const Allocation& alloc, const CostValue& alpha);
inline bool is_efx(const Instance& inst, const Allocation& alloc) {
    return is_alpha_efx(inst, alloc, CostValue(1));
}

/// True when every envious pair can be fixed by removing some single chore
/// from the envious agent's own bundle.
bool is_ef1(const Instance& inst, const Allocation& alloc);

/// Plain envy-freeness: c_i(Xi) <= c_i(Xj) for all ordered pairs.
bool is_envy_free(const Instance& inst, const Allocation& alloc);

/// Exact maximin share of one agent: min over all n-partitions of the
/// maximum bundle cost, enumerated over canonical set partitions.
/// Throws ResourceError when n^m exceeds the budget.
CostValue mms_value(const Instance& inst, std::size_t agent, std::uint64_t budget = kDefaultBudget);

/// c_i(Xi) <= mms_value(i) for every agent.
bool is_mms(const Instance& inst, const Allocation& alloc, std::uint64_t budget = kDefaultBudget);

struct MmsVerdict {
    CostValue share;       // the agent's maximin share
    CostValue bundle_cost; // cost of her assigned bundle
    bool ok;
};

struct FairnessReport {
    std::size_t n = 0;
    std::vector<CostValue> envy; // row-major n*n, diagonal unused (zero)
    CostValue worst;             // == efx_at, the smallest alpha that passes
    bool efx = false;
    bool ef1 = false;
    std::optional<std::vector<MmsVerdict>> mms;

    const CostValue& at(std::size_t i, std::size_t j) const { return envy[i * n + j]; }
};

struct ReportOptions {
    bool with_mms = false;
    std::uint64_t budget = kDefaultBudget;
};

FairnessReport fairness_report(const Instance& inst, const Allocation& alloc,
                               const ReportOptions& opts = {});

} // namespace chorefair
