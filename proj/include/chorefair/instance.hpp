#pragma once

#include <bit>
#include <cstdint>
#include <optional>
#include <string>
#include <variant>
#include <vector>

#include "chorefair/cost_value.hpp"

namespace chorefair {

/// A bundle of chores as a bitmask; chore e is bit (1 << e).
using ChoreSet = std::uint64_t;

/// Chore identifiers are bit positions, so m is capped at the word size.
inline constexpr std::size_t kMaxChores = 62;

inline ChoreSet full_set(std::size_t m) { return m == 0 ? 0 : (~ChoreSet{0} >> (64 - m)); }
inline bool contains(ChoreSet set, std::size_t chore) { return (set >> chore) & 1u; }
inline std::size_t set_size(ChoreSet set) { return static_cast<std::size_t>(std::popcount(set)); }
inline std::size_t lowest_chore(ChoreSet set) { return static_cast<std::size_t>(std::countr_zero(set)); }

inline std::vector<std::size_t> chores_of(ChoreSet set) {
    std::vector<std::size_t> out;
    out.reserve(set_size(set));
    while (set) {
        out.push_back(lowest_chore(set));
        set &= set - 1;
    }
    return out;
}

// ---------------------------------------------------------------------------
// Cost models
// ---------------------------------------------------------------------------

/// Per-chore costs, summed over the bundle. Entries may be INF (absorbing).
struct AdditiveModel {
    std::vector<CostValue> costs; // one per chore

    bool operator==(const AdditiveModel&) const = default;
};

/// Explicit cost for every one of the 2^m bundles, indexed by bitmask.
struct TableModel {
    std::vector<CostValue> entries; // size 1 << m

    bool operator==(const TableModel&) const = default;
};

// Closed-form families. Evaluators are pure functions of (agent, bundle);
// the same form object is shared by every agent of the instance.

/// Three agents, six chores with singleton costs (k,1,1,0,0,0) and a
/// superadditive jump to k^2 on the trigger bundles.
struct Theorem1Form {
    Rational k;

    bool operator==(const Theorem1Form&) const = default;
};

/// Three agents, |ints|+3 chores built from a 3-way number-partitioning
/// multiset; trigger bundles cost big (INF by default).
struct PartitionForm {
    std::vector<std::int64_t> ints;
    CostValue big = CostValue::infinity();

    bool operator==(const PartitionForm&) const = default;
};

/// n agents, 4n chores built from a 3-partition multiset; trigger bundles
/// cost big (INF by default).
struct TripletForm {
    std::vector<std::int64_t> ints;
    std::size_t agents = 0;
    CostValue big = CostValue::infinity();

    bool operator==(const TripletForm&) const = default;
};

using ClosedForm = std::variant<Theorem1Form, PartitionForm, TripletForm>;

/// Family parameter violations, empty when the form is well-posed.
/// Theorem1Form needs k > 2; PartitionForm positive integers summing to 3S
/// with each a_i < S; TripletForm 3n positive integers summing to nT with
/// each a_i strictly inside (T/4, T/2).
std::vector<std::string> closed_form_issues(const ClosedForm& form);

struct ClosedFormModel {
    ClosedForm form;

    bool operator==(const ClosedFormModel&) const = default;
};

using CostModel = std::variant<AdditiveModel, TableModel, ClosedFormModel>;

// ---------------------------------------------------------------------------
// Instance
// ---------------------------------------------------------------------------

class Instance {
  public:
    Instance(std::size_t n, std::size_t m, std::vector<CostModel> models, std::string label = {});

    std::size_t agents() const { return n_; }
    std::size_t chores() const { return m_; }
    const std::string& label() const { return label_; }
    const std::vector<CostModel>& models() const { return models_; }
    const CostModel& model(std::size_t agent) const;

    /// c_agent(bundle). Pure; throws UsageError on out-of-range indices.
    CostValue cost(std::size_t agent, ChoreSet bundle) const;

    /// Singleton cost c_agent({chore}).
    CostValue singleton_cost(std::size_t agent, std::size_t chore) const {
        return cost(agent, ChoreSet{1} << chore);
    }

    bool all_additive() const;

    bool operator==(const Instance&) const = default;

  private:
    std::size_t n_;
    std::size_t m_;
    std::vector<CostModel> models_;
    std::string label_;
};

/// The chores of `subset` ordered from most to least costly for `agent`;
/// ties broken by lowest chore index. sigma(rank) = order[rank-1].
std::vector<std::size_t> sigma_order(const Instance& inst, std::size_t agent, ChoreSet subset);

/// The rank-th (1-based) most costly chore of `subset` for `agent`.
std::size_t sigma(const Instance& inst, std::size_t agent, std::size_t rank, ChoreSet subset);

// ---------------------------------------------------------------------------
// Allocations
// ---------------------------------------------------------------------------

/// An ordered list of pairwise-disjoint bundles, one per agent. Complete
/// when the bundles cover every chore; partial allocations simply leave
/// some chores unassigned.
struct Allocation {
    std::vector<ChoreSet> bundles;

    Allocation() = default;
    explicit Allocation(std::size_t n) : bundles(n, 0) {}

    std::size_t agents() const { return bundles.size(); }
    ChoreSet assigned() const {
        ChoreSet u = 0;
        for (ChoreSet b : bundles) u |= b;
        return u;
    }
    bool disjoint() const {
        ChoreSet seen = 0;
        for (ChoreSet b : bundles) {
            if (seen & b) return false;
            seen |= b;
        }
        return true;
    }
    bool complete(std::size_t m) const { return disjoint() && assigned() == full_set(m); }

    bool operator==(const Allocation&) const = default;
};

/// Throws UsageError unless the allocation has one bundle per agent,
/// disjoint, with all chores in range. Completeness is checked on demand.
void require_valid_partial(const Instance& inst, const Allocation& alloc, const char* where);

// ---------------------------------------------------------------------------
// Validation
// ---------------------------------------------------------------------------

struct Violation {
    std::size_t agent;
    std::string what;
    ChoreSet mask_a = 0; // witnessing bundle(s), when applicable
    ChoreSet mask_b = 0;
};

/// Structural validation: normalization, monotonicity (exhaustive for table
/// models), non-negativity for additive models, and the closed-form
/// families' own audits (exhaustive superadditivity up to m <= 12).
std::vector<Violation> validate(const Instance& inst);

} // namespace chorefair
