#include "chorefair/instance.hpp"

#include <algorithm>
#include <sstream>

namespace chorefair {
namespace {

std::string bundle_str(ChoreSet set) {
    std::ostringstream os;
    os << '{';
    bool first = true;
    for (std::size_t c : chores_of(set)) {
        if (!first) os << ',';
        os << c;
        first = false;
    }
    os << '}';
    return os.str();
}

CostValue additive_cost(const AdditiveModel& model, ChoreSet bundle) {
    CostValue total;
    ChoreSet rest = bundle;
    while (rest) {
        total += model.costs[lowest_chore(rest)];
        rest &= rest - 1;
    }
    return total;
}

// Shared structure of the two reduction families: zero-cost b-chores behind
// the integer chores, additive except on the trigger bundles.
CostValue reduction_cost(const std::vector<std::int64_t>& ints, std::size_t n_agents,
                         const CostValue& big, bool pair_trigger, std::size_t agent,
                         ChoreSet bundle) {
    const std::size_t na = ints.size();
    const ChoreSet a_mask = full_set(na);
    const ChoreSet b_all = full_set(na + n_agents) & ~a_mask;
    const ChoreSet b_own = ChoreSet{1} << (na + agent);

    bool trigger;
    if (pair_trigger) {
        // two b-chores both different from the agent's own
        trigger = set_size(bundle & b_all & ~b_own) >= 2;
    } else {
        // all b-chores except the agent's own
        trigger = (bundle & (b_all & ~b_own)) == (b_all & ~b_own);
    }
    trigger = trigger || ((bundle & b_own) && (bundle & a_mask));
    if (trigger) return big;

    Rational total = 0;
    ChoreSet rest = bundle & a_mask;
    while (rest) {
        total += ints[lowest_chore(rest)];
        rest &= rest - 1;
    }
    return CostValue(total);
}

CostValue theorem1_cost(const Theorem1Form& form, std::size_t agent, ChoreSet bundle) {
    // chores: 0 = the heavy common chore, 1..2 the unit chores, 3..5 the
    // zero-cost b-chores (agent i's own is 3+i)
    const ChoreSet a_mask = full_set(3);
    const ChoreSet b_all = 0b111000;
    const ChoreSet b_own = ChoreSet{1} << (3 + agent);
    const ChoreSet b_minus = b_all & ~b_own;

    if ((bundle & b_minus) == b_minus || ((bundle & b_own) && (bundle & a_mask)))
        return CostValue(form.k * form.k);

    Rational total = 0;
    if (bundle & 1u) total += form.k;
    if (bundle & 2u) total += 1;
    if (bundle & 4u) total += 1;
    return CostValue(total);
}

CostValue closed_form_cost(const ClosedForm& form, std::size_t agent, ChoreSet bundle) {
    return std::visit(
        [&](const auto& f) -> CostValue {
            using T = std::decay_t<decltype(f)>;
            if constexpr (std::is_same_v<T, Theorem1Form>) {
                return theorem1_cost(f, agent, bundle);
            } else if constexpr (std::is_same_v<T, PartitionForm>) {
                return reduction_cost(f.ints, 3, f.big, /*pair_trigger=*/false, agent, bundle);
            } else {
                return reduction_cost(f.ints, f.agents, f.big, /*pair_trigger=*/true, agent, bundle);
            }
        },
        form);
}

} // namespace

Instance::Instance(std::size_t n, std::size_t m, std::vector<CostModel> models, std::string label)
    : n_(n), m_(m), models_(std::move(models)), label_(std::move(label)) {
    if (n_ < 1) throw UsageError("instance needs at least one agent");
    if (m_ > kMaxChores) throw UsageError("chore count exceeds bitmask width");
    if (models_.size() != n_)
        throw UsageError("expected one cost model per agent, got " + std::to_string(models_.size()));
    for (const CostModel& model : models_) {
        if (const auto* add = std::get_if<AdditiveModel>(&model)) {
            if (add->costs.size() != m_) throw UsageError("additive model has wrong length");
        } else if (const auto* table = std::get_if<TableModel>(&model)) {
            if (table->entries.size() != (ChoreSet{1} << m_))
                throw UsageError("table model must list all 2^m bundles");
        }
    }
}

const CostModel& Instance::model(std::size_t agent) const {
    if (agent >= n_) throw UsageError("agent index " + std::to_string(agent) + " out of range (n=" + std::to_string(n_) + ")");
    return models_[agent];
}

CostValue Instance::cost(std::size_t agent, ChoreSet bundle) const {
    if (agent >= n_) throw UsageError("agent index " + std::to_string(agent) + " out of range (n=" + std::to_string(n_) + ")");
    if (bundle & ~full_set(m_)) throw UsageError("bundle references chores beyond m=" + std::to_string(m_));
    return std::visit(
        [&](const auto& model) -> CostValue {
            using T = std::decay_t<decltype(model)>;
            if constexpr (std::is_same_v<T, AdditiveModel>) {
                return additive_cost(model, bundle);
            } else if constexpr (std::is_same_v<T, TableModel>) {
                return model.entries[bundle];
            } else {
                return closed_form_cost(model.form, agent, bundle);
            }
        },
        models_[agent]);
}

bool Instance::all_additive() const {
    return std::all_of(models_.begin(), models_.end(),
                       [](const CostModel& m) { return std::holds_alternative<AdditiveModel>(m); });
}

std::vector<std::size_t> sigma_order(const Instance& inst, std::size_t agent, ChoreSet subset) {
    std::vector<std::size_t> order = chores_of(subset);
    std::vector<CostValue> single(inst.chores());
    for (std::size_t c : order) single[c] = inst.singleton_cost(agent, c);
    std::stable_sort(order.begin(), order.end(), [&](std::size_t a, std::size_t b) {
        if (single[a] != single[b]) return single[b] < single[a];
        return a < b;
    });
    return order;
}

std::size_t sigma(const Instance& inst, std::size_t agent, std::size_t rank, ChoreSet subset) {
    if (rank < 1 || rank > set_size(subset))
        throw UsageError("sigma rank " + std::to_string(rank) + " out of range for subset of size " +
                         std::to_string(set_size(subset)));
    return sigma_order(inst, agent, subset)[rank - 1];
}

void require_valid_partial(const Instance& inst, const Allocation& alloc, const char* where) {
    if (alloc.agents() != inst.agents())
        throw UsageError(std::string(where) + ": allocation has " + std::to_string(alloc.agents()) +
                         " bundles for " + std::to_string(inst.agents()) + " agents");
    if (alloc.assigned() & ~full_set(inst.chores()))
        throw UsageError(std::string(where) + ": allocation references chores beyond m");
    if (!alloc.disjoint()) throw UsageError(std::string(where) + ": bundles overlap");
}

namespace {

void audit_monotone_exhaustive(const Instance& inst, std::size_t agent,
                               std::vector<Violation>& out) {
    const std::size_t m = inst.chores();
    std::vector<CostValue> memo(ChoreSet{1} << m);
    for (ChoreSet mask = 0; mask < memo.size(); ++mask) memo[mask] = inst.cost(agent, mask);
    if (!memo[0].is_zero())
        out.push_back({agent, "empty bundle must cost 0, got " + memo[0].str(), 0, 0});
    for (ChoreSet mask = 0; mask < memo.size(); ++mask) {
        for (std::size_t e = 0; e < m; ++e) {
            if (contains(mask, e)) continue;
            ChoreSet bigger = mask | (ChoreSet{1} << e);
            if (memo[bigger] < memo[mask]) {
                out.push_back({agent,
                               "monotonicity violated: cost" + bundle_str(mask) + "=" +
                                   memo[mask].str() + " > cost" + bundle_str(bigger) + "=" +
                                   memo[bigger].str(),
                               mask, bigger});
            }
        }
    }
}

void audit_superadditive_exhaustive(const Instance& inst, std::size_t agent,
                                    std::vector<Violation>& out) {
    const std::size_t m = inst.chores();
    std::vector<CostValue> memo(ChoreSet{1} << m);
    for (ChoreSet mask = 0; mask < memo.size(); ++mask) memo[mask] = inst.cost(agent, mask);
    // every disjoint pair (S, T): walk S over all masks, T over subsets of the complement
    for (ChoreSet s = 0; s < memo.size(); ++s) {
        const ChoreSet comp = full_set(m) & ~s;
        ChoreSet t = comp;
        while (true) {
            if (memo[s | t] < memo[s] + memo[t]) {
                out.push_back({agent,
                               "superadditivity violated on " + bundle_str(s) + " and " +
                                   bundle_str(t),
                               s, t});
            }
            if (t == 0) break;
            t = (t - 1) & comp;
        }
    }
}

} // namespace

std::vector<std::string> closed_form_issues(const ClosedForm& form) {
    std::vector<std::string> issues;
    if (const auto* t1 = std::get_if<Theorem1Form>(&form)) {
        if (!(t1->k > 2)) issues.push_back("theorem1 requires k > 2, got " + t1->k.str());
    } else if (const auto* part = std::get_if<PartitionForm>(&form)) {
        std::int64_t sum = 0;
        for (std::int64_t a : part->ints) {
            if (a <= 0) issues.push_back("npc integers must be positive, got " + std::to_string(a));
            sum += a;
        }
        if (part->ints.empty()) issues.push_back("npc needs a non-empty multiset");
        if (sum % 3 != 0)
            issues.push_back("npc multiset must sum to 3S, got sum " + std::to_string(sum));
        else {
            const std::int64_t s = sum / 3;
            for (std::int64_t a : part->ints)
                if (a >= s)
                    issues.push_back("npc requires each integer < S=" + std::to_string(s) +
                                     ", got " + std::to_string(a));
        }
    } else {
        const auto& trip = std::get<TripletForm>(form);
        const std::size_t n = trip.agents;
        if (n < 1) issues.push_back("strong-np needs at least one agent");
        if (n >= 1 && trip.ints.size() != 3 * n)
            issues.push_back("strong-np needs |A| = 3n integers, got " +
                             std::to_string(trip.ints.size()) + " for n=" + std::to_string(n));
        std::int64_t sum = 0;
        for (std::int64_t a : trip.ints) {
            if (a <= 0) issues.push_back("strong-np integers must be positive");
            sum += a;
        }
        if (n >= 1 && !trip.ints.empty()) {
            if (sum % static_cast<std::int64_t>(n) != 0)
                issues.push_back("strong-np multiset must sum to nT, got sum " + std::to_string(sum));
            else {
                const std::int64_t t = sum / static_cast<std::int64_t>(n);
                for (std::int64_t a : trip.ints)
                    if (!(4 * a > t && 2 * a < t))
                        issues.push_back("strong-np requires T/4 < a < T/2 with T=" +
                                         std::to_string(t) + ", got " + std::to_string(a));
            }
        }
    }
    return issues;
}

std::vector<Violation> validate(const Instance& inst) {
    std::vector<Violation> out;
    constexpr std::size_t kExhaustiveCap = 12;
    for (std::size_t i = 0; i < inst.agents(); ++i) {
        const CostModel& model = inst.model(i);
        // additive entries are non-negative by CostValue construction
        if (std::holds_alternative<TableModel>(model)) {
            audit_monotone_exhaustive(inst, i, out);
        } else if (std::holds_alternative<ClosedFormModel>(model)) {
            const auto& form = std::get<ClosedFormModel>(model).form;
            for (std::string& issue : closed_form_issues(form))
                out.push_back({i, std::move(issue), 0, 0});
            if (inst.chores() <= kExhaustiveCap) {
                audit_monotone_exhaustive(inst, i, out);
                audit_superadditive_exhaustive(inst, i, out);
            }
        }
        if (out.size() > 64) break; // enough witnesses
    }
    return out;
}

} // namespace chorefair
