#include "chorefair/constructions.hpp"

#include <algorithm>
#include <limits>
#include <numeric>
#include <random>
#include <sstream>

namespace chorefair {
namespace {

std::string ints_str(std::span<const std::int64_t> ints) {
    std::ostringstream os;
    os << '{';
    for (std::size_t i = 0; i < ints.size(); ++i) {
        if (i) os << ',';
        os << ints[i];
    }
    os << '}';
    return os.str();
}

void require_valid(const ClosedForm& form) {
    auto issues = closed_form_issues(form);
    if (!issues.empty()) throw ParamError(issues.front());
}

CostValue finite_big(std::span<const std::int64_t> ints) {
    std::int64_t sum = std::accumulate(ints.begin(), ints.end(), std::int64_t{0});
    return CostValue(1 + 3 * sum);
}

// Engine-independent bounded draw (uniform_int_distribution is not portable
// across standard libraries; rejection sampling on the raw engine is).
class Rng {
  public:
    explicit Rng(std::uint64_t seed) : engine_(seed) {}

    std::int64_t uniform(std::int64_t lo, std::int64_t hi) {
        const std::uint64_t span = static_cast<std::uint64_t>(hi - lo) + 1;
        const std::uint64_t limit = std::numeric_limits<std::uint64_t>::max() -
                                    std::numeric_limits<std::uint64_t>::max() % span;
        std::uint64_t draw;
        do {
            draw = engine_();
        } while (draw >= limit);
        return lo + static_cast<std::int64_t>(draw % span);
    }

  private:
    std::mt19937_64 engine_;
};

} // namespace

Instance theorem1(const Rational& k) {
    Theorem1Form form{k};
    require_valid(form);
    std::vector<CostModel> models(3, ClosedFormModel{form});
    return Instance(3, 6, std::move(models), "theorem1(k=" + k.str() + ")");
}

Instance npc(std::vector<std::int64_t> ints, BigMode big) {
    PartitionForm form;
    form.ints = std::move(ints);
    require_valid(form);
    if (big == BigMode::finite) form.big = finite_big(form.ints);
    const std::size_t m = form.ints.size() + 3;
    if (m > kMaxChores) throw ParamError("npc multiset too large for bitmask bundles");
    std::string label = "npc(" + ints_str(form.ints) + (big == BigMode::finite ? ",finite-big)" : ")");
    std::vector<CostModel> models(3, ClosedFormModel{form});
    return Instance(3, m, std::move(models), std::move(label));
}

Instance strong_np(std::vector<std::int64_t> ints, std::size_t n, BigMode big) {
    TripletForm form;
    form.ints = std::move(ints);
    form.agents = n;
    require_valid(form);
    if (big == BigMode::finite) form.big = finite_big(form.ints);
    const std::size_t m = form.ints.size() + n;
    if (m > kMaxChores) throw ParamError("strong-np multiset too large for bitmask bundles");
    std::string label = "strong-np(" + ints_str(form.ints) + ",n=" + std::to_string(n) + ")";
    std::vector<CostModel> models(n, ClosedFormModel{form});
    return Instance(n, m, std::move(models), std::move(label));
}

bool has_equal_partition(std::span<const std::int64_t> ints, std::size_t parts) {
    if (parts == 0) throw UsageError("has_equal_partition needs at least one part");
    std::int64_t sum = std::accumulate(ints.begin(), ints.end(), std::int64_t{0});
    if (sum % static_cast<std::int64_t>(parts) != 0) return false;
    const std::int64_t target = sum / static_cast<std::int64_t>(parts);
    if (ints.empty()) return target == 0;

    std::vector<std::int64_t> fill(parts, 0);
    auto rec = [&](auto&& self, std::size_t idx) -> bool {
        if (idx == ints.size()) {
            return std::all_of(fill.begin(), fill.end(),
                               [&](std::int64_t f) { return f == target; });
        }
        for (std::size_t p = 0; p < parts; ++p) {
            if (fill[p] + ints[idx] > target) continue;
            if (p > 0 && fill[p] == fill[p - 1]) continue; // symmetric to part p-1
            fill[p] += ints[idx];
            const bool ok = self(self, idx + 1);
            fill[p] -= ints[idx];
            if (ok) return true;
        }
        return false;
    };
    return rec(rec, 0);
}

bool has_triplet_partition(std::span<const std::int64_t> ints) {
    if (ints.size() % 3 != 0) throw UsageError("triplet partition needs |A| divisible by 3");
    const std::size_t groups = ints.size() / 3;
    if (groups == 0) return true;
    std::int64_t sum = std::accumulate(ints.begin(), ints.end(), std::int64_t{0});
    if (sum % static_cast<std::int64_t>(groups) != 0) return false;
    const std::int64_t target = sum / static_cast<std::int64_t>(groups);

    std::vector<std::int64_t> fill(groups, 0);
    std::vector<std::size_t> count(groups, 0);
    auto rec = [&](auto&& self, std::size_t idx) -> bool {
        if (idx == ints.size()) return true; // counts and sums are forced
        for (std::size_t g = 0; g < groups; ++g) {
            if (count[g] == 3 || fill[g] + ints[idx] > target) continue;
            if (count[g] == 2 && fill[g] + ints[idx] != target) continue;
            if (g > 0 && fill[g] == fill[g - 1] && count[g] == count[g - 1])
                continue; // symmetric to group g-1
            fill[g] += ints[idx];
            ++count[g];
            const bool ok = self(self, idx + 1);
            fill[g] -= ints[idx];
            --count[g];
            if (ok) return true;
        }
        return false;
    };
    return rec(rec, 0);
}

CommonTopRanking observation_cntr(std::size_t n, std::size_t k, std::size_t m,
                                  const CostValue& m_big, const Rational& eps) {
    if (n < 2) throw ParamError("observation-cntr needs n >= 2");
    if (!(2 * n < k && k < m)) throw ParamError("observation-cntr requires 2n < k < m");
    if (m > kMaxChores) throw ParamError("observation-cntr: m too large");
    if (!(eps > 0 && eps < 1)) throw ParamError("observation-cntr requires 0 < eps < 1");
    if (!m_big.is_infinite() && !(m_big.finite() > 1))
        throw ParamError("observation-cntr requires m_big > 1");

    const Rational tail_others = 1 - eps;
    const CostValue last_unit(Rational(1, static_cast<std::int64_t>(k + 1 - n)));

    std::vector<CostModel> models;
    models.reserve(n);
    for (std::size_t i = 0; i + 1 < n; ++i) {
        AdditiveModel model;
        model.costs.assign(m, CostValue(tail_others));
        for (std::size_t c = 0; c < k; ++c) model.costs[c] = CostValue(1);
        models.push_back(std::move(model));
    }
    AdditiveModel last;
    last.costs.assign(m, last_unit);
    for (std::size_t c = 0; c + 1 < n; ++c) last.costs[c] = m_big;
    models.push_back(std::move(last));

    std::ostringstream label;
    label << "observation-cntr(n=" << n << ",k=" << k << ",m=" << m << ",big=" << m_big.str()
          << ",eps=" << eps.str() << ")";

    CommonTopRanking out{Instance(n, m, std::move(models), label.str()), Allocation(n), k};
    for (std::size_t i = 0; i + 1 < n; ++i) out.designated.bundles[i] = ChoreSet{1} << i;
    for (std::size_t c = n - 1; c < k; ++c) out.designated.bundles[n - 1] |= ChoreSet{1} << c;
    return out;
}

Instance random_additive(std::size_t n, std::size_t m, std::uint64_t seed, std::int64_t lo,
                         std::int64_t hi) {
    if (lo < 0 || hi < lo) throw ParamError("random_additive needs 0 <= lo <= hi");
    Rng rng(seed);
    std::vector<CostModel> models;
    models.reserve(n);
    for (std::size_t i = 0; i < n; ++i) {
        AdditiveModel model;
        model.costs.reserve(m);
        for (std::size_t c = 0; c < m; ++c) model.costs.emplace_back(rng.uniform(lo, hi));
        models.push_back(std::move(model));
    }
    return Instance(n, m, std::move(models),
                    "random-additive(n=" + std::to_string(n) + ",m=" + std::to_string(m) +
                        ",seed=" + std::to_string(seed) + ")");
}

Instance random_monotone_table(std::size_t n, std::size_t m, std::uint64_t seed,
                               std::int64_t max_increment) {
    if (m > 20) throw ParamError("random_monotone_table: m too large for a dense table");
    if (max_increment < 0) throw ParamError("random_monotone_table needs max_increment >= 0");
    Rng rng(seed);
    std::vector<CostModel> models;
    models.reserve(n);
    for (std::size_t i = 0; i < n; ++i) {
        TableModel table;
        table.entries.assign(ChoreSet{1} << m, CostValue());
        for (ChoreSet mask = 1; mask < table.entries.size(); ++mask) {
            CostValue base;
            ChoreSet rest = mask;
            while (rest) {
                const std::size_t e = lowest_chore(rest);
                rest &= rest - 1;
                const CostValue& sub = table.entries[mask & ~(ChoreSet{1} << e)];
                if (base < sub) base = sub;
            }
            table.entries[mask] = base + CostValue(rng.uniform(0, max_increment));
        }
        models.push_back(std::move(table));
    }
    return Instance(n, m, std::move(models),
                    "random-table(n=" + std::to_string(n) + ",m=" + std::to_string(m) +
                        ",seed=" + std::to_string(seed) + ")");
}

Instance random_ido(std::size_t n, std::size_t m, std::uint64_t seed, std::int64_t max_step) {
    if (max_step < 1) throw ParamError("random_ido needs max_step >= 1");
    Rng rng(seed);
    // common ranking: a random permutation of the chores
    std::vector<std::size_t> ranked(m);
    std::iota(ranked.begin(), ranked.end(), std::size_t{0});
    for (std::size_t i = m; i > 1; --i)
        std::swap(ranked[i - 1], ranked[static_cast<std::size_t>(rng.uniform(0, static_cast<std::int64_t>(i) - 1))]);

    std::vector<CostModel> models;
    models.reserve(n);
    for (std::size_t i = 0; i < n; ++i) {
        // strictly decreasing along the common ranking so sigma agrees at
        // every rank, ties included (there are none)
        std::vector<std::int64_t> values(m);
        std::int64_t v = 0;
        for (std::size_t r = m; r-- > 0;) {
            v += rng.uniform(1, max_step);
            values[r] = v;
        }
        AdditiveModel model;
        model.costs.assign(m, CostValue());
        for (std::size_t r = 0; r < m; ++r) model.costs[ranked[r]] = CostValue(values[r]);
        models.push_back(std::move(model));
    }
    return Instance(n, m, std::move(models),
                    "random-ido(n=" + std::to_string(n) + ",m=" + std::to_string(m) +
                        ",seed=" + std::to_string(seed) + ")");
}

Instance random_shared_top(std::size_t n, std::size_t m, std::size_t k, std::uint64_t seed) {
    if (k > m) throw ParamError("random_shared_top needs k <= m");
    Rng rng(seed);
    // the shared top set: k random chores; top costs strictly dominate the rest
    std::vector<std::size_t> chores(m);
    std::iota(chores.begin(), chores.end(), std::size_t{0});
    for (std::size_t i = m; i > 1; --i)
        std::swap(chores[i - 1], chores[static_cast<std::size_t>(rng.uniform(0, static_cast<std::int64_t>(i) - 1))]);
    ChoreSet top = 0;
    for (std::size_t i = 0; i < k; ++i) top |= ChoreSet{1} << chores[i];

    std::vector<CostModel> models;
    models.reserve(n);
    for (std::size_t i = 0; i < n; ++i) {
        AdditiveModel model;
        model.costs.reserve(m);
        for (std::size_t c = 0; c < m; ++c) {
            if (contains(top, c))
                model.costs.emplace_back(rng.uniform(101, 200));
            else
                model.costs.emplace_back(rng.uniform(0, 100));
        }
        models.push_back(std::move(model));
    }
    return Instance(n, m, std::move(models),
                    "random-shared-top(n=" + std::to_string(n) + ",m=" + std::to_string(m) +
                        ",k=" + std::to_string(k) + ",seed=" + std::to_string(seed) + ")");
}

Instance random_disjoint_top(std::size_t n, std::size_t m, std::size_t k, std::uint64_t seed) {
    if (m < n * k) throw ParamError("random_disjoint_top needs m >= n*k");
    Rng rng(seed);
    std::vector<std::size_t> chores(m);
    std::iota(chores.begin(), chores.end(), std::size_t{0});
    for (std::size_t i = m; i > 1; --i)
        std::swap(chores[i - 1], chores[static_cast<std::size_t>(rng.uniform(0, static_cast<std::int64_t>(i) - 1))]);

    std::vector<CostModel> models;
    models.reserve(n);
    for (std::size_t i = 0; i < n; ++i) {
        AdditiveModel model;
        model.costs.assign(m, CostValue());
        for (std::size_t c = 0; c < m; ++c) model.costs[c] = CostValue(rng.uniform(0, 100));
        for (std::size_t j = 0; j < k; ++j)
            model.costs[chores[i * k + j]] = CostValue(rng.uniform(101, 200));
        models.push_back(std::move(model));
    }
    return Instance(n, m, std::move(models),
                    "random-disjoint-top(n=" + std::to_string(n) + ",m=" + std::to_string(m) +
                        ",k=" + std::to_string(k) + ",seed=" + std::to_string(seed) + ")");
}

Instance to_table(const Instance& inst) {
    if (inst.chores() > 20) throw ResourceError("to_table: 2^m entries would be too large");
    std::vector<CostModel> models;
    models.reserve(inst.agents());
    for (std::size_t i = 0; i < inst.agents(); ++i) {
        TableModel table;
        table.entries.reserve(ChoreSet{1} << inst.chores());
        for (ChoreSet mask = 0; mask < (ChoreSet{1} << inst.chores()); ++mask)
            table.entries.push_back(inst.cost(i, mask));
        models.push_back(std::move(table));
    }
    return Instance(inst.agents(), inst.chores(), std::move(models), inst.label());
}

Instance restrict_chores(const Instance& inst, ChoreSet keep) {
    if (keep & ~full_set(inst.chores())) throw UsageError("restrict_chores: subset out of range");
    const std::vector<std::size_t> kept = chores_of(keep);
    const std::size_t m2 = kept.size();
    std::vector<CostModel> models;
    models.reserve(inst.agents());
    for (std::size_t i = 0; i < inst.agents(); ++i) {
        if (const auto* add = std::get_if<AdditiveModel>(&inst.model(i))) {
            AdditiveModel model;
            model.costs.reserve(m2);
            for (std::size_t c : kept) model.costs.push_back(add->costs[c]);
            models.push_back(std::move(model));
        } else {
            if (m2 > 20) throw ResourceError("restrict_chores: table would be too large");
            TableModel table;
            table.entries.reserve(ChoreSet{1} << m2);
            for (ChoreSet mask = 0; mask < (ChoreSet{1} << m2); ++mask) {
                ChoreSet orig = 0;
                for (std::size_t b = 0; b < m2; ++b)
                    if (contains(mask, b)) orig |= ChoreSet{1} << kept[b];
                table.entries.push_back(inst.cost(i, orig));
            }
            models.push_back(std::move(table));
        }
    }
    return Instance(inst.agents(), m2, std::move(models), inst.label() + " [restricted]");
}

} // namespace chorefair
