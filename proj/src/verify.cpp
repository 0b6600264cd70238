#include "chorefair/verify.hpp"

#include <algorithm>
#include <chrono>
#include <functional>
#include <sstream>

#include "chorefair/algorithms.hpp"
#include "chorefair/constructions.hpp"
#include "chorefair/exact_solver.hpp"
#include "chorefair/fairness.hpp"
#include "chorefair/instance.hpp"

namespace chorefair::verify {
namespace {

using Clock = std::chrono::steady_clock;

double seconds_since(Clock::time_point start) {
    return std::chrono::duration<double>(Clock::now() - start).count();
}

ClaimCheck make_check(std::string id, bool pass, std::string detail, double secs) {
    return ClaimCheck{std::move(id), std::move(detail), pass, secs};
}

std::string ints_str(const std::vector<std::int64_t>& ints) {
    std::ostringstream os;
    os << '{';
    for (std::size_t i = 0; i < ints.size(); ++i) {
        if (i) os << ',';
        os << ints[i];
    }
    os << '}';
    return os.str();
}

SolveOptions solve_opts(const Options& opts) {
    SolveOptions s;
    s.budget = opts.budget;
    s.threads = opts.threads;
    return s;
}

// Deterministic corpus for the 3-way-partitioning reduction: all valid
// multisets over a small value range, the two canonical ones pinned first.
std::vector<std::vector<std::int64_t>> npc_corpus() {
    std::vector<std::vector<std::int64_t>> corpus = {{1, 1, 1, 1, 1, 1}, {2, 2, 3, 3, 3, 5}};
    auto valid = [](const std::vector<std::int64_t>& a) {
        std::int64_t sum = 0;
        for (std::int64_t v : a) sum += v;
        if (sum % 3 != 0) return false;
        const std::int64_t s = sum / 3;
        return std::all_of(a.begin(), a.end(), [&](std::int64_t v) { return v < s; });
    };
    auto push = [&](std::vector<std::int64_t> a) {
        if (valid(a) && std::find(corpus.begin(), corpus.end(), a) == corpus.end())
            corpus.push_back(std::move(a));
    };
    // non-decreasing tuples, |A| in {4,5,6}, values 1..6
    std::vector<std::int64_t> tuple;
    auto gen = [&](auto&& self, std::size_t size, std::int64_t lo) -> void {
        if (corpus.size() >= 34) return;
        if (tuple.size() == size) {
            push(tuple);
            return;
        }
        for (std::int64_t v = lo; v <= 6; ++v) {
            tuple.push_back(v);
            self(self, size, v);
            tuple.pop_back();
        }
    };
    for (std::size_t size : {4u, 5u, 6u}) {
        tuple.clear();
        gen(gen, size, 1);
    }
    return corpus;
}

// Valid 3-partition multisets for n = 2: six integers summing to 2T with
// every value strictly inside (T/4, T/2).
std::vector<std::vector<std::int64_t>> strong_np_corpus() {
    std::vector<std::vector<std::int64_t>> corpus = {{3, 3, 3, 3, 3, 3}, {5, 5, 5, 7, 8, 8}};
    auto valid = [](const std::vector<std::int64_t>& a) {
        std::int64_t sum = 0;
        for (std::int64_t v : a) sum += v;
        if (sum % 2 != 0) return false;
        const std::int64_t t = sum / 2;
        return std::all_of(a.begin(), a.end(),
                           [&](std::int64_t v) { return 4 * v > t && 2 * v < t; });
    };
    auto push = [&](std::vector<std::int64_t> a) {
        if (valid(a) && std::find(corpus.begin(), corpus.end(), a) == corpus.end())
            corpus.push_back(std::move(a));
    };
    std::vector<std::int64_t> tuple;
    auto gen = [&](auto&& self, std::int64_t lo) -> void {
        if (corpus.size() >= 14) return;
        if (tuple.size() == 6) {
            push(tuple);
            return;
        }
        for (std::int64_t v = lo; v <= 8; ++v) {
            tuple.push_back(v);
            self(self, v);
            tuple.pop_back();
        }
    };
    gen(gen, 3);
    return corpus;
}

std::uint64_t trials_or(const Options& opts, std::uint64_t dflt) {
    return opts.trials ? *opts.trials : dflt;
}

// splitmix-style seed spreading so per-trial seeds decorrelate
std::uint64_t spread(std::uint64_t seed, std::uint64_t index) {
    std::uint64_t z = seed + 0x9E3779B97F4A7C15ull * (index + 1);
    z = (z ^ (z >> 30)) * 0xBF58476D1CE4E5B9ull;
    z = (z ^ (z >> 27)) * 0x94D049BB133111EBull;
    return z ^ (z >> 31);
}

// Sets an upward-closed region of each agent's table to INF (supersets of a
// random anchor bundle), preserving monotonicity.
Instance poison_tables(const Instance& inst, std::uint64_t seed) {
    std::vector<CostModel> models;
    models.reserve(inst.agents());
    for (std::size_t i = 0; i < inst.agents(); ++i) {
        TableModel table = std::get<TableModel>(inst.model(i));
        const ChoreSet anchor = spread(seed, i) % table.entries.size();
        if (anchor != 0) {
            for (ChoreSet mask = 0; mask < table.entries.size(); ++mask)
                if ((mask & anchor) == anchor) table.entries[mask] = CostValue::infinity();
        }
        models.push_back(std::move(table));
    }
    return Instance(inst.agents(), inst.chores(), std::move(models), inst.label() + " [poisoned]");
}

} // namespace

std::vector<ClaimCheck> check_theorem1(const Options& opts) {
    std::vector<Rational> ks;
    if (opts.k)
        ks.push_back(*opts.k);
    else
        ks = {Rational(3), Rational(5), Rational(10), Rational(100)};

    bool no_efx_ok = true, ratio_ok = true, runtime_ok = true, audit_ok = true;
    std::ostringstream d1, d2;
    double total1 = 0, total2 = 0;
    for (const Rational& k : ks) {
        Instance inst = theorem1(k);
        auto t0 = Clock::now();
        SolveResult res = best_efx_ratio(inst, solve_opts(opts));
        const double secs = seconds_since(t0);
        total1 += secs;
        const CostValue expected(k / 2);
        if (res.efx_allocation) no_efx_ok = false;
        if (res.best_ratio != expected) ratio_ok = false;
        if (secs >= 1.0) runtime_ok = false;
        d1 << "k=" << k.str() << ": efx=" << (res.efx_allocation ? "YES" : "no")
           << ", explored=" << res.explored << ", best=" << res.best_ratio.str()
           << " (expected " << expected.str() << ", " << secs << "s); ";

        auto a0 = Clock::now();
        std::vector<Violation> violations = validate(inst);
        total2 += seconds_since(a0);
        if (!violations.empty()) {
            audit_ok = false;
            d2 << "k=" << k.str() << ": " << violations.front().what << "; ";
        } else {
            d2 << "k=" << k.str() << ": ok; ";
        }
    }
    return {make_check("theorem1/no-efx-and-best-ratio", no_efx_ok && ratio_ok && runtime_ok,
                       d1.str(), total1),
            make_check("theorem1/superadditivity-audit", audit_ok, d2.str(), total2)};
}

std::vector<ClaimCheck> check_corollary2(const Options& opts) {
    const Rational k = opts.k ? *opts.k : Rational(10);
    auto t0 = Clock::now();
    Instance inst = theorem1(k);
    const CostValue expected_mu{k};

    bool ok = true;
    std::ostringstream detail;
    for (std::size_t i = 0; i < 3; ++i) {
        CostValue mu = mms_value(inst, i, opts.budget);
        if (mu != expected_mu) ok = false;
        detail << "mu_" << i << "=" << mu.str() << " ";
    }
    detail << "(expected " << expected_mu.str() << "); ";

    Allocation chosen;
    chosen.bundles = {0b000001, 0b001110, 0b110000}; // heavy chore | units+first zero | zero pair
    const bool mms_ok = is_mms(inst, chosen, opts.budget);
    const CostValue ratio = worst_ratio(inst, chosen);
    const bool inf_ok = ratio.is_infinite();
    detail << "designated allocation mms=" << (mms_ok ? "yes" : "NO")
           << ", efx worst ratio=" << ratio.str() << " (expected inf)";
    return {make_check("corollary2/mms-without-efx", ok && mms_ok && inf_ok, detail.str(),
                       seconds_since(t0))};
}

std::vector<ClaimCheck> check_npc(const Options& opts) {
    auto corpus = opts.ints ? std::vector<std::vector<std::int64_t>>{*opts.ints} : npc_corpus();
    auto t0 = Clock::now();
    bool ok = corpus.size() >= (opts.ints ? 1 : 30);
    std::size_t yes = 0, no = 0, mismatches = 0;
    std::ostringstream detail;
    for (const auto& ints : corpus) {
        const bool partition = has_equal_partition(ints, 3);
        Instance inst = npc(ints);
        const bool efx = find_efx(inst, solve_opts(opts)).has_value();
        (partition ? yes : no)++;
        if (partition != efx) {
            ok = false;
            ++mismatches;
            if (mismatches <= 4)
                detail << ints_str(ints) << ": partition=" << (partition ? "yes" : "no")
                       << " but efx=" << (efx ? "yes" : "no") << "; ";
        }
    }
    const double secs = seconds_since(t0);
    if (secs >= 30.0) ok = false;
    detail << corpus.size() << " multisets (" << yes << " yes / " << no << " no), "
           << mismatches << " mismatches, " << secs << "s (budget 30s)";
    return {make_check("npc/partition-equivalence", ok, detail.str(), secs)};
}

std::vector<ClaimCheck> check_strong_np(const Options& opts) {
    auto corpus =
        opts.ints ? std::vector<std::vector<std::int64_t>>{*opts.ints} : strong_np_corpus();
    auto t0 = Clock::now();
    bool ok = corpus.size() >= (opts.ints ? 1 : 10);
    std::size_t mismatches = 0, yes = 0, no = 0;
    std::ostringstream detail;
    for (const auto& ints : corpus) {
        const bool partition = has_triplet_partition(ints);
        Instance inst = strong_np(ints, 2);
        const bool efx = find_efx(inst, solve_opts(opts)).has_value();
        (partition ? yes : no)++;
        if (partition != efx) {
            ok = false;
            ++mismatches;
            if (mismatches <= 4)
                detail << ints_str(ints) << ": triplet-partition=" << (partition ? "yes" : "no")
                       << " but efx=" << (efx ? "yes" : "no") << "; ";
        }
    }
    const double secs = seconds_since(t0);
    if (secs >= 5.0) ok = false;
    detail << corpus.size() << " multisets (" << yes << " yes / " << no << " no), "
           << mismatches << " mismatches, " << secs << "s (budget 5s)";
    return {make_check("strong-np/partition-equivalence-n2", ok, detail.str(), secs)};
}

std::vector<ClaimCheck> check_theorem7(const Options& opts) {
    auto t0 = Clock::now();
    const std::uint64_t per_shape = trials_or(opts, 1000);
    const std::pair<std::size_t, std::size_t> shapes[] = {{3, 5}, {4, 6}, {5, 7}};
    std::uint64_t failures = 0, runs = 0;
    std::ostringstream detail;
    for (auto [n, m] : shapes) {
        for (std::uint64_t t = 0; t < per_shape; ++t) {
            const std::uint64_t seed = spread(opts.seed, runs);
            ++runs;
            Instance inst = random_monotone_table(n, m, seed, 1 + static_cast<std::int64_t>(t % 5));
            try {
                Allocation out = few_chores_efx(inst);
                if (!out.complete(m) || !is_efx(inst, out)) ++failures;
            } catch (const std::exception& e) {
                ++failures;
                if (failures <= 3) detail << "n=" << n << ",m=" << m << ",seed=" << seed << ": " << e.what() << "; ";
            }
        }
    }
    detail << runs << " monotone-table instances, " << failures << " failures";
    return {make_check("theorem7/few-chores-exact-efx", failures == 0, detail.str(),
                       seconds_since(t0))};
}

std::vector<ClaimCheck> check_theorem6(const Options& opts) {
    auto t0 = Clock::now();
    const std::uint64_t per_seeder = trials_or(opts, 500);
    std::uint64_t failures = 0, runs = 0;
    std::ostringstream detail;

    struct SeederCase {
        const char* name;
        std::function<Instance(std::uint64_t)> make;
        std::function<SeededPartial(const Instance&)> seed;
    };
    const SeederCase cases[] = {
        {"top-n",
         [&](std::uint64_t s) {
             const std::size_t n = 3 + s % 3;
             return random_shared_top(n, n + 1 + s % 5, n, s);
         },
         seed_top_n_agreement},
        {"top-n-1",
         [&](std::uint64_t s) {
             const std::size_t n = 3 + s % 3;
             return random_shared_top(n, n + 1 + s % 5, n - 1, s);
         },
         seed_top_n_minus1_agreement},
        {"top-n-1-disjoint",
         [&](std::uint64_t s) {
             const std::size_t n = 3 + s % 3;
             return random_disjoint_top(n, n * (n - 1) + s % 4, n - 1, s);
         },
         seed_top_n_minus1_disagreement},
    };

    for (const SeederCase& c : cases) {
        std::uint64_t local_failures = 0;
        for (std::uint64_t t = 0; t < per_seeder; ++t) {
            const std::uint64_t seed = spread(opts.seed ^ 0xF00Dull, runs);
            ++runs;
            try {
                Instance inst = c.make(seed);
                SeededPartial seeded = c.seed(inst);
                FrameworkResult res = framework_run(inst, seeded);
                if (!is_alpha_efx(inst, res.allocation, res.certified_factor)) ++local_failures;
            } catch (const std::exception& e) {
                ++local_failures;
                if (failures + local_failures <= 3) detail << c.name << " seed=" << seed << ": " << e.what() << "; ";
            }
        }
        detail << c.name << ": " << per_seeder - local_failures << "/" << per_seeder << " ok; ";
        failures += local_failures;
    }
    detail << "(certified factor max(alpha, beta+1), checked loop invariant)";
    return {make_check("theorem6/framework-certified-factor", failures == 0, detail.str(),
                       seconds_since(t0))};
}

std::vector<ClaimCheck> check_theorem8(const Options& opts) {
    auto t0 = Clock::now();
    const std::uint64_t trials = trials_or(opts, 1000);
    std::uint64_t failures = 0, dominance_checked = 0, dominance_failures = 0;
    std::ostringstream detail;
    const CostValue two(2);
    for (std::uint64_t t = 0; t < trials; ++t) {
        const std::uint64_t seed = spread(opts.seed ^ 0x8EEDull, t);
        const std::size_t m = 3 + seed % 8; // 3..10
        Instance inst = random_additive(3, m, seed, 0, 9);
        try {
            Allocation out = three_agent_2efx(inst);
            if (!out.complete(m) || !is_alpha_efx(inst, out, two)) {
                ++failures;
                continue;
            }
            if (m <= 8) {
                ++dominance_checked;
                SolveResult best = best_efx_ratio(inst, solve_opts(opts));
                if (worst_ratio(inst, out) < best.best_ratio) {
                    ++dominance_failures;
                    if (dominance_failures <= 3) detail << "seed=" << seed << ": beat the optimum?!; ";
                }
            }
        } catch (const std::exception& e) {
            ++failures;
            if (failures <= 3) detail << "seed=" << seed << ": " << e.what() << "; ";
        }
    }
    detail << trials << " additive 3-agent instances, " << failures << " factor-2 failures; "
           << dominance_checked << " oracle-dominance checks (m<=8), " << dominance_failures
           << " failures";
    return {make_check("theorem8/three-agent-2efx", failures == 0 && dominance_failures == 0,
                       detail.str(), seconds_since(t0))};
}

std::vector<ClaimCheck> check_ttece(const Options& opts) {
    auto t0 = Clock::now();
    const std::uint64_t trials = trials_or(opts, 1000);
    std::uint64_t failures = 0;
    std::uint64_t max_rotations = 0;
    std::ostringstream detail;
    for (std::uint64_t t = 0; t < trials; ++t) {
        const std::uint64_t seed = spread(opts.seed ^ 0x7Ece, t);
        const std::size_t n = 2 + seed % 4;       // 2..5
        const std::size_t m = 1 + (seed >> 8) % 12; // 1..12
        Instance inst = random_additive(n, m, seed, 0, 9);
        Allocation empty(n);
        std::vector<std::size_t> order(m);
        for (std::size_t c = 0; c < m; ++c) order[c] = c;
        TteceOptions topts;
        bool ef1_all_steps = true;
        topts.observer = [&](const Allocation& running) {
            if (!is_ef1(inst, running)) ef1_all_steps = false;
        };
        try {
            TteceStats stats;
            Allocation out = ttece(inst, empty, order, topts, &stats);
            max_rotations = std::max(max_rotations, stats.max_rotations_between_placements);
            if (!out.complete(m) || !is_ef1(inst, out) || !ef1_all_steps) ++failures;
        } catch (const std::exception& e) {
            ++failures;
            if (failures <= 3) detail << "seed=" << seed << ": " << e.what() << "; ";
        }
    }
    detail << trials << " additive instances (n<=5, m<=12), " << failures
           << " failures; EF1 held after every placement and rotation; max rotations between "
              "placements = "
           << max_rotations;
    return {make_check("ttece/complete-and-ef1", failures == 0, detail.str(), seconds_since(t0))};
}

std::vector<ClaimCheck> check_oracle(const Options& opts) {
    auto t0 = Clock::now();
    const std::uint64_t trials = trials_or(opts, 200);
    std::uint64_t failures = 0;
    std::ostringstream detail;
    for (std::uint64_t t = 0; t < trials; ++t) {
        const std::uint64_t seed = spread(opts.seed ^ 0x0AC1Eull, t);
        Instance inst = [&]() {
            switch (seed % 5) {
                case 0: return random_additive(2, 3 + (seed >> 8) % 11, seed, 0, 9); // m <= 13
                case 1: return random_additive(3, 2 + (seed >> 8) % 8, seed, 0, 6);  // m <= 9
                case 2: return random_additive(4, 2 + (seed >> 8) % 6, seed, 0, 9);  // m <= 7
                case 3: return random_monotone_table(3, 2 + (seed >> 8) % 5, seed, 3);
                default: // tables with an INF region, monotonicity preserved
                    return poison_tables(random_monotone_table(3, 2 + (seed >> 8) % 5, seed, 3),
                                         seed >> 16);
            }
        }();
        try {
            if (!cross_check_enumerators(inst, 100'000)) {
                ++failures;
                if (failures <= 3) detail << "seed=" << seed << " (" << inst.label() << "); ";
            }
        } catch (const std::exception& e) {
            ++failures;
            if (failures <= 3) detail << "seed=" << seed << ": " << e.what() << "; ";
        }
    }
    detail << trials << " instances with n^m <= 1e5, " << failures
           << " disagreements between the sweep and the naive enumerator";
    return {make_check("oracle/enumerator-agreement", failures == 0, detail.str(),
                       seconds_since(t0))};
}

std::vector<ClaimCheck> check_observation12(const Options& opts) {
    auto t0 = Clock::now();
    std::ostringstream detail;
    bool ok = true;

    // unbounded-cost variant: the designated allocation of the top block is
    // envy free with worst ratio exactly 0 on the restricted instance
    const std::size_t n = 3, k = 7, m = 9;
    const Rational eps(1, 10);
    CommonTopRanking built = observation_cntr(n, k, m, CostValue::infinity(), eps);
    Instance top_block = restrict_chores(built.instance, full_set(k));
    Allocation designated = built.designated;
    const bool ef = is_envy_free(top_block, designated);
    const CostValue restricted_worst = worst_ratio(top_block, designated);
    if (!ef || !restricted_worst.is_zero()) ok = false;
    detail << "top-" << k << " allocation envy-free=" << (ef ? "yes" : "NO")
           << ", restricted worst ratio=" << restricted_worst.str() << " (expected 0); ";

    // the ratio matrix after seeding cannot certify beta better than 1/(1-eps)
    RatioMatrix ratios = ratio_matrix(built.instance, built.designated);
    const CostValue bound(Rational(1) / (Rational(1) - eps));
    for (std::size_t i = 0; i + 1 < n; ++i) {
        CostValue row_min = CostValue::infinity();
        for (std::size_t j = 0; j < n; ++j)
            if (j != i && ratios.at(i, j) < row_min) row_min = ratios.at(i, j);
        if (row_min != bound) {
            ok = false;
            detail << "agent " << i << " certifies " << row_min.str() << " != " << bound.str()
                   << "; ";
        }
    }
    detail << "certified beta for the first " << n - 1 << " agents = " << bound.str()
           << " = 1/(1-eps) exactly; ";

    // finite-cost variant stays envy free as well
    CommonTopRanking finite = observation_cntr(3, 8, 11, CostValue(1000), Rational(1, 5));
    const bool finite_ef =
        is_envy_free(restrict_chores(finite.instance, full_set(8)), finite.designated);
    if (!finite_ef) ok = false;
    detail << "finite-big variant envy-free=" << (finite_ef ? "yes" : "NO");

    return {make_check("observation12/common-top-ranking-limit", ok, detail.str(),
                       seconds_since(t0))};
}

const std::vector<std::string>& selectors() {
    static const std::vector<std::string> all = {
        "theorem1", "corollary2", "npc",    "strong-np",     "theorem7",
        "theorem6", "theorem8",   "ttece",  "oracle",        "observation12",
        "all"};
    return all;
}

std::vector<ClaimCheck> run_selector(const std::string& selector, const Options& opts) {
    if (selector == "theorem1") return check_theorem1(opts);
    if (selector == "corollary2") return check_corollary2(opts);
    if (selector == "npc") return check_npc(opts);
    if (selector == "strong-np") return check_strong_np(opts);
    if (selector == "theorem7") return check_theorem7(opts);
    if (selector == "theorem6") return check_theorem6(opts);
    if (selector == "theorem8") return check_theorem8(opts);
    if (selector == "ttece") return check_ttece(opts);
    if (selector == "oracle") return check_oracle(opts);
    if (selector == "observation12") return check_observation12(opts);
    if (selector == "all") {
        std::vector<ClaimCheck> out;
        for (const std::string& s : selectors()) {
            if (s == "all") continue;
            auto part = run_selector(s, opts);
            out.insert(out.end(), std::make_move_iterator(part.begin()),
                       std::make_move_iterator(part.end()));
        }
        return out;
    }
    throw UsageError("unknown verify selector \"" + selector + '"');
}

} // namespace chorefair::verify
