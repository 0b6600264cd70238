// chorefair: fairness checkers, exact solvers, instance generators, and the
// claim-verification suite for chore allocation, behind one command line.

#include <chrono>
#include <cstdlib>
#include <iomanip>
#include <iostream>
#include <sstream>
#include <string>

#include <CLI11.hpp>
#include <nlohmann/json.hpp>

#include "chorefair/algorithms.hpp"
#include "chorefair/constructions.hpp"
#include "chorefair/exact_solver.hpp"
#include "chorefair/fairness.hpp"
#include "chorefair/json_io.hpp"
#include "chorefair/verify.hpp"

namespace {

using namespace chorefair;
using nlohmann::json;

constexpr int kExitOk = 0;
constexpr int kExitClaimMismatch = 2;
constexpr int kExitUsage = 3;
constexpr int kExitResource = 4;

struct GlobalFlags {
    std::uint64_t seed = 1;
    std::uint64_t budget = kDefaultBudget;
    std::string format = "json";
    unsigned threads = 0;
};

std::uint64_t env_budget_or(std::uint64_t fallback) {
    if (const char* env = std::getenv("CHOREFAIR_BUDGET")) {
        try {
            return std::stoull(env);
        } catch (const std::exception&) {
            throw UsageError("CHOREFAIR_BUDGET is not a number");
        }
    }
    return fallback;
}

std::vector<std::int64_t> parse_int_list(const std::string& text) {
    std::vector<std::int64_t> out;
    std::stringstream ss(text);
    std::string item;
    while (std::getline(ss, item, ',')) {
        if (item.empty()) continue;
        out.push_back(std::stoll(item));
    }
    if (out.empty()) throw UsageError("expected a comma-separated integer list");
    return out;
}

void emit(const json& doc, const GlobalFlags& flags, const std::string& table_text) {
    if (flags.format == "table")
        std::cout << table_text;
    else
        std::cout << doc.dump(2) << '\n';
}

std::string report_table(const Instance& inst, const FairnessReport& rep) {
    std::ostringstream os;
    os << "worst envy ratio: " << rep.worst.str() << " (~" << rep.worst.approx() << ")\n";
    os << "EFX: " << (rep.efx ? "yes" : "no") << "   EF1: " << (rep.ef1 ? "yes" : "no") << '\n';
    os << "envy ratio matrix (rows = envious agent):\n";
    for (std::size_t i = 0; i < rep.n; ++i) {
        for (std::size_t j = 0; j < rep.n; ++j) {
            if (i == j)
                os << std::setw(10) << "-";
            else
                os << std::setw(10) << rep.at(i, j).str();
        }
        os << '\n';
    }
    if (rep.mms) {
        os << "maximin shares:\n";
        for (std::size_t i = 0; i < rep.mms->size(); ++i) {
            const MmsVerdict& v = (*rep.mms)[i];
            os << "  agent " << i << ": share=" << v.share.str()
               << " bundle=" << v.bundle_cost.str() << (v.ok ? " ok" : " violated") << '\n';
        }
    }
    (void)inst;
    return os.str();
}

Instance load_instance(const std::string& path) {
    Instance inst = parse_instance(read_file(path));
    std::vector<Violation> violations = validate(inst);
    if (!violations.empty()) {
        std::ostringstream os;
        os << "instance fails validation: agent " << violations.front().agent << ": "
           << violations.front().what;
        throw UsageError(os.str());
    }
    return inst;
}

int cmd_check(const std::string& instance_path, const std::string& allocation_path, bool with_mms,
              const GlobalFlags& flags) {
    Instance inst = load_instance(instance_path);
    Allocation alloc = parse_allocation(read_file(allocation_path));
    ReportOptions opts;
    opts.with_mms = with_mms;
    opts.budget = flags.budget;
    FairnessReport rep = fairness_report(inst, alloc, opts);
    emit(report_to_json(rep), flags, report_table(inst, rep));
    return kExitOk;
}

int cmd_solve(const std::string& instance_path, const GlobalFlags& flags) {
    Instance inst = load_instance(instance_path);
    SolveOptions opts;
    opts.budget = flags.budget;
    opts.threads = flags.threads;
    SolveResult res = best_efx_ratio(inst, opts);
    std::ostringstream table;
    table << "explored " << res.explored << " allocations\n"
          << "EFX exists: " << (res.efx_allocation ? "YES" : "NO") << '\n'
          << "best achievable EFX factor: " << res.best_ratio.str() << " (~"
          << res.best_ratio.approx() << ")\n";
    emit(solve_result_to_json(res), flags, table.str());
    return kExitOk;
}

int cmd_run(const std::string& alg, const std::string& instance_path, const std::string& order,
            const GlobalFlags& flags) {
    Instance inst = load_instance(instance_path);
    Allocation out;
    CostValue certified;
    bool has_certificate = false;

    if (alg == "ttece") {
        std::vector<std::size_t> item_order;
        if (order.empty() || order == "input") {
            item_order = chores_of(full_set(inst.chores()));
        } else {
            for (std::int64_t c : parse_int_list(order))
                item_order.push_back(static_cast<std::size_t>(c));
        }
        out = ttece(inst, Allocation(inst.agents()), item_order);
    } else if (alg == "few-chores") {
        out = few_chores_efx(inst);
        certified = CostValue(1);
        has_certificate = true;
    } else if (alg == "three-agent") {
        out = three_agent_2efx(inst);
        certified = CostValue(2);
        has_certificate = true;
    } else if (alg.rfind("framework:", 0) == 0) {
        const std::string seeder = alg.substr(10);
        SeededPartial seeded;
        if (seeder == "top-n")
            seeded = seed_top_n_agreement(inst);
        else if (seeder == "top-n-1")
            seeded = seed_top_n_minus1_agreement(inst);
        else if (seeder == "top-n-1-disjoint")
            seeded = seed_top_n_minus1_disagreement(inst);
        else
            throw UsageError("unknown seeder \"" + seeder +
                             "\" (expected top-n, top-n-1, or top-n-1-disjoint)");
        FrameworkResult res = framework_run(inst, seeded);
        out = res.allocation;
        certified = res.certified_factor;
        has_certificate = true;
    } else {
        throw UsageError("unknown algorithm \"" + alg + '"');
    }

    FairnessReport rep = fairness_report(inst, out);
    json doc{{"allocation", allocation_to_json(out)}, {"report", report_to_json(rep)}};
    std::ostringstream table;
    table << "allocation: " << allocation_to_json(out).dump() << '\n';
    if (has_certificate) {
        doc["certified_factor"] = cost_to_json(certified);
        table << "certified factor: " << certified.str() << '\n';
    }
    table << report_table(inst, rep);
    emit(doc, flags, table.str());
    return kExitOk;
}

int cmd_gen(const std::string& family, const GlobalFlags& flags, const std::string& out_path,
            const std::string& ints, const std::string& k, std::size_t n, std::size_t m,
            std::size_t top_k, const std::string& m_big, const std::string& eps, bool finite_big,
            bool as_table) {
    Instance inst = [&]() -> Instance {
        const BigMode big = finite_big ? BigMode::finite : BigMode::infinite;
        if (family == "theorem1") return theorem1(CostValue::parse(k).finite());
        if (family == "npc" || family == "npc_reduction") return npc(parse_int_list(ints), big);
        if (family == "strong-np" || family == "strong_np_reduction")
            return strong_np(parse_int_list(ints), n, big);
        if (family == "observation-cntr" || family == "observation_cntr")
            return observation_cntr(n, top_k, m, CostValue::parse(m_big),
                                    CostValue::parse(eps).finite())
                .instance;
        if (family == "random-additive") return random_additive(n, m, flags.seed);
        if (family == "random-table") return random_monotone_table(n, m, flags.seed);
        if (family == "random-ido") return random_ido(n, m, flags.seed);
        if (family == "random-shared-top") return random_shared_top(n, m, top_k, flags.seed);
        if (family == "random-disjoint-top") return random_disjoint_top(n, m, top_k, flags.seed);
        throw UsageError("unknown family \"" + family + '"');
    }();
    if (as_table) inst = to_table(inst);
    const std::string text = instance_to_json(inst).dump(2) + "\n";
    if (out_path.empty() || out_path == "-")
        std::cout << text;
    else
        write_file(out_path, text);
    return kExitOk;
}

int cmd_verify(const std::string& selector, const GlobalFlags& flags, const std::string& k,
               const std::string& ints, std::uint64_t trials) {
    verify::Options opts;
    opts.budget = flags.budget;
    opts.seed = flags.seed;
    opts.threads = flags.threads;
    if (!k.empty()) opts.k = CostValue::parse(k).finite();
    if (!ints.empty()) opts.ints = parse_int_list(ints);
    if (trials > 0) opts.trials = trials;

    std::vector<verify::ClaimCheck> checks = verify::run_selector(selector, opts);
    bool all_ok = true;
    json rows = json::array();
    std::ostringstream table;
    for (const verify::ClaimCheck& c : checks) {
        all_ok = all_ok && c.pass;
        rows.push_back(json{{"claim", c.id},
                            {"pass", c.pass},
                            {"detail", c.detail},
                            {"seconds", c.seconds}});
        table << (c.pass ? "PASS " : "FAIL ") << c.id << "  [" << std::fixed
              << std::setprecision(2) << c.seconds << "s]\n      " << c.detail << '\n';
    }
    table << (all_ok ? "all claims reproduced\n" : "some claims FAILED\n");
    emit(json{{"selector", selector}, {"pass", all_ok}, {"claims", rows}}, flags, table.str());
    return all_ok ? kExitOk : kExitClaimMismatch;
}

int cmd_bench(const std::string& alg, const std::string& family, std::size_t n, std::size_t m,
              std::uint64_t trials, const GlobalFlags& flags) {
    json rows = json::array();
    CostValue worst_seen;
    double total_ms = 0;
    std::uint64_t failures = 0;
    for (std::uint64_t t = 0; t < trials; ++t) {
        const std::uint64_t seed = flags.seed + t;
        Instance inst = [&]() -> Instance {
            if (family == "random-additive") return random_additive(n, m, seed);
            if (family == "random-table") return random_monotone_table(n, m, seed);
            if (family == "random-ido") return random_ido(n, m, seed);
            if (family == "random-shared-top") return random_shared_top(n, m, n, seed);
            if (family == "random-disjoint-top")
                return random_disjoint_top(n, m, n > 1 ? n - 1 : 1, seed);
            throw UsageError("unknown bench family \"" + family + '"');
        }();
        const auto t0 = std::chrono::steady_clock::now();
        Allocation out;
        try {
            if (alg == "ttece")
                out = ttece(inst, Allocation(inst.agents()), chores_of(full_set(inst.chores())));
            else if (alg == "few-chores")
                out = few_chores_efx(inst);
            else if (alg == "three-agent")
                out = three_agent_2efx(inst);
            else if (alg == "framework:top-n")
                out = framework_run(inst, seed_top_n_agreement(inst)).allocation;
            else if (alg == "framework:top-n-1")
                out = framework_run(inst, seed_top_n_minus1_agreement(inst)).allocation;
            else if (alg == "framework:top-n-1-disjoint")
                out = framework_run(inst, seed_top_n_minus1_disagreement(inst)).allocation;
            else
                throw UsageError("unknown algorithm \"" + alg + '"');
        } catch (const ConditionNotMet&) {
            ++failures;
            continue;
        }
        const double ms =
            std::chrono::duration<double, std::milli>(std::chrono::steady_clock::now() - t0)
                .count();
        total_ms += ms;
        CostValue achieved = worst_ratio(inst, out);
        if (worst_seen < achieved) worst_seen = achieved;
        rows.push_back(json{{"trial", t},
                            {"seed", seed},
                            {"achieved_ratio", cost_to_json(achieved)},
                            {"ms", ms}});
    }
    json doc{{"alg", alg},
             {"family", family},
             {"trials", trials},
             {"ineligible", failures},
             {"max_achieved_ratio", cost_to_json(worst_seen)},
             {"total_ms", total_ms},
             {"runs", rows}};
    std::ostringstream table;
    table << alg << " on " << family << " (n=" << n << ", m=" << m << "): " << trials
          << " trials, max achieved factor " << worst_seen.str() << ", " << total_ms << " ms total\n";
    emit(doc, flags, table.str());
    return kExitOk;
}

} // namespace

int main(int argc, char** argv) {
    CLI::App app{"chore allocation fairness toolkit"};
    app.require_subcommand(1);

    GlobalFlags flags;
    app.add_option("--seed", flags.seed, "random seed shared by all subcommands");
    app.add_option("--budget", flags.budget, "enumeration budget (max n^m)");
    app.add_option("--format", flags.format, "output format: json or table")
        ->check(CLI::IsMember({"json", "table"}));
    app.add_option("--threads", flags.threads, "worker threads for exhaustive sweeps (0 = auto)");

    // check
    auto* check = app.add_subcommand("check", "evaluate fairness of an allocation");
    std::string check_instance, check_allocation;
    bool check_mms = false;
    check->add_option("--instance", check_instance, "instance JSON file")->required();
    check->add_option("--allocation", check_allocation, "allocation JSON file")->required();
    check->add_flag("--mms", check_mms, "also compute maximin shares (exhaustive)");

    // solve
    auto* solve = app.add_subcommand("solve", "exhaustive EFX existence and best factor");
    std::string solve_instance;
    bool solve_exact = false;
    solve->add_option("--instance", solve_instance, "instance JSON file")->required();
    solve->add_flag("--exact", solve_exact, "exhaustive search (the only supported mode)");

    // run
    auto* run = app.add_subcommand("run", "run an allocation algorithm");
    std::string run_alg, run_instance, run_order, run_sink = "lex";
    run->add_option("--alg", run_alg,
                    "ttece | few-chores | three-agent | framework:<top-n|top-n-1|top-n-1-disjoint>")
        ->required();
    run->add_option("--instance", run_instance, "instance JSON file")->required();
    run->add_option("--order", run_order, "ttece item order: 'input' or a comma list");
    run->add_option("--sink", run_sink, "sink rule (lex)")->check(CLI::IsMember({"lex"}));

    // gen
    auto* gen = app.add_subcommand("gen", "generate an instance");
    std::string gen_family, gen_out, gen_ints, gen_k = "10", gen_mbig = "inf", gen_eps = "1/10";
    std::size_t gen_n = 3, gen_m = 8, gen_topk = 0;
    bool gen_finite_big = false, gen_as_table = false;
    gen->add_option("--family", gen_family,
                    "theorem1 | npc | strong-np | observation-cntr | random-additive | "
                    "random-table | random-ido | random-shared-top | random-disjoint-top")
        ->required();
    gen->add_option("-o,--out", gen_out, "output file (default stdout)");
    gen->add_option("--ints", gen_ints, "comma-separated multiset for the reductions");
    gen->add_option("--k", gen_k, "theorem1 parameter k (> 2)");
    gen->add_option("--n", gen_n, "agent count");
    gen->add_option("--m", gen_m, "chore count");
    gen->add_option("--top-k", gen_topk, "top-set size (observation-cntr, shared/disjoint top)");
    gen->add_option("--m-big", gen_mbig, "observation-cntr heavy cost (number or 'inf')");
    gen->add_option("--eps", gen_eps, "observation-cntr tail parameter in (0,1)");
    gen->add_flag("--finite-big", gen_finite_big,
                  "replace INF with the finite dominating constant in the reductions");
    gen->add_flag("--as-table", gen_as_table, "serialize as a monotone table model");

    // verify-paper
    auto* verify_cmd = app.add_subcommand("verify-paper", "reproduce the published claims");
    std::string verify_selector = "all", verify_k, verify_ints;
    std::uint64_t verify_trials = 0;
    verify_cmd
        ->add_option("selector", verify_selector,
                     "theorem1 | corollary2 | npc | strong-np | theorem7 | theorem6 | theorem8 | "
                     "ttece | oracle | observation12 | all")
        ->check(CLI::IsMember(chorefair::verify::selectors()));
    verify_cmd->add_option("--k", verify_k, "override k for theorem1/corollary2");
    verify_cmd->add_option("--ints", verify_ints, "override the reduction multiset");
    verify_cmd->add_option("--trials", verify_trials, "override property-suite trial counts");

    // bench
    auto* bench = app.add_subcommand("bench", "deterministic benchmark over seeded instances");
    std::string bench_alg = "ttece", bench_family = "random-additive";
    std::size_t bench_n = 3, bench_m = 8;
    std::uint64_t bench_trials = 100;
    bench->add_option("--alg", bench_alg, "algorithm (as in run)");
    bench->add_option("--family", bench_family, "instance family (random-*)");
    bench->add_option("--n", bench_n, "agent count");
    bench->add_option("--m", bench_m, "chore count");
    bench->add_option("--trials", bench_trials, "number of seeded trials");

    try {
        app.parse(argc, argv);
        flags.budget = env_budget_or(flags.budget);

        if (check->parsed()) return cmd_check(check_instance, check_allocation, check_mms, flags);
        if (solve->parsed()) return cmd_solve(solve_instance, flags);
        if (run->parsed()) return cmd_run(run_alg, run_instance, run_order, flags);
        if (gen->parsed())
            return cmd_gen(gen_family, flags, gen_out, gen_ints, gen_k, gen_n, gen_m, gen_topk,
                           gen_mbig, gen_eps, gen_finite_big, gen_as_table);
        if (verify_cmd->parsed())
            return cmd_verify(verify_selector, flags, verify_k, verify_ints, verify_trials);
        if (bench->parsed()) return cmd_bench(bench_alg, bench_family, bench_n, bench_m,
                                              bench_trials, flags);
        return kExitUsage;
    } catch (const CLI::ParseError& e) {
        return app.exit(e);
    } catch (const ResourceError& e) {
        std::cerr << "resource error: " << e.what() << '\n';
        return kExitResource;
    } catch (const UsageError& e) {
        std::cerr << "error: " << e.what() << '\n';
        return kExitUsage;
    } catch (const InternalFault& e) {
        std::cerr << "internal fault: " << e.what() << '\n';
        return 70; // EX_SOFTWARE
    } catch (const std::exception& e) {
        std::cerr << "error: " << e.what() << '\n';
        return kExitUsage;
    }
}
