// Command-line front end: solve single instances, run benchmark grids,
// generate instance files, and run the invariant check suites.
//
// Exit codes are stable: 0 success, 1 usage or configuration error,
// 2 solver hit the iteration cap, 3 an invariant suite failed.

#include <cstdio>
#include <exception>
#include <filesystem>
#include <iostream>
#include <optional>
#include <string>
#include <vector>

#include "CLI11.hpp"

#include "sapg/bench.hpp"
#include "sapg/checks.hpp"
#include "sapg/datagen.hpp"
#include "sapg/diagnostics.hpp"
#include "sapg/io.hpp"
#include "sapg/solver.hpp"
#include "sapg/version.hpp"

namespace {

using namespace sapg;

struct SolveArgs {
    std::string instance_dir;
    std::string config_path;
    std::vector<std::string> overrides;
    std::string algorithm = "sapg";
    std::string out_dir = ".";
    bool diagnostics = false;
    // inline generation instead of --instance
    int m = 0, n = 0;
    double spar = 0.0;
    std::uint64_t seed = 0;
    std::string kind = "linear_l1";
};

int cmd_solve(const SolveArgs& args) {
    Instance instance;
    if (!args.instance_dir.empty()) {
        instance = read_instance(args.instance_dir);
    } else {
        InstanceSpec spec;
        spec.m = args.m;
        spec.n = args.n;
        spec.spar = args.spar;
        spec.seed = args.seed;
        spec.kind = instance_kind_from_string(args.kind);
        instance = gen_instance(spec);
    }
    const CompositeProblem prob = objective_for(instance);

    SolverConfig cfg = default_config(prob.dimension());
    if (!args.config_path.empty()) cfg = load_config_file(args.config_path, cfg);
    for (const auto& ov : args.overrides) apply_override(cfg, ov);
    if (cfg.x0.size() != prob.dimension()) {
        // A config written for another dimension keeps its scalars; the
        // start point falls back to the default.
        cfg.x0.assign(prob.dimension(), 0.1);
    }

    const auto errors = validate(cfg, prob);
    bool fatal = false;
    for (const auto& e : errors) {
        if (e.rfind("x0: not feasible", 0) != 0) fatal = true;
    }
    if (fatal) {
        for (const auto& e : errors) std::cerr << "sapg: config error: " << e << "\n";
        return 1;
    }

    const Algorithm algo = algorithm_from_string(args.algorithm);
    SolveResult result;
    if (algo == Algorithm::sapg) {
        result = sapg_solve(prob, cfg);
    } else if (algo == Algorithm::spg) {
        result = spg_solve(prob, cfg);
    } else {
        const auto constants = prob.loss->constants();
        if (!constants) {
            std::cerr << "sapg: isapg needs the loss smoothing constants\n";
            return 1;
        }
        result = isapg_solve(prob, cfg, constants->lipschitz_factor, ErrorOracle{});
    }

    std::filesystem::create_directories(args.out_dir);
    write_result_json(args.out_dir + "/result.json", result);
    write_trace_csv(args.out_dir + "/trace.csv", result.trace);

    if (args.diagnostics) {
        SolverConfig recorded = cfg;
        recorded.record_iterates = true;
        const SolveResult rerun = (algo == Algorithm::spg) ? spg_solve(prob, recorded)
                                                           : sapg_solve(prob, recorded);
        const ReferenceSolution ref = compute_reference(prob, cfg);
        write_diagnostics_csv(args.out_dir + "/diagnostics.csv",
                              energy_series(prob, recorded, rerun, ref));
    }

    std::cout << "algorithm=" << to_string(algo) << " iterations=" << result.iterations
              << " stop=" << to_string(result.stop_reason)
              << " f_final=" << format_double(result.trace.rows.back().f_exact) << "\n";
    return result.stop_reason == StopReason::residual_met ? 0 : 2;
}

int cmd_gen(const InstanceSpec& spec, const std::string& out_dir) {
    const Instance instance = gen_instance(spec);
    write_instance(out_dir, instance);
    std::cout << "wrote instance (" << spec.m << "x" << spec.n << ", spar "
              << format_double(spec.spar) << ", " << to_string(spec.kind) << ") to " << out_dir
              << "\n";
    return 0;
}

int cmd_bench(const std::string& spec_path, const std::string& out_dir,
              std::optional<int> trials, std::optional<std::uint64_t> seed,
              std::optional<int> threads, bool no_curves) {
    ExperimentSpec spec = parse_experiment_json(read_text_file(spec_path));
    if (trials) spec.trials = *trials;
    if (seed) spec.base_seed = *seed;
    if (threads) spec.threads = *threads;
    run_experiment_to_dir(spec, out_dir, !no_curves);

    // Exit 0 only when every trial completed.
    const std::string summary = read_text_file(out_dir + "/tables/summary.csv");
    if (summary.find(",1\n") != std::string::npos) {
        std::cerr << "sapg: some trials failed; see " << out_dir << "/tables/raw.csv\n";
        return 1;
    }
    std::cout << "bench results in " << out_dir << "\n";
    return 0;
}

int cmd_check(const std::string& suite, std::uint64_t seed, const std::string& inject) {
    checks::FaultInjection fault;
    if (inject == "kappa-zero") {
        fault.zero_kappa = true;
    } else if (!inject.empty()) {
        std::cerr << "sapg: unknown fault '" << inject << "'\n";
        return 1;
    }

    std::vector<std::string> suites =
        suite.empty() ? checks::suite_names() : std::vector<std::string>{suite};

    int failures = 0;
    for (const auto& name : suites) {
        const checks::SuiteResult result = checks::run_suite(name, seed, fault);
        for (const auto& o : result.outcomes) {
            if (!o.passed()) {
                ++failures;
                std::printf("[FAIL] %s: %s (%d/%d violations, worst %.3g)\n",
                            result.suite.c_str(), o.name.c_str(), o.violations, o.total, o.worst);
            }
        }
        std::printf("suite %-10s %s (%zu checks)\n", result.suite.c_str(),
                    result.passed() ? "ok" : "FAILED", result.outcomes.size());
    }
    return failures == 0 ? 0 : 3;
}

}  // namespace

int main(int argc, char** argv) {
    CLI::App app{"Smoothing accelerated proximal gradient solvers and benchmarks"};
    app.set_version_flag("--version", sapg::kVersion);
    app.require_subcommand(1);

    SolveArgs solve_args;
    auto* solve = app.add_subcommand("solve", "solve one instance");
    solve->add_option("--instance", solve_args.instance_dir, "instance directory from 'gen'");
    solve->add_option("--config", solve_args.config_path, "solver config JSON");
    solve->add_option("--override", solve_args.overrides, "config override key=value")
        ->take_all();
    solve->add_option("--algorithm", solve_args.algorithm, "sapg | spg | isapg")
        ->check(CLI::IsMember({"sapg", "spg", "isapg"}));
    solve->add_option("--out", solve_args.out_dir, "output directory");
    solve->add_flag("--diagnostics", solve_args.diagnostics,
                    "also write the energy/rate diagnostics CSV (runs a reference solve)");
    solve->add_option("--m", solve_args.m, "rows (inline generation)");
    solve->add_option("--n", solve_args.n, "columns (inline generation)");
    solve->add_option("--spar", solve_args.spar, "sparsity level (inline generation)");
    solve->add_option("--seed", solve_args.seed, "instance seed (inline generation)");
    solve->add_option("--kind", solve_args.kind, "linear_l1 | censored")
        ->check(CLI::IsMember({"linear_l1", "censored"}));

    sapg::InstanceSpec gen_spec;
    std::string gen_out = "instance";
    std::string gen_kind = "linear_l1";
    auto* gen = app.add_subcommand("gen", "generate an instance to files");
    gen->add_option("--m", gen_spec.m, "rows")->required();
    gen->add_option("--n", gen_spec.n, "columns")->required();
    gen->add_option("--spar", gen_spec.spar, "sparsity level in (0,1]")->required();
    gen->add_option("--seed", gen_spec.seed, "seed");
    gen->add_option("--noise", gen_spec.noise_scale, "noise scale");
    gen->add_option("--kind", gen_kind, "linear_l1 | censored")
        ->check(CLI::IsMember({"linear_l1", "censored"}));
    gen->add_option("--out", gen_out, "output directory");

    std::string bench_spec;
    std::string bench_out = "bench_out";
    std::optional<int> bench_trials;
    std::optional<std::uint64_t> bench_seed;
    std::optional<int> bench_threads;
    bool bench_no_curves = false;
    auto* bench = app.add_subcommand("bench", "run an experiment grid");
    bench->add_option("--spec", bench_spec, "experiment spec JSON")->required();
    bench->add_option("--out", bench_out, "output directory");
    bench->add_option("--trials", bench_trials, "override trial count");
    bench->add_option("--seed", bench_seed, "override base seed");
    bench->add_option("--threads", bench_threads, "worker threads");
    bench->add_flag("--no-curves", bench_no_curves, "skip convergence curves");

    std::string check_suite;
    std::uint64_t check_seed = 20240801;
    std::string check_inject;
    auto* check = app.add_subcommand("check", "run the invariant suites");
    check->add_option("--suite", check_suite, "run one suite: smoothing | prox | energy");
    check->add_option("--seed", check_seed, "probe seed");
    check->add_option("--inject-fault", check_inject,
                      "fault injection for self-testing (kappa-zero)");

    CLI11_PARSE(app, argc, argv);

    try {
        if (solve->parsed()) {
            if (solve_args.instance_dir.empty() && (solve_args.m <= 0 || solve_args.n <= 0)) {
                std::cerr << "sapg: solve needs --instance or inline --m/--n/--spar\n";
                return 1;
            }
            return cmd_solve(solve_args);
        }
        if (gen->parsed()) {
            gen_spec.kind = sapg::instance_kind_from_string(gen_kind);
            return cmd_gen(gen_spec, gen_out);
        }
        if (bench->parsed()) {
            return cmd_bench(bench_spec, bench_out, bench_trials, bench_seed, bench_threads,
                             bench_no_curves);
        }
        if (check->parsed()) {
            return cmd_check(check_suite, check_seed, check_inject);
        }
    } catch (const std::exception& e) {
        std::cerr << "sapg: " << e.what() << "\n";
        return 1;
    }
    return 1;
}
