#include "sapg/bench.hpp"

#include <atomic>
#include <chrono>
#include <cmath>
#include <filesystem>
#include <sstream>
#include <stdexcept>
#include <thread>

#include "json.hpp"

#include "sapg/io.hpp"
#include "sapg/rng.hpp"
#include "sapg/solver.hpp"
#include "sapg/version.hpp"

namespace sapg {

namespace fs = std::filesystem;
using nlohmann::json;

const char* to_string(Algorithm a) {
    switch (a) {
        case Algorithm::sapg: return "sapg";
        case Algorithm::spg: return "spg";
        default: return "isapg";
    }
}

Algorithm algorithm_from_string(const std::string& s) {
    if (s == "sapg") return Algorithm::sapg;
    if (s == "spg") return Algorithm::spg;
    if (s == "isapg") return Algorithm::isapg;
    throw std::invalid_argument("unknown algorithm: " + s);
}

void ExperimentSpec::validate() const {
    if (sizes.empty()) throw std::invalid_argument("experiment: sizes grid is empty");
    if (spars.empty()) throw std::invalid_argument("experiment: spar list is empty");
    if (trials < 1) throw std::invalid_argument("experiment: trials must be >= 1");
    if (algorithms.empty()) throw std::invalid_argument("experiment: no algorithms selected");
    if (threads < 1) throw std::invalid_argument("experiment: threads must be >= 1");
}

std::uint64_t derive_trial_seed(std::uint64_t base_seed, std::size_t cell_index, int trial) {
    std::uint64_t h = base_seed;
    (void)splitmix64(h);
    h ^= 0x9E3779B97F4A7C15ULL * (cell_index + 1);
    (void)splitmix64(h);
    h ^= 0xC2B2AE3D27D4EB4FULL * (static_cast<std::uint64_t>(trial) + 1);
    return splitmix64(h);
}

namespace {

SolveResult solve_with(Algorithm algo, const CompositeProblem& prob, const SolverConfig& cfg) {
    switch (algo) {
        case Algorithm::sapg:
            return sapg_solve(prob, cfg);
        case Algorithm::spg:
            return spg_solve(prob, cfg);
        default: {
            const auto constants = prob.loss->constants();
            if (!constants) {
                throw std::invalid_argument("isapg needs the loss smoothing constants");
            }
            return isapg_solve(prob, cfg, constants->lipschitz_factor,
                               ErrorOracle{});  // exact gradients
        }
    }
}

SolverConfig config_for_dimension(const ExperimentSpec& spec, std::size_t n) {
    SolverConfig cfg = spec.config;
    if (cfg.x0.size() != n) cfg.x0.assign(n, 0.1);
    return cfg;
}

struct CellJob {
    std::size_t cell_index;
    int m;
    int n;
    double spar;
};

std::vector<CellJob> grid_cells(const ExperimentSpec& spec) {
    std::vector<CellJob> cells;
    std::size_t idx = 0;
    for (const auto& [m, n] : spec.sizes) {
        for (double spar : spec.spars) {
            cells.push_back(CellJob{idx++, m, n, spar});
        }
    }
    return cells;
}

std::string cell_dir_name(int m, int n, double spar) {
    std::ostringstream os;
    os << "m" << m << "_n" << n << "_spar" << static_cast<int>(std::lround(spar * 100));
    return os.str();
}

}  // namespace

TableOutput run_table(const ExperimentSpec& spec) {
    spec.validate();
    const std::vector<CellJob> cells = grid_cells(spec);
    const std::size_t per_cell = spec.algorithms.size() * static_cast<std::size_t>(spec.trials);

    TableOutput out;
    out.raw.assign(cells.size() * per_cell, TrialRecord{});

    // Trials are independent; workers fill pre-assigned slots so the output
    // order never depends on scheduling.
    std::atomic<std::size_t> next_job{0};
    const std::size_t total_jobs = cells.size() * static_cast<std::size_t>(spec.trials);

    auto worker = [&]() {
        for (;;) {
            const std::size_t job = next_job.fetch_add(1);
            if (job >= total_jobs) return;
            const CellJob& cell = cells[job / spec.trials];
            const int trial = static_cast<int>(job % spec.trials);

            InstanceSpec ispec;
            ispec.m = cell.m;
            ispec.n = cell.n;
            ispec.spar = cell.spar;
            ispec.kind = spec.kind;
            ispec.seed = derive_trial_seed(spec.base_seed, cell.cell_index, trial);

            Instance instance;
            CompositeProblem prob;
            bool generated = true;
            std::string gen_error;
            try {
                instance = gen_instance(ispec);
                prob = objective_for(instance);
            } catch (const std::exception& e) {
                generated = false;
                gen_error = e.what();
            }
            const SolverConfig cfg = config_for_dimension(spec, static_cast<std::size_t>(cell.n));

            for (std::size_t a = 0; a < spec.algorithms.size(); ++a) {
                TrialRecord rec;
                rec.m = cell.m;
                rec.n = cell.n;
                rec.spar = cell.spar;
                rec.algorithm = spec.algorithms[a];
                rec.trial = trial;
                if (!generated) {
                    rec.failed = true;
                    rec.error = gen_error;
                } else {
                    try {
                        const auto t0 = std::chrono::steady_clock::now();
                        const SolveResult res = solve_with(spec.algorithms[a], prob, cfg);
                        rec.time_s = std::chrono::duration<double>(
                                         std::chrono::steady_clock::now() - t0)
                                         .count();
                        rec.iterations = res.iterations;
                        rec.f_final = res.trace.rows.back().f_exact;
                    } catch (const std::exception& e) {
                        rec.failed = true;
                        rec.error = e.what();
                    }
                }
                out.raw[cell.cell_index * per_cell + a * spec.trials + trial] = rec;
            }
        }
    };

    if (spec.threads <= 1) {
        worker();
    } else {
        std::vector<std::thread> pool;
        for (int t = 0; t < spec.threads; ++t) pool.emplace_back(worker);
        for (auto& th : pool) th.join();
    }

    // Aggregate in deterministic (cell, algorithm) order.
    for (const CellJob& cell : cells) {
        for (std::size_t a = 0; a < spec.algorithms.size(); ++a) {
            TableRow row;
            row.m = cell.m;
            row.n = cell.n;
            row.spar = cell.spar;
            row.algorithm = spec.algorithms[a];
            double iter_sum = 0.0;
            double time_sum = 0.0;
            for (int t = 0; t < spec.trials; ++t) {
                const TrialRecord& rec =
                    out.raw[cell.cell_index * per_cell + a * spec.trials + t];
                if (rec.failed) {
                    row.partial = true;
                    continue;
                }
                iter_sum += rec.iterations;
                time_sum += rec.time_s;
                ++row.completed_trials;
            }
            if (row.completed_trials > 0) {
                row.mean_iter = iter_sum / row.completed_trials;
                row.mean_time_s = time_sum / row.completed_trials;
            }
            out.table.push_back(row);
        }
    }
    return out;
}

CurveOutput run_curves(const ExperimentSpec& spec, int m, int n, double spar, int trial) {
    spec.validate();
    if (spec.algorithms.size() != 2) {
        throw std::invalid_argument("run_curves: exactly two algorithms must be selected");
    }

    std::size_t cell_index = 0;
    bool found = false;
    for (const CellJob& cell : grid_cells(spec)) {
        if (cell.m == m && cell.n == n && cell.spar == spar) {
            cell_index = cell.cell_index;
            found = true;
            break;
        }
    }
    if (!found) throw std::invalid_argument("run_curves: cell not in the experiment grid");

    InstanceSpec ispec;
    ispec.m = m;
    ispec.n = n;
    ispec.spar = spar;
    ispec.kind = spec.kind;
    ispec.seed = derive_trial_seed(spec.base_seed, cell_index, trial);
    const Instance instance = gen_instance(ispec);
    const CompositeProblem prob = objective_for(instance);
    const SolverConfig cfg = config_for_dimension(spec, static_cast<std::size_t>(n));

    SolveResult results[2] = {solve_with(spec.algorithms[0], prob, cfg),
                              solve_with(spec.algorithms[1], prob, cfg)};

    CurveOutput out;
    // The plotted baseline: the smaller of the two objectives at the last
    // iterate each curve reports (k = iterations).
    double f_min = 0.0;
    for (int i = 0; i < 2; ++i) {
        const auto& rows = results[i].trace.rows;
        const std::size_t last = static_cast<std::size_t>(results[i].iterations);
        const double f_stop = rows[std::min(last, rows.size() - 1)].f_exact;
        f_min = (i == 0) ? f_stop : std::min(f_min, f_stop);
    }
    out.f_min = f_min;

    constexpr double kFloor = 1e-16;
    for (int i = 0; i < 2; ++i) {
        CurveSeries series;
        series.algorithm = spec.algorithms[i];
        const auto& rows = results[i].trace.rows;
        const std::size_t len =
            std::min(static_cast<std::size_t>(results[i].iterations) + 1, rows.size());
        series.f_gap.reserve(len);
        for (std::size_t k = 0; k < len; ++k) {
            series.f_gap.push_back(std::max(rows[k].f_exact - f_min, kFloor));
        }
        out.series.push_back(std::move(series));
    }
    return out;
}

void run_experiment_to_dir(const ExperimentSpec& spec, const std::string& out_dir,
                           bool with_curves) {
    spec.validate();
    fs::create_directories(out_dir + "/tables");

    const TableOutput result = run_table(spec);

    std::ostringstream raw;
    raw << "m,n,spar,algorithm,trial,iter,time_s,f_final\n";
    for (const auto& r : result.raw) {
        raw << r.m << "," << r.n << "," << format_double(r.spar) << "," << to_string(r.algorithm)
            << "," << r.trial << ",";
        if (r.failed) {
            raw << "error,error,error\n";
        } else {
            raw << r.iterations << "," << format_double(r.time_s) << ","
                << format_double(r.f_final) << "\n";
        }
    }
    write_text_file(out_dir + "/tables/raw.csv", raw.str());

    std::ostringstream table;
    table << "m,n,spar,algorithm,mean_iter,mean_time_s,completed_trials,partial\n";
    for (const auto& row : result.table) {
        table << row.m << "," << row.n << "," << format_double(row.spar) << ","
              << to_string(row.algorithm) << "," << format_double(row.mean_iter) << ","
              << format_double(row.mean_time_s) << "," << row.completed_trials << ","
              << (row.partial ? 1 : 0) << "\n";
    }
    write_text_file(out_dir + "/tables/summary.csv", table.str());

    if (with_curves && spec.algorithms.size() == 2) {
        for (const auto& [m, n] : spec.sizes) {
            for (double spar : spec.spars) {
                const CurveOutput curves = run_curves(spec, m, n, spar, 0);
                const std::string dir =
                    out_dir + "/curves/" + cell_dir_name(m, n, spar);
                fs::create_directories(dir);
                for (const auto& series : curves.series) {
                    std::ostringstream cs;
                    cs << "k,f_gap\n";
                    for (std::size_t k = 0; k < series.f_gap.size(); ++k) {
                        cs << k << "," << format_double(series.f_gap[k]) << "\n";
                    }
                    write_text_file(dir + "/" + to_string(series.algorithm) + ".csv", cs.str());
                }
            }
        }
    }

    json manifest;
    manifest["version"] = kVersion;
    manifest["base_seed"] = spec.base_seed;
    manifest["kind"] = to_string(spec.kind);
    manifest["trials"] = spec.trials;
    manifest["sizes"] = spec.sizes;
    manifest["spars"] = spec.spars;
    {
        json algos = json::array();
        for (Algorithm a : spec.algorithms) algos.push_back(to_string(a));
        manifest["algorithms"] = algos;
    }
    write_text_file(out_dir + "/manifest.json", manifest.dump(2) + "\n");
}

ExperimentSpec parse_experiment_json(const std::string& text) {
    const json j = json::parse(text);
    ExperimentSpec spec;
    for (const auto& pair : j.at("sizes")) {
        spec.sizes.emplace_back(pair.at(0).get<int>(), pair.at(1).get<int>());
    }
    spec.spars = j.at("spars").get<std::vector<double>>();
    if (j.contains("trials")) spec.trials = j.at("trials").get<int>();
    if (j.contains("base_seed")) spec.base_seed = j.at("base_seed").get<std::uint64_t>();
    if (j.contains("kind")) spec.kind = instance_kind_from_string(j.at("kind").get<std::string>());
    if (j.contains("threads")) spec.threads = j.at("threads").get<int>();
    if (j.contains("algorithms")) {
        for (const auto& a : j.at("algorithms")) {
            spec.algorithms.push_back(algorithm_from_string(a.get<std::string>()));
        }
    } else {
        spec.algorithms = {Algorithm::sapg, Algorithm::spg};
    }
    if (j.contains("config")) {
        spec.config = parse_config_json(j.at("config").dump(), spec.config);
    }
    spec.validate();
    return spec;
}

}  // namespace sapg
