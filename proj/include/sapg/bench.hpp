#pragma once

#include <cstdint>
#include <string>
#include <utility>
#include <vector>

#include "sapg/datagen.hpp"
#include "sapg/model.hpp"

// Experiment runner: per-cell means over seeded trials, plus convergence
// curves for a selected cell. Per-trial seeds derive from the base seed by
// hashing the cell index and trial index through splitmix64, so a whole
// experiment is reproducible from one number. Wall time covers the solve
// call only, never data generation, and the time columns carry no
// determinism guarantee; everything else in the emitted files is
// byte-stable for a fixed spec and seed.

namespace sapg {

enum class Algorithm { sapg, spg, isapg };

const char* to_string(Algorithm a);
Algorithm algorithm_from_string(const std::string& s);

struct ExperimentSpec {
    std::vector<std::pair<int, int>> sizes;  // (m, n) grid
    std::vector<double> spars;
    int trials = 50;
    SolverConfig config;  // x0 is rebuilt per instance dimension
    std::vector<Algorithm> algorithms;
    std::uint64_t base_seed = 0;
    InstanceKind kind = InstanceKind::linear_l1;
    int threads = 1;

    void validate() const;
};

struct TrialRecord {
    int m = 0;
    int n = 0;
    double spar = 0.0;
    Algorithm algorithm = Algorithm::sapg;
    int trial = 0;
    int iterations = 0;
    double time_s = 0.0;
    double f_final = 0.0;
    bool failed = false;
    std::string error;
};

struct TableRow {
    int m = 0;
    int n = 0;
    double spar = 0.0;
    Algorithm algorithm = Algorithm::sapg;
    double mean_iter = 0.0;
    double mean_time_s = 0.0;
    int completed_trials = 0;
    bool partial = false;  // some trial in the cell failed
};

struct TableOutput {
    std::vector<TrialRecord> raw;
    std::vector<TableRow> table;
};

std::uint64_t derive_trial_seed(std::uint64_t base_seed, std::size_t cell_index, int trial);

TableOutput run_table(const ExperimentSpec& spec);

struct CurveSeries {
    Algorithm algorithm = Algorithm::sapg;
    std::vector<double> f_gap;  // indexed by k = 0..iterations, floored at 1e-16
};

struct CurveOutput {
    double f_min = 0.0;
    std::vector<CurveSeries> series;
};

// Curves for one cell and one trial seed. Exactly two algorithms must be
// selected: f_min is the smaller of their final objectives, and each series
// holds f(x^k) - f_min for k = 0..iterations.
CurveOutput run_curves(const ExperimentSpec& spec, int m, int n, double spar, int trial = 0);

// Writes tables/raw.csv, tables/summary.csv, curves/<cell>/<algo>.csv for
// every grid cell, and manifest.json under out_dir.
void run_experiment_to_dir(const ExperimentSpec& spec, const std::string& out_dir,
                           bool with_curves = true);

ExperimentSpec parse_experiment_json(const std::string& text);

}  // namespace sapg
