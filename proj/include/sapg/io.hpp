#pragma once

#include <string>

#include "sapg/datagen.hpp"
#include "sapg/model.hpp"

// File formats, shared by the CLI and the benchmark runner:
//   instance dir: A.csv (row-major, one matrix row per line), b.csv and
//                 x_true.csv (one value per line), spec.json;
//   trace.csv:    k,mu,gamma,f_exact,f_smooth,residual,step_norm,backtracks,time_s;
//   result.json:  x_final, iterations, stop_reason.
// Doubles are printed with %.17g so equal values serialize to equal bytes.

namespace sapg {

std::string format_double(double v);

void write_instance(const std::string& dir, const Instance& instance);
Instance read_instance(const std::string& dir);

void write_trace_csv(const std::string& path, const SolveTrace& trace);
void write_result_json(const std::string& path, const SolveResult& result);

// Solver configuration as JSON. Field names mirror the struct exactly
// (mu0, gamma0, eta, alpha, sigma, maxiter, eps, zeta, extrapolate, x0,
// smoothed_residual); unknown keys are rejected. x0 may be omitted, in
// which case the caller's default (0.1 * ones) survives.
SolverConfig parse_config_json(const std::string& text, const SolverConfig& base);
SolverConfig load_config_file(const std::string& path, const SolverConfig& base);

// One "key=value" override onto a config; throws on unknown keys or
// malformed values. Keys are the JSON field names.
void apply_override(SolverConfig& cfg, const std::string& key_equals_value);

std::string read_text_file(const std::string& path);
void write_text_file(const std::string& path, const std::string& content);

}  // namespace sapg
