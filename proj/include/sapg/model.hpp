#pragma once

#include <string>
#include <vector>

#include "sapg/prox.hpp"
#include "sapg/smoothing.hpp"

namespace sapg {

// min over the box: loss(x) + reg(x).
struct CompositeProblem {
    LossPtr loss;
    ProximablePart reg;

    std::size_t dimension() const { return loss ? loss->dimension() : 0; }
    // Exact objective f(x) = c(x) + g(x) at a feasible point.
    double objective(const Vector& x) const { return loss->exact_value(x) + reg.value(x); }
    double smooth_objective(const Vector& x, double mu) const {
        return loss->smooth_value(x, mu) + reg.value(x);
    }
};

struct SolverConfig {
    double mu0 = 0.8;       // initial smoothing parameter
    double gamma0 = 1.0;    // initial step scale
    double eta = 0.5;       // backtracking shrink factor, in (0,1)
    double alpha = 4.0;     // extrapolation offset, > 3
    double sigma = 0.75;    // schedule exponent, in (1/2, 1]
    int maxiter = 15000;
    double eps = 1e-3;      // stopping tolerance
    double zeta = 3e-3;     // residual probe step
    bool extrapolate = true;   // true = accelerated, false = plain
    Vector x0;

    // The printed stopping rule smooths the whole objective, penalty
    // included, before projecting; the default uses the prox-gradient
    // residual instead. Kept for A/B comparison.
    bool smoothed_residual = false;
    // Keep every iterate in the result (for energy diagnostics).
    bool record_iterates = false;
};

// The experiment defaults: mu0=0.8, gamma0=1, eta=1/2, alpha=4, sigma=3/4,
// maxiter=15000, eps=1e-3, zeta=3e-3, x0 = 0.1 * ones(n).
SolverConfig default_config(std::size_t n);

// Field-by-field invariant check. Returns one message per violation,
// each prefixed with the field name; empty means valid.
std::vector<std::string> validate(const SolverConfig& cfg, const CompositeProblem& prob);

struct TraceRow {
    int k = 0;              // iterate index: row k holds x^k
    double mu = 0.0;        // mu_k (mu0 for the starting row)
    double gamma = 0.0;     // gamma_k
    double f_exact = 0.0;   // f(x^k)
    double f_smooth = 0.0;  // c~(x^k, mu_k) + g(x^k)
    double residual = 0.0;  // prox-gradient residual at (x^k, mu_k)
    double step_norm = 0.0; // ||x^k - x^{k-1}||
    int backtracks = 0;     // step-scale reductions while producing x^k
    double time_s = 0.0;    // wall time since solve start
};

struct SolveTrace {
    std::vector<TraceRow> rows;
};

enum class StopReason { residual_met, maxiter };

struct SolveResult {
    Vector x_final;
    int iterations = 0;  // 0-based loop counter at the stop
    StopReason stop_reason = StopReason::maxiter;
    SolveTrace trace;

    // Best exact objective seen and where; tracked because the
    // extrapolated iteration is not monotone in f.
    Vector x_best;
    double f_best = 0.0;

    // Filled only when cfg.record_iterates: x^0 .. x^last.
    std::vector<Vector> iterates;
};

const char* to_string(StopReason r);

}  // namespace sapg
