#pragma once

#include <string>

#include "sapg/solver.hpp"

// Lyapunov and rate quantities computed from a solve. The optimum is not
// available analytically for the generated instances, so every quantity is
// anchored to a numerical reference (a longer, tighter run) and tests carry
// tolerances scaled by the reference's own uncertainty.

namespace sapg {

struct ReferenceSolution {
    Vector x_star;
    double f_star = 0.0;
    double uncertainty = 0.0;  // objective oscillation over the tail of the run
};

struct EnergySnapshot {
    int k = 0;
    double W = 0.0;
    Vector u;
    double E = 0.0;
};

// W_k = c~(x^k, mu_k) + g(x^k) + kappa mu_k - f_star.
double w_term(const CompositeProblem& prob, const Vector& x_k, double mu_k, double kappa,
              const ReferenceSolution& ref);

// u^k = ((k+alpha-2)/(alpha-1)) x^k - ((k-1)/(alpha-1)) x^{k-1}, k >= 1.
Vector u_point(const Vector& x_k, const Vector& x_prev, int k, double alpha);

// E_k = (2 gamma_k mu_k / (alpha-1)) (k+alpha-2)^2 W_k
//     + (alpha-1) ||u^k - x_star||^2
//     + (4 kappa gamma0 mu0 / (2 sigma - 1)) mu_k (k+alpha-2) ln^{1-sigma}(k+alpha-2).
EnergySnapshot energy(const CompositeProblem& prob, int k, const Vector& x_k,
                      const Vector& x_prev, double mu_k, double gamma_k,
                      const SolverConfig& cfg, double kappa, const ReferenceSolution& ref);

// r_k = (k+alpha-2) ln^{-sigma}(k+alpha-1) (f_k - f_star), k >= 1.
double rate_statistic(double f_k, int k, double alpha, double sigma,
                      const ReferenceSolution& ref);

// Reference run: the accelerated solver with eps/100 and 10x maxiter.
// f_star is the best exact objective seen; uncertainty is the objective
// oscillation over the last tenth of the run.
ReferenceSolution compute_reference(const CompositeProblem& prob, const SolverConfig& cfg);

// Pulls kappa from the loss constants; throws if the loss does not publish
// them (they are analysis-only data, never needed for solving).
double require_kappa(const CompositeProblem& prob);

// Per-iterate series k, W, E, rate_stat, step_norm over a recorded run.
// Requires result.iterates (record_iterates was set).
struct DiagnosticsRow {
    int k;
    double W;
    double E;
    double rate_stat;
    double step_norm;
};

std::vector<DiagnosticsRow> energy_series(const CompositeProblem& prob, const SolverConfig& cfg,
                                          const SolveResult& result,
                                          const ReferenceSolution& ref);

void write_diagnostics_csv(const std::string& path, const std::vector<DiagnosticsRow>& rows);

}  // namespace sapg
