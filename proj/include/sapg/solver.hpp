#pragma once

#include <functional>

#include "sapg/model.hpp"

// The accelerated smoothing loop and its variants.
//
// Per pass k = 0, 1, 2, ...:
//   y^k      = x^k + (k-1)/(k+alpha-1) (x^k - x^{k-1})   (0 when not extrapolating)
//   mu_{k+1} = mu0 / ((k+alpha-1) ln^sigma(k+alpha-1))
//   x^{k+1}  = prox_{gamma mu_{k+1} g}(y^k - gamma mu_{k+1} grad c~(y^k, mu_{k+1}))
// with gamma found by backtracking (warm-started at the previous value, so
// the accepted sequence is non-increasing), or held at 1/L in the inexact
// fixed-step variant. The run stops once the prox-gradient residual and
// mu_{k+1} both fall below eps, or after maxiter passes. Reported
// iterations equal the 0-based pass counter at the stop.

namespace sapg {

// Deterministic gradient perturbation for the inexact solver: k -> eps_k.
using ErrorOracle = std::function<Vector(int k)>;

struct BacktrackOutcome {
    double accepted_gamma = 0.0;
    Vector candidate;
    int attempts = 0;  // >= 1; attempts-1 step-scale reductions happened
};

// mu_{k+1} for pass k (k >= 0). Strictly decreasing; well-defined because
// alpha > 3 keeps the logarithm positive.
double mu_schedule(const SolverConfig& cfg, int k);

// y^k. The starting convention x^{-1} = x^0 makes the k=0 coefficient
// (which is negative) act on a zero difference, so y^0 = x^0 structurally.
Vector extrapolate(const Vector& x_k, const Vector& x_prev, int k, double alpha, bool enabled);

// Shrinks gamma_hat geometrically from gamma_start until the candidate
//   x^ = prox_{gamma^ mu g}(y - gamma^ mu grad c~(y, mu))
// satisfies the quadratic descent test
//   c~(x^, mu) <= c~(y, mu) + <grad c~(y, mu), x^ - y> + ||x^ - y||^2 / (2 gamma^ mu).
// Finite because the test holds whenever 1/gamma^ >= L. Throws after 100
// attempts, which indicates a loss whose gradient is not Lipschitz.
BacktrackOutcome backtrack(const SmoothableLoss& loss, const ProximablePart& reg,
                           const Vector& y, double mu, double gamma_start, double eta);

// Prox-gradient residual ||x - prox_{zeta g}(x - zeta grad c~(x, mu))||_inf.
// Zero exactly at minimizers of c~(., mu) + g over the box. When
// smoothed_variant is set, reproduces the printed rule instead: the l1
// penalty is smoothed too and the probe point merely box-projected.
double residual(const CompositeProblem& prob, const Vector& x, double mu, double zeta,
                bool smoothed_variant = false);

SolveResult sapg_solve(const CompositeProblem& prob, const SolverConfig& cfg);

// Same loop with extrapolation disabled, whatever cfg.extrapolate says.
SolveResult spg_solve(const CompositeProblem& prob, const SolverConfig& cfg);

// Fixed step gamma = 1/lipschitz, no backtracking, gradient perturbed by
// errs(k) before the prox step. Requires the loss to publish its constants.
SolveResult isapg_solve(const CompositeProblem& prob, const SolverConfig& cfg,
                        double lipschitz, const ErrorOracle& errs);

// Weight mu_{k+1} (k+alpha-1) = mu0 ln^{-sigma}(k+alpha-1) appearing in the
// inexact method's error condition sum_k weight * ||eps_k|| < infinity.
double isapg_error_weight(const SolverConfig& cfg, int k);

}  // namespace sapg
