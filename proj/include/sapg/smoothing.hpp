#pragma once

#include <memory>
#include <optional>

#include "sapg/linalg.hpp"

// Smoothing-function calculus. Each smoothable loss c exposes its exact
// nonsmooth value, a C^1 convex-in-x surrogate c~(., mu) for mu > 0, the
// surrogate's gradient, and (when known) the constants kappa and L:
//
//   |c~(x, mu2) - c~(x, mu1)| <= kappa * |mu1 - mu2|
//   grad c~(., mu) is Lipschitz with modulus L / mu
//
// which together give the envelope |c~(x, mu) - c(x)| <= kappa * mu.
// The constants are never used when solving; they feed the diagnostics
// and the fixed-step inexact solver.

namespace sapg {

struct SmoothingConstants {
    double kappa;             // envelope slope, >= 0
    double lipschitz_factor;  // L, > 0
};

struct ScalarSmooth {
    double value;
    double derivative;
};

// Huber-style smoothing of |z|: |z| outside the band |z| <= mu, else
// z^2/(2 mu) + mu/2. Both branches agree at |z| = mu.
ScalarSmooth smoothed_abs(double z, double mu);

// Smoothing of max{z, 0}: untouched outside |z| <= mu, else (z+mu)^2/(4 mu).
ScalarSmooth smoothed_plus(double z, double mu);

class SmoothableLoss {
public:
    virtual ~SmoothableLoss() = default;

    virtual double exact_value(const Vector& x) const = 0;
    virtual double smooth_value(const Vector& x, double mu) const = 0;
    virtual Vector smooth_gradient(const Vector& x, double mu) const = 0;
    virtual std::optional<SmoothingConstants> constants() const = 0;
    virtual std::size_t dimension() const = 0;
};

using LossPtr = std::shared_ptr<const SmoothableLoss>;

// c(x) = ||Ax - b||_1, smoothed termwise with smoothed_abs.
// kappa = m/2, L = ||A||_2^2.
LossPtr l1_affine_loss(DenseMatrix A, Vector b);

// c(x) = ||max{Ax, 0} - b||_1, smoothed as sum_i abs~(plus~(A_i x) - b_i).
// kappa = 3m/4, L = (3/2) ||A||_2^2.
LossPtr censored_affine_loss(DenseMatrix A, Vector b);

// Exact-penalty hinge over affine constraints H x <= d:
// c(x) = lam * sum_i max{H_i x - d_i, 0}, smoothed termwise with smoothed_plus.
// kappa = lam * r / 4, L = lam * ||H||_2^2 / 2.
LossPtr hinge_penalty_loss(double lam, DenseMatrix H, Vector d);

}  // namespace sapg
