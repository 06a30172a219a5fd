#pragma once

#include "sapg/linalg.hpp"

// Proximal machinery for the g-plus-constraint part of the objective:
// the box-constrained proximal mapping
//
//   prox_{theta g}(y) = argmin_{x in X} { theta g(x) + 1/2 ||x - y||^2 }
//
// in closed form for the separable cases used here. Each coordinate
// problem is 1-D convex, so the constrained minimizer is the clamp of the
// unconstrained one.

namespace sapg {

// Componentwise bounds; entries may be +-infinity.
struct Box {
    Vector lower;
    Vector upper;

    static Box uniform(std::size_t n, double lo, double hi);
    static Box unbounded(std::size_t n);

    std::size_t size() const { return lower.size(); }
    bool contains(const Vector& x) const;
    void validate() const;  // throws on lower > upper or length mismatch
};

struct ProximablePart {
    enum class Kind { zero, scaled_l1 };

    Kind kind = Kind::zero;
    double lambda = 0.0;  // used by scaled_l1 only, >= 0
    Box box;

    static ProximablePart zero(Box box);
    static ProximablePart scaled_l1(double lambda, Box box);

    // g(x): lambda * ||x||_1 for scaled_l1, 0 for zero. The box indicator
    // is not included; callers only evaluate at feasible points.
    double value(const Vector& x) const;
};

Vector project_box(const Box& box, const Vector& x);

// The constrained proximal step. theta is the composite scale (the solver
// passes gamma * mu); for scaled_l1 the soft threshold is theta * lambda.
Vector prox_step(const ProximablePart& g, const Vector& y, double theta);

}  // namespace sapg
