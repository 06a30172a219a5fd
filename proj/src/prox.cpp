#include "sapg/prox.hpp"

#include <cmath>
#include <limits>
#include <stdexcept>

namespace sapg {

namespace {

constexpr double kInf = std::numeric_limits<double>::infinity();

double clamp(double v, double lo, double hi) { return std::min(std::max(v, lo), hi); }

double soft_threshold(double v, double t) {
    if (v > t) return v - t;
    if (v < -t) return v + t;
    return 0.0;
}

}  // namespace

Box Box::uniform(std::size_t n, double lo, double hi) {
    Box b{Vector(n, lo), Vector(n, hi)};
    b.validate();
    return b;
}

Box Box::unbounded(std::size_t n) { return Box{Vector(n, -kInf), Vector(n, kInf)}; }

bool Box::contains(const Vector& x) const {
    if (x.size() != lower.size()) return false;
    for (std::size_t i = 0; i < x.size(); ++i) {
        if (x[i] < lower[i] || x[i] > upper[i]) return false;
    }
    return true;
}

void Box::validate() const {
    if (lower.size() != upper.size()) {
        throw std::invalid_argument("Box: bound length mismatch");
    }
    for (std::size_t i = 0; i < lower.size(); ++i) {
        if (std::isnan(lower[i]) || std::isnan(upper[i]) || lower[i] > upper[i]) {
            throw std::invalid_argument("Box: requires lower <= upper componentwise");
        }
    }
}

ProximablePart ProximablePart::zero(Box box) {
    box.validate();
    return ProximablePart{Kind::zero, 0.0, std::move(box)};
}

ProximablePart ProximablePart::scaled_l1(double lambda, Box box) {
    if (!(lambda >= 0.0)) throw std::invalid_argument("ProximablePart: lambda must be >= 0");
    box.validate();
    return ProximablePart{Kind::scaled_l1, lambda, std::move(box)};
}

double ProximablePart::value(const Vector& x) const {
    if (kind == Kind::zero) return 0.0;
    return lambda * norm1(x);
}

Vector project_box(const Box& box, const Vector& x) {
    if (x.size() != box.size()) {
        throw std::invalid_argument("project_box: dimension mismatch");
    }
    Vector r(x.size());
    for (std::size_t i = 0; i < x.size(); ++i) r[i] = clamp(x[i], box.lower[i], box.upper[i]);
    return r;
}

Vector prox_step(const ProximablePart& g, const Vector& y, double theta) {
    if (!(theta > 0.0)) throw std::invalid_argument("prox_step: theta must be positive");
    if (y.size() != g.box.size()) {
        throw std::invalid_argument("prox_step: dimension mismatch");
    }
    if (g.kind == ProximablePart::Kind::zero) return project_box(g.box, y);

    const double t = theta * g.lambda;
    Vector r(y.size());
    for (std::size_t i = 0; i < y.size(); ++i) {
        r[i] = clamp(soft_threshold(y[i], t), g.box.lower[i], g.box.upper[i]);
    }
    return r;
}

}  // namespace sapg
