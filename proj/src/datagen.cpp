#include "sapg/datagen.hpp"

#include <cmath>
#include <stdexcept>
#include <utility>

#include "sapg/rng.hpp"

namespace sapg {

int InstanceSpec::sparse_count() const { return static_cast<int>(std::floor(spar * n + 0.5)); }

void InstanceSpec::validate() const {
    if (m < 1) throw std::invalid_argument("InstanceSpec: m must be >= 1");
    if (n < 1) throw std::invalid_argument("InstanceSpec: n must be >= 1");
    if (!(spar > 0.0 && spar <= 1.0)) {
        throw std::invalid_argument("InstanceSpec: spar must lie in (0,1]");
    }
    if (sparse_count() < 1) throw std::invalid_argument("InstanceSpec: round(spar*n) must be >= 1");
    if (!(noise_scale >= 0.0)) throw std::invalid_argument("InstanceSpec: noise_scale must be >= 0");
    if (kind == InstanceKind::linear_l1 && m > n) {
        throw std::invalid_argument("InstanceSpec: linear_l1 requires m <= n");
    }
}

Instance gen_instance(const InstanceSpec& spec) {
    spec.validate();
    Rng rng(spec.seed);

    const std::size_t m = static_cast<std::size_t>(spec.m);
    const std::size_t n = static_cast<std::size_t>(spec.n);

    Vector raw(m * n);
    for (double& v : raw) v = rng.normal();
    const DenseMatrix B(m, n, std::move(raw));
    DenseMatrix A;
    if (m <= n) {
        A = orthonormalize_rows(B);
    } else {
        A = orthonormalize_rows(B.transposed()).transposed();
    }

    Vector x_true(n);
    for (double& v : x_true) v = rng.uniform01();
    const std::size_t s = static_cast<std::size_t>(spec.sparse_count());
    for (std::size_t i = 0; i < n - s; ++i) x_true[i] = 0.0;
    for (std::size_t i = n - 1; i > 0; --i) {
        const std::size_t j = static_cast<std::size_t>(rng.next_below(i + 1));
        std::swap(x_true[i], x_true[j]);
    }

    Vector b = matvec(A, x_true);
    for (double& v : b) {
        v += spec.noise_scale * rng.uniform01();
        if (spec.kind == InstanceKind::censored) v = std::max(v, 0.0);
    }

    return Instance{spec, std::move(A), std::move(b), std::move(x_true)};
}

CompositeProblem objective_for(const Instance& instance) {
    const std::size_t n = instance.A.cols();
    CompositeProblem prob;
    prob.reg = ProximablePart::scaled_l1(0.01, Box::uniform(n, 0.0, 1.0));
    if (instance.spec.kind == InstanceKind::linear_l1) {
        prob.loss = l1_affine_loss(instance.A, instance.b);
    } else {
        prob.loss = censored_affine_loss(instance.A, instance.b);
    }
    return prob;
}

const char* to_string(InstanceKind k) {
    return k == InstanceKind::linear_l1 ? "linear_l1" : "censored";
}

InstanceKind instance_kind_from_string(const std::string& s) {
    if (s == "linear_l1") return InstanceKind::linear_l1;
    if (s == "censored") return InstanceKind::censored;
    throw std::invalid_argument("unknown instance kind: " + s);
}

}  // namespace sapg
