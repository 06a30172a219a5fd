#pragma once

#include <cstdint>

#include "sapg/model.hpp"

// Seeded generation of the benchmark instances. All draws come from the
// xoshiro256++ stream in a fixed order, so instances are bit-identical for
// a given spec on any platform:
//   1. B: m*n standard normals, row-major (Box-Muller over the stream);
//   2. x_true: n uniforms in [0,1);
//   3. the first n-s entries of x_true are zeroed, then the whole vector is
//      shuffled with Fisher-Yates (rejection-sampled indices);
//   4. noise: m uniforms in [0,1), scaled by noise_scale.
// A is B with rows orthonormalized when m <= n; for m > n the transposed
// procedure is used and A has orthonormal columns instead.
// b = A x_true + noise for linear_l1, componentwise max(A x_true + noise, 0)
// for censored.

namespace sapg {

enum class InstanceKind { linear_l1, censored };

struct InstanceSpec {
    int m = 0;
    int n = 0;
    double spar = 0.0;  // sparsity level in (0, 1]; s = round(spar*n), ties up
    std::uint64_t seed = 0;
    double noise_scale = 0.01;
    InstanceKind kind = InstanceKind::linear_l1;

    int sparse_count() const;  // s
    void validate() const;     // throws on an invalid spec
};

struct Instance {
    InstanceSpec spec;
    DenseMatrix A;
    Vector b;
    Vector x_true;
};

Instance gen_instance(const InstanceSpec& spec);

// The benchmark objective: matching loss, 0.01 * ||x||_1, box [0,1]^n.
CompositeProblem objective_for(const Instance& instance);

const char* to_string(InstanceKind k);
InstanceKind instance_kind_from_string(const std::string& s);

}  // namespace sapg
