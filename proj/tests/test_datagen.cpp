#include "doctest.h"

#include <algorithm>
#include <cmath>

#include "sapg/datagen.hpp"
#include "sapg/io.hpp"

#include <cstdio>
#include <filesystem>

using namespace sapg;

namespace {

int count_zeros(const Vector& v) {
    return static_cast<int>(std::count(v.begin(), v.end(), 0.0));
}

}  // namespace

TEST_CASE("sparsity bookkeeping is exact") {
    InstanceSpec spec;
    spec.m = 150;
    spec.n = 300;
    spec.spar = 0.2;
    spec.seed = 77;
    const Instance inst = gen_instance(spec);

    CHECK(count_zeros(inst.x_true) == 240);
    int nonzeros = 0;
    for (double v : inst.x_true) {
        if (v != 0.0) {
            ++nonzeros;
            CHECK(v > 0.0);
            CHECK(v < 1.0);
        }
    }
    CHECK(nonzeros == 60);
}

TEST_CASE("rounding of the sparse count ties upward") {
    InstanceSpec spec;
    spec.m = 5;
    spec.n = 10;
    spec.spar = 0.25;  // 2.5 rounds up to 3
    CHECK(spec.sparse_count() == 3);
    spec.spar = 0.24;
    CHECK(spec.sparse_count() == 2);
}

TEST_CASE("generation is deterministic") {
    InstanceSpec spec;
    spec.m = 30;
    spec.n = 60;
    spec.spar = 0.3;
    spec.seed = 123;
    const Instance a = gen_instance(spec);
    const Instance b = gen_instance(spec);
    CHECK(a.A.data() == b.A.data());
    CHECK(a.b == b.b);
    CHECK(a.x_true == b.x_true);
}

TEST_CASE("linear instances: orthonormal rows and one-sided noise") {
    InstanceSpec spec;
    spec.m = 40;
    spec.n = 90;
    spec.spar = 0.5;
    spec.seed = 5;
    const Instance inst = gen_instance(spec);

    CHECK(spectral_norm_sq(inst.A) == doctest::Approx(1.0).epsilon(1e-8));
    for (std::size_t i = 0; i < inst.A.rows(); ++i) {
        for (std::size_t j = 0; j < inst.A.rows(); ++j) {
            double g = 0.0;
            for (std::size_t k = 0; k < inst.A.cols(); ++k) g += inst.A(i, k) * inst.A(j, k);
            CHECK(std::abs(g - (i == j ? 1.0 : 0.0)) <= 1e-10);
        }
    }

    // b - A x_true is the uniform noise draw: inside [0, noise_scale).
    const Vector residual = sub(inst.b, matvec(inst.A, inst.x_true));
    for (double r : residual) {
        CHECK(r >= -1e-15);
        CHECK(r < spec.noise_scale);
    }
}

TEST_CASE("censored instances: tall matrices get orthonormal columns") {
    InstanceSpec spec;
    spec.m = 120;
    spec.n = 30;
    spec.spar = 0.2;
    spec.seed = 6;
    spec.kind = InstanceKind::censored;
    const Instance inst = gen_instance(spec);

    CHECK(inst.A.rows() == 120);
    CHECK(inst.A.cols() == 30);
    for (std::size_t i = 0; i < inst.A.cols(); ++i) {
        for (std::size_t j = 0; j < inst.A.cols(); ++j) {
            double g = 0.0;
            for (std::size_t k = 0; k < inst.A.rows(); ++k) g += inst.A(k, i) * inst.A(k, j);
            CHECK(std::abs(g - (i == j ? 1.0 : 0.0)) <= 1e-10);
        }
    }
    for (double v : inst.b) CHECK(v >= 0.0);  // censoring clips at zero
}

TEST_CASE("invalid specs are rejected") {
    InstanceSpec spec;
    spec.m = 10;
    spec.n = 20;
    spec.spar = 0.2;

    InstanceSpec bad = spec;
    bad.spar = 0.0;
    CHECK_THROWS_AS(gen_instance(bad), std::invalid_argument);
    bad = spec;
    bad.m = 0;
    CHECK_THROWS_AS(gen_instance(bad), std::invalid_argument);
    bad = spec;
    bad.spar = 0.01;  // rounds to zero nonzeros
    CHECK_THROWS_AS(gen_instance(bad), std::invalid_argument);
    bad = spec;
    bad.m = 30;  // linear_l1 needs m <= n
    CHECK_THROWS_AS(gen_instance(bad), std::invalid_argument);
}

TEST_CASE("objective_for binds the benchmark objective") {
    InstanceSpec spec;
    spec.m = 10;
    spec.n = 20;
    spec.spar = 0.2;
    spec.seed = 8;
    const Instance inst = gen_instance(spec);
    const CompositeProblem prob = objective_for(inst);

    CHECK(prob.reg.kind == ProximablePart::Kind::scaled_l1);
    CHECK(prob.reg.lambda == 0.01);
    CHECK(prob.reg.box.lower == Vector(20, 0.0));
    CHECK(prob.reg.box.upper == Vector(20, 1.0));

    // The loss really is ||Ax - b||_1 at a probe point.
    const Vector x(20, 0.05);
    CHECK(prob.loss->exact_value(x) ==
          doctest::Approx(norm1(sub(matvec(inst.A, x), inst.b))).epsilon(1e-14));
}

TEST_CASE("instances round-trip through the file format") {
    InstanceSpec spec;
    spec.m = 12;
    spec.n = 18;
    spec.spar = 0.5;
    spec.seed = 99;
    spec.kind = InstanceKind::censored;
    const Instance inst = gen_instance(spec);

    const std::string dir =
        (std::filesystem::temp_directory_path() / "sapg_test_instance").string();
    write_instance(dir, inst);
    const Instance back = read_instance(dir);
    std::filesystem::remove_all(dir);

    CHECK(back.spec.m == spec.m);
    CHECK(back.spec.kind == spec.kind);
    CHECK(back.A.data() == inst.A.data());
    CHECK(back.b == inst.b);
    CHECK(back.x_true == inst.x_true);
}
