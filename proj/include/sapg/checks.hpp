#pragma once

#include <cstdint>
#include <functional>
#include <string>
#include <vector>

#include "sapg/model.hpp"

// Probe-style verification of the library's contracts: the smoothing
// conditions, the prox optimality against a brute-force grid, and the
// energy descent along a recorded run. The probes are independent oracles
// (finite differences, dense grids, direct inequality evaluation); they
// never reuse the code path they are checking.

namespace sapg::checks {

struct ProbeOutcome {
    std::string name;
    int total = 0;
    int violations = 0;
    double worst = 0.0;  // most positive violation margin observed
    bool passed() const { return violations == 0; }
};

struct LossFixture {
    std::string name;
    LossPtr loss;
    Box domain;      // x probes are drawn uniformly from this box
    double kappa;
    double lipschitz;
    // Smallest distance of any branch argument to its seam |arg| = mu;
    // finite-difference probes require it comfortably positive.
    std::function<double(const Vector&, double)> seam_margin;
};

// The three shipped losses over small seeded instances.
std::vector<LossFixture> standard_fixtures(std::uint64_t seed);

ProbeOutcome probe_envelope(const LossFixture& f, int n_probes, std::uint64_t seed);
ProbeOutcome probe_mu_lipschitz(const LossFixture& f, int n_probes, std::uint64_t seed);
ProbeOutcome probe_gradient_lipschitz(const LossFixture& f, int n_probes, std::uint64_t seed);
ProbeOutcome probe_midpoint_convexity(const LossFixture& f, int n_probes, std::uint64_t seed);
ProbeOutcome probe_fd_gradient(const LossFixture& f, int n_probes, std::uint64_t seed);

// Gradient consistency: grad c~(x, 2^-j) converges as j grows, and the
// limit acts like a subgradient of the exact loss at x against n_probes
// random directions. Probing points are drawn away from the kink set.
ProbeOutcome probe_gradient_consistency(const LossFixture& f, int n_probes, std::uint64_t seed);

// prox_step against a dense 1-D grid search (step 1e-5) on random
// (y, theta*lambda, box) triples.
ProbeOutcome probe_prox_grid(int n_triples, std::uint64_t seed);
ProbeOutcome probe_prox_feasible_nonexpansive(int n_probes, std::uint64_t seed);
ProbeOutcome probe_prox_optimality_certificate(int n_probes, std::uint64_t seed);

// Energy descent and W nonnegativity along a small seeded accelerated run.
std::vector<ProbeOutcome> probe_energy_descent(std::uint64_t seed);

struct FaultInjection {
    bool zero_kappa = false;  // pretend kappa = 0 and watch the envelope fail
};

struct SuiteResult {
    std::string suite;
    std::vector<ProbeOutcome> outcomes;
    bool passed() const;
};

std::vector<std::string> suite_names();
SuiteResult run_suite(const std::string& suite, std::uint64_t seed, const FaultInjection& fault);

}  // namespace sapg::checks
