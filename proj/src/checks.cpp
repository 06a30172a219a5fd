#include "sapg/checks.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <stdexcept>

#include "sapg/datagen.hpp"
#include "sapg/diagnostics.hpp"
#include "sapg/rng.hpp"
#include "sapg/solver.hpp"

namespace sapg::checks {

namespace {

Vector draw_in_box(Rng& rng, const Box& box) {
    Vector x(box.size());
    for (std::size_t i = 0; i < x.size(); ++i) {
        x[i] = box.lower[i] + (box.upper[i] - box.lower[i]) * rng.uniform01();
    }
    return x;
}

// mu grid used throughout: a few dyadic levels in (0, 0.8].
double draw_mu(Rng& rng) {
    static const double levels[] = {0.8, 0.5, 0.25, 0.125, 0.0625};
    return levels[rng.next_below(5)];
}

void bump(ProbeOutcome& out, double violation) {
    ++out.total;
    if (violation > 0.0) {
        ++out.violations;
        out.worst = std::max(out.worst, violation);
    }
}

double affine_seam_margin(const DenseMatrix& A, const Vector& shift, const Vector& x, double mu) {
    const Vector z = matvec(A, x);
    double margin = std::numeric_limits<double>::infinity();
    for (std::size_t i = 0; i < z.size(); ++i) {
        margin = std::min(margin, std::abs(std::abs(z[i] - shift[i]) - mu));
    }
    return margin;
}

double censored_seam_margin(const DenseMatrix& A, const Vector& b, const Vector& x, double mu) {
    const Vector z = matvec(A, x);
    double margin = std::numeric_limits<double>::infinity();
    for (std::size_t i = 0; i < z.size(); ++i) {
        margin = std::min(margin, std::abs(std::abs(z[i]) - mu));
        const double w = smoothed_plus(z[i], mu).value - b[i];
        margin = std::min(margin, std::abs(std::abs(w) - mu));
    }
    return margin;
}

}  // namespace

std::vector<LossFixture> standard_fixtures(std::uint64_t seed) {
    std::vector<LossFixture> fixtures;

    {
        InstanceSpec spec;
        spec.m = 25;
        spec.n = 50;
        spec.spar = 0.3;
        spec.seed = seed;
        spec.kind = InstanceKind::linear_l1;
        Instance inst = gen_instance(spec);
        LossFixture f;
        f.name = "l1_affine";
        f.loss = l1_affine_loss(inst.A, inst.b);
        const auto c = f.loss->constants().value();
        f.domain = Box::uniform(50, 0.0, 1.0);
        f.kappa = c.kappa;
        f.lipschitz = c.lipschitz_factor;
        f.seam_margin = [A = inst.A, b = inst.b](const Vector& x, double mu) {
            return affine_seam_margin(A, b, x, mu);
        };
        fixtures.push_back(std::move(f));
    }

    {
        InstanceSpec spec;
        spec.m = 60;
        spec.n = 20;
        spec.spar = 0.25;
        spec.seed = seed + 1;
        spec.kind = InstanceKind::censored;
        Instance inst = gen_instance(spec);
        LossFixture f;
        f.name = "censored_affine";
        f.loss = censored_affine_loss(inst.A, inst.b);
        const auto c = f.loss->constants().value();
        f.domain = Box::uniform(20, 0.0, 1.0);
        f.kappa = c.kappa;
        f.lipschitz = c.lipschitz_factor;
        f.seam_margin = [A = inst.A, b = inst.b](const Vector& x, double mu) {
            return censored_seam_margin(A, b, x, mu);
        };
        fixtures.push_back(std::move(f));
    }

    {
        Rng rng(seed + 2);
        Vector entries(4 * 6);
        for (double& v : entries) v = rng.normal() / 2.0;
        DenseMatrix H(4, 6, std::move(entries));
        Vector d(4);
        for (double& v : d) v = rng.uniform01() - 0.5;
        const double lam = 0.7;
        LossFixture f;
        f.name = "hinge_penalty";
        f.loss = hinge_penalty_loss(lam, H, d);
        const auto c = f.loss->constants().value();
        f.domain = Box::uniform(6, -2.0, 2.0);
        f.kappa = c.kappa;
        f.lipschitz = c.lipschitz_factor;
        f.seam_margin = [H, d](const Vector& x, double mu) {
            return affine_seam_margin(H, d, x, mu);
        };
        fixtures.push_back(std::move(f));
    }

    return fixtures;
}

ProbeOutcome probe_envelope(const LossFixture& f, int n_probes, std::uint64_t seed) {
    ProbeOutcome out{f.name + ": envelope |c~ - c| <= kappa*mu"};
    Rng rng(seed);
    for (int i = 0; i < n_probes; ++i) {
        const Vector x = draw_in_box(rng, f.domain);
        const double mu = draw_mu(rng);
        const double gap = std::abs(f.loss->smooth_value(x, mu) - f.loss->exact_value(x));
        bump(out, gap - f.kappa * mu - 1e-12);
    }
    return out;
}

ProbeOutcome probe_mu_lipschitz(const LossFixture& f, int n_probes, std::uint64_t seed) {
    ProbeOutcome out{f.name + ": |c~(x,mu2) - c~(x,mu1)| <= kappa*|mu1-mu2|"};
    Rng rng(seed);
    for (int i = 0; i < n_probes; ++i) {
        const Vector x = draw_in_box(rng, f.domain);
        const double mu1 = draw_mu(rng);
        const double mu2 = draw_mu(rng) * (0.5 + rng.uniform01());
        const double lhs = std::abs(f.loss->smooth_value(x, mu2) - f.loss->smooth_value(x, mu1));
        bump(out, lhs - f.kappa * std::abs(mu1 - mu2) - 1e-12);
    }
    return out;
}

ProbeOutcome probe_gradient_lipschitz(const LossFixture& f, int n_probes, std::uint64_t seed) {
    ProbeOutcome out{f.name + ": ||grad(x)-grad(y)|| <= (L/mu)||x-y||"};
    Rng rng(seed);
    for (int i = 0; i < n_probes; ++i) {
        const Vector x = draw_in_box(rng, f.domain);
        const Vector y = draw_in_box(rng, f.domain);
        const double mu = draw_mu(rng);
        const double lhs = norm2(sub(f.loss->smooth_gradient(x, mu), f.loss->smooth_gradient(y, mu)));
        const double rhs = f.lipschitz / mu * norm2(sub(x, y));
        bump(out, lhs - rhs - 1e-9);
    }
    return out;
}

ProbeOutcome probe_midpoint_convexity(const LossFixture& f, int n_probes, std::uint64_t seed) {
    ProbeOutcome out{f.name + ": midpoint convexity of c~(., mu)"};
    Rng rng(seed);
    for (int i = 0; i < n_probes; ++i) {
        const Vector x = draw_in_box(rng, f.domain);
        const Vector y = draw_in_box(rng, f.domain);
        const double mu = draw_mu(rng);
        Vector mid(x.size());
        for (std::size_t j = 0; j < x.size(); ++j) mid[j] = 0.5 * (x[j] + y[j]);
        const double lhs = f.loss->smooth_value(mid, mu);
        const double rhs =
            0.5 * (f.loss->smooth_value(x, mu) + f.loss->smooth_value(y, mu));
        bump(out, lhs - rhs - 1e-12);
    }
    return out;
}

ProbeOutcome probe_fd_gradient(const LossFixture& f, int n_probes, std::uint64_t seed) {
    ProbeOutcome out{f.name + ": central-difference gradient check"};
    Rng rng(seed);
    const double h = 1e-6;
    int produced = 0;
    int guard = 0;
    while (produced < n_probes && guard < n_probes * 200) {
        ++guard;
        const Vector x = draw_in_box(rng, f.domain);
        const double mu = draw_mu(rng);
        if (f.seam_margin(x, mu) < 1e-4) continue;  // stencil must not cross a seam
        ++produced;

        const Vector grad = f.loss->smooth_gradient(x, mu);
        Vector fd(x.size());
        Vector xp = x;
        for (std::size_t j = 0; j < x.size(); ++j) {
            xp[j] = x[j] + h;
            const double up = f.loss->smooth_value(xp, mu);
            xp[j] = x[j] - h;
            const double dn = f.loss->smooth_value(xp, mu);
            xp[j] = x[j];
            fd[j] = (up - dn) / (2.0 * h);
        }
        const double rel = norm2(sub(fd, grad)) / std::max(1.0, norm2(grad));
        bump(out, rel - 1e-6);
    }
    if (produced < n_probes) {
        ++out.violations;
        out.name += " (could not sample enough seam-free points)";
    }
    return out;
}

ProbeOutcome probe_gradient_consistency(const LossFixture& f, int n_probes, std::uint64_t seed) {
    ProbeOutcome out{f.name + ": gradient limit satisfies the subgradient inequality"};
    Rng rng(seed);

    Vector x;
    double margin = -1.0;
    for (int tries = 0; tries < 200; ++tries) {
        x = draw_in_box(rng, f.domain);
        margin = f.seam_margin(x, 1e-9);  // distance to the kink set itself
        if (margin > 1e-3) break;
    }
    if (margin <= 1e-3) {
        out.violations = 1;
        out.name += " (no kink-free base point found)";
        return out;
    }

    // Follow mu = 2^-j down; stop once below the kink distance so every
    // branch has settled, then check the limit is stable.
    Vector g_limit;
    Vector g_prev;
    for (int j = 3; j <= 30; ++j) {
        const double mu = std::pow(2.0, -j);
        if (mu > margin / 4.0) continue;
        g_prev = g_limit;
        g_limit = f.loss->smooth_gradient(x, mu);
        if (!g_prev.empty() && norm2(sub(g_limit, g_prev)) <= 1e-10 * (1.0 + norm2(g_limit))) {
            break;
        }
    }
    if (g_limit.empty()) {
        out.violations = 1;
        out.name += " (mu never fell below the kink distance)";
        return out;
    }

    const double fx = f.loss->exact_value(x);
    for (int i = 0; i < n_probes; ++i) {
        const Vector y = draw_in_box(rng, f.domain);
        const double lhs = f.loss->exact_value(y);
        const double rhs = fx + dot(g_limit, sub(y, x));
        bump(out, rhs - lhs - 1e-9);
    }
    return out;
}

ProbeOutcome probe_prox_grid(int n_triples, std::uint64_t seed) {
    ProbeOutcome out{"prox_step objective within 1e-8 of dense grid minimum"};
    Rng rng(seed);
    for (int i = 0; i < n_triples; ++i) {
        const double lo = -2.0 * rng.uniform01();
        const double hi = 0.1 + 1.9 * rng.uniform01();
        const double y = -3.0 + 6.0 * rng.uniform01();
        const double lambda = 0.5 * rng.uniform01();
        const double theta = 0.01 + rng.uniform01();

        const ProximablePart g = ProximablePart::scaled_l1(lambda, Box::uniform(1, lo, hi));
        const double x = prox_step(g, Vector{y}, theta)[0];
        auto objective = [&](double v) {
            return theta * lambda * std::abs(v) + 0.5 * (v - y) * (v - y);
        };

        double best = objective(lo);
        const double step = 1e-5;
        const long n_steps = std::lround((hi - lo) / step);
        for (long s = 1; s <= n_steps; ++s) {
            best = std::min(best, objective(std::min(lo + s * step, hi)));
        }
        best = std::min(best, objective(hi));
        bump(out, objective(x) - best - 1e-8);
    }
    return out;
}

ProbeOutcome probe_prox_feasible_nonexpansive(int n_probes, std::uint64_t seed) {
    ProbeOutcome out{"prox_step feasibility and nonexpansiveness"};
    Rng rng(seed);
    for (int i = 0; i < n_probes; ++i) {
        const std::size_t n = 1 + rng.next_below(8);
        Box box{Vector(n), Vector(n)};
        for (std::size_t j = 0; j < n; ++j) {
            box.lower[j] = -2.0 * rng.uniform01();
            box.upper[j] = 2.0 * rng.uniform01();
        }
        const ProximablePart g = ProximablePart::scaled_l1(rng.uniform01(), box);
        Vector y1(n), y2(n);
        for (std::size_t j = 0; j < n; ++j) {
            y1[j] = -4.0 + 8.0 * rng.uniform01();
            y2[j] = -4.0 + 8.0 * rng.uniform01();
        }
        const double theta = 0.01 + rng.uniform01();
        const Vector p1 = prox_step(g, y1, theta);
        const Vector p2 = prox_step(g, y2, theta);
        const double feasibility = g.box.contains(p1) && g.box.contains(p2) ? 0.0 : 1.0;
        bump(out, feasibility);
        bump(out, norm2(sub(p1, p2)) - norm2(sub(y1, y2)) - 1e-12);
    }
    return out;
}

ProbeOutcome probe_prox_optimality_certificate(int n_probes, std::uint64_t seed) {
    ProbeOutcome out{"prox_step optimality against random feasible points"};
    Rng rng(seed);
    for (int i = 0; i < n_probes; ++i) {
        const std::size_t n = 1 + rng.next_below(6);
        Box box{Vector(n), Vector(n)};
        for (std::size_t j = 0; j < n; ++j) {
            box.lower[j] = -1.5 * rng.uniform01();
            box.upper[j] = 1.5 * rng.uniform01();
        }
        const double lambda = rng.uniform01();
        const ProximablePart g = ProximablePart::scaled_l1(lambda, box);
        Vector y(n);
        for (std::size_t j = 0; j < n; ++j) y[j] = -3.0 + 6.0 * rng.uniform01();
        const double theta = 0.01 + rng.uniform01();
        const Vector x = prox_step(g, y, theta);
        const double fx = theta * g.value(x) + 0.5 * norm2_sq(sub(x, y));
        for (int t = 0; t < 100; ++t) {
            const Vector z = draw_in_box(rng, box);
            const double fz = theta * g.value(z) + 0.5 * norm2_sq(sub(z, y));
            bump(out, fx - fz - 1e-10);
        }
    }
    return out;
}

std::vector<ProbeOutcome> probe_energy_descent(std::uint64_t seed) {
    InstanceSpec spec;
    spec.m = 30;
    spec.n = 60;
    spec.spar = 0.3;
    spec.seed = seed;
    spec.kind = InstanceKind::linear_l1;
    const Instance inst = gen_instance(spec);
    const CompositeProblem prob = objective_for(inst);

    SolverConfig cfg = default_config(60);
    cfg.record_iterates = true;
    const SolveResult run = sapg_solve(prob, cfg);
    const ReferenceSolution ref = compute_reference(prob, cfg);
    const auto series = energy_series(prob, cfg, run, ref);

    const double slack = 10.0 * ref.uncertainty + 1e-12;
    ProbeOutcome descent{"energy E_{k+1} <= E_k + 10*uncertainty"};
    for (std::size_t i = 1; i < series.size(); ++i) {
        bump(descent, series[i].E - series[i - 1].E - slack);
    }
    ProbeOutcome nonneg{"W_k >= -uncertainty"};
    for (const auto& row : series) {
        bump(nonneg, -row.W - ref.uncertainty - 1e-12);
    }
    return {descent, nonneg};
}

bool SuiteResult::passed() const {
    for (const auto& o : outcomes) {
        if (!o.passed()) return false;
    }
    return true;
}

std::vector<std::string> suite_names() { return {"smoothing", "prox", "energy"}; }

SuiteResult run_suite(const std::string& suite, std::uint64_t seed, const FaultInjection& fault) {
    SuiteResult result;
    result.suite = suite;

    if (suite == "smoothing") {
        auto fixtures = standard_fixtures(seed);
        for (auto& f : fixtures) {
            if (fault.zero_kappa) f.kappa = 0.0;
            result.outcomes.push_back(probe_envelope(f, 200, seed + 11));
            result.outcomes.push_back(probe_mu_lipschitz(f, 200, seed + 12));
            result.outcomes.push_back(probe_gradient_lipschitz(f, 200, seed + 13));
            result.outcomes.push_back(probe_fd_gradient(f, 25, seed + 14));
            // The censored loss is not convex (its exact loss already is
            // not), so the convexity and subgradient probes apply to the
            // other two losses only.
            if (f.name != "censored_affine") {
                result.outcomes.push_back(probe_midpoint_convexity(f, 200, seed + 15));
                result.outcomes.push_back(probe_gradient_consistency(f, 100, seed + 16));
            }
        }
    } else if (suite == "prox") {
        result.outcomes.push_back(probe_prox_grid(100, seed + 21));
        result.outcomes.push_back(probe_prox_feasible_nonexpansive(200, seed + 22));
        result.outcomes.push_back(probe_prox_optimality_certificate(20, seed + 23));
    } else if (suite == "energy") {
        result.outcomes = probe_energy_descent(seed);
    } else {
        throw std::invalid_argument("unknown check suite: " + suite);
    }
    return result;
}

}  // namespace sapg::checks
