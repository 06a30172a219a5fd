#include "sapg/solver.hpp"

#include <chrono>
#include <cmath>
#include <iostream>
#include <sstream>
#include <stdexcept>

namespace sapg {

double mu_schedule(const SolverConfig& cfg, int k) {
    const double t = k + cfg.alpha - 1.0;
    return cfg.mu0 / (t * std::pow(std::log(t), cfg.sigma));
}

Vector extrapolate(const Vector& x_k, const Vector& x_prev, int k, double alpha, bool enabled) {
    if (x_k.size() != x_prev.size()) {
        throw std::invalid_argument("extrapolate: dimension mismatch");
    }
    const double beta = enabled ? (k - 1.0) / (k + alpha - 1.0) : 0.0;
    Vector y(x_k.size());
    for (std::size_t i = 0; i < y.size(); ++i) y[i] = x_k[i] + beta * (x_k[i] - x_prev[i]);
    return y;
}

BacktrackOutcome backtrack(const SmoothableLoss& loss, const ProximablePart& reg,
                           const Vector& y, double mu, double gamma_start, double eta) {
    if (!(mu > 0.0)) throw std::invalid_argument("backtrack: mu must be positive");
    if (!(gamma_start > 0.0)) throw std::invalid_argument("backtrack: gamma_start must be positive");

    constexpr int kMaxAttempts = 100;
    const double fy = loss.smooth_value(y, mu);
    const Vector grad = loss.smooth_gradient(y, mu);

    double gamma = gamma_start;
    for (int attempt = 1; attempt <= kMaxAttempts; ++attempt) {
        const double step = gamma * mu;
        const Vector candidate = prox_step(reg, axpy(-step, grad, y), step);
        const Vector diff = sub(candidate, y);
        const double lhs = loss.smooth_value(candidate, mu);
        const double rhs = fy + dot(grad, diff) + norm2_sq(diff) / (2.0 * step);
        if (lhs <= rhs) {
            return BacktrackOutcome{gamma, candidate, attempt};
        }
        gamma *= eta;
    }
    throw std::runtime_error(
        "backtrack: descent condition kept failing after 100 attempts; "
        "the loss gradient does not look Lipschitz");
}

double residual(const CompositeProblem& prob, const Vector& x, double mu, double zeta,
                bool smoothed_variant) {
    if (!(mu > 0.0)) throw std::invalid_argument("residual: mu must be positive");
    Vector grad = prob.loss->smooth_gradient(x, mu);
    if (smoothed_variant && prob.reg.kind == ProximablePart::Kind::scaled_l1) {
        for (std::size_t i = 0; i < grad.size(); ++i) {
            grad[i] += prob.reg.lambda * smoothed_abs(x[i], mu).derivative;
        }
    }
    const Vector probe = axpy(-zeta, grad, x);
    const Vector p = smoothed_variant ? project_box(prob.reg.box, probe)
                                      : prox_step(prob.reg, probe, zeta);
    return norm_inf(sub(x, p));
}

double isapg_error_weight(const SolverConfig& cfg, int k) {
    return cfg.mu0 * std::pow(std::log(k + cfg.alpha - 1.0), -cfg.sigma);
}

namespace {

enum class StepRule { backtracking, fixed };

SolveResult solve_loop(const CompositeProblem& prob, const SolverConfig& cfg, StepRule rule,
                       double fixed_gamma, const ErrorOracle* errs) {
    {
        auto errors = validate(cfg, prob);
        // An infeasible start is recoverable: project it and continue.
        bool only_x0_feasibility = !errors.empty();
        for (const auto& e : errors) {
            if (e.rfind("x0: not feasible", 0) != 0) only_x0_feasibility = false;
        }
        if (!errors.empty() && !only_x0_feasibility) {
            std::ostringstream os;
            os << "solve: invalid configuration:";
            for (const auto& e : errors) os << "\n  " << e;
            throw std::invalid_argument(os.str());
        }
        if (only_x0_feasibility) {
            std::cerr << "sapg: warning: x0 is outside the box, projecting it\n";
        }
    }

    const auto t_start = std::chrono::steady_clock::now();
    auto elapsed = [&t_start]() {
        return std::chrono::duration<double>(std::chrono::steady_clock::now() - t_start).count();
    };

    SolveResult result;
    Vector x = project_box(prob.reg.box, cfg.x0);
    Vector x_prev = x;

    double gamma = (rule == StepRule::fixed) ? fixed_gamma : cfg.gamma0;
    result.f_best = prob.objective(x);
    result.x_best = x;

    auto push_row = [&](int k, double mu, double gam, const Vector& xk, double res,
                        double step_norm, int backtracks) {
        TraceRow row;
        row.k = k;
        row.mu = mu;
        row.gamma = gam;
        row.f_exact = prob.objective(xk);
        row.f_smooth = prob.smooth_objective(xk, mu);
        row.residual = res;
        row.step_norm = step_norm;
        row.backtracks = backtracks;
        row.time_s = elapsed();
        result.trace.rows.push_back(row);
        if (row.f_exact < result.f_best) {
            result.f_best = row.f_exact;
            result.x_best = xk;
        }
    };

    push_row(0, cfg.mu0, gamma, x, residual(prob, x, cfg.mu0, cfg.zeta, cfg.smoothed_residual),
             0.0, 0);
    if (cfg.record_iterates) result.iterates.push_back(x);

    for (int k = 0;; ++k) {
        if (k >= cfg.maxiter) {
            result.iterations = cfg.maxiter;
            result.stop_reason = StopReason::maxiter;
            break;
        }

        const Vector y = extrapolate(x, x_prev, k, cfg.alpha, cfg.extrapolate);
        const double mu_next = mu_schedule(cfg, k);

        Vector x_next;
        int backtracks = 0;
        if (rule == StepRule::backtracking) {
            BacktrackOutcome out = backtrack(*prob.loss, prob.reg, y, mu_next, gamma, cfg.eta);
            gamma = out.accepted_gamma;
            x_next = std::move(out.candidate);
            backtracks = out.attempts - 1;
        } else {
            Vector grad = prob.loss->smooth_gradient(y, mu_next);
            if (errs && *errs) {
                const Vector e = (*errs)(k);
                if (e.size() != grad.size()) {
                    throw std::invalid_argument("isapg: error oracle returned wrong length");
                }
                for (std::size_t i = 0; i < grad.size(); ++i) grad[i] += e[i];
            }
            const double step = gamma * mu_next;
            x_next = prox_step(prob.reg, axpy(-step, grad, y), step);
        }

        const double res =
            residual(prob, x_next, mu_next, cfg.zeta, cfg.smoothed_residual);
        push_row(k + 1, mu_next, gamma, x_next, res, norm2(sub(x_next, x)), backtracks);
        x_prev = std::move(x);
        x = std::move(x_next);
        if (cfg.record_iterates) result.iterates.push_back(x);

        if (res <= cfg.eps && mu_next <= cfg.eps) {
            result.iterations = k;
            result.stop_reason = StopReason::residual_met;
            break;
        }
    }

    result.x_final = std::move(x);
    return result;
}

}  // namespace

SolveResult sapg_solve(const CompositeProblem& prob, const SolverConfig& cfg) {
    return solve_loop(prob, cfg, StepRule::backtracking, 0.0, nullptr);
}

SolveResult spg_solve(const CompositeProblem& prob, const SolverConfig& cfg) {
    SolverConfig plain = cfg;
    plain.extrapolate = false;
    return solve_loop(prob, plain, StepRule::backtracking, 0.0, nullptr);
}

SolveResult isapg_solve(const CompositeProblem& prob, const SolverConfig& cfg,
                        double lipschitz, const ErrorOracle& errs) {
    if (!prob.loss || !prob.loss->constants().has_value()) {
        throw std::invalid_argument("isapg_solve: loss must publish smoothing constants");
    }
    if (!(lipschitz > 0.0)) {
        throw std::invalid_argument("isapg_solve: lipschitz must be positive");
    }
    return solve_loop(prob, cfg, StepRule::fixed, 1.0 / lipschitz, &errs);
}

}  // namespace sapg
