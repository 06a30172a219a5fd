#include "sapg/diagnostics.hpp"

#include <algorithm>
#include <cmath>
#include <fstream>
#include <stdexcept>

#include "sapg/io.hpp"

namespace sapg {

double w_term(const CompositeProblem& prob, const Vector& x_k, double mu_k, double kappa,
              const ReferenceSolution& ref) {
    if (!(kappa >= 0.0)) throw std::invalid_argument("w_term: kappa must be nonnegative");
    return prob.smooth_objective(x_k, mu_k) + kappa * mu_k - ref.f_star;
}

Vector u_point(const Vector& x_k, const Vector& x_prev, int k, double alpha) {
    if (k < 1) throw std::invalid_argument("u_point: k must be >= 1");
    if (x_k.size() != x_prev.size()) throw std::invalid_argument("u_point: dimension mismatch");
    const double a = (k + alpha - 2.0) / (alpha - 1.0);
    const double b = (k - 1.0) / (alpha - 1.0);
    Vector u(x_k.size());
    for (std::size_t i = 0; i < u.size(); ++i) u[i] = a * x_k[i] - b * x_prev[i];
    return u;
}

EnergySnapshot energy(const CompositeProblem& prob, int k, const Vector& x_k,
                      const Vector& x_prev, double mu_k, double gamma_k,
                      const SolverConfig& cfg, double kappa, const ReferenceSolution& ref) {
    if (k < 1) throw std::invalid_argument("energy: k must be >= 1");
    EnergySnapshot snap;
    snap.k = k;
    snap.W = w_term(prob, x_k, mu_k, kappa, ref);
    snap.u = u_point(x_k, x_prev, k, cfg.alpha);

    const double t = k + cfg.alpha - 2.0;
    const double gap_term = 2.0 * gamma_k * mu_k / (cfg.alpha - 1.0) * t * t * snap.W;
    const double anchor_term = (cfg.alpha - 1.0) * norm2_sq(sub(snap.u, ref.x_star));
    const double decay_term = (4.0 * kappa * cfg.gamma0 * cfg.mu0 / (2.0 * cfg.sigma - 1.0)) *
                              mu_k * t * std::pow(std::log(t), 1.0 - cfg.sigma);
    snap.E = gap_term + anchor_term + decay_term;
    return snap;
}

double rate_statistic(double f_k, int k, double alpha, double sigma,
                      const ReferenceSolution& ref) {
    if (k < 1) throw std::invalid_argument("rate_statistic: k must be >= 1");
    return (k + alpha - 2.0) * std::pow(std::log(k + alpha - 1.0), -sigma) * (f_k - ref.f_star);
}

ReferenceSolution compute_reference(const CompositeProblem& prob, const SolverConfig& cfg) {
    SolverConfig tight = cfg;
    tight.eps = cfg.eps / 100.0;
    tight.maxiter = cfg.maxiter * 10;
    tight.extrapolate = true;
    tight.record_iterates = false;

    const SolveResult run = sapg_solve(prob, tight);

    ReferenceSolution ref;
    ref.x_star = run.x_best;
    ref.f_star = run.f_best;

    const auto& rows = run.trace.rows;
    const std::size_t n_rows = rows.size();
    const std::size_t window = std::max<std::size_t>(10, n_rows / 10);
    const std::size_t begin = n_rows > window ? n_rows - window : 0;
    double lo = rows[begin].f_exact;
    double hi = lo;
    for (std::size_t i = begin; i < n_rows; ++i) {
        lo = std::min(lo, rows[i].f_exact);
        hi = std::max(hi, rows[i].f_exact);
    }
    ref.uncertainty = hi - lo;
    return ref;
}

double require_kappa(const CompositeProblem& prob) {
    const auto c = prob.loss->constants();
    if (!c.has_value()) {
        throw std::invalid_argument(
            "diagnostics: loss does not publish smoothing constants (kappa, L)");
    }
    return c->kappa;
}

std::vector<DiagnosticsRow> energy_series(const CompositeProblem& prob, const SolverConfig& cfg,
                                          const SolveResult& result,
                                          const ReferenceSolution& ref) {
    if (result.iterates.size() != result.trace.rows.size()) {
        throw std::invalid_argument("energy_series: run was not recorded with record_iterates");
    }
    const double kappa = require_kappa(prob);

    std::vector<DiagnosticsRow> rows;
    for (std::size_t k = 1; k < result.iterates.size(); ++k) {
        const TraceRow& tr = result.trace.rows[k];
        const EnergySnapshot snap =
            energy(prob, static_cast<int>(k), result.iterates[k], result.iterates[k - 1], tr.mu,
                   tr.gamma, cfg, kappa, ref);
        rows.push_back(DiagnosticsRow{static_cast<int>(k), snap.W, snap.E,
                                      rate_statistic(tr.f_exact, static_cast<int>(k), cfg.alpha,
                                                     cfg.sigma, ref),
                                      tr.step_norm});
    }
    return rows;
}

void write_diagnostics_csv(const std::string& path, const std::vector<DiagnosticsRow>& rows) {
    std::ofstream out(path);
    if (!out) throw std::runtime_error("cannot open " + path);
    out << "k,W,E,rate_stat,step_norm\n";
    for (const auto& r : rows) {
        out << r.k << "," << format_double(r.W) << "," << format_double(r.E) << ","
            << format_double(r.rate_stat) << "," << format_double(r.step_norm) << "\n";
    }
}

}  // namespace sapg
