#include "sapg/model.hpp"

#include <cmath>
#include <sstream>

namespace sapg {

SolverConfig default_config(std::size_t n) {
    SolverConfig cfg;
    cfg.x0.assign(n, 0.1);
    return cfg;
}

std::vector<std::string> validate(const SolverConfig& cfg, const CompositeProblem& prob) {
    std::vector<std::string> errors;
    auto fail = [&errors](const std::string& msg) { errors.push_back(msg); };

    if (!prob.loss) fail("loss: missing");
    if (!(cfg.mu0 > 0.0)) fail("mu0: must be positive");
    if (!(cfg.gamma0 > 0.0)) fail("gamma0: must be positive");
    if (!(cfg.eta > 0.0 && cfg.eta < 1.0)) fail("eta: must lie in (0,1)");
    if (!(cfg.alpha > 3.0)) fail("alpha: must exceed 3");
    if (!(cfg.sigma > 0.5 && cfg.sigma <= 1.0)) fail("sigma: must lie in (1/2,1]");
    if (cfg.maxiter < 1) fail("maxiter: must be at least 1");
    if (!(cfg.eps >= 0.0) || std::isnan(cfg.eps)) fail("eps: must be nonnegative");
    if (!(cfg.zeta > 0.0)) fail("zeta: must be positive");

    const std::size_t n = prob.dimension();
    if (prob.loss && prob.reg.box.size() != n) {
        std::ostringstream os;
        os << "reg: box dimension " << prob.reg.box.size() << " does not match loss dimension "
           << n;
        fail(os.str());
    }
    if (cfg.x0.size() != n) {
        std::ostringstream os;
        os << "x0: length " << cfg.x0.size() << " does not match problem dimension " << n;
        fail(os.str());
    } else {
        bool finite = true;
        for (double v : cfg.x0) {
            if (!std::isfinite(v)) {
                finite = false;
                break;
            }
        }
        if (!finite) {
            fail("x0: entries must be finite");
        } else if (prob.reg.box.size() == n && !prob.reg.box.contains(cfg.x0)) {
            fail("x0: not feasible for the box");
        }
    }
    return errors;
}

const char* to_string(StopReason r) {
    return r == StopReason::residual_met ? "residual_met" : "maxiter";
}

}  // namespace sapg
