#include "cev/model.hpp"

#include <cmath>
#include <stdexcept>

#include "cev/errors.hpp"

namespace cev {

void validate(const CevParams& p) {
    if (!(p.spot > 0.0) || !std::isfinite(p.spot)) {
        throw ValidationError("spot", "must be a positive finite number");
    }
    if (!(p.strike > 0.0) || !std::isfinite(p.strike)) {
        throw ValidationError("strike", "must be a positive finite number");
    }
    if (!std::isfinite(p.rate)) {
        throw ValidationError("rate", "must be finite");
    }
    if (!(p.delta_vol > 0.0) || !std::isfinite(p.delta_vol)) {
        throw ValidationError("delta_vol", "must be a positive finite number");
    }
    if (!(p.beta > 0.0 && p.beta < 2.0)) {
        throw ValidationError(
            "beta",
            "must lie in (0, 2); beta = 2 is Black-Scholes and beta = 0 is absolute diffusion");
    }
    if (!(p.tau >= 0.0) || !std::isfinite(p.tau)) {
        throw ValidationError("tau", "must be a nonnegative finite number");
    }
}

TransformedVars transform(const CevParams& p) {
    validate(p);
    if (!(p.tau > 0.0)) {
        throw std::domain_error("transform: tau must be positive");
    }
    const double a = 2.0 - p.beta;
    const double u = p.rate * a * p.tau;
    // k = 2r / (δ² a (m - 1)) = 2 / (δ² a² τ) * u / (e^u - 1)
    const double damping = std::abs(u) < 1e-8 ? 1.0 - 0.5 * u : u / std::expm1(u);
    const double k = 2.0 / (p.delta_vol * p.delta_vol * a * a * p.tau) * damping;
    const double m = std::exp(u);
    return {
        .v = 1.0 / a,
        .m = m,
        .k = k,
        .x = m * k * std::pow(p.spot, a),
        .y = k * std::pow(p.strike, a),
    };
}

double sigma0(const CevParams& p) {
    return p.delta_vol * std::pow(p.spot, 0.5 * p.beta - 1.0);
}

double delta_vol_for_sigma0(double sigma0, double spot, double beta) {
    return sigma0 * std::pow(spot, 1.0 - 0.5 * beta);
}

}  // namespace cev
