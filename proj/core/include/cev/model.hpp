#pragma once

namespace cev {

// Market and contract inputs of the CEV diffusion dS = r S dt + δ S^{β/2} dW.
struct CevParams {
    double spot = 100.0;       // S
    double strike = 100.0;     // K
    double rate = 0.05;        // r, continuously compounded, per year
    double delta_vol = 2.0;    // δ, units currency^{1-β/2} year^{-1/2}
    double beta = 1.0;         // β in (0, 2)
    double tau = 1.0;          // time to maturity in years, >= 0
};

// Quantities shared by every closed form:
//   v = 1/(2-β), m = exp(r(2-β)τ), k = 2r/(δ²(2-β)(m-1)),
//   x = m k S^{2-β}, y = k K^{2-β}.
struct TransformedVars {
    double v = 0.0;
    double m = 0.0;
    double k = 0.0;
    double x = 0.0;
    double y = 0.0;
};

/// Throws ValidationError naming the first offending field.
void validate(const CevParams& p);

/// Requires τ > 0. The r(2-β)τ -> 0 limit of k is handled without loss of
/// precision.
TransformedVars transform(const CevParams& p);

/// Local volatility at the valuation spot, δ S^{β/2 - 1}.
double sigma0(const CevParams& p);

/// δ that produces the given local volatility at the valuation spot.
double delta_vol_for_sigma0(double sigma0, double spot, double beta);

}  // namespace cev
