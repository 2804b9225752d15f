#pragma once

#include "cev/model.hpp"
#include "cev/pricing.hpp"
#include "cev/specfun.hpp"

namespace cev {

// Theta is ∂/∂t (calendar time), vega is per unit of sigma0.
struct GreeksReport {
    double price = 0.0;
    double delta = 0.0;
    double gamma = 0.0;
    double theta = 0.0;
    double vega = 0.0;
    double rho = 0.0;
};

// All Greeks require τ > 0 and throw std::domain_error otherwise.
double delta(const CevParams& p, OptionKind kind, const SeriesControl& ctl = {});
double gamma(const CevParams& p, const SeriesControl& ctl = {});
double theta(const CevParams& p, OptionKind kind, const SeriesControl& ctl = {});
double vega(const CevParams& p, const SeriesControl& ctl = {});
double rho(const CevParams& p, OptionKind kind, const SeriesControl& ctl = {});

/// Price and all five Greeks from one set of transformed variables. Each
/// field is bit-identical to the corresponding single-Greek call.
GreeksReport full_report(const CevParams& p, OptionKind kind, const SeriesControl& ctl = {});

/// Second-order P&L estimate delta·dS + gamma·dS²/2.
double taylor_pnl(const GreeksReport& report, double dS);

/// r·V - Θ - δ²S^β·Γ/2 - r·S·Δ. Vanishes for prices solving the CEV pricing PDE.
double pde_residual(const CevParams& p, OptionKind kind, const SeriesControl& ctl = {});

}  // namespace cev
