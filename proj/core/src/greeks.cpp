#include "cev/greeks.hpp"

#include <cmath>

#include "kernel.hpp"

namespace cev {
namespace {

using detail::Kernel;
using detail::pdf;

// Densities that recur across the Greeks.
struct Densities {
    double p4 = 0.0;  // p(2y; 4+2v, 2x)
    double p6 = 0.0;  // p(2y; 6+2v, 2x)
    double p0 = 0.0;  // p(2x; 2v, 2y)
    double q2 = 0.0;  // p(2x; 2+2v, 2y)
};

Densities densities(const Kernel& k) {
    const auto& t = k.tv;
    return {.p4 = pdf(2.0 * t.y, 4.0 + 2.0 * t.v, 2.0 * t.x),
            .p6 = pdf(2.0 * t.y, 6.0 + 2.0 * t.v, 2.0 * t.x),
            .p0 = pdf(2.0 * t.x, 2.0 * t.v, 2.0 * t.y),
            .q2 = pdf(2.0 * t.x, 2.0 + 2.0 * t.v, 2.0 * t.y)};
}

// S p(2y; 4+2v, 2x) - K e^{-rτ} p(2x; 2v, 2y), common to theta, vega and rho.
double hedge_term(const Kernel& k, const Densities& d) {
    return k.p.spot * d.p4 - k.p.strike * k.discount * d.p0;
}

double call_delta(const Kernel& k, const Densities& d) {
    const double two_xa = 2.0 * k.tv.x * k.a;
    return k.q_call + two_xa * d.p4 - two_xa / k.p.spot * k.p.strike * k.discount * d.p0;
}

double delta_of(const Kernel& k, const Densities& d, OptionKind kind) {
    const double dc = call_delta(k, d);
    return kind == OptionKind::Call ? dc : dc - 1.0;
}

double gamma_of(const Kernel& k, const Densities& d) {
    const double S = k.p.spot;
    const double x = k.tv.x;
    const double y = k.tv.y;
    const double a2 = k.a * k.a;
    const double pv_strike = k.p.strike * k.discount;
    return 2.0 * x * a2 / S * ((3.0 - k.p.beta) / k.a - x) * d.p4 + 2.0 * x * x * a2 / S * d.p6 +
           2.0 * x * x * a2 / (S * S) * pv_strike * d.p0 - 2.0 * x * y * a2 / (S * S) * pv_strike * d.q2;
}

double theta_of(const Kernel& k, const Densities& d, OptionKind kind, const SeriesControl& ctl) {
    const double decay = 2.0 * k.tv.x * k.a * detail::rate_over_m_minus_one(k) * hedge_term(k, d);
    const double carry = k.p.strike * k.p.rate * k.discount;
    if (kind == OptionKind::Call) {
        const double q = nc_chi2_sf_complement_df(2.0 * k.tv.y, 2.0 - 2.0 * k.tv.v, 2.0 * k.tv.x, ctl);
        return -carry * q + decay;
    }
    return carry * k.q_put + decay;
}

double vega_of(const Kernel& k, const Densities& d) {
    return -4.0 * k.tv.x / sigma0(k.p) * hedge_term(k, d);
}

double rho_of(const Kernel& k, const Densities& d, OptionKind kind) {
    const double curve = 2.0 * k.tv.x * detail::rho_factor(k) * hedge_term(k, d);
    const double annuity = k.p.strike * k.p.tau * k.discount;
    if (kind == OptionKind::Call) {
        return annuity * (1.0 - k.q_put) + curve;
    }
    return -annuity * k.q_put + curve;
}

Kernel kernel_for(const CevParams& p, const SeriesControl& ctl) {
    validate(p);
    return detail::make_kernel(p, ctl);
}

}  // namespace

double delta(const CevParams& p, OptionKind kind, const SeriesControl& ctl) {
    const Kernel k = kernel_for(p, ctl);
    return delta_of(k, densities(k), kind);
}

double gamma(const CevParams& p, const SeriesControl& ctl) {
    const Kernel k = kernel_for(p, ctl);
    return gamma_of(k, densities(k));
}

double theta(const CevParams& p, OptionKind kind, const SeriesControl& ctl) {
    const Kernel k = kernel_for(p, ctl);
    return theta_of(k, densities(k), kind, ctl);
}

double vega(const CevParams& p, const SeriesControl& ctl) {
    const Kernel k = kernel_for(p, ctl);
    return vega_of(k, densities(k));
}

double rho(const CevParams& p, OptionKind kind, const SeriesControl& ctl) {
    const Kernel k = kernel_for(p, ctl);
    return rho_of(k, densities(k), kind);
}

GreeksReport full_report(const CevParams& p, OptionKind kind, const SeriesControl& ctl) {
    const Kernel k = kernel_for(p, ctl);
    const Densities d = densities(k);
    return {.price = kind == OptionKind::Call ? detail::call_from(k) : detail::put_from(k),
            .delta = delta_of(k, d, kind),
            .gamma = gamma_of(k, d),
            .theta = theta_of(k, d, kind, ctl),
            .vega = vega_of(k, d),
            .rho = rho_of(k, d, kind)};
}

double taylor_pnl(const GreeksReport& report, double dS) {
    return report.delta * dS + 0.5 * report.gamma * dS * dS;
}

double pde_residual(const CevParams& p, OptionKind kind, const SeriesControl& ctl) {
    const GreeksReport g = full_report(p, kind, ctl);
    const double diffusion = 0.5 * p.delta_vol * p.delta_vol * std::pow(p.spot, p.beta);
    return p.rate * g.price - g.theta - diffusion * g.gamma - p.rate * p.spot * g.delta;
}

}  // namespace cev
