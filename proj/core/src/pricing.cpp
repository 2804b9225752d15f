#include "cev/pricing.hpp"

#include <algorithm>
#include <cmath>

#include "kernel.hpp"

namespace cev {
namespace detail {

Kernel make_kernel(const CevParams& p, const SeriesControl& ctl) {
    Kernel k;
    k.p = p;
    k.tv = transform(p);
    k.a = 2.0 - p.beta;
    k.discount = std::exp(-p.rate * p.tau);
    const auto& tv = k.tv;
    k.q_call = nc_chi2_sf({.w = 2.0 * tv.y, .df = 2.0 + 2.0 * tv.v, .noncentrality = 2.0 * tv.x}, ctl);
    k.q_put = nc_chi2_sf({.w = 2.0 * tv.x, .df = 2.0 * tv.v, .noncentrality = 2.0 * tv.y}, ctl);
    return k;
}

// Prices are clamped into the no-arbitrage band; at extreme moneyness the
// subtraction in the closed form leaves residues of order 1e-16 * (S + K).
double call_from(const Kernel& k) {
    const double S = k.p.spot;
    const double pv_strike = k.p.strike * k.discount;
    const double c = S * k.q_call - pv_strike * (1.0 - k.q_put);
    return std::clamp(c, std::max(S - pv_strike, 0.0), S);
}

double put_from(const Kernel& k) {
    const double S = k.p.spot;
    const double pv_strike = k.p.strike * k.discount;
    const double p = pv_strike * k.q_put - S * (1.0 - k.q_call);
    return std::clamp(p, std::max(pv_strike - S, 0.0), pv_strike);
}

double pdf(double w, double df, double lambda) {
    return nc_chi2_pdf({.w = w, .df = df, .noncentrality = lambda});
}

double rate_over_m_minus_one(const Kernel& k) {
    const double a_tau = k.a * k.p.tau;
    const double u = k.p.rate * a_tau;
    const double damping = std::abs(u) < 1e-8 ? 1.0 - 0.5 * u : u / std::expm1(u);
    return damping / a_tau;
}

double rho_factor(const Kernel& k) {
    const double a_tau = k.a * k.p.tau;
    const double u = k.p.rate * a_tau;
    if (std::abs(u) < 1e-3) {
        // 1/u - 1/(e^u - 1) = 1/2 - u/12 + u^3/720 - u^5/30240 + ...
        const double u2 = u * u;
        return a_tau * (0.5 - u / 12.0 + u * u2 / 720.0 - u * u2 * u2 / 30240.0);
    }
    return a_tau * (1.0 / u - 1.0 / std::expm1(u));
}

}  // namespace detail

double call_price(const CevParams& p, const SeriesControl& ctl) {
    validate(p);
    if (p.tau == 0.0) {
        return std::max(p.spot - p.strike, 0.0);
    }
    return detail::call_from(detail::make_kernel(p, ctl));
}

double put_price(const CevParams& p, const SeriesControl& ctl) {
    validate(p);
    if (p.tau == 0.0) {
        return std::max(p.strike - p.spot, 0.0);
    }
    return detail::put_from(detail::make_kernel(p, ctl));
}

double price(const CevParams& p, OptionKind kind, const SeriesControl& ctl) {
    return kind == OptionKind::Call ? call_price(p, ctl) : put_price(p, ctl);
}

}  // namespace cev
