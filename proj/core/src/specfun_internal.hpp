#pragma once

#include "cev/specfun.hpp"

namespace cev::detail {

// log(y^a e^{-y} / Γ(a + 1)), stable for large a and y.
double log_poisson_term(double a, double y);

// log G(a, y); the series branch returns log1p(-P) so values near 1 stay exact.
double log_reg_gamma_upper(double a, double y);

// log(e^{-z} I_ν(z)) for z > 0, ν > -1.
double log_bessel_i_scaled(double nu, double z);

// log p(w; df, λ) given both w and log w, so callers can pass arguments whose
// w has underflowed. Uses the leading Bessel term once √(λw) is negligible.
double log_nc_chi2_pdf(double w, double log_w, double df, double lambda);

// Σ_{j>=0} Pois(j; x) G(a0 + j, y) for x > 0, y > 0.
double poisson_gamma_mixture(double a0, double x, double y, const SeriesControl& ctl);

}  // namespace cev::detail
