#pragma once

#include <cstddef>

namespace cev {

// Query for the non-central chi-squared kernel. `w` is the distribution
// argument, `df` the degrees of freedom and `noncentrality` the non-centrality
// parameter.
struct NcChi2Query {
    double w = 0.0;
    double df = 1.0;
    double noncentrality = 0.0;
};

// Tuning of the Poisson-mixture series.
//
// rel_tol             tail bound relative to the running sum at which a sweep stops.
// max_terms           total term budget across both sweep directions.
// log_space_threshold running mantissas whose natural log drops below this
//                     (or rises above its negation) are folded into a separate
//                     exponent, so arbitrarily small or large factors never
//                     underflow or overflow.
struct SeriesControl {
    double rel_tol = 1e-13;
    std::size_t max_terms = 1'000'000;
    double log_space_threshold = -600.0;
};

// Validates `ctl` and throws std::invalid_argument if rel_tol <= 0 or
// max_terms == 0.
void validate(const SeriesControl& ctl);

/// Natural log of the gamma function. Throws std::domain_error for a <= 0.
double ln_gamma(double a);

/// Regularized upper incomplete gamma G(a, y) = Γ(a, y) / Γ(a).
double reg_gamma_upper(double a, double y);

/// exp(-z) I_order(z), the exponentially scaled modified Bessel function of the
/// first kind. Finite for all z >= 0; requires order > -1.
double bessel_i_scaled(double order, double z);

/// Survival function Q(w; df, λ) of the non-central chi-squared distribution.
///
/// Sums the Poisson mixture Σ_j Pois(j; λ/2) G(df/2 + j, w/2) outward from the
/// dominant Poisson index. Throws NonConvergence when `ctl.max_terms` is
/// exhausted and std::domain_error when df <= 0, w < 0 or λ < 0.
double nc_chi2_sf(const NcChi2Query& q, const SeriesControl& ctl = {});

/// Q(w; df, λ) for df < 2 (including df <= 0), defined through the swapped
/// complement 1 - Q(λ; 2 - df, w).
double nc_chi2_sf_complement_df(double w, double df, double lambda, const SeriesControl& ctl = {});

/// Density p(w; df, λ) of the non-central chi-squared distribution, evaluated
/// in log space through the scaled Bessel function. λ = 0 falls back to the
/// central density.
double nc_chi2_pdf(const NcChi2Query& q);

}  // namespace cev
