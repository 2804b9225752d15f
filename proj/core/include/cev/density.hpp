#pragma once

#include <cstddef>
#include <vector>

#include "cev/model.hpp"
#include "cev/specfun.hpp"

namespace cev {

struct DensityPoint {
    double s_T = 0.0;
    double phi = 0.0;
};

// Continuous part of the terminal law on a log-spaced grid. The point mass at
// zero is reported separately and never folded back into `points`.
struct DensityGrid {
    std::vector<DensityPoint> points;
    double mass = 0.0;           // trapezoid integral of phi over ln s
    double absorbed_mass = 0.0;  // max(0, 1 - mass)
};

/// Second strike derivative of the call price, ∂²C/∂K², in closed form.
double d2c_dk2(const CevParams& p, const SeriesControl& ctl = {});

/// Risk-neutral density of S_T at s_T: e^{rτ} ∂²C/∂K² evaluated at K = s_T.
double rn_density(const CevParams& p, double s_T, const SeriesControl& ctl = {});

/// n log-spaced points over [lo, hi].
DensityGrid density_grid(const CevParams& p, double lo, double hi, std::size_t n,
                         const SeriesControl& ctl = {});

/// Probability that the price is absorbed at zero before maturity, G(v, x).
double absorption_probability(const CevParams& p);

}  // namespace cev
