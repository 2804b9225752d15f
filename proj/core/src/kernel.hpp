#pragma once

#include "cev/model.hpp"
#include "cev/specfun.hpp"

namespace cev::detail {

// Transformed variables plus the two χ² survival values that every closed
// form shares. Built once per evaluation, never cached across calls.
struct Kernel {
    CevParams p;
    TransformedVars tv;
    double a = 0.0;         // 2 - β
    double discount = 0.0;  // e^{-rτ}
    double q_call = 0.0;    // Q(2y; 2+2v, 2x)
    double q_put = 0.0;     // Q(2x; 2v, 2y)
};

Kernel make_kernel(const CevParams& p, const SeriesControl& ctl);

double call_from(const Kernel& k);
double put_from(const Kernel& k);

// p(ω; df, λ) shorthand.
double pdf(double w, double df, double lambda);

// r / (m - 1), finite as r -> 0.
double rate_over_m_minus_one(const Kernel& k);

// 1/r - (2-β)τ/(m - 1), finite as r -> 0.
double rho_factor(const Kernel& k);

}  // namespace cev::detail
