#pragma once

#include "cev/model.hpp"
#include "cev/specfun.hpp"

namespace cev::detail {

// ∂C/∂K kept in the three-term form obtained by differentiating the call
// price term by term, before the density identity collapses it to
// -e^{-rτ}(1 - Q(2x; 2v, 2y)). Exposed for step-by-step testing only.
double dc_dk(const CevParams& p, const SeriesControl& ctl = {});

}  // namespace cev::detail
