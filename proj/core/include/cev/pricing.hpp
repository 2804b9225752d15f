#pragma once

#include "cev/model.hpp"
#include "cev/specfun.hpp"

namespace cev {

enum class OptionKind { Call, Put };

/// European call, C = S Q(2y; 2+2v, 2x) - K e^{-rτ} (1 - Q(2x; 2v, 2y)).
/// Returns the intrinsic value at τ = 0.
double call_price(const CevParams& p, const SeriesControl& ctl = {});

/// European put, P = K e^{-rτ} Q(2x; 2v, 2y) - S (1 - Q(2y; 2+2v, 2x)).
double put_price(const CevParams& p, const SeriesControl& ctl = {});

double price(const CevParams& p, OptionKind kind, const SeriesControl& ctl = {});

}  // namespace cev
