#pragma once

#include <string>
#include <string_view>
#include <vector>

#include "cev/asymptotics.hpp"
#include "cev/density.hpp"
#include "cev/greeks.hpp"
#include "cev/model.hpp"

namespace cev::io {

// Numbers are written with 17 significant digits so that reading them back
// reproduces the same doubles. Infinities become the strings "+inf" and "-inf",
// NaN becomes null.
std::string format_number(double x);

/// Reads {spot, strike, rate, delta_vol, beta, tau} over `base`. Missing keys
/// keep their value from `base`; unknown keys and non-numeric values raise
/// ValidationError.
CevParams params_from_json(std::string_view text, const CevParams& base = {});
std::string params_to_json(const CevParams& p);

std::string to_json(const GreeksReport& g);
GreeksReport greeks_from_json(std::string_view text);

std::string to_json(const DensityGrid& grid);
std::string to_csv(const DensityGrid& grid);

std::string to_json(const std::vector<ConvergenceReport>& reports);
std::string to_csv(const std::vector<ConvergenceReport>& reports);
std::string to_table(const std::vector<ConvergenceReport>& reports);

}  // namespace cev::io
