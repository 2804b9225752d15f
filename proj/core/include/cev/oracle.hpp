#pragma once

#include <cstddef>
#include <cstdint>
#include <functional>
#include <optional>
#include <vector>

#include "cev/model.hpp"
#include "cev/pricing.hpp"
#include "cev/specfun.hpp"

namespace cev {

enum class Scheme { EulerAbsorbing };

struct SdeConfig {
    std::optional<double> drift;  // defaults to the risk-free rate
    std::size_t n_paths = 100'000;
    std::size_t n_steps = 1'000;
    std::uint64_t seed = 42;
    Scheme scheme = Scheme::EulerAbsorbing;
    bool antithetic = true;
    unsigned threads = 1;  // results do not depend on this
};

struct McEstimate {
    double mean = 0.0;
    double std_error = 0.0;
    double absorbed_fraction = 0.0;
};

// Euler-Maruyama on dS = μ S dt + δ S^{β/2} dW. A path that reaches zero stays
// there. Each antithetic pair draws from its own generator seeded from
// (seed, pair index), so estimates are reproducible across thread counts.
// With antithetic sampling the standard error is taken over pair averages.
McEstimate mc_price(const CevParams& p, OptionKind kind, const SdeConfig& cfg);

/// Simulated S_T for every path, absorbed paths included as 0.
std::vector<double> mc_terminal_prices(const CevParams& p, const SdeConfig& cfg);

/// Central difference of order 1 or 2.
double fd_derivative(const std::function<double(double)>& f, double x0, double h, int order);

/// Poisson-gamma mixture for Q(w; df, λ), summed front to back over exactly
/// n_terms terms in long double.
double nc_chi2_sf_bruteforce(const NcChi2Query& q, std::size_t n_terms);

/// Black-Scholes call.
double bs_reference(double spot, double strike, double rate, double vol, double tau);

/// Adaptive Gauss-Kronrod integral of f over [lo, hi]; hi may be +infinity.
double integrate(const std::function<double(double)>& f, double lo, double hi, double rel_tol = 1e-12);

}  // namespace cev
