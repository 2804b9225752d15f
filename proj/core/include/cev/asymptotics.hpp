#pragma once

#include <array>
#include <cstddef>
#include <string_view>
#include <vector>

#include "cev/model.hpp"
#include "cev/specfun.hpp"

namespace cev {

enum class LimitCase { TauToZero, SigmaToInf, StrikeToInf, RateToInf, MaturityToInf };

enum class Quantity { Call, Put, DeltaCall, DeltaPut, Gamma, ThetaCall, ThetaPut, Vega, RhoCall, RhoPut };

inline constexpr std::array<Quantity, 10> all_quantities = {
    Quantity::Call,     Quantity::Put,      Quantity::DeltaCall, Quantity::DeltaPut, Quantity::Gamma,
    Quantity::ThetaCall, Quantity::ThetaPut, Quantity::Vega,      Quantity::RhoCall,  Quantity::RhoPut};

std::string_view to_string(Quantity q);

// Single-letter case ids a..e.
std::string_view to_string(LimitCase c);
LimitCase parse_limit_case(std::string_view id);

// Limit of each quantity; entries may be ±infinity.
struct LimitTable {
    std::array<double, all_quantities.size()> values{};

    double operator[](Quantity q) const { return values[static_cast<std::size_t>(q)]; }
    double& operator[](Quantity q) { return values[static_cast<std::size_t>(q)]; }
};

enum class Verdict { Converged, DivergedAsExpected, Failed };

std::string_view to_string(Verdict v);

struct ConvergenceReport {
    LimitCase case_id = LimitCase::TauToZero;
    Quantity quantity = Quantity::Call;
    double limit = 0.0;
    std::vector<double> schedule;  // driven parameter values actually evaluated
    std::vector<double> values;
    std::vector<double> errors;  // |value - limit|, or 1/|value| for infinite limits
    Verdict verdict = Verdict::Failed;
};

/// Limits of the ten quantities for the given case with the remaining
/// parameters held at `p`. The τ -> 0 case requires spot != strike and throws
/// ValidationError otherwise.
LimitTable limit_table(LimitCase c, const CevParams& p);

/// Driven parameter of each case: τ (a, e), δ (b), K (c), r (d).
CevParams apply_driver(LimitCase c, const CevParams& p, double value);

/// Geometric schedule moving the driven parameter toward its limit point.
std::vector<double> default_schedule(LimitCase c, const CevParams& p);

/// Evaluates prices and Greeks along `schedule` and grades each quantity
/// against limit_table. Finite limits converge when the final error is within
/// tol·(1 + |limit|) and the trailing errors do not grow; infinite limits must
/// grow in magnitude at every step with the right sign and end at least ten
/// times larger than they started.
///
/// Schedules need at least 4 strictly monotone points. Under τ -> 0 a
/// NonConvergence truncates the schedule at the last evaluated point; in
/// every other case it propagates.
std::vector<ConvergenceReport> verify_case(LimitCase c, const CevParams& p, const std::vector<double>& schedule,
                                           double tol, const SeriesControl& ctl = {});

}  // namespace cev
