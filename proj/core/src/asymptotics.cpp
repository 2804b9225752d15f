#include "cev/asymptotics.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <stdexcept>
#include <string>
#include <utility>

#include "cev/errors.hpp"
#include "cev/greeks.hpp"

namespace cev {
namespace {

constexpr double inf = std::numeric_limits<double>::infinity();

LimitTable tau_to_zero(const CevParams& p) {
    if (p.spot == p.strike) {
        throw ValidationError("strike", "the tau -> 0 limits are only defined for spot != strike");
    }
    LimitTable t;
    const bool itm = p.spot > p.strike;
    t[Quantity::Call] = itm ? p.spot - p.strike : 0.0;
    t[Quantity::Put] = itm ? 0.0 : p.strike - p.spot;
    t[Quantity::DeltaCall] = itm ? 1.0 : 0.0;
    t[Quantity::DeltaPut] = itm ? 0.0 : -1.0;
    t[Quantity::ThetaCall] = itm ? -p.rate * p.strike : 0.0;
    t[Quantity::ThetaPut] = itm ? 0.0 : p.rate * p.strike;
    return t;
}

LimitTable sigma_to_inf(const CevParams& p) {
    LimitTable t;
    const double pv_strike = p.strike * std::exp(-p.rate * p.tau);
    t[Quantity::Call] = p.spot;
    t[Quantity::Put] = pv_strike;
    t[Quantity::DeltaCall] = 1.0;
    t[Quantity::ThetaPut] = p.rate * pv_strike;
    t[Quantity::RhoPut] = -p.tau * pv_strike;
    return t;
}

LimitTable strike_to_inf() {
    LimitTable t;
    t[Quantity::Put] = inf;
    t[Quantity::DeltaPut] = -1.0;
    t[Quantity::ThetaPut] = inf;
    t[Quantity::RhoPut] = -inf;
    return t;
}

// r -> ∞ and T -> ∞ share the same table: the call tends to the stock.
LimitTable call_becomes_stock(const CevParams& p) {
    LimitTable t;
    t[Quantity::Call] = p.spot;
    t[Quantity::DeltaCall] = 1.0;
    return t;
}

std::array<double, all_quantities.size()> observe(const CevParams& p, const SeriesControl& ctl) {
    const GreeksReport c = full_report(p, OptionKind::Call, ctl);
    const GreeksReport q = full_report(p, OptionKind::Put, ctl);
    return {c.price, q.price, c.delta, q.delta, c.gamma, c.theta, q.theta, c.vega, c.rho, q.rho};
}

Verdict grade_finite(const std::vector<double>& errors, double limit, double tol) {
    const double scale = 1.0 + std::abs(limit);
    if (errors.empty() || !(errors.back() <= tol * scale)) {
        return Verdict::Failed;
    }
    // Trailing errors must not grow, except below a floor where roundoff
    // dominates the asymptotic error.
    const double floor = 1e-3 * tol * scale;
    const std::size_t start = errors.size() >= 3 ? errors.size() - 3 : 0;
    for (std::size_t i = start + 1; i < errors.size(); ++i) {
        if (errors[i] > errors[i - 1] && errors[i] > floor) {
            return Verdict::Failed;
        }
    }
    return Verdict::Converged;
}

Verdict grade_infinite(const std::vector<double>& values, double limit) {
    if (values.size() < 2) {
        return Verdict::Failed;
    }
    for (std::size_t i = 0; i < values.size(); ++i) {
        if (!std::isfinite(values[i]) || std::signbit(values[i]) != std::signbit(limit) || values[i] == 0.0) {
            return Verdict::Failed;
        }
        if (i > 0 && !(std::abs(values[i]) > std::abs(values[i - 1]))) {
            return Verdict::Failed;
        }
    }
    return std::abs(values.back()) >= 10.0 * std::abs(values.front()) ? Verdict::DivergedAsExpected
                                                                        : Verdict::Failed;
}

}  // namespace

std::string_view to_string(Quantity q) {
    switch (q) {
        case Quantity::Call: return "C";
        case Quantity::Put: return "P";
        case Quantity::DeltaCall: return "delta_C";
        case Quantity::DeltaPut: return "delta_P";
        case Quantity::Gamma: return "gamma";
        case Quantity::ThetaCall: return "theta_C";
        case Quantity::ThetaPut: return "theta_P";
        case Quantity::Vega: return "vega";
        case Quantity::RhoCall: return "rho_C";
        case Quantity::RhoPut: return "rho_P";
    }
    return "?";
}

std::string_view to_string(LimitCase c) {
    switch (c) {
        case LimitCase::TauToZero: return "a";
        case LimitCase::SigmaToInf: return "b";
        case LimitCase::StrikeToInf: return "c";
        case LimitCase::RateToInf: return "d";
        case LimitCase::MaturityToInf: return "e";
    }
    return "?";
}

LimitCase parse_limit_case(std::string_view id) {
    if (id == "a") return LimitCase::TauToZero;
    if (id == "b") return LimitCase::SigmaToInf;
    if (id == "c") return LimitCase::StrikeToInf;
    if (id == "d") return LimitCase::RateToInf;
    if (id == "e") return LimitCase::MaturityToInf;
    throw ValidationError("case", "expected one of a, b, c, d, e");
}

std::string_view to_string(Verdict v) {
    switch (v) {
        case Verdict::Converged: return "converged";
        case Verdict::DivergedAsExpected: return "diverged_as_expected";
        case Verdict::Failed: return "FAILED";
    }
    return "?";
}

LimitTable limit_table(LimitCase c, const CevParams& p) {
    switch (c) {
        case LimitCase::TauToZero: return tau_to_zero(p);
        case LimitCase::SigmaToInf: return sigma_to_inf(p);
        case LimitCase::StrikeToInf: return strike_to_inf();
        case LimitCase::RateToInf:
        case LimitCase::MaturityToInf: return call_becomes_stock(p);
    }
    throw std::invalid_argument("limit_table: unknown case");
}

CevParams apply_driver(LimitCase c, const CevParams& p, double value) {
    CevParams out = p;
    switch (c) {
        case LimitCase::TauToZero:
        case LimitCase::MaturityToInf: out.tau = value; break;
        case LimitCase::SigmaToInf: out.delta_vol = value; break;
        case LimitCase::StrikeToInf: out.strike = value; break;
        case LimitCase::RateToInf: out.rate = value; break;
    }
    return out;
}

std::vector<double> default_schedule(LimitCase c, const CevParams& p) {
    switch (c) {
        case LimitCase::TauToZero: return {1e-1, 1e-2, 1e-3, 1e-4, 1e-5};
        case LimitCase::SigmaToInf: {
            std::vector<double> s;
            for (int i = 1; i <= 5; ++i) {
                s.push_back(p.delta_vol * std::pow(10.0, i));
            }
            return s;
        }
        case LimitCase::StrikeToInf: {
            std::vector<double> s;
            for (double f = 2.0; f <= 32.0; f *= 2.0) {
                s.push_back(p.spot * f);
            }
            return s;
        }
        case LimitCase::RateToInf: return {1.25, 2.5, 5.0, 10.0, 20.0};
        case LimitCase::MaturityToInf: return {40.0, 80.0, 160.0, 320.0, 640.0};
    }
    return {};
}

std::vector<ConvergenceReport> verify_case(LimitCase c, const CevParams& p, const std::vector<double>& schedule,
                                           double tol, const SeriesControl& ctl) {
    if (schedule.size() < 4) {
        throw std::invalid_argument("verify_case: schedule needs at least 4 points");
    }
    const bool increasing = schedule[1] > schedule[0];
    for (std::size_t i = 1; i < schedule.size(); ++i) {
        if (increasing ? !(schedule[i] > schedule[i - 1]) : !(schedule[i] < schedule[i - 1])) {
            throw std::invalid_argument("verify_case: schedule must be strictly monotone");
        }
    }
    if (!(tol > 0.0)) {
        throw std::invalid_argument("verify_case: tol must be positive");
    }

    std::vector<double> evaluated;
    std::vector<std::array<double, all_quantities.size()>> observed;
    for (double s : schedule) {
        const CevParams at = apply_driver(c, p, s);
        validate(at);
        try {
            observed.push_back(observe(at, ctl));
        } catch (const NonConvergence&) {
            if (c != LimitCase::TauToZero || observed.empty()) {
                throw;
            }
            break;
        }
        evaluated.push_back(s);
    }

    // Limits depend only on the held-fixed parameters, never on the driver.
    const LimitTable table = limit_table(c, p);
    std::vector<ConvergenceReport> reports;
    for (Quantity q : all_quantities) {
        ConvergenceReport r;
        r.case_id = c;
        r.quantity = q;
        r.limit = table[q];
        r.schedule = evaluated;
        for (const auto& row : observed) {
            const double value = row[static_cast<std::size_t>(q)];
            r.values.push_back(value);
            r.errors.push_back(std::isinf(r.limit) ? 1.0 / std::abs(value) : std::abs(value - r.limit));
        }
        r.verdict = std::isinf(r.limit) ? grade_infinite(r.values, r.limit) : grade_finite(r.errors, r.limit, tol);
        reports.push_back(std::move(r));
    }
    return reports;
}

}  // namespace cev
