#include "cev/specfun.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <stdexcept>
#include <string>

#include <boost/math/special_functions/gamma.hpp>

#include "cev/errors.hpp"
#include "specfun_internal.hpp"

namespace cev {
namespace {

constexpr double kLn2 = 0.69314718055994530942;
constexpr double kLn2Pi = 1.8378770664093454836;
constexpr double kHalfLn2Pi = 0.91893853320467274178;
constexpr double kEps = std::numeric_limits<double>::epsilon();
constexpr std::size_t kGammaMaxIter = 10'000'000;

// Log of the Chernoff bound on the χ'²(k, λ) mass beyond w: the upper tail
// when w > λ + k, the lower tail otherwise. s = 1/(1 - 2t) solves the
// stationarity condition λs² + ks - w = 0.
double log_chernoff_tail(double w, double k, double lambda) {
    const double s = 2.0 * w / (k + std::sqrt(k * k + 4.0 * lambda * w));
    const double t = 0.5 * (1.0 - 1.0 / s);
    return -t * w + lambda * t * s + 0.5 * k * std::log(s);
}

// ln Γ(n+1) - [(n + 1/2) ln n - n + ln √(2π)]
double stirling_error(double n) {
    if (n <= 15.0) {
        return ln_gamma(n + 1.0) - (n + 0.5) * std::log(n) + n - kHalfLn2Pi;
    }
    constexpr double s0 = 1.0 / 12.0;
    constexpr double s1 = 1.0 / 360.0;
    constexpr double s2 = 1.0 / 1260.0;
    constexpr double s3 = 1.0 / 1680.0;
    constexpr double s4 = 1.0 / 1188.0;
    const double nn = n * n;
    return (s0 - (s1 - (s2 - (s3 - s4 / nn) / nn) / nn) / nn) / n;
}

// x ln(x / np) + np - x without cancellation near x == np.
double deviance_term(double x, double np) {
    if (std::abs(x - np) < 0.1 * (x + np)) {
        const double v = (x - np) / (x + np);
        const double v2 = v * v;
        double s = (x - np) * v;
        double ej = 2.0 * x * v;
        for (int j = 1; j < 1000; ++j) {
            ej *= v2;
            const double next = s + ej / (2 * j + 1);
            if (next == s) {
                return next;
            }
            s = next;
        }
        return s;
    }
    return x * std::log(x / np) + np - x;
}

void require(bool ok, const char* what) {
    if (!ok) {
        throw std::domain_error(what);
    }
}

}  // namespace

namespace detail {

double log_poisson_term(double a, double y) {
    if (y == 0.0) {
        return a == 0.0 ? 0.0 : -std::numeric_limits<double>::infinity();
    }
    if (a == 0.0) {
        return -y;
    }
    if (a < 1.0) {
        return a * std::log(y) - y - ln_gamma(a + 1.0);
    }
    return -stirling_error(a) - deviance_term(a, y) - 0.5 * (kLn2Pi + std::log(a));
}

double log_reg_gamma_upper(double a, double y) {
    if (y == 0.0) {
        return 0.0;
    }
    if (std::isinf(y)) {
        return -std::numeric_limits<double>::infinity();
    }
    const double log_t = log_poisson_term(a, y);

    if (y < a + 1.0) {
        // Lower tail P(a, y) = T(a, y) * Σ_n y^n / ((a+1)...(a+n)).
        double term = 1.0;
        double sum = 1.0;
        for (std::size_t n = 1; n < kGammaMaxIter; ++n) {
            term *= y / (a + static_cast<double>(n));
            sum += term;
            if (term < sum * kEps) {
                return std::log1p(-std::exp(log_t) * sum);
            }
        }
        throw NonConvergence("reg_gamma_upper: lower series did not converge");
    }

    // Modified Lentz evaluation of the continued fraction for Γ(a, y).
    constexpr double tiny = 1e-300;
    double b = y + 1.0 - a;
    double c = 1.0 / tiny;
    double d = 1.0 / b;
    double h = d;
    for (std::size_t i = 1; i < kGammaMaxIter; ++i) {
        const double di = static_cast<double>(i);
        const double an = -di * (di - a);
        b += 2.0;
        d = an * d + b;
        if (std::abs(d) < tiny) {
            d = tiny;
        }
        c = b + an / c;
        if (std::abs(c) < tiny) {
            c = tiny;
        }
        d = 1.0 / d;
        const double delta = d * c;
        h *= delta;
        if (std::abs(delta - 1.0) < kEps) {
            // y^a e^{-y} / Γ(a) = a T(a, y)
            return std::log(a) + log_t + std::log(h);
        }
    }
    throw NonConvergence("reg_gamma_upper: continued fraction did not converge");
}

double log_bessel_i_scaled(double nu, double z) {
    if (z >= 50.0 && z >= 2.0 * nu * nu) {
        // Hankel expansion: I_ν(z) e^{-z} √(2πz) = Σ (-1)^k a_k(ν) / z^k
        const double mu = 4.0 * nu * nu;
        double term = 1.0;
        double sum = 1.0;
        for (int k = 1; k < 500; ++k) {
            const double odd = 2.0 * k - 1.0;
            const double next = -term * (mu - odd * odd) / (8.0 * k * z);
            if (k > 1 && std::abs(next) >= std::abs(term)) {
                break;
            }
            term = next;
            sum += term;
            if (std::abs(term) < 1e-17 * std::abs(sum)) {
                break;
            }
        }
        return -0.5 * (kLn2Pi + std::log(z)) + std::log(sum);
    }

    // Power series, summed outward from its largest term.
    const double half = 0.5 * z;
    const double quarter_sq = half * half;
    const double peak = std::floor(std::max(0.0, 0.5 * (-nu + std::sqrt(nu * nu + z * z))));
    const double log_peak =
        (nu + 2.0 * peak) * std::log(half) - ln_gamma(peak + 1.0) - ln_gamma(nu + peak + 1.0);

    double sum = 1.0;
    double term = 1.0;
    for (double j = peak;; j += 1.0) {
        term *= quarter_sq / ((j + 1.0) * (nu + j + 1.0));
        sum += term;
        if (term < 1e-17 * sum) {
            break;
        }
    }
    term = 1.0;
    for (double j = peak; j > 0.0; j -= 1.0) {
        term *= j * (nu + j) / quarter_sq;
        sum += term;
        if (term < 1e-17 * sum) {
            break;
        }
    }
    return log_peak + std::log(sum) - z;
}

double log_nc_chi2_pdf(double w, double log_w, double df, double lambda) {
    const double nu = 0.5 * df - 1.0;
    if (lambda == 0.0) {
        return nu * log_w - 0.5 * w - (nu + 1.0) * kLn2 - ln_gamma(nu + 1.0);
    }
    const double log_lambda = std::log(lambda);
    if (0.5 * (log_lambda + log_w) < -230.0) {
        // I_ν(z) = (z/2)^ν / Γ(ν+1) to double precision; the powers of λ cancel.
        return -kLn2 - 0.5 * (lambda + w) + nu * (log_w - kLn2) - ln_gamma(nu + 1.0);
    }
    const double ratio = w / lambda;
    const double log_ratio = std::isnormal(ratio) ? std::log(ratio) : log_w - log_lambda;
    const double gap = std::sqrt(lambda) - std::sqrt(w);
    return -kLn2 - 0.5 * gap * gap + 0.5 * nu * log_ratio + log_bessel_i_scaled(nu, std::sqrt(lambda * w));
}

double poisson_gamma_mixture(double a0, double x, double y, const SeriesControl& ctl) {
    const double mode = std::floor(x);
    const double log_w_mode = log_poisson_term(mode, x);
    const double log_g_mode = log_reg_gamma_upper(a0 + mode, y);
    const double log_t_mode = log_poisson_term(a0 + mode, y);

    const double fold = -ctl.log_space_threshold;
    const double big = std::exp(fold);
    const double small = std::exp(-fold);

    std::size_t used = 0;
    auto spend = [&] {
        if (++used > ctl.max_terms) {
            throw NonConvergence("nc_chi2_sf: term budget of " + std::to_string(ctl.max_terms) +
                                 " exhausted");
        }
    };

    // Each running quantity is mantissa * exp(exponent); the sum starts in
    // units of the mode term.
    double s = 0.0;
    double s_exp = log_w_mode + log_g_mode;

    // Upward sweep j = mode, mode + 1, ... The term ratio is non-increasing in
    // j, so once terms decrease the remaining tail is bounded geometrically.
    {
        double w = 1.0;
        double w_exp = log_w_mode;
        double g = 1.0;
        double g_exp = log_g_mode;
        double t = std::exp(log_t_mode - log_g_mode);
        double factor = 1.0;
        double prev = 0.0;
        auto refresh_factor = [&] {
            factor = std::exp(w_exp + g_exp - s_exp);
            if (factor > big) {
                const double shift = std::exp(s_exp - (w_exp + g_exp));
                s *= shift;
                prev *= shift;
                s_exp = w_exp + g_exp;
                factor = 1.0;
            }
        };
        for (double j = mode;; j += 1.0) {
            spend();
            const double term = w * g * factor;
            s += term;
            if (j > mode && term < prev) {
                const double ratio = term / prev;
                if (term * ratio <= ctl.rel_tol * s * (1.0 - ratio)) {
                    break;
                }
            }
            prev = term;
            if (s > big) {
                s *= small;
                prev *= small;
                s_exp += fold;
                refresh_factor();
            }

            const double a = a0 + j;
            w *= x / (j + 1.0);
            g += t;
            t *= y / (a + 1.0);
            if (g > big) {
                g *= small;
                t *= small;
                g_exp += fold;
                refresh_factor();
            }
            if (w < small) {
                w *= big;
                w_exp -= fold;
                refresh_factor();
            }
        }
    }

    // Downward sweep j = mode - 1, ..., 0 using G(a - 1) = G(a) - T(a - 1).
    // Both Poisson weight and gamma tail shrink, so the ratio is bounded by j / x.
    {
        double w = 1.0;
        double g = 1.0;
        double t = std::exp(log_t_mode - log_g_mode);
        const double factor = std::exp(log_w_mode + log_g_mode - s_exp);
        for (double j = mode; j > 0.0; j -= 1.0) {
            const double a = a0 + j;
            w *= j / x;
            t *= a / y;
            g -= t;
            if (g <= 0.0) {
                break;
            }
            spend();
            const double term = w * g * factor;
            s += term;
            const double bound = (j - 1.0) / x;
            if (term == 0.0 || term * bound <= ctl.rel_tol * s * (1.0 - bound)) {
                break;
            }
        }
    }

    if (s <= 0.0) {
        return 0.0;
    }
    return std::clamp(std::exp(std::log(s) + s_exp), 0.0, 1.0);
}

}  // namespace detail

void validate(const SeriesControl& ctl) {
    if (!(ctl.rel_tol > 0.0)) {
        throw std::invalid_argument("SeriesControl: rel_tol must be positive");
    }
    if (ctl.max_terms < 1) {
        throw std::invalid_argument("SeriesControl: max_terms must be at least 1");
    }
    if (!(ctl.log_space_threshold < -1.0 && ctl.log_space_threshold > -700.0)) {
        throw std::invalid_argument("SeriesControl: log_space_threshold must lie in (-700, -1)");
    }
}

double ln_gamma(double a) {
    require(a > 0.0, "ln_gamma: argument must be positive");
    return boost::math::lgamma(a);
}

double reg_gamma_upper(double a, double y) {
    require(a > 0.0, "reg_gamma_upper: shape must be positive");
    require(y >= 0.0, "reg_gamma_upper: argument must be nonnegative");
    return std::exp(detail::log_reg_gamma_upper(a, y));
}

double bessel_i_scaled(double order, double z) {
    require(z >= 0.0, "bessel_i_scaled: argument must be nonnegative");
    require(order > -1.0, "bessel_i_scaled: order must exceed -1");
    if (z == 0.0) {
        if (order == 0.0) {
            return 1.0;
        }
        return order > 0.0 ? 0.0 : std::numeric_limits<double>::infinity();
    }
    return std::exp(detail::log_bessel_i_scaled(order, z));
}

double nc_chi2_sf(const NcChi2Query& q, const SeriesControl& ctl) {
    validate(ctl);
    require(q.df > 0.0, "nc_chi2_sf: degrees of freedom must be positive");
    require(q.w >= 0.0, "nc_chi2_sf: argument must be nonnegative");
    require(q.noncentrality >= 0.0, "nc_chi2_sf: non-centrality must be nonnegative");
    if (q.w == 0.0) {
        return 1.0;
    }
    if (std::isinf(q.w)) {
        return 0.0;
    }
    const double a0 = 0.5 * q.df;
    const double y = 0.5 * q.w;
    if (q.noncentrality == 0.0) {
        return reg_gamma_upper(a0, y);
    }
    // Far in either tail the answer is 0 or 1 to double precision, while the
    // series would have to walk millions of terms to find it out.
    const double log_tail = log_chernoff_tail(q.w, q.df, q.noncentrality);
    if (q.w > q.noncentrality + q.df) {
        if (log_tail < std::log(std::numeric_limits<double>::min())) return 0.0;
    } else if (log_tail < -54.0 * kLn2) {
        return 1.0;
    }
    return detail::poisson_gamma_mixture(a0, 0.5 * q.noncentrality, y, ctl);
}

double nc_chi2_sf_complement_df(double w, double df, double lambda, const SeriesControl& ctl) {
    return 1.0 - nc_chi2_sf({.w = lambda, .df = 2.0 - df, .noncentrality = w}, ctl);
}

double nc_chi2_pdf(const NcChi2Query& q) {
    require(q.w > 0.0, "nc_chi2_pdf: argument must be positive");
    require(q.df > 0.0, "nc_chi2_pdf: degrees of freedom must be positive");
    require(q.noncentrality >= 0.0, "nc_chi2_pdf: non-centrality must be nonnegative");
    return std::exp(detail::log_nc_chi2_pdf(q.w, std::log(q.w), q.df, q.noncentrality));
}

}  // namespace cev
