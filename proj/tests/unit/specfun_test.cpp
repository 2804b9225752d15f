#include "cev/specfun.hpp"

#include <cmath>
#include <limits>
#include <random>
#include <stdexcept>

#include <boost/math/special_functions/bessel.hpp>
#include <gtest/gtest.h>

#include "cev/errors.hpp"
#include "cev/oracle.hpp"

namespace {

using cev::NcChi2Query;

// Reference values computed at 50 digits in tests/reference/gen_reference.py.
constexpr double kLnGammaHalf = 0.57236494292470008707;
constexpr double kGamma25_37 = 0.1925504330793957315;
constexpr double kBesselHalf10 = 0.12615662584097981553;
constexpr double kQ_4_2_2 = 0.39429685889233156639;
constexpr double kOneMinusQ_22_25_31 = 0.21809758973459186781;
constexpr double kPdf_5_3_4 = 0.096982238035972207544;

double rel(double a, double b) { return std::abs(a - b) / std::abs(b); }

TEST(LnGamma, KnownValues) {
    EXPECT_EQ(cev::ln_gamma(1.0), 0.0);
    EXPECT_EQ(cev::ln_gamma(2.0), 0.0);
    EXPECT_LT(rel(cev::ln_gamma(0.5), kLnGammaHalf), 1e-15);
}

TEST(LnGamma, MatchesFactorialsAcrossRange) {
    double log_fact = 0.0;
    for (int n = 1; n <= 170; ++n) {
        EXPECT_LT(std::abs(cev::ln_gamma(n) - log_fact), 1e-14 * std::max(1.0, log_fact)) << n;
        log_fact += std::log(static_cast<double>(n));
    }
    EXPECT_LT(rel(cev::ln_gamma(1e-3), std::lgamma(1e-3)), 1e-14);
    EXPECT_LT(rel(cev::ln_gamma(1e3), std::lgamma(1e3)), 1e-14);
}

TEST(LnGamma, RejectsNonPositive) {
    EXPECT_THROW(cev::ln_gamma(0.0), std::domain_error);
    EXPECT_THROW(cev::ln_gamma(-1.5), std::domain_error);
}

TEST(RegGammaUpper, KnownValues) {
    EXPECT_EQ(cev::reg_gamma_upper(1.0, 0.0), 1.0);
    EXPECT_LT(rel(cev::reg_gamma_upper(1.0, 1.0), std::exp(-1.0)), 1e-15);
    EXPECT_LT(rel(cev::reg_gamma_upper(2.5, 3.7), kGamma25_37), 1e-14);
}

TEST(RegGammaUpper, DecreasingInY) {
    for (double a : {0.3, 1.0, 4.5, 60.0}) {
        double prev = 1.0;
        for (double y = 0.0; y < 4.0 * a + 20.0; y += 0.25) {
            const double g = cev::reg_gamma_upper(a, y);
            EXPECT_LE(g, prev) << a << ' ' << y;
            EXPECT_GE(g, 0.0);
            prev = g;
        }
    }
}

TEST(RegGammaUpper, DomainErrors) {
    EXPECT_THROW(cev::reg_gamma_upper(0.0, 1.0), std::domain_error);
    EXPECT_THROW(cev::reg_gamma_upper(1.0, -1.0), std::domain_error);
}

TEST(BesselIScaled, AtZero) {
    EXPECT_EQ(cev::bessel_i_scaled(0.0, 0.0), 1.0);
    EXPECT_EQ(cev::bessel_i_scaled(1.0, 0.0), 0.0);
}

TEST(BesselIScaled, HalfOrderReference) {
    EXPECT_LT(rel(cev::bessel_i_scaled(0.5, 10.0), kBesselHalf10), 1e-14);
}

TEST(BesselIScaled, AgreesWithBoostWhereBoostIsFinite) {
    for (double nu : {-0.5, 0.0, 0.3, 1.0, 2.5, 7.0, 30.0}) {
        for (double z : {1e-3, 0.1, 1.0, 5.0, 20.0, 60.0, 200.0, 600.0}) {
            const double expected = boost::math::cyl_bessel_i(nu, z) * std::exp(-z);
            EXPECT_LT(rel(cev::bessel_i_scaled(nu, z), expected), 1e-12) << nu << ' ' << z;
        }
    }
}

TEST(BesselIScaled, LargeArgumentTendsToHankelLeadingTerm) {
    for (double z : {100.0, 1e3, 1e6, 1e12}) {
        const double lead = 1.0 / std::sqrt(2.0 * M_PI * z);
        const double value = cev::bessel_i_scaled(1.0, z);
        EXPECT_TRUE(std::isfinite(value));
        EXPECT_LT(rel(value, lead), 0.01) << z;
    }
}

TEST(BesselIScaled, SmallArgumentLeadingTerm) {
    const double z = 1e-3;
    for (double nu : {0.0, 0.5, 2.0}) {
        const double lead = std::pow(z / 2.0, nu) / std::tgamma(nu + 1.0) * std::exp(-z);
        EXPECT_LT(rel(cev::bessel_i_scaled(nu, z), lead), 1e-6) << nu;
    }
}

TEST(BesselIScaled, DomainErrors) {
    EXPECT_THROW(cev::bessel_i_scaled(0.0, -1.0), std::domain_error);
    EXPECT_THROW(cev::bessel_i_scaled(-1.5, 1.0), std::domain_error);
}

TEST(NcChi2Sf, TrivialValues) {
    EXPECT_EQ(cev::nc_chi2_sf({.w = 0.0, .df = 2.0, .noncentrality = 5.0}), 1.0);
    EXPECT_LT(rel(cev::nc_chi2_sf({.w = 2.0, .df = 2.0, .noncentrality = 0.0}), std::exp(-1.0)), 1e-15);
}

TEST(NcChi2Sf, ReferenceValue) {
    const NcChi2Query q{.w = 4.0, .df = 2.0, .noncentrality = 2.0};
    EXPECT_LT(std::abs(cev::nc_chi2_sf(q) - kQ_4_2_2), 1e-13);
    EXPECT_LT(std::abs(cev::nc_chi2_sf(q, {.rel_tol = 1e-16}) - kQ_4_2_2), 2e-16);
}

TEST(NcChi2Sf, ZeroNoncentralityIsCentralGamma) {
    for (double df : {0.5, 3.0, 11.0}) {
        for (double w : {0.1, 2.0, 30.0}) {
            EXPECT_DOUBLE_EQ(cev::nc_chi2_sf({.w = w, .df = df, .noncentrality = 0.0}),
                             cev::reg_gamma_upper(df / 2.0, w / 2.0));
        }
    }
}

// Monotone up to the series tolerance.
TEST(NcChi2Sf, BoundedAndMonotone) {
    for (double df : {0.5, 2.0, 7.0}) {
        for (double lambda : {0.1, 3.0, 40.0}) {
            double prev = 1.0;
            for (double w = 0.0; w < 120.0; w += 1.5) {
                const double q = cev::nc_chi2_sf({.w = w, .df = df, .noncentrality = lambda});
                EXPECT_GE(q, 0.0);
                EXPECT_LE(q, prev + 1e-13);
                prev = q;
            }
        }
        for (double w : {0.5, 5.0, 50.0}) {
            double prev = 0.0;
            for (double lambda = 0.0; lambda < 100.0; lambda += 2.5) {
                const double q = cev::nc_chi2_sf({.w = w, .df = df, .noncentrality = lambda});
                EXPECT_GE(q, prev - 1e-13);
                prev = q;
            }
        }
    }
}

TEST(NcChi2Sf, FarTailIsSmall) {
    for (double df : {1.0, 6.0}) {
        for (double lambda : {1.0, 25.0, 400.0}) {
            const double w = lambda + df + 40.0 * std::sqrt(2.0 * lambda + df);
            EXPECT_LT(cev::nc_chi2_sf({.w = w, .df = df, .noncentrality = lambda}), 1e-6);
        }
    }
}

TEST(NcChi2Sf, AgreesWithBruteForce) {
    std::mt19937_64 rng(7);
    std::uniform_real_distribution<double> wl(0.1, 50.0), d(0.5, 12.0);
    for (int i = 0; i < 50; ++i) {
        const NcChi2Query q{.w = wl(rng), .df = d(rng), .noncentrality = wl(rng)};
        EXPECT_NEAR(cev::nc_chi2_sf(q), cev::nc_chi2_sf_bruteforce(q, 400), 1e-12)
            << q.w << ' ' << q.df << ' ' << q.noncentrality;
    }
}

TEST(NcChi2Sf, LargeArgumentsStayFinite) {
    for (double lambda : {1e4, 1e6, 1e7}) {
        for (double shift : {-3.0, 0.0, 3.0}) {
            const double w = lambda + shift * std::sqrt(4.0 * lambda);
            const double q = cev::nc_chi2_sf({.w = w, .df = 3.0, .noncentrality = lambda});
            EXPECT_GT(q, 0.0);
            EXPECT_LT(q, 1.0);
        }
    }
}

TEST(NcChi2Sf, ExtremeTails) {
    EXPECT_EQ(cev::nc_chi2_sf({.w = 1.15e8, .df = 1.25, .noncentrality = 9.9e7}), 0.0);
    EXPECT_EQ(cev::nc_chi2_sf({.w = 9.9e7, .df = 3.25, .noncentrality = 1.15e8}), 1.0);
    // Deep but representable tails still go through the series.
    const double lambda = 1e4;
    for (double sds : {10.0, 25.0, 40.0}) {
        const NcChi2Query q{.w = lambda + sds * std::sqrt(4.0 * lambda), .df = 3.0, .noncentrality = lambda};
        const double expected = cev::nc_chi2_sf_bruteforce(q, 20'000);
        ASSERT_GT(expected, 0.0);
        EXPECT_LT(rel(cev::nc_chi2_sf(q), expected), 1e-10) << sds;
    }
}

TEST(NcChi2Sf, ThrowsWhenBudgetExhausted) {
    cev::SeriesControl ctl;
    ctl.max_terms = 3;
    EXPECT_THROW(cev::nc_chi2_sf({.w = 1e4, .df = 3.0, .noncentrality = 1e4}, ctl), cev::NonConvergence);
}

TEST(NcChi2Sf, DomainErrors) {
    EXPECT_THROW(cev::nc_chi2_sf({.w = 1.0, .df = 0.0, .noncentrality = 1.0}), std::domain_error);
    EXPECT_THROW(cev::nc_chi2_sf({.w = 1.0, .df = -1.0, .noncentrality = 1.0}), std::domain_error);
    EXPECT_THROW(cev::nc_chi2_sf({.w = -1.0, .df = 2.0, .noncentrality = 1.0}), std::domain_error);
    EXPECT_THROW(cev::nc_chi2_sf({.w = 1.0, .df = 2.0, .noncentrality = -1.0}), std::domain_error);
}

TEST(SeriesControl, Validation) {
    EXPECT_NO_THROW(cev::validate(cev::SeriesControl{}));
    EXPECT_THROW(cev::validate(cev::SeriesControl{.rel_tol = 0.0}), std::invalid_argument);
    EXPECT_THROW(cev::validate(cev::SeriesControl{.rel_tol = 1e-10, .max_terms = 0}), std::invalid_argument);
    EXPECT_THROW(cev::nc_chi2_sf({.w = 1.0, .df = 2.0, .noncentrality = 1.0}, {.rel_tol = -1.0}),
                 std::invalid_argument);
}

TEST(NcChi2SfComplementDf, ReferenceValue) {
    EXPECT_NEAR(cev::nc_chi2_sf_complement_df(3.1, -0.5, 2.2), kOneMinusQ_22_25_31, 1e-14);
}

TEST(NcChi2SfComplementDf, PairsWithSwappedSurvival) {
    for (double w : {0.3, 4.0, 25.0}) {
        for (double df : {-3.0, -0.5, 0.0, 1.2}) {
            for (double lambda : {0.5, 9.0}) {
                const double sum = cev::nc_chi2_sf_complement_df(w, df, lambda) +
                                   cev::nc_chi2_sf({.w = lambda, .df = 2.0 - df, .noncentrality = w});
                EXPECT_NEAR(sum, 1.0, 1e-15);
            }
        }
    }
}

TEST(NcChi2SfComplementDf, ZeroNoncentrality) {
    EXPECT_EQ(cev::nc_chi2_sf_complement_df(2.0, -1.0, 0.0), 0.0);
}

TEST(NcChi2Pdf, ReferenceValue) {
    EXPECT_LT(rel(cev::nc_chi2_pdf({.w = 5.0, .df = 3.0, .noncentrality = 4.0}), kPdf_5_3_4), 1e-13);
}

TEST(NcChi2Pdf, CentralLimit) {
    EXPECT_LT(rel(cev::nc_chi2_pdf({.w = 1.0, .df = 2.0, .noncentrality = 0.0}), 0.5 * std::exp(-0.5)), 1e-15);
    EXPECT_LT(rel(cev::nc_chi2_pdf({.w = 1.0, .df = 2.0, .noncentrality = 1e-12}), 0.5 * std::exp(-0.5)), 1e-9);
}

TEST(NcChi2Pdf, IntegratesToOne) {
    auto f = [](double w) { return cev::nc_chi2_pdf({.w = w, .df = 4.0, .noncentrality = 3.0}); };
    EXPECT_NEAR(cev::integrate(f, 0.0, std::numeric_limits<double>::infinity()), 1.0, 1e-10);
    // Integrable singularity at zero.
    auto g = [](double w) { return cev::nc_chi2_pdf({.w = w, .df = 1.0, .noncentrality = 0.5}); };
    EXPECT_NEAR(cev::integrate(g, 0.0, std::numeric_limits<double>::infinity()), 1.0, 1e-10);
}

// Near w = 0 the density is e^{-λ/2} times the central one.
TEST(NcChi2Pdf, SmallArgumentLimit) {
    for (double df : {1.0, 2.0, 3.5}) {
        for (double w : {1e-150, 1e-250, 1e-300}) {
            const double nu = 0.5 * df - 1.0;
            const double log_expected =
                -1.5 + nu * std::log(w) - (nu + 1.0) * std::log(2.0) - std::lgamma(nu + 1.0);
            const double p = cev::nc_chi2_pdf({.w = w, .df = df, .noncentrality = 3.0});
            EXPECT_NEAR(std::log(p), log_expected, 1e-12) << df << ' ' << w;
        }
    }
}

TEST(NcChi2Pdf, HugeArgumentsStayFinite) {
    const double p = cev::nc_chi2_pdf({.w = 1e8, .df = 3.0, .noncentrality = 1e8});
    EXPECT_TRUE(std::isfinite(p));
    EXPECT_GT(p, 0.0);
    EXPECT_EQ(cev::nc_chi2_pdf({.w = 1e8, .df = 3.0, .noncentrality = 1.0}), 0.0);
}

TEST(NcChi2Pdf, DomainErrors) {
    EXPECT_THROW(cev::nc_chi2_pdf({.w = 0.0, .df = 2.0, .noncentrality = 1.0}), std::domain_error);
    EXPECT_THROW(cev::nc_chi2_pdf({.w = -1.0, .df = 2.0, .noncentrality = 1.0}), std::domain_error);
}

// ∂Q/∂w = -p(w; df, λ) and ∂Q/∂λ = p(w; df+2, λ). Points deep in a tail are
// skipped: there the difference quotient is dominated by roundoff in Q.
TEST(DerivativeRelations, SurvivalFunction) {
    for (double df : {1.0, 3.0, 8.0}) {
        for (double lambda : {0.7, 6.0, 30.0}) {
            for (double w : {0.5, 5.0, 25.0}) {
                const double hw = 1e-5 * std::max(1.0, w);
                const double dq_dw = cev::fd_derivative(
                    [&](double t) { return cev::nc_chi2_sf({.w = t, .df = df, .noncentrality = lambda}); }, w, hw, 1);
                const double p = cev::nc_chi2_pdf({.w = w, .df = df, .noncentrality = lambda});
                if (p > 1e-3) EXPECT_LT(rel(-dq_dw, p), 1e-6) << df << ' ' << lambda << ' ' << w;

                const double hl = 1e-5 * std::max(1.0, lambda);
                const double dq_dl = cev::fd_derivative(
                    [&](double t) { return cev::nc_chi2_sf({.w = w, .df = df, .noncentrality = t}); }, lambda, hl, 1);
                const double p2 = cev::nc_chi2_pdf({.w = w, .df = df + 2.0, .noncentrality = lambda});
                if (p2 > 1e-3) EXPECT_LT(rel(dq_dl, p2), 1e-6) << df << ' ' << lambda << ' ' << w;
            }
        }
    }
}

// ∂p/∂w = (p(df-2) - p(df))/2 and ∂p/∂λ = (p(df+2) - p(df))/2.
TEST(DerivativeRelations, Density) {
    auto pdf = [](double w, double df, double l) { return cev::nc_chi2_pdf({.w = w, .df = df, .noncentrality = l}); };
    for (double df : {2.5, 4.0, 9.0}) {
        for (double lambda : {0.7, 6.0, 30.0}) {
            for (double w : {0.5, 5.0, 25.0}) {
                const double hw = 1e-5 * std::max(1.0, w);
                const double dp_dw = cev::fd_derivative([&](double t) { return pdf(t, df, lambda); }, w, hw, 1);
                const double expected_w = 0.5 * (pdf(w, df - 2.0, lambda) - pdf(w, df, lambda));
                if (std::abs(expected_w) > 1e-10) EXPECT_LT(rel(dp_dw, expected_w), 1e-6) << df << ' ' << lambda << ' ' << w;

                const double hl = 1e-5 * std::max(1.0, lambda);
                const double dp_dl = cev::fd_derivative([&](double t) { return pdf(w, df, t); }, lambda, hl, 1);
                const double expected_l = 0.5 * (pdf(w, df + 2.0, lambda) - pdf(w, df, lambda));
                if (std::abs(expected_l) > 1e-10) EXPECT_LT(rel(dp_dl, expected_l), 1e-6) << df << ' ' << lambda << ' ' << w;
            }
        }
    }
}

}  // namespace
