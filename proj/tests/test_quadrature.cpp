// SPDX-License-Identifier: Apache-2.0
#include <scevm/analytic.hpp>
#include <scevm/quadrature.hpp>

#include <gtest/gtest.h>

#include <cmath>
#include <numbers>

using namespace scevm;
using namespace scevm::quadrature;

namespace {
constexpr double pi = std::numbers::pi;
}

TEST(Quadrature, FiniteInterval) {
    const auto r = integrate_finite([](double x) { return std::sin(x); }, 0.0, pi);
    EXPECT_NEAR(r.value, 2.0, 1e-12);
    EXPECT_GE(r.evaluations, 15u);
    EXPECT_LE(r.abs_error_estimate, 1e-9);
}

TEST(Quadrature, SemiInfiniteReferenceIntegrals) {
    EXPECT_NEAR(integrate_semi_infinite([](double x) { return std::exp(-x); }).value, 1.0, 1e-10);
    // F_SIR'(x^-2) for L = M = 1 is 1/(1+x^2)
    EXPECT_NEAR(integrate_semi_infinite([](double x) { return 1.0 / (1.0 + x * x); }).value, pi / 2, 1e-9);
}

TEST(Quadrature, SqrtWeightedReferenceIntegrals) {
    const double divided =
        integrate_weighted_sqrt([](double y) { return std::exp(-y); }, SqrtWeight::divide_by_sqrt).value;
    EXPECT_NEAR(divided, std::sqrt(pi), 1e-9);
    const double multiplied =
        integrate_weighted_sqrt([](double y) { return std::exp(-y); }, SqrtWeight::multiply_by_sqrt).value;
    EXPECT_NEAR(multiplied, std::sqrt(pi) / 2, 1e-9);
    // E[sqrt(Y)] for Y ~ Gamma(3, 1) is Gamma(3.5)/Gamma(3) = 15 sqrt(pi) / 16
    const double gamma3 =
        integrate_weighted_sqrt([](double y) { return y * y * std::exp(-y) / 2.0; }, SqrtWeight::multiply_by_sqrt)
            .value;
    EXPECT_LT(std::abs(gamma3 - 15.0 * std::sqrt(pi) / 16.0), 1e-9 * gamma3);
}

TEST(Quadrature, Linearity) {
    auto f = [](double x) { return std::exp(-x) * std::cos(x); };
    auto g = [](double x) { return 1.0 / (1.0 + x * x * x * x); };
    const double a = 2.5, b = -0.75;
    const double combined = integrate_semi_infinite([&](double x) { return a * f(x) + b * g(x); }).value;
    const double separate = a * integrate_semi_infinite(f).value + b * integrate_semi_infinite(g).value;
    EXPECT_NEAR(combined, separate, 1e-9);
}

TEST(Quadrature, SubstitutionInvariance) {
    // int_0^inf F(x^-2) dx and, with u = x^-2, int_0^inf (1/2) u^{-3/2} F(u) du.
    // The u^{-3/2} tail is taken as (F(u) / 2u) / sqrt(u) so the weighted rule absorbs it.
    for (int L : {1, 2, 3}) {
        for (int M : {1, 2, 4}) {
            SystemConfig cfg;
            cfg.antennas = L;
            cfg.interferers = M;
            const double direct =
                integrate_semi_infinite([&](double x) { return analytic::cdf_sir_selected(1.0 / (x * x), cfg); }).value;
            const double substituted =
                integrate_weighted_sqrt([&](double u) { return 0.5 * analytic::cdf_sir_selected(u, cfg) / u; },
                                        SqrtWeight::divide_by_sqrt)
                    .value;
            EXPECT_NEAR(direct, substituted, 1e-8) << "L=" << L << " M=" << M;
        }
    }
}

TEST(Quadrature, Deterministic) {
    auto f = [](double x) { return std::exp(-x * x) * std::log1p(x); };
    const auto a = integrate_semi_infinite(f);
    const auto b = integrate_semi_infinite(f);
    EXPECT_EQ(a.value, b.value);
    EXPECT_EQ(a.abs_error_estimate, b.abs_error_estimate);
    EXPECT_EQ(a.evaluations, b.evaluations);
}

TEST(Quadrature, BudgetExhaustionReportsBestEstimate) {
    QuadratureOptions opts;
    opts.max_evaluations = 60;
    try {
        integrate_finite([](double x) { return std::sin(1.0 / x); }, 1e-3, 1.0, opts);
        FAIL() << "expected accuracy_not_reached";
    } catch (const accuracy_not_reached& e) {
        EXPECT_TRUE(std::isfinite(e.best_estimate()));
        EXPECT_GT(e.abs_error_estimate(), 0.0);
    }
    // a non-integrable endpoint is reported, either as an unsplittable segment or
    // as an overflowing integrand, never returned as a value
    EXPECT_THROW(integrate_finite([](double x) { return 1.0 / x; }, 0.0, 1.0), scevm::error);
}

TEST(Quadrature, RejectsBadInput) {
    QuadratureOptions opts;
    opts.abs_tol = 0.0;
    opts.rel_tol = 0.0;
    EXPECT_THROW(integrate_finite([](double) { return 1.0; }, 0.0, 1.0, opts), domain_error);
    EXPECT_THROW(integrate_finite([](double) { return std::nan(""); }, 0.0, 1.0), domain_error);
}
