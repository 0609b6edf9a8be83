// SPDX-License-Identifier: Apache-2.0
#ifndef SCEVM_SPECFUN_HPP
#define SCEVM_SPECFUN_HPP

// Special functions used by the closed-form EVM expressions: log-gamma,
// regularized incomplete gamma, Gauss hypergeometric 2F1 (series domain only)
// and the first-order Marcum Q function. All functions are pure.

#include <scevm/errors.hpp>

#include <algorithm>
#include <array>
#include <cmath>
#include <limits>
#include <numbers>
#include <string>

namespace scevm::specfun {

namespace detail {

/// Neumaier-compensated running sum.
class compensated_sum {
public:
    void add(double v) noexcept {
        const double t = sum_ + v;
        if (std::abs(sum_) >= std::abs(v)) {
            comp_ += (sum_ - t) + v;
        } else {
            comp_ += (v - t) + sum_;
        }
        sum_ = t;
    }
    [[nodiscard]] double value() const noexcept { return sum_ + comp_; }

private:
    double sum_ = 0.0;
    double comp_ = 0.0;
};

// Godfrey's coefficients for g = 607/128, 15 terms.
inline constexpr double lanczos_g = 607.0 / 128.0;
inline constexpr std::array<double, 15> lanczos_coeffs = {
    0.99999999999999709182,     57.156235665862923517,     -59.597960355475491248,
    14.136097974741747174,      -0.49191381609762019978,   .33994649984811888699e-4,
    .46523628927048575665e-4,   -.98374475304879564677e-4, .15808870322491248884e-3,
    -.21026444172410488319e-3,  .21743961811521264320e-3,  -.16431810653676389022e-3,
    .84418223983852743293e-4,   -.26190838401581408670e-4, .36899182659531622704e-5,
};

inline double lanczos_log_gamma(double x) noexcept {
    // valid for x >= 0.5
    x -= 1.0;
    double series = lanczos_coeffs[0];
    for (std::size_t i = 1; i < lanczos_coeffs.size(); ++i) {
        series += lanczos_coeffs[i] / (x + static_cast<double>(i));
    }
    const double t = x + lanczos_g + 0.5;
    constexpr double half_log_two_pi = 0.91893853320467274178;
    return half_log_two_pi + (x + 0.5) * std::log(t) - t + std::log(series);
}

inline constexpr double tiny = 1e-300;
inline constexpr int max_incgamma_iterations = 100000;

// log of z^s e^{-z} / Gamma(s)
inline double log_incgamma_prefactor(double s, double z);

} // namespace detail

/// Natural log of the Gamma function for x > 0.
inline double log_gamma(double x) {
    if (!(x > 0.0)) {
        throw domain_error("log_gamma: argument must be positive, got " + std::to_string(x));
    }
    if (std::isinf(x)) return x;
    if (x < 0.5) {
        // reflection keeps the Lanczos sum in its accurate region
        return std::log(std::numbers::pi / std::sin(std::numbers::pi * x)) - detail::lanczos_log_gamma(1.0 - x);
    }
    return detail::lanczos_log_gamma(x);
}

/// Gamma(a) / Gamma(b).
inline double gamma_ratio(double a, double b) {
    if (!(a > 0.0) || !(b > 0.0)) {
        throw domain_error("gamma_ratio: arguments must be positive");
    }
    const double r = std::exp(log_gamma(a) - log_gamma(b));
    if (!std::isfinite(r)) {
        throw range_error("gamma_ratio: result overflows");
    }
    return r;
}

namespace detail {

inline double log_incgamma_prefactor(double s, double z) { return s * std::log(z) - z - log_gamma(s); }

// P(s,z) by its power series; caller guarantees z < s + 1.
inline double lower_series(double s, double z) {
    double ap = s;
    double term = 1.0 / s;
    double sum = term;
    for (int n = 0; n < max_incgamma_iterations; ++n) {
        ap += 1.0;
        term *= z / ap;
        sum += term;
        if (std::abs(term) < std::abs(sum) * 1e-17) {
            return sum * std::exp(log_incgamma_prefactor(s, z));
        }
    }
    throw range_error("incomplete gamma series failed to converge");
}

// Q(s,z) by Lentz's continued fraction; caller guarantees z >= s + 1.
inline double upper_continued_fraction(double s, double z) {
    double b = z + 1.0 - s;
    double c = 1.0 / tiny;
    double d = 1.0 / b;
    double h = d;
    for (int i = 1; i < max_incgamma_iterations; ++i) {
        const double an = -static_cast<double>(i) * (static_cast<double>(i) - s);
        b += 2.0;
        d = an * d + b;
        if (std::abs(d) < tiny) d = tiny;
        c = b + an / c;
        if (std::abs(c) < tiny) c = tiny;
        d = 1.0 / d;
        const double delta = d * c;
        h *= delta;
        if (std::abs(delta - 1.0) < 1e-16) {
            return std::exp(log_incgamma_prefactor(s, z)) * h;
        }
    }
    throw range_error("incomplete gamma continued fraction failed to converge");
}

inline void check_incgamma_args(double s, double z, const char* who) {
    if (!(s > 0.0) || !(z >= 0.0) || std::isinf(s)) {
        throw domain_error(std::string(who) + ": requires s > 0 and z >= 0");
    }
}

} // namespace detail

/// Regularized upper incomplete gamma Q(s,z) = Gamma(s,z)/Gamma(s).
inline double upper_incomplete_gamma_regularized(double s, double z) {
    detail::check_incgamma_args(s, z, "upper_incomplete_gamma_regularized");
    if (z == 0.0) return 1.0;
    if (std::isinf(z)) return 0.0;
    if (z < s + 1.0) {
        return std::clamp(1.0 - detail::lower_series(s, z), 0.0, 1.0);
    }
    return std::clamp(detail::upper_continued_fraction(s, z), 0.0, 1.0);
}

/// Regularized lower incomplete gamma P(s,z) = 1 - Q(s,z).
inline double lower_incomplete_gamma_regularized(double s, double z) {
    detail::check_incgamma_args(s, z, "lower_incomplete_gamma_regularized");
    if (z == 0.0) return 0.0;
    if (std::isinf(z)) return 1.0;
    if (z < s + 1.0) {
        return std::clamp(detail::lower_series(s, z), 0.0, 1.0);
    }
    return std::clamp(1.0 - detail::upper_continued_fraction(s, z), 0.0, 1.0);
}

namespace detail {

inline double hypergeometric_series(double a, double b, double c, double z) {
    compensated_sum sum;
    double term = 1.0;
    sum.add(term);
    for (int n = 0; n < 20000; ++n) {
        const double dn = static_cast<double>(n);
        term *= (a + dn) * (b + dn) / ((c + dn) * (dn + 1.0)) * z;
        if (term == 0.0) return sum.value(); // terminating polynomial
        sum.add(term);
        if (std::abs(term) <= 1e-17 * std::abs(sum.value())) {
            return sum.value();
        }
    }
    throw range_error("gauss_2f1: series failed to converge");
}

inline bool is_nonpositive_integer(double v) noexcept { return v <= 0.0 && v == std::floor(v); }

} // namespace detail

/// Gauss hypergeometric 2F1(a,b;c;z) for z in [-1, 0.5].
///
/// Negative z is mapped to z/(z-1) in (0, 0.5] with the Pfaff transformation
/// 2F1(a,b;c;z) = (1-z)^{-a} 2F1(a,c-b;c;z/(z-1)), so the power series always
/// runs with ratio at most 1/2. Anything outside [-1, 0.5] needs analytic
/// continuation and is rejected.
inline double gauss_2f1(double a, double b, double c, double z) {
    if (detail::is_nonpositive_integer(c)) {
        throw domain_error("gauss_2f1: c must not be a nonpositive integer");
    }
    if (!std::isfinite(a) || !std::isfinite(b) || !std::isfinite(c) || !(z >= -1.0 && z <= 0.5)) {
        throw unsupported_domain("gauss_2f1: argument outside the supported interval [-1, 0.5]");
    }
    if (z == 0.0) return 1.0;
    if (z > 0.0) return detail::hypergeometric_series(a, b, c, z);
    const double w = z / (z - 1.0);
    return std::pow(1.0 - z, -a) * detail::hypergeometric_series(a, c - b, c, w);
}

namespace detail {

struct poisson_window {
    double lo;
    double hi;
};

// Index range outside of which Poisson(lambda) mass is below ~1e-30.
inline poisson_window poisson_support(double lambda) noexcept {
    const double spread = 12.0 * std::sqrt(lambda) + 12.0;
    return {std::max(0.0, std::floor(lambda - spread)), std::ceil(lambda + spread + 20.0)};
}

inline double log_poisson(double k, double lambda) {
    if (lambda == 0.0) return k == 0.0 ? 0.0 : -std::numeric_limits<double>::infinity();
    return -lambda + k * std::log(lambda) - log_gamma(k + 1.0);
}

inline void check_marcum_args(double a, double b) {
    if (!(a >= 0.0) || !(b >= 0.0) || std::isinf(a)) {
        throw domain_error("marcum_q1: arguments must be finite and nonnegative");
    }
}

} // namespace detail

namespace detail {

// sum_k Pois(k; lambda) Q(k+1, z), upward from the bottom of the window.
inline double marcum_upper_sum(double lambda, double z) {
    const auto [lo, hi] = poisson_support(lambda);
    const double log_z = std::log(z);
    double q = upper_incomplete_gamma_regularized(lo + 1.0, z);
    compensated_sum sum;
    for (double k = lo; k <= hi; k += 1.0) {
        if (k > lo) q += std::exp(-z + k * log_z - log_gamma(k + 1.0));
        const double t = std::exp(log_poisson(k, lambda)) * std::min(q, 1.0);
        sum.add(t);
        if (k > lambda && t < 1e-17 * sum.value()) break;
    }
    return std::clamp(sum.value(), 0.0, 1.0);
}

// sum_k Pois(k; lambda) P(k+1, z), downward from the top of the window.
inline double marcum_lower_sum(double lambda, double z) {
    const auto [lo, hi] = poisson_support(lambda);
    const double log_z = std::log(z);
    double p = lower_incomplete_gamma_regularized(hi + 1.0, z);
    compensated_sum sum;
    for (double k = hi; k >= lo; k -= 1.0) {
        // P(k+1) = P(k+2) + z^{k+1} e^{-z} / (k+1)!
        if (k < hi) p += std::exp(-z + (k + 1.0) * log_z - log_gamma(k + 2.0));
        sum.add(std::exp(log_poisson(k, lambda)) * std::min(p, 1.0));
    }
    return std::clamp(sum.value(), 0.0, 1.0);
}

} // namespace detail

/// First-order Marcum Q function Q1(a,b).
///
/// Evaluated as the Poisson mixture sum_k Pois(k; a^2/2) Q(k+1, b^2/2), or
/// as one minus the matching mixture of P(k+1, b^2/2) when b < a and Q1 is
/// the larger tail. The incomplete gamma factor is seeded once at the edge of
/// the Poisson window and advanced by recurrence, so every step adds a
/// nonnegative term.
inline double marcum_q1(double a, double b) {
    detail::check_marcum_args(a, b);
    if (b == 0.0) return 1.0;
    if (std::isinf(b)) return 0.0;
    const double z = 0.5 * b * b;
    if (a == 0.0) return std::exp(-z);
    const double lambda = 0.5 * a * a;
    if (b < a) return 1.0 - detail::marcum_lower_sum(lambda, z);
    return detail::marcum_upper_sum(lambda, z);
}

/// 1 - Q1(a,b), accurate when Q1 is close to one.
inline double marcum_q1_complement(double a, double b) {
    detail::check_marcum_args(a, b);
    if (b == 0.0) return 0.0;
    if (std::isinf(b)) return 1.0;
    const double z = 0.5 * b * b;
    if (a == 0.0) return -std::expm1(-z);
    const double lambda = 0.5 * a * a;
    if (b < a) return detail::marcum_lower_sum(lambda, z);
    return 1.0 - detail::marcum_upper_sum(lambda, z);
}

} // namespace scevm::specfun

#endif // SCEVM_SPECFUN_HPP
