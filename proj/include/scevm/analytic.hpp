// SPDX-License-Identifier: Apache-2.0
#ifndef SCEVM_ANALYTIC_HPP
#define SCEVM_ANALYTIC_HPP

// Closed-form and integral-form EVM of an interference-limited selection
// combining receiver. Every function here treats the EVM as
// E[sqrt(I/X)] at the selected antenna, where X is the desired channel power
// and I the summed interference power on that antenna.

#include <scevm/errors.hpp>
#include <scevm/quadrature.hpp>
#include <scevm/specfun.hpp>
#include <scevm/system_config.hpp>

#include <cmath>
#include <numbers>
#include <optional>
#include <string>
#include <string_view>

namespace scevm::analytic {

namespace detail {

inline double sqrt_pi() noexcept { return std::sqrt(std::numbers::pi); }

inline void require_positive_count(int value, const char* name) {
    if (value < 1) throw domain_error(std::string(name) + " must be at least 1");
}

// Binomial coefficient; exact while it fits in 53 bits.
inline double binomial(int n, int k) {
    if (k < 0 || k > n) return 0.0;
    k = std::min(k, n - k);
    double c = 1.0;
    for (int i = 1; i <= k; ++i) {
        c = c * static_cast<double>(n - k + i) / static_cast<double>(i);
    }
    if (c > 9007199254740992.0) {
        return std::exp(specfun::log_gamma(n + 1.0) - specfun::log_gamma(k + 1.0) - specfun::log_gamma(n - k + 1.0));
    }
    return std::round(c);
}

// Largest tolerated sum|t| / |sum t| before the alternating sum is declared
// unreliable; leaves better than ~1e-9 relative accuracy.
inline constexpr double max_cancellation = 1e7;

class AlternatingSum {
public:
    void add(double term) {
        sum_.add(term);
        magnitude_ += std::abs(term);
    }
    [[nodiscard]] double value(const char* who) const {
        const double v = sum_.value();
        if (!std::isfinite(v) || !std::isfinite(magnitude_)) {
            throw range_error(std::string(who) + ": terms overflow");
        }
        if (v <= 0.0 || magnitude_ > max_cancellation * std::abs(v)) {
            throw range_error(std::string(who) + ": alternating sum loses too many digits to cancellation");
        }
        return v;
    }

private:
    specfun::detail::compensated_sum sum_;
    double magnitude_ = 0.0;
};

inline double unwrap(const quadrature::QuadratureResult& r) { return r.value; }

} // namespace detail

/// Gamma(M+1/2)/Gamma(M): E[sqrt(I)] for I ~ Gamma(M, 1).
inline double interference_moment(int interferers) {
    detail::require_positive_count(interferers, "interferer count M");
    return specfun::gamma_ratio(interferers + 0.5, interferers);
}

/// SIR CDF at one antenna: Rayleigh desired with M interferers, or
/// Nakagami(m_d) desired with exactly two Rayleigh interferers.
inline double cdf_sir_single_antenna(double x, int interferers, const FadingModel& desired) {
    if (!(x >= 0.0)) throw domain_error("cdf_sir_single_antenna: x must be nonnegative");
    detail::require_positive_count(interferers, "interferer count M");
    if (desired.is_rayleigh()) {
        if (std::isinf(x)) return 1.0;
        return -std::expm1(-interferers * std::log1p(x));
    }
    if (interferers != 2) {
        throw unsupported_configuration("Nakagami desired-channel SIR CDF is available only for M = 2 interferers");
    }
    if (x == 0.0) return 0.0;
    if (std::isinf(x)) return 1.0;
    // (m x)^m (1 + m + m x) / (1 + m x)^{1+m}, written with w = 1/(1 + m x)
    const double m = desired.shape();
    const double w = 1.0 / (1.0 + m * x);
    return std::exp(m * std::log1p(-w)) * (1.0 + m * w);
}

/// CDF of the SIR at the antenna picked by the max-SIR rule.
inline double cdf_sir_selected(double x, const SystemConfig& cfg) {
    cfg.validate();
    if (cfg.rule != SelectionRule::max_sir) {
        throw unsupported_configuration("cdf_sir_selected describes the max-SIR rule only");
    }
    if (!(x >= 0.0)) throw domain_error("cdf_sir_selected: x must be nonnegative");
    if (cfg.rho == 0.0 || cfg.rho == 1.0) {
        const double single = cdf_sir_single_antenna(x, cfg.interferers, cfg.desired);
        return cfg.rho == 1.0 ? single : std::pow(single, cfg.antennas);
    }
    if (cfg.interferers != 1) {
        throw unsupported_configuration("correlated max-SIR CDF is available only for M = 1 interferer");
    }
    if (x == 0.0) return 0.0;
    if (std::isinf(x)) return 1.0;
    const double rho2 = cfg.rho * cfg.rho;
    const double eps2 = 1.0 - rho2;
    const double s = 1.0 / x;
    const double root = std::sqrt(eps2 + 2.0 * (1.0 + rho2) * s + eps2 * s * s);
    return (1.0 / (1.0 + s)) * (1.0 - s * std::sqrt(eps2) / root);
}

/// Max-SIR rule, i.i.d. Rayleigh:
/// sqrt(pi) * sum_{k=1}^{L} (-1)^{k-1} C(L,k) Gamma(kM + 1/2) / Gamma(kM).
inline double evm_max_sir_iid(int antennas, int interferers) {
    detail::require_positive_count(antennas, "antenna count L");
    detail::require_positive_count(interferers, "interferer count M");
    detail::AlternatingSum sum;
    for (int k = 1; k <= antennas; ++k) {
        const double km = static_cast<double>(k) * interferers;
        const double term = detail::binomial(antennas, k) * specfun::gamma_ratio(km + 0.5, km);
        sum.add(k % 2 == 1 ? term : -term);
    }
    return detail::sqrt_pi() * sum.value("evm_max_sir_iid");
}

/// E[X^{-1/2}] for X the largest of L unit-mean exponentials.
inline double inverse_sqrt_moment_of_max_exponential(int antennas) {
    detail::require_positive_count(antennas, "antenna count L");
    detail::AlternatingSum sum;
    for (int n = 0; n < antennas; ++n) {
        const double term = detail::binomial(antennas - 1, n) * std::sqrt(std::numbers::pi / (n + 1.0));
        sum.add(n % 2 == 0 ? term : -term);
    }
    return antennas * sum.value("evm_max_signal_iid");
}

/// Max-signal-power rule, i.i.d. Rayleigh.
inline double evm_max_signal_iid(int antennas, int interferers) {
    return inverse_sqrt_moment_of_max_exponential(antennas) * interference_moment(interferers);
}

/// Max-SIR rule, Nakagami(m_d) desired channels, two Rayleigh interferers.
///
/// Integrates the selected-SIR CDF F(x^{-2}) over [0, inf); the EVM exists
/// only when m_d * L > 1/2.
inline quadrature::QuadratureResult evm_max_sir_nakagami_detailed(int antennas, double shape,
                                                                 const quadrature::QuadratureOptions& opts = {}) {
    detail::require_positive_count(antennas, "antenna count L");
    if (!(shape > 0.0)) throw domain_error("Nakagami shape m_d must be positive");
    if (shape * antennas <= 0.5) {
        throw divergent_moment("max-SIR Nakagami EVM diverges for m_d * L <= 1/2");
    }
    const double m = shape;
    const double L = antennas;
    auto integrand = [m, L](double x) {
        // F(u) at u = x^{-2}: 1/(1 + m u) = x^2 / (x^2 + m)
        if (x == 0.0) return 1.0;
        const double x2 = x * x;
        const double ratio = m / (x2 + m);
        const double w = x2 / (x2 + m);
        return std::exp(L * (m * std::log(ratio) + std::log1p(m * w)));
    };
    return quadrature::integrate_semi_infinite(integrand, opts);
}

inline double evm_max_sir_nakagami(int antennas, double shape) {
    return detail::unwrap(evm_max_sir_nakagami_detailed(antennas, shape));
}

/// E[X^{-1/2}] for X the larger of two unit-mean Gamma(m_d) powers, closed form.
inline double inverse_sqrt_moment_of_max_gamma_pair(double shape) {
    if (!(shape > 0.5)) {
        throw divergent_moment("max-signal Nakagami EVM closed form requires m_d > 1/2");
    }
    using specfun::log_gamma;
    const double m = shape;
    const double hyper = specfun::gauss_2f1(m - 0.5, 2.0 * m - 0.5, m + 0.5, -1.0);
    const double scale = std::exp(log_gamma(2.0 * m - 0.5) - log_gamma(m) - log_gamma(m + 0.5));
    const double lead = 2.0 * std::exp(log_gamma(m - 0.5) - log_gamma(m)) * std::sqrt(m);
    return lead * (1.0 - hyper * scale);
}

/// Same moment as inverse_sqrt_moment_of_max_gamma_pair, by quadrature of the
/// max-of-two density 2 P(m, m x) m^m x^{m-1} e^{-m x} / Gamma(m).
inline quadrature::QuadratureResult inverse_sqrt_moment_of_max_gamma_pair_quadrature(
    double shape, const quadrature::QuadratureOptions& opts = {}) {
    if (!(shape > 0.5)) {
        throw divergent_moment("max-signal Nakagami EVM requires m_d > 1/2");
    }
    const double m = shape;
    const double log_norm = m * std::log(m) - specfun::log_gamma(m);
    auto pdf = [m, log_norm](double x) {
        if (x == 0.0) return 0.0;
        const double cdf = specfun::lower_incomplete_gamma_regularized(m, m * x);
        return 2.0 * cdf * std::exp(log_norm + (m - 1.0) * std::log(x) - m * x);
    };
    return quadrature::integrate_weighted_sqrt(pdf, quadrature::SqrtWeight::divide_by_sqrt, opts);
}

inline constexpr double max_signal_nakagami_cross_check_tol = 1e-7;

/// Max-signal-power rule, two antennas, Nakagami(m_d) desired, M Rayleigh
/// interferers. The closed form is checked against direct quadrature on every
/// call; a mismatch above 1e-7 raises range_error.
inline double evm_max_signal_nakagami(double shape, int interferers) {
    detail::require_positive_count(interferers, "interferer count M");
    const double closed = inverse_sqrt_moment_of_max_gamma_pair(shape);
    const double integral = inverse_sqrt_moment_of_max_gamma_pair_quadrature(shape).value;
    if (std::abs(closed - integral) > max_signal_nakagami_cross_check_tol * std::max(1.0, std::abs(closed))) {
        throw range_error("evm_max_signal_nakagami: closed form and quadrature disagree (" + std::to_string(closed) +
                          " vs " + std::to_string(integral) + ")");
    }
    return closed * interference_moment(interferers);
}

/// Fully correlated antennas: no selection gain, sqrt(pi) Gamma(M+1/2)/Gamma(M).
inline double evm_fully_correlated(int interferers) {
    return detail::sqrt_pi() * interference_moment(interferers);
}

namespace detail {

inline void require_correlation_below_one(double rho) {
    if (!(rho >= 0.0 && rho < 1.0)) {
        throw domain_error("correlation rho must lie in [0, 1); use evm_fully_correlated at rho = 1");
    }
}

} // namespace detail

/// Max-SIR rule, two correlated antennas, one interferer.
inline quadrature::QuadratureResult evm_max_sir_correlated_detailed(double rho,
                                                                   const quadrature::QuadratureOptions& opts = {}) {
    detail::require_correlation_below_one(rho);
    const double rho2 = rho * rho;
    const double eps2 = 1.0 - rho2;
    const double eps = std::sqrt(eps2);
    // F(x^{-2}) = [1 - x^2 eps / sqrt(b)] / (1 + x^2), b = eps^2 + 2(1+rho^2)x^2 + eps^2 x^4;
    // the bracket is rewritten as (b - x^4 eps^2) / (sqrt(b) (sqrt(b) + x^2 eps)).
    auto integrand = [eps, eps2, rho2](double x) {
        const double x2 = x * x;
        const double numer = eps2 + 2.0 * (1.0 + rho2) * x2;
        const double root = std::sqrt(numer + eps2 * x2 * x2);
        return numer / ((1.0 + x2) * root * (root + eps * x2));
    };
    return quadrature::integrate_semi_infinite(integrand, opts);
}

inline double evm_max_sir_correlated(double rho) { return detail::unwrap(evm_max_sir_correlated_detailed(rho)); }

/// E[X^{-1/2}] for X the larger of two correlated unit-mean exponentials,
/// density 2 e^{-x} (1 - Q1(rho sqrt(2x/(1-rho^2)), sqrt(2x/(1-rho^2)))).
inline quadrature::QuadratureResult inverse_sqrt_moment_of_max_correlated_pair(
    double rho, const quadrature::QuadratureOptions& opts = {}) {
    detail::require_correlation_below_one(rho);
    const double scale = std::sqrt(2.0 / (1.0 - rho * rho));
    auto pdf = [rho, scale](double x) {
        const double b = scale * std::sqrt(x);
        return 2.0 * std::exp(-x) * specfun::marcum_q1_complement(rho * b, b);
    };
    return quadrature::integrate_weighted_sqrt(pdf, quadrature::SqrtWeight::divide_by_sqrt, opts);
}

/// Max-signal-power rule, two correlated antennas, M interferers.
inline double evm_max_signal_correlated(double rho, int interferers) {
    detail::require_positive_count(interferers, "interferer count M");
    return inverse_sqrt_moment_of_max_correlated_pair(rho).value * interference_moment(interferers);
}

enum class Formula {
    max_sir_iid,
    max_signal_iid,
    max_sir_nakagami,
    max_signal_nakagami,
    max_sir_correlated,
    max_signal_correlated,
    fully_correlated,
};

inline std::string_view describe(Formula f) noexcept {
    switch (f) {
    case Formula::max_sir_iid: return "max-SIR, i.i.d. Rayleigh (closed form)";
    case Formula::max_signal_iid: return "max-signal, i.i.d. Rayleigh (closed form)";
    case Formula::max_sir_nakagami: return "max-SIR, Nakagami desired, M = 2 (CDF quadrature)";
    case Formula::max_signal_nakagami: return "max-signal, Nakagami desired, L = 2 (2F1 closed form)";
    case Formula::max_sir_correlated: return "max-SIR, correlated L = 2, M = 1 (CDF quadrature)";
    case Formula::max_signal_correlated: return "max-signal, correlated L = 2 (Marcum-Q quadrature)";
    case Formula::fully_correlated: return "fully correlated antennas (closed form)";
    }
    return "unknown";
}

/// Which analytic expression covers cfg, if any. cfg must be valid.
inline std::optional<Formula> select_formula(const SystemConfig& cfg) {
    cfg.validate();
    const bool sir = cfg.rule == SelectionRule::max_sir;
    if (cfg.rho == 0.0) {
        if (cfg.desired.is_rayleigh()) return sir ? Formula::max_sir_iid : Formula::max_signal_iid;
        if (sir && cfg.interferers == 2) return Formula::max_sir_nakagami;
        if (!sir && cfg.antennas == 2) return Formula::max_signal_nakagami;
        return std::nullopt;
    }
    // validate() guarantees L = 2 and Rayleigh desired here
    if (cfg.rho == 1.0) return Formula::fully_correlated;
    if (sir) {
        if (cfg.interferers == 1) return Formula::max_sir_correlated;
        return std::nullopt;
    }
    return Formula::max_signal_correlated;
}

struct AnalyticResult {
    Formula formula;
    double evm;
};

/// Analytic EVM for cfg; unsupported_configuration when no formula covers it.
inline AnalyticResult evaluate(const SystemConfig& cfg) {
    const auto formula = select_formula(cfg);
    if (!formula) {
        if (cfg.rho > 0.0 && cfg.rule == SelectionRule::max_sir) {
            throw unsupported_configuration("no analytic formula: correlated max-SIR requires M = 1");
        }
        if (cfg.rule == SelectionRule::max_sir) {
            throw unsupported_configuration("no analytic formula: Nakagami max-SIR requires M = 2");
        }
        throw unsupported_configuration("no analytic formula: Nakagami max-signal requires L = 2");
    }
    const double m = cfg.desired.shape();
    switch (*formula) {
    case Formula::max_sir_iid: return {*formula, evm_max_sir_iid(cfg.antennas, cfg.interferers)};
    case Formula::max_signal_iid: return {*formula, evm_max_signal_iid(cfg.antennas, cfg.interferers)};
    case Formula::max_sir_nakagami: return {*formula, evm_max_sir_nakagami(cfg.antennas, m)};
    case Formula::max_signal_nakagami: return {*formula, evm_max_signal_nakagami(m, cfg.interferers)};
    case Formula::max_sir_correlated: return {*formula, evm_max_sir_correlated(cfg.rho)};
    case Formula::max_signal_correlated: return {*formula, evm_max_signal_correlated(cfg.rho, cfg.interferers)};
    case Formula::fully_correlated: return {*formula, evm_fully_correlated(cfg.interferers)};
    }
    throw unsupported_configuration("no analytic formula");
}

} // namespace scevm::analytic

#endif // SCEVM_ANALYTIC_HPP
