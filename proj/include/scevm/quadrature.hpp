// SPDX-License-Identifier: Apache-2.0
#ifndef SCEVM_QUADRATURE_HPP
#define SCEVM_QUADRATURE_HPP

#include <scevm/errors.hpp>
#include <scevm/specfun.hpp>

#include <array>
#include <cmath>
#include <cstddef>
#include <algorithm>
#include <queue>
#include <string>
#include <tuple>
#include <utility>

namespace scevm::quadrature {

struct QuadratureResult {
    double value = 0.0;
    double abs_error_estimate = 0.0;
    std::size_t evaluations = 0;
};

struct QuadratureOptions {
    double abs_tol = 1e-10;
    double rel_tol = 1e-9;
    std::size_t max_evaluations = 200000;
};

enum class SqrtWeight { divide_by_sqrt, multiply_by_sqrt };

namespace detail {

// 15-point Kronrod extension of the 7-point Gauss rule (QUADPACK qk15).
inline constexpr std::array<double, 8> kronrod_nodes = {
    0.991455371120812639206854697526329, 0.949107912342758524526189684047851,
    0.864864423359769072789712788640926, 0.741531185599394439863864773280788,
    0.586087235467691130294144845693013, 0.405845151377397166906606412076961,
    0.207784955007898467600689403773245, 0.000000000000000000000000000000000,
};
inline constexpr std::array<double, 8> kronrod_weights = {
    0.022935322010529224963732008058970, 0.063092092629978553290700663189204,
    0.104790010322250183839876322541518, 0.140653259715525918745189590510238,
    0.169004726639267902826583426598550, 0.190350578064785409913256402421014,
    0.204432940075298892414161999234649, 0.209482141084727828012999174891714,
};
// Gauss weights at kronrod_nodes[1], [3], [5], [7].
inline constexpr std::array<double, 4> gauss_weights = {
    0.129484966168869693270611432679082, 0.279705391489276667901467771423780,
    0.381830050505118944950369775488975, 0.417959183673469387755102040816327,
};

struct Segment {
    double lo;
    double hi;
    double value;
    double error;
    bool operator<(const Segment& other) const noexcept { return error < other.error; }
};

template <class F>
Segment gauss_kronrod_15(F& f, double lo, double hi) {
    const double center = 0.5 * (lo + hi);
    const double half = 0.5 * (hi - lo);
    const double f_center = f(center);
    double kronrod = f_center * kronrod_weights[7];
    double gauss = f_center * gauss_weights[3];
    std::array<double, 7> f_left{};
    std::array<double, 7> f_right{};
    for (std::size_t j = 0; j < 7; ++j) {
        const double dx = half * kronrod_nodes[j];
        f_left[j] = f(center - dx);
        f_right[j] = f(center + dx);
        const double pair = f_left[j] + f_right[j];
        kronrod += kronrod_weights[j] * pair;
        if (j % 2 == 1) gauss += gauss_weights[j / 2] * pair;
    }
    const double mean = 0.5 * kronrod;
    double asc = kronrod_weights[7] * std::abs(f_center - mean);
    for (std::size_t j = 0; j < 7; ++j) {
        asc += kronrod_weights[j] * (std::abs(f_left[j] - mean) + std::abs(f_right[j] - mean));
    }
    asc *= std::abs(half);
    double error = std::abs((kronrod - gauss) * half);
    if (asc != 0.0 && error != 0.0) {
        error = asc * std::min(1.0, std::pow(200.0 * error / asc, 1.5));
    }
    const double value = kronrod * half;
    if (!std::isfinite(value)) {
        throw domain_error("quadrature: integrand is not finite on [" + std::to_string(lo) + ", " +
                           std::to_string(hi) + "]");
    }
    return {lo, hi, value, error};
}

} // namespace detail

/// Globally adaptive Gauss-Kronrod integration of f over the finite interval [lo, hi].
///
/// The segment with the largest error estimate is bisected until the summed
/// error meets max(abs_tol, rel_tol*|value|). Endpoints are never evaluated.
template <class F>
QuadratureResult integrate_finite(F&& f, double lo, double hi, const QuadratureOptions& opts = {}) {
    if (!(opts.abs_tol > 0.0) || !(opts.rel_tol > 0.0)) {
        throw domain_error("quadrature: tolerances must be positive");
    }
    std::priority_queue<detail::Segment> segments;
    segments.push(detail::gauss_kronrod_15(f, lo, hi));
    std::size_t evaluations = 15;

    auto totals = [&segments] {
        auto copy = segments;
        specfun::detail::compensated_sum value;
        double error = 0.0;
        while (!copy.empty()) {
            value.add(copy.top().value);
            error += copy.top().error;
            copy.pop();
        }
        return std::pair{value.value(), error};
    };

    double value = segments.top().value;
    double error = segments.top().error;
    while (error > std::max(opts.abs_tol, opts.rel_tol * std::abs(value))) {
        if (evaluations + 30 > opts.max_evaluations) {
            throw accuracy_not_reached("quadrature: evaluation budget exhausted before reaching tolerance", value,
                                       error);
        }
        const detail::Segment worst = segments.top();
        const double mid = 0.5 * (worst.lo + worst.hi);
        if (!(mid > worst.lo && mid < worst.hi)) {
            throw accuracy_not_reached("quadrature: segment cannot be subdivided further", value, error);
        }
        segments.pop();
        const detail::Segment left = detail::gauss_kronrod_15(f, worst.lo, mid);
        const detail::Segment right = detail::gauss_kronrod_15(f, mid, worst.hi);
        segments.push(left);
        segments.push(right);
        evaluations += 30;
        if (segments.size() % 64 == 0) {
            std::tie(value, error) = totals(); // shed drift from the running update
        } else {
            value += (left.value + right.value) - worst.value;
            error += (left.error + right.error) - worst.error;
        }
    }
    std::tie(value, error) = totals();
    return {value, error, evaluations};
}

/// Integral of f over [0, inf) via the map x = t/(1-t) onto [0, 1).
template <class F>
QuadratureResult integrate_semi_infinite(F&& f, const QuadratureOptions& opts = {}) {
    auto mapped = [&f](double t) {
        const double s = 1.0 - t;
        if (s <= 0.0) return 0.0; // the node rounded onto t = 1, i.e. x = inf
        return f(t / s) / (s * s);
    };
    return integrate_finite(mapped, 0.0, 1.0, opts);
}

template <class F>
QuadratureResult integrate_semi_infinite(F&& f, double abs_tol, double rel_tol) {
    QuadratureOptions opts;
    opts.abs_tol = abs_tol;
    opts.rel_tol = rel_tol;
    return integrate_semi_infinite(std::forward<F>(f), opts);
}

/// Integral over [0, inf) of f(x)/sqrt(x) or f(x)*sqrt(x).
///
/// The substitution x = t^2 absorbs the sqrt weight exactly, so the 1/sqrt(x)
/// endpoint singularity never reaches the quadrature rule.
template <class F>
QuadratureResult integrate_weighted_sqrt(F&& f, SqrtWeight mode, const QuadratureOptions& opts = {}) {
    if (mode == SqrtWeight::divide_by_sqrt) {
        return integrate_semi_infinite([&f](double t) { return 2.0 * f(t * t); }, opts);
    }
    return integrate_semi_infinite([&f](double t) { return 2.0 * t * t * f(t * t); }, opts);
}

template <class F>
QuadratureResult integrate_weighted_sqrt(F&& f, SqrtWeight mode, double abs_tol, double rel_tol) {
    QuadratureOptions opts;
    opts.abs_tol = abs_tol;
    opts.rel_tol = rel_tol;
    return integrate_weighted_sqrt(std::forward<F>(f), mode, opts);
}

} // namespace scevm::quadrature

#endif // SCEVM_QUADRATURE_HPP
