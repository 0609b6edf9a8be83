// SPDX-License-Identifier: Apache-2.0
#ifndef SCEVM_VERIFY_HPP
#define SCEVM_VERIFY_HPP

// Verification suite: analytic identities plus an analytic-vs-simulation
// grid judged by a 3-sigma z-score test.

#include <scevm/analytic.hpp>
#include <scevm/channel_sim.hpp>
#include <scevm/sweep.hpp>

#include <cmath>
#include <functional>
#include <numbers>
#include <string>
#include <vector>

namespace scevm::verify {

inline constexpr double z_threshold = 3.0;

struct VerifyOptions {
    std::size_t samples = 1000000;
    sim::RngSeed seed;
    sim::SimOptions sim;
    /// Reruns allowed per grid cell (each with a fresh seed) after a failed z-test.
    int max_reruns = 1;
    /// Multiplies the max-SIR i.i.d. closed form. Mutation hook for tests only.
    double max_sir_iid_scale = 1.0;
};

struct CheckLine {
    std::string name;
    bool pass = false;
    std::string detail;
};

struct VerifyReport {
    std::vector<CheckLine> lines;
    std::vector<sweep::SweepRow> rows;
    [[nodiscard]] bool all_pass() const noexcept {
        for (const auto& l : lines) {
            if (!l.pass) return false;
        }
        return !lines.empty();
    }
};

/// The Monte Carlo grid: i.i.d. Rayleigh for both rules, Nakagami desired
/// channels for each rule within its formula's scope, and correlated pairs.
inline std::vector<SystemConfig> consistency_grid() {
    std::vector<SystemConfig> grid;
    for (auto rule : {SelectionRule::max_sir, SelectionRule::max_signal_power}) {
        for (int L : {1, 2, 4}) {
            for (int M : {1, 2, 4}) {
                SystemConfig c;
                c.antennas = L;
                c.interferers = M;
                c.rule = rule;
                grid.push_back(c);
            }
        }
    }
    for (int L : {1, 2, 4}) {
        for (double m : {0.5, 1.0, 2.0, 3.0}) {
            if (m * L <= 0.5) continue; // infinite EVM
            SystemConfig c;
            c.antennas = L;
            c.interferers = 2;
            c.rule = SelectionRule::max_sir;
            c.desired = FadingModel::nakagami(m);
            grid.push_back(c);
        }
    }
    for (double m : {1.0, 2.0, 3.0}) {
        for (int M : {1, 2, 4}) {
            SystemConfig c;
            c.antennas = 2;
            c.interferers = M;
            c.rule = SelectionRule::max_signal_power;
            c.desired = FadingModel::nakagami(m);
            grid.push_back(c);
        }
    }
    for (double rho : {0.3, 0.6, 0.9}) {
        SystemConfig c;
        c.antennas = 2;
        c.interferers = 1;
        c.rule = SelectionRule::max_sir;
        c.rho = rho;
        grid.push_back(c);
    }
    for (double rho : {0.3, 0.6, 0.9}) {
        for (int M : {1, 2, 4}) {
            SystemConfig c;
            c.antennas = 2;
            c.interferers = M;
            c.rule = SelectionRule::max_signal_power;
            c.rho = rho;
            grid.push_back(c);
        }
    }
    return grid;
}

inline std::string describe(const SystemConfig& c) {
    std::string s = "L=" + std::to_string(c.antennas) + " M=" + std::to_string(c.interferers) + " " +
                    std::string(to_string(c.rule));
    if (!c.desired.is_rayleigh()) s += " m_d=" + sweep::detail::format_number(c.desired.shape());
    if (c.rho > 0.0) s += " rho=" + sweep::detail::format_number(c.rho);
    return s;
}

namespace detail {

inline CheckLine close_to(std::string name, double got, double want, double tol) {
    const double diff = std::abs(got - want);
    return {std::move(name), diff <= tol,
            "got " + sweep::detail::format_number(got) + ", want " + sweep::detail::format_number(want) +
                ", |diff| " + sweep::detail::format_number(diff) + " (tol " + sweep::detail::format_number(tol) + ")"};
}

} // namespace detail

/// Analytic identities: anchor constants, CCDF integration against the
/// closed form, the reduction web between formulas, and the large-M limit.
inline std::vector<CheckLine> identity_checks(const sweep::AnalyticFn& analytic_fn) {
    using namespace analytic;
    const double pi = std::numbers::pi;
    std::vector<CheckLine> out;
    auto cfg = [](int L, int M, SelectionRule rule) {
        SystemConfig c;
        c.antennas = L;
        c.interferers = M;
        c.rule = rule;
        return c;
    };
    out.push_back(detail::close_to("anchor max_sir L=1 M=1 = pi/2", analytic_fn(cfg(1, 1, SelectionRule::max_sir)),
                                   pi / 2, 1e-10));
    out.push_back(detail::close_to("anchor max_sir L=2 M=1 = pi/4", analytic_fn(cfg(2, 1, SelectionRule::max_sir)),
                                   pi / 4, 1e-10));
    out.push_back(detail::close_to("anchor max_signal L=2 M=1 = pi(1-1/sqrt2)",
                                   analytic_fn(cfg(2, 1, SelectionRule::max_signal_power)),
                                   pi * (1 - 1 / std::sqrt(2.0)), 1e-10));
    for (int L : {1, 2, 3}) {
        for (int M : {1, 2, 4}) {
            const SystemConfig c = cfg(L, M, SelectionRule::max_sir);
            const double integral = quadrature::integrate_semi_infinite([&](double x) {
                                        return x == 0.0 ? 1.0 : cdf_sir_selected(1.0 / (x * x), c);
                                    }).value;
            out.push_back(detail::close_to("ccdf integral = closed form, " + describe(c), integral, analytic_fn(c),
                                           1e-7));
        }
    }
    for (int L = 1; L <= 4; ++L) {
        out.push_back(detail::close_to("nakagami m_d=1 max_sir reduces to rayleigh, L=" + std::to_string(L),
                                       evm_max_sir_nakagami(L, 1.0), analytic_fn(cfg(L, 2, SelectionRule::max_sir)),
                                       1e-6));
    }
    for (int M : {1, 2, 4}) {
        out.push_back(detail::close_to("nakagami m_d=1 max_signal reduces to rayleigh, M=" + std::to_string(M),
                                       evm_max_signal_nakagami(1.0, M),
                                       analytic_fn(cfg(2, M, SelectionRule::max_signal_power)), 1e-8));
    }
    out.push_back(detail::close_to("correlated max_sir at rho=0 reduces to iid", evm_max_sir_correlated(0.0),
                                   analytic_fn(cfg(2, 1, SelectionRule::max_sir)), 1e-6));
    for (int M : {1, 2, 4}) {
        out.push_back(detail::close_to("correlated max_signal at rho=0 reduces to iid, M=" + std::to_string(M),
                                       evm_max_signal_correlated(0.0, M),
                                       analytic_fn(cfg(2, M, SelectionRule::max_signal_power)), 1e-6));
    }
    for (int M : {16, 64, 256}) {
        const double ratio = evm_fully_correlated(M) / std::sqrt(pi * M);
        out.push_back(detail::close_to("fully correlated ~ sqrt(pi M), M=" + std::to_string(M), ratio, 1.0,
                                       1.0 / (8.0 * M) + 1e-3));
    }
    return out;
}

namespace detail {

template <class Fn>
CheckLine monotone(std::string name, const std::vector<double>& xs, Fn&& fn, bool increasing) {
    std::vector<double> ys;
    for (double x : xs) ys.push_back(fn(x));
    std::string values;
    bool ok = true;
    for (std::size_t i = 0; i < ys.size(); ++i) {
        values += (i ? " " : "") + sweep::detail::format_number(ys[i]);
        if (i > 0) ok = ok && (increasing ? ys[i] > ys[i - 1] : ys[i] < ys[i - 1]);
    }
    return {std::move(name), ok, (increasing ? "strictly increasing: " : "strictly decreasing: ") + values};
}

} // namespace detail

/// Strict monotonicity of every analytic column in L, M, m_d and rho.
inline std::vector<CheckLine> monotonicity_checks() {
    using namespace analytic;
    std::vector<CheckLine> out;
    const std::vector<double> Ls = {1, 2, 3, 4, 5};
    const std::vector<double> Ms = {1, 2, 3, 4, 5};
    for (int M = 1; M <= 5; ++M) {
        out.push_back(detail::monotone("max_sir iid decreasing in L, M=" + std::to_string(M), Ls,
                                       [M](double L) { return evm_max_sir_iid(static_cast<int>(L), M); }, false));
        out.push_back(detail::monotone("max_signal iid decreasing in L, M=" + std::to_string(M), Ls,
                                       [M](double L) { return evm_max_signal_iid(static_cast<int>(L), M); }, false));
    }
    for (int L = 1; L <= 5; ++L) {
        out.push_back(detail::monotone("max_sir iid increasing in M, L=" + std::to_string(L), Ms,
                                       [L](double M) { return evm_max_sir_iid(L, static_cast<int>(M)); }, true));
        out.push_back(detail::monotone("max_signal iid increasing in M, L=" + std::to_string(L), Ms,
                                       [L](double M) { return evm_max_signal_iid(L, static_cast<int>(M)); }, true));
    }
    const std::vector<double> shapes = {0.75, 1.0, 1.5, 2.0, 3.0, 5.0};
    for (double m : {1.0, 2.0, 3.0}) {
        out.push_back(detail::monotone("max_sir nakagami decreasing in L, m_d=" + sweep::detail::format_number(m),
                                       {1, 2, 3, 4, 5, 6},
                                       [m](double L) { return evm_max_sir_nakagami(static_cast<int>(L), m); }, false));
    }
    for (int L : {1, 2, 4}) {
        out.push_back(detail::monotone("max_sir nakagami decreasing in m_d, L=" + std::to_string(L), shapes,
                                       [L](double m) { return evm_max_sir_nakagami(L, m); }, false));
    }
    for (int M : {1, 2, 4}) {
        out.push_back(detail::monotone("max_signal nakagami decreasing in m_d, M=" + std::to_string(M), shapes,
                                       [M](double m) { return evm_max_signal_nakagami(m, M); }, false));
    }
    for (double m : {1.0, 2.0, 3.0}) {
        out.push_back(detail::monotone("max_signal nakagami increasing in M, m_d=" + sweep::detail::format_number(m),
                                       {1, 2, 4, 8}, [m](double M) { return evm_max_signal_nakagami(m, static_cast<int>(M)); },
                                       true));
    }
    const std::vector<double> rhos = {0.0, 0.3, 0.6, 0.9};
    out.push_back(detail::monotone("correlated max_sir increasing in rho", rhos,
                                   [](double r) { return evm_max_sir_correlated(r); }, true));
    for (int M : {1, 2, 4}) {
        out.push_back(detail::monotone("correlated max_signal increasing in rho, M=" + std::to_string(M), rhos,
                                       [M](double r) { return evm_max_signal_correlated(r, M); }, true));
    }
    return out;
}

/// max-SIR <= max-signal for every pair of grid rows that differ only in the
/// rule and have L >= 2, for both the analytic and the simulated value.
inline std::vector<CheckLine> rule_ordering_checks(const std::vector<sweep::SweepRow>& rows) {
    std::vector<CheckLine> out;
    for (const auto& sir : rows) {
        if (sir.rule != SelectionRule::max_sir || sir.antennas < 2) continue;
        for (const auto& sig : rows) {
            if (sig.rule != SelectionRule::max_signal_power || sig.antennas != sir.antennas ||
                sig.interferers != sir.interferers || sig.shape != sir.shape || sig.rho != sir.rho) {
                continue;
            }
            SystemConfig c;
            c.antennas = sir.antennas;
            c.interferers = sir.interferers;
            c.rho = sir.rho;
            if (sir.shape != 1.0) c.desired = FadingModel::nakagami(sir.shape);
            const std::string where = describe(c);
            if (sir.analytic && sig.analytic) {
                out.push_back({"rule ordering (analytic), " + where, *sir.analytic <= *sig.analytic,
                               sweep::detail::format_number(*sir.analytic) + " <= " +
                                   sweep::detail::format_number(*sig.analytic)});
            }
            if (sir.mc_mean && sig.mc_mean) {
                out.push_back({"rule ordering (simulated), " + where, *sir.mc_mean <= *sig.mc_mean,
                               sweep::detail::format_number(*sir.mc_mean) + " <= " +
                                   sweep::detail::format_number(*sig.mc_mean)});
            }
        }
    }
    return out;
}

/// Runs the identities and the Monte Carlo grid. The CSV of `rows` is
/// byte-identical for identical options.
inline VerifyReport run_verification(const VerifyOptions& opts) {
    sweep::AnalyticFn analytic_fn = sweep::default_analytic;
    if (opts.max_sir_iid_scale != 1.0) {
        analytic_fn = [scale = opts.max_sir_iid_scale](const SystemConfig& c) {
            const auto r = analytic::evaluate(c);
            return r.formula == analytic::Formula::max_sir_iid ? r.evm * scale : r.evm;
        };
    }
    VerifyReport report;
    report.lines = identity_checks(analytic_fn);
    const auto grid = consistency_grid();
    for (std::size_t i = 0; i < grid.size(); ++i) {
        sweep::SweepRow row;
        int attempt = 0;
        for (;; ++attempt) {
            row = sweep::evaluate_row(grid[i], true, true, opts.samples, sweep::row_seed(opts.seed, i, attempt),
                                      opts.sim, analytic_fn);
            const bool ok = row.z_score && std::abs(*row.z_score) <= z_threshold;
            if (ok || attempt >= opts.max_reruns) break;
        }
        const bool pass = row.z_score && std::abs(*row.z_score) <= z_threshold;
        std::string detail = row.z_score ? "analytic " + sweep::detail::format_number(*row.analytic) + ", mc " +
                                               sweep::detail::format_number(*row.mc_mean) + " +- " +
                                               sweep::detail::format_number(*row.mc_stderr) + ", z " +
                                               sweep::detail::format_number(*row.z_score)
                                         : "status " + std::string(sweep::to_string(row.status));
        if (attempt > 0) detail += " (after " + std::to_string(attempt) + " rerun with fresh seed)";
        report.lines.push_back({"mc vs analytic, " + describe(grid[i]), pass, detail});
        report.rows.push_back(row);
    }
    for (auto& line : monotonicity_checks()) report.lines.push_back(std::move(line));
    for (auto& line : rule_ordering_checks(report.rows)) report.lines.push_back(std::move(line));
    return report;
}

} // namespace scevm::verify

#endif // SCEVM_VERIFY_HPP
