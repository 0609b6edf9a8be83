// SPDX-License-Identifier: Apache-2.0
#ifndef SCEVM_SWEEP_HPP
#define SCEVM_SWEEP_HPP

#include <scevm/analytic.hpp>
#include <scevm/channel_sim.hpp>
#include <scevm/errors.hpp>
#include <scevm/system_config.hpp>

#include <cmath>
#include <cstdio>
#include <filesystem>
#include <fstream>
#include <functional>
#include <istream>
#include <optional>
#include <ostream>
#include <set>
#include <sstream>
#include <string>
#include <string_view>
#include <vector>

namespace scevm::sweep {

enum class Axis { antennas, interferers, shape, rho };

enum class RowStatus {
    ok,
    unsupported,
    diverged,
    /// A numerical routine (quadrature, cancellation guard) failed.
    failed,
};

inline std::string_view to_string(RowStatus s) noexcept {
    switch (s) {
    case RowStatus::ok: return "ok";
    case RowStatus::unsupported: return "unsupported";
    case RowStatus::diverged: return "diverged";
    case RowStatus::failed: return "failed";
    }
    return "failed";
}

struct SweepSpec {
    Axis axis = Axis::antennas;
    std::vector<double> values;
    SystemConfig base;
    bool analytic = true;
    bool montecarlo = true;
    std::size_t mc_samples = 1000000;
    sim::RngSeed seed;
    sim::SimOptions sim;

    void validate() const {
        if (values.empty()) throw validation_error("sweep axis values must not be empty");
        for (std::size_t i = 1; i < values.size(); ++i) {
            if (!(values[i] > values[i - 1])) throw validation_error("sweep axis values must be strictly increasing");
        }
        if (axis == Axis::antennas || axis == Axis::interferers) {
            for (double v : values) {
                if (v != std::floor(v) || v < 1.0) {
                    throw validation_error("L and M axis values must be positive integers");
                }
            }
        }
        if (!analytic && !montecarlo) throw validation_error("sweep needs at least one engine");
    }
};

struct SweepRow {
    int antennas = 1;
    int interferers = 1;
    SelectionRule rule = SelectionRule::max_sir;
    double shape = 1.0;
    double rho = 0.0;
    std::optional<double> analytic;
    std::optional<double> mc_mean;
    std::optional<double> mc_stderr;
    std::optional<double> z_score;
    RowStatus status = RowStatus::ok;
};

/// Analytic evaluator used by rows; replaceable so verification can be
/// exercised against deliberately wrong formulas.
using AnalyticFn = std::function<double(const SystemConfig&)>;

inline double default_analytic(const SystemConfig& cfg) { return analytic::evaluate(cfg).evm; }

/// Stream key for row `index` of a sweep seeded with `seed`; `attempt` > 0
/// gives fresh, independent seeds for reruns.
inline sim::RngSeed row_seed(sim::RngSeed seed, std::size_t index, std::size_t attempt = 0) noexcept {
    return {rng::splitmix64(seed.value ^ rng::splitmix64(index + 0x100000000ULL * attempt))};
}

/// Builds the row for one configuration. Configuration errors and numerical
/// failures end up in the row status instead of propagating.
inline SweepRow evaluate_row(SystemConfig cfg, bool run_analytic, bool run_montecarlo, std::size_t samples,
                             sim::RngSeed seed, const sim::SimOptions& sim_opts = {},
                             const AnalyticFn& analytic_fn = default_analytic) {
    SweepRow row;
    row.antennas = cfg.antennas;
    row.interferers = cfg.interferers;
    row.rule = cfg.rule;
    row.shape = cfg.desired.shape();
    row.rho = cfg.rho;
    try {
        cfg.validate();
    } catch (const unsupported_configuration&) {
        row.status = RowStatus::unsupported;
        return row;
    }
    if (run_analytic && analytic::select_formula(cfg)) {
        try {
            row.analytic = analytic_fn(cfg);
        } catch (const divergent_moment&) {
            row.status = RowStatus::diverged;
            return row;
        } catch (const error&) {
            row.status = RowStatus::failed;
            return row;
        }
    } else if (cfg.desired.shape() * cfg.antennas <= 0.5 && cfg.rule == SelectionRule::max_sir) {
        // no formula to report it, but the EVM itself is infinite here
        row.status = RowStatus::diverged;
        return row;
    }
    if (run_montecarlo) {
        const auto est = sim::estimate_evm(cfg, samples, seed, sim_opts);
        row.mc_mean = est.mean;
        row.mc_stderr = est.std_error;
        if (row.analytic && est.std_error > 0.0) row.z_score = (est.mean - *row.analytic) / est.std_error;
    }
    return row;
}

inline SystemConfig config_at(const SweepSpec& spec, double value) {
    SystemConfig cfg = spec.base;
    switch (spec.axis) {
    case Axis::antennas: cfg.antennas = static_cast<int>(value); break;
    case Axis::interferers: cfg.interferers = static_cast<int>(value); break;
    case Axis::shape: cfg.desired = FadingModel::nakagami(value); break;
    case Axis::rho: cfg.rho = value; break;
    }
    return cfg;
}

/// One row per axis value, in axis order.
inline std::vector<SweepRow> run_sweep(const SweepSpec& spec, const AnalyticFn& analytic_fn = default_analytic) {
    spec.validate();
    std::vector<SweepRow> rows;
    rows.reserve(spec.values.size());
    for (std::size_t i = 0; i < spec.values.size(); ++i) {
        SystemConfig cfg;
        try {
            cfg = config_at(spec, spec.values[i]);
        } catch (const validation_error&) {
            SweepRow row = evaluate_row(spec.base, false, false, 0, spec.seed);
            row.shape = spec.values[i];
            row.status = RowStatus::unsupported;
            rows.push_back(row);
            continue;
        }
        rows.push_back(evaluate_row(cfg, spec.analytic, spec.montecarlo, spec.mc_samples, row_seed(spec.seed, i),
                                    spec.sim, analytic_fn));
    }
    return rows;
}

inline constexpr std::string_view csv_header = "L,M,rule,m_d,rho,analytic,mc_mean,mc_stderr,z_score,status";

namespace detail {

inline std::string format_number(double v) {
    char buf[64];
    std::snprintf(buf, sizeof buf, "%.12g", v);
    return buf;
}

inline std::string format_optional(const std::optional<double>& v) { return v ? format_number(*v) : std::string{}; }

inline std::vector<std::string> split_fields(const std::string& line) {
    std::vector<std::string> fields;
    std::string field;
    std::istringstream in(line);
    while (std::getline(in, field, ',')) fields.push_back(field);
    if (!line.empty() && line.back() == ',') fields.emplace_back();
    return fields;
}

inline double parse_double(const std::string& s) {
    std::size_t used = 0;
    const double v = std::stod(s, &used);
    if (used != s.size()) throw validation_error("csv: malformed number '" + s + "'");
    return v;
}

} // namespace detail

inline void emit_csv(const std::vector<SweepRow>& rows, std::ostream& out) {
    if (rows.empty()) throw validation_error("emit_csv: no rows");
    out << csv_header << '\n';
    for (const auto& r : rows) {
        out << r.antennas << ',' << r.interferers << ',' << to_string(r.rule) << ',' << detail::format_number(r.shape)
            << ',' << detail::format_number(r.rho) << ',' << detail::format_optional(r.analytic) << ','
            << detail::format_optional(r.mc_mean) << ',' << detail::format_optional(r.mc_stderr) << ','
            << detail::format_optional(r.z_score) << ',' << to_string(r.status) << '\n';
    }
    if (!out) throw io_error("emit_csv: write failed");
}

inline std::string emit_csv(const std::vector<SweepRow>& rows) {
    std::ostringstream out;
    emit_csv(rows, out);
    return out.str();
}

inline void emit_csv(const std::vector<SweepRow>& rows, const std::filesystem::path& destination) {
    std::ofstream out(destination, std::ios::binary);
    if (!out) throw io_error("cannot open " + destination.string() + " for writing");
    emit_csv(rows, out);
}

inline std::vector<SweepRow> parse_csv(std::istream& in) {
    std::string line;
    if (!std::getline(in, line) || line != csv_header) throw validation_error("csv: missing or unexpected header");
    std::vector<SweepRow> rows;
    while (std::getline(in, line)) {
        if (line.empty()) continue;
        const auto f = detail::split_fields(line);
        if (f.size() != 10) throw validation_error("csv: expected 10 fields, got " + std::to_string(f.size()));
        SweepRow r;
        r.antennas = std::stoi(f[0]);
        r.interferers = std::stoi(f[1]);
        const auto rule = parse_selection_rule(f[2]);
        if (!rule) throw validation_error("csv: unknown rule '" + f[2] + "'");
        r.rule = *rule;
        r.shape = detail::parse_double(f[3]);
        r.rho = detail::parse_double(f[4]);
        auto opt = [](const std::string& s) -> std::optional<double> {
            if (s.empty()) return std::nullopt;
            return detail::parse_double(s);
        };
        r.analytic = opt(f[5]);
        r.mc_mean = opt(f[6]);
        r.mc_stderr = opt(f[7]);
        r.z_score = opt(f[8]);
        if (f[9] == "ok") r.status = RowStatus::ok;
        else if (f[9] == "unsupported") r.status = RowStatus::unsupported;
        else if (f[9] == "diverged") r.status = RowStatus::diverged;
        else if (f[9] == "failed") r.status = RowStatus::failed;
        else throw validation_error("csv: unknown status '" + f[9] + "'");
        rows.push_back(r);
    }
    return rows;
}

enum class FigureKind { fig1, fig2, fig3 };

inline std::string_view to_string(FigureKind k) noexcept {
    switch (k) {
    case FigureKind::fig1: return "fig1";
    case FigureKind::fig2: return "fig2";
    case FigureKind::fig3: return "fig3";
    }
    return "fig1";
}

inline std::optional<FigureKind> parse_figure_kind(std::string_view s) noexcept {
    if (s == "fig1") return FigureKind::fig1;
    if (s == "fig2") return FigureKind::fig2;
    if (s == "fig3") return FigureKind::fig3;
    return std::nullopt;
}

/// Sweeps behind each figure-style dataset. The grids are local choices.
inline std::vector<SweepSpec> preset(FigureKind kind, std::size_t mc_samples, sim::RngSeed seed) {
    std::vector<SweepSpec> specs;
    auto make = [&](Axis axis, std::vector<double> values, SystemConfig base) {
        SweepSpec s;
        s.axis = axis;
        s.values = std::move(values);
        s.base = base;
        s.mc_samples = mc_samples;
        // one independent stream family per sub-sweep
        s.seed = {rng::splitmix64(seed.value + specs.size())};
        specs.push_back(std::move(s));
    };
    switch (kind) {
    case FigureKind::fig1:
        // number of antennas, max-SIR, Nakagami desired, two interferers
        for (double m : {1.0, 2.0, 3.0}) {
            SystemConfig base;
            base.interferers = 2;
            base.rule = SelectionRule::max_sir;
            base.desired = FadingModel::nakagami(m);
            make(Axis::antennas, {1, 2, 3, 4, 5, 6}, base);
        }
        break;
    case FigureKind::fig2:
        // correlation, two antennas, one interferer, both rules
        for (auto rule : {SelectionRule::max_sir, SelectionRule::max_signal_power}) {
            SystemConfig base;
            base.antennas = 2;
            base.interferers = 1;
            base.rule = rule;
            make(Axis::rho, {0.0, 0.2, 0.4, 0.6, 0.8}, base);
        }
        break;
    case FigureKind::fig3:
        // Nakagami shape, two antennas, max-signal, M interferers
        for (int M : {1, 2, 4}) {
            SystemConfig base;
            base.antennas = 2;
            base.interferers = M;
            base.rule = SelectionRule::max_signal_power;
            base.desired = FadingModel::nakagami(1.0);
            make(Axis::shape, {1.0, 1.5, 2.0, 2.5, 3.0, 4.0, 5.0}, base);
        }
        break;
    }
    return specs;
}

namespace detail {

struct PlotLayout {
    std::string_view title;
    std::string_view xlabel;
    int x_column;      // 1-based CSV column
    int series_column; // 1-based CSV column keying each curve
    std::string_view series_label;
};

inline PlotLayout layout(FigureKind kind) {
    switch (kind) {
    case FigureKind::fig1:
        return {"EVM vs L: M = 2, Nakagami-m desired, max-SIR",
                "number of receive antennas L", 1, 4, "m_d"};
    case FigureKind::fig2:
        return {"EVM vs rho: L = 2, M = 1, Rayleigh", "correlation coefficient rho", 5,
                3, "rule"};
    case FigureKind::fig3:
        return {"EVM vs m_d: L = 2, max-signal", "Nakagami shape m_d", 4, 2,
                "M"};
    }
    return layout(FigureKind::fig1);
}

inline void check_rows_for_figure(const std::vector<SweepRow>& rows, FigureKind kind) {
    if (rows.empty()) throw validation_error("plot script: no rows");
    for (const auto& r : rows) {
        switch (kind) {
        case FigureKind::fig1:
            if (r.rule != SelectionRule::max_sir || r.interferers != 2 || r.rho != 0.0) {
                throw validation_error("fig1 rows must be max-SIR with M = 2 and rho = 0");
            }
            break;
        case FigureKind::fig2:
            if (r.antennas != 2) throw validation_error("fig2 rows must have L = 2");
            break;
        case FigureKind::fig3:
            if (r.antennas != 2 || r.rule != SelectionRule::max_signal_power || r.rho != 0.0) {
                throw validation_error("fig3 rows must be max-signal with L = 2 and rho = 0");
            }
            break;
        }
    }
}

} // namespace detail

/// gnuplot script that draws the analytic curves and the Monte Carlo points
/// with error bars from `csv_name`, one curve per series key.
inline std::string emit_plot_script(const std::vector<SweepRow>& rows, FigureKind kind, const std::string& csv_name) {
    detail::check_rows_for_figure(rows, kind);
    const auto lay = detail::layout(kind);
    std::set<std::string> keys;
    for (const auto& r : rows) {
        switch (kind) {
        case FigureKind::fig1: keys.insert(detail::format_number(r.shape)); break;
        case FigureKind::fig2: keys.insert(std::string(to_string(r.rule))); break;
        case FigureKind::fig3: keys.insert(std::to_string(r.interferers)); break;
        }
    }
    const bool string_key = kind == FigureKind::fig2;
    std::ostringstream s;
    s << "# gnuplot script generated for " << to_string(kind) << "\n"
      << "set datafile separator ','\n"
      << "set title \"" << lay.title << "\"\n"
      << "set xlabel \"" << lay.xlabel << "\"\n"
      << "set ylabel \"EVM\"\n"
      << "set key outside right\n"
      << "set grid\n"
      << "data = '" << csv_name << "'\n"
      << "plot \\\n";
    std::size_t n = 0;
    for (const auto& key : keys) {
        const std::string test = string_key ? "strcol(" + std::to_string(lay.series_column) + ") eq \"" + key + "\""
                                            : "column(" + std::to_string(lay.series_column) + ") == " + key;
        const std::string x = "column(" + std::to_string(lay.x_column) + ")";
        const std::string label = std::string(lay.series_label) + " = " + key;
        s << "  data skip 1 using (" << x << "):((" << test << ") ? column(6) : NaN) with lines title \"analytic, "
          << label << "\", \\\n"
          << "  data skip 1 using (" << x << "):((" << test << ") ? column(7) : NaN):((" << test
          << ") ? column(8) : NaN) with yerrorbars title \"simulation, " << label << "\"";
        s << (++n < keys.size() ? ", \\\n" : "\n");
    }
    return s.str();
}

inline void emit_plot_script(const std::vector<SweepRow>& rows, FigureKind kind, const std::filesystem::path& csv_path,
                             const std::filesystem::path& destination) {
    const std::string script = emit_plot_script(rows, kind, csv_path.filename().string());
    std::ofstream out(destination, std::ios::binary);
    if (!out) throw io_error("cannot open " + destination.string() + " for writing");
    out << script;
    if (!out) throw io_error("write failed for " + destination.string());
}

} // namespace scevm::sweep

#endif // SCEVM_SWEEP_HPP
