// SPDX-License-Identifier: Apache-2.0
#ifndef SCEVM_CLI_HPP
#define SCEVM_CLI_HPP

// Command-line front end: `eval`, `verify` and `sweep` subcommands.
// Exit codes: 0 success, 1 validation error, 2 numerical failure,
// 3 verification failure.

#include <scevm/analytic.hpp>
#include <scevm/channel_sim.hpp>
#include <scevm/sweep.hpp>
#include <scevm/verify.hpp>

#include <CLI11.hpp>

#include <cmath>
#include <cstdint>
#include <filesystem>
#include <optional>
#include <ostream>
#include <sstream>
#include <string>
#include <vector>

namespace scevm::cli {

enum ExitCode : int { exit_ok = 0, exit_validation = 1, exit_numerical = 2, exit_verification = 3 };

struct CliConfig {
    std::string subcommand;
    std::optional<int> antennas;
    std::optional<int> interferers;
    std::string rule = "max-sir";
    std::optional<std::string> fading;
    std::optional<double> shape;
    double rho = 0.0;
    std::string samples = "1000000";
    std::uint64_t seed = sim::RngSeed{}.value;
    std::string out_dir = ".";
    std::optional<std::string> preset;
    std::optional<std::string> axis;
    std::vector<double> values;
    bool simulate = false;
    unsigned threads = 0;
    double canary_scale = 1.0;
};

/// Flags every subcommand understands, as they appear in --help.
inline const std::vector<std::string>& documented_flags() {
    static const std::vector<std::string> flags = {"--L",       "--M",     "--rule",   "--fading", "--md",
                                                   "--rho",     "--samples", "--seed", "--out",    "--preset",
                                                   "--axis",    "--values",  "--simulate", "--threads", "--config"};
    return flags;
}

/// Builds the parser; `cfg` receives parsed values. Flags live on the root
/// app and fall through from the subcommands, so a config file is flat
/// `key = value` lines and command-line flags override it.
inline std::unique_ptr<CLI::App> make_app(CliConfig& cfg) {
    auto app = std::make_unique<CLI::App>("Selection-combining EVM: closed forms and Monte Carlo verification",
                                          "scevm");
    app->require_subcommand(1);
    app->set_config("--config", "", "Read flag values from an INI/TOML-style key = value file");
    app->allow_config_extras(CLI::config_extras_mode::error);

    app->add_option("--L", cfg.antennas, "Receive antennas L (>= 1)")->check(CLI::PositiveNumber);
    app->add_option("--M", cfg.interferers, "Co-channel interferers M (>= 1)")->check(CLI::PositiveNumber);
    app->add_option("--rule", cfg.rule, "Selection rule")
        ->check(CLI::IsMember({"max-sir", "max-signal", "max_sir", "max_signal"}))
        ->capture_default_str();
    app->add_option("--fading", cfg.fading, "Desired-channel fading {rayleigh|nakagami}")
        ->check(CLI::IsMember({"rayleigh", "nakagami"}));
    app->add_option("--md", cfg.shape, "Nakagami shape m_d (> 0); implies --fading nakagami");
    app->add_option("--rho", cfg.rho, "Antenna correlation coefficient in [0, 1]")->capture_default_str();
    app->add_option("--samples", cfg.samples, "Monte Carlo samples per configuration (accepts 1e6)")
        ->capture_default_str();
    app->add_option("--seed", cfg.seed, "RNG seed (64-bit)")->capture_default_str();
    app->add_option("--out", cfg.out_dir, "Output directory for CSV and plot files")->capture_default_str();
    app->add_option("--preset", cfg.preset, "Sweep preset {fig1|fig2|fig3}")
        ->check(CLI::IsMember({"fig1", "fig2", "fig3"}));
    app->add_option("--axis", cfg.axis, "Custom sweep axis {L|M|md|rho}")->check(CLI::IsMember({"L", "M", "md", "rho"}));
    app->add_option("--values", cfg.values, "Custom sweep axis values, comma separated")->delimiter(',');
    app->add_flag("--simulate", cfg.simulate, "eval: also run the Monte Carlo estimator");
    app->add_option("--threads", cfg.threads, "Worker threads for Monte Carlo (0 = all cores)")->capture_default_str();
    app->add_option("--canary-scale", cfg.canary_scale, "test hook: scale the max-SIR i.i.d. closed form")
        ->group("");

    app->add_subcommand("eval", "Evaluate the analytic EVM for one configuration")->fallthrough();
    app->add_subcommand("verify", "Run identity checks and the Monte Carlo consistency grid")->fallthrough();
    app->add_subcommand("sweep", "Write a figure-style sweep as CSV plus a gnuplot script")->fallthrough();
    return app;
}

namespace detail {

inline std::size_t parse_samples(const std::string& text) {
    double v = 0.0;
    try {
        std::size_t used = 0;
        v = std::stod(text, &used);
        if (used != text.size()) throw std::invalid_argument(text);
    } catch (const std::exception&) {
        throw validation_error("--samples: not a number: " + text);
    }
    if (!(v >= 1000.0) || v != std::floor(v) || v > 1e12) {
        throw validation_error("--samples must be an integer >= 1000");
    }
    return static_cast<std::size_t>(v);
}

inline SystemConfig system_config(const CliConfig& c) {
    SystemConfig cfg;
    cfg.antennas = c.antennas.value_or(1);
    cfg.interferers = c.interferers.value_or(1);
    cfg.rule = *parse_selection_rule(c.rule);
    const bool nakagami = c.fading ? *c.fading == "nakagami" : c.shape.has_value();
    if (c.fading && *c.fading == "rayleigh" && c.shape) {
        throw validation_error("--md applies only to --fading nakagami");
    }
    if (nakagami) cfg.desired = FadingModel::nakagami(c.shape.value_or(1.0));
    cfg.rho = c.rho;
    cfg.validate();
    return cfg;
}

inline std::string fmt(double v) { return sweep::detail::format_number(v); }

inline void print_config(std::ostream& out, const SystemConfig& cfg) {
    out << "configuration: L=" << cfg.antennas << " M=" << cfg.interferers << " rule=" << to_string(cfg.rule)
        << " fading=" << (cfg.desired.is_rayleigh() ? "rayleigh" : "nakagami") << " m_d=" << fmt(cfg.desired.shape())
        << " rho=" << fmt(cfg.rho) << '\n';
}

inline sim::SimOptions sim_options(const CliConfig& c) {
    sim::SimOptions o;
    o.threads = c.threads;
    return o;
}

inline int cmd_eval(const CliConfig& c, std::ostream& out, std::ostream& err) {
    const SystemConfig cfg = system_config(c);
    print_config(out, cfg);
    const auto formula = analytic::select_formula(cfg);
    std::optional<double> value;
    if (formula) {
        value = analytic::evaluate(cfg).evm;
        out << "formula: " << analytic::describe(*formula) << '\n';
        out << "analytic EVM: " << fmt(*value) << '\n';
    } else if (!c.simulate) {
        analytic::evaluate(cfg); // throws with the violated constraint
    } else {
        out << "formula: none for this configuration\n";
    }
    if (c.simulate) {
        const auto est = sim::estimate_evm(cfg, parse_samples(c.samples), {c.seed}, sim_options(c));
        out << "monte carlo EVM: " << fmt(est.mean) << " +- " << fmt(est.std_error) << " (" << est.samples
            << " samples";
        if (est.rejected) out << ", " << est.rejected << " zero-power draws resampled";
        out << ")\n";
        if (value && est.std_error > 0.0) out << "z-score: " << fmt((est.mean - *value) / est.std_error) << '\n';
    }
    (void)err;
    return exit_ok;
}

inline int cmd_verify(const CliConfig& c, std::ostream& out, std::ostream& err) {
    verify::VerifyOptions opts;
    opts.samples = parse_samples(c.samples);
    opts.seed = {c.seed};
    opts.sim = sim_options(c);
    opts.max_sir_iid_scale = c.canary_scale;
    if (opts.samples < 1000000) {
        out << "note: " << opts.samples << " samples per cell (default 1000000); standard errors are about "
            << fmt(std::sqrt(1e6 / static_cast<double>(opts.samples))) << "x wider, threshold stays |z| <= "
            << fmt(verify::z_threshold) << '\n';
    }
    const auto report = verify::run_verification(opts);
    std::size_t failed = 0;
    for (const auto& line : report.lines) {
        out << (line.pass ? "[PASS] " : "[FAIL] ") << line.name << ": " << line.detail << '\n';
        if (!line.pass) ++failed;
    }
    const std::filesystem::path dir(c.out_dir);
    std::filesystem::create_directories(dir);
    const auto csv = dir / "verify.csv";
    sweep::emit_csv(report.rows, csv);
    out << "wrote " << csv.string() << '\n';
    out << (failed == 0 ? "verification passed" : "verification FAILED") << " (" << report.lines.size() - failed
        << "/" << report.lines.size() << " checks)\n";
    if (failed) err << failed << " verification checks failed\n";
    return failed == 0 ? exit_ok : exit_verification;
}

inline sweep::Axis parse_axis(const std::string& s) {
    if (s == "L") return sweep::Axis::antennas;
    if (s == "M") return sweep::Axis::interferers;
    if (s == "md") return sweep::Axis::shape;
    return sweep::Axis::rho;
}

inline int cmd_sweep(const CliConfig& c, std::ostream& out, std::ostream& /*err*/) {
    const std::size_t samples = parse_samples(c.samples);
    const std::filesystem::path dir(c.out_dir);
    std::vector<sweep::SweepRow> rows;
    std::string stem = "sweep";
    std::optional<sweep::FigureKind> kind;
    if (c.preset) {
        kind = sweep::parse_figure_kind(*c.preset);
        stem = *c.preset;
        for (auto spec : sweep::preset(*kind, samples, {c.seed})) {
            spec.sim = sim_options(c);
            for (auto& r : sweep::run_sweep(spec)) rows.push_back(r);
        }
    } else {
        if (!c.axis || c.values.empty()) throw validation_error("sweep needs --preset, or --axis with --values");
        sweep::SweepSpec spec;
        spec.axis = parse_axis(*c.axis);
        spec.values = c.values;
        CliConfig base = c;
        base.rho = spec.axis == sweep::Axis::rho ? 0.0 : c.rho;
        spec.base = system_config(base);
        spec.mc_samples = samples;
        spec.seed = {c.seed};
        spec.sim = sim_options(c);
        rows = sweep::run_sweep(spec);
    }
    std::filesystem::create_directories(dir);
    const auto csv = dir / (stem + ".csv");
    sweep::emit_csv(rows, csv);
    out << "wrote " << csv.string() << '\n';
    if (kind) {
        const auto plot = dir / (stem + ".plot");
        sweep::emit_plot_script(rows, *kind, csv, plot);
        out << "wrote " << plot.string() << '\n';
    }
    return exit_ok;
}

} // namespace detail

/// Entry point shared by the executable and the tests.
inline int run_cli(int argc, const char* const* argv, std::ostream& out, std::ostream& err) {
    CliConfig cfg;
    auto app = make_app(cfg);
    try {
        app->parse(argc, argv);
    } catch (const CLI::ParseError& e) {
        const int code = app->exit(e, out, err);
        return code == 0 ? exit_ok : exit_validation;
    }
    cfg.subcommand = app->get_subcommands().front()->get_name();
    try {
        if (cfg.subcommand == "eval") return detail::cmd_eval(cfg, out, err);
        if (cfg.subcommand == "verify") return detail::cmd_verify(cfg, out, err);
        return detail::cmd_sweep(cfg, out, err);
    } catch (const unsupported_configuration& e) {
        err << "error: unsupported configuration: " << e.what() << '\n';
        return exit_validation;
    } catch (const validation_error& e) {
        err << "error: " << e.what() << '\n';
        return exit_validation;
    } catch (const io_error& e) {
        err << "error: " << e.what() << '\n';
        return exit_validation;
    } catch (const std::filesystem::filesystem_error& e) {
        err << "error: " << e.what() << '\n';
        return exit_validation;
    } catch (const error& e) {
        // divergent moment, range, accuracy and domain failures
        err << "error: numerical failure: " << e.what() << '\n';
        return exit_numerical;
    }
}

} // namespace scevm::cli

#endif // SCEVM_CLI_HPP
