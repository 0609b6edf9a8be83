// SPDX-License-Identifier: Apache-2.0
#ifndef SCEVM_CHANNEL_SIM_HPP
#define SCEVM_CHANNEL_SIM_HPP

// Monte Carlo estimation of selection-combining EVM from first principles:
// draw channel powers (or complex gains and symbols), apply the selection
// rule, average sqrt(interference / desired) at the selected antenna.

#include <scevm/errors.hpp>
#include <scevm/rng.hpp>
#include <scevm/system_config.hpp>

#include <algorithm>
#include <array>
#include <atomic>
#include <cmath>
#include <complex>
#include <cstddef>
#include <cstdint>
#include <numbers>
#include <span>
#include <string>
#include <thread>
#include <vector>

namespace scevm::sim {

using rng::Rng;
using rng::RngSeed;
using cplx = std::complex<double>;

struct EvmEstimate {
    double mean = 0.0;
    double std_error = 0.0;
    std::size_t samples = 0;
    /// Draws discarded because the selected desired power underflowed to zero.
    std::size_t rejected = 0;
};

/// How the correlation parameter rho maps onto the complex cross-correlation r
/// of the generated pair h2 = r h1 + sqrt(1 - r^2) w.
enum class CorrelationMapping {
    gain,        ///< r = rho (power correlation rho^2)
    sqrt_of_rho, ///< r = sqrt(rho) (power correlation rho)
};

enum class InterfererCorrelation { same_as_desired, independent };

struct SimOptions {
    CorrelationMapping mapping = CorrelationMapping::gain;
    InterfererCorrelation interferer_correlation = InterfererCorrelation::same_as_desired;
    /// Route rho = 0 through the correlated-pair generator (testing aid).
    bool force_correlated_path = false;
    /// 0 selects std::thread::hardware_concurrency().
    unsigned threads = 0;
};

inline double correlation_gain(double rho, CorrelationMapping mapping) noexcept {
    return mapping == CorrelationMapping::gain ? rho : std::sqrt(rho);
}

/// Channel powers for one block: |h_{l,0}|^2 and |h_{l,j}|^2.
struct ChannelDraw {
    int antennas = 0;
    int interferers = 0;
    std::vector<double> desired_powers;    // L
    std::vector<double> interferer_powers; // L x M, row-major by antenna

    [[nodiscard]] std::span<const double> interference_at(int antenna) const noexcept {
        return {interferer_powers.data() + static_cast<std::size_t>(antenna) * interferers,
                static_cast<std::size_t>(interferers)};
    }
    [[nodiscard]] double total_interference(int antenna) const noexcept {
        double total = 0.0;
        for (double p : interference_at(antenna)) total += p;
        return total;
    }
};

/// Complex gains for one block; powers follow by |.|^2.
struct ChannelGains {
    int antennas = 0;
    int interferers = 0;
    std::vector<cplx> desired;    // L
    std::vector<cplx> interferer; // L x M, row-major by antenna

    [[nodiscard]] cplx interferer_at(int antenna, int j) const noexcept {
        return interferer[static_cast<std::size_t>(antenna) * interferers + j];
    }
};

namespace detail {

inline void resize(ChannelDraw& draw, const SystemConfig& cfg) {
    draw.antennas = cfg.antennas;
    draw.interferers = cfg.interferers;
    draw.desired_powers.resize(static_cast<std::size_t>(cfg.antennas));
    draw.interferer_powers.resize(static_cast<std::size_t>(cfg.antennas) * cfg.interferers);
}

inline bool uses_correlated_path(const SystemConfig& cfg, const SimOptions& opts) noexcept {
    return cfg.rho > 0.0 || (opts.force_correlated_path && cfg.antennas == 2);
}

inline void correlated_pair(Rng& rng, double r, cplx& first, cplx& second) noexcept {
    first = rng.complex_normal();
    const cplx w = rng.complex_normal();
    second = r * first + std::sqrt(std::max(0.0, 1.0 - r * r)) * w;
}

// Nakagami-m gain: Gamma(m)/m power with uniform phase.
inline cplx nakagami_gain(Rng& rng, double shape) noexcept {
    const double power = rng.gamma(shape) / shape;
    const double phase = 2.0 * std::numbers::pi * rng.uniform();
    return std::polar(std::sqrt(power), phase);
}

} // namespace detail

/// Complex channel gains for cfg. Correlated configurations (L = 2) build the
/// antenna pair from a shared complex Gaussian.
inline void draw_channel_gains(const SystemConfig& cfg, Rng& rng, const SimOptions& opts, ChannelGains& out) {
    out.antennas = cfg.antennas;
    out.interferers = cfg.interferers;
    out.desired.resize(static_cast<std::size_t>(cfg.antennas));
    out.interferer.resize(static_cast<std::size_t>(cfg.antennas) * cfg.interferers);
    const int L = cfg.antennas;
    const int M = cfg.interferers;
    if (detail::uses_correlated_path(cfg, opts)) {
        const double r = correlation_gain(cfg.rho, opts.mapping);
        detail::correlated_pair(rng, r, out.desired[0], out.desired[1]);
        for (int j = 0; j < M; ++j) {
            if (opts.interferer_correlation == InterfererCorrelation::same_as_desired) {
                detail::correlated_pair(rng, r, out.interferer[j], out.interferer[M + j]);
            } else {
                out.interferer[j] = rng.complex_normal();
                out.interferer[M + j] = rng.complex_normal();
            }
        }
        return;
    }
    for (int l = 0; l < L; ++l) {
        out.desired[l] = cfg.desired.is_rayleigh() ? rng.complex_normal()
                                                   : detail::nakagami_gain(rng, cfg.desired.shape());
        for (int j = 0; j < M; ++j) {
            out.interferer[static_cast<std::size_t>(l) * M + j] = rng.complex_normal();
        }
    }
}

/// Channel powers for cfg. I.i.d. Rayleigh powers are drawn directly as
/// unit-mean exponentials, Nakagami powers as Gamma(m_d)/m_d.
inline void draw_channels(const SystemConfig& cfg, Rng& rng, const SimOptions& opts, ChannelDraw& out) {
    detail::resize(out, cfg);
    if (detail::uses_correlated_path(cfg, opts)) {
        thread_local ChannelGains gains;
        draw_channel_gains(cfg, rng, opts, gains);
        for (std::size_t i = 0; i < gains.desired.size(); ++i) out.desired_powers[i] = std::norm(gains.desired[i]);
        for (std::size_t i = 0; i < gains.interferer.size(); ++i) {
            out.interferer_powers[i] = std::norm(gains.interferer[i]);
        }
        return;
    }
    const double shape = cfg.desired.shape();
    const bool rayleigh = cfg.desired.is_rayleigh();
    for (auto& p : out.desired_powers) p = rayleigh ? rng.exponential() : rng.gamma(shape) / shape;
    for (auto& p : out.interferer_powers) p = rng.exponential();
}

inline ChannelDraw draw_channels(const SystemConfig& cfg, Rng& rng, const SimOptions& opts = {}) {
    ChannelDraw draw;
    draw_channels(cfg, rng, opts, draw);
    return draw;
}

/// Antenna chosen by the rule; ties go to the lowest index.
inline int select_antenna(SelectionRule rule, const ChannelDraw& draw) noexcept {
    int best = 0;
    if (rule == SelectionRule::max_signal_power) {
        for (int l = 1; l < draw.antennas; ++l) {
            if (draw.desired_powers[l] > draw.desired_powers[best]) best = l;
        }
        return best;
    }
    // compare X_l / I_l without dividing: X_l I_best > X_best I_l
    double best_x = draw.desired_powers[0];
    double best_i = draw.total_interference(0);
    for (int l = 1; l < draw.antennas; ++l) {
        const double x = draw.desired_powers[l];
        const double i = draw.total_interference(l);
        if (x * best_i > best_x * i) {
            best = l;
            best_x = x;
            best_i = i;
        }
    }
    return best;
}

namespace detail {

/// Welford accumulator with Chan's pairwise merge.
struct Moments {
    std::size_t count = 0;
    double mean = 0.0;
    double m2 = 0.0;
    std::size_t rejected = 0;

    void add(double v) noexcept {
        ++count;
        const double delta = v - mean;
        mean += delta / static_cast<double>(count);
        m2 += delta * (v - mean);
    }
    void merge(const Moments& other) noexcept {
        if (other.count == 0) return;
        if (count == 0) {
            *this = other;
            return;
        }
        const double n_a = static_cast<double>(count);
        const double n_b = static_cast<double>(other.count);
        const double n = n_a + n_b;
        const double delta = other.mean - mean;
        mean += delta * n_b / n;
        m2 += other.m2 + delta * delta * n_a * n_b / n;
        count += other.count;
        rejected += other.rejected;
    }
    [[nodiscard]] EvmEstimate estimate() const noexcept {
        EvmEstimate e;
        e.mean = mean;
        e.samples = count;
        e.rejected = rejected;
        e.std_error = count > 1 ? std::sqrt(m2 / static_cast<double>(count - 1) / static_cast<double>(count)) : 0.0;
        return e;
    }
};

inline constexpr std::size_t shard_samples = 1u << 16;

/// Runs shards [0, shard_count) on a worker pool. Each shard owns RNG stream
/// (seed, index) and its own accumulator; merging happens in shard order, so
/// the result does not depend on the thread count.
template <class ShardFn>
Moments run_shards(std::size_t shard_count, unsigned threads, ShardFn&& shard_fn) {
    std::vector<Moments> parts(shard_count);
    unsigned workers = threads == 0 ? std::max(1u, std::thread::hardware_concurrency()) : threads;
    workers = static_cast<unsigned>(std::min<std::size_t>(workers, shard_count));
    std::atomic<std::size_t> next{0};
    auto work = [&] {
        for (std::size_t s = next.fetch_add(1); s < shard_count; s = next.fetch_add(1)) {
            parts[s] = shard_fn(s);
        }
    };
    if (workers <= 1) {
        work();
    } else {
        std::vector<std::jthread> pool;
        pool.reserve(workers);
        for (unsigned w = 0; w < workers; ++w) pool.emplace_back(work);
    }
    Moments total;
    for (const auto& p : parts) total.merge(p);
    return total;
}

inline void check_sample_count(std::size_t samples, std::size_t minimum, const char* who) {
    if (samples < minimum) {
        throw validation_error(std::string(who) + ": at least " + std::to_string(minimum) + " samples required");
    }
}

} // namespace detail

/// Monte Carlo EVM: mean of sqrt(sum_j |h_j'|^2 / |h_0'|^2) over independent draws.
inline EvmEstimate estimate_evm(const SystemConfig& cfg, std::size_t samples, RngSeed seed,
                                const SimOptions& opts = {}) {
    cfg.validate();
    detail::check_sample_count(samples, 1000, "estimate_evm");
    const std::size_t shards = (samples + detail::shard_samples - 1) / detail::shard_samples;
    const auto moments = detail::run_shards(shards, opts.threads, [&](std::size_t shard) {
        Rng rng(seed, shard);
        ChannelDraw draw;
        detail::Moments m;
        const std::size_t begin = shard * detail::shard_samples;
        const std::size_t count = std::min(detail::shard_samples, samples - begin);
        while (m.count < count) {
            draw_channels(cfg, rng, opts, draw);
            const int sel = select_antenna(cfg.rule, draw);
            const double desired = draw.desired_powers[sel];
            if (desired == 0.0) {
                ++m.rejected;
                continue;
            }
            m.add(std::sqrt(draw.total_interference(sel) / desired));
        }
        return m;
    });
    return moments.estimate();
}

enum class Constellation { qpsk, qam16 };

namespace detail {

inline cplx draw_symbol(Rng& rng, Constellation c) noexcept {
    const std::uint64_t bits = rng.next();
    if (c == Constellation::qpsk) {
        constexpr double a = 0.70710678118654752440;
        return {(bits & 1u) ? a : -a, (bits & 2u) ? a : -a};
    }
    // levels {-3,-1,1,3}/sqrt(10): unit average energy
    constexpr std::array<double, 4> levels = {-0.94868329805051379960, -0.31622776601683793320,
                                              0.31622776601683793320, 0.94868329805051379960};
    return {levels[bits & 3u], levels[(bits >> 2) & 3u]};
}

} // namespace detail

struct SymbolSimOptions {
    SimOptions channel;
    /// Zero every interfering gain; the EVM must then vanish.
    bool mute_interference = false;
};

/// Symbol-level EVM: per block, forms y'(i) = h0' D0(i) + sum_j hj' Ij(i) on the
/// selected antenna, equalizes by h0' and records sqrt(mean_i |y'(i)/h0' - D0(i)|^2).
inline EvmEstimate estimate_evm_symbol_level(const SystemConfig& cfg, std::size_t slots_per_block,
                                             Constellation constellation, std::size_t blocks, RngSeed seed,
                                             const SymbolSimOptions& opts = {}) {
    cfg.validate();
    if (slots_per_block < 1) throw validation_error("estimate_evm_symbol_level: N must be at least 1");
    detail::check_sample_count(blocks, 2, "estimate_evm_symbol_level");
    const std::size_t blocks_per_shard = std::max<std::size_t>(1, detail::shard_samples / slots_per_block);
    const std::size_t shards = (blocks + blocks_per_shard - 1) / blocks_per_shard;
    const auto moments = detail::run_shards(shards, opts.channel.threads, [&](std::size_t shard) {
        Rng rng(seed, shard);
        ChannelGains gains;
        ChannelDraw powers;
        detail::resize(powers, cfg);
        std::vector<cplx> interferer_gain(static_cast<std::size_t>(cfg.interferers));
        detail::Moments m;
        const std::size_t begin = shard * blocks_per_shard;
        const std::size_t count = std::min(blocks_per_shard, blocks - begin);
        while (m.count < count) {
            draw_channel_gains(cfg, rng, opts.channel, gains);
            if (opts.mute_interference) std::fill(gains.interferer.begin(), gains.interferer.end(), cplx{});
            for (std::size_t i = 0; i < gains.desired.size(); ++i) powers.desired_powers[i] = std::norm(gains.desired[i]);
            for (std::size_t i = 0; i < gains.interferer.size(); ++i) {
                powers.interferer_powers[i] = std::norm(gains.interferer[i]);
            }
            const int sel = select_antenna(cfg.rule, powers);
            const cplx h0 = gains.desired[sel];
            if (h0 == cplx{}) {
                ++m.rejected;
                continue;
            }
            for (int j = 0; j < cfg.interferers; ++j) interferer_gain[j] = gains.interferer_at(sel, j);
            double error_energy = 0.0;
            for (std::size_t i = 0; i < slots_per_block; ++i) {
                const cplx d0 = detail::draw_symbol(rng, constellation);
                cplx y = h0 * d0;
                for (const cplx& hj : interferer_gain) y += hj * detail::draw_symbol(rng, constellation);
                // y'/h0' - D0 evaluated as (y' - h0' D0) / h0'
                error_energy += std::norm((y - h0 * d0) / h0);
            }
            m.add(std::sqrt(error_energy / static_cast<double>(slots_per_block)));
        }
        return m;
    });
    return moments.estimate();
}

} // namespace scevm::sim

#endif // SCEVM_CHANNEL_SIM_HPP
