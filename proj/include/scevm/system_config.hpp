// SPDX-License-Identifier: Apache-2.0
#ifndef SCEVM_SYSTEM_CONFIG_HPP
#define SCEVM_SYSTEM_CONFIG_HPP

#include <scevm/errors.hpp>

#include <cmath>
#include <optional>
#include <string>
#include <string_view>

namespace scevm {

/// Fading of the desired channels. Channel power always has unit mean;
/// Rayleigh is the Nakagami shape-one special case.
class FadingModel {
public:
    enum class Kind { rayleigh, nakagami };

    static FadingModel rayleigh() noexcept { return FadingModel{Kind::rayleigh, 1.0}; }
    static FadingModel nakagami(double shape) {
        if (!(shape > 0.0) || !std::isfinite(shape)) {
            throw validation_error("Nakagami shape m_d must be positive and finite");
        }
        return FadingModel{Kind::nakagami, shape};
    }

    [[nodiscard]] Kind kind() const noexcept { return kind_; }
    [[nodiscard]] double shape() const noexcept { return shape_; }
    [[nodiscard]] bool is_rayleigh() const noexcept { return kind_ == Kind::rayleigh; }

    bool operator==(const FadingModel&) const = default;

private:
    FadingModel(Kind kind, double shape) noexcept : kind_(kind), shape_(shape) {}
    Kind kind_;
    double shape_;
};

enum class SelectionRule { max_sir, max_signal_power };

/// CSV-facing spelling: max_sir / max_signal.
inline std::string_view to_string(SelectionRule rule) noexcept {
    return rule == SelectionRule::max_sir ? "max_sir" : "max_signal";
}

inline std::optional<SelectionRule> parse_selection_rule(std::string_view text) noexcept {
    if (text == "max_sir" || text == "max-sir") return SelectionRule::max_sir;
    if (text == "max_signal" || text == "max-signal") return SelectionRule::max_signal_power;
    return std::nullopt;
}

struct SystemConfig {
    int antennas = 1;
    int interferers = 1;
    SelectionRule rule = SelectionRule::max_sir;
    FadingModel desired = FadingModel::rayleigh();
    /// Antenna correlation coefficient; 0 is independent, 1 is identical branches.
    double rho = 0.0;

    bool operator==(const SystemConfig&) const = default;

    /// Throws unsupported_configuration naming the first violated constraint.
    void validate() const {
        if (antennas < 1) throw unsupported_configuration("antenna count L must be at least 1");
        if (interferers < 1) throw unsupported_configuration("interferer count M must be at least 1");
        if (!(rho >= 0.0 && rho <= 1.0)) {
            throw unsupported_configuration("correlation rho must lie in [0, 1]");
        }
        if (rho > 0.0 && antennas != 2) {
            throw unsupported_configuration("correlated channels (rho > 0) require exactly L = 2 antennas");
        }
        if (rho > 0.0 && !desired.is_rayleigh()) {
            throw unsupported_configuration("correlated channels (rho > 0) require Rayleigh desired fading");
        }
    }
};

} // namespace scevm

#endif // SCEVM_SYSTEM_CONFIG_HPP
