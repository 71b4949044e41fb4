#pragma once

// Location of the first limit crossing of a limited state inside a step.

#include <optional>
#include <span>
#include <string>

#include "sasemt/machine/variables.hpp"

namespace sasemt::solver {

struct SwitchEvent {
    int machine = -1;
    std::string state;  ///< "<machine>.p1" or "<machine>.efd"
    machine::Saturation direction = machine::Saturation::upper;
    double t_switch = 0.0;  ///< absolute time
    double a = 0.0;         ///< bracket, absolute time
    double b = 0.0;
    bool bisection_fallback = false;

    bool operator==(const SwitchEvent&) const = default;
};

struct Crossing {
    double t = 0.0;  ///< local time
    double a = 0.0;
    double b = 0.0;
    bool bisection_fallback = false;
};

/// First local time in (0, dt] at which the series reaches `limit` from the
/// inside. A uniform pre-scan of `prescan` intervals brackets the earliest
/// crossing, bisection shrinks the bracket below eps_switch, and a quadratic
/// through the bracket ends and midpoint gives the root.
[[nodiscard]] std::optional<Crossing> detect_limit_switch(std::span<const double> coeffs, double limit,
                                                          machine::Saturation direction, double dt,
                                                          double eps_switch, int prescan = 16);

}  // namespace sasemt::solver
