#pragma once

// Pointwise (non-series) evaluation of the machine equations. Used by the
// oracle integrators, the full-residual imbalance mode and the steady-state
// residual checks. Nothing here touches the series path.

#include <array>

#include "sasemt/machine/params.hpp"
#include "sasemt/machine/variables.hpp"

namespace sasemt::machine {

/// Algebraic closure at one instant.
[[nodiscard]] AlgValues machine_algebraic_point(const MachineParams& p, const VbrCoefficients& c,
                                                const GovParams* gov, const DiffValues& x,
                                                const std::array<double, 3>& v_term);

/// Unconstrained dp1/dt and dE_fd/dt.
[[nodiscard]] double p1_rate(const GovParams& gp, const DiffValues& x) noexcept;
[[nodiscard]] double efd_rate(const ExcParams& ep, const DiffValues& x) noexcept;

/// True when a state sitting on a limit should stay frozen, i.e. the
/// unconstrained rate points outward (x >= max with rate >= 0, or x <= min
/// with rate <= 0).
[[nodiscard]] bool freeze_condition(double x, double rate, double lo, double hi) noexcept;

struct FreezeMode {
    LimiterFlags flags;        ///< flags from the series solver
    bool by_value = false;     ///< oracle rule: decide from the state value itself
};

/// Time derivatives of every differential state. `alg` receives the
/// algebraic closure when not null.
[[nodiscard]] DiffValues machine_derivatives(const MachineParams& p, const VbrCoefficients& c,
                                             const GovParams* gov, const ExcParams* exc,
                                             const DiffValues& x, const std::array<double, 3>& v_term,
                                             const FreezeMode& freeze, AlgValues* alg = nullptr);

}  // namespace sasemt::machine
