#pragma once

// Balanced steady-state initialization of one machine and its controllers.
// Phasors are peak values with x(t) = Re(X exp(j omega0 t)) for phase a.

#include <complex>

#include "sasemt/machine/params.hpp"
#include "sasemt/machine/variables.hpp"

namespace sasemt::machine {

struct MachineInit {
    DiffValues x{};
    AlgValues y{};
    double p_ref = 0.0;  ///< governor reference that holds the operating point
    double v_ref = 0.0;  ///< exciter reference that holds the operating point
};

/// Stator current phasor (out of the machine) delivering P + jQ at terminal
/// phasor V. Three-phase power is 1.5 V I* with peak phasors.
[[nodiscard]] std::complex<double> injection_phasor(double P, double Q, std::complex<double> V);

/// Terminal phasor from magnitude and angle in degrees.
[[nodiscard]] std::complex<double> terminal_phasor(double v, double angle_deg);

/// Order-0 values for a machine carrying current I at terminal voltage V.
/// Throws InitializationError when the required E_fd or valve position lies
/// outside the controller limits.
[[nodiscard]] MachineInit init_machine_steady_state(const MachineParams& p, const GovParams* gov,
                                                    const ExcParams* exc, std::complex<double> V,
                                                    std::complex<double> I);

/// Convenience overload from an operating point (P, Q, |V|, angle).
[[nodiscard]] MachineInit init_machine_steady_state(const MachineParams& p, const GovParams* gov,
                                                    const ExcParams* exc, double P, double Q, double v,
                                                    double angle_deg);

}  // namespace sasemt::machine
