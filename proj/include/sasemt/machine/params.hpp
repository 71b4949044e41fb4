#pragma once

// =============================================================================
// Synchronous machine and controller parameters
// =============================================================================
// Inductances are stored in the units of the state equations: a per-unit
// reactance X at the base angular frequency becomes L = X / omega0, so flux
// linkages carry units of pu-seconds and omega_r * lambda is a pu voltage.
// Resistances are per unit, H in seconds, omega0 and omega_r in rad/s.
// =============================================================================

namespace sasemt::machine {

struct MachineParams {
    double H = 3.0;          ///< inertia constant (s)
    double D = 0.0;          ///< damping (pu torque / pu speed)
    double omega0 = 376.99111843077515;  ///< nominal angular frequency (rad/s)
    int n_poles = 2;

    double Rs = 0.0;
    double r_fd = 0.0;
    double r_1d = 0.0;
    double r_1q = 0.0;
    double r_2q = 0.0;

    double L_fd = 0.0;  ///< field leakage
    double L_1d = 0.0;
    double L_1q = 0.0;
    double L_2q = 0.0;
    double L_ad = 0.0;  ///< d-axis mutual
    double L_aq = 0.0;  ///< q-axis mutual
    double L_ls = 0.0;  ///< stator leakage
    double L_0 = 0.0;   ///< zero sequence

    /// L_ad || L_fd || L_1d
    [[nodiscard]] double Lpp_ad() const noexcept;
    /// L_aq || L_1q || L_2q
    [[nodiscard]] double Lpp_aq() const noexcept;

    /// e_fd = field_voltage_scale() * E_fd, i.e. r_fd / X_ad with X_ad the
    /// per-unit mutual reactance.
    [[nodiscard]] double field_voltage_scale() const noexcept;

    /// 3 n_p / 4 factor of the electrical power expression.
    [[nodiscard]] double power_factor() const noexcept { return 0.75 * static_cast<double>(n_poles); }

    /// Throws ParameterError on non-physical values.
    void validate() const;

    bool operator==(const MachineParams&) const = default;
};

/// TGOV1 turbine-governor. Speed deviation enters in rad/s, so R_G carries
/// rad/s per pu power.
struct GovParams {
    double R_G = 0.05;
    double T1 = 0.5;
    double T2 = 1.0;
    double T3 = 3.0;
    double D_t = 0.0;
    double P_max = 1.0;
    double P_min = 0.0;
    double p_ref = 0.0;  ///< set by steady-state initialization

    void validate() const;
    bool operator==(const GovParams&) const = default;
};

/// SEXS exciter as a pair of first-order lags with output limits on E_fd.
struct ExcParams {
    double k_E = 50.0;
    double T_E = 0.05;
    double T_A = 0.0;
    double T_B = 0.02;
    double E_max = 5.0;
    double E_min = -5.0;
    double v_ref = 0.0;  ///< set by steady-state initialization

    void validate() const;
    bool operator==(const ExcParams&) const = default;
};

/// Constant coefficients of the subtransient voltage expressions
///   v''_d = c_id i_d + c_fd lambda_fd + c_1d lambda_1d - omega_r lambda''_q + c_e e_fd
///   v''_q = c_iq i_q + c_1q lambda_1q + c_2q lambda_2q + omega_r lambda''_d
/// with lambda''_d = L''_ad (lambda_fd/L_fd + lambda_1d/L_1d) and the q-axis analogue.
struct VbrCoefficients {
    double Lpp_ad = 0.0;
    double Lpp_aq = 0.0;
    double c_id = 0.0;
    double c_fd = 0.0;
    double c_1d = 0.0;
    double c_e = 0.0;
    double c_iq = 0.0;
    double c_1q = 0.0;
    double c_2q = 0.0;

    [[nodiscard]] static VbrCoefficients from(const MachineParams& p) noexcept;
};

}  // namespace sasemt::machine
