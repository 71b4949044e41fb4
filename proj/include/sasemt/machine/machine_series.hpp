#pragma once

// =============================================================================
// Per-order differential-transformation recursions of the VBR machine
// =============================================================================
// Within one step the coefficients are produced in the sequence
//   machine_algebraic_order(k)        -> x3[k]
//   machine_differential_order(k)     -> x1[k+1] (rotor, theta, stator currents)
//   tgov1_order(k), sexs_order(k)     -> controller x1[k+1]
// The caller owns the terminal voltage series and must write v_term[k] before
// the algebraic pass at order k.
// =============================================================================

#include <array>
#include <span>

#include <Eigen/Dense>

#include "sasemt/machine/params.hpp"
#include "sasemt/machine/park.hpp"
#include "sasemt/machine/variables.hpp"
#include "sasemt/series/power_series.hpp"

namespace sasemt::machine {

struct MachineSeriesState {
    int order = 0;
    double t0 = 0.0;

    std::array<PowerSeries, kDiffCount> x;   ///< x1 slice
    std::array<PowerSeries, kAlgCount> y;    ///< x3 slice
    std::array<PowerSeries, 3> v_term;       ///< terminal phase voltages (network owned)
    LimiterFlags flags;

    ParkTrig park;
    InductanceSeries inductance;

    // Work series.
    PowerSeries lpp_d;         ///< lambda''_d
    PowerSeries lpp_q;         ///< lambda''_q
    PowerSeries torque;        ///< lambda_ad i_q - lambda_aq i_d
    PowerSeries vt_squared;    ///< vd^2 + vq^2
    PowerSeries zero;          ///< zero-sequence v'' (always zero)
    std::array<PowerSeries, 3> stator_flux;  ///< L''_abc i_abc
    Eigen::Matrix3d l0_inverse = Eigen::Matrix3d::Identity();

    /// When set, v_t is held at its order-0 value (degenerate magnitude fallback).
    bool vt_hold = false;

    [[nodiscard]] PowerSeries& operator[](DiffVar v) { return x[idx(v)]; }
    [[nodiscard]] const PowerSeries& operator[](DiffVar v) const { return x[idx(v)]; }
    [[nodiscard]] PowerSeries& operator[](AlgVar v) { return y[idx(v)]; }
    [[nodiscard]] const PowerSeries& operator[](AlgVar v) const { return y[idx(v)]; }
};

/// Allocate all series for the given order (reuses storage when possible).
void reset_machine_series(MachineSeriesState& st, const MachineParams& p, int order, double t0);

/// Seed order 0 from step-start values; coefficients above order 0 are set to
/// NaN so any read-before-write surfaces as a non-finite result. Factorizes
/// L''[0] and decides the magnitude fallback when allow_vt_hold is set.
void seed_machine_series(MachineSeriesState& st, const DiffValues& x0,
                         const std::array<double, 3>& v_term0, LimiterFlags flags,
                         bool allow_vt_hold = true);

/// Fill x3 at order k. Requires x1 and v_term through k, x3 through k-1.
void machine_algebraic_order(MachineSeriesState& st, const MachineParams& p, const VbrCoefficients& c,
                             const GovParams* gov, int k);

/// Fill delta, dw, rotor fluxes, theta, L''_abc and i_abc at order k+1.
void machine_differential_order(MachineSeriesState& st, const MachineParams& p, int k);

/// Governor states at order k+1 (and p_m[k+1]); requires dw through k+1.
void tgov1_order(MachineSeriesState& st, const GovParams& gp, int k);

/// Exciter states at order k+1; requires v_t through k.
void sexs_order(MachineSeriesState& st, const ExcParams& ep, int k);

/// Governor/exciter step or constant hold when a controller is absent.
void controllers_order(MachineSeriesState& st, const GovParams* gov, const ExcParams* exc, int k);

/// Evaluate every x1 series at dt.
[[nodiscard]] DiffValues eval_differential(const MachineSeriesState& st, double dt) noexcept;

}  // namespace sasemt::machine
