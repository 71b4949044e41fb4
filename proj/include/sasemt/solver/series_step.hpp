#pragma once

// =============================================================================
// One step of the series integrator
// =============================================================================
// Coefficients depend only on the step-start state, never on the step length,
// so one coefficient pass serves every trial length, the switch search and the
// dense samples of the step.
//
// Fill sequence per order k (k = 0..N-1):
//   machine terminal voltage[k] <- network x2[k]
//   machine algebraic x3[k], differential x1[k+1], controllers x1[k+1]
//   machine current input u[k] <- i_abc[k]
//   network x2[k+1] = (A x2[k] + B u[k]) / (k+1)
// then x3[N] and u[N] close the pass.
// =============================================================================

#include <vector>

#include <Eigen/Dense>

#include "sasemt/machine/machine_series.hpp"
#include "sasemt/model/system.hpp"
#include "sasemt/reference/rhs.hpp"
#include "sasemt/solver/config.hpp"

namespace sasemt::solver {

struct StepSeries {
    int order = 0;
    double t0 = 0.0;
    Eigen::MatrixXd X;  ///< network states, one column per order
    Eigen::MatrixXd U;  ///< inputs, one column per order
    std::vector<machine::MachineSeriesState> machines;
    double C = 0.0;  ///< imbalance coefficient ||A X[N] + B U[N]||_inf
};

/// Fill every coefficient through `order` from the step-start state. Throws
/// DivergenceError naming the first non-finite state and order.
void compute_series(const model::SystemModel& model, const model::SystemState& start, int order, StepSeries& ws);

/// ||A x[N] + B u[N]||_inf.
[[nodiscard]] double imbalance_coefficient(const network::LinearNetwork& net, const Eigen::MatrixXd& X,
                                           const Eigen::MatrixXd& U);

/// E = C dt^N.
[[nodiscard]] double imbalance(double C, double dt, int order) noexcept;

/// Next nominal step: min((eps/C)^(1/N), growth * dt_prev) clamped to
/// [dt_min, dt_cap]; C = 0 gives dt_cap.
[[nodiscard]] double propose_step(double C, const SolverConfig& cfg, double dt_prev) noexcept;

/// States at local time tau inside the step. Out-of-service machines keep
/// their start values.
void evaluate_state(const model::SystemModel& model, const StepSeries& ws, const model::SystemState& start,
                    double tau, model::SystemState& out);

/// Full residual at tau: max over states of |series derivative - f(series value)|.
[[nodiscard]] double full_residual(const model::SystemModel& model, const reference::RhsEvaluator& rhs,
                                   const StepSeries& ws, const model::SystemState& start, double tau);

}  // namespace sasemt::solver
