#pragma once

// Fixed-step oracle integrators over the pointwise system right-hand side.
// Limited states are projected back into bounds after every step and events
// fire at the grid point nearest to their scheduled time.

#include <string>
#include <vector>

#include "sasemt/model/system.hpp"
#include "sasemt/model/trajectory.hpp"

namespace sasemt::reference {

struct ReferenceConfig {
    double dt = 1e-6;
    double t_end = 1.0;  ///< absolute end time; integration starts at the initial state time
    int output_stride = 1;  ///< record every this many steps (t = 0 always recorded)
    std::vector<std::string> outputs = {"all"};
    double newton_tol = 1e-10;  ///< trapezoidal inner iteration
    int newton_max_iter = 20;
};

struct ReferenceResult {
    model::Trajectory trajectory;
    model::SystemState final_state;
    std::vector<std::string> event_log;
    long steps = 0;
    long rhs_evals = 0;
};

/// Classical RK4. Throws DivergenceError on a non-finite state.
[[nodiscard]] ReferenceResult rk4_run(model::SystemModel model, const model::SystemState& x0,
                                      const ReferenceConfig& cfg);

/// Implicit trapezoidal rule with simplified Newton (finite-difference
/// Jacobian, refreshed when convergence stalls). Throws DivergenceError when
/// the inner iteration fails.
[[nodiscard]] ReferenceResult trapezoidal_run(model::SystemModel model, const model::SystemState& x0,
                                              const ReferenceConfig& cfg);

}  // namespace sasemt::reference
