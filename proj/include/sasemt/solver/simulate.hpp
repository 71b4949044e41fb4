#pragma once

// Multistage driver: each accepted step re-seeds the next from its end values.

#include <string>
#include <vector>

#include "sasemt/model/system.hpp"
#include "sasemt/model/trajectory.hpp"
#include "sasemt/solver/config.hpp"
#include "sasemt/solver/series_step.hpp"
#include "sasemt/solver/switch_detect.hpp"

namespace sasemt::solver {

struct StepRecord {
    double t_start = 0.0;
    double dt = 0.0;            ///< accepted length
    double dt_nominal = 0.0;    ///< length before truncation at events, t_end or switches
    double imbalance = 0.0;     ///< E at the accepted length
    double coefficient = 0.0;   ///< C = ||A x[N] + B u[N]||
    int rejections = 0;
    bool forced_minimum = false;
    bool truncated_by_event = false;
    std::size_t sample_begin = 0;  ///< trajectory rows produced by this step
    std::size_t sample_end = 0;
    std::vector<SwitchEvent> switches;
    model::SystemState end_state;  ///< empty unless snapshots are kept
};

struct SimulationResult {
    model::Trajectory trajectory;
    std::vector<StepRecord> steps;
    std::vector<SwitchEvent> switches;
    std::vector<std::string> event_log;
    model::SystemState final_state;
    long rejected_steps = 0;

    /// Mean accepted step length.
    [[nodiscard]] double mean_dt() const noexcept;
};

/// Run the series integrator from x0 to cfg.t_end.
[[nodiscard]] SimulationResult simulate(model::SystemModel model, const model::SystemState& x0,
                                        const SolverConfig& cfg);

/// Values of the selected columns at absolute times inside the step described
/// by ws/start. Throws ParameterError for a time outside [t0, t0 + dt].
void dense_output(const model::SystemModel& model, const StepSeries& ws, const model::SystemState& start, double dt,
                  const std::vector<model::OutputColumn>& cols, const std::vector<double>& times,
                  model::Trajectory& out);

}  // namespace sasemt::solver
