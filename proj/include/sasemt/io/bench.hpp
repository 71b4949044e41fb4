#pragma once

// Benchmark drivers shared by the command-line tool and the acceptance suite.

#include <string>
#include <vector>

#include "sasemt/io/case.hpp"
#include "sasemt/model/trajectory.hpp"
#include "sasemt/solver/config.hpp"

namespace sasemt::io {

struct OrderBenchRow {
    int order = 0;
    double mean_dt = 0.0;
    std::size_t steps = 0;
    long rejected = 0;
    double wall_s = 0.0;
};

/// Simulate once per order with every other setting taken from base.
[[nodiscard]] std::vector<OrderBenchRow> bench_order(const BuiltSystem& sys, const solver::SolverConfig& base,
                                                     const std::vector<int>& orders);

/// True when mean_dt never decreases along the rows.
[[nodiscard]] bool mean_dt_monotone(const std::vector<OrderBenchRow>& rows) noexcept;

struct SolverBenchOptions {
    double reference_dt = 1e-6;  ///< finest RK4 run, the error reference
    double grid = 1e-4;          ///< shared comparison grid
    double trap_dt = 1e-5;
    /// Candidate RK4 steps for the error-matched search; each must divide grid.
    std::vector<double> rk4_candidates = {2e-6, 5e-6, 1e-5, 2e-5, 2.5e-5, 5e-5, 1e-4};
};

struct SolverBenchRow {
    std::string solver;
    double step = 0.0;       ///< fixed step, or mean accepted step for sas
    double max_error = 0.0;  ///< over bus-voltage columns; infinity on divergence
    double mean_error = 0.0;
    double wall_s = 0.0;
};

struct SolverBench {
    std::vector<SolverBenchRow> rows;  ///< sas, trap, then the rk4 candidates
    double reference_wall_s = 0.0;
    double sas_mean_dt = 0.0;
    double matched_rk4_dt = 0.0;  ///< largest candidate at least as accurate as sas (0 if none)
    [[nodiscard]] double step_ratio() const noexcept {
        return matched_rk4_dt > 0.0 ? sas_mean_dt / matched_rk4_dt : 0.0;
    }
};

[[nodiscard]] SolverBench bench_solver(const BuiltSystem& sys, const solver::SolverConfig& cfg,
                                       const SolverBenchOptions& opt);

/// Max and mean absolute difference over the named columns of two
/// trajectories sampled on the same grid.
struct Difference {
    double max = 0.0;
    double mean = 0.0;
    double t_at_max = 0.0;
};
[[nodiscard]] Difference compare_trajectories(const model::Trajectory& a, const model::Trajectory& b,
                                              const std::vector<std::string>& columns);

/// Names of every bus-voltage output of a model ("v:<bus>:<phase>").
[[nodiscard]] std::vector<std::string> bus_voltage_columns(const model::SystemModel& model);

}  // namespace sasemt::io
