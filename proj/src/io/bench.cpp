#include "sasemt/io/bench.hpp"

#include <chrono>
#include <cmath>
#include <limits>

#include "sasemt/error.hpp"
#include "sasemt/network/linear_network.hpp"
#include "sasemt/reference/integrators.hpp"
#include "sasemt/solver/simulate.hpp"

namespace sasemt::io {

namespace {

using Clock = std::chrono::steady_clock;

double seconds_since(Clock::time_point t0) {
    return std::chrono::duration<double>(Clock::now() - t0).count();
}

int stride_for(double grid, double dt) {
    const double ratio = grid / dt;
    const long n = std::lround(ratio);
    if (n < 1 || std::abs(ratio - static_cast<double>(n)) > 1e-9 * ratio) {
        throw ParameterError("step " + std::to_string(dt) + " does not divide the comparison grid");
    }
    return static_cast<int>(n);
}

}  // namespace

std::vector<std::string> bus_voltage_columns(const model::SystemModel& model) {
    std::vector<std::string> out;
    for (const auto& bus : model.topo.buses) {
        for (int ph = 0; ph < bus.phases; ++ph) {
            out.push_back("v:" + bus.name + ":" + network::phase_name(ph));
        }
    }
    return out;
}

Difference compare_trajectories(const model::Trajectory& a, const model::Trajectory& b,
                                const std::vector<std::string>& columns) {
    if (a.rows() != b.rows()) {
        throw ParameterError("trajectories have different row counts (" + std::to_string(a.rows()) + " vs " +
                             std::to_string(b.rows()) + ")");
    }
    std::vector<std::pair<int, int>> idx;
    for (const auto& c : columns) {
        const int ia = a.column(c);
        const int ib = b.column(c);
        if (ia < 0 || ib < 0) {
            throw ParameterError("column '" + c + "' missing from a trajectory");
        }
        idx.emplace_back(ia, ib);
    }
    Difference d;
    double sum = 0.0;
    std::size_t count = 0;
    for (std::size_t r = 0; r < a.rows(); ++r) {
        if (std::abs(a.t(r) - b.t(r)) > 1e-9 * std::max(1.0, std::abs(a.t(r)))) {
            throw ParameterError("trajectories are not on the same grid");
        }
        for (const auto& [ia, ib] : idx) {
            double e = std::abs(a.at(r, static_cast<std::size_t>(ia)) - b.at(r, static_cast<std::size_t>(ib)));
            if (!std::isfinite(e)) {
                e = std::numeric_limits<double>::infinity();
            }
            if (e > d.max) {
                d.max = e;
                d.t_at_max = a.t(r);
            }
            sum += e;
            ++count;
        }
    }
    d.mean = count > 0 ? sum / static_cast<double>(count) : 0.0;
    return d;
}

std::vector<OrderBenchRow> bench_order(const BuiltSystem& sys, const solver::SolverConfig& base,
                                       const std::vector<int>& orders) {
    std::vector<OrderBenchRow> rows;
    for (const int n : orders) {
        solver::SolverConfig cfg = base;
        cfg.order = n;
        cfg.keep_snapshots = false;
        const auto t0 = Clock::now();
        const auto res = solver::simulate(sys.model, sys.initial, cfg);
        OrderBenchRow row;
        row.wall_s = seconds_since(t0);
        row.order = n;
        row.mean_dt = res.mean_dt();
        row.steps = res.steps.size();
        row.rejected = res.rejected_steps;
        rows.push_back(row);
    }
    return rows;
}

bool mean_dt_monotone(const std::vector<OrderBenchRow>& rows) noexcept {
    for (std::size_t i = 1; i < rows.size(); ++i) {
        if (rows[i].mean_dt < rows[i - 1].mean_dt) {
            return false;
        }
    }
    return true;
}

SolverBench bench_solver(const BuiltSystem& sys, const solver::SolverConfig& cfg, const SolverBenchOptions& opt) {
    const auto cols = bus_voltage_columns(sys.model);
    SolverBench out;

    auto reference_run = [&](double dt, bool trap) {
        reference::ReferenceConfig rc;
        rc.dt = dt;
        rc.t_end = cfg.t_end;
        rc.output_stride = stride_for(opt.grid, dt);
        rc.outputs = cols;
        return trap ? reference::trapezoidal_run(sys.model, sys.initial, rc)
                    : reference::rk4_run(sys.model, sys.initial, rc);
    };

    auto t0 = Clock::now();
    const auto ref = reference_run(opt.reference_dt, false);
    out.reference_wall_s = seconds_since(t0);

    auto measured = [&](const std::string& name, double step, auto&& run) {
        SolverBenchRow row;
        row.solver = name;
        row.step = step;
        const auto start = Clock::now();
        try {
            const model::Trajectory traj = run();
            row.wall_s = seconds_since(start);
            const auto d = compare_trajectories(traj, ref.trajectory, cols);
            row.max_error = d.max;
            row.mean_error = d.mean;
        } catch (const DivergenceError&) {
            row.wall_s = seconds_since(start);
            row.max_error = row.mean_error = std::numeric_limits<double>::infinity();
        }
        return row;
    };

    solver::SolverConfig sas_cfg = cfg;
    sas_cfg.dense_interval = opt.grid;
    sas_cfg.outputs = cols;
    sas_cfg.keep_snapshots = false;
    double sas_mean = 0.0;
    auto sas_row = measured("sas", 0.0, [&] {
        auto r = solver::simulate(sys.model, sys.initial, sas_cfg);
        sas_mean = r.mean_dt();
        return r.trajectory;
    });
    sas_row.step = sas_mean;
    out.sas_mean_dt = sas_mean;
    out.rows.push_back(sas_row);

    out.rows.push_back(measured("trap", opt.trap_dt, [&] { return reference_run(opt.trap_dt, true).trajectory; }));

    for (const double dt : opt.rk4_candidates) {
        auto row = measured("rk4", dt, [&] { return reference_run(dt, false).trajectory; });
        if (row.max_error <= sas_row.max_error && dt > out.matched_rk4_dt) {
            out.matched_rk4_dt = dt;
        }
        out.rows.push_back(row);
    }
    return out;
}

}  // namespace sasemt::io
