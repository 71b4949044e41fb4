#include "sasemt/solver/series_step.hpp"

#include <algorithm>
#include <cmath>
#include <string>

#include "sasemt/error.hpp"

namespace sasemt::solver {

using machine::AlgVar;
using machine::DiffVar;
using machine::idx;

namespace {

void check_network_column(const model::SystemModel& model, const Eigen::MatrixXd& X, int k) {
    for (Eigen::Index i = 0; i < X.rows(); ++i) {
        if (!std::isfinite(X(i, k))) {
            throw DivergenceError("non-finite series coefficient", model.net.state_names[static_cast<std::size_t>(i)],
                                  k);
        }
    }
}

void check_machine_order(const model::MachineUnit& mu, const machine::MachineSeriesState& ms, int k_diff,
                         int k_alg) {
    for (std::size_t v = 0; v < machine::kDiffCount; ++v) {
        if (!std::isfinite(ms.x[v][static_cast<std::size_t>(k_diff)])) {
            throw DivergenceError("non-finite series coefficient",
                                  mu.name + "." + std::string(machine::name(static_cast<DiffVar>(v))), k_diff);
        }
    }
    for (std::size_t v = 0; v < machine::kAlgCount; ++v) {
        if (!std::isfinite(ms.y[v][static_cast<std::size_t>(k_alg)])) {
            throw DivergenceError("non-finite series coefficient",
                                  mu.name + "." + std::string(machine::name(static_cast<AlgVar>(v))), k_alg);
        }
    }
}

}  // namespace

void SolverConfig::validate() const {
    if (order < 2 || order > series::kMaxOrder) {
        throw ParameterError("order must lie in [2, " + std::to_string(series::kMaxOrder) + "]");
    }
    if (!(eps_imbalance > 0.0)) {
        throw ParameterError("imbalance threshold must be positive");
    }
    if (!(dt_min > 0.0) || !(dt_min <= dt_init) || !(dt_init <= dt_cap)) {
        throw ParameterError("step sizes must satisfy 0 < dt_min <= dt_init <= dt_cap");
    }
    if (!(growth >= 1.0)) {
        throw ParameterError("step growth limit must be at least 1");
    }
    if (!(eps_switch > 0.0)) {
        throw ParameterError("switch bracket width must be positive");
    }
    if (!(dense_interval >= 0.0)) {
        throw ParameterError("dense output interval must be non-negative");
    }
    if (!(t_end >= 0.0)) {
        throw ParameterError("end time must be non-negative");
    }
    if (switch_prescan < 1) {
        throw ParameterError("switch pre-scan count must be at least 1");
    }
}

void compute_series(const model::SystemModel& model, const model::SystemState& start, int order, StepSeries& ws) {
    if (order < 1 || order > series::kMaxOrder) {
        throw ParameterError("series order out of range");
    }
    const auto& net = model.net;
    const int N = order;
    ws.order = N;
    ws.t0 = start.t;
    ws.X.resize(net.n_states(), N + 1);
    ws.U.setZero(net.n_inputs(), N + 1);
    ws.X.col(0) = start.x2;
    network::fill_source_inputs(net, model.topo, start.t, ws.U);

    const std::size_t nm = model.machines.size();
    ws.machines.resize(nm);
    for (std::size_t m = 0; m < nm; ++m) {
        const auto& mu = model.machines[m];
        if (!mu.in_service) {
            continue;
        }
        auto& ms = ws.machines[m];
        machine::reset_machine_series(ms, mu.params, N, start.t);
        machine::seed_machine_series(ms, start.x1[m], model::terminal_voltages(model, m, start.x2), start.flags[m]);
        const auto& cols = net.machine_inputs[m];
        for (std::size_t ph = 0; ph < 3; ++ph) {
            ws.U(cols[ph], 0) = start.x1[m][idx(DiffVar::ia) + ph];
        }
    }

    for (int k = 0; k < N; ++k) {
        const auto kk = static_cast<std::size_t>(k);
        for (std::size_t m = 0; m < nm; ++m) {
            const auto& mu = model.machines[m];
            if (!mu.in_service) {
                continue;
            }
            auto& ms = ws.machines[m];
            const auto& vstates = net.machine_voltage_states[m];
            if (k > 0) {
                for (std::size_t ph = 0; ph < 3; ++ph) {
                    ms.v_term[ph][kk] = ws.X(vstates[ph], k);
                }
            }
            machine::machine_algebraic_order(ms, mu.params, mu.coeffs, mu.gov_ptr(), k);
            machine::machine_differential_order(ms, mu.params, k);
            machine::controllers_order(ms, mu.gov_ptr(), mu.exc_ptr(), k);
            check_machine_order(mu, ms, k + 1, k);
            const auto& cols = net.machine_inputs[m];
            for (std::size_t ph = 0; ph < 3; ++ph) {
                ws.U(cols[ph], k + 1) = ms.x[idx(DiffVar::ia) + ph][kk + 1];
            }
        }
        network::network_order_step(net, ws.X, ws.U, k);
        check_network_column(model, ws.X, k + 1);
    }

    for (std::size_t m = 0; m < nm; ++m) {
        const auto& mu = model.machines[m];
        if (!mu.in_service) {
            continue;
        }
        auto& ms = ws.machines[m];
        const auto& vstates = net.machine_voltage_states[m];
        for (std::size_t ph = 0; ph < 3; ++ph) {
            ms.v_term[ph][static_cast<std::size_t>(N)] = ws.X(vstates[ph], N);
        }
        machine::machine_algebraic_order(ms, mu.params, mu.coeffs, mu.gov_ptr(), N);
        check_machine_order(mu, ms, N, N);
    }
    ws.C = imbalance_coefficient(net, ws.X, ws.U);
}

double imbalance_coefficient(const network::LinearNetwork& net, const Eigen::MatrixXd& X, const Eigen::MatrixXd& U) {
    if (net.n_states() == 0) {
        return 0.0;
    }
    const Eigen::Index N = X.cols() - 1;
    Eigen::VectorXd r = net.A * X.col(N);
    if (net.n_inputs() > 0) {
        r.noalias() += net.B * U.col(N);
    }
    return r.lpNorm<Eigen::Infinity>();
}

double imbalance(double C, double dt, int order) noexcept { return C * std::pow(dt, order); }

double propose_step(double C, const SolverConfig& cfg, double dt_prev) noexcept {
    const double dt_max = C > 0.0 ? std::pow(cfg.eps_imbalance / C, 1.0 / cfg.order) : cfg.dt_cap;
    return std::clamp(std::min(dt_max, cfg.growth * dt_prev), cfg.dt_min, cfg.dt_cap);
}

void evaluate_state(const model::SystemModel& model, const StepSeries& ws, const model::SystemState& start,
                    double tau, model::SystemState& out) {
    out.t = start.t + tau;
    out.flags = start.flags;
    const Eigen::Index N = ws.X.cols() - 1;
    if (ws.X.rows() > 0) {
        Eigen::VectorXd acc = ws.X.col(N);
        for (Eigen::Index k = N - 1; k >= 0; --k) {
            acc = acc * tau + ws.X.col(k);
        }
        out.x2 = std::move(acc);
    } else {
        out.x2.resize(0);
    }
    out.x1 = start.x1;
    for (std::size_t m = 0; m < model.machines.size(); ++m) {
        if (model.machines[m].in_service) {
            out.x1[m] = machine::eval_differential(ws.machines[m], tau);
        }
    }
}

double full_residual(const model::SystemModel& model, const reference::RhsEvaluator& rhs, const StepSeries& ws,
                     const model::SystemState& start, double tau) {
    model::SystemState at;
    evaluate_state(model, ws, start, tau, at);
    Eigen::VectorXd y;
    rhs.pack(at, y);
    Eigen::VectorXd f;
    rhs.eval(at.t, y, f, &start.flags);

    Eigen::VectorXd dy = Eigen::VectorXd::Zero(y.size());
    const Eigen::Index N = ws.X.cols() - 1;
    if (ws.X.rows() > 0) {
        Eigen::VectorXd acc = static_cast<double>(N) * ws.X.col(N);
        for (Eigen::Index k = N - 1; k >= 1; --k) {
            acc = acc * tau + static_cast<double>(k) * ws.X.col(k);
        }
        dy.head(ws.X.rows()) = acc;
    }
    for (std::size_t m = 0; m < model.machines.size(); ++m) {
        if (!model.machines[m].in_service) {
            continue;
        }
        const int base = rhs.machine_offset(m);
        for (std::size_t v = 0; v < machine::kDiffCount; ++v) {
            dy[base + static_cast<int>(v)] = ws.machines[m].x[v].derivative_eval(tau);
        }
    }
    return (dy - f).lpNorm<Eigen::Infinity>();
}

}  // namespace sasemt::solver
