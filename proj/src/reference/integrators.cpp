#include "sasemt/reference/integrators.hpp"

#include <algorithm>
#include <cmath>
#include <memory>

#include "sasemt/error.hpp"
#include "sasemt/reference/rhs.hpp"

namespace sasemt::reference {

namespace {

void require_finite(const Eigen::VectorXd& y, double t) {
    for (Eigen::Index i = 0; i < y.size(); ++i) {
        if (!std::isfinite(y[i])) {
            throw DivergenceError("non-finite state at t=" + std::to_string(t), "y[" + std::to_string(i) + "]", 0);
        }
    }
}

class Rk4Stepper {
public:
    void reset(const RhsEvaluator&) {}

    void step(const RhsEvaluator& f, double t, double dt, Eigen::VectorXd& y, long& evals) {
        f.eval(t, y, k1_);
        tmp_ = y + 0.5 * dt * k1_;
        f.eval(t + 0.5 * dt, tmp_, k2_);
        tmp_ = y + 0.5 * dt * k2_;
        f.eval(t + 0.5 * dt, tmp_, k3_);
        tmp_ = y + dt * k3_;
        f.eval(t + dt, tmp_, k4_);
        y += dt / 6.0 * (k1_ + 2.0 * k2_ + 2.0 * k3_ + k4_);
        evals += 4;
    }

private:
    Eigen::VectorXd k1_, k2_, k3_, k4_, tmp_;
};

class TrapezoidalStepper {
public:
    TrapezoidalStepper(double tol, int max_iter) : tol_(tol), max_iter_(max_iter) {}

    void reset(const RhsEvaluator&) { have_lu_ = false; }

    void step(const RhsEvaluator& f, double t, double dt, Eigen::VectorXd& y, long& evals) {
        f.eval(t, y, f0_);
        ++evals;
        for (int attempt = 0; attempt < 2; ++attempt) {
            if (!have_lu_ || attempt > 0 || lu_dt_ != dt) {
                refresh(f, t, dt, y, evals);
            }
            z_ = y + dt * f0_;
            bool converged = false;
            for (int it = 0; it < max_iter_; ++it) {
                f.eval(t + dt, z_, f1_);
                ++evals;
                g_ = z_ - y - 0.5 * dt * (f0_ + f1_);
                delta_ = lu_.solve(g_);
                z_ -= delta_;
                double worst = 0.0;
                for (Eigen::Index i = 0; i < z_.size(); ++i) {
                    worst = std::max(worst, std::abs(delta_[i]) / (1.0 + std::abs(z_[i])));
                }
                if (worst <= tol_) {
                    converged = true;
                    break;
                }
            }
            if (converged) {
                y = z_;
                return;
            }
        }
        throw DivergenceError("trapezoidal inner iteration did not converge at t=" + std::to_string(t), "newton",
                              0);
    }

private:
    void refresh(const RhsEvaluator& f, double t, double dt, const Eigen::VectorXd& y, long& evals) {
        const int n = static_cast<int>(y.size());
        Eigen::MatrixXd J(n, n);
        Eigen::VectorXd base;
        f.eval(t + dt, y, base);
        Eigen::VectorXd yp = y;
        Eigen::VectorXd fp;
        for (int j = 0; j < n; ++j) {
            const double h = 1e-7 * std::max(1.0, std::abs(y[j]));
            yp[j] = y[j] + h;
            f.eval(t + dt, yp, fp);
            J.col(j) = (fp - base) / h;
            yp[j] = y[j];
        }
        evals += n + 1;
        Eigen::MatrixXd M = Eigen::MatrixXd::Identity(n, n) - 0.5 * dt * J;
        lu_.compute(M);
        lu_dt_ = dt;
        have_lu_ = true;
    }

    double tol_;
    int max_iter_;
    bool have_lu_ = false;
    double lu_dt_ = 0.0;
    Eigen::PartialPivLU<Eigen::MatrixXd> lu_;
    Eigen::VectorXd f0_, f1_, z_, g_, delta_;
};

template <class Stepper>
ReferenceResult run_fixed(model::SystemModel model, const model::SystemState& x0, const ReferenceConfig& cfg,
                          Stepper stepper) {
    if (!(cfg.dt > 0.0) || !(cfg.t_end >= 0.0) || cfg.output_stride < 1) {
        throw ParameterError("reference integrator needs dt > 0, t_end >= 0 and output_stride >= 1");
    }
    ReferenceResult res;
    const auto cols = model::resolve_columns(model, cfg.outputs);
    res.trajectory = model::Trajectory(model::column_names(cols));
    // Integration starts at the time carried by the initial state.
    const double t0 = x0.t;
    const long n_steps = std::max(0L, std::lround((cfg.t_end - t0) / cfg.dt));
    res.trajectory.reserve(static_cast<std::size_t>(n_steps / cfg.output_stride + 2));

    auto evaluator = std::make_unique<RhsEvaluator>(model);
    model::SystemState st = x0;
    Eigen::VectorXd y;
    evaluator->pack(st, y);
    stepper.reset(*evaluator);

    auto record = [&](double t) {
        evaluator->unpack(y, st);
        model::sample_row(model, cols, t, st.x2, st.x1, res.trajectory.append(t));
    };
    record(t0);

    std::size_t next_event = 0;
    for (long i = 0; i < n_steps; ++i) {
        const double t = t0 + static_cast<double>(i) * cfg.dt;
        while (next_event < model.events.size() && std::lround((model.events[next_event].time - t0) / cfg.dt) <= i) {
            evaluator->unpack(y, st);
            st.t = t;
            res.event_log.push_back(model::apply_model_event(model, st, model.events[next_event]));
            ++next_event;
            evaluator = std::make_unique<RhsEvaluator>(model);
            evaluator->pack(st, y);
            stepper.reset(*evaluator);
        }
        stepper.step(*evaluator, t, cfg.dt, y, res.rhs_evals);
        evaluator->clamp(y);
        require_finite(y, t + cfg.dt);
        if ((i + 1) % cfg.output_stride == 0) {
            record(t0 + static_cast<double>(i + 1) * cfg.dt);
        }
    }
    res.steps = n_steps;
    evaluator->unpack(y, st);
    st.t = t0 + static_cast<double>(n_steps) * cfg.dt;
    res.final_state = st;
    return res;
}

}  // namespace

ReferenceResult rk4_run(model::SystemModel model, const model::SystemState& x0, const ReferenceConfig& cfg) {
    return run_fixed(std::move(model), x0, cfg, Rk4Stepper{});
}

ReferenceResult trapezoidal_run(model::SystemModel model, const model::SystemState& x0, const ReferenceConfig& cfg) {
    return run_fixed(std::move(model), x0, cfg, TrapezoidalStepper(cfg.newton_tol, cfg.newton_max_iter));
}

}  // namespace sasemt::reference
