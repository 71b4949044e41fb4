#include "sasemt/solver/simulate.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <memory>

#include "sasemt/error.hpp"
#include "sasemt/machine/pointwise.hpp"
#include "sasemt/reference/rhs.hpp"

namespace sasemt::solver {

using machine::DiffVar;
using machine::idx;
using machine::Saturation;

double SimulationResult::mean_dt() const noexcept {
    if (steps.empty()) {
        return 0.0;
    }
    double sum = 0.0;
    for (const auto& s : steps) {
        sum += s.dt;
    }
    return sum / static_cast<double>(steps.size());
}

namespace {

struct LimitRef {
    std::size_t machine;
    bool is_p1;
    DiffVar var;
    double lo;
    double hi;
    Saturation machine::LimiterFlags::*flag;
};

std::vector<LimitRef> limited_states(const model::SystemModel& model) {
    std::vector<LimitRef> out;
    for (std::size_t m = 0; m < model.machines.size(); ++m) {
        const auto& mu = model.machines[m];
        if (!mu.in_service) {
            continue;
        }
        if (mu.gov) {
            out.push_back({m, true, DiffVar::p1, mu.gov->P_min, mu.gov->P_max, &machine::LimiterFlags::p1});
        }
        if (mu.exc) {
            out.push_back({m, false, DiffVar::efd, mu.exc->E_min, mu.exc->E_max, &machine::LimiterFlags::efd});
        }
    }
    return out;
}

double unconstrained_rate(const model::SystemModel& model, const LimitRef& l, const machine::DiffValues& x) {
    const auto& mu = model.machines[l.machine];
    return l.is_p1 ? machine::p1_rate(*mu.gov, x) : machine::efd_rate(*mu.exc, x);
}

/// Step-start limiter bookkeeping: release frozen states whose unconstrained
/// rate points back inside, and freeze states sitting on (or, without switch
/// detection, beyond) a limit with an outward rate.
void update_limiters(const model::SystemModel& model, const std::vector<LimitRef>& limits,
                     model::SystemState& st) {
    for (const auto& l : limits) {
        auto& x = st.x1[l.machine];
        auto& flag = st.flags[l.machine].*l.flag;
        double& value = x[idx(l.var)];
        if (flag != Saturation::none) {
            const double rate = unconstrained_rate(model, l, x);
            if ((flag == Saturation::upper && rate < 0.0) || (flag == Saturation::lower && rate > 0.0)) {
                flag = Saturation::none;
            }
            continue;
        }
        value = std::clamp(value, l.lo, l.hi);
        const double rate = unconstrained_rate(model, l, x);
        if (machine::freeze_condition(value, rate, l.lo, l.hi)) {
            flag = value >= l.hi ? Saturation::upper : Saturation::lower;
        }
    }
}

}  // namespace

void dense_output(const model::SystemModel& model, const StepSeries& ws, const model::SystemState& start, double dt,
                  const std::vector<model::OutputColumn>& cols, const std::vector<double>& times,
                  model::Trajectory& out) {
    model::SystemState at;
    for (const double t : times) {
        const double tau = t - start.t;
        if (!(tau >= 0.0) || !(tau <= dt)) {
            throw ParameterError("dense sample time outside the step");
        }
        evaluate_state(model, ws, start, tau, at);
        model::sample_row(model, cols, t, at.x2, at.x1, out.append(t));
    }
}

SimulationResult simulate(model::SystemModel model, const model::SystemState& x0, const SolverConfig& cfg) {
    cfg.validate();
    SimulationResult res;
    auto cols = model::resolve_columns(model, cfg.outputs);
    res.trajectory = model::Trajectory(model::column_names(cols));

    const int N = cfg.order;
    model::SystemState st = x0;
    st.flags.resize(model.machines.size());
    auto limits = limited_states(model);
    auto rhs = std::make_unique<reference::RhsEvaluator>(model);

    const bool dense = cfg.dense_interval > 0.0;
    long next_sample = 0;  // dense grid index
    auto grid_time = [&](long j) { return static_cast<double>(j) * cfg.dense_interval; };
    auto record = [&](const model::SystemState& s) {
        model::sample_row(model, cols, s.t, s.x2, s.x1, res.trajectory.append(s.t));
    };
    // The initial point belongs to the trajectory in both output modes.
    record(st);
    if (dense) {
        next_sample = 1;
    }

    StepSeries ws;
    model::SystemState end;
    std::size_t next_event = 0;
    double dt_nominal = cfg.dt_init;
    const double t_tol = 1e-12 * std::max(1.0, cfg.t_end);

    while (st.t < cfg.t_end - t_tol) {
        while (next_event < model.events.size() && model.events[next_event].time <= st.t + t_tol) {
            res.event_log.push_back(model::apply_model_event(model, st, model.events[next_event]));
            ++next_event;
            limits = limited_states(model);
            rhs = std::make_unique<reference::RhsEvaluator>(model);
            dt_nominal = cfg.dt_init;
        }
        update_limiters(model, limits, st);
        compute_series(model, st, N, ws);

        double t_stop = cfg.t_end;
        bool stop_is_event = false;
        if (next_event < model.events.size() && model.events[next_event].time < t_stop) {
            t_stop = model.events[next_event].time;
            stop_is_event = true;
        }

        StepRecord rec;
        rec.t_start = st.t;
        rec.coefficient = ws.C;

        auto measure = [&](double dt) {
            return cfg.imbalance_mode == ImbalanceMode::network ? imbalance(ws.C, dt, N)
                                                                : full_residual(model, *rhs, ws, st, dt);
        };
        double dt = dt_nominal;
        double E = measure(std::min(dt, t_stop - st.t));
        while (E > cfg.eps_imbalance && dt > cfg.dt_min) {
            dt = std::max(cfg.dt_min, 0.9 * dt * std::pow(cfg.eps_imbalance / E, 1.0 / N));
            E = measure(std::min(dt, t_stop - st.t));
            ++rec.rejections;
        }
        if (E > cfg.eps_imbalance) {
            if (cfg.stiffness == StiffnessPolicy::abort) {
                throw StiffnessError("imbalance " + std::to_string(E) + " exceeds threshold at the minimum step (t=" +
                                     std::to_string(st.t) + ")");
            }
            rec.forced_minimum = true;
        }
        res.rejected_steps += rec.rejections;
        rec.dt_nominal = dt;

        bool hits_stop = false;
        double step = dt;
        if (st.t + step >= t_stop - t_tol) {
            step = t_stop - st.t;
            hits_stop = true;
        }

        // Limit crossings inside the step; the earliest wins and exact ties
        // are handled together.
        std::vector<std::pair<const LimitRef*, SwitchEvent>> found;
        if (cfg.switch_detection) {
            double earliest = std::numeric_limits<double>::infinity();
            for (const auto& l : limits) {
                if (st.flags[l.machine].*l.flag != Saturation::none) {
                    continue;
                }
                const auto& series = ws.machines[l.machine].x[idx(l.var)];
                for (const auto dir : {Saturation::upper, Saturation::lower}) {
                    const double limit = dir == Saturation::upper ? l.hi : l.lo;
                    const auto c = detect_limit_switch(series.coeffs(), limit, dir, step, cfg.eps_switch,
                                                       cfg.switch_prescan);
                    if (!c || c->t > earliest) {
                        continue;
                    }
                    if (c->t < earliest) {
                        found.clear();
                        earliest = c->t;
                    }
                    SwitchEvent ev;
                    ev.machine = static_cast<int>(l.machine);
                    ev.state = model.machines[l.machine].name + (l.is_p1 ? ".p1" : ".efd");
                    ev.direction = dir;
                    ev.t_switch = st.t + c->t;
                    ev.a = st.t + c->a;
                    ev.b = st.t + c->b;
                    ev.bisection_fallback = c->bisection_fallback;
                    found.emplace_back(&l, ev);
                }
            }
            if (!found.empty()) {
                step = earliest;
                hits_stop = false;
            }
        }

        evaluate_state(model, ws, st, step, end);
        if (hits_stop) {
            end.t = t_stop;
            rec.truncated_by_event = stop_is_event;
        }
        for (auto& [l, ev] : found) {
            end.x1[l->machine][idx(l->var)] = ev.direction == Saturation::upper ? l->hi : l->lo;
            end.flags[l->machine].*(l->flag) = ev.direction;
            rec.switches.push_back(ev);
            res.switches.push_back(ev);
        }
        rec.dt = end.t - st.t;
        rec.imbalance = cfg.imbalance_mode == ImbalanceMode::network ? imbalance(ws.C, rec.dt, N)
                                                                     : measure(rec.dt);

        rec.sample_begin = res.trajectory.rows();
        if (dense) {
            const double limit_t = end.t + 1e-9 * cfg.dense_interval;
            model::SystemState at;
            while (grid_time(next_sample) <= limit_t && grid_time(next_sample) <= cfg.t_end + t_tol) {
                const double tg = grid_time(next_sample);
                const double tau = std::clamp(tg - st.t, 0.0, rec.dt);
                evaluate_state(model, ws, st, tau, at);
                // Switch clamping applies to the end point only.
                model::sample_row(model, cols, tg, at.x2, at.x1, res.trajectory.append(tg));
                ++next_sample;
            }
        } else {
            record(end);
        }
        rec.sample_end = res.trajectory.rows();

        dt_nominal = propose_step(ws.C, cfg, dt);
        st = end;
        if (cfg.keep_snapshots) {
            rec.end_state = st;
        }
        res.steps.push_back(std::move(rec));
    }
    res.final_state = st;
    return res;
}

}  // namespace sasemt::solver
