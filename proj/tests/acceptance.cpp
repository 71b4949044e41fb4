// Acceptance harness: prints one PASS/FAIL line per criterion and INFO lines
// for figures that are reported but not gated. Exit status is the number of
// failed criteria (capped at 1).

#include <algorithm>
#include <chrono>
#include <cmath>
#include <cstdio>
#include <functional>
#include <limits>
#include <numbers>
#include <random>
#include <sstream>
#include <string>
#include <vector>

#include "sasemt/error.hpp"
#include "sasemt/io/bench.hpp"
#include "sasemt/io/case.hpp"
#include "sasemt/io/timeseries.hpp"
#include "sasemt/machine/park.hpp"
#include "sasemt/network/linear_network.hpp"
#include "sasemt/reference/integrators.hpp"
#include "sasemt/reference/rhs.hpp"
#include "sasemt/series/power_series.hpp"
#include "sasemt/solver/simulate.hpp"

using namespace sasemt;
using series::PowerSeries;

namespace {

using Clock = std::chrono::steady_clock;

double seconds_since(Clock::time_point t0) {
    return std::chrono::duration<double>(Clock::now() - t0).count();
}

std::string case_path(const std::string& name) { return std::string(SASEMT_CASES_DIR) + "/" + name + ".json"; }

const char* const kCases[] = {"smib_fault", "smib_exciter_limit", "ladder_rlc", "lc_oscillator", "two_machine"};

struct Outcome {
    bool pass = false;
    std::string detail;
};

std::string fmt(const char* f, double v) {
    char buf[64];
    std::snprintf(buf, sizeof buf, f, v);
    return buf;
}

void info(const std::string& s) { std::printf("INFO %s\n", s.c_str()); }

// ---------------------------------------------------------------------------
// 1. recursion fidelity

long double factorial_l(int k) {
    long double f = 1.0L;
    for (int i = 2; i <= k; ++i) {
        f *= i;
    }
    return f;
}

/// Worst relative deviation. Coefficients that vanish symbolically (the
/// reference is zero up to rounding of its own scale) have no relative error,
/// so those are measured against the scale instead.
double worst_relative(const PowerSeries& got, const std::vector<long double>& ref,
                      const std::vector<long double>& scale) {
    double worst = 0.0;
    for (std::size_t k = 0; k < ref.size(); ++k) {
        const bool zero = std::abs(ref[k]) <= scale[k] * 1e-15L;
        const long double denom = zero ? scale[k] : std::abs(ref[k]);
        worst = std::max(worst, static_cast<double>(std::abs(got[static_cast<int>(k)] - ref[k]) / denom));
    }
    return worst;
}

Outcome criterion_series() {
    const auto t0 = Clock::now();
    constexpr int kN = 30;
    double worst = 0.0;

    // sin and cos of a + b t
    {
        const double a = 0.7;
        const double b = 2.3;
        PowerSeries h(kN);
        h[0] = a;
        h[1] = b;
        const auto [s, c] = series::series_sincos(h);
        std::vector<long double> rs(kN + 1), rc(kN + 1), scale(kN + 1);
        for (int k = 0; k <= kN; ++k) {
            const long double bk = std::pow(static_cast<long double>(b), k) / factorial_l(k);
            const long double ph = a + k * std::numbers::pi_v<long double> / 2.0L;
            rs[static_cast<std::size_t>(k)] = bk * std::sin(ph);
            rc[static_cast<std::size_t>(k)] = bk * std::cos(ph);
            scale[static_cast<std::size_t>(k)] = bk;
        }
        worst = std::max({worst, worst_relative(s, rs, scale), worst_relative(c, rc, scale)});
    }

    // sqrt(g^2 + h^2) against the binomial expansion of P0 sqrt(1 + u)
    {
        PowerSeries g(kN);
        PowerSeries h(kN);
        g[0] = 3.0;
        g[1] = -1.0;
        g[2] = 0.25;
        h[0] = 4.0;
        h[1] = 0.5;
        const auto m = series::series_magnitude(g, h);
        std::vector<long double> p(kN + 1, 0.0L);
        for (int i = 0; i <= kN; ++i) {
            for (int j = 0; i + j <= kN; ++j) {
                p[static_cast<std::size_t>(i + j)] +=
                    static_cast<long double>(g[i]) * g[j] + static_cast<long double>(h[i]) * h[j];
            }
        }
        const long double p0 = p[0];
        std::vector<long double> u(kN + 1, 0.0L);
        for (int k = 1; k <= kN; ++k) {
            u[static_cast<std::size_t>(k)] = p[static_cast<std::size_t>(k)] / p0;
        }
        std::vector<long double> ref(kN + 1, 0.0L);
        std::vector<long double> power(kN + 1, 0.0L);
        power[0] = 1.0L;
        long double binom = 1.0L;
        for (int n = 0; n <= kN; ++n) {
            for (int k = 0; k <= kN; ++k) {
                ref[static_cast<std::size_t>(k)] += binom * power[static_cast<std::size_t>(k)];
            }
            std::vector<long double> next(kN + 1, 0.0L);
            for (int i = 0; i <= kN; ++i) {
                for (int j = 1; i + j <= kN; ++j) {
                    next[static_cast<std::size_t>(i + j)] += power[static_cast<std::size_t>(i)] * u[static_cast<std::size_t>(j)];
                }
            }
            power = std::move(next);
            binom *= (0.5L - n) / (n + 1);
        }
        std::vector<long double> scale(kN + 1);
        for (int k = 0; k <= kN; ++k) {
            ref[static_cast<std::size_t>(k)] *= std::sqrt(p0);
            scale[static_cast<std::size_t>(k)] = std::abs(ref[static_cast<std::size_t>(k)]);
        }
        worst = std::max(worst, worst_relative(m, ref, scale));
    }

    // e^t sin t as a Cauchy product
    {
        PowerSeries e(kN);
        PowerSeries h(kN);
        h[1] = 1.0;
        for (int k = 0; k <= kN; ++k) {
            e[k] = static_cast<double>(1.0L / factorial_l(k));
        }
        const auto s = series::series_sincos(h).first;
        const auto prod = series::series_mul(e, s);
        std::vector<long double> ref(kN + 1), scale(kN + 1);
        for (int k = 0; k <= kN; ++k) {
            const long double mag = std::pow(std::sqrt(2.0L), k) / factorial_l(k);
            ref[static_cast<std::size_t>(k)] = mag * std::sin(k * std::numbers::pi_v<long double> / 4.0L);
            scale[static_cast<std::size_t>(k)] = mag;
        }
        worst = std::max(worst, worst_relative(prod, ref, scale));
    }

    const double wall = seconds_since(t0);
    return {worst <= 1e-12 && wall < 1.0,
            "worst relative coefficient error " + fmt("%.3g", worst) + ", " + fmt("%.3f", wall) + " s"};
}

// ---------------------------------------------------------------------------
// 2. order of convergence

double fit_slope(const std::vector<double>& x, const std::vector<double>& y) {
    const double n = static_cast<double>(x.size());
    double sx = 0, sy = 0, sxx = 0, sxy = 0;
    for (std::size_t i = 0; i < x.size(); ++i) {
        sx += x[i];
        sy += y[i];
        sxx += x[i] * x[i];
        sxy += x[i] * y[i];
    }
    return (n * sxy - sx * sy) / (n * sxx - sx * sx);
}

/// Residual of the truncated series substituted into dx/dt = A x + B u with
/// the exact source waveform.
double direct_residual(const model::SystemModel& m, const solver::StepSeries& ws, double t0, double tau) {
    const Eigen::Index N = ws.X.cols() - 1;
    Eigen::VectorXd x = Eigen::VectorXd::Zero(ws.X.rows());
    Eigen::VectorXd dx = Eigen::VectorXd::Zero(ws.X.rows());
    for (Eigen::Index k = N; k >= 0; --k) {
        x = x * tau + ws.X.col(k);
    }
    for (Eigen::Index k = N; k >= 1; --k) {
        dx = dx * tau + static_cast<double>(k) * ws.X.col(k);
    }
    Eigen::VectorXd u(m.net.n_inputs());
    network::source_input_values(m.net, m.topo, t0 + tau, u);
    return (dx - m.net.A * x - m.net.B * u).cwiseAbs().maxCoeff();
}

Outcome criterion_slope() {
    const auto t0 = Clock::now();
    const auto built = io::build_system(io::load_case(case_path("ladder_rlc")));
    const auto& m = built.model;
    std::string detail;
    bool ok = true;
    for (const int N : {4, 10, 30}) {
        solver::StepSeries ws;
        solver::compute_series(m, built.initial, N, ws);
        // One decade of steps ending where E reaches the default threshold.
        const double dt_hi = std::pow(1e-2 / ws.C, 1.0 / N);
        std::vector<double> lx, ly;
        for (int i = 0; i <= 10; ++i) {
            const double dt = dt_hi * std::pow(10.0, -i / 10.0);
            lx.push_back(std::log(dt));
            ly.push_back(std::log(solver::imbalance(ws.C, dt, N)));
        }
        const double slope = fit_slope(lx, ly);
        ok = ok && std::abs(slope - N) <= 0.02 * N;
        detail += "N=" + std::to_string(N) + " slope " + fmt("%.4f", slope) + "; ";

        if (N <= 10) {
            // Direct residual: a decade ending where it reaches 1e2 keeps the
            // low end above rounding.
            const double hi = std::pow(1e2 / ws.C, 1.0 / N);
            std::vector<double> rx, ry;
            for (int i = 0; i <= 10; ++i) {
                const double dt = hi * std::pow(10.0, -i / 10.0);
                rx.push_back(std::log(dt));
                ry.push_back(std::log(direct_residual(m, ws, built.initial.t, dt)));
            }
            info("criterion 2: directly measured residual slope for N=" + std::to_string(N) + " is " +
                 fmt("%.4f", fit_slope(rx, ry)));
        }
    }
    const double wall = seconds_since(t0);
    ok = ok && wall < 10.0;
    return {ok, detail + fmt("%.2f", wall) + " s"};
}

// ---------------------------------------------------------------------------
// 3 and 4. fault case against RK4, step growth

struct FaultRuns {
    io::BuiltSystem built;
    solver::SolverConfig cfg;
    solver::SimulationResult sas;
    reference::ReferenceResult rk4;
    std::vector<std::string> columns;
    double sas_wall = 0.0;
    double rk4_wall = 0.0;
};

FaultRuns run_fault_case() {
    FaultRuns r;
    const auto c = io::load_case(case_path("smib_fault"));
    r.built = io::build_system(c);
    r.columns = io::bus_voltage_columns(r.built.model);
    r.cfg = c.solver;
    r.cfg.dense_interval = 1e-4;
    r.cfg.outputs = r.columns;
    auto t0 = Clock::now();
    r.sas = solver::simulate(r.built.model, r.built.initial, r.cfg);
    r.sas_wall = seconds_since(t0);
    reference::ReferenceConfig rc;
    rc.dt = 1e-6;
    rc.t_end = r.cfg.t_end;
    rc.output_stride = 100;
    rc.outputs = r.columns;
    t0 = Clock::now();
    r.rk4 = reference::rk4_run(r.built.model, r.built.initial, rc);
    r.rk4_wall = seconds_since(t0);
    return r;
}

Outcome criterion_oracle(const FaultRuns& r) {
    if (r.sas.trajectory.rows() != r.rk4.trajectory.rows()) {
        return {false, "trajectories are not on the same grid"};
    }
    const auto d = io::compare_trajectories(r.sas.trajectory, r.rk4.trajectory, r.columns);
    const double wall = r.sas_wall + r.rk4_wall;
    info("criterion 3: SAS " + fmt("%.3f", r.sas_wall) + " s (" + std::to_string(r.sas.steps.size()) +
         " steps), RK4 at 1 us " + fmt("%.3f", r.rk4_wall) + " s");
    return {d.max < 0.01 && wall < 120.0,
            "max bus-voltage error " + fmt("%.3g", d.max) + " pu at t=" + fmt("%.4f", d.t_at_max) + ", mean " +
                fmt("%.3g", d.mean)};
}

Outcome criterion_growth(const FaultRuns& r) {
    // The disturbance is over once the last event has been applied; steps
    // taken while the fault is still on are reported for context.
    const auto& events = r.built.model.events;
    if (events.empty()) {
        return {false, "case has no events"};
    }
    std::vector<double> marks;
    for (const auto& e : events) {
        marks.push_back(e.time);
    }
    marks.push_back(r.cfg.t_end);
    double post_ratio = 0.0;
    std::string detail;
    for (std::size_t i = 0; i + 1 < marks.size(); ++i) {
        double largest = 0.0;
        for (const auto& s : r.sas.steps) {
            if (s.t_start >= marks[i] && s.t_start < marks[i + 1]) {
                largest = std::max(largest, s.dt);
            }
        }
        const double ratio = largest / r.cfg.dt_init;
        const std::string line = "t in [" + fmt("%g", marks[i]) + ", " + fmt("%g", marks[i + 1]) + "): max dt " +
                                 fmt("%.3g", largest) + " s (" + fmt("%.1f", ratio) + "x dt_init)";
        if (i + 2 == marks.size()) {
            post_ratio = ratio;
            detail = "after the last event, " + line;
        } else {
            info("criterion 4: " + line);
        }
    }
    return {post_ratio >= 3.0, detail};
}

// ---------------------------------------------------------------------------
// 5. dense output against fine RK4 restarts

/// The model as it stands at time t: every event up to t applied.
model::SystemModel model_at(const io::BuiltSystem& built, double t) {
    model::SystemModel m = built.model;
    model::SystemState scratch = built.initial;
    std::vector<network::Event> later;
    for (const auto& e : built.model.events) {
        if (e.time <= t + 1e-12) {
            (void)model::apply_model_event(m, scratch, e);
        } else {
            later.push_back(e);
        }
    }
    m.events.clear();
    return m;
}

Outcome criterion_dense(const FaultRuns& r) {
    const auto t0 = Clock::now();
    const auto& steps = r.sas.steps;
    // Longest steps in each event window plus a spread of ordinary ones.
    std::vector<std::size_t> picks;
    for (std::size_t i = 1; i < steps.size(); i += steps.size() / 8) {
        picks.push_back(i);
    }
    std::vector<double> marks{0.0};
    for (const auto& e : r.built.model.events) {
        marks.push_back(e.time);
    }
    marks.push_back(r.cfg.t_end);
    for (std::size_t w = 0; w + 1 < marks.size(); ++w) {
        std::size_t best = 0;
        for (std::size_t i = 1; i < steps.size(); ++i) {
            if (steps[i].t_start >= marks[w] && steps[i].t_start < marks[w + 1] &&
                (best == 0 || steps[i].dt > steps[best].dt)) {
                best = i;
            }
        }
        if (best > 0) {
            picks.push_back(best);
        }
    }
    std::sort(picks.begin(), picks.end());
    picks.erase(std::unique(picks.begin(), picks.end()), picks.end());

    double worst = 0.0;
    long samples = 0;
    bool reproduced = true;
    for (const std::size_t i : picks) {
        const auto& start = steps[i - 1].end_state;
        const auto& rec = steps[i];
        const auto m = model_at(r.built, start.t);
        const auto cols = model::resolve_columns(m, r.columns);

        solver::StepSeries ws;
        solver::compute_series(m, start, r.cfg.order, ws);
        model::SystemState at;
        solver::evaluate_state(m, ws, start, rec.dt, at);
        // The recorded length is end.t - start.t, which can differ from the
        // evaluated length in the last bit.
        reproduced = reproduced && (at.x2 - rec.end_state.x2).cwiseAbs().maxCoeff() <=
                                       1e-12 * std::max(1.0, rec.end_state.x2.cwiseAbs().maxCoeff());

        reference::ReferenceConfig rc;
        rc.dt = 1e-8;
        rc.output_stride = 100;
        rc.t_end = start.t + std::floor(rec.dt / 1e-6 + 1e-9) * 1e-6;
        rc.outputs = r.columns;
        const auto fine = reference::rk4_run(m, start, rc);
        std::vector<double> row(cols.size());
        for (std::size_t s = 0; s < fine.trajectory.rows(); ++s) {
            const double tau = fine.trajectory.times()[s] - start.t;
            solver::evaluate_state(m, ws, start, std::min(tau, rec.dt), at);
            model::sample_row(m, cols, at.t, at.x2, at.x1, row);
            for (std::size_t c = 0; c < cols.size(); ++c) {
                worst = std::max(worst, std::abs(row[c] - fine.trajectory.at(s, c)));
            }
            ++samples;
        }
    }
    const double wall = seconds_since(t0);
    return {reproduced && worst < 1e-6 && wall < 60.0,
            std::to_string(picks.size()) + " steps, " + std::to_string(samples) + " samples on a 1 us grid, max error " +
                fmt("%.3g", worst) + " pu" + (reproduced ? "" : ", step series NOT reproduced") + ", " +
                fmt("%.2f", wall) + " s"};
}

// ---------------------------------------------------------------------------
// 6. switch detection against a 0.1 us scan

Outcome criterion_switch() {
    const auto t0 = Clock::now();
    const auto c = io::load_case(case_path("smib_exciter_limit"));
    const auto built = io::build_system(c);
    const auto& exc = *built.model.machines[0].exc;
    const std::vector<std::string> cols{"G1.efd", "G1.vt"};

    reference::ReferenceConfig rc;
    rc.dt = 1e-7;
    rc.t_end = c.solver.t_end;
    rc.outputs = cols;
    const auto oracle = reference::rk4_run(built.model, built.initial, rc);
    double t_oracle = -1.0;
    for (std::size_t s = 0; s < oracle.trajectory.rows(); ++s) {
        if (oracle.trajectory.at(s, 0) >= exc.E_max) {
            t_oracle = oracle.trajectory.times()[s];
            break;
        }
    }
    if (t_oracle < 0.0) {
        return {false, "the oracle never reaches the exciter ceiling"};
    }

    auto run = [&](bool detection) {
        auto cfg = c.solver;
        cfg.switch_detection = detection;
        cfg.dense_interval = 1e-5;
        cfg.outputs = cols;
        return solver::simulate(built.model, built.initial, cfg);
    };
    const auto with = run(true);
    const auto without = run(false);
    if (with.switches.empty()) {
        return {false, "no switch detected"};
    }
    const double t_switch = with.switches.front().t_switch;

    auto post_error = [&](const solver::SimulationResult& res) {
        double worst = 0.0;
        for (std::size_t s = 0; s < res.trajectory.rows(); ++s) {
            const double t = res.trajectory.times()[s];
            if (t < t_oracle) {
                continue;
            }
            const auto o = static_cast<std::size_t>(std::lround(t / rc.dt));
            if (o >= oracle.trajectory.rows()) {
                break;
            }
            for (std::size_t col = 0; col < cols.size(); ++col) {
                worst = std::max(worst, std::abs(res.trajectory.at(s, col) - oracle.trajectory.at(o, col)));
            }
        }
        return worst;
    };
    const double e_with = post_error(with);
    const double e_without = post_error(without);
    const double gap = std::abs(t_switch - t_oracle);
    const double wall = seconds_since(t0);
    return {gap <= 1e-6 && e_with < e_without && wall < 60.0,
            "t_switch " + fmt("%.9f", t_switch) + " vs oracle " + fmt("%.7f", t_oracle) + " (gap " + fmt("%.2g", gap) +
                " s); post-switch error " + fmt("%.3g", e_with) + " with detection, " + fmt("%.3g", e_without) +
                " without; " + fmt("%.1f", wall) + " s"};
}

// ---------------------------------------------------------------------------
// 7. order sweep

Outcome criterion_order_sweep() {
    const auto c = io::load_case(case_path("two_machine"));
    const auto built = io::build_system(c);
    const auto rows = io::bench_order(built, c.solver, {4, 8, 16, 24, 30, 40});
    std::string detail;
    for (const auto& r : rows) {
        detail += "N=" + std::to_string(r.order) + " mean dt " + fmt("%.3g", r.mean_dt) + "; ";
        info("criterion 7: N=" + std::to_string(r.order) + " mean dt " + fmt("%.4g", r.mean_dt) + " s, " +
             std::to_string(r.steps) + " steps, wall " + fmt("%.3f", r.wall_s) + " s");
    }
    return {io::mean_dt_monotone(rows), detail};
}

// ---------------------------------------------------------------------------
// 8. determinism and round trips

std::string csv_of(const std::string& name) {
    const auto c = io::load_case(case_path(name));
    const auto built = io::build_system(c);
    const auto res = solver::simulate(built.model, built.initial, c.solver);
    std::ostringstream os;
    io::write_timeseries(res.trajectory, c.solver.outputs, os, {{"case", c.name}, {"case_hash", io::case_hash(c)}});
    return os.str();
}

Outcome criterion_round_trips() {
    std::string detail;
    bool ok = true;

    bool csv_same = true;
    for (const char* name : {"smib_fault", "lc_oscillator"}) {
        csv_same = csv_same && csv_of(name) == csv_of(name);
    }
    ok = ok && csv_same;
    detail += csv_same ? "CSV byte-identical; " : "CSV differs between runs; ";

    bool cases_same = true;
    for (const char* name : kCases) {
        const auto a = io::load_case(case_path(name));
        const auto b = io::parse_case(io::serialize_case(a));
        cases_same = cases_same && a == b && io::serialize_case(b) == io::serialize_case(a);
    }
    ok = ok && cases_same;
    detail += cases_same ? "case round trips exact; " : "case round trip mismatch; ";

    std::mt19937_64 rng(12345);
    std::uniform_real_distribution<double> angle(-10.0, 10.0);
    double park = 0.0;
    for (int i = 0; i < 10000; ++i) {
        const double th = angle(rng);
        const Eigen::Matrix3d p = machine::inv_park_matrix(th) * machine::park_matrix(th);
        park = std::max(park, (p - Eigen::Matrix3d::Identity()).cwiseAbs().maxCoeff());
    }
    ok = ok && park <= 1e-12;
    detail += "Park round trip " + fmt("%.2g", park) + "; ";

    const auto c = io::load_case(case_path("smib_fault"));
    const auto built = io::build_system(c);
    const auto& topo = built.model.topo;
    const auto base = network::assemble_linear_network(topo);
    bool stamp = true;
    for (const auto& bus : topo.buses) {
        network::Event on;
        on.kind = network::EventKind::fault_on;
        on.target = bus.name;
        on.r_fault = 0.01;
        auto off = on;
        off.kind = network::EventKind::fault_off;
        const auto restored = network::apply_event(network::apply_event(topo, on), off);
        const auto net = network::assemble_linear_network(restored);
        stamp = stamp && net.A == base.A && net.B == base.B;
    }
    ok = ok && stamp;
    detail += stamp ? "fault stamp/unstamp exact" : "fault stamp/unstamp changed A or B";
    return {ok, detail};
}

// ---------------------------------------------------------------------------
// 9. steady-state hold

/// Rebuilds the full state from an "all" trajectory row.
model::SystemState state_from_row(const model::SystemModel& m, const model::Trajectory& tr, std::size_t row) {
    model::SystemState st;
    st.t = tr.times()[row];
    st.x2.resize(m.net.n_states());
    for (int i = 0; i < m.net.n_states(); ++i) {
        st.x2[i] = tr.at(row, static_cast<std::size_t>(tr.column(m.net.state_names[static_cast<std::size_t>(i)])));
    }
    st.x1.resize(m.machines.size());
    st.flags.resize(m.machines.size());
    for (std::size_t k = 0; k < m.machines.size(); ++k) {
        for (std::size_t v = 0; v < machine::kDiffCount; ++v) {
            const auto name = m.machines[k].name + "." + std::string(machine::name(static_cast<machine::DiffVar>(v)));
            st.x1[k][v] = tr.at(row, static_cast<std::size_t>(tr.column(name)));
        }
    }
    return st;
}

/// Envelopes of the bus voltages held in capacitor states. A three-phase bus
/// uses the instantaneous magnitude sqrt(2/3 (va^2 + vb^2 + vc^2)). A driven
/// single-phase bus uses sqrt(v^2 + (dv/dt / w)^2) at the system frequency,
/// and a source-free case uses the amplitude equivalent to its stored energy.
std::vector<double> envelopes(const model::SystemModel& m, const reference::RhsEvaluator& f,
                              const model::SystemState& st, bool driven) {
    std::vector<double> out;
    if (driven) {
        Eigen::VectorXd y, dy;
        f.pack(st, y);
        f.eval(st.t, y, dy);
        const double w = m.omega0();
        for (std::size_t b = 0; b < m.topo.buses.size(); ++b) {
            const auto& nodes = m.net.bus_nodes[b];
            if (m.topo.buses[b].phases == 3) {
                if (nodes[0].state < 0) {
                    continue;
                }
                double sum = 0.0;
                for (const auto& n : nodes) {
                    sum += st.x2[n.state] * st.x2[n.state];
                }
                out.push_back(std::sqrt(2.0 / 3.0 * sum));
            } else if (nodes[0].state >= 0) {
                out.push_back(std::hypot(st.x2[nodes[0].state], dy[nodes[0].state] / w));
            }
        }
        return out;
    }
    double energy = 0.0;
    double cap = 0.0;
    for (const auto& b : m.topo.branches) {
        if (b.kind == network::BranchKind::shunt_c) {
            const double v = st.x2[m.net.state_index("v:" + b.from + ":a")];
            energy += 0.5 * b.c * v * v;
            cap += b.c;
        } else if (b.kind == network::BranchKind::shunt_rl || b.kind == network::BranchKind::series_rl) {
            const double i = st.x2[m.net.state_index("i:" + b.name + ":a")];
            energy += 0.5 * b.l * i * i;
        }
    }
    out.push_back(std::sqrt(2.0 * energy / cap));
    return out;
}

Outcome criterion_steady() {
    const auto t0 = Clock::now();
    std::string detail;
    bool ok = true;
    for (const char* name : kCases) {
        const auto c = io::load_case(case_path(name));
        const auto built = io::build_system_without_events(c);
        const auto& m = built.model;
        const bool driven = !m.topo.sources.empty() || !m.machines.empty();
        // SI cases are judged relative to their initial amplitude.
        const reference::RhsEvaluator f(m);
        const auto env0 = envelopes(m, f, built.initial, driven);
        const double base = c.units == io::UnitSystem::si ? *std::max_element(env0.begin(), env0.end()) : 1.0;

        auto drift = [&](const model::Trajectory& tr) {
            double worst = 0.0;
            for (std::size_t row = 0; row < tr.rows(); ++row) {
                const auto env = envelopes(m, f, state_from_row(m, tr, row), driven);
                for (std::size_t k = 0; k < env.size(); ++k) {
                    worst = std::max(worst, std::abs(env[k] - env0[k]) / base);
                }
            }
            return worst;
        };

        auto cfg = c.solver;
        cfg.t_end = 0.5;
        cfg.dense_interval = 1e-3;
        cfg.outputs = {"all"};
        const auto sas = solver::simulate(m, built.initial, cfg);
        reference::ReferenceConfig rc;
        rc.dt = 1e-6;
        rc.t_end = 0.5;
        rc.output_stride = 1000;
        const auto rk4 = reference::rk4_run(m, built.initial, rc);
        const double ds = drift(sas.trajectory);
        const double dr = drift(rk4.trajectory);
        ok = ok && ds < 1e-6 && dr < 1e-6;
        detail += std::string(name) + " " + fmt("%.2g", ds) + "/" + fmt("%.2g", dr) + "; ";
    }
    return {ok, "envelope drift SAS/RK4 " + detail + fmt("%.1f", seconds_since(t0)) + " s"};
}

// ---------------------------------------------------------------------------
// informational cross-checks

void report_trapezoidal(const FaultRuns& r) {
    reference::ReferenceConfig rc;
    rc.dt = 1e-6;
    rc.t_end = r.cfg.t_end;
    rc.output_stride = 100;
    rc.outputs = r.columns;
    const auto t0 = Clock::now();
    try {
        const auto trap = reference::trapezoidal_run(r.built.model, r.built.initial, rc);
        const auto d = io::compare_trajectories(trap.trajectory, r.rk4.trajectory, r.columns);
        info("trapezoidal vs RK4 at 1 us on smib_fault: max bus-voltage difference " + fmt("%.3g", d.max) +
             " pu at t=" + fmt("%.4f", d.t_at_max) + " (" + fmt("%.1f", seconds_since(t0)) + " s)");
    } catch (const Error& e) {
        info(std::string("trapezoidal run failed: ") + e.what());
    }
}

void report_bench_solver() {
    const auto c = io::load_case(case_path("smib_fault"));
    const auto built = io::build_system(c);
    const auto b = io::bench_solver(built, c.solver, io::SolverBenchOptions{});
    for (const auto& row : b.rows) {
        info("bench-solver " + row.solver + " step " + fmt("%.3g", row.step) + " s: max error " +
             fmt("%.3g", row.max_error) + ", wall " + fmt("%.3f", row.wall_s) + " s");
    }
    info("bench-solver: SAS mean step " + fmt("%.3g", b.sas_mean_dt) + " s, error-matched RK4 step " +
         fmt("%.3g", b.matched_rk4_dt) + " s, ratio " + fmt("%.1f", b.step_ratio()) +
         (b.step_ratio() >= 5.0 ? " (meets 5x)" : " (below 5x)"));
}

}  // namespace

int main() {
    int failures = 0;
    auto report = [&](int n, const char* title, const std::function<Outcome()>& fn) {
        Outcome o;
        try {
            o = fn();
        } catch (const std::exception& e) {
            o = {false, std::string("exception: ") + e.what()};
        }
        failures += o.pass ? 0 : 1;
        std::printf("%s criterion %d (%s): %s\n", o.pass ? "PASS" : "FAIL", n, title, o.detail.c_str());
        std::fflush(stdout);
    };

    report(1, "series recursion fidelity", criterion_series);
    report(2, "order of convergence", criterion_slope);

    FaultRuns fault;
    bool have_fault = false;
    try {
        fault = run_fault_case();
        have_fault = true;
    } catch (const std::exception& e) {
        std::printf("INFO fault case failed to run: %s\n", e.what());
    }
    auto need_fault = [&](const std::function<Outcome()>& fn) {
        return [&, fn]() { return have_fault ? fn() : Outcome{false, "fault case did not run"}; };
    };
    report(3, "oracle equivalence", need_fault([&] { return criterion_oracle(fault); }));
    report(4, "step growth", need_fault([&] { return criterion_growth(fault); }));
    report(5, "dense output", need_fault([&] { return criterion_dense(fault); }));
    report(6, "switch detection", criterion_switch);
    report(7, "order sweep", criterion_order_sweep);
    report(8, "determinism and round trips", criterion_round_trips);
    report(9, "steady-state hold", criterion_steady);

    if (have_fault) {
        report_trapezoidal(fault);
    }
    try {
        report_bench_solver();
    } catch (const std::exception& e) {
        info(std::string("bench-solver failed: ") + e.what());
    }
    std::printf("%d of 9 criteria failed\n", failures);
    return failures == 0 ? 0 : 1;
}
