// Command-line front end: run, bench-order, bench-solver, validate.
//
// Exit codes: 0 success, 1 usage or I/O, 2 case validation, 3 numerical
// divergence or stiffness abort.

#include <chrono>
#include <cstdio>
#include <fstream>
#include <iostream>
#include <sstream>
#include <string>
#include <vector>

#include <CLI11.hpp>

#include "sasemt/error.hpp"
#include "sasemt/io/bench.hpp"
#include "sasemt/io/case.hpp"
#include "sasemt/io/timeseries.hpp"
#include "sasemt/reference/integrators.hpp"
#include "sasemt/solver/simulate.hpp"

namespace {

using namespace sasemt;

constexpr int kExitOk = 0;
constexpr int kExitUsage = 1;
constexpr int kExitCase = 2;
constexpr int kExitNumerical = 3;

constexpr const char* kVersion = "1.0.0";

struct Options {
    std::string case_path;
    std::string output;
    std::string solver = "sas";
    std::string orders = "4,8,16,24,30,40";
    double t_end = -1.0;
    int order = -1;
    double eps_imbalance = -1.0;
    double dt_init = -1.0;
    double dt_min = -1.0;
    double dt_cap = -1.0;
    double dense_interval = -1.0;
    bool seed_check = false;
    // bench-solver
    double reference_dt = 1e-6;
    double trap_dt = 1e-5;
    double grid = 1e-4;
};

void apply_overrides(const Options& o, solver::SolverConfig& s) {
    if (o.t_end >= 0.0) {
        s.t_end = o.t_end;
    }
    if (o.order > 0) {
        s.order = o.order;
    }
    if (o.eps_imbalance > 0.0) {
        s.eps_imbalance = o.eps_imbalance;
    }
    if (o.dt_init > 0.0) {
        s.dt_init = o.dt_init;
    }
    if (o.dt_min > 0.0) {
        s.dt_min = o.dt_min;
    }
    if (o.dt_cap > 0.0) {
        s.dt_cap = o.dt_cap;
    }
    if (o.dense_interval >= 0.0) {
        s.dense_interval = o.dense_interval;
    }
    try {
        s.validate();
    } catch (const ParameterError& e) {
        throw CaseError(std::string("solver settings: ") + e.what());
    }
}

std::vector<int> parse_orders(const std::string& text) {
    std::vector<int> out;
    std::stringstream ss(text);
    std::string item;
    while (std::getline(ss, item, ',')) {
        try {
            std::size_t used = 0;
            const int n = std::stoi(item, &used);
            if (used != item.size()) {
                throw std::invalid_argument(item);
            }
            out.push_back(n);
        } catch (const std::exception&) {
            throw CLI::ValidationError("--orders", "'" + item + "' is not an integer");
        }
    }
    if (out.empty()) {
        throw CLI::ValidationError("--orders", "empty list");
    }
    return out;
}

io::Metadata run_metadata(const io::CaseConfig& c, const std::string& solver_name) {
    const auto& s = c.solver;
    return {{"tool", std::string("sasemt ") + kVersion},
            {"case", c.name},
            {"case_hash", io::case_hash(c)},
            {"solver", solver_name},
            {"order", std::to_string(s.order)},
            {"eps_imbalance", io::format_double(s.eps_imbalance)},
            {"dt_init", io::format_double(s.dt_init)},
            {"dt_min", io::format_double(s.dt_min)},
            {"dt_cap", io::format_double(s.dt_cap)},
            {"growth", io::format_double(s.growth)},
            {"eps_switch", io::format_double(s.eps_switch)},
            {"switch_detection", s.switch_detection ? "true" : "false"},
            {"imbalance_mode", s.imbalance_mode == solver::ImbalanceMode::network ? "network" : "full"},
            {"dense_interval", io::format_double(s.dense_interval)},
            {"t_end", io::format_double(s.t_end)}};
}

struct RunOutput {
    std::string csv;
    std::size_t steps = 0;
    double mean_dt = 0.0;
    std::vector<std::string> log;
};

RunOutput run_once(const io::CaseConfig& c, const std::string& solver_name) {
    const auto sys = io::build_system(c);
    RunOutput out;
    model::Trajectory traj;
    if (solver_name == "sas") {
        auto res = solver::simulate(sys.model, sys.initial, c.solver);
        out.steps = res.steps.size();
        out.mean_dt = res.mean_dt();
        out.log = std::move(res.event_log);
        for (const auto& sw : res.switches) {
            char buf[160];
            std::snprintf(buf, sizeof buf, "switch %s %s at t=%.9f", sw.state.c_str(),
                          sw.direction == machine::Saturation::upper ? "upper" : "lower", sw.t_switch);
            out.log.emplace_back(buf);
        }
        traj = std::move(res.trajectory);
    } else {
        // Fixed-step oracles use dt_init as their step.
        reference::ReferenceConfig rc;
        rc.dt = c.solver.dt_init;
        rc.t_end = c.solver.t_end;
        rc.outputs = c.solver.outputs;
        if (c.solver.dense_interval > 0.0) {
            const double ratio = c.solver.dense_interval / rc.dt;
            rc.output_stride = static_cast<int>(std::lround(ratio));
            if (rc.output_stride < 1 || std::abs(ratio - rc.output_stride) > 1e-9 * ratio) {
                throw CaseError("dense interval must be a multiple of the fixed step");
            }
        }
        auto res = solver_name == "rk4" ? reference::rk4_run(sys.model, sys.initial, rc)
                                        : reference::trapezoidal_run(sys.model, sys.initial, rc);
        out.steps = static_cast<std::size_t>(res.steps);
        out.mean_dt = rc.dt;
        out.log = std::move(res.event_log);
        traj = std::move(res.trajectory);
    }
    std::ostringstream os;
    io::write_timeseries(traj, {"all"}, os, run_metadata(c, solver_name));
    out.csv = os.str();
    return out;
}

int cmd_run(const Options& o) {
    auto c = io::load_case(o.case_path);
    apply_overrides(o, c.solver);
    const auto t0 = std::chrono::steady_clock::now();
    const auto out = run_once(c, o.solver);
    const double wall = std::chrono::duration<double>(std::chrono::steady_clock::now() - t0).count();
    if (o.seed_check) {
        const auto again = run_once(c, o.solver);
        if (again.csv != out.csv) {
            std::cerr << "seed check failed: repeated run produced different output\n";
            return kExitNumerical;
        }
        std::cerr << "seed check passed: repeated run is byte-identical\n";
    }
    if (o.output.empty() || o.output == "-") {
        std::cout << out.csv;
    } else {
        std::ofstream f(o.output, std::ios::binary);
        f << out.csv;
        if (!f) {
            std::cerr << "error: cannot write '" << o.output << "'\n";
            return kExitUsage;
        }
    }
    for (const auto& line : out.log) {
        std::cerr << line << '\n';
    }
    std::fprintf(stderr, "%s: %zu steps, mean step %.6g s, wall %.3f s\n", o.solver.c_str(), out.steps, out.mean_dt,
                 wall);
    return kExitOk;
}

int cmd_bench_order(const Options& o) {
    auto c = io::load_case(o.case_path);
    apply_overrides(o, c.solver);
    const auto orders = parse_orders(o.orders);
    const auto sys = io::build_system(c);
    const auto rows = io::bench_order(sys, c.solver, orders);
    std::printf("# case: %s (%s)\n", c.name.c_str(), io::case_hash(c).c_str());
    std::printf("# eps_imbalance: %s  t_end: %s\n", io::format_double(c.solver.eps_imbalance).c_str(),
                io::format_double(c.solver.t_end).c_str());
    std::printf("%6s %14s %8s %9s %10s\n", "order", "mean_dt_s", "steps", "rejected", "wall_s");
    for (const auto& r : rows) {
        std::printf("%6d %14.6e %8zu %9ld %10.3f\n", r.order, r.mean_dt, r.steps, r.rejected, r.wall_s);
    }
    std::printf("mean step monotone in order: %s\n", io::mean_dt_monotone(rows) ? "yes" : "no");
    return kExitOk;
}

int cmd_bench_solver(const Options& o) {
    auto c = io::load_case(o.case_path);
    apply_overrides(o, c.solver);
    const auto sys = io::build_system(c);
    io::SolverBenchOptions opt;
    opt.reference_dt = o.reference_dt;
    opt.trap_dt = o.trap_dt;
    opt.grid = o.grid;
    const auto b = io::bench_solver(sys, c.solver, opt);
    std::printf("# case: %s (%s)\n", c.name.c_str(), io::case_hash(c).c_str());
    std::printf("# reference: rk4 at %s s (wall %.3f s), grid %s s, bus voltages\n",
                io::format_double(opt.reference_dt).c_str(), b.reference_wall_s, io::format_double(opt.grid).c_str());
    std::printf("%-6s %12s %14s %14s %10s\n", "solver", "step_s", "max_err", "mean_err", "wall_s");
    for (const auto& r : b.rows) {
        std::printf("%-6s %12.4e %14.6e %14.6e %10.3f\n", r.solver.c_str(), r.step, r.max_error, r.mean_error,
                    r.wall_s);
    }
    if (b.matched_rk4_dt > 0.0) {
        std::printf("error-matched rk4 step: %.4e s; sas mean step / matched step = %.2f\n", b.matched_rk4_dt,
                    b.step_ratio());
    } else {
        std::printf("error-matched rk4 step: none of the candidates is as accurate as sas\n");
    }
    return kExitOk;
}

int cmd_validate(const Options& o) {
    auto c = io::load_case(o.case_path);
    apply_overrides(o, c.solver);
    const auto sys = io::build_system(c);
    std::printf("case '%s' is valid: %zu buses, %zu branches, %zu machines, %zu events, %d states, hash %s\n",
                c.name.c_str(), c.topology.buses.size(), c.topology.branches.size(), c.machines.size(),
                c.events.size(), sys.model.net.n_states() + static_cast<int>(machine::kDiffCount * sys.model.machines.size()),
                io::case_hash(c).c_str());
    return kExitOk;
}

void add_common(CLI::App* cmd, Options& o) {
    cmd->add_option("--case", o.case_path, "case file (JSON)")->required()->check(CLI::ExistingFile);
    cmd->add_option("--t-end", o.t_end, "end time in seconds");
    cmd->add_option("--order", o.order, "series order N");
    cmd->add_option("--eps-imbalance", o.eps_imbalance, "imbalance threshold (pu)");
    cmd->add_option("--dt-init", o.dt_init, "initial step in seconds (fixed step for rk4 and trap)");
    cmd->add_option("--dt-min", o.dt_min, "minimum step in seconds");
    cmd->add_option("--dt-cap", o.dt_cap, "maximum step in seconds");
    cmd->add_option("--dense-interval", o.dense_interval, "output grid spacing in seconds (0: step ends)");
}

}  // namespace

int main(int argc, char** argv) {
    CLI::App app{"Series-expansion EMT simulator"};
    app.set_version_flag("--version", kVersion);
    app.require_subcommand(1);
    Options o;

    auto* run = app.add_subcommand("run", "simulate a case and write a CSV time series");
    add_common(run, o);
    run->add_option("--solver", o.solver, "integrator")->check(CLI::IsMember({"sas", "rk4", "trap"}));
    run->add_option("--output", o.output, "CSV path (default: standard output)");
    run->add_flag("--seed-check", o.seed_check, "run twice and require byte-identical output");

    auto* border = app.add_subcommand("bench-order", "sweep the series order and report mean accepted step");
    add_common(border, o);
    border->add_option("--orders", o.orders, "comma-separated orders");

    auto* bsolver = app.add_subcommand("bench-solver", "compare sas, rk4 and trap against a fine rk4 run");
    add_common(bsolver, o);
    bsolver->add_option("--reference-dt", o.reference_dt, "step of the reference rk4 run");
    bsolver->add_option("--trap-dt", o.trap_dt, "trapezoidal step");
    bsolver->add_option("--grid", o.grid, "comparison grid spacing");

    auto* validate = app.add_subcommand("validate", "check a case without simulating");
    add_common(validate, o);

    try {
        app.parse(argc, argv);
    } catch (const CLI::CallForHelp& e) {
        return app.exit(e);
    } catch (const CLI::CallForAllHelp& e) {
        return app.exit(e);
    } catch (const CLI::CallForVersion& e) {
        return app.exit(e);
    } catch (const CLI::ParseError& e) {
        app.exit(e);
        return kExitUsage;
    }

    try {
        if (run->parsed()) {
            return cmd_run(o);
        }
        if (border->parsed()) {
            return cmd_bench_order(o);
        }
        if (bsolver->parsed()) {
            return cmd_bench_solver(o);
        }
        return cmd_validate(o);
    } catch (const CLI::ValidationError& e) {
        std::cerr << "error: " << e.what() << '\n';
        return kExitUsage;
    } catch (const CaseError& e) {
        std::cerr << "case error: " << e.what() << '\n';
        return kExitCase;
    } catch (const ParameterError& e) {
        std::cerr << "case error: " << e.what() << '\n';
        return kExitCase;
    } catch (const AssemblyError& e) {
        std::cerr << "case error: " << e.what() << '\n';
        return kExitCase;
    } catch (const InitializationError& e) {
        std::cerr << "case error: " << e.what() << '\n';
        return kExitCase;
    } catch (const DivergenceError& e) {
        std::cerr << "numerical error: " << e.what() << '\n';
        return kExitNumerical;
    } catch (const StiffnessError& e) {
        std::cerr << "numerical error: " << e.what() << '\n';
        return kExitNumerical;
    } catch (const std::exception& e) {
        std::cerr << "error: " << e.what() << '\n';
        return kExitUsage;
    }
}
