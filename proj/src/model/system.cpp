#include "sasemt/model/system.hpp"

#include <algorithm>
#include <cmath>
#include <numbers>

#include "sasemt/error.hpp"
#include "sasemt/machine/init.hpp"

namespace sasemt::model {

using machine::DiffVar;
using machine::idx;

double SystemModel::omega0() const noexcept { return 2.0 * std::numbers::pi * topo.frequency_hz; }

int SystemModel::machine_index(const std::string& name) const {
    for (std::size_t i = 0; i < machines.size(); ++i) {
        if (machines[i].name == name) {
            return static_cast<int>(i);
        }
    }
    return -1;
}

SystemModel make_system(network::NetworkTopology topo, std::vector<MachineUnit> machines,
                        std::vector<network::Event> events, IslandingPolicy islanding) {
    SystemModel model;
    topo.machines.clear();
    for (auto& m : machines) {
        m.params.validate();
        if (m.gov) {
            m.gov->validate();
        }
        if (m.exc) {
            m.exc->validate();
        }
        m.coeffs = machine::VbrCoefficients::from(m.params);
        topo.machines.push_back({m.name, m.bus, m.in_service});
    }
    std::stable_sort(events.begin(), events.end(),
                     [](const network::Event& a, const network::Event& b) { return a.time < b.time; });
    model.net = network::assemble_linear_network(topo);
    model.topo = std::move(topo);
    model.machines = std::move(machines);
    model.events = std::move(events);
    model.islanding = islanding;
    return model;
}

std::array<double, 3> terminal_voltages(const SystemModel& model, std::size_t m,
                                        const Eigen::Ref<const Eigen::VectorXd>& x2) {
    const auto& st = model.net.machine_voltage_states[m];
    std::array<double, 3> v{};
    for (std::size_t ph = 0; ph < 3; ++ph) {
        v[ph] = st[ph] >= 0 ? x2[st[ph]] : 0.0;
    }
    return v;
}

void input_values(const SystemModel& model, double t, const std::vector<machine::DiffValues>& x1,
                  Eigen::VectorXd& u) {
    u.resize(model.net.n_inputs());
    network::source_input_values(model.net, model.topo, t, u);
    for (std::size_t m = 0; m < model.machines.size(); ++m) {
        const auto& cols = model.net.machine_inputs[m];
        for (std::size_t ph = 0; ph < 3; ++ph) {
            if (cols[ph] >= 0) {
                u[cols[ph]] = x1[m][idx(DiffVar::ia) + ph];
            }
        }
    }
}

SystemState init_phasor(SystemModel& model) {
    using cd = std::complex<double>;
    const std::size_t nm = model.machines.size();
    std::vector<cd> currents(nm);
    for (std::size_t m = 0; m < nm; ++m) {
        const auto& mu = model.machines[m];
        currents[m] = machine::injection_phasor(mu.p, mu.q, machine::terminal_phasor(mu.v, mu.angle_deg));
    }
    const bool has_vsource =
        std::any_of(model.topo.sources.begin(), model.topo.sources.end(),
                    [](const network::Source& s) { return s.kind == network::SourceKind::voltage; });

    auto machine_bus = [&](std::size_t m) { return model.topo.bus_index(model.machines[m].bus); };
    network::PhasorSolution sol = network::solve_phasor_steady_state(model.net, model.topo, currents);
    if (has_vsource && nm > 0) {
        constexpr int kMaxIter = 200;
        double change = 0.0;
        for (int it = 0; it < kMaxIter; ++it) {
            change = 0.0;
            for (std::size_t m = 0; m < nm; ++m) {
                const auto& mu = model.machines[m];
                const cd V = network::bus_phasor(model.net, sol, machine_bus(m));
                const cd I = machine::injection_phasor(mu.p, mu.q, V);
                change = std::max(change, std::abs(I - currents[m]));
                currents[m] = I;
            }
            sol = network::solve_phasor_steady_state(model.net, model.topo, currents);
            if (change < 1e-14) {
                break;
            }
        }
        if (change > 1e-10) {
            throw InitializationError("machine injections did not converge to the requested power");
        }
    }

    SystemState st;
    st.t = 0.0;
    st.x2 = sol.X.real();
    st.x1.resize(nm);
    st.flags.assign(nm, {});
    for (std::size_t m = 0; m < nm; ++m) {
        auto& mu = model.machines[m];
        const cd V = network::bus_phasor(model.net, sol, machine_bus(m));
        const auto init = machine::init_machine_steady_state(mu.params, mu.gov_ptr(), mu.exc_ptr(), V, currents[m]);
        st.x1[m] = init.x;
        if (mu.gov) {
            mu.gov->p_ref = init.p_ref;
        }
        if (mu.exc) {
            mu.exc->v_ref = init.v_ref;
        }
    }
    return st;
}

SystemState init_explicit(const SystemModel& model, const std::map<std::string, double>& values) {
    if (!model.machines.empty()) {
        throw InitializationError("explicit initial state is only supported without machines");
    }
    SystemState st;
    st.x2 = Eigen::VectorXd::Zero(model.net.n_states());
    for (const auto& [name, value] : values) {
        const int i = model.net.state_index(name);
        if (i < 0) {
            throw InitializationError("initial value for unknown state '" + name + "'");
        }
        st.x2[i] = value;
    }
    return st;
}

std::string apply_model_event(SystemModel& model, SystemState& state, const network::Event& ev) {
    network::NetworkTopology topo = network::apply_event(model.topo, ev);
    network::LinearNetwork net = network::assemble_linear_network(topo);
    state.x2 = network::remap_states(model.net, state.x2, net);
    if (ev.kind == network::EventKind::trip_generator) {
        const int m = model.machine_index(ev.target);
        model.machines[static_cast<std::size_t>(m)].in_service = false;
        // An open stator carries no current.
        auto& x = state.x1[static_cast<std::size_t>(m)];
        x[idx(DiffVar::ia)] = x[idx(DiffVar::ib)] = x[idx(DiffVar::ic)] = 0.0;
    }
    const int before = network::count_islands(model.topo);
    const int after = network::count_islands(topo);
    model.topo = std::move(topo);
    model.net = std::move(net);

    char buf[64];
    std::snprintf(buf, sizeof buf, "%.9f", ev.time);
    std::string line = std::string("t=") + buf + " " + network::to_string(ev.kind) + " " + ev.target;
    if (after > before) {
        if (model.islanding == IslandingPolicy::error) {
            throw AssemblyError(line + " splits the network into " + std::to_string(after) + " islands");
        }
        line += " (warning: network split into " + std::to_string(after) + " islands)";
    }
    return line;
}

}  // namespace sasemt::model
