#include "sasemt/network/linear_network.hpp"

#include <cmath>
#include <numbers>

#include "sasemt/error.hpp"

namespace sasemt::network {

namespace {

constexpr double kTwoThirdsPi = 2.0 * std::numbers::pi / 3.0;

double phase_angle(const Source& s, int phase) noexcept {
    return s.angle_deg * std::numbers::pi / 180.0 - kTwoThirdsPi * phase;
}

struct NodeBuild {
    double cap = 0.0;
    int vsource = -1;  ///< input column of a voltage source
    bool touches_inductor = false;
    bool has_machine = false;
};

}  // namespace

const char* phase_name(int phase) noexcept {
    static constexpr const char* kNames[] = {"a", "b", "c"};
    return phase >= 0 && phase < 3 ? kNames[phase] : "?";
}

int LinearNetwork::state_index(const std::string& name) const {
    const auto it = state_lookup_.find(name);
    return it == state_lookup_.end() ? -1 : it->second;
}

double LinearNetwork::bus_voltage(int bus, int phase, const Eigen::Ref<const Eigen::VectorXd>& x,
                                  const Eigen::Ref<const Eigen::VectorXd>& u) const {
    const NodeRef& n = bus_nodes[static_cast<std::size_t>(bus)][static_cast<std::size_t>(phase)];
    if (n.state >= 0) {
        return x[n.state];
    }
    if (n.input >= 0) {
        return u[n.input];
    }
    return 0.0;
}

LinearNetwork assemble_linear_network(const NetworkTopology& topo) {
    LinearNetwork net;
    const std::size_t nbus = topo.buses.size();
    std::vector<std::array<NodeBuild, 3>> nodes(nbus);

    auto bus_of = [&](const std::string& name, const std::string& element) {
        const int b = topo.bus_index(name);
        if (b < 0) {
            throw AssemblyError("element '" + element + "' references unknown bus '" + name + "'");
        }
        return b;
    };
    auto phases_of = [&](int b) { return topo.buses[static_cast<std::size_t>(b)].phases; };

    // Inputs: sources first, then machines.
    net.source_inputs.assign(topo.sources.size(), {-1, -1, -1});
    for (std::size_t s = 0; s < topo.sources.size(); ++s) {
        const auto& src = topo.sources[s];
        const int b = bus_of(src.bus, src.name);
        for (int ph = 0; ph < phases_of(b); ++ph) {
            const int col = static_cast<int>(net.inputs.size());
            net.inputs.push_back({InputKind::source, static_cast<int>(s), ph});
            net.input_names.push_back("src:" + src.name + ":" + phase_name(ph));
            net.source_inputs[s][static_cast<std::size_t>(ph)] = col;
            if (src.kind == SourceKind::voltage) {
                auto& node = nodes[static_cast<std::size_t>(b)][static_cast<std::size_t>(ph)];
                if (node.vsource >= 0) {
                    throw AssemblyError("bus '" + src.bus + "' has more than one voltage source");
                }
                node.vsource = col;
            }
        }
    }
    net.machine_inputs.assign(topo.machines.size(), {-1, -1, -1});
    net.machine_voltage_states.assign(topo.machines.size(), {-1, -1, -1});
    for (std::size_t m = 0; m < topo.machines.size(); ++m) {
        const auto& tap = topo.machines[m];
        if (!tap.in_service) {
            continue;
        }
        const int b = bus_of(tap.bus, tap.name);
        if (phases_of(b) != 3) {
            throw AssemblyError("machine '" + tap.name + "' must attach to a three-phase bus");
        }
        for (int ph = 0; ph < 3; ++ph) {
            const int col = static_cast<int>(net.inputs.size());
            net.inputs.push_back({InputKind::machine, static_cast<int>(m), ph});
            net.input_names.push_back("gen:" + tap.name + ":" + phase_name(ph));
            net.machine_inputs[m][static_cast<std::size_t>(ph)] = col;
            nodes[static_cast<std::size_t>(b)][static_cast<std::size_t>(ph)].has_machine = true;
        }
    }

    // Capacitance and inductor incidence.
    std::vector<const Branch*> inductive;
    for (const auto& br : topo.branches) {
        if (!br.in_service) {
            continue;
        }
        const int a = bus_of(br.from, br.name);
        int b = -1;
        if (!br.is_shunt()) {
            b = bus_of(br.to, br.name);
            if (phases_of(a) != phases_of(b)) {
                throw AssemblyError("branch '" + br.name + "' joins buses with different phase counts");
            }
            if (a == b) {
                throw AssemblyError("branch '" + br.name + "' starts and ends at the same bus");
            }
        }
        for (int ph = 0; ph < phases_of(a); ++ph) {
            auto& na = nodes[static_cast<std::size_t>(a)][static_cast<std::size_t>(ph)];
            switch (br.kind) {
                case BranchKind::shunt_c:
                    na.cap += br.c;
                    break;
                case BranchKind::pi_line:
                    na.cap += 0.5 * br.c;
                    nodes[static_cast<std::size_t>(b)][static_cast<std::size_t>(ph)].cap += 0.5 * br.c;
                    break;
                default:
                    break;
            }
            if (br.has_inductor()) {
                na.touches_inductor = true;
                if (b >= 0) {
                    nodes[static_cast<std::size_t>(b)][static_cast<std::size_t>(ph)].touches_inductor = true;
                }
            }
        }
        if (br.has_inductor()) {
            inductive.push_back(&br);
        }
    }

    // Node states.
    net.bus_nodes.assign(nbus, {});
    std::vector<double> state_cap;
    for (std::size_t b = 0; b < nbus; ++b) {
        const auto& bus = topo.buses[b];
        for (int ph = 0; ph < bus.phases; ++ph) {
            const auto& nb = nodes[b][static_cast<std::size_t>(ph)];
            NodeRef& ref = net.bus_nodes[b][static_cast<std::size_t>(ph)];
            if (nb.vsource >= 0) {
                if (nb.has_machine) {
                    throw AssemblyError("machine bus '" + bus.name + "' cannot also hold a voltage source");
                }
                ref.input = nb.vsource;
                continue;
            }
            if (nb.cap > 0.0) {
                ref.state = static_cast<int>(state_cap.size());
                state_cap.push_back(nb.cap);
                net.state_names.push_back("v:" + bus.name + ":" + phase_name(ph));
                continue;
            }
            if (nb.has_machine) {
                throw AssemblyError("machine bus '" + bus.name + "' has no shunt capacitance");
            }
            if (nb.touches_inductor) {
                throw AssemblyError("bus '" + bus.name +
                                    "' joins inductive branches but has no capacitance or voltage source");
            }
        }
    }
    const int n_nodes = static_cast<int>(state_cap.size());

    // Inductor states.
    struct LState {
        const Branch* br;
        int phase;
        int a;
        int b;
    };
    std::vector<LState> lstates;
    for (const Branch* br : inductive) {
        const int a = topo.bus_index(br->from);
        const int b = br->is_shunt() ? -1 : topo.bus_index(br->to);
        if (!(br->l > 0.0)) {
            throw AssemblyError("branch '" + br->name + "' needs a positive inductance");
        }
        for (int ph = 0; ph < phases_of(a); ++ph) {
            lstates.push_back({br, ph, a, b});
            net.state_names.push_back("i:" + br->name + ":" + phase_name(ph));
        }
    }

    const int n = n_nodes + static_cast<int>(lstates.size());
    net.A = Eigen::MatrixXd::Zero(n, n);
    net.B = Eigen::MatrixXd::Zero(n, static_cast<int>(net.inputs.size()));

    for (std::size_t j = 0; j < lstates.size(); ++j) {
        const auto& ls = lstates[j];
        const int row = n_nodes + static_cast<int>(j);
        double r = ls.br->r;
        double l = ls.br->l;
        if (ls.br->kind == BranchKind::transformer) {
            r *= ls.br->ratio * ls.br->ratio;
            l *= ls.br->ratio * ls.br->ratio;
        }
        net.A(row, row) = -r / l;
        auto stamp_terminal = [&](int bus, double sign) {
            if (bus < 0) {
                return;
            }
            const NodeRef& ref = net.bus_nodes[static_cast<std::size_t>(bus)][static_cast<std::size_t>(ls.phase)];
            if (ref.state >= 0) {
                net.A(row, ref.state) += sign / l;
                // KCL: current leaves the from-node and enters the to-node.
                net.A(ref.state, row) -= sign / state_cap[static_cast<std::size_t>(ref.state)];
            } else if (ref.input >= 0) {
                net.B(row, ref.input) += sign / l;
            }
        };
        stamp_terminal(ls.a, 1.0);
        stamp_terminal(ls.b, -1.0);
    }

    for (std::size_t col = 0; col < net.inputs.size(); ++col) {
        const auto& slot = net.inputs[col];
        std::string bus_name;
        if (slot.kind == InputKind::source) {
            const auto& src = topo.sources[static_cast<std::size_t>(slot.owner)];
            if (src.kind != SourceKind::current) {
                continue;
            }
            bus_name = src.bus;
        } else {
            bus_name = topo.machines[static_cast<std::size_t>(slot.owner)].bus;
        }
        const int b = topo.bus_index(bus_name);
        const NodeRef& ref = net.bus_nodes[static_cast<std::size_t>(b)][static_cast<std::size_t>(slot.phase)];
        if (ref.state < 0) {
            throw AssemblyError("current injection at bus '" + bus_name + "' needs a capacitive node");
        }
        net.B(ref.state, static_cast<int>(col)) += 1.0 / state_cap[static_cast<std::size_t>(ref.state)];
        if (slot.kind == InputKind::machine) {
            net.machine_voltage_states[static_cast<std::size_t>(slot.owner)][static_cast<std::size_t>(slot.phase)] =
                ref.state;
        }
    }

    for (const auto& f : topo.faults) {
        const int b = topo.bus_index(f.bus);
        if (b < 0) {
            throw AssemblyError("fault references unknown bus '" + f.bus + "'");
        }
        for (int ph = 0; ph < phases_of(b); ++ph) {
            const NodeRef& ref = net.bus_nodes[static_cast<std::size_t>(b)][static_cast<std::size_t>(ph)];
            if (ref.state < 0) {
                throw AssemblyError("fault at bus '" + f.bus + "' needs a capacitive node");
            }
            net.A(ref.state, ref.state) -= 1.0 / (f.r * state_cap[static_cast<std::size_t>(ref.state)]);
        }
    }

    for (int i = 0; i < n; ++i) {
        net.state_lookup_.emplace(net.state_names[static_cast<std::size_t>(i)], i);
    }
    return net;
}

void network_order_step(const LinearNetwork& net, Eigen::MatrixXd& X, const Eigen::MatrixXd& U, int k) {
    X.col(k + 1).noalias() = net.A * X.col(k);
    if (net.n_inputs() > 0) {
        X.col(k + 1).noalias() += net.B * U.col(k);
    }
    X.col(k + 1) /= static_cast<double>(k + 1);
}

Eigen::VectorXd remap_states(const LinearNetwork& from, const Eigen::VectorXd& x, const LinearNetwork& to) {
    Eigen::VectorXd out = Eigen::VectorXd::Zero(to.n_states());
    for (int i = 0; i < to.n_states(); ++i) {
        const int j = from.state_index(to.state_names[static_cast<std::size_t>(i)]);
        if (j >= 0) {
            out[i] = x[j];
        }
    }
    return out;
}

double source_value(const Source& s, int phase, double t) noexcept {
    const double w = 2.0 * std::numbers::pi * s.frequency_hz;
    return s.magnitude * std::cos(w * t + phase_angle(s, phase));
}

void source_coefficients(const Source& s, int phase, double t0, std::span<double> out) noexcept {
    const double w = 2.0 * std::numbers::pi * s.frequency_hz;
    const double arg = w * t0 + phase_angle(s, phase);
    const double c = std::cos(arg);
    const double sn = std::sin(arg);
    // k-th derivative of cos is cos(arg + k pi/2): c, -s, -c, s, ...
    const double cycle[4] = {c, -sn, -c, sn};
    double scale = s.magnitude;
    for (std::size_t k = 0; k < out.size(); ++k) {
        if (k > 0) {
            scale *= w / static_cast<double>(k);
        }
        out[k] = scale * cycle[k % 4];
    }
}

void fill_source_inputs(const LinearNetwork& net, const NetworkTopology& topo, double t0, Eigen::MatrixXd& U) {
    std::vector<double> buf(static_cast<std::size_t>(U.cols()));
    for (std::size_t col = 0; col < net.inputs.size(); ++col) {
        const auto& slot = net.inputs[col];
        if (slot.kind != InputKind::source) {
            continue;
        }
        source_coefficients(topo.sources[static_cast<std::size_t>(slot.owner)], slot.phase, t0, buf);
        for (std::size_t k = 0; k < buf.size(); ++k) {
            U(static_cast<Eigen::Index>(col), static_cast<Eigen::Index>(k)) = buf[k];
        }
    }
}

void source_input_values(const LinearNetwork& net, const NetworkTopology& topo, double t, Eigen::VectorXd& u) {
    for (std::size_t col = 0; col < net.inputs.size(); ++col) {
        const auto& slot = net.inputs[col];
        if (slot.kind == InputKind::source) {
            u[static_cast<Eigen::Index>(col)] =
                source_value(topo.sources[static_cast<std::size_t>(slot.owner)], slot.phase, t);
        }
    }
}

PhasorSolution solve_phasor_steady_state(const LinearNetwork& net, const NetworkTopology& topo,
                                         const std::vector<std::complex<double>>& machine_currents) {
    using cd = std::complex<double>;
    const double w0 = 2.0 * std::numbers::pi * topo.frequency_hz;
    PhasorSolution sol;
    sol.U = Eigen::VectorXcd::Zero(net.n_inputs());
    for (std::size_t col = 0; col < net.inputs.size(); ++col) {
        const auto& slot = net.inputs[col];
        if (slot.kind == InputKind::source) {
            const auto& src = topo.sources[static_cast<std::size_t>(slot.owner)];
            if (src.frequency_hz != topo.frequency_hz) {
                throw InitializationError("phasor initialization needs source '" + src.name +
                                          "' at the system frequency");
            }
            sol.U[static_cast<Eigen::Index>(col)] = std::polar(src.magnitude, phase_angle(src, slot.phase));
        } else {
            const auto m = static_cast<std::size_t>(slot.owner);
            const cd ia = m < machine_currents.size() ? machine_currents[m] : cd{};
            sol.U[static_cast<Eigen::Index>(col)] = ia * std::polar(1.0, -kTwoThirdsPi * slot.phase);
        }
    }
    const int n = net.n_states();
    Eigen::MatrixXcd M = -net.A.cast<cd>();
    M.diagonal().array() += cd(0.0, w0);
    Eigen::FullPivLU<Eigen::MatrixXcd> lu(M);
    if (n > 0 && !lu.isInvertible()) {
        throw InitializationError("phasor system is singular (undamped resonance at the system frequency)");
    }
    sol.X = n > 0 ? Eigen::VectorXcd(lu.solve(net.B.cast<cd>() * sol.U)) : Eigen::VectorXcd(0);
    return sol;
}

std::complex<double> bus_phasor(const LinearNetwork& net, const PhasorSolution& sol, int bus) {
    const NodeRef& ref = net.bus_nodes[static_cast<std::size_t>(bus)][0];
    if (ref.state >= 0) {
        return sol.X[ref.state];
    }
    if (ref.input >= 0) {
        return sol.U[ref.input];
    }
    return {};
}

}  // namespace sasemt::network
