#pragma once

// =============================================================================
// Linear state-space network  dx/dt = A x + B u
// =============================================================================
// States are capacitor node voltages (one per bus phase carrying capacitance
// and no voltage source) followed by inductor branch currents. Capacitance
// from shunt_c elements and the halves of Pi lines is merged per node.
// Inputs are source phases and machine stator currents, the latter entering
// their bus node with generator sign (current out of the machine flows into
// the node).
//
// Series coefficients of x and u are kept as n x (N+1) matrices, one column
// per order.
// =============================================================================

#include <array>
#include <span>
#include <complex>
#include <string>
#include <unordered_map>
#include <vector>

#include <Eigen/Dense>

#include "sasemt/network/topology.hpp"

namespace sasemt::network {

enum class InputKind { source, machine };

struct InputSlot {
    InputKind kind = InputKind::source;
    int owner = 0;  ///< index into topology sources or machines
    int phase = 0;
};

/// How a bus phase voltage is obtained: from a state, from a voltage-source
/// input, or neither (phase absent or unconnected node).
struct NodeRef {
    int state = -1;
    int input = -1;
};

class LinearNetwork {
public:
    Eigen::MatrixXd A;
    Eigen::MatrixXd B;
    std::vector<std::string> state_names;  ///< "v:<bus>:<phase>" or "i:<branch>:<phase>"
    std::vector<std::string> input_names;  ///< "src:<name>:<phase>" or "gen:<name>:<phase>"
    std::vector<InputSlot> inputs;
    std::vector<std::array<NodeRef, 3>> bus_nodes;            ///< per topology bus
    std::vector<std::array<int, 3>> machine_inputs;           ///< per machine tap, -1 when out
    std::vector<std::array<int, 3>> machine_voltage_states;   ///< per machine tap, -1 when out
    std::vector<std::array<int, 3>> source_inputs;            ///< per source

    [[nodiscard]] int n_states() const noexcept { return static_cast<int>(A.rows()); }
    [[nodiscard]] int n_inputs() const noexcept { return static_cast<int>(B.cols()); }

    /// -1 when absent.
    [[nodiscard]] int state_index(const std::string& name) const;

    /// Bus phase voltage from state and input vectors (0 for absent nodes).
    [[nodiscard]] double bus_voltage(int bus, int phase, const Eigen::Ref<const Eigen::VectorXd>& x,
                                     const Eigen::Ref<const Eigen::VectorXd>& u) const;

private:
    friend LinearNetwork assemble_linear_network(const NetworkTopology& topo);
    std::unordered_map<std::string, int> state_lookup_;
};

[[nodiscard]] const char* phase_name(int phase) noexcept;

/// Stamp the topology. Throws AssemblyError naming the offending element.
[[nodiscard]] LinearNetwork assemble_linear_network(const NetworkTopology& topo);

/// x[k+1] = (A x[k] + B u[k]) / (k+1), written into column k+1 of X.
void network_order_step(const LinearNetwork& net, Eigen::MatrixXd& X, const Eigen::MatrixXd& U, int k);

/// Carry state values from an old network to a new one by name. States with
/// no counterpart start at zero.
[[nodiscard]] Eigen::VectorXd remap_states(const LinearNetwork& from, const Eigen::VectorXd& x,
                                           const LinearNetwork& to);

// -----------------------------------------------------------------------------
// Sources
// -----------------------------------------------------------------------------

/// Instantaneous value of phase `phase` of a source.
[[nodiscard]] double source_value(const Source& s, int phase, double t) noexcept;

/// Taylor coefficients of a source phase about t0, written to out[0..order].
void source_coefficients(const Source& s, int phase, double t0, std::span<double> out) noexcept;

/// Fill the source rows of U (n_inputs x (order+1)) about t0. Machine rows are
/// left untouched.
void fill_source_inputs(const LinearNetwork& net, const NetworkTopology& topo, double t0, Eigen::MatrixXd& U);

/// Source rows of u at time t.
void source_input_values(const LinearNetwork& net, const NetworkTopology& topo, double t, Eigen::VectorXd& u);

// -----------------------------------------------------------------------------
// Phasor steady state
// -----------------------------------------------------------------------------

struct PhasorSolution {
    Eigen::VectorXcd X;  ///< state phasors
    Eigen::VectorXcd U;  ///< input phasors
};

/// Solve (j omega0 I - A) X = B U with U from the sources and the given machine
/// phase-a current phasors (balanced sets are formed internally). Throws
/// InitializationError when a source is not at the system frequency or the
/// system is singular.
[[nodiscard]] PhasorSolution solve_phasor_steady_state(const LinearNetwork& net, const NetworkTopology& topo,
                                                       const std::vector<std::complex<double>>& machine_currents);

/// Phase-a bus voltage phasor from a phasor solution.
[[nodiscard]] std::complex<double> bus_phasor(const LinearNetwork& net, const PhasorSolution& sol, int bus);

}  // namespace sasemt::network
