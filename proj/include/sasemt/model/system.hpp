#pragma once

// =============================================================================
// Assembled system: network plus machines, in internal units
// =============================================================================
// Inductances are pu-seconds (or henries), capacitances pu-seconds (or farads).
// A SystemModel is mutated only by events; simulations take it by value so a
// case can be rerun from scratch.
// =============================================================================

#include <map>
#include <optional>
#include <string>
#include <vector>

#include <Eigen/Dense>

#include "sasemt/machine/params.hpp"
#include "sasemt/machine/variables.hpp"
#include "sasemt/network/linear_network.hpp"
#include "sasemt/network/topology.hpp"

namespace sasemt::model {

struct MachineUnit {
    std::string name;
    std::string bus;
    machine::MachineParams params;
    std::optional<machine::GovParams> gov;
    std::optional<machine::ExcParams> exc;
    machine::VbrCoefficients coeffs;

    // Operating point used to build the initial injection.
    double p = 0.0;
    double q = 0.0;
    double v = 1.0;
    double angle_deg = 0.0;

    bool in_service = true;

    [[nodiscard]] const machine::GovParams* gov_ptr() const noexcept { return gov ? &*gov : nullptr; }
    [[nodiscard]] const machine::ExcParams* exc_ptr() const noexcept { return exc ? &*exc : nullptr; }
};

enum class IslandingPolicy { error, warn };

struct SystemModel {
    network::NetworkTopology topo;
    network::LinearNetwork net;
    std::vector<MachineUnit> machines;
    std::vector<network::Event> events;  ///< sorted by time (stable)
    IslandingPolicy islanding = IslandingPolicy::error;

    [[nodiscard]] double omega0() const noexcept;
    [[nodiscard]] int machine_index(const std::string& name) const;
};

struct SystemState {
    double t = 0.0;
    Eigen::VectorXd x2;
    std::vector<machine::DiffValues> x1;
    std::vector<machine::LimiterFlags> flags;

    bool operator==(const SystemState& o) const {
        return t == o.t && x2 == o.x2 && x1 == o.x1 && flags == o.flags;
    }
};

/// Validate parameters, attach machine taps and stamp the network.
[[nodiscard]] SystemModel make_system(network::NetworkTopology topo, std::vector<MachineUnit> machines,
                                      std::vector<network::Event> events,
                                      IslandingPolicy islanding = IslandingPolicy::error);

/// Balanced sinusoidal steady state. When the network holds a voltage source,
/// machine injections are iterated so that each machine delivers its (p, q)
/// at the solved terminal voltage; otherwise the case (v, angle) fixes the
/// injection once. Writes governor and exciter references into the model.
[[nodiscard]] SystemState init_phasor(SystemModel& model);

/// Network states given by name (others zero). Machines are not allowed.
[[nodiscard]] SystemState init_explicit(const SystemModel& model, const std::map<std::string, double>& values);

/// Apply one event to model and state. Returns a log line; islanding either
/// throws AssemblyError or is reported in the line, per the model policy.
std::string apply_model_event(SystemModel& model, SystemState& state, const network::Event& ev);

/// Machine terminal phase voltages from network states.
[[nodiscard]] std::array<double, 3> terminal_voltages(const SystemModel& model, std::size_t m,
                                                      const Eigen::Ref<const Eigen::VectorXd>& x2);

/// Input vector at time t for given states (sources plus machine currents).
void input_values(const SystemModel& model, double t, const std::vector<machine::DiffValues>& x1,
                  Eigen::VectorXd& u);

}  // namespace sasemt::model
