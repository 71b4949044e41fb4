#pragma once

// =============================================================================
// Case files
// =============================================================================
// A case is one JSON document (schema_version 1). Element values are kept
// exactly as written so that load -> serialize -> load is the identity;
// conversion to internal units happens in build_system().
//
// Per-unit cases give branch reactance `x` and susceptance `b` and machine
// reactances X_* at the system frequency. SI cases give `l` in henries and
// `c` in farads and may not contain machines.
// =============================================================================

#include <map>
#include <optional>
#include <string>
#include <vector>

#include "sasemt/machine/params.hpp"
#include "sasemt/model/system.hpp"
#include "sasemt/network/topology.hpp"
#include "sasemt/solver/config.hpp"

namespace sasemt::io {

inline constexpr int kSchemaVersion = 1;

enum class UnitSystem { pu, si };

struct MachineSpec {
    std::string name;
    std::string bus;
    machine::MachineParams params;  ///< reactances in the inductance fields, as written
    std::optional<machine::GovParams> gov;
    std::optional<machine::ExcParams> exc;
    double p = 0.0;
    double q = 0.0;
    double v = 1.0;
    double angle_deg = 0.0;

    bool operator==(const MachineSpec&) const = default;
};

struct InitialState {
    enum class Mode { phasor, explicit_values };
    Mode mode = Mode::phasor;
    std::map<std::string, double> values;

    bool operator==(const InitialState&) const = default;
};

struct CaseConfig {
    int schema_version = kSchemaVersion;
    std::string name;
    std::string description;
    UnitSystem units = UnitSystem::pu;
    network::NetworkTopology topology;  ///< values as written; machines are attached later
    std::vector<MachineSpec> machines;
    std::vector<network::Event> events;
    InitialState initial;
    solver::SolverConfig solver;
    model::IslandingPolicy islanding = model::IslandingPolicy::error;

    bool operator==(const CaseConfig&) const = default;
};

/// Parse and validate. Throws CaseError with line/column for malformed JSON
/// and with the element name for rule violations.
[[nodiscard]] CaseConfig load_case(const std::string& path);
[[nodiscard]] CaseConfig parse_case(const std::string& text);

/// Canonical JSON text (two-space indent, fixed key order).
[[nodiscard]] std::string serialize_case(const CaseConfig& c);

/// Check every invariant; throws CaseError naming the element and rule.
void validate_case(const CaseConfig& c);

/// FNV-1a 64-bit hash of the canonical serialization, as 16 hex digits.
[[nodiscard]] std::string case_hash(const CaseConfig& c);

struct BuiltSystem {
    model::SystemModel model;
    model::SystemState initial;
};

/// Convert to internal units, assemble and initialize.
[[nodiscard]] BuiltSystem build_system(const CaseConfig& c);

/// Same as build_system but with every event removed.
[[nodiscard]] BuiltSystem build_system_without_events(const CaseConfig& c);

}  // namespace sasemt::io
