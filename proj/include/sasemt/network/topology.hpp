#pragma once

// =============================================================================
// Declarative network description
// =============================================================================
// Buses carry one or three phases. Every branch acts phase by phase between
// buses with the same phase count; shunt elements have an empty `to`.
// Element values are per phase, in the unit system of the case.
// =============================================================================

#include <optional>
#include <string>
#include <vector>

namespace sasemt::network {

enum class BranchKind { series_rl, shunt_c, shunt_rl, pi_line, transformer };

[[nodiscard]] const char* to_string(BranchKind k) noexcept;
[[nodiscard]] std::optional<BranchKind> parse_branch_kind(const std::string& s) noexcept;

struct Bus {
    std::string name;
    int phases = 3;

    bool operator==(const Bus&) const = default;
};

struct Branch {
    std::string name;
    BranchKind kind = BranchKind::series_rl;
    std::string from;
    std::string to;  ///< empty for shunt elements
    double r = 0.0;
    double l = 0.0;
    double c = 0.0;      ///< shunt_c value, or total line charging for pi_line
    double ratio = 1.0;  ///< transformer off-nominal ratio
    bool in_service = true;

    [[nodiscard]] bool is_shunt() const noexcept {
        return kind == BranchKind::shunt_c || kind == BranchKind::shunt_rl;
    }
    [[nodiscard]] bool has_inductor() const noexcept { return kind != BranchKind::shunt_c; }

    bool operator==(const Branch&) const = default;
};

enum class SourceKind { voltage, current };

/// Balanced sinusoidal source x_p(t) = magnitude cos(2 pi f t + angle - p 2pi/3).
/// frequency_hz = 0 gives a constant source.
struct Source {
    std::string name;
    std::string bus;
    SourceKind kind = SourceKind::voltage;
    double magnitude = 1.0;
    double angle_deg = 0.0;
    double frequency_hz = 60.0;

    bool operator==(const Source&) const = default;
};

/// Generator attachment point; the machine model itself lives elsewhere.
struct MachineTap {
    std::string name;
    std::string bus;
    bool in_service = true;

    bool operator==(const MachineTap&) const = default;
};

struct Fault {
    std::string bus;
    double r = 1e-4;

    bool operator==(const Fault&) const = default;
};

struct NetworkTopology {
    double frequency_hz = 60.0;
    std::vector<Bus> buses;
    std::vector<Branch> branches;
    std::vector<Source> sources;
    std::vector<MachineTap> machines;
    std::vector<Fault> faults;  ///< active faults

    [[nodiscard]] const Bus* find_bus(const std::string& name) const;
    [[nodiscard]] int bus_index(const std::string& name) const;
    [[nodiscard]] int branch_index(const std::string& name) const;
    [[nodiscard]] int machine_index(const std::string& name) const;

    bool operator==(const NetworkTopology&) const = default;
};

// -----------------------------------------------------------------------------
// Events
// -----------------------------------------------------------------------------

enum class EventKind { fault_on, fault_off, trip_branch, trip_load, trip_generator };

[[nodiscard]] const char* to_string(EventKind k) noexcept;
[[nodiscard]] std::optional<EventKind> parse_event_kind(const std::string& s) noexcept;

struct Event {
    EventKind kind = EventKind::fault_on;
    double time = 0.0;
    std::string target;    ///< bus for faults, branch or machine name for trips
    double r_fault = 1e-4;

    bool operator==(const Event&) const = default;
};

/// Topology after the event. Throws CaseError for unknown targets or events
/// that make no sense in the current state (clearing a fault that is not on).
[[nodiscard]] NetworkTopology apply_event(const NetworkTopology& topo, const Event& ev);

/// Number of electrically connected groups among buses that carry at least
/// one in-service element.
[[nodiscard]] int count_islands(const NetworkTopology& topo);

}  // namespace sasemt::network
