#include "sasemt/network/topology.hpp"

#include <algorithm>
#include <numeric>
#include <set>

#include "sasemt/error.hpp"

namespace sasemt::network {

namespace {

template <class T>
int find_by_name(const std::vector<T>& v, const std::string& name) {
    for (std::size_t i = 0; i < v.size(); ++i) {
        if (v[i].name == name) {
            return static_cast<int>(i);
        }
    }
    return -1;
}

constexpr std::pair<BranchKind, const char*> kBranchNames[] = {
    {BranchKind::series_rl, "series_rl"},
    {BranchKind::shunt_c, "shunt_c"},
    {BranchKind::shunt_rl, "shunt_rl"},
    {BranchKind::pi_line, "pi_line"},
    {BranchKind::transformer, "transformer"},
};

constexpr std::pair<EventKind, const char*> kEventNames[] = {
    {EventKind::fault_on, "fault_on"},
    {EventKind::fault_off, "fault_off"},
    {EventKind::trip_branch, "trip_branch"},
    {EventKind::trip_load, "trip_load"},
    {EventKind::trip_generator, "trip_generator"},
};

}  // namespace

const char* to_string(BranchKind k) noexcept {
    for (const auto& [kind, name] : kBranchNames) {
        if (kind == k) {
            return name;
        }
    }
    return "?";
}

std::optional<BranchKind> parse_branch_kind(const std::string& s) noexcept {
    for (const auto& [kind, name] : kBranchNames) {
        if (s == name) {
            return kind;
        }
    }
    return std::nullopt;
}

const char* to_string(EventKind k) noexcept {
    for (const auto& [kind, name] : kEventNames) {
        if (kind == k) {
            return name;
        }
    }
    return "?";
}

std::optional<EventKind> parse_event_kind(const std::string& s) noexcept {
    for (const auto& [kind, name] : kEventNames) {
        if (s == name) {
            return kind;
        }
    }
    return std::nullopt;
}

const Bus* NetworkTopology::find_bus(const std::string& name) const {
    const int i = bus_index(name);
    return i < 0 ? nullptr : &buses[static_cast<std::size_t>(i)];
}

int NetworkTopology::bus_index(const std::string& name) const { return find_by_name(buses, name); }
int NetworkTopology::branch_index(const std::string& name) const { return find_by_name(branches, name); }
int NetworkTopology::machine_index(const std::string& name) const { return find_by_name(machines, name); }

NetworkTopology apply_event(const NetworkTopology& topo, const Event& ev) {
    NetworkTopology out = topo;
    switch (ev.kind) {
        case EventKind::fault_on: {
            if (topo.bus_index(ev.target) < 0) {
                throw CaseError("fault_on references unknown bus '" + ev.target + "'");
            }
            const auto it = std::find_if(out.faults.begin(), out.faults.end(),
                                         [&](const Fault& f) { return f.bus == ev.target; });
            if (it != out.faults.end()) {
                throw CaseError("bus '" + ev.target + "' is already faulted");
            }
            if (!(ev.r_fault > 0.0)) {
                throw CaseError("fault resistance at bus '" + ev.target + "' must be positive");
            }
            out.faults.push_back({ev.target, ev.r_fault});
            break;
        }
        case EventKind::fault_off: {
            const auto it = std::find_if(out.faults.begin(), out.faults.end(),
                                         [&](const Fault& f) { return f.bus == ev.target; });
            if (it == out.faults.end()) {
                throw CaseError("fault_off at bus '" + ev.target + "' without an active fault");
            }
            out.faults.erase(it);
            break;
        }
        case EventKind::trip_branch:
        case EventKind::trip_load: {
            const int b = out.branch_index(ev.target);
            if (b < 0) {
                throw CaseError(std::string(to_string(ev.kind)) + " references unknown branch '" + ev.target + "'");
            }
            auto& br = out.branches[static_cast<std::size_t>(b)];
            if (ev.kind == EventKind::trip_load && br.kind != BranchKind::shunt_rl) {
                throw CaseError("trip_load target '" + ev.target + "' is not a shunt_rl load");
            }
            if (!br.in_service) {
                throw CaseError("branch '" + ev.target + "' is already out of service");
            }
            br.in_service = false;
            break;
        }
        case EventKind::trip_generator: {
            const int m = out.machine_index(ev.target);
            if (m < 0) {
                throw CaseError("trip_generator references unknown machine '" + ev.target + "'");
            }
            auto& tap = out.machines[static_cast<std::size_t>(m)];
            if (!tap.in_service) {
                throw CaseError("machine '" + ev.target + "' is already out of service");
            }
            tap.in_service = false;
            break;
        }
    }
    return out;
}

int count_islands(const NetworkTopology& topo) {
    const std::size_t n = topo.buses.size();
    std::vector<std::size_t> parent(n);
    std::iota(parent.begin(), parent.end(), std::size_t{0});
    auto find = [&](std::size_t i) {
        while (parent[i] != i) {
            parent[i] = parent[parent[i]];
            i = parent[i];
        }
        return i;
    };
    std::vector<bool> used(n, false);
    auto mark = [&](const std::string& bus) {
        const int i = topo.bus_index(bus);
        if (i >= 0) {
            used[static_cast<std::size_t>(i)] = true;
        }
        return i;
    };
    for (const auto& br : topo.branches) {
        if (!br.in_service) {
            continue;
        }
        const int a = mark(br.from);
        if (!br.is_shunt()) {
            const int b = mark(br.to);
            if (a >= 0 && b >= 0) {
                parent[find(static_cast<std::size_t>(a))] = find(static_cast<std::size_t>(b));
            }
        }
    }
    for (const auto& s : topo.sources) {
        mark(s.bus);
    }
    for (const auto& m : topo.machines) {
        if (m.in_service) {
            mark(m.bus);
        }
    }
    std::set<std::size_t> roots;
    for (std::size_t i = 0; i < n; ++i) {
        if (used[i]) {
            roots.insert(find(i));
        }
    }
    return static_cast<int>(roots.size());
}

}  // namespace sasemt::network
