#include "sasemt/io/case.hpp"

#include <cmath>
#include <cstdint>
#include <cstdio>
#include <fstream>
#include <map>
#include <numbers>
#include <set>
#include <sstream>

#include <json.hpp>

#include "sasemt/error.hpp"
#include "sasemt/model/trajectory.hpp"

namespace sasemt::io {

using json = nlohmann::ordered_json;
using machine::ExcParams;
using machine::GovParams;
using machine::MachineParams;
using network::BranchKind;

namespace {

// -----------------------------------------------------------------------------
// JSON helpers
// -----------------------------------------------------------------------------

void check_keys(const json& j, std::initializer_list<const char*> allowed, const std::string& where) {
    if (!j.is_object()) {
        throw CaseError(where + ": expected an object");
    }
    for (const auto& [key, _] : j.items()) {
        bool ok = false;
        for (const char* a : allowed) {
            if (key == a) {
                ok = true;
                break;
            }
        }
        if (!ok) {
            throw CaseError(where + ": unknown field '" + key + "'");
        }
    }
}

const json& require(const json& j, const char* key, const std::string& where) {
    const auto it = j.find(key);
    if (it == j.end()) {
        throw CaseError(where + ": missing field '" + key + "'");
    }
    return *it;
}

double get_number(const json& j, const char* key, const std::string& where) {
    const json& v = require(j, key, where);
    if (!v.is_number()) {
        throw CaseError(where + ": field '" + key + "' must be a number");
    }
    const double d = v.get<double>();
    if (!std::isfinite(d)) {
        throw CaseError(where + ": field '" + key + "' must be finite");
    }
    return d;
}

double get_number(const json& j, const char* key, const std::string& where, double fallback) {
    return j.contains(key) ? get_number(j, key, where) : fallback;
}

int get_int(const json& j, const char* key, const std::string& where, int fallback) {
    if (!j.contains(key)) {
        return fallback;
    }
    const json& v = j.at(key);
    if (!v.is_number_integer()) {
        throw CaseError(where + ": field '" + key + "' must be an integer");
    }
    return v.get<int>();
}

bool get_bool(const json& j, const char* key, const std::string& where, bool fallback) {
    if (!j.contains(key)) {
        return fallback;
    }
    const json& v = j.at(key);
    if (!v.is_boolean()) {
        throw CaseError(where + ": field '" + key + "' must be true or false");
    }
    return v.get<bool>();
}

std::string get_string(const json& j, const char* key, const std::string& where) {
    const json& v = require(j, key, where);
    if (!v.is_string()) {
        throw CaseError(where + ": field '" + key + "' must be a string");
    }
    return v.get<std::string>();
}

std::string get_string(const json& j, const char* key, const std::string& where, const std::string& fallback) {
    return j.contains(key) ? get_string(j, key, where) : fallback;
}

const json& get_array(const json& j, const char* key, const std::string& where) {
    static const json kEmpty = json::array();
    const auto it = j.find(key);
    if (it == j.end()) {
        return kEmpty;
    }
    if (!it->is_array()) {
        throw CaseError(where + ": field '" + key + "' must be an array");
    }
    return *it;
}

// -----------------------------------------------------------------------------
// Element parsing
// -----------------------------------------------------------------------------

network::Bus parse_bus(const json& j, std::size_t i) {
    const std::string where = "buses[" + std::to_string(i) + "]";
    check_keys(j, {"name", "phases"}, where);
    network::Bus b;
    b.name = get_string(j, "name", where);
    b.phases = get_int(j, "phases", "bus '" + b.name + "'", 3);
    return b;
}

network::Branch parse_branch(const json& j, std::size_t i, UnitSystem units) {
    std::string where = "branches[" + std::to_string(i) + "]";
    const char* lkey = units == UnitSystem::pu ? "x" : "l";
    const char* ckey = units == UnitSystem::pu ? "b" : "c";
    check_keys(j, {"name", "type", "from", "to", "r", lkey, ckey, "ratio", "in_service"}, where);
    network::Branch br;
    br.name = get_string(j, "name", where);
    where = "branch '" + br.name + "'";
    const std::string type = get_string(j, "type", where);
    const auto kind = network::parse_branch_kind(type);
    if (!kind) {
        throw CaseError(where + ": unknown type '" + type + "'");
    }
    br.kind = *kind;
    br.from = get_string(j, "from", where);
    br.to = get_string(j, "to", where, "");
    br.r = get_number(j, "r", where, 0.0);
    br.l = get_number(j, lkey, where, 0.0);
    br.c = get_number(j, ckey, where, 0.0);
    br.ratio = get_number(j, "ratio", where, 1.0);
    br.in_service = get_bool(j, "in_service", where, true);
    return br;
}

network::Source parse_source(const json& j, std::size_t i, double f_sys) {
    std::string where = "sources[" + std::to_string(i) + "]";
    check_keys(j, {"name", "bus", "kind", "magnitude", "angle_deg", "frequency_hz"}, where);
    network::Source s;
    s.name = get_string(j, "name", where);
    where = "source '" + s.name + "'";
    s.bus = get_string(j, "bus", where);
    const std::string kind = get_string(j, "kind", where, "voltage");
    if (kind == "voltage") {
        s.kind = network::SourceKind::voltage;
    } else if (kind == "current") {
        s.kind = network::SourceKind::current;
    } else {
        throw CaseError(where + ": kind must be 'voltage' or 'current'");
    }
    s.magnitude = get_number(j, "magnitude", where);
    s.angle_deg = get_number(j, "angle_deg", where, 0.0);
    s.frequency_hz = get_number(j, "frequency_hz", where, f_sys);
    return s;
}

MachineParams parse_machine_params(const json& j, const std::string& where, double f_sys) {
    check_keys(j, {"H", "D", "n_poles", "Rs", "r_fd", "r_1d", "r_1q", "r_2q", "X_fd", "X_1d", "X_1q", "X_2q", "X_ad",
                   "X_aq", "X_ls", "X_0"},
               where);
    MachineParams p;
    p.omega0 = 2.0 * std::numbers::pi * f_sys;
    p.H = get_number(j, "H", where);
    p.D = get_number(j, "D", where, 0.0);
    p.n_poles = get_int(j, "n_poles", where, 2);
    p.Rs = get_number(j, "Rs", where);
    p.r_fd = get_number(j, "r_fd", where);
    p.r_1d = get_number(j, "r_1d", where);
    p.r_1q = get_number(j, "r_1q", where);
    p.r_2q = get_number(j, "r_2q", where);
    p.L_fd = get_number(j, "X_fd", where);
    p.L_1d = get_number(j, "X_1d", where);
    p.L_1q = get_number(j, "X_1q", where);
    p.L_2q = get_number(j, "X_2q", where);
    p.L_ad = get_number(j, "X_ad", where);
    p.L_aq = get_number(j, "X_aq", where);
    p.L_ls = get_number(j, "X_ls", where);
    p.L_0 = get_number(j, "X_0", where);
    return p;
}

GovParams parse_gov(const json& j, const std::string& where) {
    check_keys(j, {"R", "T1", "T2", "T3", "Dt", "P_max", "P_min"}, where);
    GovParams g;
    g.R_G = get_number(j, "R", where);
    g.T1 = get_number(j, "T1", where);
    g.T2 = get_number(j, "T2", where);
    g.T3 = get_number(j, "T3", where);
    g.D_t = get_number(j, "Dt", where, 0.0);
    g.P_max = get_number(j, "P_max", where);
    g.P_min = get_number(j, "P_min", where);
    return g;
}

ExcParams parse_exc(const json& j, const std::string& where) {
    check_keys(j, {"K", "T_E", "T_A", "T_B", "E_max", "E_min"}, where);
    ExcParams e;
    e.k_E = get_number(j, "K", where);
    e.T_E = get_number(j, "T_E", where);
    e.T_A = get_number(j, "T_A", where, 0.0);
    e.T_B = get_number(j, "T_B", where);
    e.E_max = get_number(j, "E_max", where);
    e.E_min = get_number(j, "E_min", where);
    return e;
}

MachineSpec parse_machine(const json& j, std::size_t i, double f_sys) {
    std::string where = "machines[" + std::to_string(i) + "]";
    check_keys(j, {"name", "bus", "params", "governor", "exciter", "operating_point"}, where);
    MachineSpec m;
    m.name = get_string(j, "name", where);
    where = "machine '" + m.name + "'";
    m.bus = get_string(j, "bus", where);
    m.params = parse_machine_params(require(j, "params", where), where + " params", f_sys);
    if (j.contains("governor") && !j.at("governor").is_null()) {
        m.gov = parse_gov(j.at("governor"), where + " governor");
    }
    if (j.contains("exciter") && !j.at("exciter").is_null()) {
        m.exc = parse_exc(j.at("exciter"), where + " exciter");
    }
    const json& op = require(j, "operating_point", where);
    check_keys(op, {"p", "q", "v", "angle_deg"}, where + " operating_point");
    m.p = get_number(op, "p", where);
    m.q = get_number(op, "q", where, 0.0);
    m.v = get_number(op, "v", where, 1.0);
    m.angle_deg = get_number(op, "angle_deg", where, 0.0);
    return m;
}

network::Event parse_event(const json& j, std::size_t i) {
    const std::string where = "events[" + std::to_string(i) + "]";
    check_keys(j, {"type", "time", "target", "r_fault"}, where);
    network::Event ev;
    const std::string type = get_string(j, "type", where);
    const auto kind = network::parse_event_kind(type);
    if (!kind) {
        throw CaseError(where + ": unknown event type '" + type + "'");
    }
    ev.kind = *kind;
    ev.time = get_number(j, "time", where);
    ev.target = get_string(j, "target", where);
    ev.r_fault = get_number(j, "r_fault", where, 1e-4);
    return ev;
}

void parse_solver(const json& j, solver::SolverConfig& s) {
    const std::string where = "solver";
    check_keys(j, {"order", "eps_imbalance", "dt_init", "dt_min", "dt_cap", "growth", "eps_switch", "switch_prescan",
                   "switch_detection", "t_end", "imbalance_mode", "stiffness"},
               where);
    s.order = get_int(j, "order", where, s.order);
    s.eps_imbalance = get_number(j, "eps_imbalance", where, s.eps_imbalance);
    s.dt_init = get_number(j, "dt_init", where, s.dt_init);
    s.dt_min = get_number(j, "dt_min", where, s.dt_min);
    s.dt_cap = get_number(j, "dt_cap", where, s.dt_cap);
    s.growth = get_number(j, "growth", where, s.growth);
    s.eps_switch = get_number(j, "eps_switch", where, s.eps_switch);
    s.switch_prescan = get_int(j, "switch_prescan", where, s.switch_prescan);
    s.switch_detection = get_bool(j, "switch_detection", where, s.switch_detection);
    s.t_end = get_number(j, "t_end", where, s.t_end);
    const std::string mode = get_string(j, "imbalance_mode", where, "network");
    if (mode == "network") {
        s.imbalance_mode = solver::ImbalanceMode::network;
    } else if (mode == "full") {
        s.imbalance_mode = solver::ImbalanceMode::full;
    } else {
        throw CaseError("solver: imbalance_mode must be 'network' or 'full'");
    }
    const std::string stiff = get_string(j, "stiffness", where, "abort");
    if (stiff == "abort") {
        s.stiffness = solver::StiffnessPolicy::abort;
    } else if (stiff == "force") {
        s.stiffness = solver::StiffnessPolicy::force;
    } else {
        throw CaseError("solver: stiffness must be 'abort' or 'force'");
    }
}

CaseConfig from_json(const json& j) {
    check_keys(j, {"schema_version", "name", "description", "units", "frequency_hz", "buses", "branches", "sources",
                   "machines", "events", "initial_state", "solver", "output", "islanding"},
               "case");
    CaseConfig c;
    const json& ver = require(j, "schema_version", "case");
    if (!ver.is_number_integer() || ver.get<int>() != kSchemaVersion) {
        throw CaseError("case: unsupported schema_version " + ver.dump() + " (expected " +
                        std::to_string(kSchemaVersion) + ")");
    }
    c.name = get_string(j, "name", "case");
    c.description = get_string(j, "description", "case", "");
    const std::string units = get_string(j, "units", "case", "pu");
    if (units == "pu") {
        c.units = UnitSystem::pu;
    } else if (units == "si") {
        c.units = UnitSystem::si;
    } else {
        throw CaseError("case: units must be 'pu' or 'si'");
    }
    c.topology.frequency_hz = get_number(j, "frequency_hz", "case", 60.0);
    const double f = c.topology.frequency_hz;

    const json& buses = get_array(j, "buses", "case");
    for (std::size_t i = 0; i < buses.size(); ++i) {
        c.topology.buses.push_back(parse_bus(buses[i], i));
    }
    const json& branches = get_array(j, "branches", "case");
    for (std::size_t i = 0; i < branches.size(); ++i) {
        c.topology.branches.push_back(parse_branch(branches[i], i, c.units));
    }
    const json& sources = get_array(j, "sources", "case");
    for (std::size_t i = 0; i < sources.size(); ++i) {
        c.topology.sources.push_back(parse_source(sources[i], i, f));
    }
    const json& machines = get_array(j, "machines", "case");
    for (std::size_t i = 0; i < machines.size(); ++i) {
        c.machines.push_back(parse_machine(machines[i], i, f));
    }
    const json& events = get_array(j, "events", "case");
    for (std::size_t i = 0; i < events.size(); ++i) {
        c.events.push_back(parse_event(events[i], i));
    }

    if (j.contains("initial_state")) {
        const json& init = j.at("initial_state");
        check_keys(init, {"mode", "values"}, "initial_state");
        const std::string mode = get_string(init, "mode", "initial_state", "phasor");
        if (mode == "phasor") {
            c.initial.mode = InitialState::Mode::phasor;
        } else if (mode == "explicit") {
            c.initial.mode = InitialState::Mode::explicit_values;
        } else {
            throw CaseError("initial_state: mode must be 'phasor' or 'explicit'");
        }
        if (init.contains("values")) {
            const json& vals = init.at("values");
            if (!vals.is_object()) {
                throw CaseError("initial_state: values must be an object");
            }
            for (const auto& [key, _] : vals.items()) {
                c.initial.values[key] = get_number(vals, key.c_str(), "initial_state values");
            }
        }
    }
    if (j.contains("solver")) {
        parse_solver(j.at("solver"), c.solver);
    }
    if (j.contains("output")) {
        const json& out = j.at("output");
        check_keys(out, {"states", "dense_interval"}, "output");
        if (out.contains("states")) {
            const json& st = out.at("states");
            if (st.is_string()) {
                c.solver.outputs = {st.get<std::string>()};
            } else if (st.is_array()) {
                c.solver.outputs.clear();
                for (const auto& s : st) {
                    if (!s.is_string()) {
                        throw CaseError("output: states must be strings");
                    }
                    c.solver.outputs.push_back(s.get<std::string>());
                }
            } else {
                throw CaseError("output: states must be \"all\" or a list of names");
            }
        }
        c.solver.dense_interval = get_number(out, "dense_interval", "output", 0.0);
    }
    const std::string isl = get_string(j, "islanding", "case", "error");
    if (isl == "error") {
        c.islanding = model::IslandingPolicy::error;
    } else if (isl == "warn") {
        c.islanding = model::IslandingPolicy::warn;
    } else {
        throw CaseError("case: islanding must be 'error' or 'warn'");
    }
    return c;
}

// -----------------------------------------------------------------------------
// Serialization
// -----------------------------------------------------------------------------

json to_json(const CaseConfig& c) {
    json j;
    j["schema_version"] = c.schema_version;
    j["name"] = c.name;
    if (!c.description.empty()) {
        j["description"] = c.description;
    }
    j["units"] = c.units == UnitSystem::pu ? "pu" : "si";
    j["frequency_hz"] = c.topology.frequency_hz;
    const bool pu = c.units == UnitSystem::pu;

    json buses = json::array();
    for (const auto& b : c.topology.buses) {
        buses.push_back({{"name", b.name}, {"phases", b.phases}});
    }
    j["buses"] = buses;

    json branches = json::array();
    for (const auto& br : c.topology.branches) {
        json e;
        e["name"] = br.name;
        e["type"] = network::to_string(br.kind);
        e["from"] = br.from;
        if (!br.to.empty()) {
            e["to"] = br.to;
        }
        e["r"] = br.r;
        e[pu ? "x" : "l"] = br.l;
        e[pu ? "b" : "c"] = br.c;
        if (br.kind == BranchKind::transformer) {
            e["ratio"] = br.ratio;
        }
        if (!br.in_service) {
            e["in_service"] = false;
        }
        branches.push_back(e);
    }
    j["branches"] = branches;

    json sources = json::array();
    for (const auto& s : c.topology.sources) {
        sources.push_back({{"name", s.name},
                           {"bus", s.bus},
                           {"kind", s.kind == network::SourceKind::voltage ? "voltage" : "current"},
                           {"magnitude", s.magnitude},
                           {"angle_deg", s.angle_deg},
                           {"frequency_hz", s.frequency_hz}});
    }
    j["sources"] = sources;

    json machines = json::array();
    for (const auto& m : c.machines) {
        const auto& p = m.params;
        json e;
        e["name"] = m.name;
        e["bus"] = m.bus;
        e["params"] = {{"H", p.H},       {"D", p.D},       {"n_poles", p.n_poles}, {"Rs", p.Rs},     {"r_fd", p.r_fd},
                       {"r_1d", p.r_1d}, {"r_1q", p.r_1q}, {"r_2q", p.r_2q},       {"X_fd", p.L_fd}, {"X_1d", p.L_1d},
                       {"X_1q", p.L_1q}, {"X_2q", p.L_2q}, {"X_ad", p.L_ad},       {"X_aq", p.L_aq}, {"X_ls", p.L_ls},
                       {"X_0", p.L_0}};
        if (m.gov) {
            const auto& g = *m.gov;
            e["governor"] = {{"R", g.R_G},   {"T1", g.T1},       {"T2", g.T2},      {"T3", g.T3},
                             {"Dt", g.D_t}, {"P_max", g.P_max}, {"P_min", g.P_min}};
        }
        if (m.exc) {
            const auto& x = *m.exc;
            e["exciter"] = {{"K", x.k_E},   {"T_E", x.T_E},     {"T_A", x.T_A},
                            {"T_B", x.T_B}, {"E_max", x.E_max}, {"E_min", x.E_min}};
        }
        e["operating_point"] = {{"p", m.p}, {"q", m.q}, {"v", m.v}, {"angle_deg", m.angle_deg}};
        machines.push_back(e);
    }
    j["machines"] = machines;

    json events = json::array();
    for (const auto& ev : c.events) {
        json e{{"type", network::to_string(ev.kind)}, {"time", ev.time}, {"target", ev.target}};
        if (ev.kind == network::EventKind::fault_on) {
            e["r_fault"] = ev.r_fault;
        }
        events.push_back(e);
    }
    j["events"] = events;

    json init;
    init["mode"] = c.initial.mode == InitialState::Mode::phasor ? "phasor" : "explicit";
    if (!c.initial.values.empty()) {
        json vals = json::object();
        for (const auto& [k, v] : c.initial.values) {
            vals[k] = v;
        }
        init["values"] = vals;
    }
    j["initial_state"] = init;

    const auto& s = c.solver;
    j["solver"] = {{"order", s.order},
                   {"eps_imbalance", s.eps_imbalance},
                   {"dt_init", s.dt_init},
                   {"dt_min", s.dt_min},
                   {"dt_cap", s.dt_cap},
                   {"growth", s.growth},
                   {"eps_switch", s.eps_switch},
                   {"switch_prescan", s.switch_prescan},
                   {"switch_detection", s.switch_detection},
                   {"t_end", s.t_end},
                   {"imbalance_mode", s.imbalance_mode == solver::ImbalanceMode::network ? "network" : "full"},
                   {"stiffness", s.stiffness == solver::StiffnessPolicy::abort ? "abort" : "force"}};
    j["output"] = {{"states", s.outputs}, {"dense_interval", s.dense_interval}};
    j["islanding"] = c.islanding == model::IslandingPolicy::error ? "error" : "warn";
    return j;
}

std::pair<std::size_t, std::size_t> line_column(const std::string& text, std::size_t byte) {
    std::size_t line = 1;
    std::size_t col = 1;
    for (std::size_t i = 0; i < text.size() && i + 1 < byte; ++i) {
        if (text[i] == '\n') {
            ++line;
            col = 1;
        } else {
            ++col;
        }
    }
    return {line, col};
}

bool has_shunt_capacitor(const network::NetworkTopology& t, const std::string& bus) {
    for (const auto& br : t.branches) {
        if (br.in_service && br.kind == BranchKind::shunt_c && br.from == bus && br.c > 0.0) {
            return true;
        }
    }
    return false;
}

template <class T>
void require_unique(const std::vector<T>& v, const char* what) {
    std::set<std::string> seen;
    for (const auto& e : v) {
        if (e.name.empty()) {
            throw CaseError(std::string(what) + " with an empty name");
        }
        if (!seen.insert(e.name).second) {
            throw CaseError(std::string("duplicate ") + what + " name '" + e.name + "'");
        }
    }
}

network::NetworkTopology internal_topology(const CaseConfig& c) {
    network::NetworkTopology t = c.topology;
    if (c.units == UnitSystem::pu) {
        const double w0 = 2.0 * std::numbers::pi * t.frequency_hz;
        for (auto& br : t.branches) {
            br.l /= w0;
            br.c /= w0;
        }
    }
    return t;
}

std::vector<model::MachineUnit> internal_machines(const CaseConfig& c) {
    std::vector<model::MachineUnit> out;
    const double w0 = 2.0 * std::numbers::pi * c.topology.frequency_hz;
    for (const auto& m : c.machines) {
        model::MachineUnit u;
        u.name = m.name;
        u.bus = m.bus;
        u.params = m.params;
        u.params.omega0 = w0;
        for (double* l : {&u.params.L_fd, &u.params.L_1d, &u.params.L_1q, &u.params.L_2q, &u.params.L_ad,
                          &u.params.L_aq, &u.params.L_ls, &u.params.L_0}) {
            *l /= w0;
        }
        u.gov = m.gov;
        if (u.gov) {
            u.gov->R_G *= w0;  // droop in rad/s per pu power
        }
        u.exc = m.exc;
        u.p = m.p;
        u.q = m.q;
        u.v = m.v;
        u.angle_deg = m.angle_deg;
        out.push_back(std::move(u));
    }
    return out;
}

BuiltSystem build(const CaseConfig& c, bool with_events) {
    validate_case(c);
    BuiltSystem b;
    try {
        b.model = model::make_system(internal_topology(c), internal_machines(c),
                                     with_events ? c.events : std::vector<network::Event>{}, c.islanding);
        b.initial = c.initial.mode == InitialState::Mode::phasor ? model::init_phasor(b.model)
                                                                  : model::init_explicit(b.model, c.initial.values);
        (void)model::resolve_columns(b.model, c.solver.outputs);
    } catch (const CaseError&) {
        throw;
    } catch (const Error& e) {
        throw CaseError(std::string("case '") + c.name + "': " + e.what());
    }
    return b;
}

}  // namespace

CaseConfig parse_case(const std::string& text) {
    json j;
    try {
        j = json::parse(text);
    } catch (const json::parse_error& e) {
        const auto [line, col] = line_column(text, e.byte);
        throw CaseError("JSON parse error at line " + std::to_string(line) + ", column " + std::to_string(col) + ": " +
                        e.what());
    }
    CaseConfig c;
    try {
        c = from_json(j);
    } catch (const json::exception& e) {
        throw CaseError(std::string("malformed case: ") + e.what());
    }
    validate_case(c);
    return c;
}

CaseConfig load_case(const std::string& path) {
    std::ifstream in(path, std::ios::binary);
    if (!in) {
        throw CaseError("cannot open case file '" + path + "'");
    }
    std::ostringstream ss;
    ss << in.rdbuf();
    return parse_case(ss.str());
}

std::string serialize_case(const CaseConfig& c) { return to_json(c).dump(2) + "\n"; }

void validate_case(const CaseConfig& c) {
    const auto& t = c.topology;
    if (c.schema_version != kSchemaVersion) {
        throw CaseError("unsupported schema_version " + std::to_string(c.schema_version));
    }
    if (!(t.frequency_hz > 0.0)) {
        throw CaseError("frequency_hz must be positive");
    }
    require_unique(t.buses, "bus");
    require_unique(t.branches, "branch");
    require_unique(t.sources, "source");
    require_unique(c.machines, "machine");
    for (const auto& b : t.buses) {
        if (b.phases != 1 && b.phases != 3) {
            throw CaseError("bus '" + b.name + "': phases must be 1 or 3");
        }
    }
    auto bus_of = [&](const std::string& name, const std::string& who) -> const network::Bus& {
        const auto* b = t.find_bus(name);
        if (b == nullptr) {
            throw CaseError(who + ": unknown bus '" + name + "'");
        }
        return *b;
    };
    for (const auto& br : t.branches) {
        const std::string who = "branch '" + br.name + "'";
        const auto& from = bus_of(br.from, who);
        if (br.is_shunt()) {
            if (!br.to.empty()) {
                throw CaseError(who + ": shunt elements have no 'to' bus");
            }
        } else {
            const auto& to = bus_of(br.to, who);
            if (to.phases != from.phases) {
                throw CaseError(who + ": joins buses with different phase counts");
            }
            if (br.to == br.from) {
                throw CaseError(who + ": starts and ends at the same bus");
            }
        }
        if (!(br.r >= 0.0)) {
            throw CaseError(who + ": resistance must be non-negative");
        }
        if (br.has_inductor() && !(br.l > 0.0)) {
            throw CaseError(who + ": inductive branches need a positive reactance");
        }
        if (br.kind == BranchKind::shunt_c && !(br.c > 0.0)) {
            throw CaseError(who + ": shunt capacitance must be positive");
        }
        if (br.kind == BranchKind::pi_line && !(br.c >= 0.0)) {
            throw CaseError(who + ": line charging must be non-negative");
        }
        if (!(br.ratio > 0.0)) {
            throw CaseError(who + ": transformer ratio must be positive");
        }
    }
    std::set<std::string> vsource_buses;
    for (const auto& s : t.sources) {
        const std::string who = "source '" + s.name + "'";
        bus_of(s.bus, who);
        if (!(s.frequency_hz >= 0.0)) {
            throw CaseError(who + ": frequency must be non-negative");
        }
        if (s.kind == network::SourceKind::voltage && !vsource_buses.insert(s.bus).second) {
            throw CaseError("bus '" + s.bus + "' has more than one voltage source");
        }
    }
    if (!c.machines.empty() && c.units != UnitSystem::pu) {
        throw CaseError("machines require a per-unit case");
    }
    for (const auto& m : c.machines) {
        const std::string who = "machine '" + m.name + "'";
        const auto& bus = bus_of(m.bus, who);
        if (bus.phases != 3) {
            throw CaseError(who + ": bus '" + m.bus + "' must have three phases");
        }
        if (!has_shunt_capacitor(t, m.bus)) {
            throw CaseError("generator bus '" + m.bus + "' has no shunt capacitor (machine '" + m.name + "')");
        }
        if (vsource_buses.count(m.bus) != 0) {
            throw CaseError("generator bus '" + m.bus + "' also holds a voltage source");
        }
        try {
            m.params.validate();
            if (m.gov) {
                m.gov->validate();
            }
            if (m.exc) {
                m.exc->validate();
            }
        } catch (const ParameterError& e) {
            throw CaseError(who + ": " + e.what());
        }
    }
    std::map<std::string, double> last_time;
    for (const auto& ev : c.events) {
        const std::string who = std::string("event ") + network::to_string(ev.kind) + " '" + ev.target + "'";
        if (!(ev.time >= 0.0)) {
            throw CaseError(who + ": time must be non-negative");
        }
        switch (ev.kind) {
            case network::EventKind::fault_on:
            case network::EventKind::fault_off:
                bus_of(ev.target, who);
                if (!(ev.r_fault > 0.0)) {
                    throw CaseError(who + ": fault resistance must be positive");
                }
                break;
            case network::EventKind::trip_branch:
            case network::EventKind::trip_load:
                if (t.branch_index(ev.target) < 0) {
                    throw CaseError(who + ": unknown branch");
                }
                break;
            case network::EventKind::trip_generator: {
                bool found = false;
                for (const auto& m : c.machines) {
                    found = found || m.name == ev.target;
                }
                if (!found) {
                    throw CaseError(who + ": unknown machine");
                }
                break;
            }
        }
        const auto it = last_time.find(ev.target);
        if (it != last_time.end() && !(ev.time > it->second)) {
            throw CaseError(who + ": event times must increase strictly per target");
        }
        last_time[ev.target] = ev.time;
    }
    if (c.initial.mode == InitialState::Mode::explicit_values && !c.machines.empty()) {
        throw CaseError("explicit initial state cannot be used with machines");
    }
    try {
        c.solver.validate();
    } catch (const ParameterError& e) {
        throw CaseError(std::string("solver: ") + e.what());
    }
    network::NetworkTopology with_taps = t;
    for (const auto& m : c.machines) {
        with_taps.machines.push_back({m.name, m.bus, true});
    }
    if (count_islands(with_taps) > 1) {
        throw CaseError("network is not connected");
    }
}

std::string case_hash(const CaseConfig& c) {
    const std::string s = serialize_case(c);
    std::uint64_t h = 14695981039346656037ULL;
    for (const unsigned char ch : s) {
        h ^= ch;
        h *= 1099511628211ULL;
    }
    char buf[17];
    std::snprintf(buf, sizeof buf, "%016llx", static_cast<unsigned long long>(h));
    return buf;
}

BuiltSystem build_system(const CaseConfig& c) { return build(c, true); }

BuiltSystem build_system_without_events(const CaseConfig& c) { return build(c, false); }

}  // namespace sasemt::io
