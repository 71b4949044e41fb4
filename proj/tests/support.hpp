#pragma once

// Shared fixtures for the unit tests.

#include <cmath>
#include <numbers>
#include <string>

#include "sasemt/io/case.hpp"
#include "sasemt/machine/params.hpp"
#include "sasemt/model/system.hpp"
#include "sasemt/network/topology.hpp"

namespace sasemt::test {

inline constexpr double kOmega0 = 2.0 * std::numbers::pi * 60.0;

inline std::string case_path(const std::string& name) {
    return std::string(SASEMT_CASES_DIR) + "/" + name + ".json";
}

/// Round-rotor machine with the reactances used throughout the bundled cases,
/// converted to inductances (pu seconds).
inline machine::MachineParams typical_machine() {
    machine::MachineParams p;
    p.omega0 = kOmega0;
    p.H = 3.5;
    p.Rs = 0.003;
    p.r_fd = 0.0006;
    p.r_1d = 0.0284;
    p.r_1q = 0.00619;
    p.r_2q = 0.02368;
    p.L_fd = 0.165 / kOmega0;
    p.L_1d = 0.1713 / kOmega0;
    p.L_1q = 0.7252 / kOmega0;
    p.L_2q = 0.125 / kOmega0;
    p.L_ad = 1.66 / kOmega0;
    p.L_aq = 1.61 / kOmega0;
    p.L_ls = 0.15 / kOmega0;
    p.L_0 = 0.15 / kOmega0;
    return p;
}

inline machine::GovParams typical_governor() {
    machine::GovParams g;
    g.R_G = 0.05 * kOmega0;
    g.T1 = 0.5;
    g.T2 = 3.0;
    g.T3 = 10.0;
    g.P_max = 1.2;
    g.P_min = 0.0;
    return g;
}

inline machine::ExcParams typical_exciter() {
    machine::ExcParams e;
    e.k_E = 50.0;
    e.T_E = 0.05;
    e.T_A = 1.0;
    e.T_B = 10.0;
    e.E_max = 6.0;
    e.E_min = -4.0;
    return e;
}

inline network::Branch branch(const std::string& name, network::BranchKind kind, const std::string& from,
                              const std::string& to, double r, double l, double c) {
    network::Branch b;
    b.name = name;
    b.kind = kind;
    b.from = from;
    b.to = to;
    b.r = r;
    b.l = l;
    b.c = c;
    return b;
}

inline network::Source source(const std::string& name, const std::string& bus, network::SourceKind kind,
                              double magnitude, double frequency_hz = 60.0, double angle_deg = 0.0) {
    network::Source s;
    s.name = name;
    s.bus = bus;
    s.kind = kind;
    s.magnitude = magnitude;
    s.frequency_hz = frequency_hz;
    s.angle_deg = angle_deg;
    return s;
}

/// R-L branch between two dead sources: di/dt = -(R/L) i.
inline network::NetworkTopology decaying_rl(double r, double l) {
    network::NetworkTopology t;
    t.buses = {{"A", 1}, {"B", 1}};
    t.branches = {branch("RL", network::BranchKind::series_rl, "A", "B", r, l, 0)};
    t.sources = {source("VA", "A", network::SourceKind::voltage, 0.0),
                 source("VB", "B", network::SourceKind::voltage, 0.0)};
    return t;
}

/// Lossless parallel L-C tank on one single-phase bus.
inline network::NetworkTopology lc_tank(double l, double c) {
    network::NetworkTopology t;
    t.buses = {{"A", 1}};
    t.branches = {branch("C", network::BranchKind::shunt_c, "A", "", 0, 0, c),
                  branch("L", network::BranchKind::shunt_rl, "A", "", 0.0, l, 0)};
    return t;
}

/// Relative comparison with an absolute floor for values near zero.
inline bool close(double a, double b, double rel, double abs_floor = 1e-300) {
    return std::abs(a - b) <= std::max(rel * std::max(std::abs(a), std::abs(b)), abs_floor);
}

}  // namespace sasemt::test
