#include <doctest.h>

#include <cmath>
#include <complex>
#include <numbers>

#include "sasemt/error.hpp"
#include "sasemt/network/linear_network.hpp"
#include "sasemt/network/topology.hpp"
#include "support.hpp"

using namespace sasemt;
using namespace sasemt::network;

namespace {

Branch make_branch(const std::string& name, BranchKind kind, const std::string& from, const std::string& to,
                   double r, double l, double c) {
    Branch b;
    b.name = name;
    b.kind = kind;
    b.from = from;
    b.to = to;
    b.r = r;
    b.l = l;
    b.c = c;
    return b;
}

Source voltage_source(const std::string& name, const std::string& bus, double magnitude, double angle = 0.0) {
    Source s;
    s.name = name;
    s.bus = bus;
    s.kind = SourceKind::voltage;
    s.magnitude = magnitude;
    s.angle_deg = angle;
    return s;
}

/// Source S -- line -- bus M (shunt C) -- line -- bus N (shunt C) -- load.
NetworkTopology small_grid() {
    NetworkTopology t;
    t.buses = {{"S", 3}, {"M", 3}, {"N", 3}};
    t.branches = {make_branch("C_M", BranchKind::shunt_c, "M", "", 0, 0, 0.1 / test::kOmega0),
                  make_branch("C_N", BranchKind::shunt_c, "N", "", 0, 0, 0.1 / test::kOmega0),
                  make_branch("L1", BranchKind::pi_line, "S", "M", 0.01, 0.3 / test::kOmega0, 0.05 / test::kOmega0),
                  make_branch("L2", BranchKind::series_rl, "M", "N", 0.02, 0.2 / test::kOmega0, 0),
                  make_branch("LOAD", BranchKind::shunt_rl, "N", "", 1.0, 0.5 / test::kOmega0, 0)};
    t.sources = {voltage_source("GRID", "S", 1.0)};
    return t;
}

}  // namespace

TEST_CASE("series R-L between two ideal sources") {
    NetworkTopology t;
    t.buses = {{"A", 1}, {"B", 1}};
    t.branches = {make_branch("RL", BranchKind::series_rl, "A", "B", 2.0, 0.5, 0)};
    t.sources = {voltage_source("VA", "A", 1.0), voltage_source("VB", "B", 1.0)};
    const auto net = assemble_linear_network(t);
    REQUIRE(net.n_states() == 1);
    REQUIRE(net.n_inputs() == 2);
    CHECK(net.A(0, 0) == doctest::Approx(-4.0));
    CHECK(net.B(0, net.source_inputs[0][0]) == doctest::Approx(2.0));
    CHECK(net.B(0, net.source_inputs[1][0]) == doctest::Approx(-2.0));
    CHECK(net.state_names[0] == "i:RL:a");
}

TEST_CASE("three-phase Pi line between two generator buses") {
    NetworkTopology t;
    t.buses = {{"G1", 3}, {"G2", 3}};
    t.branches = {make_branch("LINE", BranchKind::pi_line, "G1", "G2", 0.01, 0.001, 0.0002)};
    t.machines = {{"M1", "G1", true}, {"M2", "G2", true}};
    const auto net = assemble_linear_network(t);
    int inductor_rows = 0;
    int capacitor_rows = 0;
    for (const auto& n : net.state_names) {
        inductor_rows += n.rfind("i:", 0) == 0 ? 1 : 0;
        capacitor_rows += n.rfind("v:", 0) == 0 ? 1 : 0;
    }
    CHECK(inductor_rows == 3);
    CHECK(capacitor_rows == 6);
    CHECK(net.n_inputs() == 6);
}

TEST_CASE("shunt capacitor driven by a constant injection") {
    NetworkTopology t;
    t.buses = {{"G", 3}};
    t.branches = {make_branch("C", BranchKind::shunt_c, "G", "", 0, 0, 1.0)};
    t.machines = {{"M", "G", true}};
    const auto net = assemble_linear_network(t);
    Eigen::MatrixXd X = Eigen::MatrixXd::Zero(net.n_states(), 3);
    Eigen::MatrixXd U = Eigen::MatrixXd::Zero(net.n_inputs(), 3);
    const double I = 0.37;
    for (int ph = 0; ph < 3; ++ph) {
        U(net.machine_inputs[0][static_cast<std::size_t>(ph)], 0) = I;
    }
    network_order_step(net, X, U, 0);
    for (int ph = 0; ph < 3; ++ph) {
        CHECK(X(net.machine_voltage_states[0][static_cast<std::size_t>(ph)], 1) == doctest::Approx(I));
    }
}

TEST_CASE("undriven L-C pair follows the cosine") {
    NetworkTopology t;
    t.buses = {{"A", 1}};
    t.branches = {make_branch("C", BranchKind::shunt_c, "A", "", 0, 0, 1.0),
                  make_branch("L", BranchKind::shunt_rl, "A", "", 0.0, 1.0, 0)};
    const auto net = assemble_linear_network(t);
    constexpr int kN = 12;
    Eigen::MatrixXd X = Eigen::MatrixXd::Zero(net.n_states(), kN + 1);
    const Eigen::MatrixXd U(0, kN + 1);
    const int v = net.state_index("v:A:a");
    X(v, 0) = 1.0;
    for (int k = 0; k < kN; ++k) {
        network_order_step(net, X, U, k);
    }
    double fact = 1.0;
    for (int k = 0; k <= kN; ++k) {
        if (k > 0) {
            fact *= k;
        }
        const double expected = std::cos(k * std::numbers::pi / 2.0) / fact;
        CHECK(std::abs(X(v, k) - expected) < 1e-15);
    }

    SUBCASE("zero state and zero input stay zero") {
        Eigen::MatrixXd Z = Eigen::MatrixXd::Zero(net.n_states(), kN + 1);
        for (int k = 0; k < kN; ++k) {
            network_order_step(net, Z, U, k);
        }
        CHECK(Z.cwiseAbs().maxCoeff() == 0.0);
    }
}

TEST_CASE("source coefficients are the Taylor expansion of the sinusoid") {
    const auto s = voltage_source("V", "A", 1.3, 20.0);
    std::vector<double> c(8);
    const double t0 = 0.0123;
    source_coefficients(s, 1, t0, c);
    const double h = 1e-6;
    CHECK(c[0] == doctest::Approx(source_value(s, 1, t0)).epsilon(1e-15));
    CHECK(c[1] == doctest::Approx((source_value(s, 1, t0 + h) - source_value(s, 1, t0 - h)) / (2 * h)).epsilon(1e-6));
}

TEST_CASE("fault stamp and unstamp restore the matrices exactly") {
    auto t = small_grid();
    const auto base = assemble_linear_network(t);
    Event on;
    on.kind = EventKind::fault_on;
    on.target = "N";
    on.r_fault = 0.01;
    const auto faulted_topo = apply_event(t, on);
    const auto faulted = assemble_linear_network(faulted_topo);
    CHECK(faulted.A != base.A);
    const int v = faulted.state_index("v:N:a");
    const double c = 0.1 / test::kOmega0;
    CHECK(faulted.A(v, v) - base.A(v, v) == doctest::Approx(-1.0 / (0.01 * c)));

    Event off = on;
    off.kind = EventKind::fault_off;
    const auto cleared_topo = apply_event(faulted_topo, off);
    const auto cleared = assemble_linear_network(cleared_topo);
    CHECK(cleared_topo == t);
    CHECK(cleared.A == base.A);
    CHECK(cleared.B == base.B);
    CHECK(cleared.state_names == base.state_names);
}

TEST_CASE("trips and islanding") {
    auto t = small_grid();
    CHECK(count_islands(t) == 1);
    Event trip;
    trip.kind = EventKind::trip_branch;
    trip.target = "L2";
    const auto split = apply_event(t, trip);
    CHECK(count_islands(split) == 2);

    Event load;
    load.kind = EventKind::trip_load;
    load.target = "LOAD";
    const auto unloaded = apply_event(t, load);
    CHECK(count_islands(unloaded) == 1);
    CHECK(assemble_linear_network(unloaded).n_states() == assemble_linear_network(t).n_states() - 3);

    Event bad;
    bad.kind = EventKind::trip_branch;
    bad.target = "NOPE";
    CHECK_THROWS_AS((void)apply_event(t, bad), CaseError);
}

TEST_CASE("state remapping by name") {
    auto t = small_grid();
    const auto full = assemble_linear_network(t);
    Event load;
    load.kind = EventKind::trip_load;
    load.target = "LOAD";
    const auto reduced = assemble_linear_network(apply_event(t, load));
    Eigen::VectorXd x(full.n_states());
    for (int i = 0; i < full.n_states(); ++i) {
        x[i] = i + 1.0;
    }
    const auto y = remap_states(full, x, reduced);
    for (int i = 0; i < reduced.n_states(); ++i) {
        CHECK(y[i] == x[full.state_index(reduced.state_names[static_cast<std::size_t>(i)])]);
    }
}

TEST_CASE("phasor steady state") {
    SUBCASE("an unloaded network carries the source phasor everywhere") {
        NetworkTopology t;
        t.buses = {{"S", 3}, {"A", 3}, {"B", 3}};
        t.branches = {make_branch("CA", BranchKind::shunt_c, "A", "", 0, 0, 1e-9),
                      make_branch("CB", BranchKind::shunt_c, "B", "", 0, 0, 1e-9),
                      make_branch("SA", BranchKind::series_rl, "S", "A", 0.01, 1e-3, 0),
                      make_branch("AB", BranchKind::series_rl, "A", "B", 0.01, 1e-3, 0)};
        t.sources = {voltage_source("V", "S", 1.0, 30.0)};
        const auto net = assemble_linear_network(t);
        const auto sol = solve_phasor_steady_state(net, t, {});
        const auto vs = std::polar(1.0, 30.0 * std::numbers::pi / 180.0);
        CHECK(std::abs(bus_phasor(net, sol, 1) - vs) < 1e-6);
        CHECK(std::abs(bus_phasor(net, sol, 2) - vs) < 1e-6);
    }
    SUBCASE("the time-domain residual vanishes at t = 0") {
        auto t = small_grid();
        const auto net = assemble_linear_network(t);
        const auto sol = solve_phasor_steady_state(net, t, {});
        Eigen::VectorXd x(net.n_states());
        Eigen::VectorXd dx(net.n_states());
        for (int i = 0; i < net.n_states(); ++i) {
            x[i] = sol.X[i].real();
            dx[i] = -test::kOmega0 * sol.X[i].imag();
        }
        Eigen::VectorXd u(net.n_inputs());
        source_input_values(net, t, 0.0, u);
        CHECK((net.A * x + net.B * u - dx).cwiseAbs().maxCoeff() < 1e-8);
    }
}

TEST_CASE("assembly diagnostics") {
    NetworkTopology t;
    t.buses = {{"A", 3}, {"B", 3}, {"C", 3}};
    t.branches = {make_branch("AB", BranchKind::series_rl, "A", "B", 0.01, 0.001, 0),
                  make_branch("BC", BranchKind::series_rl, "B", "C", 0.01, 0.001, 0)};
    t.sources = {voltage_source("V", "A", 1.0), voltage_source("W", "C", 1.0)};
    CHECK_THROWS_AS((void)assemble_linear_network(t), AssemblyError);

    NetworkTopology g;
    g.buses = {{"G", 3}};
    g.machines = {{"M", "G", true}};
    CHECK_THROWS_AS((void)assemble_linear_network(g), AssemblyError);
}

TEST_CASE("transformer ratio scales the referred impedance") {
    NetworkTopology t;
    t.buses = {{"S", 3}, {"B", 3}};
    auto x = make_branch("T", BranchKind::transformer, "S", "B", 0.01, 0.002, 0);
    x.ratio = 2.0;
    t.branches = {x, make_branch("CB", BranchKind::shunt_c, "B", "", 0, 0, 0.001)};
    t.sources = {voltage_source("V", "S", 1.0)};
    const auto net = assemble_linear_network(t);
    const int i = net.state_index("i:T:a");
    CHECK(net.A(i, i) == doctest::Approx(-0.01 / 0.002));
    CHECK(net.B(i, net.source_inputs[0][0]) == doctest::Approx(1.0 / (4.0 * 0.002)));
}
