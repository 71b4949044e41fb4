#include "sasemt/machine/machine_series.hpp"

#include <cmath>
#include <limits>

#include "sasemt/error.hpp"

namespace sasemt::machine {

namespace {

using series::cauchy_at;

constexpr double kNaN = std::numeric_limits<double>::quiet_NaN();

void resize(PowerSeries& s, int order, double t0) {
    if (s.order() != order) {
        s = PowerSeries(order, t0);
    }
    s.set_t0(t0);
}

void fill_from_one(PowerSeries& s, double v0) {
    auto c = s.coeffs();
    c[0] = v0;
    for (std::size_t k = 1; k < c.size(); ++k) {
        c[k] = kNaN;
    }
}

void fill_all(PowerSeries& s, double v) {
    for (double& c : s.coeffs()) {
        c = v;
    }
}

}  // namespace

void reset_machine_series(MachineSeriesState& st, const MachineParams& p, int order, double t0) {
    st.order = order;
    st.t0 = t0;
    for (auto& s : st.x) {
        resize(s, order, t0);
    }
    for (auto& s : st.y) {
        resize(s, order, t0);
    }
    for (auto& s : st.v_term) {
        resize(s, order, t0);
    }
    for (auto& s : st.stator_flux) {
        resize(s, order, t0);
    }
    resize(st.lpp_d, order, t0);
    resize(st.lpp_q, order, t0);
    resize(st.torque, order, t0);
    resize(st.vt_squared, order, t0);
    resize(st.zero, order, t0);
    fill_all(st.zero, 0.0);
    st.park.reset(order, t0);
    st.inductance.reset(p, order, t0);
}

void seed_machine_series(MachineSeriesState& st, const DiffValues& x0,
                         const std::array<double, 3>& v_term0, LimiterFlags flags, bool allow_vt_hold) {
    for (std::size_t i = 0; i < kDiffCount; ++i) {
        fill_from_one(st.x[i], x0[i]);
    }
    for (auto& s : st.y) {
        fill_all(s, kNaN);
    }
    for (int ph = 0; ph < 3; ++ph) {
        fill_from_one(st.v_term[ph], v_term0[ph]);
        fill_all(st.stator_flux[ph], kNaN);
    }
    fill_all(st.lpp_d, kNaN);
    fill_all(st.lpp_q, kNaN);
    fill_all(st.torque, kNaN);
    fill_all(st.vt_squared, kNaN);
    st.flags = flags;

    const double theta0 = x0[idx(DiffVar::theta)];
    st.park.seed(theta0);
    st.inductance.seed(theta0);
    const Eigen::Matrix3d l0 = st.inductance.coefficient(0);
    Eigen::FullPivLU<Eigen::Matrix3d> lu(l0);
    if (!lu.isInvertible()) {
        throw ParameterError("subtransient inductance matrix is singular");
    }
    st.l0_inverse = lu.inverse();

    // The magnitude recursion divides by the order-0 value.
    const auto vdq = park_matrix(theta0) * Eigen::Vector3d(v_term0[0], v_term0[1], v_term0[2]);
    const double s0 = vdq[1] * vdq[1] + vdq[2] * vdq[2];
    st.vt_hold = allow_vt_hold && s0 < series::kMagnitudeFloor;
}

void machine_algebraic_order(MachineSeriesState& st, const MachineParams& p, const VbrCoefficients& c,
                             const GovParams* gov, int k) {
    const auto kk = static_cast<std::size_t>(k);
    if (k > 0) {
        st.park.extend(st[DiffVar::theta], k);
    }

    const auto i0dq = park_order(st.park, {&st[DiffVar::ia], &st[DiffVar::ib], &st[DiffVar::ic]}, k);
    st[AlgVar::i0][kk] = i0dq[0];
    st[AlgVar::id][kk] = i0dq[1];
    st[AlgVar::iq][kk] = i0dq[2];
    const auto v0dq = park_order(st.park, {&st.v_term[0], &st.v_term[1], &st.v_term[2]}, k);
    st[AlgVar::v0][kk] = v0dq[0];
    st[AlgVar::vd][kk] = v0dq[1];
    st[AlgVar::vq][kk] = v0dq[2];

    const double lfd = st[DiffVar::lfd][kk];
    const double l1d = st[DiffVar::l1d][kk];
    const double l1q = st[DiffVar::l1q][kk];
    const double l2q = st[DiffVar::l2q][kk];
    st.lpp_d[kk] = c.Lpp_ad * (lfd / p.L_fd + l1d / p.L_1d);
    st.lpp_q[kk] = c.Lpp_aq * (l1q / p.L_1q + l2q / p.L_2q);
    st[AlgVar::lad][kk] = -c.Lpp_ad * i0dq[1] + st.lpp_d[kk];
    st[AlgVar::laq][kk] = -c.Lpp_aq * i0dq[2] + st.lpp_q[kk];

    st[AlgVar::omega][kk] = (k == 0 ? p.omega0 : 0.0) + st[DiffVar::dw][kk];
    st[AlgVar::efield][kk] = p.field_voltage_scale() * st[DiffVar::efd][kk];

    const auto omega = st[AlgVar::omega].coeffs();
    const double vdpp = c.c_id * i0dq[1] + c.c_fd * lfd + c.c_1d * l1d -
                        cauchy_at(omega, st.lpp_q.coeffs(), kk) + c.c_e * st[AlgVar::efield][kk];
    const double vqpp = c.c_iq * i0dq[2] + c.c_1q * l1q + c.c_2q * l2q + cauchy_at(omega, st.lpp_d.coeffs(), kk);
    st[AlgVar::vpp_d][kk] = vdpp;
    st[AlgVar::vpp_q][kk] = vqpp;

    // Zero-sequence subtransient voltage is identically zero.
    const auto vabc = inv_park_order(st.park, {&st.zero, &st[AlgVar::vpp_d], &st[AlgVar::vpp_q]}, k);
    st[AlgVar::vpp_a][kk] = vabc[0];
    st[AlgVar::vpp_b][kk] = vabc[1];
    st[AlgVar::vpp_c][kk] = vabc[2];

    st.torque[kk] = cauchy_at(st[AlgVar::lad].coeffs(), st[AlgVar::iq].coeffs(), kk) -
                    cauchy_at(st[AlgVar::laq].coeffs(), st[AlgVar::id].coeffs(), kk);
    st[AlgVar::pe][kk] = p.power_factor() * cauchy_at(omega, st.torque.coeffs(), kk);

    st.vt_squared[kk] = series::sum_of_squares_at(st[AlgVar::vd].coeffs(), st[AlgVar::vq].coeffs(), kk);
    if (k == 0) {
        const double s0 = st.vt_squared[0];
        if (!st.vt_hold && !(s0 >= series::kMagnitudeFloor)) {
            throw DegenerateMagnitudeError("terminal voltage magnitude below floor");
        }
        st[AlgVar::vt][0] = std::sqrt(s0);
    } else if (st.vt_hold) {
        st[AlgVar::vt][kk] = 0.0;
    } else {
        st[AlgVar::vt][kk] = series::sqrt_at(st.vt_squared.coeffs(), st[AlgVar::vt].coeffs(), kk);
    }

    const double dt_gain = gov != nullptr ? gov->D_t : 0.0;
    st[AlgVar::pm][kk] = st[DiffVar::p2][kk] - dt_gain * st[DiffVar::dw][kk];
}

void machine_differential_order(MachineSeriesState& st, const MachineParams& p, int k) {
    const auto kk = static_cast<std::size_t>(k);
    const auto k1 = kk + 1;
    const double inv = 1.0 / static_cast<double>(k + 1);

    const double dw = st[DiffVar::dw][kk];
    st[DiffVar::delta][k1] = dw * inv;
    st[DiffVar::dw][k1] =
        p.omega0 / (2.0 * p.H) * (st[AlgVar::pm][kk] - st[AlgVar::pe][kk] - p.D * dw / p.omega0) * inv;

    const double lad = st[AlgVar::lad][kk];
    const double laq = st[AlgVar::laq][kk];
    st[DiffVar::lfd][k1] =
        (st[AlgVar::efield][kk] - p.r_fd / p.L_fd * (st[DiffVar::lfd][kk] - lad)) * inv;
    st[DiffVar::l1d][k1] = -p.r_1d / p.L_1d * (st[DiffVar::l1d][kk] - lad) * inv;
    st[DiffVar::l1q][k1] = -p.r_1q / p.L_1q * (st[DiffVar::l1q][kk] - laq) * inv;
    st[DiffVar::l2q][k1] = -p.r_2q / p.L_2q * (st[DiffVar::l2q][kk] - laq) * inv;

    st[DiffVar::theta][k1] = st[AlgVar::omega][kk] * inv;
    st.inductance.extend(st[DiffVar::theta], k + 1);

    // d(L'' i)/dt = -(v + Rs i - v''); solve the order-(k+1) flux for i[k+1].
    constexpr std::array<DiffVar, 3> kCur = {DiffVar::ia, DiffVar::ib, DiffVar::ic};
    constexpr std::array<AlgVar, 3> kVpp = {AlgVar::vpp_a, AlgVar::vpp_b, AlgVar::vpp_c};
    Eigen::Vector3d rhs;
    for (int ph = 0; ph < 3; ++ph) {
        const double flux = -(st.v_term[ph][kk] + p.Rs * st[kCur[ph]][kk] - st[kVpp[ph]][kk]) * inv;
        st.stator_flux[ph][k1] = flux;
        double acc = flux;
        for (std::size_t m = 1; m <= k1; ++m) {
            for (int col = 0; col < 3; ++col) {
                acc -= st.inductance.entry(ph, col, static_cast<int>(m)) * st[kCur[col]][k1 - m];
            }
        }
        rhs[ph] = acc;
    }
    const Eigen::Vector3d i_next = st.l0_inverse * rhs;
    for (int ph = 0; ph < 3; ++ph) {
        st[kCur[ph]][k1] = i_next[ph];
    }
}

void tgov1_order(MachineSeriesState& st, const GovParams& gp, int k) {
    const auto kk = static_cast<std::size_t>(k);
    const auto k1 = kk + 1;
    const double inv = 1.0 / static_cast<double>(k + 1);
    const double eta = k == 0 ? 1.0 : 0.0;

    double p1_next = (1.0 / gp.T1) * ((1.0 / gp.R_G) * (eta * gp.p_ref - st[DiffVar::dw][kk]) -
                                      st[DiffVar::p1][kk]) * inv;
    if (st.flags.p1 != Saturation::none) {
        p1_next = 0.0;
    }
    st[DiffVar::p1][k1] = p1_next;
    st[DiffVar::p2][k1] = (1.0 / gp.T3) *
                          (static_cast<double>(k + 1) * gp.T2 * p1_next + st[DiffVar::p1][kk] -
                           st[DiffVar::p2][kk]) * inv;
    st[AlgVar::pm][k1] = st[DiffVar::p2][k1] - gp.D_t * st[DiffVar::dw][k1];
}

void sexs_order(MachineSeriesState& st, const ExcParams& ep, int k) {
    const auto kk = static_cast<std::size_t>(k);
    const auto k1 = kk + 1;
    const double inv = 1.0 / static_cast<double>(k + 1);
    const double eta = k == 0 ? 1.0 : 0.0;

    double efd_next = (1.0 / ep.T_E) * (ep.k_E * st[DiffVar::v1][kk] - st[DiffVar::efd][kk]) * inv;
    if (st.flags.efd != Saturation::none) {
        efd_next = 0.0;
    }
    st[DiffVar::efd][k1] = efd_next;
    // (k+1) v1[k+1] (T_B + T_A) = eta v_ref - v1[k] - v_t[k]
    st[DiffVar::v1][k1] =
        (eta * ep.v_ref - st[DiffVar::v1][kk] - st[AlgVar::vt][kk]) / (ep.T_B + ep.T_A) * inv;
}

void controllers_order(MachineSeriesState& st, const GovParams* gov, const ExcParams* exc, int k) {
    const auto k1 = static_cast<std::size_t>(k + 1);
    if (gov != nullptr) {
        tgov1_order(st, *gov, k);
    } else {
        st[DiffVar::p1][k1] = 0.0;
        st[DiffVar::p2][k1] = 0.0;
    }
    if (exc != nullptr) {
        sexs_order(st, *exc, k);
    } else {
        st[DiffVar::efd][k1] = 0.0;
        st[DiffVar::v1][k1] = 0.0;
    }
}

DiffValues eval_differential(const MachineSeriesState& st, double dt) noexcept {
    DiffValues out{};
    for (std::size_t i = 0; i < kDiffCount; ++i) {
        out[i] = st.x[i].eval(dt);
    }
    return out;
}

}  // namespace sasemt::machine
