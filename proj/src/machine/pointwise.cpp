#include "sasemt/machine/pointwise.hpp"

#include <cmath>

#include <Eigen/Dense>

#include "sasemt/machine/park.hpp"

namespace sasemt::machine {

AlgValues machine_algebraic_point(const MachineParams& p, const VbrCoefficients& c, const GovParams* gov,
                                  const DiffValues& x, const std::array<double, 3>& v_term) {
    AlgValues y{};
    const double theta = x[idx(DiffVar::theta)];
    const Eigen::Matrix3d k = park_matrix(theta);
    const Eigen::Vector3d i0dq =
        k * Eigen::Vector3d(x[idx(DiffVar::ia)], x[idx(DiffVar::ib)], x[idx(DiffVar::ic)]);
    const Eigen::Vector3d v0dq = k * Eigen::Vector3d(v_term[0], v_term[1], v_term[2]);
    y[idx(AlgVar::i0)] = i0dq[0];
    y[idx(AlgVar::id)] = i0dq[1];
    y[idx(AlgVar::iq)] = i0dq[2];
    y[idx(AlgVar::v0)] = v0dq[0];
    y[idx(AlgVar::vd)] = v0dq[1];
    y[idx(AlgVar::vq)] = v0dq[2];

    const double lfd = x[idx(DiffVar::lfd)];
    const double l1d = x[idx(DiffVar::l1d)];
    const double l1q = x[idx(DiffVar::l1q)];
    const double l2q = x[idx(DiffVar::l2q)];
    const double lpp_d = c.Lpp_ad * (lfd / p.L_fd + l1d / p.L_1d);
    const double lpp_q = c.Lpp_aq * (l1q / p.L_1q + l2q / p.L_2q);
    const double lad = -c.Lpp_ad * i0dq[1] + lpp_d;
    const double laq = -c.Lpp_aq * i0dq[2] + lpp_q;
    y[idx(AlgVar::lad)] = lad;
    y[idx(AlgVar::laq)] = laq;

    const double omega = p.omega0 + x[idx(DiffVar::dw)];
    y[idx(AlgVar::omega)] = omega;
    const double efield = p.field_voltage_scale() * x[idx(DiffVar::efd)];
    y[idx(AlgVar::efield)] = efield;

    const double vdpp = c.c_id * i0dq[1] + c.c_fd * lfd + c.c_1d * l1d - omega * lpp_q + c.c_e * efield;
    const double vqpp = c.c_iq * i0dq[2] + c.c_1q * l1q + c.c_2q * l2q + omega * lpp_d;
    y[idx(AlgVar::vpp_d)] = vdpp;
    y[idx(AlgVar::vpp_q)] = vqpp;
    const Eigen::Vector3d vabc = inv_park_matrix(theta) * Eigen::Vector3d(0.0, vdpp, vqpp);
    y[idx(AlgVar::vpp_a)] = vabc[0];
    y[idx(AlgVar::vpp_b)] = vabc[1];
    y[idx(AlgVar::vpp_c)] = vabc[2];

    y[idx(AlgVar::pe)] = p.power_factor() * omega * (lad * i0dq[2] - laq * i0dq[1]);
    y[idx(AlgVar::vt)] = std::hypot(v0dq[1], v0dq[2]);
    const double dt_gain = gov != nullptr ? gov->D_t : 0.0;
    y[idx(AlgVar::pm)] = x[idx(DiffVar::p2)] - dt_gain * x[idx(DiffVar::dw)];
    return y;
}

double p1_rate(const GovParams& gp, const DiffValues& x) noexcept {
    return ((gp.p_ref - x[idx(DiffVar::dw)]) / gp.R_G - x[idx(DiffVar::p1)]) / gp.T1;
}

double efd_rate(const ExcParams& ep, const DiffValues& x) noexcept {
    return (ep.k_E * x[idx(DiffVar::v1)] - x[idx(DiffVar::efd)]) / ep.T_E;
}

bool freeze_condition(double x, double rate, double lo, double hi) noexcept {
    return (x >= hi && rate >= 0.0) || (x <= lo && rate <= 0.0);
}

DiffValues machine_derivatives(const MachineParams& p, const VbrCoefficients& c, const GovParams* gov,
                               const ExcParams* exc, const DiffValues& x, const std::array<double, 3>& v_term,
                               const FreezeMode& freeze, AlgValues* alg) {
    const AlgValues y = machine_algebraic_point(p, c, gov, x, v_term);
    DiffValues f{};

    const double dw = x[idx(DiffVar::dw)];
    f[idx(DiffVar::delta)] = dw;
    f[idx(DiffVar::dw)] =
        p.omega0 / (2.0 * p.H) * (y[idx(AlgVar::pm)] - y[idx(AlgVar::pe)] - p.D * dw / p.omega0);

    const double lad = y[idx(AlgVar::lad)];
    const double laq = y[idx(AlgVar::laq)];
    f[idx(DiffVar::lfd)] = y[idx(AlgVar::efield)] - p.r_fd / p.L_fd * (x[idx(DiffVar::lfd)] - lad);
    f[idx(DiffVar::l1d)] = -p.r_1d / p.L_1d * (x[idx(DiffVar::l1d)] - lad);
    f[idx(DiffVar::l1q)] = -p.r_1q / p.L_1q * (x[idx(DiffVar::l1q)] - laq);
    f[idx(DiffVar::l2q)] = -p.r_2q / p.L_2q * (x[idx(DiffVar::l2q)] - laq);

    const double omega = y[idx(AlgVar::omega)];
    const double theta = x[idx(DiffVar::theta)];
    f[idx(DiffVar::theta)] = omega;

    // L'' di/dt = -(v + Rs i - v'') - (dL''/dtheta) omega i
    const Eigen::Vector3d i(x[idx(DiffVar::ia)], x[idx(DiffVar::ib)], x[idx(DiffVar::ic)]);
    const Eigen::Vector3d v(v_term[0], v_term[1], v_term[2]);
    const Eigen::Vector3d vpp(y[idx(AlgVar::vpp_a)], y[idx(AlgVar::vpp_b)], y[idx(AlgVar::vpp_c)]);
    const Eigen::Vector3d rhs = -(v + p.Rs * i - vpp) - omega * (inductance_matrix_dtheta(p, theta) * i);
    const Eigen::Vector3d di = inductance_matrix(p, theta).partialPivLu().solve(rhs);
    f[idx(DiffVar::ia)] = di[0];
    f[idx(DiffVar::ib)] = di[1];
    f[idx(DiffVar::ic)] = di[2];

    if (gov != nullptr) {
        double dp1 = p1_rate(*gov, x);
        if (freeze.flags.p1 != Saturation::none ||
            (freeze.by_value && freeze_condition(x[idx(DiffVar::p1)], dp1, gov->P_min, gov->P_max))) {
            dp1 = 0.0;
        }
        f[idx(DiffVar::p1)] = dp1;
        f[idx(DiffVar::p2)] = (gov->T2 * dp1 + x[idx(DiffVar::p1)] - x[idx(DiffVar::p2)]) / gov->T3;
    }
    if (exc != nullptr) {
        double defd = efd_rate(*exc, x);
        if (freeze.flags.efd != Saturation::none ||
            (freeze.by_value && freeze_condition(x[idx(DiffVar::efd)], defd, exc->E_min, exc->E_max))) {
            defd = 0.0;
        }
        f[idx(DiffVar::efd)] = defd;
        f[idx(DiffVar::v1)] =
            (exc->v_ref - x[idx(DiffVar::v1)] - y[idx(AlgVar::vt)]) / (exc->T_B + exc->T_A);
    }
    if (alg != nullptr) {
        *alg = y;
    }
    return f;
}

}  // namespace sasemt::machine
