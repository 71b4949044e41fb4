#include "sasemt/machine/init.hpp"

#include <cmath>
#include <numbers>
#include <string>

#include "sasemt/error.hpp"
#include "sasemt/machine/pointwise.hpp"

namespace sasemt::machine {

std::complex<double> injection_phasor(double P, double Q, std::complex<double> V) {
    if (std::abs(V) <= 0.0) {
        throw InitializationError("terminal voltage magnitude must be positive");
    }
    return std::conj(std::complex<double>(P, Q) / (1.5 * V));
}

std::complex<double> terminal_phasor(double v, double angle_deg) {
    return std::polar(v, angle_deg * std::numbers::pi / 180.0);
}

MachineInit init_machine_steady_state(const MachineParams& p, const GovParams* gov, const ExcParams* exc,
                                      std::complex<double> V, std::complex<double> I) {
    using cd = std::complex<double>;
    if (std::abs(V) <= 0.0) {
        throw InitializationError("terminal voltage magnitude must be positive");
    }
    const double w0 = p.omega0;
    const double L_d = p.L_ls + p.L_ad;
    const double L_q = p.L_ls + p.L_aq;

    // The q axis lines up with the internal voltage behind the q reactance.
    const cd E = V + cd(p.Rs, w0 * L_q) * I;
    const double theta0 = std::arg(E) - std::numbers::pi / 2.0;
    const cd rot = std::polar(1.0, -theta0);
    const cd vdq = V * rot;
    const cd idq = I * rot;
    const double vq = vdq.imag();
    const double id = idq.real();
    const double iq = idq.imag();

    const double ifd = (vq + p.Rs * iq + w0 * L_d * id) / (w0 * p.L_ad);
    const double lad = p.L_ad * (-id + ifd);
    const double laq = -p.L_aq * iq;

    MachineInit out;
    DiffValues& x = out.x;
    x[idx(DiffVar::delta)] = theta0;
    x[idx(DiffVar::dw)] = 0.0;
    x[idx(DiffVar::lfd)] = lad + p.L_fd * ifd;
    x[idx(DiffVar::l1d)] = lad;
    x[idx(DiffVar::l1q)] = laq;
    x[idx(DiffVar::l2q)] = laq;
    x[idx(DiffVar::theta)] = theta0;
    for (int ph = 0; ph < 3; ++ph) {
        const double shift = -2.0 * std::numbers::pi / 3.0 * ph;
        x[idx(DiffVar::ia) + static_cast<std::size_t>(ph)] = (I * std::polar(1.0, shift)).real();
    }
    const double efd = w0 * p.L_ad * ifd;
    x[idx(DiffVar::efd)] = efd;

    const std::array<double, 3> v_abc = {V.real(), (V * std::polar(1.0, -2.0 * std::numbers::pi / 3.0)).real(),
                                         (V * std::polar(1.0, 2.0 * std::numbers::pi / 3.0)).real()};
    const VbrCoefficients c = VbrCoefficients::from(p);
    // Electrical power at the operating point sets the mechanical input.
    x[idx(DiffVar::p2)] = 0.0;
    AlgValues y = machine_algebraic_point(p, c, nullptr, x, v_abc);
    const double pm = y[idx(AlgVar::pe)];
    x[idx(DiffVar::p1)] = pm;
    x[idx(DiffVar::p2)] = pm;

    if (gov != nullptr) {
        if (pm > gov->P_max || pm < gov->P_min) {
            throw InitializationError("required valve position " + std::to_string(pm) +
                                      " lies outside the governor limits");
        }
        out.p_ref = gov->R_G * pm;
    }
    if (exc != nullptr) {
        if (efd > exc->E_max || efd < exc->E_min) {
            throw InitializationError("required field voltage " + std::to_string(efd) +
                                      " lies outside the exciter limits");
        }
        x[idx(DiffVar::v1)] = efd / exc->k_E;
        out.v_ref = x[idx(DiffVar::v1)] + y[idx(AlgVar::vt)];
    }
    out.y = machine_algebraic_point(p, c, gov, x, v_abc);
    return out;
}

MachineInit init_machine_steady_state(const MachineParams& p, const GovParams* gov, const ExcParams* exc,
                                      double P, double Q, double v, double angle_deg) {
    const auto V = terminal_phasor(v, angle_deg);
    return init_machine_steady_state(p, gov, exc, V, injection_phasor(P, Q, V));
}

}  // namespace sasemt::machine
