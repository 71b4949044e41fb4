#include "sasemt/machine/params.hpp"

#include <algorithm>
#include <cmath>
#include <string>

#include "sasemt/error.hpp"

namespace sasemt::machine {

namespace {

double parallel3(double a, double b, double c) noexcept { return 1.0 / (1.0 / a + 1.0 / b + 1.0 / c); }

void require_positive(double v, const char* name) {
    if (!(v > 0.0) || !std::isfinite(v)) {
        throw ParameterError(std::string(name) + " must be positive and finite");
    }
}

void require_non_negative(double v, const char* name) {
    if (!(v >= 0.0) || !std::isfinite(v)) {
        throw ParameterError(std::string(name) + " must be non-negative and finite");
    }
}

}  // namespace

double MachineParams::Lpp_ad() const noexcept { return parallel3(L_ad, L_fd, L_1d); }

double MachineParams::Lpp_aq() const noexcept { return parallel3(L_aq, L_1q, L_2q); }

double MachineParams::field_voltage_scale() const noexcept { return r_fd / (omega0 * L_ad); }

void MachineParams::validate() const {
    require_positive(H, "H");
    require_non_negative(D, "D");
    require_positive(omega0, "omega0");
    if (n_poles < 2 || n_poles % 2 != 0) {
        throw ParameterError("n_poles must be an even integer >= 2");
    }
    require_non_negative(Rs, "Rs");
    require_positive(r_fd, "r_fd");
    require_positive(r_1d, "r_1d");
    require_positive(r_1q, "r_1q");
    require_positive(r_2q, "r_2q");
    require_positive(L_fd, "L_fd");
    require_positive(L_1d, "L_1d");
    require_positive(L_1q, "L_1q");
    require_positive(L_2q, "L_2q");
    require_positive(L_ad, "L_ad");
    require_positive(L_aq, "L_aq");
    require_positive(L_ls, "L_ls");
    require_positive(L_0, "L_0");
}

void GovParams::validate() const {
    require_positive(R_G, "governor R");
    require_positive(T1, "governor T1");
    require_non_negative(T2, "governor T2");
    require_positive(T3, "governor T3");
    require_non_negative(D_t, "governor Dt");
    if (!(P_min < P_max)) {
        throw ParameterError("governor Pmin must be below Pmax");
    }
}

void ExcParams::validate() const {
    require_positive(k_E, "exciter KE");
    require_positive(T_E, "exciter TE");
    require_non_negative(T_A, "exciter TA");
    require_positive(T_B, "exciter TB");
    if (!(E_min < E_max)) {
        throw ParameterError("exciter Emin must be below Emax");
    }
}

VbrCoefficients VbrCoefficients::from(const MachineParams& p) noexcept {
    VbrCoefficients c;
    const double lad = p.Lpp_ad();
    const double laq = p.Lpp_aq();
    c.Lpp_ad = lad;
    c.Lpp_aq = laq;

    const double fd2 = p.L_fd * p.L_fd;
    const double d12 = p.L_1d * p.L_1d;
    c.c_id = -(p.r_fd / fd2 + p.r_1d / d12) * lad * lad;
    c.c_fd = -(p.r_fd * lad / fd2 * (1.0 - lad / p.L_fd) - lad * lad * p.r_1d / (d12 * p.L_fd));
    c.c_1d = lad * lad * p.r_fd / (fd2 * p.L_1d) - p.r_1d * lad / d12 * (1.0 - lad / p.L_1d);
    c.c_e = lad / p.L_fd;

    const double q12 = p.L_1q * p.L_1q;
    const double q22 = p.L_2q * p.L_2q;
    c.c_iq = -(p.r_1q / q12 + p.r_2q / q22) * laq * laq;
    c.c_1q = -(p.r_1q * laq / q12 * (1.0 - laq / p.L_1q) - laq * laq * p.r_2q / (q22 * p.L_1q));
    c.c_2q = laq * laq * p.r_1q / (q12 * p.L_2q) - p.r_2q * laq / q22 * (1.0 - laq / p.L_2q);
    return c;
}

}  // namespace sasemt::machine
