#pragma once

#include <array>
#include <cstddef>
#include <optional>
#include <string_view>

namespace sasemt::machine {

/// Differential machine and controller states, in storage order.
enum class DiffVar : int {
    delta,
    dw,
    lfd,
    l1d,
    l1q,
    l2q,
    theta,
    ia,
    ib,
    ic,
    p1,
    p2,
    efd,
    v1,
};
inline constexpr std::size_t kDiffCount = 14;

/// Algebraic quantities resolved from the differential states.
enum class AlgVar : int {
    i0,
    id,
    iq,
    v0,    ///< terminal voltage, Park frame
    vd,
    vq,
    vpp_d,
    vpp_q,
    vpp_a,
    vpp_b,
    vpp_c,
    lad,
    laq,
    pe,
    pm,
    vt,    ///< terminal voltage magnitude sqrt(vd^2 + vq^2)
    omega, ///< omega0 + dw
    efield, ///< e_fd applied to the field winding
};
inline constexpr std::size_t kAlgCount = 18;

using DiffValues = std::array<double, kDiffCount>;
using AlgValues = std::array<double, kAlgCount>;

[[nodiscard]] constexpr std::size_t idx(DiffVar v) noexcept { return static_cast<std::size_t>(v); }
[[nodiscard]] constexpr std::size_t idx(AlgVar v) noexcept { return static_cast<std::size_t>(v); }

[[nodiscard]] std::string_view name(DiffVar v) noexcept;
[[nodiscard]] std::string_view name(AlgVar v) noexcept;
[[nodiscard]] std::optional<DiffVar> parse_diff_var(std::string_view s) noexcept;
[[nodiscard]] std::optional<AlgVar> parse_alg_var(std::string_view s) noexcept;

/// State of an output limiter on p1 or E_fd.
enum class Saturation { none, upper, lower };

struct LimiterFlags {
    Saturation p1 = Saturation::none;
    Saturation efd = Saturation::none;

    bool operator==(const LimiterFlags&) const = default;
};

}  // namespace sasemt::machine
