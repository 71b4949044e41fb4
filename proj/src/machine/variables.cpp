#include "sasemt/machine/variables.hpp"

namespace sasemt::machine {

namespace {

constexpr std::array<std::string_view, kDiffCount> kDiffNames = {
    "delta", "dw", "lfd", "l1d", "l1q", "l2q", "theta", "ia", "ib", "ic", "p1", "p2", "efd", "v1"};

constexpr std::array<std::string_view, kAlgCount> kAlgNames = {
    "i0",    "id",    "iq",  "v0",  "vd", "vq", "vpp_d", "vpp_q", "vpp_a",
    "vpp_b", "vpp_c", "lad", "laq", "pe", "pm", "vt",    "omega", "efield"};

}  // namespace

std::string_view name(DiffVar v) noexcept { return kDiffNames[idx(v)]; }

std::string_view name(AlgVar v) noexcept { return kAlgNames[idx(v)]; }

std::optional<DiffVar> parse_diff_var(std::string_view s) noexcept {
    for (std::size_t i = 0; i < kDiffCount; ++i) {
        if (kDiffNames[i] == s) {
            return static_cast<DiffVar>(i);
        }
    }
    return std::nullopt;
}

std::optional<AlgVar> parse_alg_var(std::string_view s) noexcept {
    for (std::size_t i = 0; i < kAlgCount; ++i) {
        if (kAlgNames[i] == s) {
            return static_cast<AlgVar>(i);
        }
    }
    return std::nullopt;
}

}  // namespace sasemt::machine
