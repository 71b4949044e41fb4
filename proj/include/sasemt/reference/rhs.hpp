#pragma once

// Pointwise right-hand side of the whole system on a flat state vector
//   y = [x2 (network), x1 of machine 0, x1 of machine 1, ...]
// Algebraic quantities are resolved at each call; nothing is shared with the
// series recursions.

#include <vector>

#include <Eigen/Dense>

#include "sasemt/model/system.hpp"

namespace sasemt::reference {

struct LimitedState {
    int index = 0;  ///< position in the flat vector
    int machine = 0;
    bool is_p1 = true;  ///< governor valve, otherwise field voltage
    double lo = 0.0;
    double hi = 0.0;
};

class RhsEvaluator {
public:
    explicit RhsEvaluator(const model::SystemModel& model);

    [[nodiscard]] int size() const noexcept { return n2_ + static_cast<int>(model_->machines.size() * kStride); }
    [[nodiscard]] int network_size() const noexcept { return n2_; }
    [[nodiscard]] int machine_offset(std::size_t m) const noexcept {
        return n2_ + static_cast<int>(m * kStride);
    }

    void pack(const model::SystemState& st, Eigen::VectorXd& y) const;
    void unpack(const Eigen::VectorXd& y, model::SystemState& st) const;

    /// dy/dt at t. With flags == nullptr limited states freeze by value (the
    /// oracle rule); otherwise the given saturation flags decide.
    void eval(double t, const Eigen::VectorXd& y, Eigen::VectorXd& dy,
              const std::vector<machine::LimiterFlags>* flags = nullptr) const;

    [[nodiscard]] const std::vector<LimitedState>& limited() const noexcept { return limited_; }

    /// Project limited states back into their bounds.
    void clamp(Eigen::VectorXd& y) const;

private:
    static constexpr std::size_t kStride = machine::kDiffCount;

    const model::SystemModel* model_;
    int n2_ = 0;
    std::vector<LimitedState> limited_;
    mutable Eigen::VectorXd u_;
    mutable std::vector<machine::DiffValues> x1_;
};

}  // namespace sasemt::reference
