#include "sasemt/reference/rhs.hpp"

#include <algorithm>

#include "sasemt/machine/pointwise.hpp"

namespace sasemt::reference {

using machine::DiffVar;
using machine::idx;

RhsEvaluator::RhsEvaluator(const model::SystemModel& model) : model_(&model), n2_(model.net.n_states()) {
    for (std::size_t m = 0; m < model.machines.size(); ++m) {
        const auto& mu = model.machines[m];
        if (!mu.in_service) {
            continue;
        }
        const int base = machine_offset(m);
        if (mu.gov) {
            limited_.push_back({base + static_cast<int>(idx(DiffVar::p1)), static_cast<int>(m), true, mu.gov->P_min,
                                mu.gov->P_max});
        }
        if (mu.exc) {
            limited_.push_back({base + static_cast<int>(idx(DiffVar::efd)), static_cast<int>(m), false,
                                mu.exc->E_min, mu.exc->E_max});
        }
    }
    x1_.resize(model.machines.size());
}

void RhsEvaluator::pack(const model::SystemState& st, Eigen::VectorXd& y) const {
    y.resize(size());
    y.head(n2_) = st.x2;
    for (std::size_t m = 0; m < st.x1.size(); ++m) {
        std::copy(st.x1[m].begin(), st.x1[m].end(), y.data() + machine_offset(m));
    }
}

void RhsEvaluator::unpack(const Eigen::VectorXd& y, model::SystemState& st) const {
    st.x2 = y.head(n2_);
    st.x1.resize(model_->machines.size());
    for (std::size_t m = 0; m < st.x1.size(); ++m) {
        std::copy_n(y.data() + machine_offset(m), kStride, st.x1[m].begin());
    }
}

void RhsEvaluator::eval(double t, const Eigen::VectorXd& y, Eigen::VectorXd& dy,
                        const std::vector<machine::LimiterFlags>* flags) const {
    const auto& model = *model_;
    dy.setZero(size());
    for (std::size_t m = 0; m < x1_.size(); ++m) {
        std::copy_n(y.data() + machine_offset(m), kStride, x1_[m].begin());
    }
    model::input_values(model, t, x1_, u_);
    const auto x2 = y.head(n2_);
    if (n2_ > 0) {
        dy.head(n2_).noalias() = model.net.A * x2;
        if (model.net.n_inputs() > 0) {
            dy.head(n2_).noalias() += model.net.B * u_;
        }
    }
    for (std::size_t m = 0; m < model.machines.size(); ++m) {
        const auto& mu = model.machines[m];
        if (!mu.in_service) {
            continue;
        }
        machine::FreezeMode freeze;
        if (flags != nullptr) {
            freeze.flags = (*flags)[m];
        } else {
            freeze.by_value = true;
        }
        const auto f = machine::machine_derivatives(mu.params, mu.coeffs, mu.gov_ptr(), mu.exc_ptr(), x1_[m],
                                                    model::terminal_voltages(model, m, x2), freeze);
        std::copy(f.begin(), f.end(), dy.data() + machine_offset(m));
    }
}

void RhsEvaluator::clamp(Eigen::VectorXd& y) const {
    for (const auto& l : limited_) {
        y[l.index] = std::clamp(y[l.index], l.lo, l.hi);
    }
}

}  // namespace sasemt::reference
