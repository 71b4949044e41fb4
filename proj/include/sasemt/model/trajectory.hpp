#pragma once

// Sampled output of any integrator. Columns are named
//   v:<bus>:<phase>       bus phase voltage (state or source)
//   i:<branch>:<phase>    inductor branch current (0 once the branch is out)
//   <machine>.<var>       machine differential or algebraic quantity

#include <span>
#include <string>
#include <vector>

#include <Eigen/Dense>

#include "sasemt/model/system.hpp"

namespace sasemt::model {

struct OutputColumn {
    enum class Kind { bus_voltage, branch_current, machine_state, machine_algebraic };
    Kind kind = Kind::bus_voltage;
    std::string name;
    int bus = -1;
    int phase = 0;
    int machine = -1;
    int var = -1;
};

/// Resolve output names. The single name "all" expands to every bus voltage,
/// every inductor current, and each machine's states plus vt, pe and pm.
/// Throws CaseError for unknown names or an empty selection.
[[nodiscard]] std::vector<OutputColumn> resolve_columns(const SystemModel& model,
                                                        const std::vector<std::string>& names);

class Trajectory {
public:
    Trajectory() = default;
    explicit Trajectory(std::vector<std::string> names) : names_(std::move(names)) {}

    [[nodiscard]] const std::vector<std::string>& names() const noexcept { return names_; }
    [[nodiscard]] std::size_t cols() const noexcept { return names_.size(); }
    [[nodiscard]] std::size_t rows() const noexcept { return t_.size(); }
    [[nodiscard]] double t(std::size_t r) const noexcept { return t_[r]; }
    [[nodiscard]] const std::vector<double>& times() const noexcept { return t_; }
    [[nodiscard]] std::span<const double> row(std::size_t r) const noexcept {
        return {data_.data() + r * cols(), cols()};
    }
    [[nodiscard]] double at(std::size_t r, std::size_t c) const noexcept { return data_[r * cols() + c]; }
    [[nodiscard]] int column(const std::string& name) const noexcept;

    /// Appends a row and returns a span to fill.
    std::span<double> append(double t);

    void reserve(std::size_t rows) {
        t_.reserve(rows);
        data_.reserve(rows * cols());
    }

    bool operator==(const Trajectory&) const = default;

private:
    std::vector<std::string> names_;
    std::vector<double> t_;
    std::vector<double> data_;
};

[[nodiscard]] std::vector<std::string> column_names(const std::vector<OutputColumn>& cols);

/// Evaluate the selected columns at one instant.
void sample_row(const SystemModel& model, const std::vector<OutputColumn>& cols, double t,
                const Eigen::Ref<const Eigen::VectorXd>& x2, const std::vector<machine::DiffValues>& x1,
                std::span<double> out);

}  // namespace sasemt::model
