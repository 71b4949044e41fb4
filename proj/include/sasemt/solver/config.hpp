#pragma once

#include <string>
#include <vector>

namespace sasemt::solver {

/// Which residual drives step acceptance.
enum class ImbalanceMode {
    network,  ///< ||A x[N] + B u[N]|| dt^N over the linear network
    full,     ///< max |dx/dt(series) - f(x(series))| over every differential state
};

/// What to do when the imbalance cannot be met at dt_min.
enum class StiffnessPolicy { abort, force };

struct SolverConfig {
    int order = 30;
    double eps_imbalance = 1e-2;
    double dt_init = 1e-4;
    double dt_min = 1e-7;
    double dt_cap = 2e-3;
    double growth = 1.5;
    double dense_interval = 0.0;  ///< 0 records step ends instead of a grid
    double eps_switch = 1e-5;
    int switch_prescan = 16;      ///< samples per step used to bracket the first crossing
    bool switch_detection = true;
    double t_end = 1.0;
    ImbalanceMode imbalance_mode = ImbalanceMode::network;
    StiffnessPolicy stiffness = StiffnessPolicy::abort;
    bool keep_snapshots = true;
    std::vector<std::string> outputs = {"all"};

    /// Throws ParameterError when the settings are inconsistent.
    void validate() const;

    bool operator==(const SolverConfig&) const = default;
};

}  // namespace sasemt::solver
