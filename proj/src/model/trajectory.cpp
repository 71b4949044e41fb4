#include "sasemt/model/trajectory.hpp"

#include <optional>

#include "sasemt/error.hpp"
#include "sasemt/machine/pointwise.hpp"

namespace sasemt::model {

using Kind = OutputColumn::Kind;

namespace {

std::optional<int> parse_phase(const std::string& s) {
    if (s == "a") {
        return 0;
    }
    if (s == "b") {
        return 1;
    }
    if (s == "c") {
        return 2;
    }
    return std::nullopt;
}

OutputColumn resolve_one(const SystemModel& model, const std::string& name) {
    OutputColumn col;
    col.name = name;
    if (const auto dot = name.find('.'); dot != std::string::npos) {
        const int m = model.machine_index(name.substr(0, dot));
        const std::string var = name.substr(dot + 1);
        if (m >= 0) {
            col.machine = m;
            if (const auto d = machine::parse_diff_var(var)) {
                col.kind = Kind::machine_state;
                col.var = static_cast<int>(*d);
                return col;
            }
            if (const auto a = machine::parse_alg_var(var)) {
                col.kind = Kind::machine_algebraic;
                col.var = static_cast<int>(*a);
                return col;
            }
        }
        throw CaseError("unknown output column '" + name + "'");
    }
    const auto c1 = name.find(':');
    const auto c2 = name.rfind(':');
    if (c1 == std::string::npos || c1 == c2) {
        throw CaseError("unknown output column '" + name + "'");
    }
    const std::string prefix = name.substr(0, c1);
    const std::string elem = name.substr(c1 + 1, c2 - c1 - 1);
    const auto phase = parse_phase(name.substr(c2 + 1));
    if (!phase) {
        throw CaseError("bad phase in output column '" + name + "'");
    }
    col.phase = *phase;
    if (prefix == "v") {
        col.kind = Kind::bus_voltage;
        col.bus = model.topo.bus_index(elem);
        if (col.bus < 0 || *phase >= model.topo.buses[static_cast<std::size_t>(col.bus)].phases) {
            throw CaseError("unknown output column '" + name + "'");
        }
        return col;
    }
    if (prefix == "i") {
        col.kind = Kind::branch_current;
        if (model.net.state_index(name) < 0) {
            throw CaseError("output column '" + name + "' is not an inductor current");
        }
        return col;
    }
    throw CaseError("unknown output column '" + name + "'");
}

}  // namespace

std::vector<OutputColumn> resolve_columns(const SystemModel& model, const std::vector<std::string>& names) {
    if (names.empty()) {
        throw CaseError("output selection is empty");
    }
    std::vector<std::string> expanded;
    for (const auto& n : names) {
        if (n != "all") {
            expanded.push_back(n);
            continue;
        }
        for (const auto& bus : model.topo.buses) {
            for (int ph = 0; ph < bus.phases; ++ph) {
                expanded.push_back("v:" + bus.name + ":" + network::phase_name(ph));
            }
        }
        for (const auto& s : model.net.state_names) {
            if (s.rfind("i:", 0) == 0) {
                expanded.push_back(s);
            }
        }
        for (const auto& m : model.machines) {
            for (std::size_t v = 0; v < machine::kDiffCount; ++v) {
                expanded.push_back(m.name + "." + std::string(machine::name(static_cast<machine::DiffVar>(v))));
            }
            for (const char* extra : {"vt", "pe", "pm"}) {
                expanded.push_back(m.name + "." + extra);
            }
        }
    }
    std::vector<OutputColumn> cols;
    cols.reserve(expanded.size());
    for (const auto& n : expanded) {
        cols.push_back(resolve_one(model, n));
    }
    return cols;
}

std::vector<std::string> column_names(const std::vector<OutputColumn>& cols) {
    std::vector<std::string> out;
    out.reserve(cols.size());
    for (const auto& c : cols) {
        out.push_back(c.name);
    }
    return out;
}

int Trajectory::column(const std::string& name) const noexcept {
    for (std::size_t i = 0; i < names_.size(); ++i) {
        if (names_[i] == name) {
            return static_cast<int>(i);
        }
    }
    return -1;
}

std::span<double> Trajectory::append(double t) {
    t_.push_back(t);
    data_.resize(data_.size() + cols(), 0.0);
    return {data_.data() + data_.size() - cols(), cols()};
}

void sample_row(const SystemModel& model, const std::vector<OutputColumn>& cols, double t,
                const Eigen::Ref<const Eigen::VectorXd>& x2, const std::vector<machine::DiffValues>& x1,
                std::span<double> out) {
    // Algebraic closures are computed at most once per machine per row.
    std::vector<std::optional<machine::AlgValues>> alg(model.machines.size());
    for (std::size_t c = 0; c < cols.size(); ++c) {
        const auto& col = cols[c];
        switch (col.kind) {
            case Kind::bus_voltage: {
                const auto& ref = model.net.bus_nodes[static_cast<std::size_t>(col.bus)][static_cast<std::size_t>(col.phase)];
                if (ref.state >= 0) {
                    out[c] = x2[ref.state];
                } else if (ref.input >= 0) {
                    const auto& slot = model.net.inputs[static_cast<std::size_t>(ref.input)];
                    out[c] = network::source_value(model.topo.sources[static_cast<std::size_t>(slot.owner)],
                                                   slot.phase, t);
                } else {
                    out[c] = 0.0;
                }
                break;
            }
            case Kind::branch_current: {
                const int i = model.net.state_index(col.name);
                out[c] = i >= 0 ? x2[i] : 0.0;
                break;
            }
            case Kind::machine_state:
                out[c] = x1[static_cast<std::size_t>(col.machine)][static_cast<std::size_t>(col.var)];
                break;
            case Kind::machine_algebraic: {
                const auto m = static_cast<std::size_t>(col.machine);
                if (!alg[m]) {
                    const auto& mu = model.machines[m];
                    alg[m] = machine::machine_algebraic_point(mu.params, mu.coeffs, mu.gov_ptr(), x1[m],
                                                              terminal_voltages(model, m, x2));
                }
                out[c] = (*alg[m])[static_cast<std::size_t>(col.var)];
                break;
            }
        }
    }
}

}  // namespace sasemt::model
