#include "sasemt/io/timeseries.hpp"

#include <cstdio>
#include <fstream>
#include <stdexcept>

#include "sasemt/error.hpp"

namespace sasemt::io {

std::string csv_field(const std::string& s) {
    if (s.find_first_of(",\"\r\n") == std::string::npos) {
        return s;
    }
    std::string out = "\"";
    for (const char ch : s) {
        if (ch == '"') {
            out += '"';
        }
        out += ch;
    }
    out += '"';
    return out;
}

std::string format_double(double v) {
    char buf[32];
    std::snprintf(buf, sizeof buf, "%.17g", v);
    return buf;
}

void write_timeseries(const model::Trajectory& traj, const std::vector<std::string>& selection, std::ostream& os,
                      const Metadata& meta) {
    if (selection.empty()) {
        throw CaseError("output selection is empty");
    }
    if (traj.rows() == 0) {
        throw CaseError("trajectory is empty");
    }
    std::vector<std::size_t> cols;
    if (selection.size() == 1 && selection.front() == "all") {
        for (std::size_t c = 0; c < traj.cols(); ++c) {
            cols.push_back(c);
        }
    } else {
        for (const auto& name : selection) {
            const int c = traj.column(name);
            if (c < 0) {
                throw CaseError("output column '" + name + "' is not in the trajectory");
            }
            cols.push_back(static_cast<std::size_t>(c));
        }
    }
    for (const auto& [k, v] : meta) {
        os << "# " << k << ": " << v << "\r\n";
    }
    os << "t_s";
    for (const std::size_t c : cols) {
        os << ',' << csv_field(traj.names()[c]);
    }
    os << "\r\n";
    std::string line;
    for (std::size_t r = 0; r < traj.rows(); ++r) {
        line = format_double(traj.t(r));
        for (const std::size_t c : cols) {
            line += ',';
            line += format_double(traj.at(r, c));
        }
        line += "\r\n";
        os << line;
    }
}

void write_timeseries(const model::Trajectory& traj, const std::vector<std::string>& selection,
                      const std::string& path, const Metadata& meta) {
    std::ofstream out(path, std::ios::binary);
    if (!out) {
        throw std::runtime_error("cannot open '" + path + "' for writing");
    }
    write_timeseries(traj, selection, out, meta);
    out.flush();
    if (!out) {
        throw std::runtime_error("write to '" + path + "' failed");
    }
}

}  // namespace sasemt::io
