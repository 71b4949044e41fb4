#pragma once

#include <ostream>
#include <string>
#include <utility>
#include <vector>

#include "sasemt/model/trajectory.hpp"

namespace sasemt::io {

using Metadata = std::vector<std::pair<std::string, std::string>>;

/// CSV with `#`-prefixed metadata lines, a header whose first column is t_s,
/// and 17-significant-digit values. `selection` names trajectory columns; the
/// single entry "all" keeps every column. Throws CaseError for an empty or
/// unknown selection and std::runtime_error on I/O failure.
void write_timeseries(const model::Trajectory& traj, const std::vector<std::string>& selection,
                      const std::string& path, const Metadata& meta);
void write_timeseries(const model::Trajectory& traj, const std::vector<std::string>& selection, std::ostream& os,
                      const Metadata& meta);

/// RFC 4180 field quoting.
[[nodiscard]] std::string csv_field(const std::string& s);

/// %.17g formatting.
[[nodiscard]] std::string format_double(double v);

}  // namespace sasemt::io
