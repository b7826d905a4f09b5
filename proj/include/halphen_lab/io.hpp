#ifndef HALPHEN_LAB_IO_HPP
#define HALPHEN_LAB_IO_HPP

#include <iosfwd>
#include <string>
#include <vector>

#include "halphen_lab/flows.hpp"
#include "halphen_lab/geometry.hpp"

namespace hl {

/// Decimal rendering with 17 significant digits.
std::string format_double(double x);

/// RFC 4180 field quoting (only when the field needs it).
std::string csv_field(const std::string& s);
std::vector<std::string> split_csv_line(const std::string& line);

void write_trajectory_csv(std::ostream& os, const Trajectory& traj);
Trajectory read_trajectory_csv(std::istream& is, System sys);

void write_flow_csv(std::ostream& os, const FlowRun& run);

/// JSON documents, pretty-printed with two-space indentation.
std::string trajectory_json(const Trajectory& traj);
/// Per-sample norms of W+, W-, C and s, geometry flags and both endpoint classes.
std::string curvature_report_json(const Trajectory& traj);
/// Trapping verdict, late-time asymptote and isotropy at the end of the run.
std::string flow_summary_json(const FlowRun& run);

} // namespace hl

#endif
