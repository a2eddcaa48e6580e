#pragma once

#include <ostream>
#include <span>
#include <string>

#include "mlk/dynamics.hpp"
#include "mlk/matrix.hpp"
#include "mlk/stability.hpp"

namespace mlk {

/// Shortest representation that parses back to the same double. All CSV and
/// report output goes through this, which keeps repeated runs byte-identical.
std::string format_double(double v);

/// Row-major, comma-separated, no header.
void write_matrix_csv(std::ostream& os, const Matrix& m);

/// Header `t,theta_0,...,theta_{n-1}`, one row per sample.
void write_trajectory_csv(std::ostream& os, const Trajectory& traj);

/// Header `t,R`, one row per sample.
void write_order_parameter_csv(std::ostream& os, const Trajectory& traj);

/// Header `t,R_full,R_reduced`; series must have equal lengths.
void write_comparison_csv(std::ostream& os, std::span<const double> t,
                          std::span<const double> r_full,
                          std::span<const double> r_reduced);

/// Structured-text form of a spectrum report (JSON document).
std::string spectrum_report_text(const SpectrumReport& report);

/// Writes content to path, creating parent directories. Throws ConfigError
/// when the file cannot be opened.
void write_file(const std::string& path, const std::string& content);

}  // namespace mlk
