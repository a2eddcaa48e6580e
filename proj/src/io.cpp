#include "mlk/io.hpp"

#include <charconv>
#include <filesystem>
#include <fstream>
#include <system_error>

#include "json.hpp"

#include "mlk/errors.hpp"

namespace mlk {

std::string format_double(double v) {
  char buf[32];
  const auto res = std::to_chars(buf, buf + sizeof(buf), v);
  return std::string(buf, res.ptr);
}

void write_matrix_csv(std::ostream& os, const Matrix& m) {
  for (std::size_t i = 0; i < m.rows(); ++i) {
    for (std::size_t j = 0; j < m.cols(); ++j) {
      if (j) os << ',';
      os << format_double(m(i, j));
    }
    os << '\n';
  }
}

void write_trajectory_csv(std::ostream& os, const Trajectory& traj) {
  const std::size_t n = traj.states.empty() ? 0 : traj.front().theta.size();
  os << 't';
  for (std::size_t i = 0; i < n; ++i) os << ",theta_" << i;
  os << '\n';
  for (const PhaseState& s : traj.states) {
    os << format_double(s.t);
    for (double th : s.theta) os << ',' << format_double(th);
    os << '\n';
  }
}

void write_order_parameter_csv(std::ostream& os, const Trajectory& traj) {
  os << "t,R\n";
  for (const PhaseState& s : traj.states)
    os << format_double(s.t) << ',' << format_double(order_parameter(s.theta)) << '\n';
}

void write_comparison_csv(std::ostream& os, std::span<const double> t,
                          std::span<const double> r_full,
                          std::span<const double> r_reduced) {
  if (t.size() != r_full.size() || t.size() != r_reduced.size())
    throw ParameterError("write_comparison_csv: series lengths differ");
  os << "t,R_full,R_reduced\n";
  for (std::size_t i = 0; i < t.size(); ++i)
    os << format_double(t[i]) << ',' << format_double(r_full[i]) << ','
       << format_double(r_reduced[i]) << '\n';
}

std::string spectrum_report_text(const SpectrumReport& report) {
  nlohmann::ordered_json doc;
  doc["eigenvalues"] = report.eigenvalues;
  auto& prov = doc["provenance"] = nlohmann::ordered_json::array();
  for (const EigProvenance& p : report.provenance) {
    nlohmann::ordered_json entry;
    if (p.branch == Branch::Layer) {
      entry["branch"] = "layer";
      entry["layer_index"] = p.layer_index;
    } else {
      entry["branch"] = "reduced";
    }
    prov.push_back(std::move(entry));
  }
  doc["verdict"] = to_string(report.verdict);
  doc["zero_tolerance"] = report.zero_tolerance;
  doc["lambdas"] = report.lambdas;
  return doc.dump(2) + "\n";
}

void write_file(const std::string& path, const std::string& content) {
  const std::filesystem::path p(path);
  if (p.has_parent_path()) {
    std::error_code ec;
    std::filesystem::create_directories(p.parent_path(), ec);
    if (ec)
      throw ConfigError("cannot create directory " + p.parent_path().string() + ": " +
                        ec.message());
  }
  std::ofstream out(p, std::ios::binary);
  if (!out) throw ConfigError("cannot open " + path + " for writing");
  out << content;
  if (!out) throw ConfigError("write to " + path + " failed");
}

}  // namespace mlk
