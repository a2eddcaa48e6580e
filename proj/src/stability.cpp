#include "mlk/stability.hpp"

#include <algorithm>
#include <cmath>
#include <cstdio>
#include <string>
#include <utility>
#include <vector>

#include "mlk/dynamics.hpp"
#include "mlk/errors.hpp"
#include "mlk/layer_graph.hpp"

namespace mlk {

namespace {

constexpr double kResidualGate = 1e-8;
constexpr double kSymmetryTol = 1e-9;
constexpr double kOffDiagTarget = 1e-12;  // relative to the Frobenius norm
constexpr double kLaplacianZeroTol = 1e-9;
constexpr double kZeroTolBase = 1e-9;

std::string short_num(double v) {
  char buf[32];
  std::snprintf(buf, sizeof(buf), "%.3g", v);
  return buf;
}

void check_full_preconditions(const MultilayerNetwork& net,
                              std::span<const double> theta_bar_star,
                              const char* where) {
  if (net.layer_count() == 0)
    throw ParameterError(std::string(where) + ": network has no layers");
  if (theta_bar_star.size() != net.layer_count())
    throw ParameterError(std::string(where) + ": expected one phase per layer, got " +
                         std::to_string(theta_bar_star.size()) + " for " +
                         std::to_string(net.layer_count()) + " layers");
  const std::size_t n0 = net.layers[0].size;
  for (std::size_t l = 0; l < net.layer_count(); ++l) {
    if (net.layers[l].size != n0)
      throw AssumptionError(std::string(where) + ": layer sizes differ (layer 0 has " +
                            std::to_string(n0) + " nodes, layer " + std::to_string(l) +
                            " has " + std::to_string(net.layers[l].size) + ")");
    if (!net.layers[l].connected)
      throw AssumptionError(std::string(where) + ": layer " + std::to_string(l) +
                            " is disconnected");
  }
}

}  // namespace

std::string to_string(Verdict v) {
  switch (v) {
    case Verdict::Stable:
      return "stable";
    case Verdict::Unstable:
      return "unstable";
    case Verdict::Marginal:
      return "marginal";
  }
  return "unknown";
}

double reduced_equilibrium_residual(const ReducedNetwork& red,
                                    std::span<const double> theta_bar) {
  if (theta_bar.size() != red.size)
    throw ParameterError("reduced_equilibrium_residual: state has " +
                         std::to_string(theta_bar.size()) + " phases, network has " +
                         std::to_string(red.size) + " layers");
  double worst = 0.0;
  for (std::size_t i = 0; i < red.size; ++i) {
    double s = 0.0;
    for (std::size_t j = 0; j < red.size; ++j) {
      if (j == i) continue;
      s += red.rbar(i, j) * std::sin(theta_bar[j] - theta_bar[i]);
    }
    worst = std::max(worst, std::abs(s));
  }
  return worst;
}

ReducedJacobian jacobian_reduced(const ReducedNetwork& red,
                                 std::span<const double> theta_bar_star) {
  if (theta_bar_star.size() != red.size)
    throw ParameterError("jacobian_reduced: state has " +
                         std::to_string(theta_bar_star.size()) + " phases, network has " +
                         std::to_string(red.size) + " layers");
  const double residual = reduced_equilibrium_residual(red, theta_bar_star);
  if (residual > kResidualGate)
    throw NotAnEquilibriumError(
        "jacobian_reduced: state is not an equilibrium (residual " + short_num(residual) +
            " exceeds " + short_num(kResidualGate) + ")",
        residual);

  Matrix j(red.size, red.size);
  std::vector<double> lambdas(red.size, 0.0);
  for (std::size_t i = 0; i < red.size; ++i) {
    double lambda = 0.0;
    for (std::size_t k = 0; k < red.size; ++k) {
      if (k == i) continue;
      const double c = red.rbar(i, k) * std::cos(theta_bar_star[k] - theta_bar_star[i]);
      j(i, k) = c;
      lambda += c;
    }
    lambdas[i] = lambda;
    j(i, i) = -lambda;
  }
  return {std::move(j), std::move(lambdas)};
}

FullJacobian jacobian_full(const MultilayerNetwork& net,
                           std::span<const double> theta_bar_star) {
  check_full_preconditions(net, theta_bar_star, "jacobian_full");
  ReducedJacobian jr = jacobian_reduced(reduce(net), theta_bar_star);

  const auto offsets = net.layer_offsets();
  const std::size_t total = offsets.back();
  Matrix jm(total, total);
  for (std::size_t l = 0; l < net.layer_count(); ++l) {
    const Matrix lap = laplacian(net.layers[l]);
    const std::size_t base = offsets[l];
    for (std::size_t i = 0; i < lap.rows(); ++i)
      for (std::size_t k = 0; k < lap.cols(); ++k) jm(base + i, base + k) = -lap(i, k);
    for (std::size_t i = 0; i < lap.rows(); ++i)
      jm(base + i, base + i) -= jr.lambdas[l];
  }
  for (std::size_t l = 0; l < net.layer_count(); ++l) {
    for (std::size_t k = 0; k < net.layer_count(); ++k) {
      if (k == l) continue;
      const double c =
          net.inter(l, k) * std::cos(theta_bar_star[k] - theta_bar_star[l]);
      for (std::size_t i = 0; i < net.layers[l].size; ++i)
        for (std::size_t m = 0; m < net.layers[k].size; ++m)
          jm(offsets[l] + i, offsets[k] + m) = c;
    }
  }
  return {std::move(jm), std::move(jr.lambdas), net.layer_sizes()};
}

Matrix jacobian_fd(const Matrix& a, std::span<const double> theta_star, double h) {
  if (!a.is_square())
    throw ParameterError("jacobian_fd: adjacency must be square");
  if (theta_star.size() != a.rows())
    throw ParameterError("jacobian_fd: state has " + std::to_string(theta_star.size()) +
                         " phases for a " + std::to_string(a.rows()) + "-node network");
  if (!(h > 0.0))
    throw ParameterError("jacobian_fd: step must be positive");

  const std::size_t n = a.rows();
  std::vector<double> plus(theta_star.begin(), theta_star.end());
  std::vector<double> minus(plus);
  Matrix j(n, n);
  for (std::size_t col = 0; col < n; ++col) {
    plus[col] = theta_star[col] + h;
    minus[col] = theta_star[col] - h;
    const auto fp = kuramoto_rhs(a, 0.0, plus);
    const auto fm = kuramoto_rhs(a, 0.0, minus);
    for (std::size_t row = 0; row < n; ++row)
      j(row, col) = (fp[row] - fm[row]) / (2.0 * h);
    plus[col] = theta_star[col];
    minus[col] = theta_star[col];
  }
  return j;
}

// Cyclic Jacobi with the classic small-element guards. Rotations only ever
// shrink the off-diagonal Frobenius norm, so the sweep loop terminates for
// any symmetric input; the sweep cap is a safety net.
std::vector<double> eig_symmetric(Matrix s) {
  if (s.empty() || !s.is_square())
    throw ParameterError("eig_symmetric: matrix must be square and nonempty");
  const double asym = s.max_asymmetry();
  if (asym > kSymmetryTol)
    throw AssumptionError("eig_symmetric: input is asymmetric by " + short_num(asym));
  const std::size_t n = s.rows();
  for (std::size_t i = 0; i < n; ++i)
    for (std::size_t j = i + 1; j < n; ++j) {
      const double v = 0.5 * (s(i, j) + s(j, i));
      s(i, j) = s(j, i) = v;
    }

  const double target = kOffDiagTarget * s.norm_frobenius();
  const auto off_frobenius = [&s, n] {
    double acc = 0.0;
    for (std::size_t i = 0; i < n; ++i)
      for (std::size_t j = i + 1; j < n; ++j) acc += s(i, j) * s(i, j);
    return std::sqrt(2.0 * acc);
  };

  constexpr int kMaxSweeps = 64;
  int sweep = 0;
  for (; sweep < kMaxSweeps; ++sweep) {
    if (off_frobenius() <= target) break;
    for (std::size_t p = 0; p + 1 < n; ++p) {
      for (std::size_t q = p + 1; q < n; ++q) {
        const double apq = s(p, q);
        if (apq == 0.0) continue;
        const double g = 100.0 * std::abs(apq);
        const double app = s(p, p);
        const double aqq = s(q, q);
        // Entries too small to move the diagonal at working precision are
        // dropped outright after a few sweeps.
        if (sweep > 3 && std::abs(app) + g == std::abs(app) &&
            std::abs(aqq) + g == std::abs(aqq)) {
          s(p, q) = s(q, p) = 0.0;
          continue;
        }
        const double diff = aqq - app;
        double t;
        if (std::abs(diff) + g == std::abs(diff)) {
          t = apq / diff;
        } else {
          const double theta = 0.5 * diff / apq;
          t = 1.0 / (std::abs(theta) + std::sqrt(1.0 + theta * theta));
          if (theta < 0.0) t = -t;
        }
        const double c = 1.0 / std::sqrt(1.0 + t * t);
        const double sn = t * c;
        const double tau = sn / (1.0 + c);
        s(p, p) = app - t * apq;
        s(q, q) = aqq + t * apq;
        s(p, q) = s(q, p) = 0.0;
        for (std::size_t r = 0; r < n; ++r) {
          if (r == p || r == q) continue;
          const double arp = s(r, p);
          const double arq = s(r, q);
          s(r, p) = s(p, r) = arp - sn * (arq + tau * arp);
          s(r, q) = s(q, r) = arq + sn * (arp - tau * arq);
        }
      }
    }
  }
  if (off_frobenius() > target)
    throw Error("eig_symmetric: Jacobi iteration did not converge in " +
                std::to_string(kMaxSweeps) + " sweeps");

  std::vector<double> eigs(n);
  for (std::size_t i = 0; i < n; ++i) eigs[i] = s(i, i);
  std::sort(eigs.begin(), eigs.end());
  return eigs;
}

Matrix block_row_sum_reduce(const Matrix& full,
                            const std::vector<std::size_t>& layer_sizes,
                            double tol) {
  if (layer_sizes.empty())
    throw ParameterError("block_row_sum_reduce: empty partition");
  std::vector<std::size_t> offsets(layer_sizes.size() + 1, 0);
  for (std::size_t l = 0; l < layer_sizes.size(); ++l)
    offsets[l + 1] = offsets[l] + layer_sizes[l];
  if (!full.is_square() || full.rows() != offsets.back())
    throw ParameterError("block_row_sum_reduce: partition covers " +
                         std::to_string(offsets.back()) + " rows, matrix has " +
                         std::to_string(full.rows()));

  const std::size_t m = layer_sizes.size();
  Matrix out(m, m);
  for (std::size_t l = 0; l < m; ++l) {
    for (std::size_t k = 0; k < m; ++k) {
      double first = 0.0;
      for (std::size_t r = 0; r < layer_sizes[l]; ++r) {
        double sum = 0.0;
        for (std::size_t c = 0; c < layer_sizes[k]; ++c)
          sum += full(offsets[l] + r, offsets[k] + c);
        if (r == 0) {
          first = sum;
        } else if (std::abs(sum - first) > tol) {
          throw RegularityError("block_row_sum_reduce: block (" + std::to_string(l) +
                                ", " + std::to_string(k) + ") row sums differ by " +
                                short_num(std::abs(sum - first)));
        }
      }
      out(l, k) = first;
    }
  }
  return out;
}

SpectrumReport spectrum_via_join(const MultilayerNetwork& net,
                                 std::span<const double> theta_bar_star) {
  check_full_preconditions(net, theta_bar_star, "spectrum_via_join");
  ReducedJacobian jr = jacobian_reduced(reduce(net), theta_bar_star);

  struct Entry {
    double value;
    EigProvenance prov;
  };
  std::vector<Entry> entries;
  entries.reserve(net.total_nodes());

  for (std::size_t l = 0; l < net.layer_count(); ++l) {
    const auto lap_eigs = eig_symmetric(laplacian(net.layers[l]));
    std::size_t zero_index = 0;
    std::size_t zero_count = 0;
    for (std::size_t i = 0; i < lap_eigs.size(); ++i) {
      if (std::abs(lap_eigs[i]) < kLaplacianZeroTol) {
        zero_index = i;
        ++zero_count;
      }
    }
    if (zero_count != 1)
      throw AssumptionError("spectrum_via_join: layer " + std::to_string(l) +
                            " Laplacian has " + std::to_string(zero_count) +
                            " near-zero eigenvalues, expected exactly one (layer must "
                            "be connected)");
    for (std::size_t i = 0; i < lap_eigs.size(); ++i) {
      if (i == zero_index) continue;
      entries.push_back({-lap_eigs[i] - jr.lambdas[l], {Branch::Layer, l}});
    }
  }
  for (double e : eig_symmetric(jr.matrix))
    entries.push_back({e, {Branch::Reduced, 0}});

  std::sort(entries.begin(), entries.end(),
            [](const Entry& a, const Entry& b) { return a.value < b.value; });

  // Infinity norm of the full Jacobian, assembled row by row from the block
  // structure without forming the matrix.
  double norm = 0.0;
  for (std::size_t l = 0; l < net.layer_count(); ++l) {
    double inter_row = 0.0;
    for (std::size_t k = 0; k < net.layer_count(); ++k) {
      if (k == l) continue;
      inter_row += static_cast<double>(net.layers[k].size) *
                   std::abs(net.inter(l, k) *
                            std::cos(theta_bar_star[k] - theta_bar_star[l]));
    }
    for (std::size_t i = 0; i < net.layers[l].size; ++i) {
      const double deg = net.layers[l].degree(i);
      norm = std::max(norm, std::abs(jr.lambdas[l] + deg) + deg + inter_row);
    }
  }

  SpectrumReport report;
  report.eigenvalues.reserve(entries.size());
  report.provenance.reserve(entries.size());
  for (const Entry& e : entries) {
    report.eigenvalues.push_back(e.value);
    report.provenance.push_back(e.prov);
  }
  report.zero_tolerance = kZeroTolBase * std::max(1.0, norm);
  report.lambdas = std::move(jr.lambdas);
  report.verdict = classify_stability(report.eigenvalues, report.zero_tolerance);
  return report;
}

SpectrumReport reduced_spectrum(const ReducedNetwork& red,
                                std::span<const double> theta_bar_star) {
  if (!red.symmetric)
    throw AssumptionError(
        "reduced_spectrum: row-sum matrix is asymmetric (unequal layer sizes)");
  ReducedJacobian jr = jacobian_reduced(red, theta_bar_star);

  SpectrumReport report;
  report.zero_tolerance = kZeroTolBase * std::max(1.0, jr.matrix.norm_inf());
  report.eigenvalues = eig_symmetric(jr.matrix);
  report.provenance.assign(report.eigenvalues.size(), {Branch::Reduced, 0});
  report.lambdas = std::move(jr.lambdas);
  report.verdict = classify_stability(report.eigenvalues, report.zero_tolerance);
  return report;
}

Verdict classify_stability(std::span<const double> eigenvalues, double zero_tol) {
  if (eigenvalues.empty())
    throw ParameterError("classify_stability: empty spectrum");
  if (!(zero_tol > 0.0))
    throw ParameterError("classify_stability: zero tolerance must be positive");
  std::size_t zeros = 0;
  std::size_t negatives = 0;
  std::size_t positives = 0;
  for (double e : eigenvalues) {
    if (std::abs(e) < zero_tol)
      ++zeros;
    else if (e > zero_tol)
      ++positives;
    else if (e < -zero_tol)
      ++negatives;
  }
  if (positives > 0) return Verdict::Unstable;
  if (zeros == 1 && negatives == eigenvalues.size() - 1) return Verdict::Stable;
  return Verdict::Marginal;
}

Verdict classify_stability(const SpectrumReport& report, double zero_tol) {
  return classify_stability(report.eigenvalues, zero_tol);
}

}  // namespace mlk
