#include "mlk/reduction.hpp"

#include <algorithm>
#include <cmath>
#include <string>

#include "mlk/dynamics.hpp"

namespace mlk {

namespace {

bool all_equal(const std::vector<std::size_t>& v) {
  return std::all_of(v.begin(), v.end(), [&](std::size_t n) { return n == v.front(); });
}

}  // namespace

ReducedNetwork reduce(const MultilayerNetwork& net) {
  const std::size_t m = net.layer_count();
  ReducedNetwork red;
  red.size = m;
  red.layer_sizes = net.layer_sizes();
  red.omega = net.omega;
  red.symmetric = all_equal(red.layer_sizes);
  red.rbar = Matrix(m, m);
  for (std::size_t l = 0; l < m; ++l)
    for (std::size_t k = 0; k < m; ++k)
      if (k != l) red.rbar(l, k) = static_cast<double>(red.layer_sizes[k]) * net.inter(l, k);
  return red;
}

ReducedNetwork reduce_adjacency(const Matrix& full,
                                const std::vector<std::size_t>& layer_sizes,
                                double omega) {
  const std::size_t m = layer_sizes.size();
  std::size_t total = 0;
  for (std::size_t n : layer_sizes) total += n;
  if (!full.is_square() || full.rows() != total)
    throw ParameterError("reduce: adjacency size does not match layer sizes");

  std::vector<std::size_t> offsets(m + 1, 0);
  for (std::size_t l = 0; l < m; ++l) offsets[l + 1] = offsets[l] + layer_sizes[l];

  ReducedNetwork red;
  red.size = m;
  red.layer_sizes = layer_sizes;
  red.omega = omega;
  red.symmetric = all_equal(layer_sizes);
  red.rbar = Matrix(m, m);
  for (std::size_t l = 0; l < m; ++l) {
    for (std::size_t k = 0; k < m; ++k) {
      if (k == l) continue;
      Matrix block(layer_sizes[l], layer_sizes[k]);
      for (std::size_t i = 0; i < layer_sizes[l]; ++i)
        for (std::size_t j = 0; j < layer_sizes[k]; ++j)
          block(i, j) = full(offsets[l] + i, offsets[k] + j);
      try {
        red.rbar(l, k) = validate_row_regular(block);
      } catch (const RegularityError& e) {
        throw RegularityError("block (" + std::to_string(l) + "," +
                              std::to_string(k) + "): " + e.what());
      }
    }
  }
  return red;
}

std::vector<double> broadcast(std::span<const double> theta_bar,
                              std::span<const std::size_t> layer_sizes) {
  if (theta_bar.size() != layer_sizes.size())
    throw ParameterError("broadcast: phase vector and layer sizes differ in length");
  std::vector<double> theta;
  std::size_t total = 0;
  for (std::size_t n : layer_sizes) total += n;
  theta.reserve(total);
  for (std::size_t l = 0; l < layer_sizes.size(); ++l)
    theta.insert(theta.end(), layer_sizes[l], theta_bar[l]);
  return theta;
}

BroadcastCheck is_broadcast_state(std::span<const double> theta,
                                  std::span<const std::size_t> layer_sizes,
                                  double tol) {
  std::size_t total = 0;
  for (std::size_t n : layer_sizes) total += n;
  if (theta.size() != total)
    throw ParameterError("is_broadcast_state: phase vector length does not match layer sizes");

  BroadcastCheck check;
  check.is_broadcast = true;
  check.layer_spread.reserve(layer_sizes.size());
  std::size_t offset = 0;
  for (std::size_t n : layer_sizes) {
    // Spread relative to the layer's first phase, with differences wrapped to
    // (-pi, pi] so states straddling the branch cut still register as equal.
    double lo = 0.0, hi = 0.0;
    for (std::size_t i = 1; i < n; ++i) {
      const double d = wrap_phase(theta[offset + i] - theta[offset]);
      lo = std::min(lo, d);
      hi = std::max(hi, d);
    }
    const double spread = hi - lo;
    check.layer_spread.push_back(spread);
    check.max_spread = std::max(check.max_spread, spread);
    if (spread > tol) check.is_broadcast = false;
    offset += n;
  }
  return check;
}

}  // namespace mlk
