#include "mlk/layer_graph.hpp"

#include <cmath>
#include <string>
#include <vector>

#include "mlk/rng.hpp"

namespace mlk {

bool is_connected_adjacency(const Matrix& a) {
  const std::size_t n = a.rows();
  if (n == 0) return false;
  std::vector<char> seen(n, 0);
  std::vector<std::size_t> stack{0};
  seen[0] = 1;
  std::size_t visited = 1;
  while (!stack.empty()) {
    const std::size_t i = stack.back();
    stack.pop_back();
    for (std::size_t j = 0; j < n; ++j) {
      if (!seen[j] && a(i, j) > 0.0) {
        seen[j] = 1;
        ++visited;
        stack.push_back(j);
      }
    }
  }
  return visited == n;
}

LayerGraph make_layer(Matrix adjacency, std::string label) {
  if (!adjacency.is_square() || adjacency.rows() == 0)
    throw ParameterError("layer adjacency must be square and nonempty");
  const std::size_t n = adjacency.rows();
  for (std::size_t i = 0; i < n; ++i) {
    if (adjacency(i, i) != 0.0)
      throw ParameterError("layer adjacency must have zero diagonal (row " +
                           std::to_string(i) + ")");
    for (std::size_t j = 0; j < n; ++j) {
      if (adjacency(i, j) < 0.0 || !std::isfinite(adjacency(i, j)))
        throw ParameterError("layer adjacency entries must be finite and >= 0");
      if (adjacency(i, j) != adjacency(j, i))
        throw ParameterError("layer adjacency must be symmetric (entry " +
                             std::to_string(i) + "," + std::to_string(j) + ")");
    }
  }
  LayerGraph g;
  g.size = n;
  g.connected = is_connected_adjacency(adjacency);
  g.adjacency = std::move(adjacency);
  g.label = std::move(label);
  return g;
}

LayerGraph make_ring_circulant(std::size_t n, std::size_t k, double w, std::string label) {
  if (n < 1) throw ParameterError("ring: n must be >= 1");
  if (k > (n - 1) / 2)
    throw ParameterError("ring: neighbor range k=" + std::to_string(k) +
                         " out of range for n=" + std::to_string(n) +
                         " (max " + std::to_string((n - 1) / 2) + ")");
  if (!(w > 0.0)) throw ParameterError("ring: weight must be > 0");
  Matrix a(n, n);
  for (std::size_t i = 0; i < n; ++i) {
    for (std::size_t d = 1; d <= k; ++d) {
      a(i, (i + d) % n) = w;
      a(i, (i + n - d) % n) = w;
    }
  }
  return make_layer(std::move(a), std::move(label));
}

LayerGraph make_complete(std::size_t n, double w, std::string label) {
  if (n < 1) throw ParameterError("complete: n must be >= 1");
  if (!(w > 0.0)) throw ParameterError("complete: weight must be > 0");
  Matrix a(n, n, w);
  for (std::size_t i = 0; i < n; ++i) a(i, i) = 0.0;
  return make_layer(std::move(a), std::move(label));
}

namespace {
constexpr int kConnectivityRetryBudget = 100;
}

LayerGraph make_random_connected(std::size_t n, double p, double w,
                                 std::uint64_t seed, std::string label) {
  if (n < 1) throw ParameterError("random: n must be >= 1");
  if (!(p > 0.0) || p > 1.0) throw ParameterError("random: p must be in (0, 1]");
  if (!(w > 0.0)) throw ParameterError("random: weight must be > 0");
  for (int attempt = 0; attempt < kConnectivityRetryBudget; ++attempt) {
    // Each attempt draws from its own stream so retries stay reproducible.
    std::seed_seq seq{seed, static_cast<std::uint64_t>(attempt)};
    std::mt19937_64 gen(seq);
    Matrix a(n, n);
    for (std::size_t i = 0; i < n; ++i)
      for (std::size_t j = i + 1; j < n; ++j)
        if (bernoulli(gen, p)) a(i, j) = a(j, i) = w;
    if (is_connected_adjacency(a)) return make_layer(std::move(a), std::move(label));
  }
  throw GenerationError("random: no connected G(n=" + std::to_string(n) +
                        ", p=" + std::to_string(p) + ") within " +
                        std::to_string(kConnectivityRetryBudget) + " regenerations");
}

Matrix laplacian(const LayerGraph& g) {
  const std::size_t n = g.size;
  Matrix l(n, n);
  for (std::size_t i = 0; i < n; ++i) {
    double deg = 0.0;
    for (std::size_t j = 0; j < n; ++j) {
      deg += g.adjacency(i, j);
      l(i, j) = -g.adjacency(i, j);
    }
    l(i, i) = deg;
  }
  return l;
}

double validate_row_regular(const Matrix& b) {
  if (b.empty()) throw ParameterError("row-regularity check on empty matrix");
  constexpr double kTol = 1e-12;
  const double r0 = b.row_sum(0);
  std::string offending;
  for (std::size_t i = 1; i < b.rows(); ++i) {
    if (std::abs(b.row_sum(i) - r0) > kTol) {
      if (!offending.empty()) offending += ", ";
      offending += std::to_string(i);
    }
  }
  if (!offending.empty())
    throw RegularityError("matrix is not row-regular: rows {" + offending +
                          "} differ from row 0 (sum " + std::to_string(r0) + ")");
  return r0;
}

}  // namespace mlk
