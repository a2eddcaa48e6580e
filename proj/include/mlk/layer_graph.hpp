#pragma once

#include <cstdint>
#include <string>
#include <vector>

#include "mlk/matrix.hpp"

namespace mlk {

/// One layer of a multilayer network: an undirected weighted graph given by
/// its dense adjacency matrix. Instances are immutable after construction
/// and always satisfy: symmetric adjacency, zero diagonal, nonnegative
/// entries. `connected` is established by traversal at construction time.
struct LayerGraph {
  std::size_t size = 0;
  Matrix adjacency;
  std::string label;
  bool connected = false;

  /// Weighted degree of node i (row sum of the adjacency).
  double degree(std::size_t i) const { return adjacency.row_sum(i); }
};

/// Validates the structural invariants and fills in the connectivity flag.
LayerGraph make_layer(Matrix adjacency, std::string label);

/// Ring with periodic boundary conditions: node i is linked with weight w to
/// i+-1, ..., i+-k (mod n). Every row sum equals 2*k*w.
LayerGraph make_ring_circulant(std::size_t n, std::size_t k, double w,
                               std::string label = "ring");

/// Complete graph with uniform weight w.
LayerGraph make_complete(std::size_t n, double w, std::string label = "complete");

/// Seeded Erdos-Renyi G(n, p) with weight w on each present edge, retried
/// with a fresh seeded stream until connected (at most 100 regenerations).
LayerGraph make_random_connected(std::size_t n, double p, double w,
                                 std::uint64_t seed, std::string label = "random");

/// Weighted graph Laplacian: diag(degrees) - adjacency.
Matrix laplacian(const LayerGraph& g);

/// Returns the common row sum of a row-regular (semimagic) matrix; rows are
/// compared against row 0 with absolute tolerance 1e-12.
double validate_row_regular(const Matrix& b);

/// Connectivity of the graph with edge set {(i,j) : a(i,j) > 0}, by traversal.
bool is_connected_adjacency(const Matrix& a);

}  // namespace mlk
