#pragma once

#include <span>
#include <vector>

#include "mlk/multilayer.hpp"

namespace mlk {

/// The M x M row-sum system: entry (l, k) is the row sum of block (l, k) of
/// the full adjacency, so one node stands in for each layer. The diagonal is
/// stored as zero (it never enters the dynamics). `symmetric` is false when
/// unequal layer sizes make the row-sum matrix asymmetric; that case is
/// flagged here and rejected by the stability analysis.
struct ReducedNetwork {
  std::size_t size = 0;
  Matrix rbar;
  std::vector<std::size_t> layer_sizes;
  double omega = 0.0;
  bool symmetric = true;
};

/// Reduce a multilayer network. Off-diagonal entries are N_k * inter(l, k),
/// exact by construction for the all-ones inter-layer blocks.
ReducedNetwork reduce(const MultilayerNetwork& net);

/// Reduce an externally supplied full adjacency partitioned by layer_sizes.
/// Every off-diagonal block must pass the row-regularity check.
ReducedNetwork reduce_adjacency(const Matrix& full,
                                const std::vector<std::size_t>& layer_sizes,
                                double omega = 0.0);

/// Repeat each reduced phase across its layer, in layer order.
std::vector<double> broadcast(std::span<const double> theta_bar,
                              std::span<const std::size_t> layer_sizes);

struct BroadcastCheck {
  bool is_broadcast = false;
  std::vector<double> layer_spread;  // max wrapped phase spread per layer
  double max_spread = 0.0;
};

/// True iff within each layer the wrapped phase spread is <= tol.
BroadcastCheck is_broadcast_state(std::span<const double> theta,
                                  std::span<const std::size_t> layer_sizes,
                                  double tol = 1e-8);

}  // namespace mlk
