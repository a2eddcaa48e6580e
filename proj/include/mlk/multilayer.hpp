#pragma once

#include <vector>

#include "mlk/layer_graph.hpp"
#include "mlk/matrix.hpp"

namespace mlk {

/// M layer graphs joined by mean-field inter-layer couplings: the block
/// between layers l and k is the all-ones matrix scaled by inter(l, k).
/// The inter matrix is symmetric with zero diagonal and nonnegative entries;
/// all oscillators share the natural frequency omega.
struct MultilayerNetwork {
  std::vector<LayerGraph> layers;
  Matrix inter;
  double omega = 0.0;

  std::size_t layer_count() const { return layers.size(); }

  std::size_t total_nodes() const {
    std::size_t n = 0;
    for (const auto& g : layers) n += g.size;
    return n;
  }

  std::vector<std::size_t> layer_sizes() const {
    std::vector<std::size_t> s;
    s.reserve(layers.size());
    for (const auto& g : layers) s.push_back(g.size);
    return s;
  }

  /// Offset of each layer's first node in the concatenated phase vector,
  /// plus a trailing total.
  std::vector<std::size_t> layer_offsets() const {
    std::vector<std::size_t> o(layers.size() + 1, 0);
    for (std::size_t l = 0; l < layers.size(); ++l) o[l + 1] = o[l] + layers[l].size;
    return o;
  }
};

/// Validates the inter-layer coupling matrix against the layer list.
MultilayerNetwork make_multilayer(std::vector<LayerGraph> layers, Matrix inter,
                                  double omega = 0.0);

/// The full block adjacency: layer adjacencies on the diagonal, all-ones
/// blocks scaled by inter(l, k) elsewhere. Node ordering concatenates the
/// layers in order.
Matrix assemble_full(const MultilayerNetwork& net);

}  // namespace mlk
