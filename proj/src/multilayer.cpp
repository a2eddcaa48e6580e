#include "mlk/multilayer.hpp"

#include <cmath>
#include <string>

namespace mlk {

MultilayerNetwork make_multilayer(std::vector<LayerGraph> layers, Matrix inter,
                                  double omega) {
  const std::size_t m = layers.size();
  if (m == 0) throw ParameterError("multilayer: need at least one layer");
  if (inter.rows() != m || inter.cols() != m)
    throw ParameterError("multilayer: inter matrix must be " + std::to_string(m) +
                         "x" + std::to_string(m));
  if (!std::isfinite(omega)) throw ParameterError("multilayer: omega must be finite");
  for (std::size_t l = 0; l < m; ++l) {
    if (inter(l, l) != 0.0)
      throw ParameterError("multilayer: inter diagonal must be zero (layer " +
                           std::to_string(l) + ")");
    for (std::size_t k = 0; k < m; ++k) {
      if (inter(l, k) < 0.0 || !std::isfinite(inter(l, k)))
        throw ParameterError("multilayer: inter couplings must be finite and >= 0");
      if (inter(l, k) != inter(k, l))
        throw ParameterError("multilayer: inter couplings must be symmetric (pair " +
                             std::to_string(l) + "," + std::to_string(k) + ")");
    }
  }
  MultilayerNetwork net;
  net.layers = std::move(layers);
  net.inter = std::move(inter);
  net.omega = omega;
  return net;
}

Matrix assemble_full(const MultilayerNetwork& net) {
  const auto offsets = net.layer_offsets();
  const std::size_t total = offsets.back();
  const std::size_t m = net.layer_count();
  Matrix a(total, total);
  for (std::size_t l = 0; l < m; ++l) {
    const LayerGraph& g = net.layers[l];
    for (std::size_t i = 0; i < g.size; ++i)
      for (std::size_t j = 0; j < g.size; ++j)
        a(offsets[l] + i, offsets[l] + j) = g.adjacency(i, j);
    for (std::size_t k = 0; k < m; ++k) {
      if (k == l) continue;
      const double eps = net.inter(l, k);
      if (eps == 0.0) continue;
      for (std::size_t i = 0; i < net.layers[l].size; ++i)
        for (std::size_t j = 0; j < net.layers[k].size; ++j)
          a(offsets[l] + i, offsets[k] + j) = eps;
    }
  }
  return a;
}

}  // namespace mlk
