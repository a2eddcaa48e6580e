#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include "doctest.h"

#include <cmath>
#include <numbers>
#include <numeric>
#include <string>
#include <vector>

#include "mlk/dynamics.hpp"
#include "mlk/errors.hpp"
#include "mlk/reduction.hpp"
#include "mlk/rng.hpp"
#include "mlk/stability.hpp"

using namespace mlk;

namespace {

// M complete-coupled layers of equal size n, each a complete graph.
MultilayerNetwork uniform_network(std::size_t m, std::size_t n, double eps) {
  std::vector<LayerGraph> layers;
  for (std::size_t l = 0; l < m; ++l) layers.push_back(make_complete(n, 1.0));
  Matrix inter(m, m);
  for (std::size_t l = 0; l < m; ++l)
    for (std::size_t k = 0; k < m; ++k)
      if (k != l) inter(l, k) = eps;
  return make_multilayer(layers, inter);
}

// M ring layers joined in a ring of layers.
MultilayerNetwork ring_of_rings(std::size_t m, std::size_t n, double eps) {
  std::vector<LayerGraph> layers;
  for (std::size_t l = 0; l < m; ++l) layers.push_back(make_ring_circulant(n, 1, 1.0));
  Matrix inter(m, m);
  for (std::size_t l = 0; l < m; ++l) {
    inter(l, (l + 1) % m) = eps;
    inter((l + 1) % m, l) = eps;
  }
  return make_multilayer(layers, inter);
}

double max_abs_diff(const Matrix& a, const Matrix& b) {
  REQUIRE(a.rows() == b.rows());
  REQUIRE(a.cols() == b.cols());
  double worst = 0.0;
  for (std::size_t i = 0; i < a.rows(); ++i)
    for (std::size_t j = 0; j < a.cols(); ++j)
      worst = std::max(worst, std::abs(a(i, j) - b(i, j)));
  return worst;
}

}  // namespace

TEST_CASE("reduced_equilibrium_residual") {
  const ReducedNetwork red = reduce(uniform_network(3, 5, 1.0));
  CHECK(reduced_equilibrium_residual(red, std::vector<double>(3, 0.4)) == 0.0);
  CHECK(reduced_equilibrium_residual(red, twisted_state(3, 1)) < 1e-9);

  // One layer pulled off the sync manifold by 0.1: the residual at that
  // node is 2 * 5 * sin(0.1).
  const std::vector<double> off{0.1, 0.0, 0.0};
  CHECK(reduced_equilibrium_residual(red, off) ==
        doctest::Approx(10.0 * std::sin(0.1)));

  CHECK_THROWS_AS(reduced_equilibrium_residual(red, std::vector<double>{0.0}),
                  ParameterError);
}

TEST_CASE("jacobian_reduced: two layers in sync") {
  const ReducedNetwork red = reduce(uniform_network(2, 2, 1.0));  // rbar = 2
  const ReducedJacobian j = jacobian_reduced(red, std::vector<double>{0.0, 0.0});
  CHECK(j.matrix(0, 0) == -2.0);
  CHECK(j.matrix(0, 1) == 2.0);
  CHECK(j.matrix(1, 0) == 2.0);
  CHECK(j.matrix(1, 1) == -2.0);
  CHECK(j.lambdas == std::vector<double>{2.0, 2.0});
}

TEST_CASE("jacobian_reduced: three-layer twisted state") {
  // rbar is uniform with c = 5; all pairwise cosines equal -1/2, so the
  // Jacobian is c * (3/2 I - 1/2 ones) with eigenvalues {0, 3c/2, 3c/2}.
  const double c = 5.0;
  const ReducedNetwork red = reduce(uniform_network(3, 5, 1.0));
  const ReducedJacobian j = jacobian_reduced(red, twisted_state(3, 1));

  for (std::size_t i = 0; i < 3; ++i) {
    CHECK(j.lambdas[i] == doctest::Approx(-c));
    CHECK(j.matrix(i, i) == doctest::Approx(c));
    for (std::size_t k = 0; k < 3; ++k)
      if (k != i) CHECK(j.matrix(i, k) == doctest::Approx(-c / 2.0));
    CHECK(std::abs(j.matrix.row_sum(i)) < 1e-10);
  }

  const std::vector<double> eigs = eig_symmetric(j.matrix);
  CHECK(std::abs(eigs[0]) < 1e-12);
  CHECK(eigs[1] == doctest::Approx(1.5 * c));
  CHECK(eigs[2] == doctest::Approx(1.5 * c));
}

TEST_CASE("jacobian_reduced: three-layer sync state") {
  const double c = 5.0;
  const ReducedNetwork red = reduce(uniform_network(3, 5, 1.0));
  const ReducedJacobian j = jacobian_reduced(red, std::vector<double>(3, 0.0));
  const std::vector<double> eigs = eig_symmetric(j.matrix);
  CHECK(eigs[0] == doctest::Approx(-3.0 * c));
  CHECK(eigs[1] == doctest::Approx(-3.0 * c));
  CHECK(std::abs(eigs[2]) < 1e-12);
}

TEST_CASE("jacobian_reduced rejects non-equilibria and carries the residual") {
  const ReducedNetwork red = reduce(uniform_network(3, 5, 1.0));
  const std::vector<double> bad{0.0, 1.0, 2.0};
  const double residual = reduced_equilibrium_residual(red, bad);
  try {
    jacobian_reduced(red, bad);
    FAIL("expected NotAnEquilibriumError");
  } catch (const NotAnEquilibriumError& e) {
    CHECK(e.residual() == residual);
    CHECK(std::string(e.what()).find("not an equilibrium") != std::string::npos);
  }
  CHECK_THROWS_AS(jacobian_reduced(red, std::vector<double>{0.0}), ParameterError);
}

TEST_CASE("jacobian_full: single-node layers collapse to the reduced Jacobian") {
  std::vector<LayerGraph> layers{make_complete(1, 1.0), make_complete(1, 1.0),
                                 make_complete(1, 1.0)};
  Matrix inter(3, 3);
  for (std::size_t l = 0; l < 3; ++l)
    for (std::size_t k = 0; k < 3; ++k)
      if (k != l) inter(l, k) = 0.4;
  const MultilayerNetwork net = make_multilayer(layers, inter);
  const std::vector<double> theta = twisted_state(3, 1);

  const FullJacobian jf = jacobian_full(net, theta);
  const ReducedJacobian jr = jacobian_reduced(reduce(net), theta);
  CHECK(max_abs_diff(jf.matrix, jr.matrix) < 1e-15);
  CHECK(jf.lambdas == jr.lambdas);
}

TEST_CASE("jacobian_full: block layout at the sync state") {
  const double a = 0.7, eps = 0.3;
  std::vector<LayerGraph> layers{make_complete(2, a), make_complete(2, a)};
  Matrix inter(2, 2);
  inter(0, 1) = inter(1, 0) = eps;
  const MultilayerNetwork net = make_multilayer(layers, inter);

  const FullJacobian j = jacobian_full(net, std::vector<double>{0.0, 0.0});
  CHECK(j.layer_sizes == std::vector<std::size_t>{2, 2});
  CHECK(j.lambdas[0] == doctest::Approx(2.0 * eps));

  // Diagonal blocks -L - 2 eps I, off-diagonal blocks eps * ones.
  for (std::size_t base : {std::size_t{0}, std::size_t{2}}) {
    CHECK(j.matrix(base, base) == doctest::Approx(-a - 2.0 * eps));
    CHECK(j.matrix(base, base + 1) == doctest::Approx(a));
    CHECK(j.matrix(base + 1, base) == doctest::Approx(a));
    CHECK(j.matrix(base + 1, base + 1) == doctest::Approx(-a - 2.0 * eps));
  }
  for (std::size_t i = 0; i < 2; ++i)
    for (std::size_t k = 0; k < 2; ++k) {
      CHECK(j.matrix(i, 2 + k) == doctest::Approx(eps));
      CHECK(j.matrix(2 + i, k) == doctest::Approx(eps));
    }
  for (std::size_t r = 0; r < 4; ++r) CHECK(std::abs(j.matrix.row_sum(r)) < 1e-9);
}

TEST_CASE("jacobian_full enforces its structural preconditions") {
  std::vector<LayerGraph> unequal{make_complete(2, 1.0), make_complete(3, 1.0)};
  Matrix inter(2, 2);
  inter(0, 1) = inter(1, 0) = 0.5;
  CHECK_THROWS_AS(jacobian_full(make_multilayer(unequal, inter),
                                std::vector<double>{0.0, 0.0}),
                  AssumptionError);

  std::vector<LayerGraph> disconnected{make_complete(3, 1.0),
                                       make_ring_circulant(3, 0, 1.0)};
  CHECK_THROWS_AS(jacobian_full(make_multilayer(disconnected, inter),
                                std::vector<double>{0.0, 0.0}),
                  AssumptionError);

  CHECK_THROWS_AS(jacobian_full(uniform_network(2, 2, 1.0), std::vector<double>{0.0}),
                  ParameterError);
}

TEST_CASE("finite differences confirm the analytic Jacobians") {
  const ReducedNetwork red = reduce(uniform_network(3, 5, 1.0));
  const std::vector<double> twisted = twisted_state(3, 1);
  const Matrix fd_reduced = jacobian_fd(red.rbar, twisted);
  CHECK(max_abs_diff(fd_reduced, jacobian_reduced(red, twisted).matrix) < 1e-6);

  const MultilayerNetwork net = ring_of_rings(4, 3, 0.2);
  const std::vector<double> theta_bar(4, 0.0);
  const std::vector<double> lifted = broadcast(theta_bar, net.layer_sizes());
  const Matrix fd_full = jacobian_fd(assemble_full(net), lifted);
  CHECK(max_abs_diff(fd_full, jacobian_full(net, theta_bar).matrix) < 1e-6);
}

TEST_CASE("jacobian_fd: edge cases") {
  const Matrix j = jacobian_fd(Matrix(1, 1), std::vector<double>{0.7});
  CHECK(std::abs(j(0, 0)) < 1e-10);
  CHECK_THROWS_AS(jacobian_fd(Matrix(2, 2), std::vector<double>{0.0, 0.0}, 0.0),
                  ParameterError);
  CHECK_THROWS_AS(jacobian_fd(Matrix(2, 2), std::vector<double>{0.0}, 1e-6),
                  ParameterError);
  CHECK_THROWS_AS(jacobian_fd(Matrix(2, 3), std::vector<double>{0.0, 0.0}, 1e-6),
                  ParameterError);
}

TEST_CASE("eig_symmetric: small exact cases") {
  Matrix d(3, 3);
  d(0, 0) = 3.0;
  d(1, 1) = 1.0;
  d(2, 2) = 2.0;
  CHECK(eig_symmetric(d) == std::vector<double>{1.0, 2.0, 3.0});

  Matrix swap(2, 2);
  swap(0, 1) = swap(1, 0) = 1.0;
  const std::vector<double> pm = eig_symmetric(swap);
  CHECK(pm[0] == doctest::Approx(-1.0));
  CHECK(pm[1] == doctest::Approx(1.0));

  const std::vector<double> k3 = eig_symmetric(laplacian(make_complete(3, 1.0)));
  CHECK(std::abs(k3[0]) < 1e-12);
  CHECK(k3[1] == doctest::Approx(3.0));
  CHECK(k3[2] == doctest::Approx(3.0));

  Matrix one(1, 1);
  one(0, 0) = -4.5;
  CHECK(eig_symmetric(one) == std::vector<double>{-4.5});
}

TEST_CASE("eig_symmetric: invariants on a random symmetric matrix") {
  std::mt19937_64 gen(404);
  Matrix s(12, 12);
  for (std::size_t i = 0; i < 12; ++i)
    for (std::size_t j = i; j < 12; ++j)
      s(i, j) = s(j, i) = 2.0 * uniform_open_unit(gen) - 1.0;

  const std::vector<double> eigs = eig_symmetric(s);
  REQUIRE(eigs.size() == 12);
  CHECK(std::is_sorted(eigs.begin(), eigs.end()));

  double trace = 0.0;
  for (std::size_t i = 0; i < 12; ++i) trace += s(i, i);
  const double eig_sum = std::accumulate(eigs.begin(), eigs.end(), 0.0);
  CHECK(std::abs(eig_sum - trace) < 1e-9 * std::max(1.0, s.norm_frobenius()));

  Matrix shifted = s;
  for (std::size_t i = 0; i < 12; ++i) shifted(i, i) += 5.0;
  const std::vector<double> eigs_shifted = eig_symmetric(shifted);
  for (std::size_t i = 0; i < 12; ++i)
    CHECK(std::abs(eigs_shifted[i] - eigs[i] - 5.0) < 1e-10);
}

TEST_CASE("eig_symmetric matches the circulant formula on a large ring") {
  const std::size_t n = 100;
  const std::vector<double> eigs = eig_symmetric(laplacian(make_ring_circulant(n, 1, 1.0)));
  std::vector<double> expected;
  for (std::size_t j = 0; j < n; ++j)
    expected.push_back(2.0 - 2.0 * std::cos(2.0 * std::numbers::pi *
                                            static_cast<double>(j) / static_cast<double>(n)));
  std::sort(expected.begin(), expected.end());
  for (std::size_t i = 0; i < n; ++i) CHECK(std::abs(eigs[i] - expected[i]) < 1e-8);
}

TEST_CASE("eig_symmetric rejects bad input") {
  Matrix asym(2, 2);
  asym(0, 1) = 1.0;
  CHECK_THROWS_AS(eig_symmetric(asym), AssumptionError);
  CHECK_THROWS_AS(eig_symmetric(Matrix()), ParameterError);
  CHECK_THROWS_AS(eig_symmetric(Matrix(2, 3)), ParameterError);
}

TEST_CASE("block_row_sum_reduce recovers the reduced Jacobian from the full one") {
  const MultilayerNetwork net = uniform_network(3, 4, 0.6);
  const std::vector<double> theta = twisted_state(3, 1);
  const FullJacobian jf = jacobian_full(net, theta);
  const ReducedJacobian jr = jacobian_reduced(reduce(net), theta);
  const Matrix back = block_row_sum_reduce(jf.matrix, jf.layer_sizes);
  CHECK(max_abs_diff(back, jr.matrix) < 1e-10);
}

TEST_CASE("block_row_sum_reduce: error paths") {
  CHECK_THROWS_AS(block_row_sum_reduce(Matrix(4, 4), {}), ParameterError);
  CHECK_THROWS_AS(block_row_sum_reduce(Matrix(4, 4), {2, 3}), ParameterError);

  Matrix irregular(4, 4);
  irregular(0, 2) = 1.0;  // block (0,1) rows sum to 1 and 0
  try {
    block_row_sum_reduce(irregular, {2, 2});
    FAIL("expected RegularityError");
  } catch (const RegularityError& e) {
    CHECK(std::string(e.what()).find("block (0, 1)") != std::string::npos);
  }
}

TEST_CASE("spectrum_via_join: two K2 layers, worked by hand") {
  // lambda = 2 eps; each layer Laplacian contributes -2a - 2 eps, and the
  // reduced Jacobian contributes {-4 eps, 0}.
  const double a = 0.7, eps = 0.3;
  std::vector<LayerGraph> layers{make_complete(2, a), make_complete(2, a)};
  Matrix inter(2, 2);
  inter(0, 1) = inter(1, 0) = eps;
  const MultilayerNetwork net = make_multilayer(layers, inter);
  const std::vector<double> sync{0.0, 0.0};

  const SpectrumReport report = spectrum_via_join(net, sync);
  REQUIRE(report.eigenvalues.size() == 4);
  CHECK(report.eigenvalues[0] == doctest::Approx(-2.0 * a - 2.0 * eps));
  CHECK(report.eigenvalues[1] == doctest::Approx(-2.0 * a - 2.0 * eps));
  CHECK(report.eigenvalues[2] == doctest::Approx(-4.0 * eps));
  CHECK(std::abs(report.eigenvalues[3]) < report.zero_tolerance);
  CHECK(report.verdict == Verdict::Stable);
  CHECK(report.lambdas == std::vector<double>{2.0 * eps, 2.0 * eps});

  CHECK(report.provenance[0].branch == Branch::Layer);
  CHECK(report.provenance[1].branch == Branch::Layer);
  CHECK(report.provenance[0].layer_index != report.provenance[1].layer_index);
  CHECK(report.provenance[2].branch == Branch::Reduced);
  CHECK(report.provenance[3].branch == Branch::Reduced);

  // The join must agree with brute force on the assembled Jacobian.
  const std::vector<double> dense = eig_symmetric(jacobian_full(net, sync).matrix);
  for (std::size_t i = 0; i < 4; ++i)
    CHECK(std::abs(report.eigenvalues[i] - dense[i]) < 1e-8);
}

TEST_CASE("spectrum_via_join: single-node layers leave only the reduced branch") {
  std::vector<LayerGraph> layers{make_complete(1, 1.0), make_complete(1, 1.0)};
  Matrix inter(2, 2);
  inter(0, 1) = inter(1, 0) = 0.5;
  const SpectrumReport report =
      spectrum_via_join(make_multilayer(layers, inter), std::vector<double>{0.0, 0.0});
  REQUIRE(report.eigenvalues.size() == 2);
  for (const EigProvenance& p : report.provenance)
    CHECK(p.branch == Branch::Reduced);
  CHECK(report.eigenvalues[0] == doctest::Approx(-1.0));
  CHECK(std::abs(report.eigenvalues[1]) < report.zero_tolerance);
}

TEST_CASE("spectrum_via_join agrees with the dense spectrum on random networks") {
  std::mt19937_64 gen(606);
  for (std::size_t m : {2, 3, 4}) {
    for (std::size_t n : {2, 3, 5}) {
      std::vector<LayerGraph> layers;
      for (std::size_t l = 0; l < m; ++l)
        layers.push_back(make_random_connected(n, 0.8, 1.0, gen()));
      Matrix inter(m, m);
      for (std::size_t l = 0; l < m; ++l)
        for (std::size_t k = l + 1; k < m; ++k)
          inter(l, k) = inter(k, l) = uniform_open_unit(gen);
      const MultilayerNetwork net = make_multilayer(layers, inter);
      const std::vector<double> sync(m, 0.0);

      const SpectrumReport report = spectrum_via_join(net, sync);
      const std::vector<double> dense = eig_symmetric(jacobian_full(net, sync).matrix);
      REQUIRE(report.eigenvalues.size() == dense.size());
      for (std::size_t i = 0; i < dense.size(); ++i)
        CHECK(std::abs(report.eigenvalues[i] - dense[i]) < 1e-8);
      CHECK(report.verdict ==
            classify_stability(dense, report.zero_tolerance));
    }
  }
}

TEST_CASE("spectrum_via_join on a twisted ring of rings matches brute force") {
  const MultilayerNetwork net = ring_of_rings(6, 4, 0.2);
  const std::vector<double> theta = twisted_state(6, 1);
  const SpectrumReport report = spectrum_via_join(net, theta);
  const std::vector<double> dense = eig_symmetric(jacobian_full(net, theta).matrix);
  for (std::size_t i = 0; i < dense.size(); ++i)
    CHECK(std::abs(report.eigenvalues[i] - dense[i]) < 1e-8);
}

TEST_CASE("spectrum_via_join verdicts on reference states") {
  // Three fully coupled layers: the twisted state carries a positive pair
  // 3c/2 and must be unstable; sync must be stable.
  const MultilayerNetwork net = uniform_network(3, 5, 1.0);
  const SpectrumReport twisted = spectrum_via_join(net, twisted_state(3, 1));
  CHECK(twisted.verdict == Verdict::Unstable);
  CHECK(twisted.eigenvalues.back() == doctest::Approx(7.5));
  CHECK(spectrum_via_join(net, std::vector<double>(3, 0.0)).verdict == Verdict::Stable);

  // Ring of eight layers: the cosine at shift 2 pi / 8 is positive, so the
  // p = 1 twisted state survives as a stable equilibrium.
  const MultilayerNetwork ring8 = ring_of_rings(8, 4, 0.2);
  const SpectrumReport rep8 = spectrum_via_join(ring8, twisted_state(8, 1));
  CHECK(rep8.verdict == Verdict::Stable);

  // Ring of four layers: the cosine vanishes at shift pi / 2 and the
  // reduced Jacobian degenerates to zero; nothing decays, nothing grows.
  const MultilayerNetwork ring4 = ring_of_rings(4, 4, 0.2);
  const SpectrumReport rep4 = spectrum_via_join(ring4, twisted_state(4, 1));
  CHECK(rep4.verdict == Verdict::Marginal);
}

TEST_CASE("spectrum_via_join enforces preconditions") {
  std::vector<LayerGraph> disconnected{make_complete(3, 1.0),
                                       make_ring_circulant(3, 0, 1.0)};
  Matrix inter(2, 2);
  inter(0, 1) = inter(1, 0) = 0.5;
  try {
    spectrum_via_join(make_multilayer(disconnected, inter), std::vector<double>{0.0, 0.0});
    FAIL("expected AssumptionError");
  } catch (const AssumptionError& e) {
    CHECK(std::string(e.what()).find("disconnected") != std::string::npos);
  }

  std::vector<LayerGraph> unequal{make_complete(2, 1.0), make_complete(3, 1.0)};
  CHECK_THROWS_AS(
      spectrum_via_join(make_multilayer(unequal, inter), std::vector<double>{0.0, 0.0}),
      AssumptionError);
}

TEST_CASE("reduced_spectrum") {
  const ReducedNetwork red = reduce(uniform_network(3, 5, 1.0));
  const SpectrumReport report = reduced_spectrum(red, std::vector<double>(3, 0.0));
  REQUIRE(report.eigenvalues.size() == 3);
  CHECK(report.eigenvalues[0] == doctest::Approx(-15.0));
  CHECK(report.eigenvalues[1] == doctest::Approx(-15.0));
  CHECK(std::abs(report.eigenvalues[2]) < report.zero_tolerance);
  CHECK(report.verdict == Verdict::Stable);
  for (const EigProvenance& p : report.provenance)
    CHECK(p.branch == Branch::Reduced);

  std::vector<LayerGraph> unequal{make_complete(2, 1.0), make_complete(3, 1.0)};
  Matrix inter(2, 2);
  inter(0, 1) = inter(1, 0) = 0.5;
  const ReducedNetwork lopsided = reduce(make_multilayer(unequal, inter));
  CHECK_THROWS_AS(reduced_spectrum(lopsided, std::vector<double>{0.0, 0.0}),
                  AssumptionError);
}

TEST_CASE("classify_stability") {
  const double tol = 1e-9;
  CHECK(classify_stability(std::vector<double>{-2.0, -1.0, 0.0}, tol) == Verdict::Stable);
  CHECK(classify_stability(std::vector<double>{-1.0, 0.0, 0.5}, tol) == Verdict::Unstable);
  CHECK(classify_stability(std::vector<double>{-1.0, 0.0, 0.0}, tol) == Verdict::Marginal);
  CHECK(classify_stability(std::vector<double>{-1.0, 1e-12, 0.0}, tol) == Verdict::Marginal);
  CHECK(classify_stability(std::vector<double>{-2.0, -1.0}, tol) == Verdict::Marginal);
  CHECK(classify_stability(std::vector<double>{0.0, 2e-9}, tol) == Verdict::Unstable);

  CHECK_THROWS_AS(classify_stability(std::vector<double>{}, tol), ParameterError);
  CHECK_THROWS_AS(classify_stability(std::vector<double>{0.0}, 0.0), ParameterError);

  SpectrumReport report;
  report.eigenvalues = {-1.0, 0.0};
  CHECK(classify_stability(report, tol) == Verdict::Stable);

  CHECK(to_string(Verdict::Stable) == "stable");
  CHECK(to_string(Verdict::Unstable) == "unstable");
  CHECK(to_string(Verdict::Marginal) == "marginal");
}
