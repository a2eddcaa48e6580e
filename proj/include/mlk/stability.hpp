#pragma once

#include <span>
#include <string>
#include <vector>

#include "mlk/matrix.hpp"
#include "mlk/multilayer.hpp"
#include "mlk/reduction.hpp"

namespace mlk {

/// Jacobian of the reduced model at an equilibrium. Off-diagonal entry
/// (i, j) is rbar(i, j) * cos(theta_j - theta_i); the diagonal carries
/// -lambda_i, the cosine-weighted total coupling of node i, so every row
/// sums to zero (semimagic with line sum zero).
struct ReducedJacobian {
  Matrix matrix;
  std::vector<double> lambdas;
};

/// Jacobian of the full multilayer model at a broadcast equilibrium, in
/// block form: diagonal blocks -lambda_l I - L_l, off-diagonal blocks
/// inter(l, k) * cos(theta_k - theta_l) * ones.
struct FullJacobian {
  Matrix matrix;
  std::vector<double> lambdas;
  std::vector<std::size_t> layer_sizes;
};

enum class Branch { Layer, Reduced };

struct EigProvenance {
  Branch branch = Branch::Reduced;
  std::size_t layer_index = 0;  // meaningful for Branch::Layer only
};

enum class Verdict { Stable, Unstable, Marginal };

std::string to_string(Verdict v);

/// Eigenvalue multiset of a Jacobian with the origin of each eigenvalue:
/// either a shifted layer-Laplacian branch or the reduced-Jacobian branch.
struct SpectrumReport {
  std::vector<double> eigenvalues;        // ascending
  std::vector<EigProvenance> provenance;  // parallel to eigenvalues
  Verdict verdict = Verdict::Marginal;
  double zero_tolerance = 1e-9;
  std::vector<double> lambdas;
};

/// Max-norm residual of the reduced equilibrium condition,
/// max_i |sum_j rbar(i,j) sin(theta_j - theta_i)|.
double reduced_equilibrium_residual(const ReducedNetwork& red,
                                    std::span<const double> theta_bar);

/// Builds the reduced Jacobian; rejects states whose equilibrium residual
/// exceeds 1e-8 (NotAnEquilibriumError carries the residual).
ReducedJacobian jacobian_reduced(const ReducedNetwork& red,
                                 std::span<const double> theta_bar_star);

/// Builds the full multilayer Jacobian at the broadcast of theta_bar_star.
/// Requires equal layer sizes and connected layers.
FullJacobian jacobian_full(const MultilayerNetwork& net,
                           std::span<const double> theta_bar_star);

/// Central finite differences of the Kuramoto right-hand side, columnwise.
/// Serves as an independent oracle for the analytic Jacobians.
Matrix jacobian_fd(const Matrix& a, std::span<const double> theta_star,
                   double h = 1e-6);

/// All eigenvalues of a symmetric matrix by cyclic Jacobi rotations, sorted
/// ascending. The off-diagonal Frobenius norm is driven below 1e-12 times
/// the input Frobenius norm. Symmetry is checked within 1e-9.
std::vector<double> eig_symmetric(Matrix s);

/// Row-sum reduction of a block-partitioned matrix: entry (l, k) is the
/// common row sum of block (l, k). Row sums within a block must agree
/// within tol.
Matrix block_row_sum_reduce(const Matrix& full,
                            const std::vector<std::size_t>& layer_sizes,
                            double tol = 1e-9);

/// Spectrum of the full Jacobian assembled from its join decomposition:
/// each layer contributes -(Spec(L_l) \ {0}) - lambda_l, the reduced
/// Jacobian contributes its whole spectrum. Never forms the full matrix.
SpectrumReport spectrum_via_join(const MultilayerNetwork& net,
                                 std::span<const double> theta_bar_star);

/// Spectrum report for the reduced Jacobian alone.
SpectrumReport reduced_spectrum(const ReducedNetwork& red,
                                std::span<const double> theta_bar_star);

/// Stable: exactly one zero mode, all other eigenvalues below -zero_tol.
/// Unstable: any eigenvalue above zero_tol. Marginal otherwise.
Verdict classify_stability(std::span<const double> eigenvalues, double zero_tol = 1e-9);
Verdict classify_stability(const SpectrumReport& report, double zero_tol);

}  // namespace mlk
