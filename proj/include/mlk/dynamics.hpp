#pragma once

#include <cmath>
#include <cstdint>
#include <functional>
#include <numbers>
#include <span>
#include <string>
#include <vector>

#include "mlk/matrix.hpp"
#include "mlk/multilayer.hpp"

namespace mlk {

/// Wrap to (-pi, pi].
inline double wrap_phase(double x) {
  double w = std::remainder(x, 2.0 * std::numbers::pi);
  if (w <= -std::numbers::pi) w += 2.0 * std::numbers::pi;
  return w;
}

struct PhaseState {
  double t = 0.0;
  std::vector<double> theta;  // radians, unwrapped
};

struct SimulationParams {
  double dt = 0.01;
  double t_end = 50.0;
  double omega = 0.0;
  std::size_t record_every = 10;
};

/// Sampled phase trajectory. Sample times increase strictly with uniform
/// spacing dt * record_every; when the step count is not a multiple of
/// record_every the final state is appended as one extra, closer sample.
struct Trajectory {
  std::vector<PhaseState> states;
  std::string label;
  SimulationParams params;

  std::size_t size() const { return states.size(); }
  const PhaseState& front() const { return states.front(); }
  const PhaseState& back() const { return states.back(); }
};

/// Phase velocities d(theta)/dt for the Kuramoto model on an arbitrary dense
/// adjacency: omega + sum_j A(i,j) sin(theta_j - theta_i).
std::vector<double> kuramoto_rhs(const Matrix& a, double omega,
                                 std::span<const double> theta);

/// Allocation-free variant used by the integrator.
void kuramoto_rhs_into(const Matrix& a, double omega, std::span<const double> theta,
                       std::span<double> out, std::span<double> scratch);

/// Right-hand side evaluator exploiting the multilayer block structure: the
/// all-ones inter-layer blocks reduce to per-layer phasor sums, so one
/// evaluation costs O(sum_l N_l^2) instead of O((sum_l N_l)^2).
class MultilayerRhs {
 public:
  explicit MultilayerRhs(const MultilayerNetwork& net);

  void operator()(std::span<const double> theta, std::span<double> out) const;

  std::size_t dimension() const { return offsets_.back(); }

 private:
  const MultilayerNetwork& net_;
  std::vector<std::size_t> offsets_;
  mutable std::vector<double> sin_, cos_, intra_s_, intra_c_;
};

using RhsFn = std::function<void(std::span<const double>, std::span<double>)>;

/// Classical fixed-step RK4. Deterministic; throws DivergenceError when a
/// non-finite phase appears, carrying the step index.
Trajectory integrate_rk4(const RhsFn& rhs, std::vector<double> theta0,
                         const SimulationParams& params, std::string label = "");

/// RK4 on a dense adjacency matrix.
Trajectory integrate_rk4(const Matrix& a, std::vector<double> theta0,
                         const SimulationParams& params, std::string label = "");

/// Modulus of the mean unit phasor, in [0, 1].
double order_parameter(std::span<const double> theta);

/// Order parameter at every sample of a trajectory.
std::vector<double> order_parameter_series(const Trajectory& traj);

/// The p-th twisted state on m nodes: theta_j = -2 pi p j / m.
std::vector<double> twisted_state(std::size_t m, long p);

/// theta_i + amplitude * u_i with u_i i.i.d. uniform on (-pi, pi), seeded.
std::vector<double> perturb(std::span<const double> theta, double amplitude,
                            std::uint64_t seed);

/// Re-index sample times as t / factor: the result is the solution of the
/// same model with every coupling scaled by factor (natural frequency zero).
Trajectory rescale_time(Trajectory traj, double factor);

}  // namespace mlk
