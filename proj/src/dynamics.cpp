#include "mlk/dynamics.hpp"

#include <algorithm>
#include <cmath>
#include <string>

#include "mlk/rng.hpp"

namespace mlk {

namespace {

// sin(theta_j - theta_i) = sin(theta_j) cos(theta_i) - cos(theta_j) sin(theta_i),
// so one evaluation is two matrix-vector products instead of n^2 sine calls.
void rhs_from_phasors(const Matrix& a, double omega, std::span<const double> sin_t,
                      std::span<const double> cos_t, std::span<double> a_sin,
                      std::span<double> a_cos, std::span<double> out) {
  matvec(a, sin_t, a_sin);
  matvec(a, cos_t, a_cos);
  for (std::size_t i = 0; i < out.size(); ++i)
    out[i] = omega + cos_t[i] * a_sin[i] - sin_t[i] * a_cos[i];
}

bool all_finite(std::span<const double> v) {
  return std::all_of(v.begin(), v.end(), [](double x) { return std::isfinite(x); });
}

}  // namespace

void kuramoto_rhs_into(const Matrix& a, double omega, std::span<const double> theta,
                       std::span<double> out, std::span<double> scratch) {
  const std::size_t n = theta.size();
  if (!a.is_square() || a.rows() != n)
    throw ParameterError("kuramoto_rhs: adjacency is " + std::to_string(a.rows()) +
                         "x" + std::to_string(a.cols()) + " but phase vector has length " +
                         std::to_string(n));
  if (out.size() != n || scratch.size() < 4 * n)
    throw ParameterError("kuramoto_rhs: output/scratch size mismatch");
  auto sin_t = scratch.subspan(0, n);
  auto cos_t = scratch.subspan(n, n);
  auto a_sin = scratch.subspan(2 * n, n);
  auto a_cos = scratch.subspan(3 * n, n);
  for (std::size_t i = 0; i < n; ++i) {
    sin_t[i] = std::sin(theta[i]);
    cos_t[i] = std::cos(theta[i]);
  }
  rhs_from_phasors(a, omega, sin_t, cos_t, a_sin, a_cos, out);
}

std::vector<double> kuramoto_rhs(const Matrix& a, double omega,
                                 std::span<const double> theta) {
  std::vector<double> out(theta.size());
  std::vector<double> scratch(4 * theta.size());
  kuramoto_rhs_into(a, omega, theta, out, scratch);
  return out;
}

MultilayerRhs::MultilayerRhs(const MultilayerNetwork& net)
    : net_(net), offsets_(net.layer_offsets()) {
  const std::size_t total = offsets_.back();
  sin_.resize(total);
  cos_.resize(total);
  intra_s_.resize(total);
  intra_c_.resize(total);
}

void MultilayerRhs::operator()(std::span<const double> theta,
                               std::span<double> out) const {
  const std::size_t total = offsets_.back();
  const std::size_t m = net_.layer_count();
  if (theta.size() != total || out.size() != total)
    throw ParameterError("multilayer rhs: phase vector length " +
                         std::to_string(theta.size()) + " does not match network size " +
                         std::to_string(total));
  for (std::size_t i = 0; i < total; ++i) {
    sin_[i] = std::sin(theta[i]);
    cos_[i] = std::cos(theta[i]);
  }
  // Per-layer phasor sums drive the all-ones inter-layer blocks.
  std::vector<double> layer_sin(m, 0.0), layer_cos(m, 0.0);
  for (std::size_t l = 0; l < m; ++l) {
    double s = 0.0, c = 0.0;
    for (std::size_t i = offsets_[l]; i < offsets_[l + 1]; ++i) {
      s += sin_[i];
      c += cos_[i];
    }
    layer_sin[l] = s;
    layer_cos[l] = c;
  }
  for (std::size_t l = 0; l < m; ++l) {
    const std::size_t o = offsets_[l];
    const std::size_t n = net_.layers[l].size;
    double inter_sin = 0.0, inter_cos = 0.0;
    for (std::size_t k = 0; k < m; ++k) {
      if (k == l) continue;
      inter_sin += net_.inter(l, k) * layer_sin[k];
      inter_cos += net_.inter(l, k) * layer_cos[k];
    }
    matvec(net_.layers[l].adjacency, std::span<const double>(sin_.data() + o, n),
           std::span<double>(intra_s_.data() + o, n));
    matvec(net_.layers[l].adjacency, std::span<const double>(cos_.data() + o, n),
           std::span<double>(intra_c_.data() + o, n));
    for (std::size_t i = o; i < o + n; ++i)
      out[i] = net_.omega + cos_[i] * (intra_s_[i] + inter_sin) -
               sin_[i] * (intra_c_[i] + inter_cos);
  }
}

Trajectory integrate_rk4(const RhsFn& rhs, std::vector<double> theta0,
                         const SimulationParams& params, std::string label) {
  if (!(params.dt > 0.0) || !std::isfinite(params.dt))
    throw ParameterError("integrate: dt must be positive and finite");
  if (params.t_end < 0.0 || !std::isfinite(params.t_end))
    throw ParameterError("integrate: t_end must be nonnegative and finite");
  if (params.record_every < 1)
    throw ParameterError("integrate: record_every must be >= 1");
  if (!all_finite(theta0))
    throw ParameterError("integrate: initial phases must be finite");

  const std::size_t n = theta0.size();
  const auto nsteps = static_cast<std::size_t>(std::llround(params.t_end / params.dt));

  Trajectory traj;
  traj.label = std::move(label);
  traj.params = params;
  traj.states.reserve(nsteps / params.record_every + 2);
  traj.states.push_back({0.0, theta0});

  std::vector<double> k1(n), k2(n), k3(n), k4(n), tmp(n);
  std::vector<double>& theta = theta0;
  const double dt = params.dt;

  for (std::size_t step = 1; step <= nsteps; ++step) {
    rhs(theta, k1);
    for (std::size_t i = 0; i < n; ++i) tmp[i] = theta[i] + 0.5 * dt * k1[i];
    rhs(tmp, k2);
    for (std::size_t i = 0; i < n; ++i) tmp[i] = theta[i] + 0.5 * dt * k2[i];
    rhs(tmp, k3);
    for (std::size_t i = 0; i < n; ++i) tmp[i] = theta[i] + dt * k3[i];
    rhs(tmp, k4);
    for (std::size_t i = 0; i < n; ++i)
      theta[i] += dt / 6.0 * (k1[i] + 2.0 * k2[i] + 2.0 * k3[i] + k4[i]);

    if (!all_finite(theta))
      throw DivergenceError("integration diverged at step " + std::to_string(step), step);

    if (step % params.record_every == 0 || step == nsteps)
      traj.states.push_back({static_cast<double>(step) * dt, theta});
  }
  return traj;
}

Trajectory integrate_rk4(const Matrix& a, std::vector<double> theta0,
                         const SimulationParams& params, std::string label) {
  std::vector<double> scratch(4 * theta0.size());
  auto rhs = [&a, &params, &scratch](std::span<const double> th, std::span<double> out) {
    kuramoto_rhs_into(a, params.omega, th, out, scratch);
  };
  return integrate_rk4(RhsFn(rhs), std::move(theta0), params, std::move(label));
}

double order_parameter(std::span<const double> theta) {
  if (theta.empty()) throw ParameterError("order_parameter: empty phase vector");
  double s = 0.0, c = 0.0;
  for (double th : theta) {
    s += std::sin(th);
    c += std::cos(th);
  }
  const double n = static_cast<double>(theta.size());
  return std::min(1.0, std::hypot(c / n, s / n));
}

std::vector<double> order_parameter_series(const Trajectory& traj) {
  std::vector<double> r;
  r.reserve(traj.size());
  for (const auto& state : traj.states) r.push_back(order_parameter(state.theta));
  return r;
}

std::vector<double> twisted_state(std::size_t m, long p) {
  if (m < 1) throw ParameterError("twisted_state: m must be >= 1");
  std::vector<double> theta(m);
  for (std::size_t j = 0; j < m; ++j)
    theta[j] = -(2.0 * std::numbers::pi * static_cast<double>(p) * static_cast<double>(j)) /
               static_cast<double>(m);
  return theta;
}

std::vector<double> perturb(std::span<const double> theta, double amplitude,
                            std::uint64_t seed) {
  if (amplitude < 0.0 || !std::isfinite(amplitude))
    throw ParameterError("perturb: amplitude must be >= 0");
  std::mt19937_64 gen(seed);
  std::vector<double> out(theta.size());
  for (std::size_t i = 0; i < theta.size(); ++i)
    out[i] = theta[i] + amplitude * uniform_open_pi(gen);
  return out;
}

Trajectory rescale_time(Trajectory traj, double factor) {
  if (!(factor > 0.0) || !std::isfinite(factor))
    throw ParameterError("rescale_time: factor must be > 0");
  for (auto& state : traj.states) state.t /= factor;
  traj.params.dt /= factor;
  traj.params.t_end /= factor;
  return traj;
}

}  // namespace mlk
