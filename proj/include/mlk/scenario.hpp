#pragma once

#include <cstdint>
#include <optional>
#include <string>
#include <vector>

#include "mlk/dynamics.hpp"
#include "mlk/multilayer.hpp"
#include "mlk/reduction.hpp"
#include "mlk/stability.hpp"

namespace mlk {

/// How to build one layer graph.
struct GeneratorSpec {
  enum class Kind { Ring, Complete, Random };
  Kind kind = Kind::Ring;
  std::size_t n = 0;
  std::size_t k = 0;       // ring: neighbors per direction
  double w = 1.0;          // edge weight
  double p = 0.1;          // random: edge probability
  std::uint64_t seed = 0;  // random
};

/// Inter-layer coupling pattern. Complete and Ring use the uniform epsilon;
/// Explicit carries the whole M x M matrix.
struct InterSpec {
  enum class Kind { Complete, Ring, Explicit };
  Kind kind = Kind::Complete;
  double epsilon = 0.0;
  Matrix matrix;
};

/// Initial condition for the reduced system.
struct InitialSpec {
  enum class Kind { Random, Twisted, Explicit };
  Kind kind = Kind::Random;
  std::uint64_t seed = 0;     // random: i.i.d. uniform on (-pi, pi)
  long p = 0;                 // twisted winding number
  std::vector<double> theta;  // explicit reduced phases, length M
};

struct PerturbationSpec {
  enum class Mode { Reduced, Full };
  double amplitude = 0.0;
  std::uint64_t seed = 0;
  /// Reduced perturbs the reduced state before broadcasting (layer-constant,
  /// keeps the two systems comparable sample by sample); Full perturbs every
  /// oscillator of the broadcast state independently.
  Mode mode = Mode::Reduced;
};

struct OutputSpec {
  std::string dir = ".";
  bool trajectories = false;  // also dump full phase trajectories
};

struct ScenarioConfig {
  std::string name = "scenario";
  std::size_t layer_count = 0;
  /// One shared generator (applied to every layer) or one entry per layer.
  /// A shared random generator seeds layer l with seed + l.
  std::vector<GeneratorSpec> layer_generators;
  InterSpec inter;
  double omega = 0.0;
  InitialSpec initial;
  PerturbationSpec perturbation;
  SimulationParams integration;  // omega field is filled from ScenarioConfig
  OutputSpec output;
};

/// Parses and validates a JSON config document. Unknown keys, type
/// mismatches, and invariant violations raise ConfigError naming the
/// offending field. Defaults: dt=0.01, t_end=50, record_every=10, omega=0.
ScenarioConfig parse_config(const std::string& text);

/// Builds the multilayer network described by the config.
MultilayerNetwork build_network(const ScenarioConfig& cfg);

/// The reduced initial condition (before any perturbation).
std::vector<double> initial_reduced_state(const ScenarioConfig& cfg);

/// Outcome of one paired full/reduced run.
struct RunReport {
  std::string name;
  std::vector<double> times;
  std::vector<double> r_full;
  std::vector<double> r_reduced;
  std::vector<double> broadcast_spread;  // max per-layer spread, per sample
  double max_broadcast_spread = 0.0;
  std::vector<double> final_full_wrapped;
  std::vector<double> final_reduced_wrapped;
  /// Present when the config asks for trajectory dumps.
  std::optional<Trajectory> full_trajectory;
  std::optional<Trajectory> reduced_trajectory;
  double wall_seconds = 0.0;
  std::uint64_t ic_seed = 0;
  std::uint64_t perturb_seed = 0;
  std::string sweep_parameter;  // empty outside sweeps
  std::optional<double> sweep_value;
};

/// Builds the network, forms the (optionally perturbed) initial conditions,
/// integrates the full and the reduced system over the same grid, and
/// collects both order-parameter series plus the broadcast spread.
RunReport run_compare(const ScenarioConfig& cfg);

/// One run per value, identical seeds across runs, executed concurrently.
/// parameter is "amplitude" (perturbation amplitude) or "epsilon" (uniform
/// inter coupling; rejected for explicit inter matrices).
std::vector<RunReport> run_sweep(const ScenarioConfig& cfg,
                                 const std::string& parameter,
                                 const std::vector<double>& values);

/// Simulation consistency check attached to a stability analysis.
struct CrossCheck {
  Verdict verdict = Verdict::Marginal;
  bool consistent = false;
  double final_distance = 0.0;  // wrapped distance mod global shift at t_end
  double max_distance = 0.0;
  std::string detail;
};

struct StabilityOutcome {
  SpectrumReport reduced;
  SpectrumReport full;
  std::optional<CrossCheck> cross_check;
};

/// Spectral analysis at the configured equilibrium (initial condition must
/// be twisted or explicit). With cross_check, additionally integrates the
/// perturbed full system and tests the verdict dynamically.
StabilityOutcome run_stability(const ScenarioConfig& cfg, bool cross_check);

/// Max deviation of theta from ref after removing the best global shift:
/// half the spread of the wrapped per-oscillator deviations.
double dist_mod_shift(std::span<const double> theta, std::span<const double> ref);

/// Writes the CSV/JSON artifacts for one run into out_dir and returns the
/// list of paths written.
std::vector<std::string> emit_run_report(const RunReport& report,
                                         const ScenarioConfig& cfg,
                                         const std::string& out_dir);

/// Writes spectrum reports (and the cross-check record when present).
std::vector<std::string> emit_stability_outcome(const StabilityOutcome& outcome,
                                                const ScenarioConfig& cfg,
                                                const std::string& out_dir);

}  // namespace mlk
