#include "mlk/scenario.hpp"

#include <chrono>
#include <cmath>
#include <filesystem>
#include <future>
#include <limits>
#include <random>
#include <sstream>
#include <utility>

#include "json.hpp"

#include "mlk/errors.hpp"
#include "mlk/io.hpp"
#include "mlk/rng.hpp"

namespace mlk {

namespace {

using Json = nlohmann::json;

[[noreturn]] void fail(const std::string& path, const std::string& msg) {
  throw ConfigError("config: " + path + ": " + msg);
}

const Json* find(const Json& obj, const char* key) {
  const auto it = obj.find(key);
  return it == obj.end() ? nullptr : &*it;
}

const Json& require_object(const Json& parent, const std::string& path, const char* key) {
  const Json* v = find(parent, key);
  if (!v) fail(path + "." + key, "missing required field");
  if (!v->is_object()) fail(path + "." + key, "expected an object");
  return *v;
}

void expect_keys(const Json& obj, const std::string& path,
                 std::initializer_list<const char*> allowed) {
  for (auto it = obj.begin(); it != obj.end(); ++it) {
    bool known = false;
    for (const char* a : allowed) {
      if (it.key() == a) {
        known = true;
        break;
      }
    }
    if (!known) fail(path, "unknown key '" + it.key() + "'");
  }
}

double get_double(const Json& obj, const std::string& path, const char* key,
                  std::optional<double> def = std::nullopt) {
  const Json* v = find(obj, key);
  if (!v) {
    if (def) return *def;
    fail(path + "." + key, "missing required field");
  }
  if (!v->is_number()) fail(path + "." + key, "expected a number");
  const double d = v->get<double>();
  if (!std::isfinite(d)) fail(path + "." + key, "must be finite");
  return d;
}

std::int64_t get_int(const Json& obj, const std::string& path, const char* key,
                     std::optional<std::int64_t> def = std::nullopt) {
  const Json* v = find(obj, key);
  if (!v) {
    if (def) return *def;
    fail(path + "." + key, "missing required field");
  }
  if (!v->is_number_integer()) fail(path + "." + key, "expected an integer");
  return v->get<std::int64_t>();
}

std::size_t get_count(const Json& obj, const std::string& path, const char* key,
                      std::optional<std::size_t> def = std::nullopt) {
  const Json* v = find(obj, key);
  if (!v) {
    if (def) return *def;
    fail(path + "." + key, "missing required field");
  }
  if (!v->is_number_integer() || v->get<std::int64_t>() < 0)
    fail(path + "." + key, "expected a nonnegative integer");
  return static_cast<std::size_t>(v->get<std::int64_t>());
}

std::uint64_t get_seed(const Json& obj, const std::string& path, const char* key,
                       std::uint64_t def) {
  const Json* v = find(obj, key);
  if (!v) return def;
  if (!v->is_number_integer() || v->get<std::int64_t>() < 0)
    fail(path + "." + key, "expected a nonnegative integer seed");
  return v->get<std::uint64_t>();
}

std::string get_string(const Json& obj, const std::string& path, const char* key,
                       std::optional<std::string> def = std::nullopt) {
  const Json* v = find(obj, key);
  if (!v) {
    if (def) return *def;
    fail(path + "." + key, "missing required field");
  }
  if (!v->is_string()) fail(path + "." + key, "expected a string");
  return v->get<std::string>();
}

bool get_bool(const Json& obj, const std::string& path, const char* key, bool def) {
  const Json* v = find(obj, key);
  if (!v) return def;
  if (!v->is_boolean()) fail(path + "." + key, "expected a boolean");
  return v->get<bool>();
}

GeneratorSpec parse_generator(const Json& obj, const std::string& path) {
  if (!obj.is_object()) fail(path, "expected an object");
  const std::string type = get_string(obj, path, "type");
  GeneratorSpec g;
  if (type == "ring") {
    expect_keys(obj, path, {"type", "n", "k", "w"});
    g.kind = GeneratorSpec::Kind::Ring;
    g.n = get_count(obj, path, "n");
    g.k = get_count(obj, path, "k");
    g.w = get_double(obj, path, "w", 1.0);
    if (g.n < 1) fail(path + ".n", "must be at least 1");
    if (2 * g.k > g.n - 1)
      fail(path + ".k", "must be at most (n-1)/2 = " + std::to_string((g.n - 1) / 2));
  } else if (type == "complete") {
    expect_keys(obj, path, {"type", "n", "w"});
    g.kind = GeneratorSpec::Kind::Complete;
    g.n = get_count(obj, path, "n");
    g.w = get_double(obj, path, "w", 1.0);
    if (g.n < 1) fail(path + ".n", "must be at least 1");
  } else if (type == "random") {
    expect_keys(obj, path, {"type", "n", "p", "w", "seed"});
    g.kind = GeneratorSpec::Kind::Random;
    g.n = get_count(obj, path, "n");
    g.p = get_double(obj, path, "p", 0.1);
    g.w = get_double(obj, path, "w", 1.0);
    g.seed = get_seed(obj, path, "seed", 0);
    if (g.n < 1) fail(path + ".n", "must be at least 1");
    if (!(g.p > 0.0 && g.p <= 1.0)) fail(path + ".p", "must be in (0, 1]");
  } else {
    fail(path + ".type", "unknown generator '" + type + "' (use ring, complete or random)");
  }
  if (!(g.w > 0.0)) fail(path + ".w", "must be positive");
  return g;
}

InterSpec parse_inter(const Json& obj, const std::string& path, std::size_t m) {
  const std::string type = get_string(obj, path, "type");
  InterSpec spec;
  if (type == "complete" || type == "ring") {
    expect_keys(obj, path, {"type", "epsilon"});
    spec.kind = type == "complete" ? InterSpec::Kind::Complete : InterSpec::Kind::Ring;
    spec.epsilon = get_double(obj, path, "epsilon");
    if (spec.epsilon < 0.0) fail(path + ".epsilon", "must be nonnegative");
    return spec;
  }
  if (type != "explicit")
    fail(path + ".type", "unknown inter spec '" + type + "' (use complete, ring or explicit)");

  expect_keys(obj, path, {"type", "matrix"});
  const Json* rows = find(obj, "matrix");
  if (!rows) fail(path + ".matrix", "missing required field");
  if (!rows->is_array() || rows->size() != m)
    fail(path + ".matrix", "expected " + std::to_string(m) + " rows");
  spec.kind = InterSpec::Kind::Explicit;
  spec.matrix = Matrix(m, m);
  for (std::size_t i = 0; i < m; ++i) {
    const Json& row = (*rows)[i];
    if (!row.is_array() || row.size() != m)
      fail(path + ".matrix[" + std::to_string(i) + "]",
           "expected " + std::to_string(m) + " entries");
    for (std::size_t j = 0; j < m; ++j) {
      if (!row[j].is_number())
        fail(path + ".matrix[" + std::to_string(i) + "][" + std::to_string(j) + "]",
             "expected a number");
      spec.matrix(i, j) = row[j].get<double>();
      if (!std::isfinite(spec.matrix(i, j)))
        fail(path + ".matrix[" + std::to_string(i) + "][" + std::to_string(j) + "]",
             "must be finite");
    }
  }
  for (std::size_t i = 0; i < m; ++i) {
    if (spec.matrix(i, i) != 0.0)
      fail(path + ".matrix", "diagonal entry (" + std::to_string(i) + "," +
                                 std::to_string(i) + ") must be 0");
    for (std::size_t j = i + 1; j < m; ++j) {
      if (spec.matrix(i, j) != spec.matrix(j, i))
        fail(path + ".matrix", "entries (" + std::to_string(i) + "," + std::to_string(j) +
                                   ") and (" + std::to_string(j) + "," +
                                   std::to_string(i) + ") differ");
      if (spec.matrix(i, j) < 0.0)
        fail(path + ".matrix", "entry (" + std::to_string(i) + "," + std::to_string(j) +
                                   ") must be nonnegative");
    }
  }
  return spec;
}

InitialSpec parse_initial(const Json& obj, const std::string& path, std::size_t m) {
  const std::string type = get_string(obj, path, "type");
  InitialSpec spec;
  if (type == "random") {
    expect_keys(obj, path, {"type", "seed"});
    spec.kind = InitialSpec::Kind::Random;
    spec.seed = get_seed(obj, path, "seed", 0);
  } else if (type == "twisted") {
    expect_keys(obj, path, {"type", "p"});
    spec.kind = InitialSpec::Kind::Twisted;
    spec.p = get_int(obj, path, "p");
  } else if (type == "explicit") {
    expect_keys(obj, path, {"type", "theta"});
    spec.kind = InitialSpec::Kind::Explicit;
    const Json* theta = find(obj, "theta");
    if (!theta) fail(path + ".theta", "missing required field");
    if (!theta->is_array() || theta->size() != m)
      fail(path + ".theta", "expected " + std::to_string(m) + " phases (one per layer)");
    for (std::size_t i = 0; i < theta->size(); ++i) {
      if (!(*theta)[i].is_number())
        fail(path + ".theta[" + std::to_string(i) + "]", "expected a number");
      const double v = (*theta)[i].get<double>();
      if (!std::isfinite(v)) fail(path + ".theta[" + std::to_string(i) + "]", "must be finite");
      spec.theta.push_back(v);
    }
  } else {
    fail(path + ".type", "unknown initial condition '" + type +
                             "' (use random, twisted or explicit)");
  }
  return spec;
}

PerturbationSpec parse_perturbation(const Json& obj, const std::string& path) {
  expect_keys(obj, path, {"amplitude", "seed", "mode"});
  PerturbationSpec spec;
  spec.amplitude = get_double(obj, path, "amplitude", 0.0);
  if (spec.amplitude < 0.0) fail(path + ".amplitude", "must be nonnegative");
  spec.seed = get_seed(obj, path, "seed", 0);
  const std::string mode = get_string(obj, path, "mode", "reduced");
  if (mode == "reduced")
    spec.mode = PerturbationSpec::Mode::Reduced;
  else if (mode == "full")
    spec.mode = PerturbationSpec::Mode::Full;
  else
    fail(path + ".mode", "unknown mode '" + mode + "' (use reduced or full)");
  return spec;
}

SimulationParams parse_integration(const Json& obj, const std::string& path) {
  expect_keys(obj, path, {"dt", "t_end", "record_every"});
  SimulationParams p;
  p.dt = get_double(obj, path, "dt", 0.01);
  p.t_end = get_double(obj, path, "t_end", 50.0);
  p.record_every = get_count(obj, path, "record_every", 10);
  if (!(p.dt > 0.0)) fail(path + ".dt", "must be positive");
  if (p.t_end < 0.0) fail(path + ".t_end", "must be nonnegative");
  if (p.record_every < 1) fail(path + ".record_every", "must be at least 1");
  return p;
}

std::string sanitize_name(const std::string& name, const std::string& path) {
  if (name.empty()) fail(path, "must not be empty");
  for (char c : name) {
    const bool ok = (c >= 'a' && c <= 'z') || (c >= 'A' && c <= 'Z') ||
                    (c >= '0' && c <= '9') || c == '_' || c == '-' || c == '.';
    if (!ok) fail(path, "may only contain letters, digits, '_', '-', '.'");
  }
  return name;
}

double steady_seconds(std::chrono::steady_clock::time_point start) {
  return std::chrono::duration<double>(std::chrono::steady_clock::now() - start).count();
}

}  // namespace

ScenarioConfig parse_config(const std::string& text) {
  Json doc;
  try {
    doc = Json::parse(text);
  } catch (const Json::parse_error& e) {
    throw ConfigError(std::string("config: not a valid document: ") + e.what());
  }
  if (!doc.is_object()) throw ConfigError("config: top level must be an object");
  if (doc.empty())
    throw ConfigError("config: empty document; required fields: layers, inter, initial");
  expect_keys(doc, "config",
              {"name", "layers", "inter", "omega", "initial", "perturbation",
               "integration", "output"});

  ScenarioConfig cfg;
  cfg.name = sanitize_name(get_string(doc, "config", "name", "scenario"), "config.name");
  cfg.omega = get_double(doc, "config", "omega", 0.0);

  const Json& layers = require_object(doc, "config", "layers");
  expect_keys(layers, "config.layers", {"count", "generator", "list"});
  const Json* list = find(layers, "list");
  if (list) {
    if (find(layers, "generator"))
      fail("config.layers", "give either 'generator' or 'list', not both");
    if (!list->is_array() || list->empty())
      fail("config.layers.list", "expected a nonempty array of generators");
    for (std::size_t i = 0; i < list->size(); ++i)
      cfg.layer_generators.push_back(
          parse_generator((*list)[i], "config.layers.list[" + std::to_string(i) + "]"));
    cfg.layer_count = get_count(layers, "config.layers", "count", cfg.layer_generators.size());
    if (cfg.layer_count != cfg.layer_generators.size())
      fail("config.layers.count", "does not match the list length " +
                                      std::to_string(cfg.layer_generators.size()));
  } else {
    cfg.layer_count = get_count(layers, "config.layers", "count");
    if (cfg.layer_count < 1) fail("config.layers.count", "must be at least 1");
    const Json* gen = find(layers, "generator");
    if (!gen) fail("config.layers.generator", "missing required field");
    cfg.layer_generators.push_back(parse_generator(*gen, "config.layers.generator"));
  }

  cfg.inter = parse_inter(require_object(doc, "config", "inter"), "config.inter",
                          cfg.layer_count);
  cfg.initial = parse_initial(require_object(doc, "config", "initial"), "config.initial",
                              cfg.layer_count);

  if (const Json* pert = find(doc, "perturbation")) {
    if (!pert->is_object()) fail("config.perturbation", "expected an object");
    cfg.perturbation = parse_perturbation(*pert, "config.perturbation");
  }
  if (const Json* integ = find(doc, "integration")) {
    if (!integ->is_object()) fail("config.integration", "expected an object");
    cfg.integration = parse_integration(*integ, "config.integration");
  }
  if (const Json* output = find(doc, "output")) {
    if (!output->is_object()) fail("config.output", "expected an object");
    expect_keys(*output, "config.output", {"dir", "trajectories"});
    cfg.output.dir = get_string(*output, "config.output", "dir", ".");
    cfg.output.trajectories = get_bool(*output, "config.output", "trajectories", false);
  }
  return cfg;
}

MultilayerNetwork build_network(const ScenarioConfig& cfg) {
  if (cfg.layer_count < 1) throw ConfigError("config: layers.count must be at least 1");
  const bool shared = cfg.layer_generators.size() == 1;
  if (!shared && cfg.layer_generators.size() != cfg.layer_count)
    throw ConfigError("config: layers.list length does not match layers.count");

  std::vector<LayerGraph> layers;
  layers.reserve(cfg.layer_count);
  for (std::size_t l = 0; l < cfg.layer_count; ++l) {
    const GeneratorSpec& g = shared ? cfg.layer_generators[0] : cfg.layer_generators[l];
    const std::string suffix = std::to_string(l);
    switch (g.kind) {
      case GeneratorSpec::Kind::Ring:
        layers.push_back(make_ring_circulant(g.n, g.k, g.w, "ring" + suffix));
        break;
      case GeneratorSpec::Kind::Complete:
        layers.push_back(make_complete(g.n, g.w, "complete" + suffix));
        break;
      case GeneratorSpec::Kind::Random:
        // A shared generator still gets a distinct graph per layer.
        layers.push_back(make_random_connected(g.n, g.p, g.w,
                                               g.seed + (shared ? l : 0),
                                               "random" + suffix));
        break;
    }
  }

  const std::size_t m = cfg.layer_count;
  Matrix inter(m, m);
  switch (cfg.inter.kind) {
    case InterSpec::Kind::Complete:
      for (std::size_t l = 0; l < m; ++l)
        for (std::size_t k = 0; k < m; ++k)
          if (k != l) inter(l, k) = cfg.inter.epsilon;
      break;
    case InterSpec::Kind::Ring:
      for (std::size_t l = 0; l < m; ++l) {
        const std::size_t next = (l + 1) % m;
        const std::size_t prev = (l + m - 1) % m;
        if (next != l) inter(l, next) = cfg.inter.epsilon;
        if (prev != l) inter(l, prev) = cfg.inter.epsilon;
      }
      break;
    case InterSpec::Kind::Explicit:
      inter = cfg.inter.matrix;
      break;
  }
  return make_multilayer(std::move(layers), std::move(inter), cfg.omega);
}

std::vector<double> initial_reduced_state(const ScenarioConfig& cfg) {
  switch (cfg.initial.kind) {
    case InitialSpec::Kind::Random: {
      std::mt19937_64 gen(cfg.initial.seed);
      std::vector<double> theta(cfg.layer_count);
      for (double& t : theta) t = uniform_open_pi(gen);
      return theta;
    }
    case InitialSpec::Kind::Twisted:
      return twisted_state(cfg.layer_count, cfg.initial.p);
    case InitialSpec::Kind::Explicit:
      return cfg.initial.theta;
  }
  throw ConfigError("config: initial: unknown kind");
}

RunReport run_compare(const ScenarioConfig& cfg) {
  const auto start = std::chrono::steady_clock::now();
  const MultilayerNetwork net = build_network(cfg);
  const ReducedNetwork red = reduce(net);
  const auto sizes = net.layer_sizes();

  std::vector<double> theta_bar0 = initial_reduced_state(cfg);
  if (cfg.perturbation.amplitude > 0.0 &&
      cfg.perturbation.mode == PerturbationSpec::Mode::Reduced)
    theta_bar0 = perturb(theta_bar0, cfg.perturbation.amplitude, cfg.perturbation.seed);
  std::vector<double> theta0 = broadcast(theta_bar0, sizes);
  if (cfg.perturbation.amplitude > 0.0 &&
      cfg.perturbation.mode == PerturbationSpec::Mode::Full)
    theta0 = perturb(theta0, cfg.perturbation.amplitude, cfg.perturbation.seed);

  SimulationParams params = cfg.integration;
  params.omega = cfg.omega;

  const MultilayerRhs rhs(net);
  const Trajectory full = integrate_rk4(
      [&rhs](std::span<const double> th, std::span<double> out) { rhs(th, out); },
      std::move(theta0), params, cfg.name + "_full");
  const Trajectory reduced = integrate_rk4(red.rbar, theta_bar0, params,
                                           cfg.name + "_reduced");
  if (full.size() != reduced.size())
    throw Error("run_compare: sample grids of the two systems differ");

  RunReport rep;
  rep.name = cfg.name;
  rep.ic_seed = cfg.initial.seed;
  rep.perturb_seed = cfg.perturbation.seed;
  rep.times.reserve(full.size());
  rep.r_full.reserve(full.size());
  rep.r_reduced.reserve(full.size());
  rep.broadcast_spread.reserve(full.size());
  for (std::size_t i = 0; i < full.size(); ++i) {
    rep.times.push_back(full.states[i].t);
    rep.r_full.push_back(order_parameter(full.states[i].theta));
    rep.r_reduced.push_back(order_parameter(reduced.states[i].theta));
    const BroadcastCheck chk = is_broadcast_state(full.states[i].theta, sizes);
    rep.broadcast_spread.push_back(chk.max_spread);
    rep.max_broadcast_spread = std::max(rep.max_broadcast_spread, chk.max_spread);
  }
  rep.final_full_wrapped.reserve(full.back().theta.size());
  for (double th : full.back().theta) rep.final_full_wrapped.push_back(wrap_phase(th));
  rep.final_reduced_wrapped.reserve(reduced.back().theta.size());
  for (double th : reduced.back().theta)
    rep.final_reduced_wrapped.push_back(wrap_phase(th));
  if (cfg.output.trajectories) {
    rep.full_trajectory = full;
    rep.reduced_trajectory = reduced;
  }
  rep.wall_seconds = steady_seconds(start);
  return rep;
}

std::vector<RunReport> run_sweep(const ScenarioConfig& cfg, const std::string& parameter,
                                 const std::vector<double>& values) {
  if (parameter != "amplitude" && parameter != "epsilon")
    throw ConfigError("sweep: unsupported parameter '" + parameter +
                      "' (use amplitude or epsilon)");
  if (values.empty()) throw ConfigError("sweep: value list is empty");
  for (double v : values)
    if (!std::isfinite(v) || v < 0.0)
      throw ConfigError("sweep: values must be finite and nonnegative");
  if (parameter == "epsilon" && cfg.inter.kind == InterSpec::Kind::Explicit)
    throw ConfigError("sweep: epsilon sweep needs a uniform (complete or ring) inter spec");

  std::vector<std::future<RunReport>> futures;
  futures.reserve(values.size());
  for (double v : values) {
    ScenarioConfig c = cfg;
    if (parameter == "amplitude")
      c.perturbation.amplitude = v;
    else
      c.inter.epsilon = v;
    c.name = cfg.name + "_" + parameter + "_" + format_double(v);
    c.output.trajectories = false;  // sweeps emit series only
    futures.push_back(std::async(std::launch::async, [c] { return run_compare(c); }));
  }

  std::vector<RunReport> reports;
  reports.reserve(values.size());
  for (std::size_t i = 0; i < futures.size(); ++i) {
    RunReport rep = futures[i].get();
    rep.sweep_parameter = parameter;
    rep.sweep_value = values[i];
    reports.push_back(std::move(rep));
  }
  return reports;
}

double dist_mod_shift(std::span<const double> theta, std::span<const double> ref) {
  if (theta.empty() || theta.size() != ref.size())
    throw ParameterError("dist_mod_shift: vectors must be nonempty and equally sized");
  const double base = theta[0] - ref[0];
  double lo = std::numeric_limits<double>::infinity();
  double hi = -std::numeric_limits<double>::infinity();
  for (std::size_t i = 0; i < theta.size(); ++i) {
    const double g = wrap_phase(theta[i] - ref[i] - base);
    lo = std::min(lo, g);
    hi = std::max(hi, g);
  }
  return 0.5 * (hi - lo);
}

namespace {

CrossCheck simulate_cross_check(const MultilayerNetwork& net,
                                std::span<const double> theta_bar_star,
                                Verdict verdict, const ScenarioConfig& cfg) {
  constexpr double kAmplitude = 0.01;
  constexpr double kReturnTol = 1e-3;
  constexpr double kEscapeRadius = 0.1;
  constexpr double kHorizon = 200.0;

  const auto sizes = net.layer_sizes();
  const std::vector<double> ref = broadcast(theta_bar_star, sizes);

  SimulationParams params = cfg.integration;
  params.omega = cfg.omega;
  params.t_end = kHorizon;

  const MultilayerRhs rhs(net);
  const Trajectory traj = integrate_rk4(
      [&rhs](std::span<const double> th, std::span<double> out) { rhs(th, out); },
      perturb(ref, kAmplitude, cfg.perturbation.seed), params, cfg.name + "_crosscheck");

  CrossCheck cc;
  cc.verdict = verdict;
  for (const PhaseState& s : traj.states)
    cc.max_distance = std::max(cc.max_distance, dist_mod_shift(s.theta, ref));
  cc.final_distance = dist_mod_shift(traj.back().theta, ref);

  switch (verdict) {
    case Verdict::Stable:
      cc.consistent = cc.final_distance <= kReturnTol;
      cc.detail = "stable verdict: perturbed run ended at distance " +
                  format_double(cc.final_distance) + " (threshold " +
                  format_double(kReturnTol) + ")";
      break;
    case Verdict::Unstable:
      cc.consistent = cc.max_distance > kEscapeRadius;
      cc.detail = "unstable verdict: perturbed run reached distance " +
                  format_double(cc.max_distance) + " (threshold " +
                  format_double(kEscapeRadius) + ")";
      break;
    case Verdict::Marginal:
      cc.consistent = true;
      cc.detail = "marginal verdict: no dynamical criterion applied";
      break;
  }
  return cc;
}

}  // namespace

StabilityOutcome run_stability(const ScenarioConfig& cfg, bool cross_check) {
  if (cfg.initial.kind == InitialSpec::Kind::Random)
    throw ConfigError(
        "stability: initial condition must be twisted or explicit (an equilibrium), "
        "not random");
  const MultilayerNetwork net = build_network(cfg);
  const ReducedNetwork red = reduce(net);
  const std::vector<double> theta_star = initial_reduced_state(cfg);

  StabilityOutcome outcome{reduced_spectrum(red, theta_star),
                           spectrum_via_join(net, theta_star), std::nullopt};
  if (cross_check)
    outcome.cross_check = simulate_cross_check(net, theta_star, outcome.full.verdict, cfg);
  return outcome;
}

namespace {

std::string join_path(const std::string& dir, const std::string& file) {
  return (std::filesystem::path(dir) / file).string();
}

nlohmann::ordered_json run_meta_json(const RunReport& rep, const ScenarioConfig& cfg) {
  nlohmann::ordered_json meta;
  meta["name"] = rep.name;
  meta["ic_seed"] = rep.ic_seed;
  meta["perturb_seed"] = rep.perturb_seed;
  if (rep.sweep_parameter.empty()) {
    meta["sweep_parameter"] = nullptr;
    meta["sweep_value"] = nullptr;
  } else {
    meta["sweep_parameter"] = rep.sweep_parameter;
    meta["sweep_value"] = *rep.sweep_value;
  }
  meta["omega"] = cfg.omega;
  meta["dt"] = cfg.integration.dt;
  meta["t_end"] = cfg.integration.t_end;
  meta["record_every"] = cfg.integration.record_every;
  if (cfg.inter.kind != InterSpec::Kind::Explicit)
    meta["inter_epsilon"] = rep.sweep_parameter == "epsilon" ? *rep.sweep_value
                                                             : cfg.inter.epsilon;
  meta["perturbation_amplitude"] = rep.sweep_parameter == "amplitude"
                                       ? *rep.sweep_value
                                       : cfg.perturbation.amplitude;
  meta["max_broadcast_spread"] = rep.max_broadcast_spread;
  meta["final_R_full"] = rep.r_full.back();
  meta["final_R_reduced"] = rep.r_reduced.back();
  double max_diff = 0.0;
  for (std::size_t i = 0; i < rep.r_full.size(); ++i)
    max_diff = std::max(max_diff, std::abs(rep.r_full[i] - rep.r_reduced[i]));
  meta["max_R_difference"] = max_diff;
  meta["wall_seconds"] = rep.wall_seconds;
  return meta;
}

}  // namespace

std::vector<std::string> emit_run_report(const RunReport& rep, const ScenarioConfig& cfg,
                                         const std::string& out_dir) {
  std::vector<std::string> written;
  const std::string base = rep.name + "_seed" + std::to_string(rep.ic_seed);

  {
    std::ostringstream os;
    write_comparison_csv(os, rep.times, rep.r_full, rep.r_reduced);
    const std::string path = join_path(out_dir, base + "_compare.csv");
    write_file(path, os.str());
    written.push_back(path);
  }
  {
    std::ostringstream os;
    os << "t,R\n";
    for (std::size_t i = 0; i < rep.times.size(); ++i)
      os << format_double(rep.times[i]) << ',' << format_double(rep.r_full[i]) << '\n';
    const std::string path = join_path(out_dir, base + "_R.csv");
    write_file(path, os.str());
    written.push_back(path);
  }
  {
    const std::string path = join_path(out_dir, base + "_meta.json");
    write_file(path, run_meta_json(rep, cfg).dump(2) + "\n");
    written.push_back(path);
  }
  if (rep.full_trajectory) {
    std::ostringstream os;
    write_trajectory_csv(os, *rep.full_trajectory);
    const std::string path = join_path(out_dir, base + "_full_traj.csv");
    write_file(path, os.str());
    written.push_back(path);
  }
  if (rep.reduced_trajectory) {
    std::ostringstream os;
    write_trajectory_csv(os, *rep.reduced_trajectory);
    const std::string path = join_path(out_dir, base + "_reduced_traj.csv");
    write_file(path, os.str());
    written.push_back(path);
  }
  return written;
}

std::vector<std::string> emit_stability_outcome(const StabilityOutcome& outcome,
                                                const ScenarioConfig& cfg,
                                                const std::string& out_dir) {
  std::vector<std::string> written;
  {
    const std::string path = join_path(out_dir, cfg.name + "_reduced_spectrum.json");
    write_file(path, spectrum_report_text(outcome.reduced));
    written.push_back(path);
  }
  {
    const std::string path = join_path(out_dir, cfg.name + "_full_spectrum.json");
    write_file(path, spectrum_report_text(outcome.full));
    written.push_back(path);
  }
  if (outcome.cross_check) {
    nlohmann::ordered_json doc;
    doc["verdict"] = to_string(outcome.cross_check->verdict);
    doc["consistent"] = outcome.cross_check->consistent;
    doc["final_distance"] = outcome.cross_check->final_distance;
    doc["max_distance"] = outcome.cross_check->max_distance;
    doc["detail"] = outcome.cross_check->detail;
    const std::string path = join_path(out_dir, cfg.name + "_crosscheck.json");
    write_file(path, doc.dump(2) + "\n");
    written.push_back(path);
  }
  return written;
}

}  // namespace mlk
