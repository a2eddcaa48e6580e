// Command-line front end: paired full/reduced Kuramoto runs on multilayer
// networks, parameter sweeps, and linear stability reports, driven by a JSON
// config. Exit codes: 0 success, 1 config error, 2 numerical divergence,
// 3 violated stability assumption.

#include <cstdint>
#include <fstream>
#include <iostream>
#include <optional>
#include <sstream>
#include <string>
#include <vector>

#include "CLI11.hpp"

#include "mlk/errors.hpp"
#include "mlk/io.hpp"
#include "mlk/scenario.hpp"

namespace {

std::string read_file(const std::string& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw mlk::ConfigError("cannot open config file " + path);
  std::ostringstream ss;
  ss << in.rdbuf();
  return ss.str();
}

// --seed S pins every stream: initial condition S, perturbation S+1, random
// layer generators S+2+layer.
void apply_seed_override(mlk::ScenarioConfig& cfg, std::uint64_t s) {
  cfg.initial.seed = s;
  cfg.perturbation.seed = s + 1;
  for (std::size_t i = 0; i < cfg.layer_generators.size(); ++i)
    cfg.layer_generators[i].seed = s + 2 + i;
}

struct CommonArgs {
  std::string config_path;
  std::string out_dir;
  std::optional<std::uint64_t> seed;
};

void add_common(CLI::App* sub, CommonArgs& args) {
  sub->add_option("--config", args.config_path, "Path to the JSON scenario config")
      ->required();
  sub->add_option("--out", args.out_dir, "Output directory (overrides config)");
  sub->add_option("--seed", args.seed, "Override every configured seed");
}

mlk::ScenarioConfig load_config(const CommonArgs& args) {
  mlk::ScenarioConfig cfg = mlk::parse_config(read_file(args.config_path));
  if (args.seed) apply_seed_override(cfg, *args.seed);
  if (!args.out_dir.empty()) cfg.output.dir = args.out_dir;
  return cfg;
}

void print_run_summary(const mlk::RunReport& rep) {
  std::cout << rep.name << ": samples=" << rep.times.size()
            << " final_R_full=" << mlk::format_double(rep.r_full.back())
            << " final_R_reduced=" << mlk::format_double(rep.r_reduced.back())
            << " max_broadcast_spread=" << mlk::format_double(rep.max_broadcast_spread)
            << " wall_s=" << mlk::format_double(rep.wall_seconds) << "\n";
}

void print_spectrum_summary(const char* label, const mlk::SpectrumReport& report) {
  std::cout << label << ": verdict=" << mlk::to_string(report.verdict)
            << " eigenvalues=" << report.eigenvalues.size()
            << " min=" << mlk::format_double(report.eigenvalues.front())
            << " max=" << mlk::format_double(report.eigenvalues.back())
            << " zero_tol=" << mlk::format_double(report.zero_tolerance) << "\n";
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{
      "Kuramoto oscillators on multilayer networks: run the full system next to "
      "its row-sum reduction, sweep parameters, and classify equilibria"};
  app.require_subcommand(1);

  CommonArgs run_args;
  CLI::App* run = app.add_subcommand(
      "run", "Integrate the full and the reduced system, emit comparison CSVs");
  add_common(run, run_args);

  CommonArgs sweep_args;
  std::string sweep_param;
  std::vector<double> sweep_values;
  CLI::App* sweep = app.add_subcommand(
      "sweep", "Repeat a run over a list of values of one parameter");
  add_common(sweep, sweep_args);
  sweep->add_option("--param", sweep_param, "Swept parameter: amplitude or epsilon")
      ->required()
      ->check(CLI::IsMember({"amplitude", "epsilon"}));
  sweep->add_option("--values", sweep_values, "Comma-separated list of values")
      ->required()
      ->delimiter(',');

  CommonArgs stab_args;
  bool cross_check = false;
  CLI::App* stability = app.add_subcommand(
      "stability", "Spectra and verdict at the configured equilibrium");
  add_common(stability, stab_args);
  stability->add_flag("--cross-check", cross_check,
                      "Also integrate the perturbed system and test the verdict");

  CommonArgs validate_args;
  CLI::App* validate = app.add_subcommand("validate", "Parse and validate the config");
  add_common(validate, validate_args);

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    const int code = app.exit(e);
    return code == 0 ? 0 : 1;
  }

  try {
    if (run->parsed()) {
      const mlk::ScenarioConfig cfg = load_config(run_args);
      const mlk::RunReport rep = mlk::run_compare(cfg);
      print_run_summary(rep);
      for (const std::string& path : mlk::emit_run_report(rep, cfg, cfg.output.dir))
        std::cout << "wrote " << path << "\n";
    } else if (sweep->parsed()) {
      const mlk::ScenarioConfig cfg = load_config(sweep_args);
      const auto reports = mlk::run_sweep(cfg, sweep_param, sweep_values);
      for (const mlk::RunReport& rep : reports) {
        print_run_summary(rep);
        for (const std::string& path : mlk::emit_run_report(rep, cfg, cfg.output.dir))
          std::cout << "wrote " << path << "\n";
      }
    } else if (stability->parsed()) {
      const mlk::ScenarioConfig cfg = load_config(stab_args);
      const mlk::StabilityOutcome outcome = mlk::run_stability(cfg, cross_check);
      print_spectrum_summary("reduced", outcome.reduced);
      print_spectrum_summary("full", outcome.full);
      if (outcome.cross_check) {
        std::cout << "cross-check: "
                  << (outcome.cross_check->consistent ? "consistent" : "INCONSISTENT")
                  << " (" << outcome.cross_check->detail << ")\n";
      }
      for (const std::string& path :
           mlk::emit_stability_outcome(outcome, cfg, cfg.output.dir))
        std::cout << "wrote " << path << "\n";
    } else if (validate->parsed()) {
      const mlk::ScenarioConfig cfg = load_config(validate_args);
      std::cout << "config ok: name=" << cfg.name << " layers=" << cfg.layer_count
                << " omega=" << mlk::format_double(cfg.omega)
                << " dt=" << mlk::format_double(cfg.integration.dt)
                << " t_end=" << mlk::format_double(cfg.integration.t_end) << "\n";
    }
  } catch (const mlk::ConfigError& e) {
    std::cerr << "error: " << e.what() << "\n";
    return 1;
  } catch (const mlk::DivergenceError& e) {
    std::cerr << "error: " << e.what() << "\n";
    return 2;
  } catch (const mlk::NotAnEquilibriumError& e) {
    std::cerr << "error: " << e.what() << "\n";
    return 3;
  } catch (const mlk::AssumptionError& e) {
    std::cerr << "error: " << e.what() << "\n";
    return 3;
  } catch (const mlk::RegularityError& e) {
    std::cerr << "error: " << e.what() << "\n";
    return 3;
  } catch (const mlk::Error& e) {
    std::cerr << "error: " << e.what() << "\n";
    return 1;
  } catch (const std::exception& e) {
    std::cerr << "error: " << e.what() << "\n";
    return 1;
  }
  return 0;
}
