#include "fluxsim/cli/commands.hpp"

#include <CLI11.hpp>

#include <algorithm>
#include <filesystem>
#include <fstream>
#include <optional>

#include "fluxsim/cli/config.hpp"
#include "fluxsim/cli/csv.hpp"
#include "fluxsim/harness.hpp"

namespace fluxsim::cli {
namespace {

namespace fs = std::filesystem;

/// Bad paths and unwritable outputs count as usage errors.
class UsageError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

std::ofstream open_output(const fs::path& path) {
  if (path.has_parent_path()) {
    std::error_code ec;
    fs::create_directories(path.parent_path(), ec);
  }
  std::ofstream out(path, std::ios::binary);
  if (!out) {
    throw UsageError("cannot open '" + path.string() + "' for writing");
  }
  return out;
}

void finish(std::ofstream& out, const fs::path& path) {
  out.close();
  if (!out) {
    throw UsageError("failed writing '" + path.string() + "'");
  }
}

std::string scenario_names() {
  std::string names;
  for (const auto& s : canned_scenarios()) {
    names += names.empty() ? "" : ", ";
    names += s.name;
  }
  return names;
}

struct SimulateArgs {
  std::string config;
  std::string out;
  std::optional<std::uint64_t> seed;
};

struct ScenarioArgs {
  std::string name;
  std::string config;
  std::string out_dir;
  std::optional<std::uint64_t> seed;
};

struct SweepArgs {
  std::string config;
  std::string scenario;
  std::string axis;
  std::string out;
  std::optional<std::uint64_t> seed;
};

int cmd_simulate(const SimulateArgs& a, std::ostream& out) {
  const RunConfig config = load_config(a.config);
  const fs::path path = a.out.empty() ? fs::path(config.output) : fs::path(a.out);
  if (path.empty()) {
    throw UsageError("no output path: pass --out or set 'output' in the config");
  }
  // The ground truth involves no randomness, so the seed has nothing to drive here.
  const Trace trace = simulate_scenario_truth(config.scenario);
  auto file = open_output(path);
  write_trace_csv(file, trace);
  finish(file, path);
  out << "wrote " << trace.records.size() << " samples to " << path.string() << '\n';
  return kSuccess;
}

/// Resolves a canned name or a config path into a scenario and its seed.
std::pair<Scenario, std::uint64_t> resolve(const std::string& name, const std::string& config_path,
                                           std::optional<std::uint64_t> seed) {
  if (!name.empty() && !config_path.empty()) {
    throw UsageError("give either a scenario name or --config, not both");
  }
  if (!config_path.empty()) {
    const RunConfig config = load_config(config_path);
    return {config.scenario, seed.value_or(config.seed)};
  }
  if (name.empty()) {
    throw UsageError("a scenario name or --config is required");
  }
  auto canned = find_canned_scenario(name);
  if (!canned) {
    throw UsageError("unknown scenario '" + name + "'; valid names: " + scenario_names());
  }
  return {*canned, seed.value_or(1)};
}

int cmd_scenario(const ScenarioArgs& a, std::ostream& out) {
  const auto [scenario, seed] = resolve(a.name, a.config, a.seed);
  const ScenarioResult result = run_scenario(scenario, seed);

  const fs::path dir = a.out_dir;
  const fs::path trace_path = dir / (scenario.name + "_trace.csv");
  const fs::path metrics_path = dir / (scenario.name + "_metrics.csv");
  auto trace_file = open_output(trace_path);
  write_scenario_csv(trace_file, result);
  finish(trace_file, trace_path);
  auto metrics_file = open_output(metrics_path);
  write_metrics_csv(metrics_file, scenario.name, result.metrics);
  finish(metrics_file, metrics_path);

  out << scenario.name << ": rms=" << format_double(result.metrics.rms)
      << " diverged=" << (result.metrics.diverged ? "true" : "false") << '\n';
  return kSuccess;
}

int cmd_sweep(const SweepArgs& a, std::ostream& out, std::ostream& err) {
  const SweepAxis axis = [&] {
    try {
      return SweepAxis::parse(a.axis);
    } catch (const std::invalid_argument& e) {
      throw UsageError(std::string("bad --axis: ") + e.what());
    }
  }();
  const auto [base, seed] = resolve(a.scenario, a.config, a.seed);
  const auto cells = sweep(base, axis, seed);

  const fs::path path = a.out;
  auto file = open_output(path);
  write_sweep_csv(file, axis, cells);
  finish(file, path);

  const auto failed = std::count_if(cells.begin(), cells.end(), [](const SweepCell& c) { return !c.metrics; });
  out << "wrote " << cells.size() << " rows to " << path.string() << '\n';
  if (failed > 0) {
    err << "error: " << failed << " sweep value(s) failed; see the error column\n";
    return kNumericalFailure;
  }
  return kSuccess;
}

}  // namespace

int run(const std::vector<std::string>& args, std::ostream& out, std::ostream& err) {
  CLI::App app{"Induction machine flux estimator simulator", "fluxsim"};
  app.require_subcommand(1);

  SimulateArgs sim;
  auto* simulate = app.add_subcommand("simulate", "Simulate the machine and write the ground-truth trace");
  simulate->add_option("--config", sim.config, "Config file")->required();
  simulate->add_option("--out", sim.out, "Output CSV (defaults to the config's output key)");
  simulate->add_option("--seed", sim.seed, "Random seed (accepted for symmetry; the plant is deterministic)");

  ScenarioArgs sc;
  auto* scenario = app.add_subcommand("scenario", "Run a canned or configured scenario");
  scenario->add_option("name", sc.name, "Canned scenario name");
  scenario->add_option("--config", sc.config, "Config file instead of a canned name");
  scenario->add_option("--out-dir", sc.out_dir, "Output directory")->required();
  scenario->add_option("--seed", sc.seed, "Random seed (overrides the config)");

  SweepArgs sw;
  auto* sweep_cmd = app.add_subcommand("sweep", "Run a scenario once per axis value");
  sweep_cmd->add_option("--config", sw.config, "Base config file");
  sweep_cmd->add_option("--scenario", sw.scenario, "Canned base scenario instead of a config");
  sweep_cmd->add_option("--axis", sw.axis, "Axis spec, <param>=v1,v2,...")->required();
  sweep_cmd->add_option("--out", sw.out, "Output CSV")->required();
  sweep_cmd->add_option("--seed", sw.seed, "Random seed (overrides the config)");

  auto* list = app.add_subcommand("list-scenarios", "Print the canned scenario names");

  std::vector<std::string> reversed(args.rbegin(), args.rend());
  try {
    app.parse(reversed);
  } catch (const CLI::CallForHelp&) {
    out << app.help();
    return kSuccess;
  } catch (const CLI::ParseError& e) {
    err << "error: " << e.what() << '\n';
    return kUsageError;
  }

  try {
    if (simulate->parsed()) {
      return cmd_simulate(sim, out);
    }
    if (scenario->parsed()) {
      return cmd_scenario(sc, out);
    }
    if (sweep_cmd->parsed()) {
      return cmd_sweep(sw, out, err);
    }
    if (list->parsed()) {
      for (const auto& s : canned_scenarios()) {
        out << s.name << '\n';
      }
      return kSuccess;
    }
  } catch (const ConfigError& e) {
    err << "config error: " << e.what() << '\n';
    return kUsageError;
  } catch (const UsageError& e) {
    err << "error: " << e.what() << '\n';
    return kUsageError;
  } catch (const SimulationError& e) {
    err << "numerical failure: " << e.what() << '\n';
    return kNumericalFailure;
  } catch (const NonFiniteError& e) {
    err << "numerical failure: " << e.what() << '\n';
    return kNumericalFailure;
  } catch (const std::invalid_argument& e) {
    err << "error: " << e.what() << '\n';
    return kUsageError;
  }
  return kUsageError;
}

}  // namespace fluxsim::cli
