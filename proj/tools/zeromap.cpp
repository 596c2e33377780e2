// zeromap: run one experiment and write its report files.
//
//   zeromap sieve --N 10 --out runs/sieve
//   zeromap tower --cascade 8 --depth 8 --itinerary_N 100000
//   zeromap disjoint --c mobius --map "logistic r=3.569945" --x 0.5 --N 10^6
//   zeromap mls --config mls.json --epsilon 0.05

#include <iostream>
#include <map>
#include <optional>
#include <string>
#include <vector>

#include <CLI11.hpp>

#include "zeromap/harness.hpp"

namespace {

using zeromap::harness::ExperimentConfig;

const std::vector<std::string> kMapKeys{"map", "cascade"};
const std::vector<std::string> kTowerKeys{"x0", "depth", "burn_in", "orbit_length", "margin"};
const std::vector<std::string> kProbeKeys{"epsilon", "delta", "N", "pairs", "checkpoints"};

std::vector<std::string> join(std::initializer_list<std::vector<std::string>> parts) {
  std::vector<std::string> out;
  for (const auto& p : parts) out.insert(out.end(), p.begin(), p.end());
  return out;
}

struct CommandSpec {
  std::string name;
  std::string help;
  std::vector<std::string> keys;
  std::vector<std::string> flags;
};

std::vector<CommandSpec> command_specs() {
  return {
      {"sieve", "Möbius values mu(1..N)", {"N"}, {}},
      {"oscillation", "Weyl-sum oscillation test of a sequence",
       {"c", "N", "lambda", "grid", "floor", "slack", "checkpoints", "schedule"}, {}},
      {"screen", "periodic-orbit entropy screen (optionally Perron value of --matrix)",
       join({kMapKeys, {"p_max", "grid", "tol", "matrix"}}), {}},
      {"perron", "maximal eigenvalue of a 0-1 transition matrix", {"matrix"}, {}},
      {"cascade", "superstable parameter s_k of the logistic cascade", {"k"}, {}},
      {"tower", "build and verify the nested interval tower",
       join({kMapKeys, kTowerKeys,
             {"samples", "screen_p_max", "screen_grid", "itinerary_N", "itinerary_x"}}),
       {"force"}},
      {"odometer", "cylinder census and progression densities of the adding machine",
       {"depth", "w", "n", "N", "target", "source"}, {}},
      {"mls", "mean Li-Yorke sensitivity and equicontinuity probes on the tower sample",
       join({kMapKeys, kTowerKeys, kProbeKeys}), {}},
      {"attract", "mean attraction of x to the tower's minimal set",
       join({kMapKeys, kTowerKeys, kProbeKeys, {"x"}}), {}},
      {"disjoint", "Cesàro averages of c_n phi(f^n x)",
       join({kMapKeys, {"c", "phi", "x", "N", "checkpoints", "schedule"}}), {}},
  };
}

struct Invocation {
  std::map<std::string, std::optional<std::string>> values;
  std::map<std::string, bool> flags;
};

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"Zero-entropy interval map experiments"};
  app.require_subcommand(1);
  app.set_version_flag("--version", zeromap::harness::version());

  std::string config_path;
  std::string out_dir;
  std::optional<std::uint64_t> seed;
  std::string format = "both";

  const auto specs = command_specs();
  std::map<std::string, Invocation> invocations;
  for (const auto& spec : specs) {
    auto* sub = app.add_subcommand(spec.name, spec.help);
    auto& inv = invocations[spec.name];
    for (const auto& key : spec.keys) {
      sub->add_option("--" + key, inv.values[key], key);
    }
    for (const auto& flag : spec.flags) {
      sub->add_flag("--" + flag, inv.flags[flag], flag);
    }
    sub->add_option("--config", config_path, "JSON config file; flags win");
    sub->add_option("--out", out_dir, "output directory (default $ZEROMAP_OUTPUT_DIR or .)");
    sub->add_option("--seed", seed, "random seed");
    sub->add_option("--format", format, "json, csv or both")->check(CLI::IsMember({"json", "csv", "both"}));
  }

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    const int code = app.exit(e);
    return code == 0 ? 0 : 2;
  }

  const auto* sub = app.get_subcommands().front();
  const auto& name = sub->get_name();
  const auto& inv = invocations[name];

  try {
    ExperimentConfig cfg;
    if (!config_path.empty()) {
      cfg = zeromap::harness::load_config(config_path);
      if (!cfg.command.empty() && cfg.command != name) {
        throw zeromap::harness::ValidationError(
            "command", "config file is for '" + cfg.command + "', not '" + name + "'");
      }
    }
    cfg.command = name;
    for (const auto& [key, value] : inv.values) {
      if (value) cfg.parameters[key] = *value;
    }
    for (const auto& [key, on] : inv.flags) {
      if (on) cfg.parameters[key] = "true";
    }
    if (seed) cfg.seed = *seed;
    if (!out_dir.empty()) cfg.output_dir = out_dir;
    if (cfg.output_dir.empty()) cfg.output_dir = zeromap::harness::default_output_dir();

    const auto bundle = zeromap::harness::run_experiment(cfg);
    const auto written = zeromap::harness::emit_report(
        bundle, cfg.output_dir, zeromap::harness::parse_format(format));
    for (const auto& p : written) std::cout << p.string() << '\n';
    return 0;
  } catch (const std::exception& e) {
    std::cerr << "zeromap " << name << ": " << e.what() << '\n';
    return zeromap::harness::exit_code_for(e);
  }
}
