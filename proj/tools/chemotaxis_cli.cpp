// Command-line driver: regime, run, sweep, presets.

#include <CLI11.hpp>

#include <cstdio>
#include <iostream>
#include <string>
#include <vector>

#include "chemotaxis/chemotaxis.hpp"

namespace {

using namespace chemotaxis;

struct Source {
  std::string config;
  std::string preset;
  std::vector<std::string> overrides;
};

ParsedConfig load(const Source& src) {
  if (src.config.empty() == src.preset.empty()) throw ConfigError(0, "give exactly one of --config or --preset");
  ParsedConfig parsed = src.preset.empty() ? parse_config(ConfigDocument::load(src.config)) : load_preset(src.preset);
  for (const auto& o : src.overrides) {
    const auto eq = o.find('=');
    if (eq == std::string::npos) throw ConfigError(0, "override must be key=value, got '" + o + "'");
    apply_setting(parsed.run, ConfigDocument::trim(o.substr(0, eq)), ConfigDocument::trim(o.substr(eq + 1)));
  }
  parsed.run.validate();
  return parsed;
}

void add_source(CLI::App* cmd, Source& src) {
  cmd->add_option("--config", src.config, "configuration file");
  cmd->add_option("--preset", src.preset, "built-in preset name");
  cmd->add_option("--override", src.overrides, "key=value applied after the configuration")->take_all();
}

int cmd_regime(const Source& src) {
  ParsedConfig parsed;
  try {
    parsed = load(src);
  } catch (const std::exception& e) {
    std::cerr << "error: " << e.what() << "\n";
    return 1;
  }
  const ModelParams& p = parsed.run.params;
  std::optional<double> mass, volume;
  try {
    const Mesh mesh = build_mesh(parsed.run.mesh);
    mass = integrate(initial_condition(mesh, parsed.run.initial), mesh);
    volume = mesh.domain_volume();
  } catch (const std::exception& e) {
    std::cerr << "warning: no mass bound (" << e.what() << ")\n";
  }
  const RegimeReport r = regime_report(p, mass, volume);
  std::cout << io::regime_text(p, r);
  return r.gamma_ok ? 0 : 2;
}

int cmd_run(const Source& src, const std::string& out) {
  const ParsedConfig parsed = load(src);
  std::cerr << mesh_summary(build_mesh(parsed.run.mesh)) << "\n";
  const RunResult r = execute_run(parsed.run, out, parsed.label);
  std::cout << io::verdict_text(r.verdict, parsed.run.blowup);
  if (r.rejection) std::cout << "rejection=" << *r.rejection << "\n";
  return 0;
}

int cmd_sweep(const Source& src, const std::string& out, int workers) {
  const ParsedConfig parsed = load(src);
  if (parsed.sweep.empty()) std::cerr << "warning: no [sweep] axes; running the base configuration once\n";
  const auto outcomes = run_sweep(parsed, out, workers);
  std::cout << sweep_csv(outcomes);
  return 0;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"Finite-volume attraction-repulsion chemotaxis simulator"};
  app.require_subcommand(1);

  Source regime_src, run_src, sweep_src;
  std::string run_out = "out", sweep_out = "sweep_out";
  int workers = 1;

  auto* regime = app.add_subcommand("regime", "print the regime report; exit 0 if the gamma condition holds, 2 if not");
  add_source(regime, regime_src);
  auto* run = app.add_subcommand("run", "run one simulation");
  add_source(run, run_src);
  run->add_option("--out", run_out, "output directory");
  auto* sweep = app.add_subcommand("sweep", "run the Cartesian product of the [sweep] axes");
  add_source(sweep, sweep_src);
  sweep->add_option("--out", sweep_out, "output directory");
  sweep->add_option("--workers", workers, "concurrent runs")->check(CLI::PositiveNumber);
  auto* list = app.add_subcommand("presets", "list built-in presets");
  std::string show;
  list->add_option("--show", show, "print the configuration text of one preset");

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    return app.exit(e) == 0 ? 0 : 1;
  }

  try {
    if (*regime) return cmd_regime(regime_src);
    if (*run) return cmd_run(run_src, run_out);
    if (*sweep) return cmd_sweep(sweep_src, sweep_out, workers);
    if (!show.empty()) {
      std::cout << find_preset(show).text;
      return 0;
    }
    for (const auto& p : builtin_presets()) std::printf("%-12s %s\n", std::string(p.name).c_str(), std::string(p.description).c_str());
    return 0;
  } catch (const std::exception& e) {
    std::cerr << "error: " << e.what() << "\n";
    return 1;
  }
}
