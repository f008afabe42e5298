#include <CLI11.hpp>

#include <iostream>

#include "latmax/harness/experiments.hpp"
#include "latmax/harness/fixtures.hpp"

namespace h = latmax::harness;

namespace {

std::map<std::string, std::string> parse_assignments(const std::vector<std::string>& items) {
  std::map<std::string, std::string> out;
  for (const auto& s : items) {
    auto [k, v] = h::split_assignment(s);
    out[k] = v;
  }
  return out;
}

// Config file keys are either run options (experiment, out, format, seed) or
// experiment parameters. Flags given on the command line win.
h::ExperimentConfig resolve(const std::string& config_path, const std::string& experiment,
                            const std::vector<std::string>& params, const std::string& out,
                            const std::string& format, const std::string& seed) {
  h::ExperimentConfig cfg;
  std::string fmt = "csv";
  if (!config_path.empty()) {
    for (const auto& [k, v] : h::read_key_values(config_path)) {
      if (k == "experiment") cfg.experiment = v;
      else if (k == "out") cfg.output_dir = v;
      else if (k == "format") fmt = v;
      else if (k == "seed") cfg.seed = h::parse_u64(v, "seed");
      else cfg.params[k] = v;
    }
  }
  if (!experiment.empty()) cfg.experiment = experiment;
  if (!out.empty()) cfg.output_dir = out;
  if (!format.empty()) fmt = format;
  if (!seed.empty()) cfg.seed = h::parse_u64(seed, "seed");
  for (const auto& [k, v] : parse_assignments(params)) cfg.params[k] = v;
  if (cfg.experiment.empty()) throw h::UsageError("no experiment given (--experiment or config file)");
  const auto f = h::format_from_string(fmt);
  if (!f) throw h::UsageError("format must be csv or json, got '" + fmt + "'");
  cfg.format = *f;
  return cfg;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"Greedy-type constants of lattice bases: experiments and fixtures"};
  app.set_version_flag("--version", LATMAX_VERSION);
  app.require_subcommand(1);

  auto* run = app.add_subcommand("run", "Run one experiment and write its report files");
  std::string experiment, out, format, seed, config_path;
  std::vector<std::string> params;
  run->add_option("--experiment,-e", experiment, "experiment id (see `latmax list`)");
  run->add_option("--param,-p", params, "parameter override k=v (repeatable)");
  run->add_option("--out,-o", out, "output directory (default latmax-out)");
  run->add_option("--format,-f", format, "values format: csv or json");
  run->add_option("--seed,-s", seed, "random seed");
  run->add_option("--config,-c", config_path, "key = value config file");

  auto* list = app.add_subcommand("list", "List experiments, fixtures and their parameters");

  auto* fixture = app.add_subcommand("fixture", "Print a construction's witness vector as JSON");
  std::string fixture_id;
  std::vector<std::string> fixture_params;
  fixture->add_option("id", fixture_id, "fixture id")->required();
  fixture->add_option("--param,-p", fixture_params, "parameter k=v (repeatable)");

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    const int code = app.exit(e);
    return code == 0 ? 0 : 2;
  }

  try {
    if (*list) {
      for (const auto& e : h::catalog()) {
        std::cout << e.id << "\n    " << e.description << "\n";
        for (const auto& p : e.params)
          std::cout << "    " << p.name << " = " << p.default_value << "  (" << p.description << ")\n";
      }
      std::cout << "\nfixtures:\n";
      for (const auto& f : h::fixture_catalog()) {
        std::cout << f.id << "\n    " << f.description << "\n";
        for (const auto& p : f.params)
          std::cout << "    " << p.name << " = " << p.default_value << "  (" << p.description << ")\n";
      }
      return 0;
    }
    if (*fixture) {
      const auto e = h::make_fixture(fixture_id, parse_assignments(fixture_params));
      std::cout << latmax::to_json(e).dump() << "\n";
      return 0;
    }
    const auto cfg = resolve(config_path, experiment, params, out, format, seed);
    const auto outcome = h::run(cfg);
    for (const auto& a : outcome.result.assertions)
      std::cout << (a.passed ? "pass  " : "FAIL  ") << a.name << (a.detail.empty() ? "" : ": " + a.detail) << "\n";
    if (outcome.manifest.contains("error")) std::cerr << "error: " << outcome.manifest["error"].get<std::string>() << "\n";
    std::cout << "wrote " << cfg.output_dir.generic_string() << "/manifest.json\n";
    return outcome.exit_code;
  } catch (const h::UsageError& e) {
    std::cerr << "usage error: " << e.what() << "\n";
    return 2;
  } catch (const std::exception& e) {
    std::cerr << "error: " << e.what() << "\n";
    return 1;
  }
}
