// perturbdyn command-line front end.
//
//   perturbdyn compute-terms --config run.json --out terms.json
//   perturbdyn fidelity-scan --config scan.json --out scan.csv
//   perturbdyn solver-sweep  --config sweep.json --out sweep.csv [--parallel]
//   perturbdyn robustness    --config robust.json --out robust.json
//
// A config may carry an "output" entry used when --out is absent.

#include <chrono>
#include <cstdint>
#include <cstdio>
#include <exception>
#include <filesystem>
#include <iostream>
#include <optional>
#include <string>

#include "CLI11.hpp"
#include "perturbdyn/error.hpp"
#include "perturbdyn/json_io.hpp"
#include "perturbdyn/logging.hpp"
#include "perturbdyn/workflows.hpp"

namespace fs = std::filesystem;
using namespace perturbdyn;

namespace {

struct Common {
  std::string config;
  std::string out;
  std::optional<std::uint64_t> seed;
  bool parallel = false;
};

struct Loaded {
  Json cfg;
  fs::path base;
  fs::path out;
};

Loaded load(const Common& c) {
  Loaded l;
  l.cfg = read_json_file(c.config);
  if (!l.cfg.is_object()) throw ConfigError(c.config + ": top level must be an object");
  l.base = fs::path(c.config).parent_path();
  if (!c.out.empty()) {
    l.out = c.out;
  } else if (l.cfg.contains("output")) {
    if (!l.cfg.at("output").is_string()) throw ConfigError("config.output must be a string");
    l.out = l.base / l.cfg.at("output").get<std::string>();
  } else {
    throw ConfigError("no output path: pass --out or set \"output\" in the config");
  }
  l.cfg.erase("output");
  if (c.seed) l.cfg["seed"] = *c.seed;
  return l;
}

double seconds_since(std::chrono::steady_clock::time_point t) {
  return std::chrono::duration<double>(std::chrono::steady_clock::now() - t).count();
}

int compute_terms(const Common& c) {
  const auto start = std::chrono::steady_clock::now();
  const Loaded l = load(c);
  const auto settings = compute_terms_settings(l.cfg, l.base);
  const Json resolved = to_json(settings);
  const PerturbationResult r = run_compute_terms(settings);
  const Json doc{{"version", library_version()}, {"config", resolved}, {"result", result_to_json(r)}};
  write_file_atomic(l.out, doc.dump(1) + "\n");
  std::printf("%zu labels in %.3f s -> %s\n", r.labels.size(), seconds_since(start),
              l.out.string().c_str());
  return 0;
}

int fidelity_scan(const Common& c) {
  const auto start = std::chrono::steady_clock::now();
  const Loaded l = load(c);
  const auto settings = fidelity_scan_settings(l.cfg, l.base);
  const Json resolved = to_json(settings);
  const FidelityScan scan = run_fidelity_scan(settings);
  write_file_atomic(l.out, fidelity_scan_csv(scan, resolved));
  std::printf("%zu rows (%zu Magnus terms) in %.3f s -> %s\n", scan.rows.size(), scan.n_terms,
              seconds_since(start), l.out.string().c_str());
  return 0;
}

int solver_sweep(const Common& c) {
  const auto start = std::chrono::steady_clock::now();
  const Loaded l = load(c);
  auto settings = sweep_settings(l.cfg, l.base);
  if (c.parallel) settings.parallel = true;
  const Json resolved = to_json(settings);
  const Sweep sweep = run_solver_sweep(settings);
  write_file_atomic(l.out, sweep_csv(sweep, resolved));
  std::printf("%zu configurations in %.3f s -> %s\n", sweep.rows.size(), seconds_since(start),
              l.out.string().c_str());
  return 0;
}

int robustness(const Common& c) {
  const auto start = std::chrono::steady_clock::now();
  const Loaded l = load(c);
  const auto settings = robustness_settings(l.cfg, l.base);
  const Json resolved = to_json(settings);
  const RobustnessRun run = run_robustness(settings);
  write_file_atomic(l.out, robustness_json(run, resolved).dump(1) + "\n");
  std::printf("g = %.17g (%zu monomials) in %.3f s -> %s\n", run.objective.value,
              run.objective.terms.size(), seconds_since(start), l.out.string().c_str());
  return 0;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"Multivariable Dyson/Magnus expansions and perturbative solvers"};
  app.set_version_flag("--version", library_version());
  app.require_subcommand(1);

  Common common;
  auto add_common = [&](CLI::App* sub) {
    sub->add_option("--config", common.config, "JSON run configuration")
        ->required()
        ->check(CLI::ExistingFile);
    sub->add_option("--out", common.out, "Output file");
    sub->add_option("--seed", common.seed, "Override the config seed");
  };

  auto* terms = app.add_subcommand("compute-terms", "Compute Dyson or Magnus terms for the transmon model");
  add_common(terms);
  auto* scan = app.add_subcommand("fidelity-scan", "Compare Magnus infidelity approximations to exact solves");
  add_common(scan);
  auto* sweep = app.add_subcommand("solver-sweep", "Accuracy sweep of the perturbative solver");
  add_common(sweep);
  sweep->add_flag("--parallel", common.parallel, "Parallelize the interval product");
  auto* robust = app.add_subcommand("robustness", "Evaluate the Gaussian robustness objective");
  add_common(robust);

  CLI11_PARSE(app, argc, argv);

  try {
    configure_logging();
    if (terms->parsed()) return compute_terms(common);
    if (scan->parsed()) return fidelity_scan(common);
    if (sweep->parsed()) return solver_sweep(common);
    if (robust->parsed()) return robustness(common);
  } catch (const ConfigError& e) {
    std::cerr << "configuration error: " << e.what() << '\n';
    return 2;
  } catch (const std::exception& e) {
    std::cerr << "error: " << e.what() << '\n';
    return 1;
  }
  return 1;
}
