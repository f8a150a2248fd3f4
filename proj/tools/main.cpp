#include <chrono>
#include <cstdio>
#include <ctime>
#include <filesystem>
#include <fstream>
#include <iostream>
#include <string>
#include <vector>

#include <CLI11.hpp>
#include <json.hpp>

#include "slitflow/csv.hpp"
#include "slitflow/drivers.hpp"
#include "slitflow/dyck.hpp"
#include "slitflow/figures.hpp"
#include "slitflow/scenarios.hpp"
#include "slitflow/verify.hpp"

namespace {

constexpr const char* kVersion = "0.1.0";

namespace fs = std::filesystem;
using nlohmann::json;
using namespace slitflow;

// exit codes: 0 ok, 1 verification failure, 2 usage/config, 3 numerical failure
constexpr int kOk = 0;
constexpr int kVerifyFailure = 1;
constexpr int kConfigError = 2;
constexpr int kNumericalError = 3;

std::string utc_now() {
  const std::time_t t = std::time(nullptr);
  char buf[32];
  std::strftime(buf, sizeof(buf), "%Y-%m-%dT%H:%M:%SZ", std::gmtime(&t));
  return buf;
}

void write_file(const fs::path& path, const std::string& content) {
  std::ofstream out(path, std::ios::binary);
  if (!out) throw std::runtime_error("cannot write " + path.string());
  out << content;
}

// Manifest goes to disk before any result file so a crashed run still
// documents what it was about to do; re-running `--config manifest.json`
// reproduces the outputs bit for bit.
void write_manifest(const fs::path& dir, const std::string& command,
                    const ScenarioConfig& config, const std::string& format,
                    const std::vector<std::string>& outputs) {
  json m;
  m["tool"] = "slitflow";
  m["version"] = kVersion;
  m["command"] = command;
  m["created_utc"] = utc_now();
  m["format"] = format;
  m["out_dir"] = dir.string();
  m["seed"] = config.seed;
  m["outputs"] = outputs;
  m["scenario"] = json::parse(config.to_json());
  write_file(dir / "manifest.json", m.dump(2) + "\n");
}

struct SimulateArgs {
  std::string builtin_name;
  std::string config_path;
  std::string export_path;
  int n = 0;
  double kappa = -1.0;
  double horizon = 0.0;
  double dt = 0.0;
  std::uint64_t seed = 0;
  bool seed_set = false;
  std::string out = "out";
  std::string format = "csv";
};

ScenarioConfig resolve_scenario(const SimulateArgs& args) {
  if (!args.builtin_name.empty()) {
    ScenarioOverrides o;
    o.n = args.n;
    o.kappa = args.kappa;
    o.horizon = args.horizon;
    o.dt = args.dt;
    o.seed = args.seed;
    o.seed_set = args.seed_set;
    return builtin(args.builtin_name, o);
  }
  if (args.config_path.empty())
    throw std::invalid_argument("simulate: need --builtin or --config");
  std::ifstream in(args.config_path);
  if (!in) throw std::invalid_argument("cannot read scenario file: " + args.config_path);
  std::string text((std::istreambuf_iterator<char>(in)), std::istreambuf_iterator<char>());
  ScenarioConfig cfg = ScenarioConfig::from_json_text(text);
  if (args.n > 0 || args.kappa >= 0 || args.horizon > 0 || args.dt > 0)
    throw std::invalid_argument("simulate: overrides apply to --builtin only");
  if (args.seed_set) cfg.seed = args.seed;
  return cfg;
}

std::string measure_json(const AtomicMeasure& m) {
  json j = json::array();
  for (const auto& a : m.atoms()) j.push_back({a.position, a.weight});
  return j.dump() + "\n";
}

int cmd_simulate(const SimulateArgs& args) {
  const ScenarioConfig config = resolve_scenario(args);
  if (!args.export_path.empty()) {
    write_file(args.export_path, config.to_json() + "\n");
    std::cout << "wrote " << args.export_path << "\n";
    return kOk;
  }

  const fs::path dir(args.out);
  fs::create_directories(dir);

  std::vector<double> times;
  for (double t : config.measure_times)
    if (t <= config.horizon + 1e-12) times.push_back(t);
  if (times.empty()) times.push_back(config.horizon);
  const std::string ext = args.format == "json" ? ".json" : ".csv";
  std::vector<std::string> outputs = {"drivers.csv"};
  if (config.kind == DriverKind::quad_diff) outputs.push_back("poles.csv");
  for (double t : times) {
    char buf[48];
    std::snprintf(buf, sizeof(buf), "measure_t%g%s", t, ext.c_str());
    outputs.emplace_back(buf);
  }
  write_manifest(dir, "simulate", config, args.format, outputs);

  const DriverPath path = simulate(config.driver_config());
  write_file(dir / "drivers.csv", path.drivers_csv());
  if (config.kind == DriverKind::quad_diff) write_file(dir / "poles.csv", path.poles_csv());
  std::size_t i = config.kind == DriverKind::quad_diff ? 2 : 1;
  for (double t : times) {
    const AtomicMeasure m = path.measure_at(t);
    write_file(dir / outputs[i++],
               args.format == "json" ? measure_json(m) : m.to_csv());
  }
  std::cout << "scenario " << config.name << ": " << path.substeps
            << " substeps, outputs in " << dir.string() << "\n";
  return kOk;
}

int cmd_verify(const std::string& filter) {
  const auto results = run_acceptance(filter);
  std::cout << format_results(results);
  if (results.empty()) {
    std::cerr << "no checks matched filter '" << filter << "'\n";
    return kConfigError;
  }
  for (const auto& r : results)
    if (!r.pass) return kVerifyFailure;
  return kOk;
}

int cmd_figures(const std::string& name, const std::string& out, std::uint64_t seed,
                bool seed_set) {
  if (name != "fig2" && name != "fig3" && name != "fig7" && name != "fig8")
    throw std::invalid_argument("unknown figure: " + name);
  ScenarioOverrides o;
  o.seed = seed;
  o.seed_set = seed_set;
  const ScenarioConfig config = builtin(name, o);

  const fs::path dir(out);
  fs::create_directories(dir);
  const bool field = name == "fig7" || name == "fig8";
  const std::string csv_name = name + (field ? "_field.csv" : "_drivers.csv");
  write_manifest(dir, "figures", config, "csv", {name + ".svg", csv_name});

  const FigureOutput fig =
      field ? render_field_figure(config) : render_driver_figure(config);
  write_file(dir / (name + ".svg"), fig.svg);
  write_file(dir / csv_name, fig.csv);
  std::cout << "wrote " << (dir / (name + ".svg")).string() << "\n";
  return kOk;
}

struct DyckArgs {
  int enumerate_n = 0;
  int sample_count = 0;
  int n = 1;
  double gamma = 1.0;
  std::uint64_t seed = 0;
  std::string out = "out";
};

int cmd_dyck(const DyckArgs& args) {
  if (args.enumerate_n > 0) {
    if (args.enumerate_n > 10)
      throw std::invalid_argument("--enumerate supports N <= 10");
    const auto paths = enumerate_paths(args.enumerate_n);
    for (const auto& p : paths) {
      for (int s : p.slopes) std::cout << (s > 0 ? '+' : '-');
      std::cout << "\n";
    }
    std::cout << paths.size() << " paths (catalan("
              << args.enumerate_n << ") = " << catalan(args.enumerate_n).to_string()
              << ")\n";
    return kOk;
  }
  if (args.sample_count <= 0)
    throw std::invalid_argument("dyck: need --enumerate or --sample");

  const fs::path dir(args.out);
  fs::create_directories(dir);
  std::vector<double> breakpoints(2 * args.n + 1);
  for (int k = 0; k <= 2 * args.n; ++k)
    breakpoints[k] = static_cast<double>(k) / (2 * args.n);

  CounterRng rng(args.seed, 0);
  std::string table = "sample,max,terminal\n";
  double mean_max = 0.0;
  for (int i = 0; i < args.sample_count; ++i) {
    const DyckPath p = sample_uniform(args.n, rng);
    const NormalizedPath np = normalize(p, breakpoints, args.gamma);
    const double mx = np.max_value();
    mean_max += mx;
    table += std::to_string(i) + "," + fmt17(mx) + "," + fmt17(np.values.back()) + "\n";
    if (i == 0) {
      std::string path_csv = "t,e\n";
      for (std::size_t k = 0; k < np.breakpoints.size(); ++k)
        path_csv += fmt17(np.breakpoints[k]) + "," + fmt17(np.values[k]) + "\n";
      write_file(dir / "dyck_path_0.csv", path_csv);
    }
  }
  mean_max /= args.sample_count;
  write_file(dir / "dyck_samples.csv", table);
  std::cout << "samples " << args.sample_count << "  n " << args.n << "  gamma "
            << args.gamma << "  mean max " << fmt17(mean_max) << "\n";
  return kOk;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"multi-slit Loewner simulation and verification lab"};
  app.set_version_flag("--version", kVersion);
  app.require_subcommand(1);

  SimulateArgs sim;
  CLI::App* simulate_cmd = app.add_subcommand("simulate", "integrate a driver system");
  simulate_cmd->add_option("--builtin", sim.builtin_name, "builtin scenario name");
  simulate_cmd->add_option("--config", sim.config_path, "scenario JSON (or a manifest)");
  simulate_cmd->add_option("--export-config", sim.export_path,
                           "write the resolved scenario JSON and exit");
  simulate_cmd->add_option("--n", sim.n, "number of drivers");
  simulate_cmd->add_option("--kappa", sim.kappa, "diffusivity in [0,4]");
  simulate_cmd->add_option("--t", sim.horizon, "time horizon");
  simulate_cmd->add_option("--dt", sim.dt, "reporting grid step");
  auto* seed_opt = simulate_cmd->add_option("--seed", sim.seed, "random seed");
  simulate_cmd->add_option("--out", sim.out, "output directory");
  simulate_cmd->add_option("--format", sim.format, "csv|json for measure tables")
      ->check(CLI::IsMember({"csv", "json"}));

  std::string filter;
  CLI::App* verify_cmd = app.add_subcommand("verify", "run the verification suite");
  verify_cmd->add_option("--filter", filter, "run only checks whose id contains this");

  std::string fig_name, fig_out = "out";
  std::uint64_t fig_seed = 0;
  CLI::App* figures_cmd = app.add_subcommand("figures", "regenerate a figure");
  figures_cmd->add_option("--name", fig_name, "fig2|fig3|fig7|fig8")->required();
  figures_cmd->add_option("--out", fig_out, "output directory");
  auto* fig_seed_opt = figures_cmd->add_option("--seed", fig_seed, "random seed");

  DyckArgs dyck;
  CLI::App* dyck_cmd = app.add_subcommand("dyck", "enumerate or sample paths");
  dyck_cmd->add_option("--enumerate", dyck.enumerate_n, "list all paths of size N");
  dyck_cmd->add_option("--sample", dyck.sample_count, "number of samples");
  dyck_cmd->add_option("--n", dyck.n, "path size N");
  dyck_cmd->add_option("--gamma", dyck.gamma, "normalization exponent in (0,1]");
  dyck_cmd->add_option("--seed", dyck.seed, "random seed");
  dyck_cmd->add_option("--out", dyck.out, "output directory");

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    const int code = app.exit(e);
    return code == 0 ? kOk : kConfigError;
  }

  sim.seed_set = seed_opt->count() > 0;
  try {
    if (simulate_cmd->parsed()) return cmd_simulate(sim);
    if (verify_cmd->parsed()) return cmd_verify(filter);
    if (figures_cmd->parsed())
      return cmd_figures(fig_name, fig_out, fig_seed, fig_seed_opt->count() > 0);
    if (dyck_cmd->parsed()) return cmd_dyck(dyck);
  } catch (const CollisionError& e) {
    std::cerr << "integration failed: " << e.what() << "\n";
    return kNumericalError;
  } catch (const std::invalid_argument& e) {
    std::cerr << "config error: " << e.what() << "\n";
    return kConfigError;
  } catch (const std::exception& e) {
    std::cerr << "error: " << e.what() << "\n";
    return kNumericalError;
  }
  return kConfigError;
}
