#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include <cstdlib>
#include <filesystem>
#include <fstream>
#include <string>

namespace {

namespace fs = std::filesystem;

const std::string kCli = SLITFLOW_CLI_PATH;
const fs::path kRoot = SLITFLOW_TEST_DIR;

int run(const std::string& args) {
  const std::string cmd = kCli + " " + args + " > /dev/null 2>&1";
  const int status = std::system(cmd.c_str());
  return WEXITSTATUS(status);
}

int run_capture(const std::string& args, const fs::path& stdout_file) {
  const std::string cmd =
      kCli + " " + args + " > " + stdout_file.string() + " 2>/dev/null";
  const int status = std::system(cmd.c_str());
  return WEXITSTATUS(status);
}

std::string slurp(const fs::path& p) {
  std::ifstream in(p, std::ios::binary);
  REQUIRE(in.good());
  return {std::istreambuf_iterator<char>(in), std::istreambuf_iterator<char>()};
}

fs::path fresh_dir(const std::string& name) {
  const fs::path dir = kRoot / name;
  fs::remove_all(dir);
  fs::create_directories(dir);
  return dir;
}

}  // namespace

TEST_CASE("simulate writes manifest, drivers and measures") {
  const fs::path dir = fresh_dir("sim_semicircle");
  const int code = run("simulate --builtin semicircle --n 40 --t 0.05 --dt 1e-3 "
                       "--seed 7 --out " + dir.string());
  CHECK(code == 0);
  CHECK(fs::exists(dir / "manifest.json"));
  CHECK(fs::exists(dir / "drivers.csv"));
  CHECK(fs::exists(dir / "measure_t0.05.csv"));
  const std::string manifest = slurp(dir / "manifest.json");
  CHECK(manifest.find("\"seed\": 7") != std::string::npos);
  CHECK(manifest.find("\"scenario\"") != std::string::npos);
  const std::string drivers = slurp(dir / "drivers.csv");
  CHECK(drivers.rfind("time,k,value\n", 0) == 0);
}

TEST_CASE("json measure tables") {
  const fs::path dir = fresh_dir("sim_json");
  CHECK(run("simulate --builtin molly --n 5 --t 0.05 --dt 1e-3 --format json --out " +
            dir.string()) == 0);
  const std::string j = slurp(dir / "measure_t0.05.json");
  CHECK(j.front() == '[');
  CHECK(j.find("0.5") != std::string::npos);  // the centre mass
}

TEST_CASE("identical invocations produce byte-identical csv") {
  const fs::path d1 = fresh_dir("repro_a");
  const fs::path d2 = fresh_dir("repro_b");
  const std::string args = "simulate --builtin fig2 --n 21 --t 0.1 --dt 1e-3 --seed 3 --out ";
  CHECK(run(args + d1.string()) == 0);
  CHECK(run(args + d2.string()) == 0);
  CHECK(slurp(d1 / "drivers.csv") == slurp(d2 / "drivers.csv"));
  CHECK(slurp(d1 / "measure_t0.1.csv") == slurp(d2 / "measure_t0.1.csv"));
}

TEST_CASE("exported config feeds back through --config") {
  const fs::path dir = fresh_dir("roundtrip");
  const fs::path cfg = dir / "scenario.json";
  CHECK(run("simulate --builtin johnny --n 9 --t 0.05 --export-config " + cfg.string()) == 0);
  REQUIRE(fs::exists(cfg));
  const fs::path d1 = fresh_dir("roundtrip_a");
  const fs::path d2 = fresh_dir("roundtrip_b");
  CHECK(run("simulate --builtin johnny --n 9 --t 0.05 --out " + d1.string()) == 0);
  CHECK(run("simulate --config " + cfg.string() + " --out " + d2.string()) == 0);
  CHECK(slurp(d1 / "drivers.csv") == slurp(d2 / "drivers.csv"));

  // the manifest itself is accepted as a config
  const fs::path d3 = fresh_dir("roundtrip_c");
  CHECK(run("simulate --config " + (d1 / "manifest.json").string() + " --out " +
            d3.string()) == 0);
  CHECK(slurp(d1 / "drivers.csv") == slurp(d3 / "drivers.csv"));
}

TEST_CASE("usage and config errors exit with 2") {
  CHECK(run("") == 2);
  CHECK(run("simulate") == 2);
  CHECK(run("simulate --config /no/such/file.json --out /tmp/x") == 2);
  CHECK(run("simulate --builtin unknown_scenario --out /tmp/x") == 2);
  CHECK(run("figures --name fig99 --out /tmp/x") == 2);
  CHECK(run("dyck --enumerate 11") == 2);
  CHECK(run("verify --filter no_such_check") == 2);
}

TEST_CASE("irresolvable near-collision exits with 3") {
  const fs::path dir = fresh_dir("collision");
  const fs::path cfg = dir / "bad.json";
  std::ofstream(cfg) << R"({
    "name": "collision", "kind": "multiple_sle", "kappa": 4.0,
    "horizon": 1.0, "dt": 1.0, "seed": 1,
    "positions": [0.0, 1e-8], "weights": [0.5, 0.5]
  })";
  CHECK(run("simulate --config " + cfg.string() + " --out " + dir.string()) == 3);
}

TEST_CASE("figures emit svg plus csv") {
  const fs::path dir = fresh_dir("figures7");
  CHECK(run("figures --name fig7 --out " + dir.string()) == 0);
  CHECK(fs::exists(dir / "fig7.svg"));
  CHECK(fs::exists(dir / "fig7_field.csv"));
  CHECK(fs::exists(dir / "manifest.json"));
  const std::string svg = slurp(dir / "fig7.svg");
  CHECK(svg.find("<svg") != std::string::npos);
  CHECK(svg.find("</svg>") != std::string::npos);
  CHECK(svg.find("<line") != std::string::npos);

  const fs::path dir2 = fresh_dir("figures2");
  CHECK(run("figures --name fig2 --seed 5 --out " + dir2.string()) == 0);
  const std::string svg2 = slurp(dir2 / "fig2.svg");
  CHECK(svg2.find("stroke=\"red\"") != std::string::npos);
}

TEST_CASE("dyck subcommand") {
  const fs::path out = fresh_dir("dyck") / "stdout.txt";
  CHECK(run_capture("dyck --enumerate 3", out) == 0);
  const std::string text = slurp(out);
  CHECK(text.find("5 paths") != std::string::npos);

  const fs::path dir = fresh_dir("dyck_sample");
  CHECK(run("dyck --sample 1 --n 1 --out " + dir.string()) == 0);
  CHECK(slurp(dir / "dyck_path_0.csv").rfind("t,e\n", 0) == 0);
  CHECK(fs::exists(dir / "dyck_samples.csv"));
}

TEST_CASE("verify subcommand runs a filtered check") {
  CHECK(run("verify --filter c05") == 0);
}
