#include "slitflow/scenarios.hpp"

#include <algorithm>
#include <cmath>
#include <numbers>
#include <stdexcept>

#include <json.hpp>

#include "slitflow/csv.hpp"

namespace slitflow {

using nlohmann::json;

DriverConfig ScenarioConfig::driver_config() const {
  DriverConfig cfg;
  cfg.kind = kind;
  cfg.initial_positions = positions;
  cfg.lambdas = weights;
  cfg.kappa = kappa;
  cfg.poles = poles;
  cfg.horizon = horizon;
  cfg.dt = dt;
  cfg.seed = seed;
  return cfg;
}

std::string ScenarioConfig::to_json() const {
  json j;
  j["name"] = name;
  j["kind"] = to_string(kind);
  j["n"] = n;
  j["kappa"] = kappa;
  j["horizon"] = horizon;
  j["dt"] = dt;
  j["seed"] = seed;
  j["positions"] = positions;
  j["weights"] = weights;
  json jp = json::array();
  for (const auto& p : poles)
    jp.push_back({{"re", p.location.real()}, {"im", p.location.imag()}, {"order", p.order}});
  j["poles"] = jp;
  j["probes"] = {{"re0", probes.re0}, {"re1", probes.re1}, {"nre", probes.nre},
                 {"im0", probes.im0}, {"im1", probes.im1}, {"nim", probes.nim}};
  j["measure_times"] = measure_times;
  j["highlight"] = highlight;
  return j.dump(2);
}

ScenarioConfig ScenarioConfig::from_json_text(const std::string& text) {
  json j = json::parse(text);
  if (j.contains("scenario")) j = j["scenario"];  // accept a run manifest too
  ScenarioConfig c;
  c.name = j.value("name", "custom");
  c.kind = driver_kind_from_string(j.value("kind", std::string("multiple_sle")));
  c.kappa = j.value("kappa", 0.0);
  c.horizon = j.value("horizon", 1.0);
  c.dt = j.value("dt", 1e-3);
  c.seed = j.value("seed", std::uint64_t{0});
  c.positions = j.at("positions").get<std::vector<double>>();
  c.weights = j.at("weights").get<std::vector<double>>();
  c.n = j.value("n", static_cast<int>(c.positions.size()));
  if (j.contains("poles"))
    for (const auto& p : j["poles"])
      c.poles.push_back({{p.at("re").get<double>(), p.at("im").get<double>()},
                         p.at("order").get<int>()});
  if (j.contains("probes")) {
    const auto& g = j["probes"];
    c.probes = {g.value("re0", -2.0), g.value("re1", 2.0), g.value("nre", 21),
                g.value("im0", 1.0),  g.value("im1", 2.0), g.value("nim", 6)};
  }
  if (j.contains("measure_times"))
    c.measure_times = j["measure_times"].get<std::vector<double>>();
  c.highlight = j.value("highlight", 0);
  c.driver_config().validate();
  return c;
}

namespace {

std::vector<double> linspace(double a, double b, int n) {
  std::vector<double> xs(n);
  for (int i = 0; i < n; ++i)
    xs[i] = n == 1 ? a : a + (b - a) * i / (n - 1.0);
  return xs;
}

ScenarioConfig make_prince_charles(int n) {
  ScenarioConfig c;
  c.name = "prince_charles";
  c.kind = DriverKind::multiple_sle;
  c.n = n;
  c.horizon = 0.5;
  c.dt = 1e-3;
  const double s_n = 1.0 + (n + 1.0) / (2.0 * n);
  for (int k = 1; k <= n; ++k) {
    c.positions.push_back(static_cast<double>(k) / (static_cast<double>(n) * n));
    c.weights.push_back((1.0 + static_cast<double>(k) / n) / (s_n * n));
  }
  return c;
}

ScenarioConfig make_johnny(int n) {
  if (n < 2) throw std::invalid_argument("johnny: need n >= 2");
  ScenarioConfig c;
  c.name = "johnny";
  c.kind = DriverKind::multiple_sle;
  c.n = n;
  c.horizon = 1.0;
  c.dt = 1e-3;
  for (int k = 1; k < n; ++k) {
    c.positions.push_back(static_cast<double>(k) / n);
    c.weights.push_back(0.5 / (n - 1.0));
  }
  c.positions.push_back(2.0);
  c.weights.push_back(0.5);
  c.highlight = n;
  return c;
}

ScenarioConfig make_molly(int n) {
  if (n % 2 == 0) throw std::invalid_argument("molly: n must be odd (n = 2K + 1)");
  const int k_half = (n - 1) / 2;
  if (k_half < 1) throw std::invalid_argument("molly: need n >= 3");
  ScenarioConfig c;
  c.name = "molly";
  c.kind = DriverKind::multiple_sle;
  c.n = n;
  c.horizon = 0.5;
  c.dt = 1e-3;
  // left block in [-2, -1], centre at 0, mirror image on the right
  std::vector<double> left =
      k_half == 1 ? std::vector<double>{-1.5} : linspace(-2.0, -1.0, k_half);
  for (double x : left) {
    c.positions.push_back(x);
    c.weights.push_back(0.25 / k_half);
  }
  c.positions.push_back(0.0);
  c.weights.push_back(0.5);
  for (int i = k_half; i-- > 0;) {
    c.positions.push_back(-left[i]);
    c.weights.push_back(0.25 / k_half);
  }
  c.highlight = k_half + 1;
  return c;
}

ScenarioConfig make_semicircle(int n) {
  ScenarioConfig c;
  c.name = "semicircle";
  c.kind = DriverKind::simultaneous;
  c.n = n;
  c.horizon = 0.25;
  c.dt = 1e-4;
  c.positions = linspace(-1e-3, 1e-3, n);
  c.weights.assign(n, 1.0 / n);
  c.probes = {-2.0, 2.0, 21, 1.0, 2.0, 6};
  c.measure_times = {0.25};
  return c;
}

ScenarioConfig make_fig7(int order_sign) {
  ScenarioConfig c;
  c.name = order_sign < 0 ? "fig7" : "fig8";
  c.kind = DriverKind::quad_diff;
  c.n = 10;
  c.horizon = 0.1;
  c.dt = 1e-3;
  for (int k = 0; k <= 9; ++k) c.positions.push_back(2.0 * k / 9.0 - 1.0);
  c.weights.assign(10, 0.1);
  c.poles.push_back({{0.0, 1.0}, order_sign * 10});
  c.probes = {-2.5, 2.5, 200, 0.025, 2.5, 100};
  return c;
}

}  // namespace

ScenarioConfig builtin(const std::string& name, const ScenarioOverrides& o) {
  ScenarioConfig c;
  if (name == "prince_charles") {
    c = make_prince_charles(o.n > 0 ? o.n : 100);
  } else if (name == "johnny") {
    c = make_johnny(o.n > 0 ? o.n : 51);
  } else if (name == "molly") {
    c = make_molly(o.n > 0 ? o.n : 51);
  } else if (name == "semicircle") {
    c = make_semicircle(o.n > 0 ? o.n : 400);
  } else if (name == "fig2") {
    c = make_johnny(o.n > 0 ? o.n : 51);
    c.name = "fig2";
    c.kappa = 1.0;
    c.horizon = 1.0;
  } else if (name == "fig3") {
    c = make_molly(o.n > 0 ? o.n : 51);
    c.name = "fig3";
    c.kappa = 1.0;
    c.horizon = 1.0;
  } else if (name == "fig7") {
    c = make_fig7(-1);
  } else if (name == "fig8") {
    c = make_fig7(+1);
  } else {
    throw std::invalid_argument("unknown builtin scenario: " + name);
  }
  if (o.kappa >= 0.0) c.kappa = o.kappa;
  if (o.horizon > 0.0) c.horizon = o.horizon;
  if (o.dt > 0.0) c.dt = o.dt;
  if (o.seed_set) c.seed = o.seed;
  c.driver_config().validate();
  return c;
}

std::vector<std::string> builtin_names() {
  return {"prince_charles", "johnny", "molly", "semicircle",
          "fig2",           "fig3",   "fig7",  "fig8"};
}

QuadDiffConfig quad_diff_of(const ScenarioConfig& config) {
  return QuadDiffConfig{config.positions, config.poles, config.weights};
}

double quad_field_direction(const QuadDiffConfig& q, std::complex<double> z) {
  // arg Q via summed factor arguments; magnitudes never materialize
  double phase = 0.0;
  for (double x : q.roots) phase += 2.0 * std::arg(z - x);
  for (const auto& p : q.poles)
    phase += p.order * (std::arg(z - p.location) + std::arg(z - std::conj(p.location)));
  double theta = std::fmod(-0.5 * phase, std::numbers::pi);
  if (theta < 0.0) theta += std::numbers::pi;
  if (theta >= std::numbers::pi) theta -= std::numbers::pi;
  return theta;
}

std::vector<QuadFieldSample> quad_field(const QuadDiffConfig& q, const GridSpec& grid) {
  std::vector<QuadFieldSample> out;
  for (const auto& z : grid.points()) {
    bool near_singular = false;
    for (double x : q.roots)
      if (std::abs(z - x) < 1e-6) near_singular = true;
    for (const auto& p : q.poles)
      if (std::abs(z - p.location) < 1e-6 || std::abs(z - std::conj(p.location)) < 1e-6)
        near_singular = true;
    if (near_singular) continue;
    out.push_back({z, quad_field_direction(q, z)});
  }
  return out;
}

std::string quad_field_csv(std::span<const QuadFieldSample> samples) {
  std::string out = "re_z,im_z,theta\n";
  for (const auto& s : samples)
    out += fmt17(s.z.real()) + "," + fmt17(s.z.imag()) + "," + fmt17(s.theta) + "\n";
  return out;
}

EscapeDiagnostic johnny_escape_diagnostic(std::span<const int> n_values, double t,
                                          double dt) {
  EscapeDiagnostic diag;
  std::vector<double> log_n, log_v;
  for (int n : n_values) {
    ScenarioOverrides o;
    o.n = n;
    o.kappa = 0.0;
    o.horizon = t;
    o.dt = dt;
    const DriverPath path = simulate(builtin("johnny", o).driver_config());
    const std::size_t top = path.n() - 1;
    double prev = path.states.front()[top];
    for (std::size_t i = 1; i < path.states.size(); ++i) {
      if (!(path.states[i][top] > prev)) diag.monotone = false;
      prev = path.states[i][top];
    }
    diag.n_values.push_back(n);
    diag.terminal_top.push_back(prev);
    log_n.push_back(std::log(static_cast<double>(n)));
    log_v.push_back(std::log(prev - 2.0));
  }
  // least-squares slope of log(V_top - 2) against log N
  const double m = static_cast<double>(log_n.size());
  double sx = 0, sy = 0, sxx = 0, sxy = 0;
  for (std::size_t i = 0; i < log_n.size(); ++i) {
    sx += log_n[i];
    sy += log_v[i];
    sxx += log_n[i] * log_n[i];
    sxy += log_n[i] * log_v[i];
  }
  diag.slope = (m * sxy - sx * sy) / (m * sxx - sx * sx);
  return diag;
}

BlowupReport prince_charles_blowup(int n) {
  if (n < 2) throw std::invalid_argument("prince_charles_blowup: need n >= 2");
  const ScenarioConfig c = make_prince_charles(n);
  const double s_n = 1.0 + (n + 1.0) / (2.0 * n);
  BlowupReport r;
  r.n = n;
  double sum = 0.0;
  double worst = 0.0;
  for (int k = 0; k < n; ++k) {
    for (int j = 0; j < n; ++j) {
      if (j == k) continue;
      const double lk = c.weights[k], lj = c.weights[j];
      const double quotient = (lk * lk - lj * lj) / (c.positions[k] - c.positions[j]);
      sum += quotient;
      worst = std::max(worst, std::abs(quotient / (lk + lj) - 1.0 / s_n));
    }
  }
  r.t_derivative = sum;
  r.t_derivative_closed_form = 2.0 * (n - 1.0) / s_n;
  r.quotient_identity_error = worst;
  const double n_pairs = static_cast<double>(n) * n - n;
  r.lower_bound = n_pairs * c.weights.front() / s_n;
  r.lower_bound_closed_form = n_pairs * (1.0 / n + 1.0 / (static_cast<double>(n) * n)) / (s_n * s_n);
  return r;
}

CharacteristicsResult characteristics_check(std::span<const int> n_values, double t,
                                            double dt, const GridSpec& grid) {
  CharacteristicsResult res;
  const auto points = grid.points();
  if (t <= 0.0) {  // nothing flows, nothing drifts
    res.n_values.assign(n_values.begin(), n_values.end());
    res.defects.assign(n_values.size(), 0.0);
    res.ratios.assign(n_values.empty() ? 0 : n_values.size() - 1, 1.0);
    return res;
  }
  for (int n : n_values) {
    DriverConfig cfg;
    cfg.kind = DriverKind::quad_diff;
    for (int k = 1; k <= n; ++k)
      cfg.initial_positions.push_back(-1.0 + 2.0 * (k - 0.5) / n);
    cfg.lambdas.assign(n, 1.0 / n);
    cfg.horizon = t;
    cfg.dt = dt;
    const DriverPath path = simulate(cfg);

    double defect = 0.0;
    for (const auto& z : points) {
      const std::complex<double> m0 = path.transform_at(z, 0.0);
      const FlowProbe probe = flow(path, z, t);
      if (probe.swallowed) continue;
      const std::complex<double> mt = path.transform_at(probe.g, t);
      defect = std::max(defect, std::abs(mt - m0));
    }
    res.n_values.push_back(n);
    res.defects.push_back(defect);
  }
  for (std::size_t i = 0; i + 1 < res.defects.size(); ++i)
    res.ratios.push_back(res.defects[i] / res.defects[i + 1]);
  return res;
}

}  // namespace slitflow
