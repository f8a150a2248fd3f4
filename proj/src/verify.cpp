#include "slitflow/verify.hpp"

#include <chrono>
#include <cmath>
#include <complex>
#include <cstdio>
#include <functional>
#include <map>
#include <numbers>
#include <optional>
#include <sstream>

#include "slitflow/burgers.hpp"
#include "slitflow/drivers.hpp"
#include "slitflow/dyck.hpp"
#include "slitflow/figures.hpp"
#include "slitflow/loewner.hpp"
#include "slitflow/scenarios.hpp"
#include "slitflow/special.hpp"
#include "slitflow/weight_profile.hpp"

namespace slitflow {

namespace {

using complexd = std::complex<double>;

std::string num(double x) {
  char buf[32];
  std::snprintf(buf, sizeof(buf), "%.3g", x);
  return buf;
}

// Shared expensive artifacts, simulated once and reused across checks.
struct Context {
  std::optional<DriverPath> semicircle400;

  const DriverPath& get_semicircle400() {
    if (!semicircle400) {
      ScenarioOverrides o;
      o.n = 400;
      o.kappa = 0.0;
      o.horizon = 0.26;  // a little past 0.25 so time derivatives fit inside
      o.dt = 1e-4;
      semicircle400 = simulate(builtin("semicircle", o).driver_config());
    }
    return *semicircle400;
  }
};

std::vector<complexd> acceptance_grid() {
  GridSpec g{-2.0, 2.0, 21, 1.0, 2.0, 6};
  return g.points();
}

double sup_semicircle_error(const DriverPath& path, double t) {
  double err = 0.0;
  for (const auto& z : acceptance_grid())
    err = std::max(err, std::abs(path.transform_at(z, t) - semicircle_transform(z, t)));
  return err;
}

// --- check bodies ------------------------------------------------------

CheckResult c01_semicircle_limit(Context& ctx) {
  CheckResult r{"c01_semicircle_limit_burgers", false, "", 0};
  const auto t0 = std::chrono::steady_clock::now();
  const double err400 = sup_semicircle_error(ctx.get_semicircle400(), 0.25);

  ScenarioOverrides o;
  o.n = 800;
  o.kappa = 0.0;
  o.horizon = 0.25;
  o.dt = 1e-4;
  const DriverPath path800 = simulate(builtin("semicircle", o).driver_config());
  const double err800 = sup_semicircle_error(path800, 0.25);
  r.seconds = std::chrono::duration<double>(std::chrono::steady_clock::now() - t0).count();

  r.pass = err400 <= 0.05 && err800 < err400 && r.seconds <= 30.0;
  r.detail = "sup|M_N - M| = " + num(err400) + " (N=400), " + num(err800) +
             " (N=800); tol 0.05, must decrease";
  return r;
}

CheckResult c02_hcap(Context&) {
  CheckResult r{"c02_hcap_loewner", true, "", 0};
  const auto t0 = std::chrono::steady_clock::now();
  const double radii[] = {50.0, 100.0, 200.0};
  double worst = 0.0;
  for (const std::string name : {"semicircle", "prince_charles"}) {
    ScenarioOverrides o;
    o.n = 100;
    o.kappa = 0.0;
    o.horizon = 0.25;
    o.dt = 1e-3;
    const DriverPath path = simulate(builtin(name, o).driver_config());
    for (double t : {0.1, 0.25}) {
      const FlowExpansion fit = hcap_fit(path, t, radii);
      worst = std::max(worst, std::abs(fit.b - 2.0 * t));
    }
  }
  r.seconds = std::chrono::duration<double>(std::chrono::steady_clock::now() - t0).count();
  r.pass = worst <= 1e-3 && r.seconds <= 10.0;
  r.detail = "max |b - 2t| = " + num(worst) + " (tol 1e-3)";
  return r;
}

CheckResult c03_single_slit(Context&) {
  CheckResult r{"c03_single_slit_loewner", false, "", 0};
  const auto t0 = std::chrono::steady_clock::now();
  const DriverPath path = constant_driver_path(0.0, 0.3, 1e-4);
  const double t = 0.25;
  double worst_rel = 0.0;
  for (double re : {-3.0, -2.0, -1.5, -1.0, -0.5, 0.5, 1.0, 1.5, 2.0, 3.0}) {
    for (double im : {0.5, 1.0}) {
      const complexd z(re, im);
      const FlowProbe probe = flow(path, z, t);
      complexd exact = std::sqrt(z * z + 4.0 * t);
      if (exact.imag() < 0.0) exact = -exact;
      worst_rel = std::max(worst_rel, std::abs(probe.g - exact) / std::abs(exact));
    }
  }
  const FlowProbe swallowed = flow(path, {0.0, 1.0}, 0.3);
  const double t_swallow = swallowed.swallowed
                               ? swallowed.swallow_time
                               : std::numeric_limits<double>::quiet_NaN();
  r.seconds = std::chrono::duration<double>(std::chrono::steady_clock::now() - t0).count();
  r.pass = worst_rel <= 1e-6 && swallowed.swallowed && std::abs(t_swallow - 0.25) <= 1e-4;
  r.detail = "max rel err vs sqrt(z^2+4t) = " + num(worst_rel) +
             " (tol 1e-6); swallow(i) = " + num(t_swallow) + " (0.25 +- 1e-4)";
  return r;
}

CheckResult c04_burgers_residual(Context& ctx) {
  CheckResult r{"c04_burgers_residual", false, "", 0};
  const auto t0 = std::chrono::steady_clock::now();
  const BurgersSolution exact = semicircle_solution(2.0);
  const double res_exact = burgers_residual(exact, {0.0, 2.0}, 0.25, 1e-4);

  // centered differences: halving h must cut the residual about fourfold
  const double res_h = burgers_residual(exact, {0.3, 2.0}, 0.3, 2e-2);
  const double res_h2 = burgers_residual(exact, {0.3, 2.0}, 0.3, 1e-2);
  const double order_ratio = res_h / res_h2;

  const BurgersSolution numeric = empirical_transform(ctx.get_semicircle400());
  double res_numeric = 0.0;
  for (const auto& z : acceptance_grid())
    res_numeric = std::max(res_numeric, burgers_residual(numeric, z, 0.25, 1e-3));
  r.seconds = std::chrono::duration<double>(std::chrono::steady_clock::now() - t0).count();

  r.pass = res_exact <= 1e-6 && order_ratio >= 3.5 && order_ratio <= 4.5 &&
           res_numeric <= 0.05;
  r.detail = "exact residual " + num(res_exact) + " (tol 1e-6); h-halving ratio " +
             num(order_ratio) + " (3.5..4.5); empirical residual " + num(res_numeric) +
             " (tol 0.05)";
  return r;
}

CheckResult c05_voiculescu(Context&) {
  CheckResult r{"c05_voiculescu_burgers", false, "", 0};
  const auto t0 = std::chrono::steady_clock::now();
  const double dev = voiculescu_conservation(semicircle_solution(2.0), {0.0, 20.0}, 0.0, 1.0);
  r.seconds = std::chrono::duration<double>(std::chrono::steady_clock::now() - t0).count();
  r.pass = dev <= 1e-6;
  r.detail = "|(1/M)^-1 drift - 2t/z| = " + num(dev) + " (tol 1e-6)";
  return r;
}

CheckResult c06_compose_profile(Context&) {
  CheckResult r{"c06_compose_profile_measures", false, "", 0};
  const auto t0 = std::chrono::steady_clock::now();
  double worst = 0.0;
  for (const std::string name : {"prince_charles", "johnny", "molly"}) {
    for (int n : {10, 100}) {
      ScenarioOverrides o;
      o.n = name == "molly" ? n + 1 : n;  // the symmetric family needs odd N
      const ScenarioConfig cfg = builtin(name, o);
      const WeightProfile profile = WeightProfile::from_weights(cfg.weights);
      const AtomicMeasure alpha = AtomicMeasure::empirical(cfg.positions);
      const AtomicMeasure mu = compose_profile(profile, alpha);
      if (mu.size() != cfg.weights.size()) {
        r.detail = name + ": atom count mismatch";
        return r;
      }
      for (std::size_t k = 0; k < mu.size(); ++k)
        worst = std::max(worst, std::abs(mu.atoms()[k].weight - cfg.weights[k]));
    }
  }
  r.seconds = std::chrono::duration<double>(std::chrono::steady_clock::now() - t0).count();
  r.pass = worst <= 1e-12;
  r.detail = "max |recovered weight - lambda| = " + num(worst) + " (tol 1e-12)";
  return r;
}

CheckResult c07_johnny_escape(Context&) {
  CheckResult r{"c07_johnny_escape_scenarios", false, "", 0};
  const auto t0 = std::chrono::steady_clock::now();
  const int ns[] = {25, 51, 101, 201};
  const EscapeDiagnostic diag = johnny_escape_diagnostic(ns, 0.5, 2.5e-4);
  r.seconds = std::chrono::duration<double>(std::chrono::steady_clock::now() - t0).count();
  r.pass = diag.monotone && diag.slope >= 0.4 && r.seconds <= 60.0;
  r.detail = "log-log slope of V_top - 2 vs N = " + num(diag.slope) +
             " (>= 0.4); monotone in t: " + (diag.monotone ? "yes" : "no");
  return r;
}

CheckResult c08_molly_symmetry(Context&) {
  CheckResult r{"c08_molly_symmetry_scenarios", false, "", 0};
  const auto t0 = std::chrono::steady_clock::now();
  ScenarioOverrides o;
  o.n = 51;  // K = 25
  o.kappa = 0.0;
  o.horizon = 0.5;
  o.dt = 1e-3;
  const DriverPath path = simulate(builtin("molly", o).driver_config());
  const std::size_t n = path.n();
  double worst = 0.0;
  for (const auto& state : path.states)
    for (std::size_t k = 0; k < n; ++k)
      worst = std::max(worst, std::abs(state[n - 1 - k] + state[k]));
  r.seconds = std::chrono::duration<double>(std::chrono::steady_clock::now() - t0).count();
  r.pass = worst <= 1e-10;
  r.detail = "max_t max_k |V_mirror + V_k| = " + num(worst) +
             " (tol 1e-10, centre driver pinned at 0)";
  return r;
}

CheckResult c09_prince_charles_blowup(Context&) {
  CheckResult r{"c09_prince_charles_blowup_scenarios", false, "", 0};
  const auto t0 = std::chrono::steady_clock::now();
  double worst_bound = 0.0, worst_exact = 0.0, worst_quotient = 0.0;
  std::map<int, double> t_by_n;
  for (int n : {2, 10, 100, 1000}) {
    const BlowupReport rep = prince_charles_blowup(n);
    worst_bound = std::max(worst_bound,
                           std::abs(rep.lower_bound - rep.lower_bound_closed_form) /
                               rep.lower_bound_closed_form);
    worst_exact = std::max(worst_exact,
                           std::abs(rep.t_derivative - rep.t_derivative_closed_form) /
                               rep.t_derivative_closed_form);
    worst_quotient = std::max(worst_quotient, rep.quotient_identity_error);
    t_by_n[n] = rep.t_derivative;
  }
  const double ratio = t_by_n[1000] / t_by_n[100];
  r.seconds = std::chrono::duration<double>(std::chrono::steady_clock::now() - t0).count();
  r.pass = worst_bound <= 1e-12 && worst_exact <= 1e-12 && worst_quotient <= 1e-12 &&
           ratio >= 9.0 && ratio <= 11.0;
  r.detail = "closed forms match to " + num(std::max(worst_bound, worst_exact)) +
             " (tol 1e-12); T_1000/T_100 = " + num(ratio) + " (9..11)";
  return r;
}

CheckResult c10_dyck_suite(Context&) {
  CheckResult r{"c10_dyck_suite", false, "", 0};
  const auto t0 = std::chrono::steady_clock::now();

  bool counts_ok = true;
  for (int n = 1; n <= 10; ++n)
    counts_ok = counts_ok && BigUint(enumerate_paths(n).size()) == catalan(n);

  bool roundtrip_ok = true;
  for (int n = 1; n <= 8 && roundtrip_ok; ++n)
    for (const auto& p : enumerate_paths(n))
      if (!(encode(decode(p)) == p)) {
        roundtrip_ok = false;
        break;
      }
  CounterRng rng(321, 7);
  for (int i = 0; i < 10000 && roundtrip_ok; ++i) {
    const DyckPath p = sample_uniform(100, rng);
    if (!(encode(decode(p)) == p)) roundtrip_ok = false;
  }

  // chi-squared uniformity over the 14 paths at N = 4
  const auto paths4 = enumerate_paths(4);
  std::map<std::vector<int>, int> counts;
  CounterRng rng2(9001, 0);
  const int samples = 100000;
  for (int i = 0; i < samples; ++i) counts[sample_uniform(4, rng2).slopes]++;
  const double expected = static_cast<double>(samples) / paths4.size();
  double chi2 = 0.0;
  for (const auto& p : paths4) {
    const double observed = counts.count(p.slopes) ? counts[p.slopes] : 0.0;
    chi2 += (observed - expected) * (observed - expected) / expected;
  }
  const double p_value = chi_squared_sf(chi2, static_cast<int>(paths4.size()) - 1);

  r.seconds = std::chrono::duration<double>(std::chrono::steady_clock::now() - t0).count();
  r.pass = counts_ok && roundtrip_ok && p_value >= 0.001;
  r.detail = std::string("enumeration counts ") + (counts_ok ? "ok" : "BAD") +
             "; round-trips " + (roundtrip_ok ? "ok" : "BAD") +
             "; uniformity p = " + num(p_value) + " (>= 0.001)";
  return r;
}

CheckResult c11_excursion_scaling(Context&) {
  CheckResult r{"c11_excursion_dyck", false, "", 0};
  const auto t0 = std::chrono::steady_clock::now();
  const int n = 500;
  const int samples = 10000;
  std::vector<double> breakpoints(2 * n + 1);
  for (int k = 0; k <= 2 * n; ++k) breakpoints[k] = static_cast<double>(k) / (2 * n);
  CounterRng rng(777, 0);
  double mean_max = 0.0;
  for (int i = 0; i < samples; ++i) {
    const DyckPath p = sample_uniform(n, rng);
    mean_max += normalize(p, breakpoints, 0.5).max_value();
  }
  mean_max /= samples;
  // Monte Carlo oracle target at N = 500: the excursion-maximum mean
  // sqrt(pi/2) with its first finite-size correction -3/(2 sqrt(2N)).
  const double target = std::sqrt(std::numbers::pi / 2.0) - 1.5 / std::sqrt(2.0 * n);
  r.seconds = std::chrono::duration<double>(std::chrono::steady_clock::now() - t0).count();
  r.pass = std::abs(mean_max - target) <= 0.05 * target && r.seconds <= 60.0;
  r.detail = "mean max = " + num(mean_max) + ", target " + num(target) + " +- 5%";
  return r;
}

CheckResult c12_characteristics(Context&) {
  CheckResult r{"c12_characteristics_quad_diff", false, "", 0};
  const auto t0 = std::chrono::steady_clock::now();
  const GridSpec grid{-2.0, 2.0, 5, 1.0, 2.5, 4};
  const int ns[] = {50, 100, 200};
  const CharacteristicsResult res = characteristics_check(ns, 0.2, 1e-3, grid);
  const int n1[] = {1};
  const CharacteristicsResult res1 = characteristics_check(n1, 0.2, 1e-3, grid);
  bool ratios_ok = !res.ratios.empty();
  for (double q : res.ratios) ratios_ok = ratios_ok && q >= 1.6 && q <= 2.4;
  const double defect1 = res1.defects.front();
  r.seconds = std::chrono::duration<double>(std::chrono::steady_clock::now() - t0).count();
  r.pass = ratios_ok && defect1 <= 1e-8;
  std::string ratios = "";
  for (double q : res.ratios) ratios += (ratios.empty() ? "" : ", ") + num(q);
  r.detail = "defect ratios 50->100->200: " + ratios + " (1.6..2.4); N=1 defect " +
             num(defect1) + " (tol 1e-8)";
  return r;
}

CheckResult c13_figures(Context&) {
  CheckResult r{"c13_figures_cli", false, "", 0};
  const auto t0 = std::chrono::steady_clock::now();

  const auto count_substr = [](const std::string& s, const std::string& what) {
    std::size_t n = 0;
    for (std::size_t pos = s.find(what); pos != std::string::npos;
         pos = s.find(what, pos + what.size()))
      ++n;
    return n;
  };

  bool svg_ok = true;
  for (const std::string name : {"fig2", "fig3"}) {
    ScenarioOverrides o;
    o.seed = 1;
    o.seed_set = true;
    const FigureOutput fig = render_driver_figure(builtin(name, o));
    if (count_substr(fig.svg, "<polyline") != 51) svg_ok = false;
    if (count_substr(fig.svg, "</svg>") != 1) svg_ok = false;
    if (count_substr(fig.svg, "stroke=\"red\"") != 1) svg_ok = false;
  }

  // escape smoke test: the heavy driver ends on top in almost every run
  int wins = 0;
  for (int seed = 1; seed <= 100; ++seed) {
    ScenarioOverrides o;
    o.seed = static_cast<std::uint64_t>(seed);
    o.seed_set = true;
    const DriverPath path = simulate(builtin("fig2", o).driver_config());
    const auto& final_state = path.states.back();
    bool top = true;
    for (std::size_t k = 0; k + 1 < final_state.size(); ++k)
      if (final_state[k] >= final_state.back()) top = false;
    if (top) ++wins;
  }

  // stream-field angles: flat on the real axis, vertical at the double zeros
  double worst_angle = 0.0;
  for (const std::string name : {"fig7", "fig8"}) {
    const ScenarioConfig cfg = builtin(name);
    const QuadDiffConfig q = quad_diff_of(cfg);
    for (double x : {-2.2, -0.77, 0.13, 1.4, 2.3}) {
      const double theta = quad_field_direction(q, {x, 0.0});
      worst_angle = std::max(worst_angle,
                             std::min(theta, std::numbers::pi - theta));
    }
    for (double root : q.roots) {
      const double theta = quad_field_direction(q, {root, 1e-9});
      worst_angle = std::max(worst_angle, std::abs(theta - std::numbers::pi / 2.0));
    }
    const FigureOutput fig = render_field_figure(cfg);
    if (count_substr(fig.svg, "</svg>") != 1 || count_substr(fig.svg, "<line") < 100)
      svg_ok = false;
  }

  r.seconds = std::chrono::duration<double>(std::chrono::steady_clock::now() - t0).count();
  r.pass = svg_ok && wins >= 95 && worst_angle <= 1e-6;
  r.detail = std::string("SVGs well-formed: ") + (svg_ok ? "yes" : "no") +
             "; heavy driver on top in " + std::to_string(wins) +
             "/100 runs (>= 95); field angle error " + num(worst_angle) + " (tol 1e-6)";
  return r;
}

CheckResult c14_reproducibility(Context& ctx) {
  CheckResult r{"c14_reproducibility_cli", false, "", 0};
  const auto t0 = std::chrono::steady_clock::now();
  bool ok = true;
  std::string what;

  const auto check = [&](const std::string& label, const std::string& a,
                         const std::string& b) {
    if (a != b) {
      ok = false;
      if (!what.empty()) what += ", ";
      what += label;
    }
  };

  {  // deterministic flows: semicircle (vs the cached first run)
    ScenarioOverrides o;
    o.n = 400;
    o.kappa = 0.0;
    o.horizon = 0.26;
    o.dt = 1e-4;
    const DriverPath again = simulate(builtin("semicircle", o).driver_config());
    check("semicircle", ctx.get_semicircle400().drivers_csv(), again.drivers_csv());
  }
  {  // stochastic run with a fixed seed
    ScenarioOverrides o;
    o.seed = 11;
    o.seed_set = true;
    const ScenarioConfig cfg = builtin("fig2", o);
    check("fig2-drivers", simulate(cfg.driver_config()).drivers_csv(),
          simulate(cfg.driver_config()).drivers_csv());
    check("fig2-svg", render_driver_figure(cfg).svg, render_driver_figure(cfg).svg);
  }
  {  // measure snapshot CSV through the deterministic pipeline
    ScenarioOverrides o;
    o.n = 51;
    const ScenarioConfig cfg = builtin("molly", o);
    const DriverPath p1 = simulate(cfg.driver_config());
    const DriverPath p2 = simulate(cfg.driver_config());
    check("molly-measures", p1.measure_at(0.5).to_csv(), p2.measure_at(0.5).to_csv());
  }
  {  // sampler
    const auto sample_csv = [](std::uint64_t seed) {
      CounterRng rng(seed, 0);
      std::string out;
      for (int i = 0; i < 50; ++i) out += sample_uniform(500, rng).csv();
      return out;
    };
    check("dyck-samples", sample_csv(42), sample_csv(42));
  }
  {  // quadratic-differential field
    const ScenarioConfig cfg = builtin("fig7");
    check("fig7-field", render_field_figure(cfg).csv, render_field_figure(cfg).csv);
  }

  r.seconds = std::chrono::duration<double>(std::chrono::steady_clock::now() - t0).count();
  r.pass = ok;
  r.detail = ok ? "byte-identical CSV/SVG across repeated runs"
               : "mismatch in: " + what;
  return r;
}

}  // namespace

std::vector<CheckResult> run_acceptance(const std::string& filter) {
  using CheckFn = std::function<CheckResult(Context&)>;
  const std::vector<std::pair<std::string, CheckFn>> checks = {
      {"c01_semicircle_limit_burgers", c01_semicircle_limit},
      {"c02_hcap_loewner", c02_hcap},
      {"c03_single_slit_loewner", c03_single_slit},
      {"c04_burgers_residual", c04_burgers_residual},
      {"c05_voiculescu_burgers", c05_voiculescu},
      {"c06_compose_profile_measures", c06_compose_profile},
      {"c07_johnny_escape_scenarios", c07_johnny_escape},
      {"c08_molly_symmetry_scenarios", c08_molly_symmetry},
      {"c09_prince_charles_blowup_scenarios", c09_prince_charles_blowup},
      {"c10_dyck_suite", c10_dyck_suite},
      {"c11_excursion_dyck", c11_excursion_scaling},
      {"c12_characteristics_quad_diff", c12_characteristics},
      {"c13_figures_cli", c13_figures},
      {"c14_reproducibility_cli", c14_reproducibility},
  };

  Context ctx;
  std::vector<CheckResult> results;
  for (const auto& [id, fn] : checks) {
    if (!filter.empty() && id.find(filter) == std::string::npos) continue;
    try {
      results.push_back(fn(ctx));
    } catch (const std::exception& e) {
      results.push_back({id, false, std::string("exception: ") + e.what(), 0.0});
    }
  }
  return results;
}

std::string format_results(const std::vector<CheckResult>& results) {
  std::ostringstream out;
  std::size_t passed = 0;
  for (const auto& r : results) {
    out << (r.pass ? "[PASS] " : "[FAIL] ") << r.id << "  " << r.detail;
    char buf[32];
    std::snprintf(buf, sizeof(buf), "  (%.1fs)", r.seconds);
    out << buf << "\n";
    if (r.pass) ++passed;
  }
  out << passed << "/" << results.size() << " checks passed\n";
  return out.str();
}

}  // namespace slitflow
