// One PASS/FAIL line per acceptance criterion. A criterion also fails when it
// exceeds its runtime budget. Exit status is the number of failures.

#include <algorithm>
#include <chrono>
#include <cmath>
#include <cstdio>
#include <functional>
#include <random>
#include <string>
#include <vector>

#include "fricmatch/continuum.hpp"
#include "fricmatch/efficiency.hpp"
#include "fricmatch/error.hpp"
#include "fricmatch/estimation.hpp"
#include "fricmatch/simulator.hpp"
#include "fricmatch/two_firm.hpp"

using namespace fricmatch;

namespace {

struct Outcome {
  bool pass = true;
  std::string detail;

  void require(bool ok, const std::string& what) {
    if (!ok) {
      pass = false;
      if (!detail.empty()) detail += "; ";
      detail += what;
    }
  }
  void info(const std::string& what) {
    if (!detail.empty()) detail += "; ";
    detail += what;
  }
};

std::string fmt(const char* f, double a) {
  char buf[64];
  std::snprintf(buf, sizeof buf, f, a);
  return buf;
}

std::string fmt(const char* f, double a, double b) {
  char buf[96];
  std::snprintf(buf, sizeof buf, f, a, b);
  return buf;
}

std::string fmt(const char* f, double a, double b, double c) {
  char buf[128];
  std::snprintf(buf, sizeof buf, f, a, b, c);
  return buf;
}

PreferenceDistribution pref(const std::string& text, std::size_t n) {
  return make_preference(preference::parse(text), Grid(n));
}

std::vector<double> values(const ShareProfile& s) { return {s.shares().begin(), s.shares().end()}; }

double sup_diff(std::span<const double> a, std::span<const double> b) {
  double m = 0.0;
  for (std::size_t i = 0; i < a.size(); ++i) m = std::max(m, std::abs(a[i] - b[i]));
  return m;
}

double max_of(std::span<const double> v) { return *std::max_element(v.begin(), v.end()); }

// ------------------------------------------------------------------ 1

Outcome two_firm_closed_forms() {
  Outcome o;
  std::mt19937_64 rng(20240601);
  std::uniform_real_distribution<double> u(0.0, 1.0);
  double worst_c = 0.0, worst_p = 0.0, worst_sym = 0.0;
  for (int i = 0; i < 20; ++i) {
    const double p = u(rng), r = 0.01 + 5.0 * u(rng), a = u(rng);
    worst_c = std::max(worst_c, std::abs(share_constant_rate(p, r) - (r + p) / (1.0 + 2.0 * r)));
    const double hand = std::clamp(p * (2.0 * r + 1.0) - r, 0.0, 1.0);
    worst_p = std::max(worst_p, std::abs(share_proportional(p, r) - hand));
    worst_sym = std::max(worst_sym, std::abs(share_constant_rate(p, r) + share_constant_rate(1 - p, r) - 1));
    worst_sym = std::max(worst_sym, std::abs(share_proportional(p, r) + share_proportional(1 - p, r) - 1));
    const double sa = share_affine(p, r, a).selected_share();
    const double sb = share_affine(1 - p, r, a).selected_share();
    worst_sym = std::max(worst_sym, std::abs(sa + sb - 1));
  }
  o.require(worst_c <= 1e-12, "constant-rate formula off by " + fmt("%.2e", worst_c));
  o.require(worst_p <= 1e-12, "proportional formula off by " + fmt("%.2e", worst_p));
  o.require(worst_sym <= 1e-10, "symmetry off by " + fmt("%.2e", worst_sym));
  o.info(fmt("max errors %.1e / %.1e, symmetry %.1e", worst_c, worst_p, worst_sym));
  return o;
}

// ------------------------------------------------------------------ 2

Outcome theorem1() {
  Outcome o;
  const auto grid = half_grid(401);
  for (double a : {0.55, 0.6, 0.75, 0.9}) {
    const double t = *theorem1_threshold(a);
    auto below = verify_theorem1(a, std::max(t - 0.02, 1e-4), grid);
    auto above = verify_theorem1(a, t + 0.02, grid);
    o.require(below.accentuates && below.consistent,
              fmt("alpha %.2f: no accentuation just below threshold %.4f", a, t));
    o.require(!above.accentuates && above.consistent,
              fmt("alpha %.2f: accentuation just above threshold %.4f", a, t));
    o.info(fmt("alpha %.2f threshold %.4f excess below %.2e", a, t, below.max_excess));
  }
  return o;
}

// ------------------------------------------------------------------ 3

Outcome winner_takes_all() {
  Outcome o;
  for (double p : {0.6, 0.75, 0.9}) {
    const double star = (1 - p) / (p - (1 - p));
    for (double f : {1.0, 1.0001, 1.5, 4.0, 100.0}) {
      o.require(share_proportional(p, star * f) == 1.0,
                fmt("p_a %.2f: s_A < 1 at r_f = %.6f", p, star * f));
    }
    o.require(share_proportional(p, star * 0.99) < 1.0, fmt("p_a %.2f: s_A = 1 below r_f*", p));
  }
  return o;
}

// ------------------------------------------------------------------ 4

Outcome continuum_constant_rate() {
  Outcome o;
  const std::size_t n = 512;
  struct Case {
    const char* ell;
    double r_f;
  };
  const Case cases[] = {{"block:0.4,0.6,5", 0.1},
                        {"block:0.4,0.6,5", 1.0},
                        {"gaussian:0.5,0.1", 0.3},
                        {"double_peak:0.3,0.06,0.7,0.06,0.5", 0.5},
                        {"triangle:0.1,0.3,1", 2.0}};
  double worst = 0.0;
  for (const auto& c : cases) {
    auto ell = pref(c.ell, n);
    auto fp = solve_fixed_point_robust(ell, FrictionParams{c.r_f, 1.0, 1.0, 0.0});
    auto cr = solve_constant_rate(ell, c.r_f);
    double d = sup_diff(fp.profile.shares(), cr.shares());
    worst = std::max(worst, d);
    o.require(max_of(cr.shares()) <= max_of(ell.density()) + 1e-8, std::string("max(s) > max(ell) for ") + c.ell);
  }
  o.require(worst <= 1e-6, "fixed point vs closed form " + fmt("%.2e", worst));

  auto block = pref("block:0.4,0.6,5", n);
  double prev = INFINITY;
  std::string series;
  for (double r : {0.1, 0.5, 1.0, 3.0}) {
    auto s = solve_constant_rate(block, r);
    double v = profile_stats(s).variance;
    o.require(v < prev, fmt("variance not decreasing at r_f %.2f", r));
    o.require(max_of(s.shares()) <= max_of(block.density()) + 1e-8, fmt("max(s) > max(ell) at r_f %.2f", r));
    prev = v;
    series += fmt(" %.4f", v);
  }
  o.info("sup diff " + fmt("%.1e", worst) + ", block variances" + series);
  return o;
}

// ------------------------------------------------------------------ 5

Outcome frictionless_limit() {
  Outcome o;
  auto ell = pref("gaussian:0.5,0.15", 512);
  const double bound = 0.05 * max_of(ell.density());
  for (double a : {0.0, 0.5, 0.9}) {
    auto fp = solve_fixed_point_robust(ell, FrictionParams{1e-3, 1.0, 1.0, a});
    double d = sup_diff(fp.profile.shares(), ell.density());
    o.require(d <= bound, fmt("alpha %.1f: sup|s - ell| = %.4f > %.4f", a, d, bound));
    o.info(fmt("alpha %.1f: %.2e", a, d));
  }
  return o;
}

// ------------------------------------------------------------------ 6

Outcome concentration() {
  Outcome o;
  auto ell = pref("triangle:0.1,0.3,1", 512);
  const double ystar = median_point(ell);
  const double mode = 0.3;
  auto fp = solve_fixed_point_robust(ell, FrictionParams{50.0, 1.0, 1.0, 0.99});
  auto st = profile_stats(fp.profile);
  const double near = fp.profile.mass_near(ystar, 0.05);
  auto circ = [](double a, double b) {
    double d = std::abs(a - b);
    return std::min(d, 1.0 - d);
  };
  o.require(circ(ystar, mode) >= 0.1, "median and mode too close for the test");
  o.require(near >= 0.95, fmt("mass within 0.05 of the median %.3f < 0.95", near));
  o.require(circ(st.argmax, ystar) <= 0.05, fmt("peak at %.4f, median %.4f", st.argmax, ystar));
  o.require(circ(st.argmax, ystar) < circ(st.argmax, mode), "peak closer to the mode than the median");
  o.info(fmt("median %.4f, peak %.4f, mass near median %.3f", ystar, st.argmax, near));
  return o;
}

// ------------------------------------------------------------------ 7

Outcome non_monotonic_frictions() {
  Outcome o;
  auto ell = pref("block:0.25,0.75,2", 512);
  std::vector<double> var;
  std::string series;
  for (double r : {0.2, 1.0, 3.0, 8.0}) {
    auto fp = solve_fixed_point_robust(ell, FrictionParams{r, 1.0, 1.0, 0.8});
    var.push_back(profile_stats(fp.profile).variance);
    series += fmt(" %.4f", var.back());
  }
  const auto peak = static_cast<std::size_t>(std::max_element(var.begin(), var.end()) - var.begin());
  bool shape = peak > 0 && peak + 1 < var.size();
  for (std::size_t i = 0; shape && i < peak; ++i) shape = var[i] < var[i + 1];
  for (std::size_t i = peak; shape && i + 1 < var.size(); ++i) shape = var[i] > var[i + 1];
  o.require(shape, "variance is not rise-then-fall");
  o.info("variances" + series);
  return o;
}

// ------------------------------------------------------------------ 8

Outcome monte_carlo() {
  Outcome o;
  double worst = 0.0;
  auto check = [&](const std::string& name, double sim, double se, double want) {
    double z = se > 0.0 ? (sim - want) / se : INFINITY;
    worst = std::max(worst, std::abs(z));
    o.require(std::abs(z) <= 3.0, name + fmt(": z = %.2f", z));
  };
  struct TwoFirmCase {
    double p_a, r_f, alpha, burn;
  };
  for (const auto& c : {TwoFirmCase{0.6, 0.25, 0.0, 5}, TwoFirmCase{0.7, 1.0, 0.75, 20},
                        TwoFirmCase{0.6, 0.25, 1.0, 20}}) {
    SimConfig cfg;
    cfg.two_firm_p_a = c.p_a;
    cfg.frictions = FrictionParams{c.r_f, 1.0, 1.0, c.alpha};
    cfg.n_agents = 50000;
    cfg.replications = 8;
    cfg.burn_in = c.burn / c.r_f;
    cfg.horizon = cfg.burn_in + 20.0 / c.r_f;
    auto res = replicate(cfg, cfg.replications);
    const std::string tag = fmt("two-firm alpha %.2f", c.alpha);
    check(tag + " s_A", res.shares[0], res.share_se[0], share_affine(c.p_a, c.r_f, c.alpha).selected_share());
    check(tag + " unmatched", res.unmatched_fraction, res.unmatched_se, cfg.frictions.unmatched_fraction());
  }
  {
    SimConfig cfg;
    auto ell = pref("gaussian:0.5,0.15", 64);
    cfg.ell = ell;
    cfg.frictions = FrictionParams{1.0, 1.0, 1.0, 0.8};
    cfg.n_agents = 50000;
    cfg.replications = 8;
    cfg.burn_in = 20.0;
    cfg.horizon = 40.0;
    auto res = replicate(cfg, cfg.replications);
    auto fp = solve_fixed_point_robust(ell, cfg.frictions);
    auto want = bin_profile(values(fp.profile), 8);
    auto got = bin_shares(res, 8);
    for (std::size_t b = 0; b < want.size(); ++b) {
      check("continuum bin " + std::to_string(b), got.mass[b], got.se[b], want[b]);
    }
    check("continuum unmatched", res.unmatched_fraction, res.unmatched_se, cfg.frictions.unmatched_fraction());
  }
  o.info(fmt("largest |z| %.2f", worst));
  return o;
}

// ------------------------------------------------------------------ 9

Outcome efficiency_externality() {
  Outcome o;
  auto ell = pref("gaussian:0.5,0.25", 512);
  auto out = nash_and_social(ell, 0.2, alpha_grid(41));
  const double cap = out.alphas.back();
  std::size_t at_cap = 0;
  double lowest = cap;
  for (double b : out.best_response) {
    if (b == cap) ++at_cap;
    lowest = std::min(lowest, b);
  }
  o.require(!out.degenerate, "efficiency is flat");
  o.require(out.efficiency.interior(), fmt("efficiency argmax at the boundary (%.4f)", out.social_alpha));
  o.require(at_cap == out.best_response.size(),
            fmt("best response below the cap at %.0f of %.0f grid points (lowest %.4f)",
                static_cast<double>(out.best_response.size() - at_cap),
                static_cast<double>(out.best_response.size()), lowest));
  o.require(out.gap() && *out.gap() > 0.0, "no Nash point above the social optimum");
  o.info(fmt("social alpha %.4f", out.social_alpha));
  if (out.nash_alpha) o.info(fmt("nash alpha %.4f", *out.nash_alpha));
  return o;
}

// ------------------------------------------------------------------ 10

Outcome estimator_recovery() {
  Outcome o;
  auto pooled = [](const SynthConfig& c) {
    auto panel = synth_flow_panel(c);
    adjust_flows(panel, c.beta1);
    return estimate_alpha(panel, EstimateScope::pooled).at(0);
  };
  std::string line;
  for (double a : {0.0, 0.25, 0.5, 0.75, 1.0}) {
    SynthConfig c;
    c.alpha_by_year = {a};
    c.seed = 101;
    auto e = pooled(c);
    o.require(e.defined && std::abs(e.alpha_hat - a) <= 0.03,
              fmt("alpha %.2f estimated %.4f (se %.4f)", a, e.alpha_hat, e.se));
    line += fmt(" %.3f", e.alpha_hat);
  }
  o.info("constant panels" + line);

  {
    SynthConfig c;
    c.alpha_by_year.clear();
    for (std::size_t t = 0; t < c.years; ++t) {
      c.alpha_by_year.push_back(0.6 + 0.25 * static_cast<double>(t) / static_cast<double>(c.years - 1));
    }
    c.seed = 202;
    auto by_year = alpha_by_year(synth_flow_panel(c), 1.0);
    double worst = 0.0;
    for (const auto& e : by_year) {
      const std::size_t t = static_cast<std::size_t>(std::stoi(e.label) - c.first_year);
      const double d = std::abs(e.alpha_hat - c.alpha_in_year(t));
      worst = std::max(worst, d);
      o.require(e.defined && d <= 0.05, "year " + e.label + fmt(": off by %.4f", d));
    }
    o.require(by_year.size() + 1 == c.years, "missing years in the ramp");
    o.info(fmt("ramp worst error %.4f", worst));
  }

  {
    SynthConfig c;
    c.n_markets = 50;
    c.buyers_per_firm = 1000;
    c.beta1 = 0.15;
    c.alpha_by_year = {0.75};
    c.seed = 303;
    auto e = pooled(c);
    o.require(std::abs(e.alpha_hat - 0.75) <= 0.05, fmt("beta1 0.15 estimated %.4f", e.alpha_hat));
    o.info(fmt("beta1 0.15 estimate %.4f", e.alpha_hat));
  }
  return o;
}

// ------------------------------------------------------------------ 11

Outcome scenario_sweep() {
  Outcome o;
  for (const char* spec : {"gaussian:0.5,0.1", "gaussian:0.5,0.2"}) {
    auto ell = pref(spec, 512);
    double prev = -1.0;
    std::string series;
    for (double r : {0.05, 0.1, 0.2, 0.3}) {
      auto fp = solve_fixed_point_robust(ell, FrictionParams{r, 1.0, 1.0, 0.75});
      double v = profile_stats(fp.profile).variance;
      o.require(v >= prev, std::string(spec) + fmt(": variance falls at r_f %.2f", r));
      prev = v;
      series += fmt(" %.4f", v);
    }
    o.info(std::string(spec) + series);
  }
  return o;
}

}  // namespace

int main() {
  struct Criterion {
    int id;
    const char* name;
    double budget_s;
    std::function<Outcome()> run;
  };
  const std::vector<Criterion> criteria = {
      {1, "two-firm closed forms and symmetry", 1, two_firm_closed_forms},
      {2, "homogenizing threshold", 30, theorem1},
      {3, "winner-takes-all threshold", 1, winner_takes_all},
      {4, "continuum constant rates", 60, continuum_constant_rate},
      {5, "frictionless limit", 60, frictionless_limit},
      {6, "concentration at the median point", 120, concentration},
      {7, "non-monotonic frictions", 120, non_monotonic_frictions},
      {8, "Monte Carlo vs analytics", 600, monte_carlo},
      {9, "efficiency externality", 600, efficiency_externality},
      {10, "estimator recovery", 900, estimator_recovery},
      {11, "scenario sweep", 120, scenario_sweep},
  };
  int failures = 0;
  for (const auto& c : criteria) {
    const auto t0 = std::chrono::steady_clock::now();
    Outcome o;
    try {
      o = c.run();
    } catch (const std::exception& e) {
      o.require(false, std::string("exception: ") + e.what());
    }
    const double secs = std::chrono::duration<double>(std::chrono::steady_clock::now() - t0).count();
    o.require(secs <= c.budget_s, fmt("over budget (%.1f s > %.0f s)", secs, c.budget_s));
    if (!o.pass) ++failures;
    std::printf("criterion %2d %s: %s [%.1f s / %.0f s] %s\n", c.id, c.name, o.pass ? "PASS" : "FAIL", secs,
                c.budget_s, o.detail.c_str());
    std::fflush(stdout);
  }
  std::printf("%d of %zu criteria passed\n", static_cast<int>(criteria.size()) - failures, criteria.size());
  return failures;
}
