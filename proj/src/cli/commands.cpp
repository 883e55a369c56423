#include <algorithm>
#include <cmath>
#include <cstdio>
#include <fstream>
#include <future>
#include <limits>
#include <map>
#include <sstream>

#include <json.hpp>

#include "cli.hpp"
#include "fricmatch/continuum.hpp"
#include "fricmatch/efficiency.hpp"
#include "fricmatch/error.hpp"
#include "fricmatch/estimation.hpp"
#include "fricmatch/simulator.hpp"
#include "fricmatch/two_firm.hpp"

namespace fricmatch::cli {

namespace {

using nlohmann::json;

std::string num(double v) {
  if (std::isnan(v)) return "nan";
  char buf[40];
  std::snprintf(buf, sizeof buf, "%.12g", v);
  return buf;
}

json num_or_null(double v) { return std::isfinite(v) ? json(v) : json(nullptr); }

std::string join(std::initializer_list<std::string> cells) {
  std::string out;
  for (const auto& c : cells) {
    if (!out.empty()) out += ',';
    out += c;
  }
  return out + '\n';
}

const ParamDef kSeed{"seed", "1", "random seed"};

std::vector<ParamDef> solve_params() {
  return {
      {"max_iterations", "10000", "fixed-point iteration cap"},
      {"tolerance", "1e-10", "sup-norm step tolerance"},
      {"damping", "0.5", "weight on the new iterate"},
      {"alpha_cap", "0.999", "largest alpha the solver accepts"},
      {"retries", "4", "damping halvings after a non-converged solve"},
  };
}

SolveOptions solve_options(const Params& p) {
  SolveOptions o;
  o.max_iterations = static_cast<int>(p.integer("max_iterations"));
  o.tolerance = p.num("tolerance");
  o.damping = p.num("damping");
  o.alpha_cap = p.num("alpha_cap");
  o.validate();
  return o;
}

int retries(const Params& p) {
  long r = p.integer("retries");
  if (r < 0) throw InvalidInput("retries must be >= 0");
  return static_cast<int>(r);
}

Grid grid_of(const Params& p, const char* key = "n") {
  long n = p.integer(key);
  if (n < static_cast<long>(kMinGridSize)) {
    throw InvalidInput(std::string(key) + " must be >= " + std::to_string(kMinGridSize));
  }
  return Grid(static_cast<std::size_t>(n));
}

// ---------------------------------------------------------------- two-firm

void run_two_firm(const Params& p, RunContext& ctx) {
  std::string mode = p.str("mode");
  std::vector<std::string> modes;
  if (mode == "all") {
    modes = {"constant", "proportional", "affine"};
  } else if (mode == "constant" || mode == "proportional" || mode == "affine") {
    modes = {mode};
  } else {
    throw InvalidInput("mode must be constant, proportional, affine or all");
  }
  auto p_as = p.list("p_a");
  auto r_fs = p.list("r_f");
  auto alphas = p.list("alpha");
  for (double a : alphas) {
    if (!(a >= 0.0 && a <= 1.0)) throw InvalidInput("alpha must lie in [0, 1]");
  }

  std::string csv = "mode,alpha,r_f,p_a,root,s_A,stable,selected\n";
  for (const auto& m : modes) {
    if (m == "affine") {
      for (double a : alphas) {
        for (double r : r_fs) {
          for (double pa : p_as) {
            auto sol = share_affine(pa, r, a);
            for (std::size_t k = 0; k < sol.roots.size(); ++k) {
              csv += join({m, num(a), num(r), num(pa), std::to_string(k), num(sol.roots[k].s_A),
                           sol.roots[k].stable ? "1" : "0", k == sol.selected ? "1" : "0"});
            }
          }
        }
      }
    } else {
      double a = m == "constant" ? 0.0 : 1.0;
      for (double r : r_fs) {
        for (double pa : p_as) {
          double s = m == "constant" ? share_constant_rate(pa, r) : share_proportional(pa, r);
          csv += join({m, num(a), num(r), num(pa), "0", num(s), "1", "1"});
        }
      }
    }
  }
  ctx.write("two_firm.csv", csv);

  if (std::find(modes.begin(), modes.end(), "affine") != modes.end()) {
    json th = json::array();
    for (double a : alphas) {
      json e;
      e["alpha"] = a;
      if (a < 1.0) {
        auto t = theorem1_threshold(a);
        e["threshold_r_f"] = t ? json(*t) : json(nullptr);
      } else {
        e["threshold_r_f"] = nullptr;
      }
      json margins = json::array();
      for (double r : r_fs) {
        double mg = homogenizing_margin(a, r);
        margins.push_back({{"r_f", r}, {"margin", mg}, {"homogenizing", mg >= 0.0}});
      }
      e["margins"] = margins;
      th.push_back(e);
    }
    ctx.write("thresholds.json", th.dump(2));
  }
}

// ---------------------------------------------------------------- continuum

struct ProfileRun {
  double r_f = 0.0;
  std::vector<double> s;
  SolveReport report;
  bool ok = false;
  std::string error;
};

ProfileRun solve_one(const PreferenceDistribution& ell, double r_f, double alpha, double K,
                     const std::string& method, const SolveOptions& opts, int n_retries) {
  ProfileRun run;
  run.r_f = r_f;
  if (!(r_f > 0.0)) throw InvalidInput("r_f must be > 0");
  bool closed = method == "constant_rate" || (method == "auto" && alpha == 0.0);
  if (method == "constant_rate" && alpha != 0.0) {
    throw InvalidInput("method constant_rate needs alpha = 0");
  }
  if (closed) {
    auto prof = solve_constant_rate(ell, r_f);
    run.s.assign(prof.shares().begin(), prof.shares().end());
    run.report.converged = true;
    run.ok = true;
    return run;
  }
  try {
    auto res = solve_fixed_point_robust(ell, FrictionParams::from_ratio(r_f, alpha, K), opts,
                                        n_retries);
    run.s.assign(res.profile.shares().begin(), res.profile.shares().end());
    run.report = res.report;
    run.ok = true;
  } catch (const NonConvergence& e) {
    run.error = e.what();
    run.report.iterations = e.iterations();
    run.report.last_step = e.last_step();
  }
  return run;
}

std::vector<ProfileRun> solve_all(const PreferenceDistribution& ell, const std::vector<double>& r_fs,
                                  double alpha, double K, const std::string& method,
                                  const SolveOptions& opts, int n_retries, unsigned threads) {
  std::vector<ProfileRun> out(r_fs.size());
  if (threads <= 1 || r_fs.size() <= 1) {
    for (std::size_t i = 0; i < r_fs.size(); ++i) {
      out[i] = solve_one(ell, r_fs[i], alpha, K, method, opts, n_retries);
    }
    return out;
  }
  std::vector<std::future<ProfileRun>> jobs;
  std::size_t next = 0;
  while (next < r_fs.size() || !jobs.empty()) {
    while (next < r_fs.size() && jobs.size() < threads) {
      jobs.push_back(std::async(std::launch::async, solve_one, std::cref(ell), r_fs[next], alpha, K,
                                std::cref(method), std::cref(opts), n_retries));
      ++next;
    }
    std::size_t base = next - jobs.size();
    for (std::size_t k = 0; k < jobs.size(); ++k) out[base + k] = jobs[k].get();
    jobs.clear();
  }
  return out;
}

std::optional<double> try_median(const PreferenceDistribution& ell) {
  try {
    return median_point(ell);
  } catch (const Degenerate&) {
    return std::nullopt;
  }
}

std::string stats_header(bool with_ell) {
  return std::string(with_ell ? "ell," : "") +
         "r_f,variance,max,min,argmax,mass_near_median,iterations,residual,converged\n";
}

std::string stats_row(const std::string& ell_label, const Grid& grid, const ProfileRun& run,
                      std::optional<double> median) {
  std::string prefix = ell_label.empty() ? "" : "\"" + ell_label + "\",";
  if (!run.ok) {
    return prefix + join({num(run.r_f), "nan", "nan", "nan", "nan", "nan",
                          std::to_string(run.report.iterations), "nan", "0"});
  }
  auto st = profile_stats(run.s, grid);
  double near = std::numeric_limits<double>::quiet_NaN();
  if (median) near = ShareProfile(grid, run.s, 1e-6).mass_near(*median, 0.05);
  return prefix + join({num(run.r_f), num(st.variance), num(st.max), num(st.min), num(st.argmax),
                        num(near), std::to_string(run.report.iterations), num(run.report.residual),
                        "1"});
}

std::vector<ParamDef> continuum_params() {
  std::vector<ParamDef> d = {
      {"ell", "block:0.4,0.6,5", "preference density"},
      {"r_f", "0.1,0.5,1,3", "friction ratios mu / lambda_tot"},
      {"alpha", "0", "meeting-rate slope"},
      {"K", "1", "unmatched / matched meeting ratio"},
      {"n", "512", "grid cells"},
      {"method", "auto", "auto, fixed_point or constant_rate"},
      {"threads", "1", "parallel solves"},
      kSeed,
  };
  auto s = solve_params();
  d.insert(d.end(), s.begin(), s.end());
  return d;
}

unsigned threads_of(const Params& p) {
  long t = p.integer("threads");
  if (t < 1) throw InvalidInput("threads must be >= 1");
  return static_cast<unsigned>(t);
}

void run_continuum(const Params& p, RunContext& ctx) {
  Grid grid = grid_of(p);
  auto ell = make_preference(preference::parse(p.str("ell")), grid);
  auto r_fs = p.list("r_f");
  double alpha = p.num("alpha");
  double K = p.num("K");
  FrictionParams::from_ratio(1.0, alpha, K).validate();
  std::string method = p.str("method");
  if (method != "auto" && method != "fixed_point" && method != "constant_rate") {
    throw InvalidInput("method must be auto, fixed_point or constant_rate");
  }
  auto opts = solve_options(p);
  auto runs = solve_all(ell, r_fs, alpha, K, method, opts, retries(p), threads_of(p));
  auto median = try_median(ell);

  std::string prof = "r_f,y,ell,s\n";
  std::string stats = stats_header(false);
  json summary;
  summary["ell_max"] = ell.max();
  summary["median_point"] = median ? json(*median) : json(nullptr);
  json per = json::array();
  for (const auto& run : runs) {
    stats += stats_row("", grid, run, median);
    json e{{"r_f", run.r_f}, {"converged", run.ok}};
    if (!run.ok) {
      ctx.flag_partial("continuum r_f=" + num(run.r_f) + ": " + run.error);
      per.push_back(e);
      continue;
    }
    for (std::size_t i = 0; i < grid.size(); ++i) {
      prof += join({num(run.r_f), num(grid.point(i)), num(ell[i]), num(run.s[i])});
    }
    auto st = profile_stats(run.s, grid);
    e["variance"] = st.variance;
    e["max"] = st.max;
    e["max_exceeds_ell_max"] = st.max > ell.max();
    if (median) {
      double at = run.s[grid.cell_of(*median)];
      e["share_at_median"] = at;
      e["median_share_exceeds_ell_max"] = at > ell.max();
    }
    per.push_back(e);
  }
  summary["runs"] = per;
  ctx.write("profiles.csv", prof);
  ctx.write("stats.csv", stats);
  ctx.write("summary.json", summary.dump(2));
}

// ---------------------------------------------------------------- efficiency

void run_efficiency(const Params& p, RunContext& ctx) {
  Grid grid = grid_of(p);
  auto ell = make_preference(preference::parse(p.str("ell")), grid);
  double r_f = p.num("r_f");
  EfficiencyOptions eo;
  eo.surplus = SurplusFunction::parse(p.str("surplus"));
  eo.solve = solve_options(p);
  eo.retries = retries(p);
  long points = p.integer("alpha_points");
  if (points < 2) throw InvalidInput("alpha_points must be >= 2");
  auto alphas = alpha_grid(static_cast<std::size_t>(points), eo.solve.alpha_cap);

  StrategicModel model(ell, r_f, alphas, eo);
  auto curve = model.efficiency_curve();
  std::string eff = "alpha,efficiency\n";
  for (std::size_t i = 0; i < alphas.size(); ++i) eff += join({num(alphas[i]), num(curve.values[i])});
  ctx.write("efficiency.csv", eff);

  json report;
  report["r_f"] = r_f;
  report["surplus"] = eo.surplus.describe();
  report["social_alpha"] = curve.argmax_alpha();
  report["efficiency_interior_argmax"] = curve.interior();

  if (p.flag("strategy")) {
    auto out = nash_and_social(ell, r_f, alphas, eo);
    std::string br = "alpha_tilde,best_response\n";
    for (std::size_t i = 0; i < alphas.size(); ++i) br += join({num(alphas[i]), num(out.best_response[i])});
    ctx.write("best_response.csv", br);
    report["nash_alpha"] = out.nash_alpha ? json(*out.nash_alpha) : json(nullptr);
    report["cycle"] = out.cycle;
    report["degenerate"] = out.degenerate;
    auto gap = out.gap();
    report["nash_minus_social"] = gap ? json(*gap) : json(nullptr);
    report["best_response_always_cap"] =
        std::all_of(out.best_response.begin(), out.best_response.end(),
                    [&](double b) { return b == alphas.back(); });
  }

  if (!p.empty("alpha_tilde")) {
    double at = p.num("alpha_tilde");
    std::size_t tilde = 0;
    for (std::size_t i = 1; i < alphas.size(); ++i) {
      if (std::abs(alphas[i] - at) < std::abs(alphas[tilde] - at)) tilde = i;
    }
    auto u = model.utility_curve(tilde);
    std::string csv = "alpha,utility,efficiency\n";
    for (std::size_t i = 0; i < alphas.size(); ++i) {
      csv += join({num(alphas[i]), num(u[i]), num(curve.values[i])});
    }
    ctx.write("utility.csv", csv);
    report["alpha_tilde"] = alphas[tilde];
    report["best_response_to_alpha_tilde"] = alphas[model.best_response(tilde)];
  }
  ctx.write("strategy.json", report.dump(2));
}

// ---------------------------------------------------------------- simulate

void run_simulate(const Params& p, RunContext& ctx) {
  SimConfig c;
  std::string market = p.str("market");
  double r_f = p.num("r_f");
  double lt = p.num("lambda_tot");
  c.frictions = FrictionParams{r_f * lt, lt, p.num("K"), p.num("alpha")};
  c.frictions.validate();
  std::optional<PreferenceDistribution> ell;
  if (market == "two-firm") {
    c.two_firm_p_a = p.num("p_a");
  } else if (market == "continuum") {
    ell = make_preference(preference::parse(p.str("ell")), grid_of(p));
    c.ell = *ell;
  } else {
    throw InvalidInput("market must be two-firm or continuum");
  }
  long agents = p.integer("n_agents");
  long reps = p.integer("replications");
  if (agents < 1 || reps < 1) throw InvalidInput("n_agents and replications must be positive");
  c.n_agents = static_cast<std::size_t>(agents);
  double life = 1.0 / c.frictions.mu;
  c.burn_in = p.num("burn_in") * life;
  c.horizon = c.burn_in + p.num("measure") * life;
  c.seed = p.u64("seed");
  c.replications = static_cast<std::size_t>(reps);
  c.batch_interval = p.num("batch_interval");
  c.threads = threads_of(p);
  c.validate();

  auto res = replicate(c, c.replications);
  ctx.write("sim_result.json", sim_result_json(res));
  ctx.write("shares.csv", sim_result_csv(res));

  std::string cmp = "quantity,simulated,se,predicted,z\n";
  auto zrow = [&](const std::string& name, double sim, double se, double want) {
    double z = se > 0.0 ? (sim - want) / se : std::numeric_limits<double>::quiet_NaN();
    cmp += join({name, num(sim), num(se), num(want), num(z)});
    return z;
  };
  double worst = 0.0;
  if (market == "two-firm") {
    auto sol = share_affine(*c.two_firm_p_a, r_f, c.frictions.alpha);
    double want = sol.selected_share();
    worst = std::max(worst, std::abs(zrow("s_A", res.shares[0], res.share_se[0], want)));
  } else {
    long bins = p.integer("bins");
    if (bins < 1 || static_cast<std::size_t>(bins) > ell->size()) throw InvalidInput("bad bins");
    std::vector<double> density;
    if (c.frictions.alpha == 0.0) {
      auto prof = solve_constant_rate(*ell, r_f);
      density.assign(prof.shares().begin(), prof.shares().end());
    } else {
      SolveOptions o = solve_options(p);
      auto fp = solve_fixed_point_robust(*ell, c.frictions, o, retries(p));
      density.assign(fp.profile.shares().begin(), fp.profile.shares().end());
    }
    auto want = bin_profile(density, static_cast<std::size_t>(bins));
    auto got = bin_shares(res, static_cast<std::size_t>(bins));
    for (std::size_t b = 0; b < want.size(); ++b) {
      worst = std::max(worst, std::abs(zrow("bin" + std::to_string(b), got.mass[b], got.se[b], want[b])));
    }
  }
  worst = std::max(worst, std::abs(zrow("unmatched_fraction", res.unmatched_fraction,
                                        res.unmatched_se, c.frictions.unmatched_fraction())));
  ctx.write("comparison.csv", cmp);
  ctx.note("largest |z| against the analytic values: " + num(worst));
}

std::vector<ParamDef> simulate_params() {
  std::vector<ParamDef> d = {
      {"market", "two-firm", "two-firm or continuum"},
      {"p_a", "0.6", "two-firm: fraction preferring firm A"},
      {"ell", "gaussian:0.5,0.1", "continuum: preference density"},
      {"n", "64", "continuum: firm cells"},
      {"bins", "8", "continuum: comparison bins"},
      {"alpha", "0", "meeting-rate slope"},
      {"r_f", "0.25", "mu / lambda_tot"},
      {"lambda_tot", "1", "total meeting intensity"},
      {"K", "1", "unmatched / matched meeting ratio"},
      {"n_agents", "50000", "expected population"},
      {"burn_in", "5", "burn-in in mean lifetimes"},
      {"measure", "20", "measurement window in mean lifetimes"},
      {"replications", "8", "independent replications"},
      {"batch_interval", "0", "meeting-weight refresh interval (0: 0.01 / mu)"},
      {"threads", "1", "parallel replications"},
      kSeed,
  };
  auto s = solve_params();
  d.insert(d.end(), s.begin(), s.end());
  return d;
}

// ---------------------------------------------------------------- estimate

void run_estimate(const Params& p, RunContext& ctx) {
  if (p.empty("input")) throw InvalidInput("estimate needs input=<csv>");
  std::ifstream in(p.str("input"));
  if (!in) throw InvalidInput("cannot open '" + p.str("input") + "'");
  IngestOptions io;
  io.min_firm_value = p.num("min_firm_value");
  if (io.min_firm_value < 0.0) throw InvalidInput("min_firm_value must be >= 0");
  FlowPanel base = ingest_transactions(in, io);
  double beta1 = p.num("beta1");
  if (!(beta1 > 0.0 && beta1 <= 1.0)) throw InvalidInput("beta1 must lie in (0, 1]");
  std::optional<EstimateScope> only;
  if (p.str("scope") != "all") only = parse_scope(p.str("scope"));
  auto wants = [&](EstimateScope s) { return !only || *only == s; };

  FlowPanel panel = base;
  adjust_flows(panel, beta1);
  ctx.write("diagnostics.json", diagnostics_json(panel.diagnostics, beta1));

  auto to_json = [](const AlphaEstimate& e) {
    return json{{"label", e.label},         {"alpha_hat", num_or_null(e.defined ? e.alpha_hat : NAN)},
                {"se", num_or_null(e.se)},  {"alpha_free", num_or_null(e.alpha_free)},
                {"intercept_free", num_or_null(e.intercept_free)},
                {"se_free", num_or_null(e.se_free)}, {"n", e.n}, {"buyers", e.buyers},
                {"defined", e.defined},     {"note", e.note}};
  };
  json report;
  report["beta1"] = beta1;
  if (wants(EstimateScope::pooled)) report["pooled"] = to_json(estimate_alpha(panel, EstimateScope::pooled).at(0));
  if (wants(EstimateScope::per_market)) {
    auto est = estimate_alpha(panel, EstimateScope::per_market);
    ctx.write("alpha_by_market.csv", alpha_csv(est, "market_id"));
    for (const auto& e : est) {
      if (e.label == "mean" || e.label == "buyer_weighted_mean") report[e.label] = to_json(e);
    }
  }
  if (wants(EstimateScope::per_year)) {
    auto est = estimate_alpha(panel, EstimateScope::per_year);
    ctx.write("alpha_by_year.csv", alpha_csv(est, "year"));
  }

  long bins = p.integer("bins");
  if (bins > 0) {
    std::string csv = "lagged_share,flow_share,count\n";
    for (const auto& b : binned_flow_shares(panel, static_cast<std::size_t>(bins))) {
      csv += join({num(b.lagged_share), num(b.flow_share), std::to_string(b.count)});
    }
    ctx.write("binned.csv", csv);
  }

  if (!p.empty("beta1_grid")) {
    std::string csv = "beta1,alpha_hat,se,n,clipped_share\n";
    json sens = json::array();
    for (double b : p.list("beta1_grid")) {
      if (!(b > 0.0 && b <= 1.0)) throw InvalidInput("beta1_grid values must lie in (0, 1]");
      FlowPanel alt = base;
      adjust_flows(alt, b);
      auto e = estimate_alpha(alt, EstimateScope::pooled).at(0);
      csv += join({num(b), num(e.defined ? e.alpha_hat : NAN), num(e.se), std::to_string(e.n),
                   num(alt.diagnostics.clipped_share())});
    }
    ctx.write("beta1_sensitivity.csv", csv);
  }
  ctx.write("estimate.json", report.dump(2));
}

// ---------------------------------------------------------------- synth-panel

void run_synth(const Params& p, RunContext& ctx) {
  SynthConfig c;
  auto count = [&](const char* key) {
    long v = p.integer(key);
    if (v < 1) throw InvalidInput(std::string(key) + " must be >= 1");
    return static_cast<std::size_t>(v);
  };
  c.n_markets = count("n_markets");
  c.firms_per_market = count("firms");
  c.buyers_per_firm = count("buyers_per_firm");
  c.first_year = static_cast<int>(p.integer("first_year"));
  c.years = count("years");
  c.alpha_by_year = p.list("alpha");
  c.frictions = FrictionParams{p.num("mu"), p.num("lambda_tot"), p.num("K"), 0.0};
  c.burn_in = p.num("burn_in");
  c.beta1 = p.num("beta1");
  c.ell = preference::parse(p.str("ell"));
  c.ell_grid = count("ell_grid");
  c.value_log_mean = p.num("value_log_mean");
  c.value_log_sd = p.num("value_log_sd");
  c.min_value = p.num("min_value");
  c.seed = p.u64("seed");
  c.validate();

  std::ofstream out(ctx.path("transactions.csv"), std::ios::binary);
  if (!out) throw InvalidInput("cannot write to '" + ctx.out_dir() + "'");
  synth_panel_csv(c, out);
  out.close();
  ctx.record("transactions.csv");

  std::string truth = "year,alpha_true\n";
  for (std::size_t t = 0; t < c.years; ++t) {
    truth += join({std::to_string(c.first_year + static_cast<int>(t)), num(c.alpha_in_year(t))});
  }
  ctx.write("truth.csv", truth);
}

// ---------------------------------------------------------------- sweep

void run_sweep(const Params& p, RunContext& ctx) {
  Grid grid = grid_of(p);
  auto specs = p.items("ell");
  if (specs.empty()) throw InvalidInput("sweep needs at least one ell");
  auto r_fs = p.list("r_f");
  double alpha = p.num("alpha");
  double K = p.num("K");
  FrictionParams::from_ratio(1.0, alpha, K).validate();
  auto opts = solve_options(p);
  int n_retries = retries(p);
  unsigned threads = threads_of(p);

  std::string stats = stats_header(true);
  std::string prof = "ell,r_f,y,s\n";
  json summary = json::array();
  for (const auto& spec : specs) {
    auto ell = make_preference(preference::parse(spec), grid);
    auto runs = solve_all(ell, r_fs, alpha, K, "auto", opts, n_retries, threads);
    auto median = try_median(ell);
    json series = json::array();
    bool nondecreasing = true;
    double prev = -1.0;
    for (const auto& run : runs) {
      stats += stats_row(spec, grid, run, median);
      if (!run.ok) {
        ctx.flag_partial("sweep " + spec + " r_f=" + num(run.r_f) + ": " + run.error);
        nondecreasing = false;
        continue;
      }
      auto st = profile_stats(run.s, grid);
      if (st.variance < prev) nondecreasing = false;
      prev = st.variance;
      series.push_back({{"r_f", run.r_f}, {"variance", st.variance}});
      for (std::size_t i = 0; i < grid.size(); ++i) {
        prof += "\"" + spec + "\"," + join({num(run.r_f), num(grid.point(i)), num(run.s[i])});
      }
    }
    summary.push_back({{"ell", spec},
                       {"alpha", alpha},
                       {"median_point", median ? json(*median) : json(nullptr)},
                       {"variance", series},
                       {"variance_nondecreasing_in_r_f", nondecreasing}});
  }
  ctx.write("sweep_stats.csv", stats);
  ctx.write("sweep_profiles.csv", prof);
  ctx.write("sweep_summary.json", summary.dump(2));
}

std::vector<ParamDef> sweep_params() {
  std::vector<ParamDef> d = {
      {"ell", "gaussian:0.5,0.1;gaussian:0.5,0.2", "preference densities separated by ';'"},
      {"r_f", "0.05,0.1,0.2,0.3", "friction ratios"},
      {"alpha", "0.75", "meeting-rate slope"},
      {"K", "1", "unmatched / matched meeting ratio"},
      {"n", "512", "grid cells"},
      {"threads", "1", "parallel solves"},
      kSeed,
  };
  auto s = solve_params();
  d.insert(d.end(), s.begin(), s.end());
  return d;
}

std::vector<ParamDef> efficiency_params() {
  std::vector<ParamDef> d = {
      {"ell", "gaussian:0.5,0.25", "preference density"},
      {"r_f", "0.2", "mu / lambda_tot"},
      {"n", "512", "grid cells"},
      {"alpha_points", "41", "points of the alpha grid on [0, alpha_cap]"},
      {"surplus", "linear", "linear, linear:a,b or exponential:scale,length"},
      {"alpha_tilde", "", "population slope for the utility curve (empty: skip)"},
      {"strategy", "true", "compute best responses and the Nash slope"},
      kSeed,
  };
  auto s = solve_params();
  d.insert(d.end(), s.begin(), s.end());
  return d;
}

}  // namespace

const std::vector<Command>& commands() {
  static const std::vector<Command> list = {
      {"two-firm",
       "two-firm market shares on a (p_a, r_f, alpha) grid",
       {
           {"mode", "affine", "constant, proportional, affine or all"},
           {"p_a", "0.5:1:11", "fractions preferring firm A"},
           {"r_f", "0.7", "friction ratios mu / lambda_tot"},
           {"alpha", "0,0.5,0.85,1", "meeting-rate slopes (affine mode)"},
           kSeed,
       },
       run_two_firm},
      {"continuum", "equilibrium share profiles on the circle", continuum_params(), run_continuum},
      {"efficiency", "efficiency, utilities and best responses over alpha", efficiency_params(),
       run_efficiency},
      {"simulate", "finite-population simulation against the analytic shares", simulate_params(),
       run_simulate},
      {"estimate",
       "alpha estimates from a transactions CSV",
       {
           {"input", "", "CSV with header year,market_id,firm_id,buyer_id,value"},
           {"beta1", "1", "share of poached inflows from panel firms"},
           {"scope", "all", "all, pooled-FE, per-market or per-year"},
           {"min_firm_value", "0", "drop firm-years below this total value"},
           {"beta1_grid", "", "beta1 values for the sensitivity table (empty: skip)"},
           {"bins", "10", "bins for the flow-share scatter (0: skip)"},
           kSeed,
       },
       run_estimate},
      {"synth-panel",
       "synthetic transactions panel with planted alpha",
       {
           {"n_markets", "100", "markets"},
           {"firms", "10", "panel firms per market"},
           {"buyers_per_firm", "300", "matched buyers per firm"},
           {"first_year", "2000", "first panel year"},
           {"years", "11", "panel years"},
           {"alpha", "0.75", "alpha for all years, or one value per year"},
           {"mu", "0.02", "exit rate per year"},
           {"lambda_tot", "0.04", "matched meeting rate per year"},
           {"K", "15", "unmatched / matched meeting ratio"},
           {"burn_in", "0", "years before the first snapshot (0: 5 / mu)"},
           {"beta1", "1", "share of poaching from panel firms"},
           {"ell", "gaussian:0.5,0.15", "buyer preference density"},
           {"ell_grid", "256", "grid for the preference density"},
           {"value_log_mean", "10", "mean of log transaction value"},
           {"value_log_sd", "1", "sd of log transaction value"},
           {"min_value", "0", "links below this value are not recorded"},
           kSeed,
       },
       run_synth},
      {"sweep", "share concentration over several densities and r_f", sweep_params(), run_sweep},
  };
  return list;
}

}  // namespace fricmatch::cli
