#include "fricmatch/efficiency.hpp"

#include <algorithm>
#include <cmath>

#include "fricmatch/error.hpp"
#include "fricmatch/kernels/kernels.hpp"

namespace fricmatch {

std::vector<double> ring_surplus(const Grid& grid, const SurplusFunction& sf) {
  const std::size_t n = grid.size();
  const double h = grid.spacing();
  std::vector<double> f(n / 2 + 1);
  for (std::size_t k = 0; k < f.size(); ++k) {
    double lo = std::max(0.0, (static_cast<double>(k) - 0.5) * h);
    double hi = std::min(0.5, (static_cast<double>(k) + 0.5) * h);
    f[k] = sf.of_distance(0.5 * (lo + hi));
  }
  return f;
}

double surplus_integral(const PreferenceDistribution& ell, std::span<const double> s,
                        double alpha, double r_f, const SurplusFunction& sf) {
  if (s.size() != ell.size()) throw InvalidInput("profile size does not match grid");
  if (!(r_f > 0.0)) throw InvalidInput("r_f must be > 0");
  auto w = meeting_weights(s, alpha);
  auto f = ring_surplus(ell.grid(), sf);
  return kernels::active().surplus_sweep(ell.density().data(), w.data(), ell.size(), r_f,
                                         f.data());
}

namespace {

std::vector<double> equilibrium(double alpha, const PreferenceDistribution& ell, double r_f,
                                const EfficiencyOptions& opts) {
  auto fr = FrictionParams::from_ratio(r_f, alpha);
  auto res = solve_fixed_point_robust(ell, fr, opts.solve, opts.retries);
  const auto sh = res.profile.shares();
  return {sh.begin(), sh.end()};
}

}  // namespace

double efficiency(double alpha, const PreferenceDistribution& ell, double r_f,
                  const EfficiencyOptions& opts) {
  auto s = equilibrium(alpha, ell, r_f, opts);
  return surplus_integral(ell, s, alpha, r_f, opts.surplus);
}

double agent_utility(double alpha, double alpha_tilde, const PreferenceDistribution& ell,
                     double r_f, const EfficiencyOptions& opts) {
  if (!(alpha >= 0.0 && alpha <= 1.0)) throw InvalidInput("alpha must lie in [0, 1]");
  auto s = equilibrium(alpha_tilde, ell, r_f, opts);
  return surplus_integral(ell, s, alpha, r_f, opts.surplus);
}

std::vector<double> alpha_grid(std::size_t points, double cap) {
  if (points < 2) throw InvalidInput("alpha grid needs at least 2 points");
  if (!(cap > 0.0 && cap <= 1.0)) throw InvalidInput("alpha cap must lie in (0, 1]");
  std::vector<double> g(points);
  for (std::size_t i = 0; i < points; ++i) {
    g[i] = cap * static_cast<double>(i) / static_cast<double>(points - 1);
  }
  return g;
}

std::size_t tie_break_argmax(std::span<const double> values, double relative_tolerance) {
  if (values.empty()) throw InvalidInput("argmax of an empty curve");
  double best = *std::max_element(values.begin(), values.end());
  double slack = relative_tolerance * std::fabs(best);
  for (std::size_t i = 0; i < values.size(); ++i) {
    if (values[i] >= best - slack) return i;
  }
  return 0;
}

StrategicModel::StrategicModel(PreferenceDistribution ell, double r_f, std::vector<double> alphas,
                               EfficiencyOptions opts)
    : ell_(std::move(ell)), r_f_(r_f), alphas_(std::move(alphas)), opts_(std::move(opts)) {
  if (alphas_.empty()) throw InvalidInput("alpha grid is empty");
  for (double a : alphas_) {
    if (!(a >= 0.0 && a <= opts_.solve.alpha_cap)) {
      throw InvalidInput("alpha grid values must lie in [0, alpha_cap]");
    }
  }
  if (!(r_f > 0.0)) throw InvalidInput("r_f must be > 0");
  profiles_.resize(alphas_.size());
}

const std::vector<double>& StrategicModel::profile(std::size_t i) {
  auto& slot = profiles_.at(i);
  if (!slot) slot = equilibrium(alphas_[i], ell_, r_f_, opts_);
  return *slot;
}

EfficiencyCurve StrategicModel::efficiency_curve() {
  EfficiencyCurve c;
  c.alphas = alphas_;
  for (std::size_t i = 0; i < alphas_.size(); ++i) {
    c.values.push_back(surplus_integral(ell_, profile(i), alphas_[i], r_f_, opts_.surplus));
  }
  c.argmax = tie_break_argmax(c.values, opts_.tie_tolerance);
  return c;
}

std::vector<double> StrategicModel::utility_curve(std::size_t tilde) {
  const auto& s = profile(tilde);
  std::vector<double> u;
  u.reserve(alphas_.size());
  for (double a : alphas_) u.push_back(surplus_integral(ell_, s, a, r_f_, opts_.surplus));
  return u;
}

std::size_t StrategicModel::best_response(std::size_t tilde) {
  return tie_break_argmax(utility_curve(tilde), opts_.tie_tolerance);
}

double best_response(double alpha_tilde, const PreferenceDistribution& ell, double r_f,
                     std::span<const double> alphas, const EfficiencyOptions& opts) {
  std::vector<double> grid(alphas.begin(), alphas.end());
  grid.push_back(alpha_tilde);
  StrategicModel model(ell, r_f, grid, opts);
  auto u = model.utility_curve(grid.size() - 1);
  u.pop_back();
  return alphas[tie_break_argmax(u, opts.tie_tolerance)];
}

namespace {

bool flat(std::span<const double> v, double tol) {
  auto [mn, mx] = std::minmax_element(v.begin(), v.end());
  return *mx - *mn <= tol * std::fabs(*mx);
}

}  // namespace

StrategicOutcome nash_and_social(const PreferenceDistribution& ell, double r_f,
                                 std::span<const double> alphas, const EfficiencyOptions& opts) {
  StrategicModel model(ell, r_f, std::vector<double>(alphas.begin(), alphas.end()), opts);
  StrategicOutcome out;
  out.alphas = model.alphas();
  out.efficiency = model.efficiency_curve();
  out.social_alpha = out.efficiency.argmax_alpha();

  const std::size_t m = alphas.size();
  std::vector<std::size_t> br(m);
  bool all_flat = flat(out.efficiency.values, 1e-9);
  for (std::size_t i = 0; i < m; ++i) {
    auto u = model.utility_curve(i);
    all_flat = all_flat && flat(u, 1e-9);
    br[i] = tie_break_argmax(u, opts.tie_tolerance);
    out.best_response.push_back(alphas[br[i]]);
  }
  out.degenerate = all_flat;

  std::size_t cur = 0;
  for (std::size_t i = 1; i < m; ++i) {
    if (std::fabs(alphas[i] - 0.5) < std::fabs(alphas[cur] - 0.5)) cur = i;
  }
  std::vector<std::size_t> visited{cur};
  while (true) {
    std::size_t next = br[cur];
    if (next == cur) {
      out.nash_alpha = alphas[cur];
      break;
    }
    auto seen = std::find(visited.begin(), visited.end(), next);
    if (seen != visited.end()) {
      for (auto it = seen; it != visited.end(); ++it) out.cycle.push_back(alphas[*it]);
      break;
    }
    visited.push_back(next);
    cur = next;
  }
  return out;
}

}  // namespace fricmatch
