#include "fricmatch/two_firm.hpp"

#include <algorithm>
#include <cmath>

#include "fricmatch/error.hpp"

namespace fricmatch {

namespace {

void check_share(double p_a) {
  if (!(p_a >= 0.0 && p_a <= 1.0)) throw InvalidInput("p_a must lie in [0, 1]");
}

void check_ratio(double r_f, bool allow_zero) {
  if (!std::isfinite(r_f) || r_f < 0.0 || (!allow_zero && r_f == 0.0)) {
    throw InvalidInput(allow_zero ? "r_f must be >= 0" : "r_f must be > 0");
  }
}

}  // namespace

TwoFirmSteadyState steady_state(const TwoFirmMarket& market, double lambda_A, double lambda_B) {
  check_share(market.p_a);
  const FrictionParams& fp = market.frictions;
  fp.validate();
  if (!(lambda_A >= 0.0 && lambda_B >= 0.0)) throw InvalidInput("meeting rates must be >= 0");
  const double lt = lambda_A + lambda_B;
  if (!(lt > 0.0)) throw InvalidInput("total meeting rate must be > 0");
  if (std::fabs(lt - fp.lambda_tot) > 1e-9 * fp.lambda_tot) {
    throw InvalidInput("lambda_A + lambda_B must equal lambda_tot");
  }
  const double mu = fp.mu;
  const double K = fp.K;
  const double pb = 1.0 - market.p_a;

  TwoFirmSteadyState st;
  st.u_a = mu * market.p_a / (mu + K * lt);
  st.u_b = mu * pb / (mu + K * lt);
  // loyal stock: direct entry plus agents poached from the other firm
  st.h_aB = K * lambda_B * st.u_a / (mu + lambda_A);
  st.h_aA = (K * lambda_A * st.u_a + lambda_A * st.h_aB) / mu;
  st.h_bA = K * lambda_A * st.u_b / (mu + lambda_B);
  st.h_bB = (K * lambda_B * st.u_b + lambda_B * st.h_bA) / mu;
  st.m = st.h_aA + st.h_aB + st.h_bA + st.h_bB;
  if (st.m > 0.0) {
    st.s_A = (st.h_aA + st.h_bA) / st.m;
    st.s_B = (st.h_aB + st.h_bB) / st.m;
  }
  return st;
}

double share_from_rates(double p_a, double mu, double lambda_A, double lambda_B) {
  const double lt = lambda_A + lambda_B;
  if (!(lt > 0.0)) throw InvalidInput("total meeting rate must be > 0");
  double base = lambda_A / (mu + lambda_B) * (mu / lt);
  double slope = lambda_A * lambda_B * (2.0 * mu + lt) / (lt * (mu + lambda_A) * (mu + lambda_B));
  return base + p_a * slope;
}

double share_constant_rate(double p_a, double r_f) {
  check_share(p_a);
  check_ratio(r_f, true);
  return r_f / (1.0 + 2.0 * r_f) + p_a / (1.0 + 2.0 * r_f);
}

double share_proportional(double p_a, double r_f) {
  check_share(p_a);
  check_ratio(r_f, true);
  if (p_a <= r_f / (2.0 * r_f + 1.0)) return 0.0;
  if (p_a >= (r_f + 1.0) / (2.0 * r_f + 1.0)) return 1.0;
  return p_a * (2.0 * r_f + 1.0) - r_f;
}

double affine_residual(double s, double p_a, double r_f, double alpha) {
  const double la = (1.0 - alpha) / 2.0 + alpha * s;
  const double lb = (1.0 - alpha) / 2.0 + alpha * (1.0 - s);
  if (la <= 0.0) return -s;  // firm A is never met
  if (lb <= 0.0) return 1.0 - s;
  return share_from_rates(p_a, r_f, la, lb) - s;
}

AffineSolution share_affine(double p_a, double r_f, double alpha) {
  check_share(p_a);
  check_ratio(r_f, false);
  if (!(alpha >= 0.0 && alpha <= 1.0)) throw InvalidInput("alpha must lie in [0, 1]");

  auto g = [&](double s) { return affine_residual(s, p_a, r_f, alpha); };
  constexpr int kCells = 4000;
  constexpr double kEdge = 1e-12;
  constexpr double kZero = 1e-14;

  AffineSolution out;
  auto add = [&](double s, bool stable) {
    for (const auto& r : out.roots) {
      if (std::fabs(r.s_A - s) < 1e-10) return;
    }
    out.roots.push_back({s, stable});
  };

  if (std::fabs(g(0.0)) <= kZero) add(0.0, g(kEdge) < 0.0);

  std::vector<double> xs;
  xs.reserve(kCells + 1);
  xs.push_back(kEdge);
  for (int i = 1; i < kCells; ++i) xs.push_back(static_cast<double>(i) / kCells);
  xs.push_back(1.0 - kEdge);

  double prev_x = xs[0];
  double prev_g = g(prev_x);
  for (std::size_t i = 1; i < xs.size(); ++i) {
    double x = xs[i];
    double gx = g(x);
    if (gx == 0.0) {
      add(x, prev_g > 0.0);
    } else if ((prev_g > 0.0 && gx < 0.0) || (prev_g < 0.0 && gx > 0.0)) {
      double lo = prev_x, hi = x, glo = prev_g;
      while (hi - lo > 1e-12) {
        double mid = 0.5 * (lo + hi);
        double gm = g(mid);
        if (gm == 0.0) {
          lo = hi = mid;
          break;
        }
        if ((gm > 0.0) == (glo > 0.0)) {
          lo = mid;
          glo = gm;
        } else {
          hi = mid;
        }
      }
      add(0.5 * (lo + hi), prev_g > 0.0);
    }
    prev_x = x;
    prev_g = gx;
  }

  if (std::fabs(g(1.0)) <= kZero) add(1.0, g(1.0 - kEdge) > 0.0);

  if (out.roots.empty()) {
    throw NonConvergence("no equilibrium share found in [0, 1]", kCells, 0.0);
  }
  std::sort(out.roots.begin(), out.roots.end(),
            [](const auto& a, const auto& b) { return a.s_A < b.s_A; });

  // follow ds/dt = g(s) from the frictionless allocation
  const double g0 = g(p_a);
  std::size_t pick = 0;
  if (std::fabs(g0) <= kZero) {
    double best = 2.0;
    for (std::size_t i = 0; i < out.roots.size(); ++i) {
      double d = std::fabs(out.roots[i].s_A - p_a);
      if (d < best) best = d, pick = i;
    }
  } else if (g0 > 0.0) {
    pick = out.roots.size() - 1;
    for (std::size_t i = 0; i < out.roots.size(); ++i) {
      if (out.roots[i].s_A >= p_a) {
        pick = i;
        break;
      }
    }
  } else {
    pick = 0;
    for (std::size_t i = out.roots.size(); i-- > 0;) {
      if (out.roots[i].s_A <= p_a) {
        pick = i;
        break;
      }
    }
  }
  out.selected = pick;
  return out;
}

std::optional<double> theorem1_threshold(double alpha) {
  if (!(alpha >= 0.0 && alpha < 1.0)) {
    throw InvalidInput("threshold is defined for alpha in [0, 1)");
  }
  if (alpha < 0.5) return std::nullopt;
  return (alpha - 0.5) / (1.0 - alpha);
}

double homogenizing_margin(double alpha, double r_f) {
  return r_f * r_f - alpha * r_f * r_f - alpha * r_f + r_f / 2.0;
}

Theorem1Report verify_theorem1(double alpha, double r_f, std::span<const double> p_a_grid,
                               double tolerance) {
  Theorem1Report rep;
  rep.alpha = alpha;
  rep.r_f = r_f;
  rep.threshold = theorem1_threshold(alpha);
  rep.max_excess = -1.0;
  for (double p : p_a_grid) {
    if (p < 0.5) continue;
    double excess = share_affine(p, r_f, alpha).selected_share() - p;
    if (excess > rep.max_excess) {
      rep.max_excess = excess;
      rep.argmax_p_a = p;
    }
  }
  rep.accentuates = rep.max_excess > tolerance;
  rep.predicted_homogenizing = !rep.threshold || r_f >= *rep.threshold;
  rep.consistent = rep.accentuates != rep.predicted_homogenizing;
  return rep;
}

std::vector<double> half_grid(std::size_t points) {
  if (points < 2) throw InvalidInput("p_a grid needs at least 2 points");
  std::vector<double> g(points);
  for (std::size_t i = 0; i < points; ++i) {
    g[i] = 0.5 + 0.5 * static_cast<double>(i) / static_cast<double>(points - 1);
  }
  return g;
}

}  // namespace fricmatch
