#include "fricmatch/continuum.hpp"

#include <algorithm>
#include <cmath>
#include <string>

#include "fricmatch/error.hpp"
#include "fricmatch/kernels/kernels.hpp"

namespace fricmatch {

void SolveOptions::validate() const {
  if (max_iterations < 1) throw InvalidInput("max_iterations must be >= 1");
  if (!(tolerance > 0.0)) throw InvalidInput("tolerance must be > 0");
  if (!(damping > 0.0 && damping <= 1.0)) throw InvalidInput("damping must lie in (0, 1]");
  if (!(alpha_cap > 0.0 && alpha_cap <= 1.0)) throw InvalidInput("alpha_cap must lie in (0, 1]");
}

std::vector<double> meeting_weights(std::span<const double> s, double alpha) {
  std::vector<double> w(s.size());
  for (std::size_t i = 0; i < s.size(); ++i) w[i] = alpha * s[i] + (1.0 - alpha);
  return w;
}

std::vector<double> share_map(const PreferenceDistribution& ell, std::span<const double> w,
                              double r_f) {
  const std::size_t n = ell.size();
  if (w.size() != n) throw InvalidInput("weight profile size does not match grid");
  std::vector<double> q(n);
  kernels::active().share_sweep(ell.density().data(), w.data(), n, r_f, q.data());
  const double scale = r_f * (r_f + 1.0);
  for (std::size_t j = 0; j < n; ++j) q[j] *= scale * w[j];
  return q;
}

namespace {

double normalize(std::vector<double>& v) {
  double m = quadrature(v);
  if (m > 0.0) {
    for (double& x : v) x /= m;
  }
  return m;
}

}  // namespace

FixedPointResult solve_fixed_point(const PreferenceDistribution& ell, const FrictionParams& fr,
                                   const SolveOptions& opts,
                                   std::optional<std::vector<double>> initial) {
  fr.validate();
  opts.validate();
  if (fr.alpha > opts.alpha_cap) {
    throw InvalidInput("alpha " + std::to_string(fr.alpha) + " exceeds alpha_cap " +
                       std::to_string(opts.alpha_cap));
  }
  const std::size_t n = ell.size();
  const double r = fr.r_f();
  std::vector<double> s;
  if (initial) {
    s = std::move(*initial);
    if (s.size() != n) throw InvalidInput("initial profile size does not match grid");
    for (double v : s) {
      if (!std::isfinite(v) || v < 0.0) throw InvalidInput("initial profile must be >= 0");
    }
    if (!(normalize(s) > 0.0)) throw InvalidInput("initial profile is identically zero");
  } else {
    s.assign(ell.density().begin(), ell.density().end());
  }

  SolveReport rep;
  std::vector<double> next(n);
  for (int it = 1; it <= opts.max_iterations; ++it) {
    std::vector<double> f = share_map(ell, meeting_weights(s, fr.alpha), r);
    for (double& v : f) v = std::max(v, 0.0);
    double m = quadrature(f);
    rep.mass_drift = std::max(rep.mass_drift, std::fabs(m - 1.0));
    if (opts.renormalize) normalize(f);
    double step = 0.0;
    for (std::size_t j = 0; j < n; ++j) next[j] = (1.0 - opts.damping) * s[j] + opts.damping * f[j];
    if (opts.renormalize) normalize(next);
    for (std::size_t j = 0; j < n; ++j) step = std::max(step, std::fabs(next[j] - s[j]));
    s.swap(next);
    rep.iterations = it;
    rep.last_step = step;
    if (!std::isfinite(step)) break;
    if (step < opts.tolerance) {
      rep.converged = true;
      break;
    }
  }
  if (!rep.converged) {
    throw NonConvergence("fixed point did not converge in " + std::to_string(rep.iterations) +
                             " iterations (last step " + std::to_string(rep.last_step) + ")",
                         rep.iterations, rep.last_step);
  }
  std::vector<double> f = share_map(ell, meeting_weights(s, fr.alpha), r);
  if (opts.renormalize) normalize(f);
  for (std::size_t j = 0; j < n; ++j) rep.residual = std::max(rep.residual, std::fabs(f[j] - s[j]));
  return {ShareProfile(ell.grid(), std::move(s)), rep};
}

FixedPointResult solve_fixed_point_robust(const PreferenceDistribution& ell,
                                          const FrictionParams& fr, SolveOptions opts,
                                          int retries) {
  const SolveOptions base = opts;
  for (int attempt = 0;; ++attempt) {
    try {
      return solve_fixed_point(ell, fr, opts);
    } catch (const NonConvergence&) {
      if (attempt >= retries) throw;
      if (attempt == 0 && base.damping < 1.0) {
        // slow monotone drift: undamped steps with a longer budget
        opts.damping = 1.0;
        opts.max_iterations = base.max_iterations * 4;
      } else {
        int k = attempt == 0 ? 1 : attempt;
        opts.damping = base.damping / static_cast<double>(1 << k);
        opts.max_iterations = base.max_iterations * (1 << k);
      }
    }
  }
}

double kernel_value(double d, double r_f) {
  double den = r_f + 2.0 * d;
  return r_f * (r_f + 1.0) / (den * den);
}

std::vector<double> constant_rate_kernel(const Grid& grid, double r_f) {
  if (!(r_f > 0.0)) throw InvalidInput("r_f must be > 0");
  const std::size_t n = grid.size();
  const double h = grid.spacing();
  std::vector<double> k(n / 2 + 1);
  for (std::size_t m = 0; m < k.size(); ++m) {
    double lo = std::max(0.0, (static_cast<double>(m) - 0.5) * h);
    double hi = std::min(0.5, (static_cast<double>(m) + 0.5) * h);
    // antiderivative of r(r+1)/(r+2t)^2 is -r(r+1)/(2(r+2t))
    k[m] = r_f * (r_f + 1.0) * (1.0 / (r_f + 2.0 * lo) - 1.0 / (r_f + 2.0 * hi)) /
           (2.0 * (hi - lo));
  }
  return k;
}

ShareProfile solve_constant_rate(const PreferenceDistribution& ell, double r_f) {
  auto kernel = constant_rate_kernel(ell.grid(), r_f);
  std::vector<double> s(ell.size());
  kernels::active().circular_convolve(ell.density().data(), kernel.data(), ell.size(), s.data());
  for (double& v : s) v = std::max(v, 0.0);
  return ShareProfile(ell.grid(), std::move(s));
}

double arc_integral(std::span<const double> values, double a, double b) {
  const std::size_t n = values.size();
  if (n == 0) return 0.0;
  double len = b - a;
  if (len <= 0.0) return 0.0;
  const double dn = static_cast<double>(n);
  std::vector<double> cum(n + 1, 0.0);
  for (std::size_t i = 0; i < n; ++i) cum[i + 1] = cum[i] + values[i] / dn;
  auto below = [&](double y) {
    double pos = y * dn;
    auto c = static_cast<std::size_t>(pos);
    if (c >= n) return cum[n];
    return cum[c] + (pos - static_cast<double>(c)) * values[c] / dn;
  };
  double whole = std::floor(len);
  double rest = len - whole;
  double total = whole * cum[n];
  double start = wrap_unit(a);
  double end = start + rest;
  if (end <= 1.0) return total + below(end) - below(start);
  return total + (cum[n] - below(start)) + below(end - 1.0);
}

double destruction_rate(double x, double y, std::span<const double> lambda_profile, double mu) {
  double d = circular_distance(x, y);
  return mu + arc_integral(lambda_profile, x - d, x + d);
}

std::vector<double> unmatched_profile(const PreferenceDistribution& ell, const FrictionParams& fr) {
  fr.validate();
  std::vector<double> u(ell.size());
  const double frac = fr.unmatched_fraction();
  for (std::size_t i = 0; i < u.size(); ++i) u[i] = ell[i] * frac;
  return u;
}

MatchDensity::MatchDensity(Grid grid, std::vector<double> values)
    : grid_(grid), values_(std::move(values)) {
  if (values_.size() != grid_.size() * grid_.size()) {
    throw InvalidInput("match density must hold n x n values");
  }
}

double MatchDensity::row_mass(std::size_t x) const { return quadrature(row(x)); }

double MatchDensity::total_mass() const {
  double total = 0.0;
  for (std::size_t i = 0; i < grid_.size(); ++i) total += row_mass(i);
  return total / static_cast<double>(grid_.size());
}

std::vector<double> MatchDensity::firm_marginal() const {
  const std::size_t n = grid_.size();
  std::vector<double> s(n, 0.0);
  for (std::size_t i = 0; i < n; ++i) {
    for (std::size_t j = 0; j < n; ++j) s[j] += at(i, j);
  }
  normalize(s);
  return s;
}

namespace {

std::vector<double> relative_weights(std::span<const double> lambda_profile, std::size_t n,
                                     const FrictionParams& fr) {
  if (lambda_profile.size() != n) throw InvalidInput("lambda profile size does not match grid");
  std::vector<double> w(n);
  for (std::size_t i = 0; i < n; ++i) {
    if (!std::isfinite(lambda_profile[i]) || lambda_profile[i] < 0.0) {
      throw InvalidInput("lambda profile must be finite and nonnegative");
    }
    w[i] = lambda_profile[i] / fr.lambda_tot;
  }
  if (std::fabs(quadrature(w) - 1.0) > 1e-6) {
    throw InvalidInput("lambda profile must integrate to lambda_tot");
  }
  return w;
}

// Visits the rings of agent cell i: fn(k, j_plus, j_minus, single, b_lo, b_hi).
template <class Fn>
void walk_rings(std::size_t i, std::span<const double> w, Fn&& fn) {
  const std::size_t n = w.size();
  const std::size_t half = n / 2;
  const double inv_n = 1.0 / static_cast<double>(n);
  double b = 0.0;
  for (std::size_t k = 0; k <= half; ++k) {
    const bool single = k == 0 || (n % 2 == 0 && k == half);
    std::size_t jp = (i + k) % n;
    std::size_t jm = (i + n - k) % n;
    double inc = single ? w[jp] : w[jp] + w[jm];
    double lo = b;
    b += inc * inv_n;
    fn(k, jp, jm, single, lo, b);
  }
}

}  // namespace

MatchDensity match_density(const PreferenceDistribution& ell,
                           std::span<const double> lambda_profile, const FrictionParams& fr) {
  fr.validate();
  const std::size_t n = ell.size();
  auto w = relative_weights(lambda_profile, n, fr);
  auto u = unmatched_profile(ell, fr);
  const double r = fr.r_f();
  const double c = fr.K * (fr.mu + fr.lambda_tot) / fr.lambda_tot;
  std::vector<double> h(n * n, 0.0);
  for (std::size_t i = 0; i < n; ++i) {
    double* row = h.data() + i * n;
    const double ci = c * u[i];
    walk_rings(i, w, [&](std::size_t, std::size_t jp, std::size_t jm, bool single, double lo,
                         double hi) {
      double inv_p = 1.0 / ((r + lo) * (r + hi));
      row[jp] = ci * w[jp] * inv_p;
      if (!single) row[jm] = ci * w[jm] * inv_p;
    });
  }
  return MatchDensity(ell.grid(), std::move(h));
}

double master_equation_residual(const PreferenceDistribution& ell,
                                std::span<const double> lambda_profile, const FrictionParams& fr) {
  const std::size_t n = ell.size();
  auto w = relative_weights(lambda_profile, n, fr);
  auto u = unmatched_profile(ell, fr);
  MatchDensity hd = match_density(ell, lambda_profile, fr);
  const double r = fr.r_f();
  const double lt = fr.lambda_tot;
  const double c = fr.K * (fr.mu + lt) / lt;
  const double inv_n = 1.0 / static_cast<double>(n);
  const std::size_t rings = n / 2 + 1;

  double worst = 0.0;
  std::vector<double> ring_mass(rings);
  std::vector<double> b_hi(rings);
  for (std::size_t i = 0; i < n; ++i) {
    if (u[i] == 0.0) continue;
    walk_rings(i, w, [&](std::size_t k, std::size_t jp, std::size_t jm, bool single, double,
                         double hi) {
      ring_mass[k] = (hd.at(i, jp) + (single ? 0.0 : hd.at(i, jm))) * inv_n;
      b_hi[k] = hi;
    });
    double worse = 0.0;  // mass of matches in rings beyond k
    for (std::size_t k = rings; k-- > 0;) {
      const double g = lt * (r + b_hi[k]);
      for (std::size_t j : {(i + k) % n, (i + n - k) % n}) {
        if (w[j] == 0.0) continue;
        double h_edge = c * u[i] * w[j] / ((r + b_hi[k]) * (r + b_hi[k]));
        double entry = fr.K * lt * w[j] * u[i];
        double rhs = entry + lt * w[j] * worse;
        worst = std::max(worst, std::fabs(g * h_edge - rhs) / entry);
      }
      worse += ring_mass[k];
    }
  }
  return worst;
}

double median_point(const PreferenceDistribution& ell) {
  const std::size_t n = ell.size();
  const double dn = static_cast<double>(n);
  constexpr double kFlat = 1e-12;
  std::vector<double> h(n);
  double largest = 0.0;
  for (std::size_t i = 0; i < n; ++i) {
    double a = static_cast<double>(i) / dn;
    h[i] = ell.arc_mass(a, a + 0.5) - 0.5;
    if (std::fabs(h[i]) <= kFlat) h[i] = 0.0;
    largest = std::max(largest, std::fabs(h[i]));
  }
  if (largest == 0.0) throw Degenerate("every half-circle carries mass 1/2; no median point");

  // scan the cyclic sign sequence for positive -> negative transitions,
  // allowing runs of zeros in between
  std::size_t start = 0;
  while (h[start] <= 0.0) ++start;  // some value is positive by antisymmetry
  int crossings = 0;
  double location = 0.0;
  std::size_t last_pos = start;
  for (std::size_t step = 1; step <= n; ++step) {
    std::size_t i = (start + step) % n;
    if (h[i] > 0.0) {
      last_pos = i;
    } else if (h[i] < 0.0) {
      std::size_t gap = (i + n - last_pos) % n;
      if (gap > 0 && h[last_pos] > 0.0) {
        ++crossings;
        double a0 = static_cast<double>(last_pos) / dn;
        if (gap == 1) {
          location = a0 + (h[last_pos] / (h[last_pos] - h[i])) / dn;
        } else {
          // zero plateau between the two signed values
          location = a0 + 0.5 * static_cast<double>(gap) / dn;
        }
        last_pos = i;  // marks the negative run until a positive value appears
      }
    }
  }
  if (crossings != 1) {
    throw Degenerate("median point is not unique (" + std::to_string(crossings) +
                     " candidate crossings)");
  }
  return wrap_unit(location);
}

}  // namespace fricmatch
