#pragma once

#include <optional>
#include <span>
#include <vector>

#include "fricmatch/frictions.hpp"
#include "fricmatch/grid.hpp"
#include "fricmatch/preference.hpp"
#include "fricmatch/share_profile.hpp"

namespace fricmatch {

inline constexpr double kDefaultAlphaCap = 0.999;

struct SolveOptions {
  int max_iterations = 10000;
  double tolerance = 1e-10;  // sup-norm step
  double damping = 0.5;      // weight on the new iterate, in (0, 1]
  bool renormalize = true;
  double alpha_cap = kDefaultAlphaCap;

  void validate() const;
};

struct SolveReport {
  int iterations = 0;
  double last_step = 0.0;
  double residual = 0.0;    // sup |F(s) - s| at the returned profile
  double mass_drift = 0.0;  // largest |mass(F(s)) - 1| seen before renormalization
  bool converged = false;
};

struct FixedPointResult {
  ShareProfile profile;
  SolveReport report;
};

/// Meeting-rate weights relative to lambda_tot: alpha s + (1 - alpha).
std::vector<double> meeting_weights(std::span<const double> s, double alpha);

/// One application of the share map: cell averages of the matched-agent
/// density over firm types, divided by the matched mass, when matched agents
/// meet firm y at rate lambda_tot * w(y). Uses the active kernel backend.
std::vector<double> share_map(const PreferenceDistribution& ell, std::span<const double> w,
                              double r_f);

/// Damped iteration s <- (1 - d) s + d F(s) from `initial` (default ell) with
/// lambda(y) = lambda_tot (alpha s(y) + 1 - alpha). Throws NonConvergence when
/// the step does not drop below tolerance within max_iterations.
FixedPointResult solve_fixed_point(const PreferenceDistribution& ell, const FrictionParams& fr,
                                   const SolveOptions& opts = {},
                                   std::optional<std::vector<double>> initial = std::nullopt);

/// Retries after NonConvergence, `retries` times, then rethrows. The first
/// retry is undamped with four times the iterations; later ones halve the
/// original damping and double the iterations at each step.
FixedPointResult solve_fixed_point_robust(const PreferenceDistribution& ell,
                                          const FrictionParams& fr, SolveOptions opts = {},
                                          int retries = 4);

/// r (r + 1) / (r + 2 d)^2 at circular distance d (mass 1 over the circle).
double kernel_value(double d, double r_f);
/// Exact cell averages of the kernel by cell offset 0..n/2: the average of
/// kernel_value over the distances covered by a cell at that offset.
std::vector<double> constant_rate_kernel(const Grid& grid, double r_f);
/// Equilibrium shares with constant meeting rates: circular convolution of
/// ell with the cell-averaged kernel.
ShareProfile solve_constant_rate(const PreferenceDistribution& ell, double r_f);

/// Integral of a piecewise-constant field over the arc [a, b], b - a <= 1.
double arc_integral(std::span<const double> values, double a, double b);

/// G(x, y) = mu + integral of lambda over firms strictly closer to x than y.
double destruction_rate(double x, double y, std::span<const double> lambda_profile, double mu);

/// u(x) = ell(x) mu / (K lambda_tot + mu).
std::vector<double> unmatched_profile(const PreferenceDistribution& ell, const FrictionParams& fr);

/// Cell averages of h(x, y) over y for x at each cell centre; row-major, x first.
class MatchDensity {
public:
  MatchDensity(Grid grid, std::vector<double> values);

  const Grid& grid() const noexcept { return grid_; }
  double at(std::size_t x, std::size_t y) const noexcept { return values_[x * grid_.size() + y]; }
  std::span<const double> row(std::size_t x) const noexcept {
    return std::span<const double>(values_).subspan(x * grid_.size(), grid_.size());
  }
  double row_mass(std::size_t x) const;
  double total_mass() const;
  /// Firm-type marginal divided by the total: the share profile.
  std::vector<double> firm_marginal() const;

private:
  Grid grid_;
  std::vector<double> values_;
};

/// h(x, y) = u(x) lambda(y) K (mu + lambda_tot) / G(x, y)^2 averaged over
/// each firm cell. `lambda_profile` holds absolute rates and must integrate to
/// lambda_tot (relative tolerance 1e-6).
MatchDensity match_density(const PreferenceDistribution& ell,
                           std::span<const double> lambda_profile, const FrictionParams& fr);

/// Largest relative violation of the match-stock balance
/// G h = lambda_0 u + lambda_1 (mass of worse matches), checked at the outer
/// edge of every firm cell.
double master_equation_residual(const PreferenceDistribution& ell,
                                std::span<const double> lambda_profile, const FrictionParams& fr);

/// Firm type y* splitting ell into two half-circles of mass 1/2, taken at the
/// unique point where mass([y, y + 1/2]) - 1/2 crosses from positive to
/// negative. Throws Degenerate for uniform ell or when the crossing is not unique.
double median_point(const PreferenceDistribution& ell);

}  // namespace fricmatch
