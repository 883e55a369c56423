#pragma once

#include <optional>
#include <span>
#include <vector>

#include "fricmatch/continuum.hpp"
#include "fricmatch/surplus.hpp"

namespace fricmatch {

struct EfficiencyOptions {
  SurplusFunction surplus = SurplusFunction::linear();
  SolveOptions solve;
  int retries = 4;  // halvings of damping after a non-converged solve
  /// Relative gap under which two utilities count as tied (ties go to the smaller alpha).
  double tie_tolerance = 1e-10;
};

/// Surplus at the representative distance of each ring of cells (n/2 + 1 values).
std::vector<double> ring_surplus(const Grid& grid, const SurplusFunction& sf);

/// Surplus-weighted match mass when agents meet firm y at rate proportional to
/// alpha s(y) + 1 - alpha, up to a positive factor common to all alpha at fixed
/// (ell, r_f). With s the equilibrium at alpha this is the efficiency; with s
/// the population equilibrium at another slope it is a deviator's utility.
double surplus_integral(const PreferenceDistribution& ell, std::span<const double> s,
                        double alpha, double r_f, const SurplusFunction& sf);

double efficiency(double alpha, const PreferenceDistribution& ell, double r_f,
                  const EfficiencyOptions& opts = {});

double agent_utility(double alpha, double alpha_tilde, const PreferenceDistribution& ell,
                     double r_f, const EfficiencyOptions& opts = {});

/// `points` evenly spaced values on [0, cap].
std::vector<double> alpha_grid(std::size_t points = 41, double cap = kDefaultAlphaCap);

/// Index of the largest value; near-ties resolved toward the lowest index.
std::size_t tie_break_argmax(std::span<const double> values, double relative_tolerance);

struct EfficiencyCurve {
  std::vector<double> alphas;
  std::vector<double> values;
  std::size_t argmax = 0;
  double argmax_alpha() const { return alphas.at(argmax); }
  bool interior() const { return argmax > 0 && argmax + 1 < alphas.size(); }
};

/// Equilibria at each slope on a grid, with utilities against them.
class StrategicModel {
public:
  StrategicModel(PreferenceDistribution ell, double r_f, std::vector<double> alphas,
                 EfficiencyOptions opts = {});

  const std::vector<double>& alphas() const noexcept { return alphas_; }
  /// Equilibrium profile when everyone uses alphas()[i] (solved lazily).
  const std::vector<double>& profile(std::size_t i);

  EfficiencyCurve efficiency_curve();
  /// U over the grid against the population using alphas()[tilde].
  std::vector<double> utility_curve(std::size_t tilde);
  std::size_t best_response(std::size_t tilde);

private:
  PreferenceDistribution ell_;
  double r_f_;
  std::vector<double> alphas_;
  EfficiencyOptions opts_;
  std::vector<std::optional<std::vector<double>>> profiles_;
};

/// Best response on the grid; ties go to the smallest alpha.
double best_response(double alpha_tilde, const PreferenceDistribution& ell, double r_f,
                     std::span<const double> alphas, const EfficiencyOptions& opts = {});

struct StrategicOutcome {
  std::vector<double> alphas;
  std::vector<double> best_response;  // per grid point
  std::optional<double> nash_alpha;   // empty when best-response iteration cycles
  std::vector<double> cycle;          // visited members of a cycle, if any
  double social_alpha = 0.0;
  EfficiencyCurve efficiency;
  bool degenerate = false;  // efficiency and utilities flat in alpha
  std::optional<double> gap() const {
    if (!nash_alpha || degenerate) return std::nullopt;
    return *nash_alpha - social_alpha;
  }
};

/// Iterates best responses from the grid point nearest 0.5 until a point
/// repeats; the social optimum is the efficiency argmax.
StrategicOutcome nash_and_social(const PreferenceDistribution& ell, double r_f,
                                 std::span<const double> alphas,
                                 const EfficiencyOptions& opts = {});

}  // namespace fricmatch
