#pragma once

#include <optional>
#include <span>
#include <vector>

#include "fricmatch/frictions.hpp"

namespace fricmatch {

/// Two firms A and B; a fraction p_a of agents ranks A first.
struct TwoFirmMarket {
  double p_a = 0.5;
  FrictionParams frictions;
};

struct TwoFirmSteadyState {
  double u_a = 0.0, u_b = 0.0;
  double h_aA = 0.0, h_aB = 0.0, h_bA = 0.0, h_bB = 0.0;
  double s_A = 0.0, s_B = 0.0;
  double m = 0.0;  // matched mass
};

/// Stock balance with meeting rates lambda_A, lambda_B for matched agents and
/// K times those for unmatched agents. The rates must sum to
/// market.frictions.lambda_tot (relative tolerance 1e-9).
TwoFirmSteadyState steady_state(const TwoFirmMarket& market, double lambda_A, double lambda_B);

/// Direct share formula in terms of the two rates (K-free).
double share_from_rates(double p_a, double mu, double lambda_A, double lambda_B);

/// Constant, equal meeting rates.
double share_constant_rate(double p_a, double r_f);
/// Meeting rates proportional to market shares (piecewise-linear, clamped to [0, 1]).
double share_proportional(double p_a, double r_f);

/// g(s) = implied share - s with lambda_i = ((1 - alpha)/2 + alpha s_i) lambda_tot.
double affine_residual(double s, double p_a, double r_f, double alpha);

struct TwoFirmEquilibrium {
  double s_A = 0.0;
  bool stable = false;
};

struct AffineSolution {
  std::vector<TwoFirmEquilibrium> roots;  // ascending in s_A
  std::size_t selected = 0;               // root reached by ds/dt = g(s) from s = p_a

  double selected_share() const { return roots.at(selected).s_A; }
};

/// All equilibria in [0, 1]: sign bracketing on a fine grid plus bisection to
/// 1e-12, boundary roots tested directly.
AffineSolution share_affine(double p_a, double r_f, double alpha);

/// (alpha - 1/2) / (1 - alpha) for alpha > 1/2, 0 at 1/2, nullopt below.
/// Throws InvalidInput for alpha outside [0, 1).
std::optional<double> theorem1_threshold(double alpha);

/// Derivative at 1/2 of the cubic numerator of p_a(s) - s, divided by
/// lambda_tot^3: r^2 - alpha r^2 - alpha r + r/2. Nonnegative exactly when
/// frictions homogenize for every p_a >= 1/2.
double homogenizing_margin(double alpha, double r_f);

struct Theorem1Report {
  double alpha = 0.0;
  double r_f = 0.0;
  std::optional<double> threshold;
  double max_excess = 0.0;   // max over the p_a grid of (selected s_A - p_a)
  double argmax_p_a = 0.5;
  bool accentuates = false;  // max_excess above tolerance
  bool predicted_homogenizing = false;
  bool consistent = false;   // accentuates == !predicted_homogenizing
};

inline constexpr double kTheorem1Tolerance = 1e-9;

Theorem1Report verify_theorem1(double alpha, double r_f, std::span<const double> p_a_grid,
                               double tolerance = kTheorem1Tolerance);
/// Uniform p_a grid on [0.5, 1] with `points` points.
std::vector<double> half_grid(std::size_t points = 201);

}  // namespace fricmatch
