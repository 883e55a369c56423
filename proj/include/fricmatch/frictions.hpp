#pragma once

#include <string>

namespace fricmatch {

/// Exit rate, total meeting intensity, unmatched/matched meeting ratio and
/// the slope of meeting rates in market share.
struct FrictionParams {
  double mu = 1.0;
  double lambda_tot = 1.0;
  double K = 1.0;
  double alpha = 0.0;

  /// Throws InvalidInput unless mu, lambda_tot, K > 0 and alpha in [0, 1].
  void validate() const;

  double r_f() const noexcept { return mu / lambda_tot; }

  /// Fraction of the population unmatched in steady state: mu / (K lambda_tot + mu).
  double unmatched_fraction() const noexcept { return mu / (K * lambda_tot + mu); }
  double matched_fraction() const noexcept {
    return K * lambda_tot / (K * lambda_tot + mu);
  }

  /// lambda_tot = 1, mu = r_f.
  static FrictionParams from_ratio(double r_f, double alpha = 0.0, double K = 1.0);

  std::string describe() const;
};

}  // namespace fricmatch
