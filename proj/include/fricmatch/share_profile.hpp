#pragma once

#include <span>
#include <vector>

#include "fricmatch/grid.hpp"

namespace fricmatch {

inline constexpr double kShareMassTolerance = 1e-6;

/// Rescaled market-share density s(y) over firm types, one value per cell.
class ShareProfile {
public:
  /// Throws InvalidInput when a value is negative or non-finite, or when
  /// |quadrature - 1| exceeds `tolerance`.
  ShareProfile(Grid grid, std::vector<double> shares, double tolerance = kShareMassTolerance);

  const Grid& grid() const noexcept { return grid_; }
  std::span<const double> shares() const noexcept { return shares_; }
  double operator[](std::size_t i) const noexcept { return shares_[i]; }
  std::size_t size() const noexcept { return shares_.size(); }

  double mass() const { return quadrature(shares_); }

  /// Share mass on the arc [center - half_width, center + half_width],
  /// cells counted fractionally.
  double mass_near(double center, double half_width) const;

private:
  Grid grid_;
  std::vector<double> shares_;
};

struct ProfileStats {
  double variance = 0.0;
  double max = 0.0;
  double min = 0.0;
  double argmax = 0.0;  // cell centre of the largest value
};

/// Variance is the quadrature of (s - 1)^2.
ProfileStats profile_stats(const ShareProfile& s);
ProfileStats profile_stats(std::span<const double> values, const Grid& grid);

}  // namespace fricmatch
