#include "fricmatch/share_profile.hpp"

#include <algorithm>
#include <cmath>
#include <string>

#include "fricmatch/error.hpp"

namespace fricmatch {

ShareProfile::ShareProfile(Grid grid, std::vector<double> shares, double tolerance)
    : grid_(grid), shares_(std::move(shares)) {
  if (shares_.size() != grid_.size()) {
    throw InvalidInput("share profile size does not match grid");
  }
  for (double v : shares_) {
    if (!std::isfinite(v) || v < 0.0) {
      throw InvalidInput("share profile values must be finite and nonnegative");
    }
  }
  double m = quadrature(shares_);
  if (std::fabs(m - 1.0) > tolerance) {
    throw InvalidInput("share profile mass " + std::to_string(m) + " differs from 1");
  }
}

double ShareProfile::mass_near(double center, double half_width) const {
  if (half_width >= 0.5) return mass();
  const double n = static_cast<double>(shares_.size());
  const double lo = center - half_width;
  const double hi = center + half_width;
  double total = 0.0;
  for (std::size_t i = 0; i < shares_.size(); ++i) {
    // cell [a, a + h] shifted to the image closest to the arc
    double a = static_cast<double>(i) / n;
    double shift = std::round(center - (a + 0.5 / n));
    a += shift;
    double overlap = std::min(hi, a + 1.0 / n) - std::max(lo, a);
    if (overlap > 0.0) total += shares_[i] * overlap;
  }
  return total;
}

ProfileStats profile_stats(std::span<const double> values, const Grid& grid) {
  ProfileStats st;
  if (values.empty()) return st;
  double sq = 0.0;
  for (double v : values) sq += (v - 1.0) * (v - 1.0);
  st.variance = sq / static_cast<double>(values.size());
  auto [mn, mx] = std::minmax_element(values.begin(), values.end());
  st.min = *mn;
  st.max = *mx;
  st.argmax = grid.point(static_cast<std::size_t>(mx - values.begin()));
  return st;
}

ProfileStats profile_stats(const ShareProfile& s) { return profile_stats(s.shares(), s.grid()); }

}  // namespace fricmatch
