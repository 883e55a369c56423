#pragma once

#include <cstddef>
#include <span>
#include <vector>

namespace fricmatch {

inline constexpr std::size_t kDefaultGridSize = 512;
inline constexpr std::size_t kMinGridSize = 16;

/// Wraps a coordinate onto [0, 1).
double wrap_unit(double x);

/// Distance on the unit circle: min over integers k of |x - y + k|. Result in [0, 1/2].
double circular_distance(double x, double y);

/// Uniform periodic grid of n cells on the unit circle. Point i is the centre
/// of cell [i/n, (i+1)/n); all discretized fields store one value per cell.
class Grid {
public:
  explicit Grid(std::size_t n_points = kDefaultGridSize);

  std::size_t size() const noexcept { return n_; }
  double spacing() const noexcept { return 1.0 / static_cast<double>(n_); }
  double point(std::size_t i) const noexcept {
    return (static_cast<double>(i) + 0.5) / static_cast<double>(n_);
  }
  std::vector<double> points() const;

  /// Cell containing y (after wrapping).
  std::size_t cell_of(double y) const noexcept;

  /// Circular index distance between cells i and j, in [0, n/2].
  std::size_t offset(std::size_t i, std::size_t j) const noexcept;

  bool operator==(const Grid& other) const noexcept { return n_ == other.n_; }

private:
  std::size_t n_;
};

/// Periodic midpoint rule: every cell weighs 1/n. Exact for constants.
double quadrature(std::span<const double> values);

}  // namespace fricmatch
