#pragma once

#include <cstdint>
#include <random>
#include <span>
#include <string>
#include <variant>
#include <vector>

#include "fricmatch/grid.hpp"

namespace fricmatch {

/// Density of agent types on the circle, one value per grid cell. Always
/// nonnegative and normalized to integrate to 1 under `quadrature`.
class PreferenceDistribution {
public:
  /// Renormalizes `density`; throws InvalidInput on negative, non-finite or
  /// all-zero input.
  PreferenceDistribution(Grid grid, std::vector<double> density);

  const Grid& grid() const noexcept { return grid_; }
  std::span<const double> density() const noexcept { return density_; }
  double operator[](std::size_t i) const noexcept { return density_[i]; }
  std::size_t size() const noexcept { return density_.size(); }

  double max() const;
  double min() const;

  /// Mass carried by the arc [a, b] (b >= a, length <= 1), treating the
  /// density as constant on each cell.
  double arc_mass(double a, double b) const;

  /// Cell index drawn with probability proportional to its mass.
  std::size_t sample_cell(std::mt19937_64& rng) const;

private:
  Grid grid_;
  std::vector<double> density_;
  std::vector<double> cumulative_;  // cumulative_[i] = mass of cells [0, i)
};

namespace preference {

struct Uniform {};
/// Indicator of [lo, hi] scaled by height; a cell is inside when its centre is.
struct Block {
  double lo = 0.4;
  double hi = 0.6;
  double height = 5.0;
};
/// Wrapped normal on the circle.
struct WrappedGaussian {
  double center = 0.5;
  double sd = 0.1;
};
/// Mixture of two wrapped normals; `weight` is the mass of the first one.
struct DoublePeak {
  double center1 = 0.3;
  double sd1 = 0.06;
  double center2 = 0.7;
  double sd2 = 0.06;
  double weight = 0.5;
};
/// Piecewise-linear bump: zero outside [left, right], peak at mode.
/// right - left may not exceed 1; coordinates are wrapped.
struct Triangle {
  double left = 0.1;
  double mode = 0.3;
  double right = 1.0;
};

using Spec = std::variant<Uniform, Block, WrappedGaussian, DoublePeak, Triangle>;

/// Parses "uniform", "block:0.4,0.6,5", "gaussian:0.5,0.1",
/// "double_peak:0.3,0.06,0.7,0.06,0.5", "triangle:0.1,0.3,1.0".
Spec parse(const std::string& text);
std::string to_string(const Spec& spec);

}  // namespace preference

/// Discretizes a preference shape on `grid` and renormalizes it.
PreferenceDistribution make_preference(const preference::Spec& spec, const Grid& grid);

}  // namespace fricmatch
