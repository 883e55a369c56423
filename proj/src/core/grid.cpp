#include "fricmatch/grid.hpp"

#include <cmath>
#include <string>

#include "fricmatch/error.hpp"

namespace fricmatch {

double wrap_unit(double x) {
  double w = x - std::floor(x);
  // x slightly below an integer can round up to exactly 1.0
  return w >= 1.0 ? 0.0 : w;
}

double circular_distance(double x, double y) {
  double d = std::fabs(wrap_unit(x) - wrap_unit(y));
  return d > 0.5 ? 1.0 - d : d;
}

Grid::Grid(std::size_t n_points) : n_(n_points) {
  if (n_points < kMinGridSize) {
    throw InvalidInput("grid needs at least " + std::to_string(kMinGridSize) +
                       " points, got " + std::to_string(n_points));
  }
}

std::vector<double> Grid::points() const {
  std::vector<double> out(n_);
  for (std::size_t i = 0; i < n_; ++i) out[i] = point(i);
  return out;
}

std::size_t Grid::cell_of(double y) const noexcept {
  auto c = static_cast<std::size_t>(wrap_unit(y) * static_cast<double>(n_));
  return c >= n_ ? n_ - 1 : c;
}

std::size_t Grid::offset(std::size_t i, std::size_t j) const noexcept {
  std::size_t d = i > j ? i - j : j - i;
  return d > n_ - d ? n_ - d : d;
}

double quadrature(std::span<const double> values) {
  if (values.empty()) return 0.0;
  double sum = 0.0;
  for (double v : values) sum += v;
  return sum / static_cast<double>(values.size());
}

}  // namespace fricmatch
