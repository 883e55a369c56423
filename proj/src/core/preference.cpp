#include "fricmatch/preference.hpp"

#include <algorithm>
#include <cmath>
#include <numbers>
#include <sstream>

#include "fricmatch/error.hpp"

namespace fricmatch {

PreferenceDistribution::PreferenceDistribution(Grid grid, std::vector<double> density)
    : grid_(grid), density_(std::move(density)) {
  if (density_.size() != grid_.size()) {
    throw InvalidInput("preference density has " + std::to_string(density_.size()) +
                       " values for a grid of " + std::to_string(grid_.size()));
  }
  for (double v : density_) {
    if (!std::isfinite(v) || v < 0.0) {
      throw InvalidInput("preference density must be finite and nonnegative");
    }
  }
  double mass = quadrature(density_);
  if (!(mass > 0.0)) throw InvalidInput("preference density is identically zero");
  for (double& v : density_) v /= mass;

  cumulative_.assign(density_.size() + 1, 0.0);
  const double h = grid_.spacing();
  for (std::size_t i = 0; i < density_.size(); ++i) {
    cumulative_[i + 1] = cumulative_[i] + density_[i] * h;
  }
}

double PreferenceDistribution::max() const {
  return *std::max_element(density_.begin(), density_.end());
}

double PreferenceDistribution::min() const {
  return *std::min_element(density_.begin(), density_.end());
}

namespace {

// Mass of [0, y] for y in [0, 1].
double mass_below(std::span<const double> density, std::span<const double> cumulative,
                  double y) {
  const std::size_t n = density.size();
  double pos = y * static_cast<double>(n);
  auto cell = static_cast<std::size_t>(pos);
  if (cell >= n) return cumulative[n];
  return cumulative[cell] + (pos - static_cast<double>(cell)) * density[cell] /
                                static_cast<double>(n);
}

}  // namespace

double PreferenceDistribution::arc_mass(double a, double b) const {
  double len = b - a;
  if (len <= 0.0) return 0.0;
  if (len >= 1.0) return 1.0;
  double start = wrap_unit(a);
  double end = start + len;
  if (end <= 1.0) {
    return mass_below(density_, cumulative_, end) - mass_below(density_, cumulative_, start);
  }
  return (cumulative_.back() - mass_below(density_, cumulative_, start)) +
         mass_below(density_, cumulative_, end - 1.0);
}

std::size_t PreferenceDistribution::sample_cell(std::mt19937_64& rng) const {
  std::uniform_real_distribution<double> unif(0.0, cumulative_.back());
  double u = unif(rng);
  auto it = std::upper_bound(cumulative_.begin() + 1, cumulative_.end(), u);
  auto cell = static_cast<std::size_t>(it - cumulative_.begin()) - 1;
  return std::min(cell, density_.size() - 1);
}

namespace {

double wrapped_normal(double x, double center, double sd) {
  double total = 0.0;
  for (int k = -4; k <= 4; ++k) {
    double z = (x - center + k) / sd;
    total += std::exp(-0.5 * z * z);
  }
  return total;
}

struct Discretizer {
  const Grid& grid;

  std::vector<double> operator()(const preference::Uniform&) const {
    return std::vector<double>(grid.size(), 1.0);
  }

  std::vector<double> operator()(const preference::Block& b) const {
    if (!(b.lo < b.hi)) throw InvalidInput("block preference needs lo < hi");
    if (!(b.height > 0.0)) throw InvalidInput("block preference needs height > 0");
    std::vector<double> out(grid.size(), 0.0);
    for (std::size_t i = 0; i < grid.size(); ++i) {
      double x = grid.point(i);
      if (x >= b.lo && x <= b.hi) out[i] = b.height;
    }
    return out;
  }

  std::vector<double> operator()(const preference::WrappedGaussian& g) const {
    if (!(g.sd > 0.0)) throw InvalidInput("gaussian preference needs sd > 0");
    std::vector<double> out(grid.size());
    for (std::size_t i = 0; i < grid.size(); ++i) {
      out[i] = wrapped_normal(grid.point(i), g.center, g.sd);
    }
    return out;
  }

  std::vector<double> operator()(const preference::DoublePeak& d) const {
    if (!(d.sd1 > 0.0 && d.sd2 > 0.0)) throw InvalidInput("double_peak needs sd > 0");
    if (!(d.weight >= 0.0 && d.weight <= 1.0)) {
      throw InvalidInput("double_peak weight must lie in [0, 1]");
    }
    std::vector<double> out(grid.size());
    // each component normalized separately so `weight` is its mass
    double norm1 = d.sd1 * std::sqrt(2.0 * std::numbers::pi);
    double norm2 = d.sd2 * std::sqrt(2.0 * std::numbers::pi);
    for (std::size_t i = 0; i < grid.size(); ++i) {
      double x = grid.point(i);
      out[i] = d.weight * wrapped_normal(x, d.center1, d.sd1) / norm1 +
               (1.0 - d.weight) * wrapped_normal(x, d.center2, d.sd2) / norm2;
    }
    return out;
  }

  std::vector<double> operator()(const preference::Triangle& t) const {
    double up = t.mode - t.left;
    double down = t.right - t.mode;
    if (!(up > 0.0 && down > 0.0 && t.right - t.left <= 1.0)) {
      throw InvalidInput("triangle preference needs left < mode < right <= left + 1");
    }
    std::vector<double> out(grid.size(), 0.0);
    for (std::size_t i = 0; i < grid.size(); ++i) {
      // position relative to left, unwrapped into [0, 1)
      double rel = wrap_unit(grid.point(i) - t.left);
      if (rel <= up) {
        out[i] = rel / up;
      } else if (rel <= up + down) {
        out[i] = (up + down - rel) / down;
      }
    }
    return out;
  }
};

std::vector<double> parse_numbers(const std::string& body, std::size_t expected,
                                  const std::string& kind) {
  std::vector<double> values;
  std::stringstream ss(body);
  std::string item;
  while (std::getline(ss, item, ',')) {
    try {
      std::size_t used = 0;
      values.push_back(std::stod(item, &used));
      if (used != item.size()) throw InvalidInput("");
    } catch (const std::exception&) {
      throw InvalidInput("bad number '" + item + "' in " + kind + " preference");
    }
  }
  if (values.size() != expected) {
    throw InvalidInput(kind + " preference expects " + std::to_string(expected) +
                       " parameters, got " + std::to_string(values.size()));
  }
  return values;
}

}  // namespace

namespace preference {

Spec parse(const std::string& text) {
  auto colon = text.find(':');
  std::string kind = text.substr(0, colon);
  std::string body = colon == std::string::npos ? "" : text.substr(colon + 1);
  if (kind == "uniform") {
    if (!body.empty()) throw InvalidInput("uniform preference takes no parameters");
    return Uniform{};
  }
  if (kind == "block") {
    auto v = parse_numbers(body, 3, kind);
    return Block{v[0], v[1], v[2]};
  }
  if (kind == "gaussian" || kind == "wrapped_gaussian") {
    auto v = parse_numbers(body, 2, kind);
    return WrappedGaussian{v[0], v[1]};
  }
  if (kind == "double_peak") {
    auto v = parse_numbers(body, 5, kind);
    return DoublePeak{v[0], v[1], v[2], v[3], v[4]};
  }
  if (kind == "triangle") {
    auto v = parse_numbers(body, 3, kind);
    return Triangle{v[0], v[1], v[2]};
  }
  throw InvalidInput("unknown preference kind '" + kind + "'");
}

std::string to_string(const Spec& spec) {
  std::ostringstream os;
  os.precision(17);
  std::visit(
      [&os](const auto& s) {
        using T = std::decay_t<decltype(s)>;
        if constexpr (std::is_same_v<T, Uniform>) {
          os << "uniform";
        } else if constexpr (std::is_same_v<T, Block>) {
          os << "block:" << s.lo << ',' << s.hi << ',' << s.height;
        } else if constexpr (std::is_same_v<T, WrappedGaussian>) {
          os << "gaussian:" << s.center << ',' << s.sd;
        } else if constexpr (std::is_same_v<T, DoublePeak>) {
          os << "double_peak:" << s.center1 << ',' << s.sd1 << ',' << s.center2 << ','
             << s.sd2 << ',' << s.weight;
        } else {
          os << "triangle:" << s.left << ',' << s.mode << ',' << s.right;
        }
      },
      spec);
  return os.str();
}

}  // namespace preference

PreferenceDistribution make_preference(const preference::Spec& spec, const Grid& grid) {
  return PreferenceDistribution(grid, std::visit(Discretizer{grid}, spec));
}

}  // namespace fricmatch
