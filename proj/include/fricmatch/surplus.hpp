#pragma once

#include <string>

namespace fricmatch {

/// Match value sigma(x, y) = f(d(x, y)) for a strictly decreasing f on [0, 1/2].
class SurplusFunction {
public:
  enum class Kind { linear, exponential };

  /// f(d) = intercept - slope * d, slope > 0. Default is 1 - d.
  static SurplusFunction linear(double intercept = 1.0, double slope = 1.0);
  /// f(d) = scale * exp(-d / length), scale > 0, length > 0.
  static SurplusFunction exponential(double scale, double length);
  /// "linear", "linear:a,b" or "exponential:scale,length".
  static SurplusFunction parse(const std::string& text);

  Kind kind() const noexcept { return kind_; }
  double of_distance(double d) const noexcept;
  double operator()(double x, double y) const noexcept;

  /// Same shape multiplied by factor > 0.
  SurplusFunction scaled(double factor) const;
  std::string describe() const;

private:
  SurplusFunction(Kind kind, double a, double b) : kind_(kind), a_(a), b_(b) {}
  Kind kind_;
  double a_;
  double b_;
};

/// sigma(x, y) under `sf`.
double surplus(const SurplusFunction& sf, double x, double y);

}  // namespace fricmatch
