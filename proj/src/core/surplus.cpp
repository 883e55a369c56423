#include "fricmatch/surplus.hpp"

#include <cmath>
#include <sstream>

#include "fricmatch/error.hpp"
#include "fricmatch/grid.hpp"

namespace fricmatch {

SurplusFunction SurplusFunction::linear(double intercept, double slope) {
  if (!(slope > 0.0) || !std::isfinite(intercept) || !std::isfinite(slope)) {
    throw InvalidInput("linear surplus needs a finite positive slope");
  }
  return SurplusFunction(Kind::linear, intercept, slope);
}

SurplusFunction SurplusFunction::exponential(double scale, double length) {
  if (!(scale > 0.0) || !(length > 0.0)) {
    throw InvalidInput("exponential surplus needs scale > 0 and length > 0");
  }
  return SurplusFunction(Kind::exponential, scale, length);
}

SurplusFunction SurplusFunction::parse(const std::string& text) {
  auto colon = text.find(':');
  std::string kind = text.substr(0, colon);
  double a = 0.0, b = 0.0;
  if (colon != std::string::npos) {
    std::string body = text.substr(colon + 1);
    char comma = 0;
    std::istringstream is(body);
    if (!(is >> a >> comma >> b) || comma != ',' || !is.eof()) {
      throw InvalidInput("bad surplus parameters '" + body + "'");
    }
  }
  if (kind == "linear") {
    return colon == std::string::npos ? linear() : linear(a, b);
  }
  if (kind == "exponential" && colon != std::string::npos) return exponential(a, b);
  throw InvalidInput("unknown surplus function '" + text + "'");
}

double SurplusFunction::of_distance(double d) const noexcept {
  switch (kind_) {
    case Kind::linear:
      return a_ - b_ * d;
    case Kind::exponential:
      return a_ * std::exp(-d / b_);
  }
  return 0.0;
}

double SurplusFunction::operator()(double x, double y) const noexcept {
  return of_distance(circular_distance(x, y));
}

SurplusFunction SurplusFunction::scaled(double factor) const {
  if (!(factor > 0.0)) throw InvalidInput("surplus scale factor must be positive");
  if (kind_ == Kind::linear) return SurplusFunction(kind_, a_ * factor, b_ * factor);
  return SurplusFunction(kind_, a_ * factor, b_);
}

std::string SurplusFunction::describe() const {
  std::ostringstream os;
  os.precision(17);
  os << (kind_ == Kind::linear ? "linear:" : "exponential:") << a_ << ',' << b_;
  return os.str();
}

double surplus(const SurplusFunction& sf, double x, double y) { return sf(x, y); }

}  // namespace fricmatch
