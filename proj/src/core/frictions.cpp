#include "fricmatch/frictions.hpp"

#include <cmath>
#include <sstream>

#include "fricmatch/error.hpp"

namespace fricmatch {

void FrictionParams::validate() const {
  auto positive = [](double v) { return std::isfinite(v) && v > 0.0; };
  if (!positive(mu)) throw InvalidInput("mu must be finite and > 0");
  if (!positive(lambda_tot)) throw InvalidInput("lambda_tot must be finite and > 0");
  if (!positive(K)) throw InvalidInput("K must be finite and > 0");
  if (!(alpha >= 0.0 && alpha <= 1.0)) throw InvalidInput("alpha must lie in [0, 1]");
}

FrictionParams FrictionParams::from_ratio(double r_f, double alpha, double K) {
  FrictionParams p{r_f, 1.0, K, alpha};
  p.validate();
  return p;
}

std::string FrictionParams::describe() const {
  std::ostringstream os;
  os.precision(17);
  os << "mu=" << mu << " lambda_tot=" << lambda_tot << " K=" << K << " alpha=" << alpha;
  return os.str();
}

}  // namespace fricmatch
