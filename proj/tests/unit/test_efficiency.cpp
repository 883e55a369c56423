#include <doctest.h>

#include <cmath>

#include "fricmatch/efficiency.hpp"
#include "fricmatch/error.hpp"

using namespace fricmatch;

namespace {

PreferenceDistribution pref(const char* text, std::size_t n = 128) {
  return make_preference(preference::parse(text), Grid(n));
}

}  // namespace

TEST_SUITE("efficiency") {

TEST_CASE("grid and argmax helpers") {
  auto a = alpha_grid(5, 0.8);
  REQUIRE(a.size() == 5);
  CHECK(a.front() == 0.0);
  CHECK(a.back() == doctest::Approx(0.8));
  CHECK(a[2] == doctest::Approx(0.4));
  std::vector<double> v{1.0, 3.0, 3.0 + 1e-14, 2.0};
  CHECK(tie_break_argmax(v, 1e-10) == 1);
  CHECK(tie_break_argmax(v, 0.0) == 2);
  CHECK_THROWS_AS(alpha_grid(1), InvalidInput);

  Grid g(16);
  auto f = ring_surplus(g, SurplusFunction::linear());
  REQUIRE(f.size() == 9);
  CHECK(f[0] == doctest::Approx(1.0 - 1.0 / 64));
  CHECK(f[8] == doctest::Approx(1.0 - (0.5 - 1.0 / 64)));
}

TEST_CASE("utility at the population slope is the efficiency") {
  auto ell = pref("gaussian:0.5,0.15");
  for (double a : {0.0, 0.4, 0.9}) {
    CHECK(agent_utility(a, a, ell, 0.3) == doctest::Approx(efficiency(a, ell, 0.3)).epsilon(1e-12));
  }
  StrategicModel m(ell, 0.3, alpha_grid(6, 0.9));
  auto curve = m.efficiency_curve();
  for (std::size_t i = 0; i < 6; ++i) {
    CHECK(curve.values[i] == doctest::Approx(efficiency(m.alphas()[i], ell, 0.3)).epsilon(1e-12));
    CHECK(m.utility_curve(i)[i] == doctest::Approx(curve.values[i]).epsilon(1e-12));
  }
}

TEST_CASE("uniform preferences are flat") {
  auto ell = pref("uniform");
  auto alphas = alpha_grid(6);
  CHECK(best_response(0.5, ell, 0.3, alphas) == 0.0);
  auto out = nash_and_social(ell, 0.3, alphas);
  CHECK(out.degenerate);
  CHECK_FALSE(out.gap().has_value());
}

TEST_CASE("alpha matters less as frictions vanish") {
  auto ell = pref("gaussian:0.5,0.15", 256);
  auto gap = [&](double r) {
    double e0 = efficiency(0.0, ell, r);
    return std::abs(e0 - efficiency(0.9, ell, r)) / e0;
  };
  double g_small = gap(1e-3), g_mid = gap(1e-2), g_big = gap(0.5);
  CHECK(g_small < g_mid);
  CHECK(g_small < 0.05 * g_big);
}

TEST_CASE("surplus integral matches the direct double sum") {
  const std::size_t n = 32;
  Grid g(n);
  auto ell = pref("gaussian:0.3,0.1", n);
  std::vector<double> s(n);
  for (std::size_t i = 0; i < n; ++i) s[i] = 1.0 + 0.5 * std::cos(6.283185307179586 * g.point(i));
  const double alpha = 0.6, r = 0.4;
  auto sf = SurplusFunction::linear();
  auto w = meeting_weights(s, alpha);
  auto f = ring_surplus(g, sf);
  double want = 0.0;
  for (std::size_t i = 0; i < n; ++i) {
    double b = 0.0;
    for (std::size_t k = 0; k <= n / 2; ++k) {
      double inc = w[(i + k) % n];
      if (k > 0 && 2 * k != n) inc += w[(i + n - k) % n];
      double b_hi = b + inc / n;
      want += f[k] * ell[i] * inc / ((r + b) * (r + b_hi)) / (n * n);
      b = b_hi;
    }
  }
  CHECK(surplus_integral(ell, s, alpha, r, sf) == doctest::Approx(want).epsilon(1e-12));
}

TEST_CASE("single-peaked preferences: wider peaks favor an interior optimum") {
  auto ell = pref("gaussian:0.5,0.25", 128);
  StrategicModel m(ell, 0.2, alpha_grid(21));
  auto curve = m.efficiency_curve();
  CHECK(curve.interior());
  CHECK(m.best_response(0) == 20);
  CHECK(m.best_response(10) == 20);
}

TEST_CASE("double peak best response regression") {
  auto ell = pref("double_peak:0.3,0.06,0.7,0.06,0.5", 128);
  auto alphas = alpha_grid(11);
  CHECK(best_response(0.4995, ell, 0.3, alphas) == doctest::Approx(0.999));
}

}  // TEST_SUITE
