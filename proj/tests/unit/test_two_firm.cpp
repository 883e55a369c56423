#include <doctest.h>

#include <array>
#include <cmath>
#include <random>

#include "fricmatch/error.hpp"
#include "fricmatch/two_firm.hpp"

using namespace fricmatch;

namespace {

// Stationary occupation of one agent's chain U -> {A, B}, better-firm
// switches, and exit with immediate re-entry, solved by Gaussian elimination.
// Returns time at A minus nothing: {unmatched, at A, at B} probabilities.
std::array<double, 3> occupation(bool prefers_a, double mu, double la, double lb, double K) {
  // generator rows: from state i to j
  double q[3][3] = {};
  q[0][1] = K * la;
  q[0][2] = K * lb;
  if (prefers_a) {
    q[2][1] = la;
  } else {
    q[1][2] = lb;
  }
  q[1][0] += mu;
  q[2][0] += mu;
  for (int i = 0; i < 3; ++i) {
    double out = 0.0;
    for (int j = 0; j < 3; ++j) out += (j == i ? 0.0 : q[i][j]);
    q[i][i] = -out;
  }
  // pi Q = 0 with sum pi = 1: transpose, replace the last equation
  double a[3][4];
  for (int i = 0; i < 3; ++i) {
    for (int j = 0; j < 3; ++j) a[i][j] = q[j][i];
    a[i][3] = 0.0;
  }
  for (int j = 0; j < 3; ++j) a[2][j] = 1.0;
  a[2][3] = 1.0;
  for (int c = 0; c < 3; ++c) {
    int piv = c;
    for (int r = c + 1; r < 3; ++r) {
      if (std::abs(a[r][c]) > std::abs(a[piv][c])) piv = r;
    }
    for (int k = 0; k < 4; ++k) std::swap(a[c][k], a[piv][k]);
    for (int r = 0; r < 3; ++r) {
      if (r == c) continue;
      double f = a[r][c] / a[c][c];
      for (int k = 0; k < 4; ++k) a[r][k] -= f * a[c][k];
    }
  }
  return {a[0][3] / a[0][0], a[1][3] / a[1][1], a[2][3] / a[2][2]};
}

double chain_share(double p_a, double mu, double la, double lb, double K = 1.0) {
  auto oa = occupation(true, mu, la, lb, K);
  auto ob = occupation(false, mu, la, lb, K);
  double at_a = p_a * oa[1] + (1 - p_a) * ob[1];
  double at_b = p_a * oa[2] + (1 - p_a) * ob[2];
  return at_a / (at_a + at_b);
}

}  // namespace

TEST_SUITE("two_firm") {

TEST_CASE("constant rate against the agent chain") {
  std::mt19937_64 rng(5);
  std::uniform_real_distribution<double> u(0.0, 1.0);
  for (int i = 0; i < 50; ++i) {
    double p = u(rng), r = 0.01 + 4.0 * u(rng), K = 0.2 + 10.0 * u(rng);
    CHECK(share_constant_rate(p, r) == doctest::Approx(chain_share(p, r, 0.5, 0.5, K)).epsilon(1e-12));
    CHECK(share_constant_rate(p, r) == doctest::Approx((r + p) / (1 + 2 * r)).epsilon(1e-14));
  }
  CHECK(share_constant_rate(0.7, 1.0) == doctest::Approx(1.7 / 3.0));
  CHECK(std::abs(share_constant_rate(0.7, 1.0) - 0.5667) < 1e-4);
  CHECK(share_constant_rate(0.3, 0.0) == doctest::Approx(0.3));
  CHECK(share_constant_rate(0.9, 1e9) == doctest::Approx(0.5).epsilon(1e-8));
}

TEST_CASE("share_from_rates and steady_state agree with the chain") {
  std::mt19937_64 rng(6);
  std::uniform_real_distribution<double> u(0.0, 1.0);
  for (int i = 0; i < 50; ++i) {
    double p = u(rng), mu = 0.05 + u(rng), la = 0.05 + u(rng), lb = 0.05 + u(rng);
    double K = 0.5 + 3 * u(rng);
    double want = chain_share(p, mu, la, lb, K);
    CHECK(share_from_rates(p, mu, la, lb) == doctest::Approx(want).epsilon(1e-12));
    TwoFirmMarket m{p, FrictionParams{mu, la + lb, K, 0.0}};
    auto st = steady_state(m, la, lb);
    CHECK(st.s_A == doctest::Approx(want).epsilon(1e-12));
    CHECK(st.s_A + st.s_B == doctest::Approx(1.0));
    CHECK(st.u_a + st.u_b == doctest::Approx(mu / (K * (la + lb) + mu)));
    CHECK(st.m == doctest::Approx(K * (la + lb) / (K * (la + lb) + mu)));
  }
  TwoFirmMarket sym{0.5, FrictionParams{1.0, 1.0, 1.0, 0.0}};
  CHECK(steady_state(sym, 0.5, 0.5).s_A == doctest::Approx(0.5));
  TwoFirmMarket m7{0.7, FrictionParams{1.0, 1.0, 1.0, 0.0}};
  CHECK(steady_state(m7, 0.5, 0.5).s_A == doctest::Approx(1.7 / 3.0));
  CHECK_THROWS_AS(steady_state(m7, 0.5, 0.6), InvalidInput);
}

TEST_CASE("proportional rate") {
  std::mt19937_64 rng(7);
  std::uniform_real_distribution<double> u(0.0, 1.0);
  for (int i = 0; i < 50; ++i) {
    double p = u(rng), r = 0.01 + 3.0 * u(rng);
    double s = share_proportional(p, r);
    double hand = std::clamp(p * (2 * r + 1) - r, 0.0, 1.0);
    CHECK(s == doctest::Approx(hand).epsilon(1e-14));
    if (s > 0.0 && s < 1.0) {
      // self-consistent: rates proportional to the share reproduce it
      CHECK(chain_share(p, r, s, 1 - s) == doctest::Approx(s).epsilon(1e-12));
    }
  }
  CHECK(share_proportional(0.6, 0.25) == doctest::Approx(0.65));
  CHECK(share_proportional(0.5, 3.0) == doctest::Approx(0.5));
  for (double p : {0.6, 0.75, 0.9}) {
    double star = (1 - p) / (p - (1 - p));
    CHECK(share_proportional(p, star) == 1.0);
    CHECK(share_proportional(p, star * 1.5) == 1.0);
    CHECK(share_proportional(p, star * 0.9) < 1.0);
  }
  CHECK(share_proportional(0.75, 0.5) == 1.0);
}

TEST_CASE("affine reductions and examples") {
  for (double p : {0.1, 0.35, 0.5, 0.8}) {
    for (double r : {0.2, 0.7, 2.0}) {
      auto a0 = share_affine(p, r, 0.0);
      REQUIRE(a0.roots.size() == 1);
      CHECK(a0.selected_share() == doctest::Approx(share_constant_rate(p, r)).epsilon(1e-10));
      auto a1 = share_affine(p, r, 1.0);
      bool found = false;
      for (const auto& root : a1.roots) {
        found = found || std::abs(root.s_A - share_proportional(p, r)) < 1e-9;
      }
      CHECK(found);
      for (const auto& root : share_affine(p, r, 0.6).roots) {
        CHECK(std::abs(affine_residual(root.s_A, p, r, 0.6)) < 1e-9);
      }
    }
  }
  auto ex = share_affine(0.7, 0.7, 0.85);
  CHECK(ex.roots[ex.selected].stable);
  CHECK(ex.selected_share() > 0.7);

  auto multi = share_affine(0.6, 0.25, 1.0);
  REQUIRE(multi.roots.size() == 3);
  CHECK(multi.roots[0].s_A == doctest::Approx(0.0));
  CHECK_FALSE(multi.roots[0].stable);
  CHECK(multi.roots[1].s_A == doctest::Approx(0.65));
  CHECK(multi.roots[1].stable);
  CHECK(multi.selected == 1);
}

TEST_CASE("symmetry in every mode") {
  std::mt19937_64 rng(8);
  std::uniform_real_distribution<double> u(0.0, 1.0);
  for (int i = 0; i < 40; ++i) {
    double p = u(rng), r = 0.02 + 3 * u(rng), a = u(rng);
    CHECK(share_constant_rate(p, r) + share_constant_rate(1 - p, r) == doctest::Approx(1.0).epsilon(1e-10));
    CHECK(share_proportional(p, r) + share_proportional(1 - p, r) == doctest::Approx(1.0).epsilon(1e-10));
    CHECK(share_affine(p, r, a).selected_share() + share_affine(1 - p, r, a).selected_share() ==
          doctest::Approx(1.0).epsilon(1e-10));
  }
}

TEST_CASE("frictionless limit") {
  for (double p : {0.2, 0.55, 0.9}) {
    CHECK(std::abs(share_constant_rate(p, 1e-6) - p) < 1e-4);
    CHECK(std::abs(share_proportional(p, 1e-6) - p) < 1e-4);
    for (double a : {0.3, 0.8}) CHECK(std::abs(share_affine(p, 1e-6, a).selected_share() - p) < 1e-4);
  }
}

TEST_CASE("threshold and margin") {
  CHECK_FALSE(theorem1_threshold(0.0).has_value());
  CHECK_FALSE(theorem1_threshold(0.3).has_value());
  CHECK(*theorem1_threshold(0.5) == 0.0);
  CHECK(*theorem1_threshold(0.75) == doctest::Approx(1.0));
  CHECK(*theorem1_threshold(0.85) == doctest::Approx(0.35 / 0.15));
  CHECK_THROWS_AS(theorem1_threshold(1.0), InvalidInput);

  for (double a : {0.55, 0.6, 0.75, 0.9}) {
    double t = *theorem1_threshold(a);
    CHECK(homogenizing_margin(a, t * 1.01) > 0.0);
    CHECK(homogenizing_margin(a, t * 0.99) < 0.0);
    CHECK(homogenizing_margin(a, t) == doctest::Approx(0.0).epsilon(1e-12));
  }
  auto grid = half_grid();
  CHECK(verify_theorem1(0.85, 0.7, grid).accentuates);
  CHECK(verify_theorem1(0.85, 0.7, grid).consistent);
  CHECK_FALSE(verify_theorem1(0.85, 5.0, grid).accentuates);
  for (double r : {0.05, 0.5, 3.0}) CHECK_FALSE(verify_theorem1(0.3, r, grid).accentuates);
}

TEST_CASE("invalid input") {
  CHECK_THROWS_AS(share_constant_rate(1.2, 0.5), InvalidInput);
  CHECK_THROWS_AS(share_proportional(0.5, -1.0), InvalidInput);
  CHECK_THROWS_AS(share_affine(0.5, 0.0, 0.5), InvalidInput);
  CHECK_THROWS_AS(share_affine(0.5, 1.0, 1.5), InvalidInput);
}

}  // TEST_SUITE
