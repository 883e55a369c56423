#include <doctest.h>

#include <cmath>

#include "fricmatch/continuum.hpp"
#include "fricmatch/error.hpp"
#include "fricmatch/simulator.hpp"
#include "fricmatch/two_firm.hpp"

using namespace fricmatch;

namespace {

SimConfig small_two_firm(double p_a, double r_f, double alpha) {
  SimConfig c;
  c.two_firm_p_a = p_a;
  c.frictions = FrictionParams{r_f, 1.0, 1.0, alpha};
  c.n_agents = 4000;
  c.burn_in = 5.0 / r_f;
  c.horizon = 20.0 / r_f;
  c.replications = 6;
  return c;
}

}  // namespace

TEST_SUITE("simulator") {

TEST_CASE("same seed, same result") {
  auto c = small_two_firm(0.7, 1.0, 0.5);
  c.n_agents = 1000;
  auto a = replicate(c, 3);
  auto b = replicate(c, 3);
  CHECK(a.shares == b.shares);
  CHECK(a.share_se == b.share_se);
  CHECK(a.unmatched_fraction == b.unmatched_fraction);
  CHECK(sim_result_json(a) == sim_result_json(b));
  c.seed = 2;
  CHECK(replicate(c, 3).shares != a.shares);

  c.threads = 3;
  CHECK(replicate(c, 3).shares == replicate(c, 3).shares);
}

TEST_CASE("threads do not change the result") {
  auto c = small_two_firm(0.6, 0.5, 0.0);
  c.n_agents = 1000;
  auto one = replicate(c, 4);
  c.threads = 2;
  auto two = replicate(c, 4);
  CHECK(one.shares == two.shares);
  CHECK(one.unmatched_se == two.unmatched_se);
}

TEST_CASE("symmetric two-firm market") {
  auto c = small_two_firm(0.5, 0.5, 0.5);
  auto res = replicate(c, c.replications);
  CHECK(std::abs(res.shares[0] - 0.5) <= 3.0 * res.share_se[0]);
  CHECK(res.shares[0] + res.shares[1] == doctest::Approx(1.0));
}

TEST_CASE("constant rates against the closed form") {
  auto c = small_two_firm(0.7, 1.0, 0.0);
  auto res = replicate(c, c.replications);
  double want = share_constant_rate(0.7, 1.0);
  CHECK(std::abs(res.shares[0] - want) <= 4.0 * res.share_se[0]);
  CHECK(std::abs(res.unmatched_fraction - c.frictions.unmatched_fraction()) <= 4.0 * res.unmatched_se);
  CHECK(res.population_mean == doctest::Approx(4000.0).epsilon(0.02));
  CHECK(res.events.matches > 0);
  CHECK(res.events.switches > 0);
}

TEST_CASE("standard errors shrink with replications") {
  auto c = small_two_firm(0.7, 1.0, 0.0);
  c.n_agents = 1000;
  // average SEs over disjoint seed blocks
  double se2 = 0.0, se8 = 0.0;
  for (std::uint64_t b = 0; b < 8; ++b) {
    c.seed = 1000 + 100 * b;
    se2 += replicate(c, 2).share_se[0] / 8.0;
  }
  for (std::uint64_t b = 0; b < 4; ++b) {
    c.seed = 5000 + 100 * b;
    se8 += replicate(c, 8).share_se[0] / 4.0;
  }
  double ratio = se2 / se8;
  CHECK(ratio > 1.1);
  CHECK(ratio < 3.0);
}

TEST_CASE("continuum market and binning") {
  SimConfig c;
  Grid g(32);
  auto ell = make_preference(preference::parse("gaussian:0.5,0.15"), g);
  c.ell = ell;
  c.frictions = FrictionParams{1.0, 1.0, 1.0, 0.0};
  c.n_agents = 6000;
  c.burn_in = 5.0;
  c.horizon = 25.0;
  c.replications = 4;
  auto res = replicate(c, 4);
  CHECK(res.shares.size() == 32);
  auto binned = bin_shares(res, 4);
  double total = 0.0;
  for (double m : binned.mass) total += m;
  CHECK(total == doctest::Approx(1.0));
  auto profile = solve_constant_rate(ell, 1.0);
  auto want = bin_profile(std::vector<double>(profile.shares().begin(), profile.shares().end()), 4);
  for (std::size_t b = 0; b < 4; ++b) {
    CHECK(std::abs(binned.mass[b] - want[b]) <= 4.0 * binned.se[b] + 1e-9);
  }
  auto csv = sim_result_csv(res);
  CHECK(csv.rfind("cell_center,share,se\n", 0) == 0);
}

TEST_CASE("bin_profile groups cell masses") {
  std::vector<double> d(8, 1.0);
  auto b = bin_profile(d, 4);
  REQUIRE(b.size() == 4);
  for (double v : b) CHECK(v == doctest::Approx(0.25));
}

TEST_CASE("configuration checks") {
  SimConfig c;
  CHECK_THROWS_AS(c.validate(), InvalidInput);  // neither market chosen
  c.two_firm_p_a = 0.5;
  c.validate();
  c.horizon = 1.0;
  c.burn_in = 2.0;
  CHECK_THROWS_AS(c.validate(), InvalidInput);
  c = SimConfig{};
  c.two_firm_p_a = 1.5;
  CHECK_THROWS_AS(c.validate(), InvalidInput);
  c = SimConfig{};
  c.two_firm_p_a = 0.5;
  c.frictions = FrictionParams{1e-6, 1.0, 1.0, 0.0};
  CHECK_THROWS_AS(c.validate(), InvalidInput);  // too many meetings per lifetime
}

}  // TEST_SUITE
