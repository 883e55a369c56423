#include <doctest.h>

#include <cmath>
#include <sstream>

#include "fricmatch/error.hpp"
#include "fricmatch/estimation.hpp"

using namespace fricmatch;

namespace {

FlowPanel from_csv(const std::string& body) {
  std::istringstream in(std::string(kTransactionHeader) + "\n" + body);
  return ingest_transactions(in);
}

const FlowCell* cell_for(const MarketYear& c, const std::string& firm) {
  for (const auto& f : c.firms) {
    if (f.firm_id == firm) return &f;
  }
  return nullptr;
}

// One market-year per group with the given lagged shares and flow shares.
FlowPanel handmade(const std::vector<std::vector<std::pair<double, double>>>& groups) {
  FlowPanel p;
  int year = 2001;
  for (const auto& g : groups) {
    MarketYear c;
    c.market_id = "m";
    c.year = year++;
    c.buyers = 100;
    int k = 0;
    for (const auto& [lag, flow] : g) {
      FlowCell f;
      f.firm_id = "f" + std::to_string(k++);
      f.lagged_share = lag;
      f.flow_share = flow;
      c.firms.push_back(f);
    }
    p.cells.push_back(c);
  }
  return p;
}

}  // namespace

TEST_SUITE("estimation") {

TEST_CASE("flow adjustment") {
  CHECK(adjusted_inflow(100, 10, 0.15) == doctest::Approx(100 - 0.85 / 0.15 * 10));
  CHECK(adjusted_inflow(100, 10, 0.15) == doctest::Approx(43.3333).epsilon(1e-5));
  CHECK(adjusted_inflow(100, 10, 1.0) == 100.0);
  CHECK(adjusted_inflow(5, 10, 0.15) < 0.0);
  CHECK_THROWS_AS(adjusted_inflow(1, 1, 0.0), InvalidInput);

  FlowPanel p = handmade({{{0.5, 0}, {0.5, 0}}});
  p.cells[0].firms[0].new_inflow = 5;
  p.cells[0].firms[0].poached_inflow = 10;
  p.cells[0].firms[1].new_inflow = 100;
  p.cells[0].firms[1].poached_inflow = 10;
  adjust_flows(p, 0.15);
  CHECK(p.cells[0].firms[0].adjusted_inflow == 0.0);
  CHECK(p.cells[0].firms[0].clipped);
  CHECK(p.cells[0].firms[1].flow_share == doctest::Approx(1.0));
  CHECK(p.diagnostics.clipped_cells == 1);
  CHECK(p.diagnostics.adjusted_cells == 2);
  CHECK(p.diagnostics.clipped_share() == doctest::Approx(0.5));
}

TEST_CASE("toy panels") {
  auto one = from_csv("2001,m1,F1,b1,10\n2001,m1,F1,b2,20\n2001,m1,F1,b2,5\n");
  REQUIRE(one.cells.size() == 1);
  CHECK(one.cells[0].excluded);
  CHECK(one.diagnostics.duplicate_rows == 1);

  auto multi = from_csv(
      "2001,m1,F1,b1,1\n2001,m1,F2,b1,1\n2001,m1,F1,b2,1\n2001,m1,F2,b3,1\n"
      "2002,m1,F1,b2,1\n2002,m1,F2,b3,1\n2002,m1,F2,b4,1\n");
  CHECK(multi.diagnostics.dropped_buyers == 1);

  auto move = from_csv(
      "2001,m1,F1,b1,1\n2001,m1,F1,b2,1\n2001,m1,F2,b3,1\n"
      "2002,m1,F2,b1,1\n2002,m1,F1,b2,1\n2002,m1,F2,b3,1\n2002,m1,F1,b9,1\n");
  REQUIRE(move.cells.size() == 2);
  const auto& y2 = move.cells[1];
  CHECK_FALSE(y2.excluded);
  auto f2 = cell_for(y2, "F2");
  auto f1 = cell_for(y2, "F1");
  REQUIRE(f1);
  REQUIRE(f2);
  CHECK(f2->poached_inflow == 1.0);
  CHECK(f2->new_inflow == 0.0);
  CHECK(f1->new_inflow == 1.0);
  CHECK(f1->lagged_share == doctest::Approx(2.0 / 3.0));
  CHECK(f1->share == doctest::Approx(0.5));
}

TEST_CASE("exact regressions") {
  // inflow split evenly whatever the size: slope 0
  auto flat = handmade({{{0.2, 0.25}, {0.3, 0.25}, {0.1, 0.25}, {0.4, 0.25}},
                        {{0.6, 0.5}, {0.4, 0.5}}});
  auto e0 = estimate_alpha(flat, EstimateScope::pooled)[0];
  CHECK(e0.defined);
  CHECK(e0.alpha_hat == doctest::Approx(0.0).epsilon(1e-12));

  auto ident = handmade({{{0.2, 0.2}, {0.3, 0.3}, {0.1, 0.1}, {0.4, 0.4}},
                         {{0.6, 0.6}, {0.4, 0.4}}});
  auto e1 = estimate_alpha(ident, EstimateScope::pooled)[0];
  CHECK(e1.alpha_hat == doctest::Approx(1.0).epsilon(1e-12));
  CHECK(e1.se == doctest::Approx(0.0).epsilon(1e-12));
  CHECK(e1.alpha_free == doctest::Approx(1.0));

  // affine with a planted slope: flow = alpha lag + (1 - alpha) / N
  const double a = 0.75;
  auto planted = handmade({{{0.2, a * 0.2 + 0.25 * (1 - a)}, {0.3, a * 0.3 + 0.25 * (1 - a)},
                            {0.1, a * 0.1 + 0.25 * (1 - a)}, {0.4, a * 0.4 + 0.25 * (1 - a)}}});
  CHECK(estimate_alpha(planted, EstimateScope::pooled)[0].alpha_hat == doctest::Approx(a));
  auto by_year = estimate_alpha(planted, EstimateScope::per_year);
  REQUIRE(by_year.size() == 1);
  CHECK(by_year[0].label == "2001");

  auto constant = handmade({{{0.5, 0.4}, {0.5, 0.6}}});
  CHECK_FALSE(estimate_alpha(constant, EstimateScope::pooled)[0].defined);
}

TEST_CASE("per-market summaries") {
  FlowPanel p = handmade({{{0.2, 0.2}, {0.8, 0.8}}});
  auto other = handmade({{{0.2, 0.5}, {0.8, 0.5}}});
  other.cells[0].market_id = "n";
  other.cells[0].buyers = 300;
  p.cells.push_back(other.cells[0]);
  auto est = estimate_alpha(p, EstimateScope::per_market);
  REQUIRE(est.size() == 4);
  CHECK(est[2].label == "mean");
  CHECK(est[2].alpha_hat == doctest::Approx(0.5));
  CHECK(est[3].label == "buyer_weighted_mean");
  CHECK(est[3].alpha_hat == doctest::Approx(0.25));
  auto csv = alpha_csv(est, "market_id");
  CHECK(csv.rfind("market_id,alpha_hat,se,n\n", 0) == 0);
  CHECK(csv.find("mean") == std::string::npos);
}

TEST_CASE("CSV parsing") {
  std::istringstream bad_header("year,market,firm,buyer,value\n");
  CHECK_THROWS_AS(read_transactions(bad_header), InvalidInput);
  std::istringstream bad_row(std::string(kTransactionHeader) + "\n2001,m,f,b,1\n2001,m,f,b,x\n");
  try {
    read_transactions(bad_row);
    FAIL("expected an exception");
  } catch (const InvalidInput& e) {
    CHECK(std::string(e.what()).find("3") != std::string::npos);
  }
  std::vector<TransactionRecord> rows{{2001, "m1", "f1", "b1", 12.5}, {2002, "m1", "f2", "b1", 3.0}};
  std::ostringstream out;
  write_transactions(out, rows);
  std::istringstream back(out.str());
  auto again = read_transactions(back);
  REQUIRE(again.size() == 2);
  CHECK(again[1].firm_id == "f2");
  CHECK(again[0].value == 12.5);
}

TEST_CASE("value threshold") {
  IngestOptions opts;
  opts.min_firm_value = 10.0;
  std::istringstream in(std::string(kTransactionHeader) +
                        "\n2001,m,F1,b1,50\n2001,m,F2,b2,1\n2002,m,F1,b1,50\n2002,m,F2,b2,50\n");
  auto p = ingest_transactions(in, opts);
  CHECK(p.diagnostics.threshold_firm_years == 1);
}

TEST_CASE("synthetic panels") {
  SynthConfig c;
  c.n_markets = 3;
  c.firms_per_market = 4;
  c.buyers_per_firm = 30;
  c.years = 3;
  c.seed = 42;
  std::ostringstream a, b;
  synth_panel_csv(c, a);
  synth_panel_csv(c, b);
  CHECK(a.str() == b.str());
  CHECK(a.str().rfind("year,market_id,firm_id,buyer_id,value\n", 0) == 0);
  c.seed = 43;
  std::ostringstream d;
  synth_panel_csv(c, d);
  CHECK(d.str() != a.str());

  c.alpha_by_year = {0.1, 0.2};
  CHECK_THROWS_AS(c.validate(), InvalidInput);
  c.alpha_by_year = {0.1, 0.2, 0.3};
  c.validate();
  CHECK(c.alpha_in_year(2) == doctest::Approx(0.3));
}

TEST_CASE("synthetic recovery at the extremes") {
  for (double alpha : {0.0, 1.0}) {
    SynthConfig c;
    c.n_markets = 20;
    c.firms_per_market = 6;
    c.buyers_per_firm = 150;
    c.years = 4;
    c.alpha_by_year = {alpha};
    c.seed = 9;
    auto panel = synth_flow_panel(c);
    adjust_flows(panel, 1.0);
    auto e = estimate_alpha(panel, EstimateScope::pooled)[0];
    INFO("alpha = " << alpha << ", estimate " << e.alpha_hat << " (se " << e.se << ")");
    CHECK(std::abs(e.alpha_hat - alpha) < 3.0 * e.se + 0.02);
  }
}

}  // TEST_SUITE
