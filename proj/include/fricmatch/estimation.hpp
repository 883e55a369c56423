#pragma once

#include <cstdint>
#include <functional>
#include <iosfwd>
#include <optional>
#include <string>
#include <vector>

#include "fricmatch/frictions.hpp"
#include "fricmatch/preference.hpp"

namespace fricmatch {

/// One buyer-firm link in a year, as read from `year,market_id,firm_id,buyer_id,value`.
struct TransactionRecord {
  int year = 0;
  std::string market_id;
  std::string firm_id;
  std::string buyer_id;
  double value = 0.0;
};

inline constexpr const char* kTransactionHeader = "year,market_id,firm_id,buyer_id,value";

/// Parses the CSV (exact header required). Throws InvalidInput naming the
/// offending line.
std::vector<TransactionRecord> read_transactions(std::istream& in);
void write_transaction_header(std::ostream& out);
void write_transactions(std::ostream& out, const std::vector<TransactionRecord>& rows);

struct IngestOptions {
  /// Firms whose total value in a market-year falls below this are treated as
  /// unobserved that year (0 disables).
  double min_firm_value = 0.0;
};

/// Per (market, year, firm): buyer-count share, lagged share, observed inflows.
struct FlowCell {
  std::string firm_id;
  double share = 0.0;         // s_t(y)
  double lagged_share = 0.0;  // s_{t-1}(y)
  double new_inflow = 0.0;      // buyers absent from the panel at t-1
  double poached_inflow = 0.0;  // buyers at another panel firm at t-1
  double adjusted_inflow = 0.0; // estimated inflow from unmatched buyers
  double flow_share = 0.0;      // adjusted_inflow / market-year total
  bool clipped = false;
};

struct MarketYear {
  std::string market_id;
  int year = 0;
  std::size_t buyers = 0;
  std::vector<FlowCell> firms;  // firms present at t or t-1
  bool excluded = false;
  std::string reason;
};

struct ExcludedCell {
  std::string market_id;
  int year = 0;
  std::string reason;
};

struct PanelDiagnostics {
  std::size_t rows = 0;
  std::size_t duplicate_rows = 0;        // merged into an existing (year, firm, buyer)
  std::size_t dropped_buyers = 0;        // buyer-years removed by the single-supplier filter
  std::size_t threshold_firm_years = 0;  // firm-years removed by the value threshold
  std::size_t clipped_cells = 0;
  std::size_t adjusted_cells = 0;
  std::vector<ExcludedCell> excluded;

  double clipped_share() const {
    return adjusted_cells ? static_cast<double>(clipped_cells) / static_cast<double>(adjusted_cells)
                          : 0.0;
  }
  void merge(const PanelDiagnostics& other);
};

struct FlowPanel {
  std::vector<MarketYear> cells;  // sorted by (market_id, year)
  PanelDiagnostics diagnostics;
};

/// Integer-coded links of a single market, the working form for ingestion.
struct MarketLinks {
  std::string market_id;
  struct Link {
    int year;
    std::uint32_t firm;
    std::uint64_t buyer;
    double value;
  };
  std::vector<Link> links;
  std::vector<std::string> firm_names;  // indexed by Link::firm
};

/// Builds the flow cells of one market: aggregates duplicates, applies the
/// value threshold and the single-supplier filter (a buyer-year is dropped if
/// the buyer deals with two or more firms in that year or the year before),
/// classifies inflows and computes shares. The first year of the market and
/// years without a preceding panel year are excluded.
std::vector<MarketYear> market_flows(MarketLinks market, const IngestOptions& opts,
                                     PanelDiagnostics& diag);

FlowPanel ingest_transactions(std::istream& csv, const IngestOptions& opts = {});
FlowPanel ingest_records(const std::vector<TransactionRecord>& rows, const IngestOptions& opts = {});

/// new - (1 - beta1) / beta1 * poached, before clipping.
double adjusted_inflow(double observed_new, double observed_poached, double beta1);

/// Fills adjusted_inflow / flow_share for every included cell, clipping
/// negatives to 0; excludes market-years whose adjusted total is 0.
void adjust_flows(FlowPanel& panel, double beta1);

enum class EstimateScope { per_market, pooled, per_year };
const char* scope_name(EstimateScope s);
EstimateScope parse_scope(const std::string& s);

struct AlphaEstimate {
  EstimateScope scope = EstimateScope::pooled;
  std::string label;  // market id, year, or "pooled" / "mean" / "buyer_weighted_mean"
  double alpha_hat = 0.0;  // slope after removing market-year means
  double se = 0.0;         // heteroskedasticity-robust (HC1)
  double alpha_free = 0.0; // slope with a single free intercept
  double intercept_free = 0.0;
  double se_free = 0.0;
  std::size_t n = 0;
  double buyers = 0.0;
  bool defined = false;
  std::string note;
};

/// Regresses flow shares on lagged shares within `scope`. For per_market the
/// returned vector holds one entry per market followed by the unweighted mean
/// ("mean") and buyer-weighted mean ("buyer_weighted_mean") of the defined
/// slopes; per_year holds one entry per year; pooled holds one entry.
/// Requires adjust_flows to have run.
std::vector<AlphaEstimate> estimate_alpha(const FlowPanel& panel, EstimateScope scope);

/// adjust_flows(beta1) then per-year estimates.
std::vector<AlphaEstimate> alpha_by_year(FlowPanel panel, double beta1);

/// Mean flow share by equal-count bins of lagged share.
struct BinnedMean {
  double lagged_share = 0.0;
  double flow_share = 0.0;
  std::size_t count = 0;
};
std::vector<BinnedMean> binned_flow_shares(const FlowPanel& panel, std::size_t bins);

std::string alpha_csv(const std::vector<AlphaEstimate>& estimates, const char* key_column);
std::string diagnostics_json(const PanelDiagnostics& diag, double beta1);

/// Synthetic panel: each market runs the finite market with firms at random
/// positions and annual snapshots of buyer-firm links. Meeting weights are
/// refreshed at every snapshot. When beta1 < 1 every panel firm has an
/// unobserved twin at the same position carrying (1 - beta1) / beta1 times its
/// weight, so a fraction beta1 of poaching flows comes from panel firms.
struct SynthConfig {
  std::size_t n_markets = 300;
  std::size_t firms_per_market = 10;
  std::size_t buyers_per_firm = 300;  // target matched panel buyers per firm
  int first_year = 2000;
  std::size_t years = 11;
  std::vector<double> alpha_by_year{0.75};  // one value for all years, or one per year
  FrictionParams frictions{0.02, 0.04, 15.0, 0.0};  // per year
  double burn_in = 0.0;                             // years; 0: 5 / mu
  double beta1 = 1.0;
  std::optional<preference::Spec> ell = preference::WrappedGaussian{0.5, 0.15};
  std::size_t ell_grid = 256;
  double value_log_mean = 10.0;
  double value_log_sd = 1.0;
  double min_value = 0.0;  // links below this value are not recorded (0: off)
  std::uint64_t seed = 1;

  void validate() const;
  double alpha_in_year(std::size_t t) const;
};

/// Runs every market in order and hands its links to `sink`.
void synth_panel(const SynthConfig& cfg, const std::function<void(MarketLinks&&)>& sink);
/// Convenience: writes the CSV.
void synth_panel_csv(const SynthConfig& cfg, std::ostream& out);
/// Convenience: builds the flow panel directly.
FlowPanel synth_flow_panel(const SynthConfig& cfg, const IngestOptions& opts = {});

}  // namespace fricmatch
