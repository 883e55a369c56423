#include "fricmatch/estimation.hpp"

#include <algorithm>
#include <cmath>
#include <istream>
#include <map>
#include <ostream>
#include <sstream>
#include <unordered_map>

#include <json.hpp>

#include "fricmatch/error.hpp"

namespace fricmatch {

// ---------------------------------------------------------------- CSV

namespace {

std::vector<std::string> split_fields(const std::string& line) {
  std::vector<std::string> out;
  std::string cur;
  for (char c : line) {
    if (c == ',') {
      out.push_back(cur);
      cur.clear();
    } else {
      cur.push_back(c);
    }
  }
  out.push_back(cur);
  return out;
}

TransactionRecord parse_row(const std::string& line, std::size_t line_no) {
  auto fail = [line_no](const std::string& why) {
    return InvalidInput("line " + std::to_string(line_no) + ": " + why);
  };
  auto f = split_fields(line);
  if (f.size() != 5) throw fail("expected 5 fields, got " + std::to_string(f.size()));
  TransactionRecord r;
  try {
    std::size_t used = 0;
    long y = std::stol(f[0], &used);
    if (used != f[0].size()) throw fail("bad year '" + f[0] + "'");
    r.year = static_cast<int>(y);
  } catch (const InvalidInput&) {
    throw;
  } catch (const std::exception&) {
    throw fail("bad year '" + f[0] + "'");
  }
  r.market_id = f[1];
  r.firm_id = f[2];
  r.buyer_id = f[3];
  if (r.market_id.empty() || r.firm_id.empty() || r.buyer_id.empty()) throw fail("empty id");
  try {
    std::size_t used = 0;
    r.value = std::stod(f[4], &used);
    if (used != f[4].size()) throw fail("bad value '" + f[4] + "'");
  } catch (const InvalidInput&) {
    throw;
  } catch (const std::exception&) {
    throw fail("bad value '" + f[4] + "'");
  }
  if (!std::isfinite(r.value) || r.value <= 0.0) throw fail("value must be finite and > 0");
  return r;
}

template <class RowFn>
void scan_csv(std::istream& in, RowFn&& fn) {
  std::string line;
  std::size_t line_no = 0;
  if (!std::getline(in, line)) throw InvalidInput("empty transaction file");
  ++line_no;
  if (!line.empty() && line.back() == '\r') line.pop_back();
  if (line != kTransactionHeader) {
    throw InvalidInput("line 1: header must be '" + std::string(kTransactionHeader) + "'");
  }
  while (std::getline(in, line)) {
    ++line_no;
    if (!line.empty() && line.back() == '\r') line.pop_back();
    if (line.empty()) continue;
    fn(parse_row(line, line_no));
  }
}

}  // namespace

std::vector<TransactionRecord> read_transactions(std::istream& in) {
  std::vector<TransactionRecord> rows;
  scan_csv(in, [&](TransactionRecord&& r) { rows.push_back(std::move(r)); });
  return rows;
}

void write_transaction_header(std::ostream& out) { out << kTransactionHeader << '\n'; }

void write_transactions(std::ostream& out, const std::vector<TransactionRecord>& rows) {
  write_transaction_header(out);
  for (const auto& r : rows) {
    out << r.year << ',' << r.market_id << ',' << r.firm_id << ',' << r.buyer_id << ','
        << r.value << '\n';
  }
}

// ---------------------------------------------------------------- flows

void PanelDiagnostics::merge(const PanelDiagnostics& o) {
  rows += o.rows;
  duplicate_rows += o.duplicate_rows;
  dropped_buyers += o.dropped_buyers;
  threshold_firm_years += o.threshold_firm_years;
  clipped_cells += o.clipped_cells;
  adjusted_cells += o.adjusted_cells;
  excluded.insert(excluded.end(), o.excluded.begin(), o.excluded.end());
}

namespace {

constexpr std::int64_t kMulti = -1;

}  // namespace

std::vector<MarketYear> market_flows(MarketLinks market, const IngestOptions& opts,
                                     PanelDiagnostics& diag) {
  using Link = MarketLinks::Link;
  auto& links = market.links;
  diag.rows += links.size();

  std::sort(links.begin(), links.end(), [](const Link& a, const Link& b) {
    if (a.year != b.year) return a.year < b.year;
    if (a.firm != b.firm) return a.firm < b.firm;
    return a.buyer < b.buyer;
  });
  std::vector<Link> merged;
  merged.reserve(links.size());
  for (const auto& l : links) {
    if (!merged.empty() && merged.back().year == l.year && merged.back().firm == l.firm &&
        merged.back().buyer == l.buyer) {
      merged.back().value += l.value;
      ++diag.duplicate_rows;
    } else {
      merged.push_back(l);
    }
  }

  if (opts.min_firm_value > 0.0) {
    std::map<std::pair<int, std::uint32_t>, double> totals;
    for (const auto& l : merged) totals[{l.year, l.firm}] += l.value;
    for (const auto& [key, v] : totals) {
      if (v < opts.min_firm_value) ++diag.threshold_firm_years;
    }
    std::erase_if(merged, [&](const Link& l) {
      return totals[{l.year, l.firm}] < opts.min_firm_value;
    });
  }

  // buyer -> firm (or kMulti) per year
  std::map<int, std::unordered_map<std::uint64_t, std::int64_t>> supplier;
  for (const auto& l : merged) {
    auto& m = supplier[l.year];
    auto [it, inserted] = m.try_emplace(l.buyer, static_cast<std::int64_t>(l.firm));
    if (!inserted && it->second != static_cast<std::int64_t>(l.firm)) it->second = kMulti;
  }

  const std::size_t nf = market.firm_names.size();
  std::map<int, std::vector<double>> counts;
  // kept links per year: (buyer, firm)
  std::map<int, std::vector<std::pair<std::uint64_t, std::uint32_t>>> kept;
  for (const auto& [year, m] : supplier) {
    auto prev = supplier.find(year - 1);
    auto& c = counts[year];
    c.assign(nf, 0.0);
    for (const auto& [buyer, firm] : m) {
      bool multi_prev = false;
      if (prev != supplier.end()) {
        auto p = prev->second.find(buyer);
        multi_prev = p != prev->second.end() && p->second == kMulti;
      }
      if (firm == kMulti || multi_prev) {
        ++diag.dropped_buyers;
        continue;
      }
      c[static_cast<std::size_t>(firm)] += 1.0;
      kept[year].emplace_back(buyer, static_cast<std::uint32_t>(firm));
    }
  }

  std::vector<MarketYear> out;
  for (const auto& [year, m] : supplier) {
    MarketYear cell;
    cell.market_id = market.market_id;
    cell.year = year;
    auto prev = supplier.find(year - 1);
    const auto& c = counts[year];
    double total = 0.0;
    for (double v : c) total += v;
    cell.buyers = static_cast<std::size_t>(total);
    if (prev == supplier.end()) {
      cell.excluded = true;
      cell.reason = "no preceding year";
      diag.excluded.push_back({cell.market_id, year, cell.reason});
      out.push_back(std::move(cell));
      continue;
    }
    const auto& cp = counts[year - 1];
    double total_prev = 0.0;
    for (double v : cp) total_prev += v;

    std::vector<double> fresh(nf, 0.0), poached(nf, 0.0);
    for (const auto& [buyer, firm] : kept[year]) {
      auto p = prev->second.find(buyer);
      if (p == prev->second.end()) {
        fresh[firm] += 1.0;
      } else if (p->second != static_cast<std::int64_t>(firm)) {
        poached[firm] += 1.0;
      }
    }
    for (std::size_t f = 0; f < nf; ++f) {
      if (c[f] == 0.0 && cp[f] == 0.0) continue;
      FlowCell fc;
      fc.firm_id = market.firm_names[f];
      fc.share = total > 0.0 ? c[f] / total : 0.0;
      fc.lagged_share = total_prev > 0.0 ? cp[f] / total_prev : 0.0;
      fc.new_inflow = fresh[f];
      fc.poached_inflow = poached[f];
      cell.firms.push_back(std::move(fc));
    }
    if (cell.firms.size() < 2) {
      cell.excluded = true;
      cell.reason = "fewer than 2 firms";
    } else if (total == 0.0 || total_prev == 0.0) {
      cell.excluded = true;
      cell.reason = "no buyers";
    }
    if (cell.excluded) diag.excluded.push_back({cell.market_id, year, cell.reason});
    out.push_back(std::move(cell));
  }
  return out;
}

namespace {

FlowPanel assemble(std::map<std::string, MarketLinks>& markets, const IngestOptions& opts) {
  FlowPanel panel;
  for (auto& [id, m] : markets) {
    auto cells = market_flows(std::move(m), opts, panel.diagnostics);
    for (auto& c : cells) panel.cells.push_back(std::move(c));
  }
  return panel;
}

struct Coder {
  std::map<std::string, MarketLinks> markets;
  std::map<std::string, std::unordered_map<std::string, std::uint32_t>> firm_codes;
  std::map<std::string, std::unordered_map<std::string, std::uint64_t>> buyer_codes;

  void add(const TransactionRecord& r) {
    auto& m = markets[r.market_id];
    m.market_id = r.market_id;
    auto& fc = firm_codes[r.market_id];
    auto [fit, fnew] = fc.try_emplace(r.firm_id, static_cast<std::uint32_t>(fc.size()));
    if (fnew) m.firm_names.push_back(r.firm_id);
    auto& bc = buyer_codes[r.market_id];
    auto [bit, bnew] = bc.try_emplace(r.buyer_id, bc.size());
    m.links.push_back({r.year, fit->second, bit->second, r.value});
  }
};

}  // namespace

FlowPanel ingest_transactions(std::istream& csv, const IngestOptions& opts) {
  Coder coder;
  scan_csv(csv, [&](TransactionRecord&& r) { coder.add(r); });
  return assemble(coder.markets, opts);
}

FlowPanel ingest_records(const std::vector<TransactionRecord>& rows, const IngestOptions& opts) {
  Coder coder;
  for (const auto& r : rows) coder.add(r);
  return assemble(coder.markets, opts);
}

double adjusted_inflow(double observed_new, double observed_poached, double beta1) {
  if (!(beta1 > 0.0 && beta1 <= 1.0)) throw InvalidInput("beta1 must lie in (0, 1]");
  return observed_new - (1.0 - beta1) / beta1 * observed_poached;
}

void adjust_flows(FlowPanel& panel, double beta1) {
  if (!(beta1 > 0.0 && beta1 <= 1.0)) throw InvalidInput("beta1 must lie in (0, 1]");
  auto& diag = panel.diagnostics;
  diag.clipped_cells = 0;
  diag.adjusted_cells = 0;
  std::erase_if(diag.excluded, [](const ExcludedCell& e) { return e.reason == "no inflow"; });
  for (auto& cell : panel.cells) {
    if (cell.excluded && cell.reason != "no inflow") continue;
    cell.excluded = false;
    cell.reason.clear();
    double total = 0.0;
    for (auto& f : cell.firms) {
      double v = adjusted_inflow(f.new_inflow, f.poached_inflow, beta1);
      f.clipped = v < 0.0;
      if (f.clipped) ++diag.clipped_cells;
      ++diag.adjusted_cells;
      f.adjusted_inflow = std::max(v, 0.0);
      total += f.adjusted_inflow;
    }
    if (total <= 0.0) {
      cell.excluded = true;
      cell.reason = "no inflow";
      diag.excluded.push_back({cell.market_id, cell.year, cell.reason});
      for (auto& f : cell.firms) f.flow_share = 0.0;
      continue;
    }
    for (auto& f : cell.firms) f.flow_share = f.adjusted_inflow / total;
  }
}

// ---------------------------------------------------------------- regression

const char* scope_name(EstimateScope s) {
  switch (s) {
    case EstimateScope::per_market:
      return "per-market";
    case EstimateScope::pooled:
      return "pooled-FE";
    case EstimateScope::per_year:
      return "per-year";
  }
  return "?";
}

EstimateScope parse_scope(const std::string& s) {
  if (s == "per-market" || s == "market") return EstimateScope::per_market;
  if (s == "pooled-FE" || s == "pooled" || s == "pooled-fe") return EstimateScope::pooled;
  if (s == "per-year" || s == "year") return EstimateScope::per_year;
  throw InvalidInput("unknown scope '" + s + "' (per-market, pooled-FE, per-year)");
}

namespace {

struct Fit {
  double slope = 0.0;
  double intercept = 0.0;
  double se = 0.0;
  bool defined = false;
};

// OLS of y on x after removing group means (or a single intercept when
// `groups` is empty); HC1 standard error of the slope.
Fit ols(const std::vector<double>& x, const std::vector<double>& y,
        const std::vector<std::size_t>& group, std::size_t n_groups) {
  const std::size_t n = x.size();
  Fit fit;
  if (n < 2) return fit;
  std::vector<double> mx(n_groups, 0.0), my(n_groups, 0.0), cnt(n_groups, 0.0);
  for (std::size_t i = 0; i < n; ++i) {
    mx[group[i]] += x[i];
    my[group[i]] += y[i];
    cnt[group[i]] += 1.0;
  }
  for (std::size_t g = 0; g < n_groups; ++g) {
    if (cnt[g] > 0.0) {
      mx[g] /= cnt[g];
      my[g] /= cnt[g];
    }
  }
  double sxx = 0.0, sxy = 0.0;
  for (std::size_t i = 0; i < n; ++i) {
    double dx = x[i] - mx[group[i]];
    sxx += dx * dx;
    sxy += dx * (y[i] - my[group[i]]);
  }
  if (!(sxx > 1e-300)) return fit;
  fit.slope = sxy / sxx;
  fit.defined = true;
  double meat = 0.0;
  for (std::size_t i = 0; i < n; ++i) {
    double dx = x[i] - mx[group[i]];
    double e = (y[i] - my[group[i]]) - fit.slope * dx;
    meat += dx * dx * e * e;
  }
  const double k = static_cast<double>(n_groups) + 1.0;
  const double dof = static_cast<double>(n) - k;
  fit.se = dof > 0.0 ? std::sqrt(meat / (sxx * sxx) * static_cast<double>(n) / dof) : 0.0;
  if (n_groups == 1) fit.intercept = my[0] - fit.slope * mx[0];
  return fit;
}

struct Sample {
  std::vector<double> x, y;
  std::vector<std::size_t> cell;
  std::size_t cells = 0;
  double buyers = 0.0;

  void add(const MarketYear& c) {
    for (const auto& f : c.firms) {
      x.push_back(f.lagged_share);
      y.push_back(f.flow_share);
      cell.push_back(cells);
    }
    ++cells;
    buyers += static_cast<double>(c.buyers);
  }
};

AlphaEstimate estimate(const Sample& s, EstimateScope scope, std::string label) {
  AlphaEstimate est;
  est.scope = scope;
  est.label = std::move(label);
  est.n = s.x.size();
  est.buyers = s.buyers;
  Fit within = ols(s.x, s.y, s.cell, s.cells);
  Fit free = ols(s.x, s.y, std::vector<std::size_t>(s.x.size(), 0), 1);
  est.defined = within.defined;
  est.alpha_hat = within.slope;
  est.se = within.se;
  est.alpha_free = free.slope;
  est.intercept_free = free.intercept;
  est.se_free = free.se;
  if (!est.defined) est.note = "no variation in lagged shares";
  return est;
}

}  // namespace

std::vector<AlphaEstimate> estimate_alpha(const FlowPanel& panel, EstimateScope scope) {
  std::vector<AlphaEstimate> out;
  if (scope == EstimateScope::pooled) {
    Sample s;
    for (const auto& c : panel.cells) {
      if (!c.excluded) s.add(c);
    }
    out.push_back(estimate(s, scope, "pooled"));
    return out;
  }
  if (scope == EstimateScope::per_year) {
    std::map<int, Sample> by_year;
    for (const auto& c : panel.cells) {
      if (!c.excluded) by_year[c.year].add(c);
    }
    for (const auto& [year, s] : by_year) out.push_back(estimate(s, scope, std::to_string(year)));
    return out;
  }

  std::map<std::string, Sample> by_market;
  for (const auto& c : panel.cells) {
    if (!c.excluded) by_market[c.market_id].add(c);
  }
  std::vector<double> slopes, weights;
  for (const auto& [id, s] : by_market) {
    out.push_back(estimate(s, scope, id));
    if (out.back().defined) {
      slopes.push_back(out.back().alpha_hat);
      weights.push_back(s.buyers);
    }
  }
  AlphaEstimate mean, weighted;
  mean.scope = weighted.scope = scope;
  mean.label = "mean";
  weighted.label = "buyer_weighted_mean";
  const double m = static_cast<double>(slopes.size());
  if (m > 0) {
    double sum = 0.0, wsum = 0.0, wtot = 0.0;
    for (std::size_t i = 0; i < slopes.size(); ++i) {
      sum += slopes[i];
      wsum += weights[i] * slopes[i];
      wtot += weights[i];
    }
    mean.alpha_hat = sum / m;
    weighted.alpha_hat = wtot > 0.0 ? wsum / wtot : mean.alpha_hat;
    double ss = 0.0, wss = 0.0, w2 = 0.0;
    for (std::size_t i = 0; i < slopes.size(); ++i) {
      ss += (slopes[i] - mean.alpha_hat) * (slopes[i] - mean.alpha_hat);
      double wi = wtot > 0.0 ? weights[i] / wtot : 1.0 / m;
      wss += wi * wi * (slopes[i] - weighted.alpha_hat) * (slopes[i] - weighted.alpha_hat);
      w2 += wi * wi;
    }
    mean.se = m > 1 ? std::sqrt(ss / (m - 1.0) / m) : 0.0;
    weighted.se = (m > 1 && w2 < 1.0) ? std::sqrt(wss / (1.0 - w2)) : 0.0;
    mean.n = weighted.n = slopes.size();
    mean.buyers = weighted.buyers = wtot;
    mean.defined = weighted.defined = true;
  } else {
    mean.note = weighted.note = "no market with a defined slope";
  }
  out.push_back(mean);
  out.push_back(weighted);
  return out;
}

std::vector<AlphaEstimate> alpha_by_year(FlowPanel panel, double beta1) {
  adjust_flows(panel, beta1);
  return estimate_alpha(panel, EstimateScope::per_year);
}

std::vector<BinnedMean> binned_flow_shares(const FlowPanel& panel, std::size_t bins) {
  if (bins == 0) throw InvalidInput("need at least one bin");
  std::vector<std::pair<double, double>> obs;
  for (const auto& c : panel.cells) {
    if (c.excluded) continue;
    for (const auto& f : c.firms) obs.emplace_back(f.lagged_share, f.flow_share);
  }
  std::sort(obs.begin(), obs.end());
  std::vector<BinnedMean> out;
  if (obs.empty()) return out;
  for (std::size_t b = 0; b < bins; ++b) {
    std::size_t lo = obs.size() * b / bins;
    std::size_t hi = obs.size() * (b + 1) / bins;
    if (hi <= lo) continue;
    BinnedMean bm;
    for (std::size_t i = lo; i < hi; ++i) {
      bm.lagged_share += obs[i].first;
      bm.flow_share += obs[i].second;
    }
    bm.count = hi - lo;
    bm.lagged_share /= static_cast<double>(bm.count);
    bm.flow_share /= static_cast<double>(bm.count);
    out.push_back(bm);
  }
  return out;
}

std::string alpha_csv(const std::vector<AlphaEstimate>& estimates, const char* key_column) {
  std::ostringstream os;
  os.precision(10);
  os << key_column << ",alpha_hat,se,n\n";
  for (const auto& e : estimates) {
    if (e.label == "mean" || e.label == "buyer_weighted_mean") continue;
    os << e.label << ',';
    if (e.defined) {
      os << e.alpha_hat << ',' << e.se;
    } else {
      os << "nan,nan";
    }
    os << ',' << e.n << '\n';
  }
  return os.str();
}

std::string diagnostics_json(const PanelDiagnostics& d, double beta1) {
  nlohmann::json j;
  j["beta1"] = beta1;
  j["rows"] = d.rows;
  j["duplicate_rows"] = d.duplicate_rows;
  j["dropped_buyers"] = d.dropped_buyers;
  j["threshold_firm_years"] = d.threshold_firm_years;
  j["clipped_cells"] = d.clipped_cells;
  j["adjusted_cells"] = d.adjusted_cells;
  j["clipped_share"] = d.clipped_share();
  nlohmann::json ex = nlohmann::json::array();
  for (const auto& e : d.excluded) {
    ex.push_back({{"market_id", e.market_id}, {"year", e.year}, {"reason", e.reason}});
  }
  j["excluded_markets"] = ex;
  return j.dump(2);
}

}  // namespace fricmatch
