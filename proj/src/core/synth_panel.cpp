#include <algorithm>
#include <cmath>
#include <cstdio>
#include <ostream>
#include <random>

#include "fricmatch/error.hpp"
#include "fricmatch/estimation.hpp"
#include "market_engine.hpp"

namespace fricmatch {

void SynthConfig::validate() const {
  frictions.validate();
  if (n_markets < 1) throw InvalidInput("n_markets must be >= 1");
  if (firms_per_market < 2) throw InvalidInput("firms_per_market must be >= 2");
  if (buyers_per_firm < 1) throw InvalidInput("buyers_per_firm must be >= 1");
  if (years < 1) throw InvalidInput("years must be >= 1");
  if (alpha_by_year.empty()) throw InvalidInput("alpha_by_year is empty");
  if (alpha_by_year.size() != 1 && alpha_by_year.size() != years) {
    throw InvalidInput("alpha_by_year needs one value or one per year");
  }
  for (double a : alpha_by_year) {
    if (!(a >= 0.0 && a <= 1.0)) throw InvalidInput("alpha values must lie in [0, 1]");
  }
  if (!(beta1 > 0.0 && beta1 <= 1.0)) throw InvalidInput("beta1 must lie in (0, 1]");
  if (burn_in < 0.0) throw InvalidInput("burn_in must be >= 0");
  if (!(value_log_sd >= 0.0)) throw InvalidInput("value_log_sd must be >= 0");
  if (!ell) throw InvalidInput("synthetic panel needs a preference density");
}

double SynthConfig::alpha_in_year(std::size_t t) const {
  return alpha_by_year[std::min(t, alpha_by_year.size() - 1)];
}

void synth_panel(const SynthConfig& cfg, const std::function<void(MarketLinks&&)>& sink) {
  cfg.validate();
  const Grid grid(cfg.ell_grid);
  const PreferenceDistribution ell = make_preference(*cfg.ell, grid);
  const std::size_t nf = cfg.firms_per_market;
  const double twin = (1.0 - cfg.beta1) / cfg.beta1;
  const double panel_fraction = 1.0 / (1.0 + twin);
  const double n_agents = static_cast<double>(nf * cfg.buyers_per_firm) / panel_fraction /
                          cfg.frictions.matched_fraction();
  // whole years so that snapshots and rate refreshes coincide
  const double burn = std::ceil(cfg.burn_in > 0.0 ? cfg.burn_in : 5.0 / cfg.frictions.mu);
  const double cell = grid.spacing();

  for (std::size_t m = 0; m < cfg.n_markets; ++m) {
    std::seed_seq seq{static_cast<std::uint32_t>(cfg.seed), static_cast<std::uint32_t>(cfg.seed >> 32),
                      static_cast<std::uint32_t>(m)};
    std::mt19937_64 setup(seq);
    std::uniform_real_distribution<double> unif(0.0, 1.0);

    std::vector<double> pos(nf);
    for (double& p : pos) p = unif(setup);
    std::sort(pos.begin(), pos.end());
    std::vector<detail::EngineFirm> firms;
    for (double p : pos) firms.push_back({p, p, 1.0});
    if (twin > 0.0) {
      for (double p : pos) firms.push_back({p, p, twin});
    }
    auto sampler = [ell, cell](std::mt19937_64& rng) {
      std::uniform_real_distribution<double> within(0.0, cell);
      return static_cast<double>(ell.sample_cell(rng)) * cell + within(rng);
    };
    FrictionParams fr = cfg.frictions;
    fr.alpha = cfg.alpha_in_year(0);
    detail::MarketEngine eng(std::move(firms), sampler, fr,
                             static_cast<std::size_t>(std::llround(n_agents)), setup());
    eng.set_refresh_interval(1.0);
    std::mt19937_64 values(setup());
    std::normal_distribution<double> lognormal(cfg.value_log_mean, cfg.value_log_sd);

    MarketLinks out;
    out.market_id = "m" + std::to_string(m);
    for (std::size_t f = 0; f < nf; ++f) out.firm_names.push_back("f" + std::to_string(f));

    eng.run_until(burn);
    for (std::size_t t = 0; t < cfg.years; ++t) {
      eng.run_until(burn + static_cast<double>(t));
      const int year = cfg.first_year + static_cast<int>(t);
      std::vector<MarketLinks::Link> snap;
      for (const auto& a : eng.matched()) {
        if (a.firm < 0 || static_cast<std::size_t>(a.firm) >= nf) continue;
        snap.push_back({year, static_cast<std::uint32_t>(a.firm), a.id, 0.0});
      }
      std::sort(snap.begin(), snap.end(), [](const auto& a, const auto& b) {
        return a.firm != b.firm ? a.firm < b.firm : a.buyer < b.buyer;
      });
      for (auto& l : snap) {
        l.value = std::round(std::exp(lognormal(values)) * 100.0) / 100.0;
        if (l.value <= 0.0) l.value = 0.01;
        if (cfg.min_value > 0.0 && l.value < cfg.min_value) continue;
        out.links.push_back(l);
      }
      // flows observed at the next snapshot use the next year's slope
      eng.set_alpha(cfg.alpha_in_year(t + 1));
      eng.refresh_rates();
    }
    sink(std::move(out));
  }
}

void synth_panel_csv(const SynthConfig& cfg, std::ostream& out) {
  write_transaction_header(out);
  synth_panel(cfg, [&out](MarketLinks&& m) {
    for (const auto& l : m.links) {
      char value[32];
      std::snprintf(value, sizeof value, "%.2f", l.value);
      out << l.year << ',' << m.market_id << ',' << m.firm_names[l.firm] << ",b" << l.buyer << ','
          << value << '\n';
    }
  });
}

FlowPanel synth_flow_panel(const SynthConfig& cfg, const IngestOptions& opts) {
  FlowPanel panel;
  synth_panel(cfg, [&](MarketLinks&& m) {
    auto cells = market_flows(std::move(m), opts, panel.diagnostics);
    for (auto& c : cells) panel.cells.push_back(std::move(c));
  });
  return panel;
}

}  // namespace fricmatch
