#include "fricmatch/simulator.hpp"

#include <cmath>
#include <sstream>
#include <thread>

#include <json.hpp>

#include "fricmatch/error.hpp"
#include "market_engine.hpp"

namespace fricmatch {

void SimConfig::validate() const {
  frictions.validate();
  if (n_agents < 100) throw InvalidInput("n_agents must be >= 100");
  if (two_firm_p_a.has_value() == ell.has_value()) {
    throw InvalidInput("choose exactly one of a two-firm market or a preference density");
  }
  if (two_firm_p_a && !(*two_firm_p_a >= 0.0 && *two_firm_p_a <= 1.0)) {
    throw InvalidInput("p_a must lie in [0, 1]");
  }
  if (!(burn_in > 0.0 && horizon > burn_in)) {
    throw InvalidInput("need horizon > burn_in > 0");
  }
  if (replications < 1) throw InvalidInput("replications must be >= 1");
  if (batch_interval < 0.0) throw InvalidInput("batch_interval must be >= 0");
  double meetings = (frictions.K + 1.0) * frictions.lambda_tot / frictions.mu;
  if (meetings > max_meetings_per_lifetime) {
    throw InvalidInput("expected meetings per lifetime " + std::to_string(meetings) +
                       " exceed the cap " + std::to_string(max_meetings_per_lifetime));
  }
}

std::size_t SimConfig::firm_count() const { return two_firm_p_a ? 2 : ell->size(); }

std::vector<double> SimConfig::firm_centers() const {
  if (two_firm_p_a) return {0.0, 0.5};
  return ell->grid().points();
}

namespace {

struct Replica {
  std::vector<double> shares;
  double unmatched = 0.0;
  double population = 0.0;
  detail::EventCounts events;
};

Replica run_one(const SimConfig& cfg, std::uint64_t seed) {
  std::vector<detail::EngineFirm> firms;
  detail::MarketEngine::TypeSampler sampler;
  if (cfg.two_firm_p_a) {
    firms = {{0.0, 0.0, 0.5}, {0.5, 0.5, 0.5}};
    const double p = *cfg.two_firm_p_a;
    sampler = [p](std::mt19937_64& rng) {
      std::uniform_real_distribution<double> unif(0.0, 1.0);
      return unif(rng) < p ? 0.0 : 0.5;
    };
  } else {
    const PreferenceDistribution& ell = *cfg.ell;
    const std::size_t n = ell.size();
    const double h = 1.0 / static_cast<double>(n);
    for (std::size_t j = 0; j < n; ++j) {
      firms.push_back({static_cast<double>(j) * h, static_cast<double>(j + 1) * h, h});
    }
    sampler = [ell](std::mt19937_64& rng) { return ell.grid().point(ell.sample_cell(rng)); };
  }

  detail::MarketEngine eng(std::move(firms), sampler, cfg.frictions, cfg.n_agents, seed);
  eng.set_refresh_interval(cfg.effective_batch_interval());
  eng.run_until(cfg.burn_in);
  eng.begin_measurement();
  eng.run_until(cfg.horizon);

  Replica rep;
  rep.shares = eng.firm_areas();
  double total = 0.0;
  for (double a : rep.shares) total += a;
  if (total > 0.0) {
    for (double& a : rep.shares) a /= total;
  }
  double pop = eng.population_area();
  rep.unmatched = pop > 0.0 ? eng.unmatched_area() / pop : 0.0;
  rep.population = pop / eng.measured_time();
  rep.events = eng.events();
  return rep;
}

void mean_se(const std::vector<double>& xs, double& mean, double& se) {
  const double k = static_cast<double>(xs.size());
  mean = 0.0;
  for (double x : xs) mean += x;
  mean /= k;
  if (xs.size() < 2) {
    se = 0.0;
    return;
  }
  double ss = 0.0;
  for (double x : xs) ss += (x - mean) * (x - mean);
  se = std::sqrt(ss / (k - 1.0)) / std::sqrt(k);
}

}  // namespace

SimResult simulate(const SimConfig& config) {
  SimConfig one = config;
  one.replications = 1;
  return replicate(one, 1);
}

SimResult replicate(const SimConfig& config, std::size_t k) {
  config.validate();
  if (k < 1) throw InvalidInput("need at least one replication");
  std::vector<Replica> reps(k);
  const unsigned threads = std::max(1u, std::min<unsigned>(config.threads, static_cast<unsigned>(k)));
  if (threads == 1) {
    for (std::size_t i = 0; i < k; ++i) reps[i] = run_one(config, config.seed + i);
  } else {
    std::vector<std::thread> pool;
    for (unsigned w = 0; w < threads; ++w) {
      pool.emplace_back([&, w] {
        for (std::size_t i = w; i < k; i += threads) reps[i] = run_one(config, config.seed + i);
      });
    }
    for (auto& t : pool) t.join();
  }

  SimResult out;
  out.firm_centers = config.firm_centers();
  out.replications = k;
  const std::size_t nf = out.firm_centers.size();
  out.shares.resize(nf);
  out.share_se.resize(nf);
  std::vector<double> col(k);
  for (std::size_t f = 0; f < nf; ++f) {
    for (std::size_t i = 0; i < k; ++i) col[i] = reps[i].shares[f];
    mean_se(col, out.shares[f], out.share_se[f]);
  }
  for (std::size_t i = 0; i < k; ++i) col[i] = reps[i].unmatched;
  mean_se(col, out.unmatched_fraction, out.unmatched_se);
  for (std::size_t i = 0; i < k; ++i) col[i] = reps[i].population;
  mean_se(col, out.population_mean, out.population_se);
  for (const auto& r : reps) {
    out.events.entries += r.events.entries;
    out.events.exits += r.events.exits;
    out.events.meetings += r.events.meetings;
    out.events.matches += r.events.matches;
    out.events.switches += r.events.switches;
    out.replicate_shares.push_back(r.shares);
  }
  return out;
}

BinnedShares bin_shares(const SimResult& result, std::size_t bins) {
  const std::size_t nf = result.shares.size();
  if (bins == 0 || nf % bins != 0) throw InvalidInput("bin count must divide the firm count");
  const std::size_t per = nf / bins;
  const std::size_t k = result.replicate_shares.size();
  BinnedShares out;
  std::vector<double> col(k);
  for (std::size_t b = 0; b < bins; ++b) {
    for (std::size_t i = 0; i < k; ++i) {
      double m = 0.0;
      for (std::size_t f = b * per; f < (b + 1) * per; ++f) m += result.replicate_shares[i][f];
      col[i] = m;
    }
    double mean = 0.0, se = 0.0;
    mean_se(col, mean, se);
    out.mass.push_back(mean);
    out.se.push_back(se);
  }
  return out;
}

std::vector<double> bin_profile(const std::vector<double>& density, std::size_t bins) {
  const std::size_t n = density.size();
  if (bins == 0 || n % bins != 0) throw InvalidInput("bin count must divide the grid size");
  const std::size_t per = n / bins;
  std::vector<double> out(bins, 0.0);
  for (std::size_t j = 0; j < n; ++j) out[j / per] += density[j] / static_cast<double>(n);
  return out;
}

std::string sim_result_json(const SimResult& r) {
  nlohmann::json j;
  j["firm_centers"] = r.firm_centers;
  j["shares"] = r.shares;
  j["share_se"] = r.share_se;
  j["unmatched_fraction"] = r.unmatched_fraction;
  j["unmatched_se"] = r.unmatched_se;
  j["population_mean"] = r.population_mean;
  j["population_se"] = r.population_se;
  j["replications"] = r.replications;
  j["events"] = {{"entries", r.events.entries},
                 {"exits", r.events.exits},
                 {"meetings", r.events.meetings},
                 {"matches", r.events.matches},
                 {"switches", r.events.switches}};
  return j.dump(2);
}

std::string sim_result_csv(const SimResult& r) {
  std::ostringstream os;
  os.precision(17);
  os << "cell_center,share,se\n";
  for (std::size_t f = 0; f < r.shares.size(); ++f) {
    os << r.firm_centers[f] << ',' << r.shares[f] << ',' << r.share_se[f] << '\n';
  }
  return os.str();
}

}  // namespace fricmatch
