#pragma once

#include <cstdint>
#include <optional>
#include <string>
#include <vector>

#include "fricmatch/frictions.hpp"
#include "fricmatch/preference.hpp"

namespace fricmatch {

/// Finite-population market. Either two firms (A at 0, B at 1/2; agents of
/// type A at 0 with probability p_a, else at 1/2) or one firm per grid cell with
/// agent types at cell centres drawn from ell and firm coordinates uniform
/// within each cell.
struct SimConfig {
  std::size_t n_agents = 50000;
  std::optional<double> two_firm_p_a;       // set for the two-firm market
  std::optional<PreferenceDistribution> ell;  // set for the continuum market
  FrictionParams frictions;
  double horizon = 25.0;
  double burn_in = 5.0;
  std::uint64_t seed = 1;
  std::size_t replications = 8;
  double batch_interval = 0.0;  // 0: 0.01 / mu
  double max_meetings_per_lifetime = 1e4;
  unsigned threads = 1;

  void validate() const;
  double effective_batch_interval() const {
    return batch_interval > 0.0 ? batch_interval : 0.01 / frictions.mu;
  }
  std::size_t firm_count() const;
  /// Firm coordinate (two-firm) or cell centre (continuum).
  std::vector<double> firm_centers() const;
};

struct SimEventTotals {
  std::uint64_t entries = 0;
  std::uint64_t exits = 0;
  std::uint64_t meetings = 0;
  std::uint64_t matches = 0;
  std::uint64_t switches = 0;
};

struct SimResult {
  std::vector<double> firm_centers;
  std::vector<double> shares;  // time-averaged fraction of matched agents per firm
  std::vector<double> share_se;
  double unmatched_fraction = 0.0;  // time-averaged unmatched / population
  double unmatched_se = 0.0;
  double population_mean = 0.0;
  double population_se = 0.0;
  std::size_t replications = 0;
  SimEventTotals events;
  std::vector<std::vector<double>> replicate_shares;  // one row per replication
};

/// One replication with `config.seed`.
SimResult simulate(const SimConfig& config);

/// `k` replications with seeds seed + i, aggregated in index order; standard
/// errors are across-replication standard deviations over sqrt(k).
SimResult replicate(const SimConfig& config, std::size_t k);

/// Sums per-firm shares (and combines SEs from replicate rows) into `bins`
/// equal groups of consecutive firms.
struct BinnedShares {
  std::vector<double> mass;
  std::vector<double> se;
};
BinnedShares bin_shares(const SimResult& result, std::size_t bins);
/// Cell masses of a share density, grouped the same way.
std::vector<double> bin_profile(const std::vector<double>& density, std::size_t bins);

std::string sim_result_json(const SimResult& result);
std::string sim_result_csv(const SimResult& result);

}  // namespace fricmatch
