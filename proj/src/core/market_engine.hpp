#pragma once

// Event-driven finite market shared by the simulator and the panel generator.

#include <cstdint>
#include <functional>
#include <random>
#include <vector>

#include "fricmatch/frictions.hpp"

namespace fricmatch::detail {

/// A firm sits at a fixed coordinate (hi == lo) or, for a continuum cell,
/// at a coordinate drawn uniformly in [lo, hi) for each new match.
struct EngineFirm {
  double lo = 0.0;
  double hi = 0.0;
  double weight = 1.0;  // share of the firm measure; meeting weight when alpha = 0
};

struct EngineAgent {
  std::uint64_t id = 0;
  double x = 0.0;
  int firm = -1;
  double dist = 0.0;  // distance to the current firm's coordinate
};

struct EventCounts {
  std::uint64_t entries = 0;
  std::uint64_t exits = 0;
  std::uint64_t meetings = 0;
  std::uint64_t matches = 0;   // unmatched agent accepts
  std::uint64_t switches = 0;  // matched agent moves to a strictly better firm
};

class MarketEngine {
public:
  using TypeSampler = std::function<double(std::mt19937_64&)>;

  /// Starts at time 0 with `n_agents` unmatched agents.
  MarketEngine(std::vector<EngineFirm> firms, TypeSampler sampler, FrictionParams fr,
               std::size_t n_agents, std::uint64_t seed);

  /// Meeting weights are recomputed every `interval` time units (0: only on refresh_rates()).
  void set_refresh_interval(double interval);
  void set_alpha(double alpha);
  /// Freezes the firm-draw weights alpha * (matched share) + (1 - alpha) * weight.
  void refresh_rates();

  void run_until(double t_end);
  double time() const noexcept { return t_; }

  /// Zeroes the time-area accumulators at the current time.
  void begin_measurement();
  /// Time integral of matched counts per firm since begin_measurement().
  std::vector<double> firm_areas();
  double unmatched_area();
  double population_area();
  double measured_time() const noexcept { return t_ - measure_start_; }

  const std::vector<EngineAgent>& matched() const noexcept { return matched_; }
  const std::vector<EngineAgent>& unmatched() const noexcept { return unmatched_; }
  const std::vector<std::int64_t>& firm_counts() const noexcept { return counts_; }
  const EventCounts& events() const noexcept { return events_; }
  std::mt19937_64& rng() noexcept { return rng_; }

private:
  void add_agent();
  std::size_t draw_firm();
  double firm_coordinate(std::size_t f);
  void touch_firm(std::size_t f);
  void touch_pool();

  std::vector<EngineFirm> firms_;
  TypeSampler sampler_;
  FrictionParams fr_;
  double n_target_;
  std::mt19937_64 rng_;

  std::vector<EngineAgent> unmatched_;
  std::vector<EngineAgent> matched_;
  std::vector<std::int64_t> counts_;
  std::vector<double> draw_cdf_;
  std::uint64_t next_id_ = 0;

  double t_ = 0.0;
  double refresh_interval_ = 0.0;
  double next_refresh_ = 0.0;

  double measure_start_ = 0.0;
  std::vector<double> area_;
  std::vector<double> area_time_;
  double unmatched_area_ = 0.0;
  double population_area_ = 0.0;
  double pool_time_ = 0.0;

  EventCounts events_;
};

}  // namespace fricmatch::detail
