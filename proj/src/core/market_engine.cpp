#include "market_engine.hpp"

#include <algorithm>
#include <limits>

#include "fricmatch/error.hpp"
#include "fricmatch/grid.hpp"

namespace fricmatch::detail {

MarketEngine::MarketEngine(std::vector<EngineFirm> firms, TypeSampler sampler, FrictionParams fr,
                           std::size_t n_agents, std::uint64_t seed)
    : firms_(std::move(firms)),
      sampler_(std::move(sampler)),
      fr_(fr),
      n_target_(static_cast<double>(n_agents)),
      rng_(seed) {
  fr_.validate();
  if (firms_.empty()) throw InvalidInput("market needs at least one firm");
  double total = 0.0;
  for (const auto& f : firms_) {
    if (!(f.weight > 0.0)) throw InvalidInput("firm weights must be > 0");
    total += f.weight;
  }
  for (auto& f : firms_) f.weight /= total;
  counts_.assign(firms_.size(), 0);
  area_.assign(firms_.size(), 0.0);
  area_time_.assign(firms_.size(), 0.0);
  unmatched_.reserve(n_agents * 2);
  matched_.reserve(n_agents * 2);
  for (std::size_t i = 0; i < n_agents; ++i) add_agent();
  refresh_rates();
}

void MarketEngine::set_refresh_interval(double interval) {
  if (interval < 0.0) throw InvalidInput("refresh interval must be >= 0");
  refresh_interval_ = interval;
  next_refresh_ = interval > 0.0 ? t_ + interval : std::numeric_limits<double>::infinity();
}

void MarketEngine::set_alpha(double alpha) {
  if (!(alpha >= 0.0 && alpha <= 1.0)) throw InvalidInput("alpha must lie in [0, 1]");
  fr_.alpha = alpha;
}

void MarketEngine::refresh_rates() {
  const double matched = static_cast<double>(matched_.size());
  draw_cdf_.resize(firms_.size());
  double acc = 0.0;
  for (std::size_t f = 0; f < firms_.size(); ++f) {
    double share = matched > 0.0 ? static_cast<double>(counts_[f]) / matched : firms_[f].weight;
    acc += fr_.alpha * share + (1.0 - fr_.alpha) * firms_[f].weight;
    draw_cdf_[f] = acc;
  }
}

void MarketEngine::add_agent() {
  EngineAgent a;
  a.id = next_id_++;
  a.x = sampler_(rng_);
  unmatched_.push_back(a);
}

std::size_t MarketEngine::draw_firm() {
  std::uniform_real_distribution<double> unif(0.0, draw_cdf_.back());
  double u = unif(rng_);
  auto it = std::upper_bound(draw_cdf_.begin(), draw_cdf_.end(), u);
  auto f = static_cast<std::size_t>(it - draw_cdf_.begin());
  if (f >= firms_.size()) f = firms_.size() - 1;
  // a zero-probability firm can only be hit through rounding; step past it
  while (f > 0 && draw_cdf_[f] == draw_cdf_[f - 1]) --f;
  return f;
}

double MarketEngine::firm_coordinate(std::size_t f) {
  const auto& firm = firms_[f];
  if (firm.hi <= firm.lo) return firm.lo;
  std::uniform_real_distribution<double> unif(firm.lo, firm.hi);
  return unif(rng_);
}

void MarketEngine::touch_firm(std::size_t f) {
  area_[f] += static_cast<double>(counts_[f]) * (t_ - area_time_[f]);
  area_time_[f] = t_;
}

void MarketEngine::touch_pool() {
  double dt = t_ - pool_time_;
  unmatched_area_ += static_cast<double>(unmatched_.size()) * dt;
  population_area_ += static_cast<double>(unmatched_.size() + matched_.size()) * dt;
  pool_time_ = t_;
}

void MarketEngine::run_until(double t_end) {
  const double mu = fr_.mu;
  const double lt = fr_.lambda_tot;
  const double K = fr_.K;
  std::exponential_distribution<double> expo(1.0);
  std::uniform_real_distribution<double> unif(0.0, 1.0);

  while (t_ < t_end) {
    const double nu = static_cast<double>(unmatched_.size());
    const double nm = static_cast<double>(matched_.size());
    const double r_entry = mu * n_target_;
    const double r_exit_u = mu * nu;
    const double r_exit_m = mu * nm;
    const double r_meet_u = K * lt * nu;
    const double r_meet_m = lt * nm;
    const double total = r_entry + r_exit_u + r_exit_m + r_meet_u + r_meet_m;

    double t_next = t_ + expo(rng_) / total;
    if (next_refresh_ <= t_end && t_next >= next_refresh_) {
      // memoryless clocks: stop at the refresh and redraw afterwards
      t_ = next_refresh_;
      refresh_rates();
      next_refresh_ += refresh_interval_;
      continue;
    }
    if (t_next >= t_end) {
      t_ = t_end;
      break;
    }
    t_ = t_next;

    double u = unif(rng_) * total;
    if (u < r_entry) {
      touch_pool();
      add_agent();
      ++events_.entries;
    } else if ((u -= r_entry) < r_exit_u) {
      touch_pool();
      std::uniform_int_distribution<std::size_t> pick(0, unmatched_.size() - 1);
      std::size_t i = pick(rng_);
      unmatched_[i] = unmatched_.back();
      unmatched_.pop_back();
      ++events_.exits;
    } else if ((u -= r_exit_u) < r_exit_m) {
      touch_pool();
      std::uniform_int_distribution<std::size_t> pick(0, matched_.size() - 1);
      std::size_t i = pick(rng_);
      auto f = static_cast<std::size_t>(matched_[i].firm);
      touch_firm(f);
      --counts_[f];
      matched_[i] = matched_.back();
      matched_.pop_back();
      ++events_.exits;
    } else if ((u -= r_exit_m) < r_meet_u) {
      touch_pool();
      std::uniform_int_distribution<std::size_t> pick(0, unmatched_.size() - 1);
      std::size_t i = pick(rng_);
      std::size_t f = draw_firm();
      EngineAgent a = unmatched_[i];
      a.firm = static_cast<int>(f);
      a.dist = circular_distance(a.x, firm_coordinate(f));
      unmatched_[i] = unmatched_.back();
      unmatched_.pop_back();
      touch_firm(f);
      ++counts_[f];
      matched_.push_back(a);
      ++events_.meetings;
      ++events_.matches;
    } else {
      std::uniform_int_distribution<std::size_t> pick(0, matched_.size() - 1);
      std::size_t i = pick(rng_);
      std::size_t f = draw_firm();
      double d = circular_distance(matched_[i].x, firm_coordinate(f));
      ++events_.meetings;
      if (d < matched_[i].dist) {
        auto old = static_cast<std::size_t>(matched_[i].firm);
        touch_firm(old);
        --counts_[old];
        touch_firm(f);
        ++counts_[f];
        matched_[i].firm = static_cast<int>(f);
        matched_[i].dist = d;
        ++events_.switches;
      }
    }
  }
}

void MarketEngine::begin_measurement() {
  measure_start_ = t_;
  std::fill(area_.begin(), area_.end(), 0.0);
  std::fill(area_time_.begin(), area_time_.end(), t_);
  unmatched_area_ = 0.0;
  population_area_ = 0.0;
  pool_time_ = t_;
}

std::vector<double> MarketEngine::firm_areas() {
  for (std::size_t f = 0; f < firms_.size(); ++f) touch_firm(f);
  return area_;
}

double MarketEngine::unmatched_area() {
  touch_pool();
  return unmatched_area_;
}

double MarketEngine::population_area() {
  touch_pool();
  return population_area_;
}

}  // namespace fricmatch::detail
