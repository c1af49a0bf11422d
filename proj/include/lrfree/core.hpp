#pragma once

#include <algorithm>
#include <cstdint>
#include <memory>
#include <numeric>
#include <random>
#include <span>
#include <string>
#include <string_view>
#include <vector>

#include "lrfree/errors.hpp"
#include "lrfree/rng.hpp"

namespace lrfree {

// Per-base running statistics shared by every meta-learner strategy.
// `potential` is strategy-specific: a balancing potential d*sqrt(n), an
// upper confidence bound, or a selection probability.
struct BaseStats {
  std::uint64_t pulls = 0;     // times this base was played
  double cum_reward = 0.0;     // sum of normalized episodic returns
  double regret_coeff = 1.0;   // current regret-coefficient estimate
  double potential = 0.0;

  double mean_reward() const {
    return pulls == 0 ? 0.0 : cum_reward / static_cast<double>(pulls);
  }
};

// Shared meta-learner state over m bases. The active set only ever shrinks;
// only Classic Balancing eliminates, every other strategy keeps it full.
struct MetaState {
  std::vector<BaseStats> stats;
  std::vector<bool> active;
  std::uint64_t step = 0;  // total updates applied so far

  explicit MetaState(std::size_t m) : stats(m), active(m, true) {
    if (m == 0) throw ConfigError("meta state requires at least one base");
  }

  std::size_t base_count() const { return stats.size(); }

  std::size_t active_count() const {
    std::size_t k = 0;
    for (bool a : active) k += a ? 1 : 0;
    return k;
  }

  bool is_active(std::size_t i) const { return i < active.size() && active[i]; }
};

struct NormalizedReturn {
  double value = 0.0;  // always in [0, 1]
};

// Environment-declared min/max episodic return.
struct ReturnBounds {
  double lo = 0.0;
  double hi = 1.0;
};

inline NormalizedReturn normalize_return(std::span<const double> rewards,
                                         ReturnBounds bounds) {
  if (!(bounds.hi > bounds.lo))
    throw ConfigError("return bounds: hi must be greater than lo");
  const double sum = std::accumulate(rewards.begin(), rewards.end(), 0.0);
  const double scaled = (sum - bounds.lo) / (bounds.hi - bounds.lo);
  return NormalizedReturn{std::clamp(scaled, 0.0, 1.0)};
}

// A meta-learner strategy: the sample/update rule pair. `update` is called
// after the core has already folded the normalized return into the base's
// pulls and cum_reward.
class Strategy {
 public:
  virtual ~Strategy() = default;

  virtual std::string_view name() const = 0;

  // Called once when the state is created, before any episode.
  virtual void init(MetaState&) {}

  virtual std::size_t sample(const MetaState& state,
                             std::mt19937_64& rng) const = 0;

  virtual void update(MetaState& state, std::size_t base,
                      double normalized_return) = 0;

  // Non-fatal events raised during updates (e.g. the Classic Balancing
  // empty-active-set fallback).
  const std::vector<std::string>& warnings() const { return warnings_; }

 protected:
  std::vector<std::string> warnings_;
};

// The sample/update interface the RL loop talks to. Owns the meta state,
// normalizes episodic returns against the declared bounds, keeps the shared
// statistics, and delegates the strategy-specific rule.
class MetaLearner {
 public:
  MetaLearner(std::unique_ptr<Strategy> strategy, std::size_t base_count,
              ReturnBounds bounds)
      : strategy_(std::move(strategy)), state_(base_count), bounds_(bounds) {
    if (!strategy_) throw ContractError("meta learner requires a strategy");
    strategy_->init(state_);
  }

  std::size_t sample(std::mt19937_64& rng) const {
    if (state_.active_count() == 0)
      throw ConfigError("all bases eliminated: no active base to sample");
    const std::size_t i = strategy_->sample(state_, rng);
    if (!state_.is_active(i))
      throw ContractError("strategy sampled an inactive base");
    return i;
  }

  void update(std::size_t base, std::span<const double> episode_rewards) {
    if (base >= state_.base_count() || !state_.active[base])
      throw ContractError("update targets a base outside the active set");
    if (episode_rewards.empty())
      throw ContractError("update requires a non-empty episode");
    update_normalized(base, normalize_return(episode_rewards, bounds_).value);
  }

  // Entry point for callers that already hold a normalized return
  // (scripted bases emit those directly).
  void update_normalized(std::size_t base, double normalized_return) {
    if (base >= state_.base_count() || !state_.active[base])
      throw ContractError("update targets a base outside the active set");
    BaseStats& bs = state_.stats[base];
    bs.pulls += 1;
    bs.cum_reward += normalized_return;
    state_.step += 1;
    strategy_->update(state_, base, normalized_return);
  }

  const MetaState& state() const { return state_; }
  const Strategy& strategy() const { return *strategy_; }
  ReturnBounds bounds() const { return bounds_; }
  const std::vector<std::string>& warnings() const {
    return strategy_->warnings();
  }

 private:
  std::unique_ptr<Strategy> strategy_;
  MetaState state_;
  ReturnBounds bounds_;
};

}  // namespace lrfree
