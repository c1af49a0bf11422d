#pragma once

#include <algorithm>
#include <cmath>
#include <cstdint>
#include <limits>
#include <memory>
#include <numbers>
#include <optional>
#include <sstream>
#include <string>
#include <string_view>
#include <vector>

#include "lrfree/core.hpp"
#include "lrfree/errors.hpp"
#include "lrfree/rng.hpp"

namespace lrfree {

enum class Exp3Mode { kSample, kArgmax };

// Hyperparameters shared by the six strategies. Fields left unset are
// resolved against the base count and the expected number of rounds:
//   exp3_eta     -> sqrt(ln m / (m * expected_rounds))
//   corral_eta   -> sqrt(m / expected_rounds)
//   corral_gamma -> 1 / expected_rounds
struct StrategyConfig {
  double delta = 0.05;          // confidence level
  double conf_scale = 1.0;      // confidence-width multiplier c
  double d_min = 1.0;           // regret-coefficient floor
  std::optional<double> exp3_eta;
  Exp3Mode exp3_mode = Exp3Mode::kSample;
  std::optional<double> corral_eta;
  std::optional<double> corral_gamma;
  double corral_eta_scale = 1.12;      // per-base step growth on threshold hit
  std::vector<double> putative_coeffs; // Classic Balancing fixed coefficients
  std::uint64_t expected_rounds = 1000;

  double resolved_exp3_eta(std::size_t m) const {
    if (exp3_eta) return *exp3_eta;
    const double n = static_cast<double>(std::max<std::uint64_t>(expected_rounds, 1));
    return std::sqrt(std::log(static_cast<double>(std::max<std::size_t>(m, 2))) /
                     (static_cast<double>(m) * n));
  }

  double resolved_corral_eta(std::size_t m) const {
    if (corral_eta) return *corral_eta;
    const double n = static_cast<double>(std::max<std::uint64_t>(expected_rounds, 1));
    return std::sqrt(static_cast<double>(m) / n);
  }

  double resolved_corral_gamma() const {
    if (corral_gamma) return *corral_gamma;
    return 1.0 / static_cast<double>(std::max<std::uint64_t>(expected_rounds, 1));
  }
};

// c * sqrt( ln( m * ln(max(n, e)) / delta ) / n ). The inner log is guarded
// below e so the outer log's argument stays >= m/delta > 1.
inline double confidence_width(std::uint64_t pulls, std::size_t m, double delta,
                               double conf_scale) {
  if (pulls == 0)
    throw ContractError("confidence_width: base must have been played once");
  const double n = static_cast<double>(pulls);
  const double inner = std::log(std::max(n, std::numbers::e));
  return conf_scale *
         std::sqrt(std::log(static_cast<double>(m) * inner / delta) / n);
}

namespace detail {

// Highest pessimistic average u_j/n_j - width(n_j) over played bases.
// Returns -inf when no base in `mask` has been played.
inline double best_pessimistic_mean(const MetaState& st,
                                    const StrategyConfig& cfg,
                                    bool active_only) {
  const std::size_t m = st.base_count();
  double best = -std::numeric_limits<double>::infinity();
  for (std::size_t j = 0; j < m; ++j) {
    if (active_only && !st.active[j]) continue;
    const BaseStats& bs = st.stats[j];
    if (bs.pulls == 0) continue;
    const double value =
        bs.mean_reward() - confidence_width(bs.pulls, m, cfg.delta, cfg.conf_scale);
    best = std::max(best, value);
  }
  return best;
}

inline std::size_t argmin_potential(const MetaState& st) {
  double best = std::numeric_limits<double>::infinity();
  std::size_t best_idx = st.base_count();
  for (std::size_t i = 0; i < st.base_count(); ++i) {
    if (!st.active[i]) continue;
    if (st.stats[i].potential < best) {
      best = st.stats[i].potential;
      best_idx = i;
    }
  }
  if (best_idx == st.base_count())
    throw ConfigError("all bases eliminated: no active base to sample");
  return best_idx;
}

inline std::size_t argmax_potential(const MetaState& st) {
  double best = -std::numeric_limits<double>::infinity();
  std::size_t best_idx = st.base_count();
  for (std::size_t i = 0; i < st.base_count(); ++i) {
    if (!st.active[i]) continue;
    if (st.stats[i].potential > best) {
      best = st.stats[i].potential;
      best_idx = i;
    }
  }
  if (best_idx == st.base_count())
    throw ConfigError("all bases eliminated: no active base to sample");
  return best_idx;
}

}  // namespace detail

// Doubling data-driven regret balancing. Plays the base with the lowest
// balancing potential d*sqrt(n); on a failed misspecification test the
// base's regret coefficient doubles.
class D3rbStrategy final : public Strategy {
 public:
  explicit D3rbStrategy(StrategyConfig cfg) : cfg_(std::move(cfg)) {}

  std::string_view name() const override { return "d3rb"; }

  void init(MetaState& state) override {
    for (BaseStats& bs : state.stats) {
      bs.regret_coeff = 1.0;
      bs.potential = 0.0;  // unplayed bases get a free round-robin pull
    }
  }

  std::size_t sample(const MetaState& state, std::mt19937_64&) const override {
    return detail::argmin_potential(state);
  }

  void update(MetaState& state, std::size_t base, double) override {
    BaseStats& bs = state.stats[base];
    const std::size_t m = state.base_count();
    const double n = static_cast<double>(bs.pulls);
    const double width =
        confidence_width(bs.pulls, m, cfg_.delta, cfg_.conf_scale);
    const double lhs =
        bs.mean_reward() + bs.regret_coeff * std::sqrt(n) / n + width;
    const double rhs = detail::best_pessimistic_mean(state, cfg_, false);
    if (lhs < rhs) bs.regret_coeff *= 2.0;
    bs.potential = bs.regret_coeff * std::sqrt(n);
  }

 private:
  StrategyConfig cfg_;
};

// Estimating data-driven regret balancing. Estimates the regret coefficient
// directly as the scaled gap to the best pessimistic average, floored at
// d_min; the potential is clipped into [old, 2*old] so it never more than
// doubles per round.
class Ed2rbStrategy final : public Strategy {
 public:
  explicit Ed2rbStrategy(StrategyConfig cfg) : cfg_(std::move(cfg)) {
    if (!(cfg_.d_min > 0.0))
      throw ConfigError("strategy.d_min: must be strictly positive");
  }

  std::string_view name() const override { return "ed2rb"; }

  void init(MetaState& state) override {
    for (BaseStats& bs : state.stats) {
      bs.regret_coeff = cfg_.d_min;
      bs.potential = 0.0;
    }
  }

  std::size_t sample(const MetaState& state, std::mt19937_64&) const override {
    return detail::argmin_potential(state);
  }

  void update(MetaState& state, std::size_t base, double) override {
    BaseStats& bs = state.stats[base];
    const std::size_t m = state.base_count();
    const double n = static_cast<double>(bs.pulls);
    const double width =
        confidence_width(bs.pulls, m, cfg_.delta, cfg_.conf_scale);
    const double rhs = detail::best_pessimistic_mean(state, cfg_, false);
    const double estimate = std::sqrt(n) * (rhs - width - bs.mean_reward());
    bs.regret_coeff = std::max(cfg_.d_min, estimate);
    // Alternative reading of the pseudocode keeps the confidence terms
    // outside the sqrt(n) product; we scale the whole gap as written above.
    const double candidate = bs.regret_coeff * std::sqrt(n);
    bs.potential = bs.potential > 0.0
                       ? std::clamp(candidate, bs.potential, 2.0 * bs.potential)
                       : candidate;
  }

 private:
  StrategyConfig cfg_;
};

// Regret-bound balancing with fixed putative coefficients: a base that fails
// the misspecification test is eliminated permanently.
class ClassicBalancingStrategy final : public Strategy {
 public:
  explicit ClassicBalancingStrategy(StrategyConfig cfg) : cfg_(std::move(cfg)) {}

  std::string_view name() const override { return "classic"; }

  void init(MetaState& state) override {
    if (cfg_.putative_coeffs.size() != state.base_count())
      throw ConfigError(
          "strategy.putative_coeffs: need exactly one coefficient per base");
    for (double d : cfg_.putative_coeffs)
      if (!(d > 0.0))
        throw ConfigError(
            "strategy.putative_coeffs: coefficients must be positive");
    for (std::size_t i = 0; i < state.base_count(); ++i) {
      state.stats[i].regret_coeff = cfg_.putative_coeffs[i];
      state.stats[i].potential = 0.0;
    }
  }

  std::size_t sample(const MetaState& state, std::mt19937_64&) const override {
    return detail::argmin_potential(state);
  }

  void update(MetaState& state, std::size_t base, double) override {
    const std::size_t m = state.base_count();
    const double rhs = detail::best_pessimistic_mean(state, cfg_, true);

    std::vector<std::size_t> failed;
    for (std::size_t k = 0; k < m; ++k) {
      if (!state.active[k]) continue;
      const BaseStats& bs = state.stats[k];
      if (bs.pulls == 0) continue;  // untestable until played once
      const double n = static_cast<double>(bs.pulls);
      const double width =
          confidence_width(bs.pulls, m, cfg_.delta, cfg_.conf_scale);
      const double lhs =
          bs.mean_reward() + bs.regret_coeff * std::sqrt(n) / n + width;
      if (lhs < rhs) failed.push_back(k);
    }

    if (!failed.empty() && failed.size() == state.active_count()) {
      // Elimination would empty the active set: keep the base with the
      // highest pessimistic average instead of halting the run.
      std::size_t keep = failed.front();
      double best = -std::numeric_limits<double>::infinity();
      for (std::size_t k : failed) {
        const BaseStats& bs = state.stats[k];
        const double value =
            bs.mean_reward() -
            confidence_width(bs.pulls, m, cfg_.delta, cfg_.conf_scale);
        if (value > best) {
          best = value;
          keep = k;
        }
      }
      warnings_.push_back(
          "classic balancing: every active base failed the misspecification "
          "test; retaining base " +
          std::to_string(keep) + " with the highest pessimistic average");
      std::erase(failed, keep);
    }

    for (std::size_t k : failed) state.active[k] = false;

    BaseStats& bs = state.stats[base];
    bs.potential = bs.regret_coeff * std::sqrt(static_cast<double>(bs.pulls));
  }

 private:
  StrategyConfig cfg_;
};

// Exponential-weights over bases. Scores take an importance-weighted loss
// for the played base; the distribution is the softmax of eta * scores.
class Exp3Strategy final : public Strategy {
 public:
  Exp3Strategy(StrategyConfig cfg, std::size_t m)
      : cfg_(std::move(cfg)),
        eta_(cfg_.resolved_exp3_eta(m)),
        scores_(m, 0.0),
        probs_(m, 1.0 / static_cast<double>(m)) {
    if (!(eta_ > 0.0))
      throw ConfigError("strategy.exp3_eta: must be strictly positive");
  }

  std::string_view name() const override { return "exp3"; }

  void init(MetaState& state) override { mirror_potentials(state); }

  std::size_t sample(const MetaState&, std::mt19937_64& rng) const override {
    if (cfg_.exp3_mode == Exp3Mode::kArgmax) {
      std::size_t best = 0;
      for (std::size_t i = 1; i < probs_.size(); ++i)
        if (probs_[i] > probs_[best]) best = i;
      return best;
    }
    return sample_discrete(rng, probs_);
  }

  void update(MetaState& state, std::size_t base, double normalized_return) override {
    const double loss = (1.0 - normalized_return) / probs_[base];
    for (std::size_t j = 0; j < scores_.size(); ++j)
      scores_[j] += 1.0 - (j == base ? loss : 0.0);

    double max_score = scores_[0];
    for (double s : scores_) max_score = std::max(max_score, s);
    double total = 0.0;
    for (std::size_t j = 0; j < scores_.size(); ++j) {
      const double w = std::max(std::exp(eta_ * (scores_[j] - max_score)),
                                std::numeric_limits<double>::min());
      probs_[j] = w;
      total += w;
    }
    for (double& p : probs_) p /= total;
    mirror_potentials(state);
  }

  const std::vector<double>& probs() const { return probs_; }
  const std::vector<double>& scores() const { return scores_; }
  double eta() const { return eta_; }

 private:
  void mirror_potentials(MetaState& state) const {
    for (std::size_t j = 0; j < probs_.size(); ++j)
      state.stats[j].potential = probs_[j];
  }

  StrategyConfig cfg_;
  double eta_;
  std::vector<double> scores_;
  std::vector<double> probs_;
};

// Corral: log-barrier online mirror descent over the base distribution with
// per-base step sizes, importance-weighted losses and gamma/m smoothing.
class CorralStrategy final : public Strategy {
 public:
  CorralStrategy(StrategyConfig cfg, std::size_t m)
      : cfg_(std::move(cfg)),
        gamma_(cfg_.resolved_corral_gamma()),
        probs_(m, 1.0 / static_cast<double>(m)),
        etas_(m, cfg_.resolved_corral_eta(m)),
        thresholds_(m, 2.0 * static_cast<double>(m)) {
    if (!(gamma_ > 0.0 && gamma_ < 1.0))
      throw ConfigError("strategy.corral_gamma: must lie in (0, 1)");
    if (!(etas_[0] > 0.0))
      throw ConfigError("strategy.corral_eta: must be strictly positive");
    if (!(cfg_.corral_eta_scale > 0.0))
      throw ConfigError("strategy.corral_eta_scale: must be strictly positive");
  }

  std::string_view name() const override { return "corral"; }

  void init(MetaState& state) override { mirror_potentials(state); }

  std::size_t sample(const MetaState&, std::mt19937_64& rng) const override {
    return sample_discrete(rng, probs_);
  }

  void update(MetaState& state, std::size_t base, double normalized_return) override {
    const std::size_t m = probs_.size();
    std::vector<double> loss(m, 0.0);
    loss[base] = (1.0 - normalized_return) / probs_[base];

    const double lambda = solve_log_barrier(loss);
    for (std::size_t j = 0; j < m; ++j)
      probs_[j] = 1.0 / (1.0 / probs_[j] + etas_[j] * (loss[j] - lambda));

    const double floor = gamma_ / static_cast<double>(m);
    for (double& p : probs_) p = (1.0 - gamma_) * p + floor;

    for (std::size_t j = 0; j < m; ++j) {
      if (1.0 / probs_[j] > thresholds_[j]) {
        thresholds_[j] *= 2.0;
        etas_[j] *= cfg_.corral_eta_scale;
      }
    }
    mirror_potentials(state);
  }

  const std::vector<double>& probs() const { return probs_; }
  const std::vector<double>& etas() const { return etas_; }
  const std::vector<double>& thresholds() const { return thresholds_; }
  double gamma() const { return gamma_; }

 private:
  // Bisects for the normalization multiplier lambda in
  // [min loss, max loss] such that sum_j 1/(1/p_j + eta_j (loss_j - lambda))
  // equals 1 within 1e-10. A bracket midpoint that drives any denominator
  // nonpositive counts as overshooting.
  double solve_log_barrier(const std::vector<double>& loss) const {
    double lo = loss[0], hi = loss[0];
    for (double l : loss) {
      lo = std::min(lo, l);
      hi = std::max(hi, l);
    }
    for (int iter = 0; iter < 200; ++iter) {
      const double mid = 0.5 * (lo + hi);
      double sum = 0.0;
      bool feasible = true;
      for (std::size_t j = 0; j < loss.size(); ++j) {
        const double den = 1.0 / probs_[j] + etas_[j] * (loss[j] - mid);
        if (!(den > 0.0)) {
          feasible = false;
          break;
        }
        sum += 1.0 / den;
      }
      if (feasible && std::abs(sum - 1.0) <= 1e-10) return mid;
      if (!feasible || sum > 1.0)
        hi = mid;
      else
        lo = mid;
    }
    std::ostringstream msg;
    msg << "corral: log-barrier bisection did not converge; probs=[";
    for (std::size_t j = 0; j < probs_.size(); ++j)
      msg << (j ? "," : "") << probs_[j];
    msg << "] loss=[";
    for (std::size_t j = 0; j < loss.size(); ++j)
      msg << (j ? "," : "") << loss[j];
    msg << "] bracket=[" << lo << "," << hi << "]";
    throw NumericalError(msg.str());
  }

  void mirror_potentials(MetaState& state) const {
    for (std::size_t j = 0; j < probs_.size(); ++j)
      state.stats[j].potential = probs_[j];
  }

  StrategyConfig cfg_;
  double gamma_;
  std::vector<double> probs_;
  std::vector<double> etas_;
  std::vector<double> thresholds_;
};

// Stationary optimism: potential is the mean plus sqrt(2 ln(1/delta) / n).
class UcbStrategy final : public Strategy {
 public:
  explicit UcbStrategy(StrategyConfig cfg) : cfg_(std::move(cfg)) {}

  std::string_view name() const override { return "ucb"; }

  void init(MetaState& state) override {
    for (BaseStats& bs : state.stats) bs.potential = 0.0;
  }

  std::size_t sample(const MetaState& state, std::mt19937_64&) const override {
    // Initialization round-robin: play each base once before trusting bounds.
    for (std::size_t i = 0; i < state.base_count(); ++i)
      if (state.active[i] && state.stats[i].pulls == 0) return i;
    return detail::argmax_potential(state);
  }

  void update(MetaState& state, std::size_t base, double) override {
    BaseStats& bs = state.stats[base];
    const double n = static_cast<double>(bs.pulls);
    bs.potential = bs.mean_reward() + std::sqrt(2.0 * std::log(1.0 / cfg_.delta) / n);
  }

 private:
  StrategyConfig cfg_;
};

inline const std::vector<std::string>& strategy_names() {
  static const std::vector<std::string> names = {"d3rb",   "ed2rb", "classic",
                                                 "exp3",   "corral", "ucb"};
  return names;
}

inline std::unique_ptr<Strategy> make_strategy(std::string_view name,
                                               const StrategyConfig& cfg,
                                               std::size_t base_count) {
  if (!(cfg.delta > 0.0 && cfg.delta < 1.0))
    throw ConfigError("strategy.delta: must lie in (0, 1)");
  if (!(cfg.conf_scale >= 0.0))
    throw ConfigError("strategy.conf_scale: must be nonnegative");
  if (name == "d3rb") return std::make_unique<D3rbStrategy>(cfg);
  if (name == "ed2rb") return std::make_unique<Ed2rbStrategy>(cfg);
  if (name == "classic") return std::make_unique<ClassicBalancingStrategy>(cfg);
  if (name == "exp3") return std::make_unique<Exp3Strategy>(cfg, base_count);
  if (name == "corral") return std::make_unique<CorralStrategy>(cfg, base_count);
  if (name == "ucb") return std::make_unique<UcbStrategy>(cfg);
  throw ConfigError("strategy.name: unknown strategy '" + std::string(name) +
                    "' (expected d3rb|ed2rb|classic|exp3|corral|ucb)");
}

}  // namespace lrfree
