#pragma once

#include <algorithm>
#include <cmath>
#include <cstdint>
#include <limits>
#include <random>
#include <span>
#include <vector>

#include "lrfree/errors.hpp"
#include "lrfree/rng.hpp"

namespace lrfree {

struct Transition {
  int state = 0;
  int action = 0;
  double reward = 0.0;
  int next_state = 0;
  bool terminal = false;
};

struct EpsilonSchedule {
  double start = 1.0;
  double decay = 0.995;  // multiplicative, applied per episode
  double floor = 0.05;
};

// Interface the episodic loop drives: pick actions during the episode, get
// per-step transitions, and a hook at episode end. Each agent learns only
// from episodes it played itself.
class RlAgent {
 public:
  virtual ~RlAgent() = default;
  virtual double learning_rate() const = 0;
  virtual int act(int state, std::mt19937_64& rng) const = 0;
  virtual void on_step(const Transition& t) = 0;
  virtual void on_episode_end(const std::vector<Transition>& trajectory) = 0;
};

// Tabular Q-learning with epsilon-greedy exploration. The horizon cut is a
// truncation, not a terminal, so updates bootstrap and the table converges
// to the infinite-horizon discounted fixed point.
class QLearningAgent final : public RlAgent {
 public:
  QLearningAgent(int n_states, int n_actions, double alpha, double gamma,
                 EpsilonSchedule eps = {})
      : n_states_(n_states),
        n_actions_(n_actions),
        alpha_(alpha),
        gamma_(gamma),
        epsilon_(eps.start),
        eps_decay_(eps.decay),
        eps_floor_(eps.floor),
        q_(static_cast<std::size_t>(n_states) * n_actions, 0.0) {
    if (n_states_ < 1 || n_actions_ < 1)
      throw ConfigError("q-learning agent: state/action counts must be >= 1");
    if (alpha_ < 0.0) throw ConfigError("bases.learning_rates: must be >= 0");
    if (gamma_ < 0.0 || gamma_ > 1.0)
      throw ConfigError("bases.gamma: must lie in [0, 1]");
  }

  double learning_rate() const override { return alpha_; }
  double epsilon() const { return epsilon_; }

  double q(int state, int action) const {
    return q_[static_cast<std::size_t>(state) * n_actions_ + action];
  }

  const std::vector<double>& table() const { return q_; }

  int act(int state, std::mt19937_64& rng) const override {
    if (uniform_unit(rng) < epsilon_)
      return static_cast<int>(uniform_index(rng, n_actions_));
    return greedy_action(state);
  }

  int greedy_action(int state) const {
    int best = 0;
    for (int a = 1; a < n_actions_; ++a)
      if (q(state, a) > q(state, best)) best = a;
    return best;
  }

  void update(int state, int action, double reward, int next_state,
              bool terminal) {
    double target = reward;
    if (!terminal) {
      double best_next = q(next_state, 0);
      for (int a = 1; a < n_actions_; ++a)
        best_next = std::max(best_next, q(next_state, a));
      target += gamma_ * best_next;
    }
    double& cell = q_[static_cast<std::size_t>(state) * n_actions_ + action];
    cell += alpha_ * (target - cell);
    if (!std::isfinite(cell))
      throw NumericalError("q-learning update produced a non-finite value");
  }

  void on_step(const Transition& t) override {
    update(t.state, t.action, t.reward, t.next_state, t.terminal);
  }

  void on_episode_end(const std::vector<Transition>&) override {
    epsilon_ = std::max(eps_floor_, epsilon_ * eps_decay_);
  }

 private:
  int n_states_;
  int n_actions_;
  double alpha_;
  double gamma_;
  double epsilon_;
  double eps_decay_;
  double eps_floor_;
  std::vector<double> q_;
};

// Tabular softmax policy trained by episodic policy gradient with a
// per-state running-mean baseline. The whole-episode gradient is accumulated
// at the pre-update parameters and applied in one step.
class PolicyGradientAgent final : public RlAgent {
 public:
  PolicyGradientAgent(int n_states, int n_actions, double alpha, double gamma)
      : n_states_(n_states),
        n_actions_(n_actions),
        alpha_(alpha),
        gamma_(gamma),
        logits_(static_cast<std::size_t>(n_states) * n_actions, 0.0),
        baseline_mean_(n_states, 0.0),
        baseline_count_(n_states, 0) {
    if (n_states_ < 1 || n_actions_ < 1)
      throw ConfigError("policy-gradient agent: state/action counts must be >= 1");
    if (alpha_ < 0.0) throw ConfigError("bases.learning_rates: must be >= 0");
    if (gamma_ < 0.0 || gamma_ > 1.0)
      throw ConfigError("bases.gamma: must lie in [0, 1]");
  }

  double learning_rate() const override { return alpha_; }

  double logit(int state, int action) const {
    return logits_[static_cast<std::size_t>(state) * n_actions_ + action];
  }

  const std::vector<double>& logits() const { return logits_; }
  double baseline(int state) const { return baseline_mean_[state]; }

  std::vector<double> policy(int state) const {
    std::vector<double> p(n_actions_);
    double max_logit = logit(state, 0);
    for (int a = 1; a < n_actions_; ++a)
      max_logit = std::max(max_logit, logit(state, a));
    double total = 0.0;
    for (int a = 0; a < n_actions_; ++a) {
      p[a] = std::exp(logit(state, a) - max_logit);
      total += p[a];
    }
    for (double& v : p) v /= total;
    return p;
  }

  int act(int state, std::mt19937_64& rng) const override {
    return static_cast<int>(sample_discrete(rng, policy(state)));
  }

  void update(const std::vector<Transition>& trajectory) {
    if (trajectory.empty())
      throw ContractError("policy-gradient update requires a non-empty episode");
    const std::size_t len = trajectory.size();

    std::vector<double> returns(len);
    double g = 0.0;
    for (std::size_t t = len; t-- > 0;) {
      g = trajectory[t].reward + gamma_ * g;
      returns[t] = g;
    }

    std::vector<double> grad(logits_.size(), 0.0);
    for (std::size_t t = 0; t < len; ++t) {
      const int s = trajectory[t].state;
      const int a = trajectory[t].action;
      const double advantage = returns[t] - baseline_mean_[s];
      const std::vector<double> p = policy(s);
      for (int b = 0; b < n_actions_; ++b) {
        grad[static_cast<std::size_t>(s) * n_actions_ + b] +=
            advantage * ((b == a ? 1.0 : 0.0) - p[b]);
      }
    }
    for (std::size_t k = 0; k < logits_.size(); ++k)
      logits_[k] += alpha_ * grad[k];

    for (std::size_t t = 0; t < len; ++t) {
      const int s = trajectory[t].state;
      baseline_count_[s] += 1;
      baseline_mean_[s] +=
          (returns[t] - baseline_mean_[s]) / static_cast<double>(baseline_count_[s]);
    }
  }

  void on_step(const Transition&) override {}

  void on_episode_end(const std::vector<Transition>& trajectory) override {
    update(trajectory);
  }

 private:
  int n_states_;
  int n_actions_;
  double alpha_;
  double gamma_;
  std::vector<double> logits_;
  std::vector<double> baseline_mean_;
  std::vector<std::uint64_t> baseline_count_;
};

// A synthetic base with a predefined reward schedule: the ground-truth
// oracle for meta-learner behavior. Phases apply while the episode index is
// below their threshold; the last phase is open-ended.
struct ScriptedPhase {
  std::uint64_t until = std::numeric_limits<std::uint64_t>::max();
  double mean = 0.5;
  double half_width = 0.0;
};

class ScriptedBase {
 public:
  explicit ScriptedBase(std::vector<ScriptedPhase> phases)
      : phases_(std::move(phases)) {
    if (phases_.empty())
      throw ConfigError("bases.schedule: needs at least one phase");
    for (std::size_t i = 1; i < phases_.size(); ++i)
      if (phases_[i].until <= phases_[i - 1].until)
        throw ConfigError("bases.schedule: phase thresholds must increase");
    for (const ScriptedPhase& ph : phases_) {
      if (ph.half_width < 0.0)
        throw ConfigError("bases.schedule: noise half-width must be >= 0");
      if (ph.mean - ph.half_width < -1.0 || ph.mean + ph.half_width > 2.0)
        throw ConfigError("bases.schedule: mean +- width far outside [0, 1]");
    }
  }

  static ScriptedBase constant(double mean, double half_width = 0.0) {
    return ScriptedBase({ScriptedPhase{
        std::numeric_limits<std::uint64_t>::max(), mean, half_width}});
  }

  double episode_return(std::uint64_t episode, std::mt19937_64& rng) const {
    const ScriptedPhase* phase = &phases_.back();
    for (const ScriptedPhase& ph : phases_) {
      if (episode < ph.until) {
        phase = &ph;
        break;
      }
    }
    const double noise =
        uniform_real(rng, -phase->half_width, phase->half_width);
    return std::clamp(phase->mean + noise, 0.0, 1.0);
  }

  const std::vector<ScriptedPhase>& phases() const { return phases_; }

 private:
  std::vector<ScriptedPhase> phases_;
};

}  // namespace lrfree
