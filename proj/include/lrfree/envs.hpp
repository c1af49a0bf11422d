#pragma once

#include <cstdint>
#include <memory>
#include <random>
#include <string>

#include "lrfree/core.hpp"
#include "lrfree/errors.hpp"
#include "lrfree/rng.hpp"

namespace lrfree {

struct StepResult {
  int next_state = 0;
  double reward = 0.0;
  bool terminal = false;
};

// Episodic MDP with declared return bounds. Per-step rewards lie in [0, 1];
// realized episodic returns always fall inside return_bounds.
class EpisodicEnv {
 public:
  virtual ~EpisodicEnv() = default;

  virtual int state_count() const = 0;
  virtual int action_count() const = 0;
  virtual int horizon() const = 0;
  virtual ReturnBounds return_bounds() const = 0;

  virtual int reset(std::mt19937_64& rng) = 0;
  virtual StepResult step(int state, int action, std::mt19937_64& rng) = 0;

 protected:
  void check_transition(int state, int action) const {
    if (state < 0 || state >= state_count())
      throw ContractError("env step: state index out of range");
    if (action < 0 || action >= action_count())
      throw ContractError("env step: action index out of range");
  }
};

// Chain of L states. Action 0 (left) always pays 0.1 and moves left or stays;
// action 1 (right) pays 1.0 at the rightmost state, otherwise 0, and advances
// right with probability 1 - p_slip. Episodes run the full horizon.
class ChainEnv final : public EpisodicEnv {
 public:
  ChainEnv(int length, int horizon, double p_slip = 0.0)
      : length_(length), horizon_(horizon), p_slip_(p_slip) {
    if (length_ < 2) throw ConfigError("env.length: chain needs >= 2 states");
    if (horizon_ < 1) throw ConfigError("env.horizon: must be >= 1");
    if (p_slip_ < 0.0 || p_slip_ >= 1.0)
      throw ConfigError("env.p_slip: must lie in [0, 1)");
  }

  int state_count() const override { return length_; }
  int action_count() const override { return 2; }
  int horizon() const override { return horizon_; }

  ReturnBounds return_bounds() const override {
    // Conservative declared bounds: every step pays at most 1.
    return {0.0, static_cast<double>(horizon_)};
  }

  int reset(std::mt19937_64&) override { return 0; }

  StepResult step(int state, int action, std::mt19937_64& rng) override {
    check_transition(state, action);
    StepResult out;
    if (action == 0) {
      out.reward = 0.1;
      out.next_state = std::max(state - 1, 0);
    } else {
      if (state == length_ - 1) {
        out.reward = 1.0;
        out.next_state = state;
      } else {
        out.reward = 0.0;
        const bool slipped = p_slip_ > 0.0 && uniform_unit(rng) < p_slip_;
        out.next_state = slipped ? state : state + 1;
      }
    }
    return out;
  }

 private:
  int length_;
  int horizon_;
  double p_slip_;
};

// Rectangular grid. Start at (0,0), goal at (width-1, height-1) pays 1.0 and
// terminates; every other step pays 0. With probability `slip` the executed
// action is replaced by a uniformly random one. Moving off-grid stays put.
class GridworldEnv final : public EpisodicEnv {
 public:
  GridworldEnv(int width, int height, int horizon, double slip = 0.0)
      : width_(width), height_(height), horizon_(horizon), slip_(slip) {
    if (width_ < 1 || height_ < 1)
      throw ConfigError("env.width/env.height: grid must be at least 1x1");
    if (width_ * height_ < 2)
      throw ConfigError("env.width/env.height: grid needs >= 2 cells");
    if (horizon_ < 1) throw ConfigError("env.horizon: must be >= 1");
    if (slip_ < 0.0 || slip_ >= 1.0)
      throw ConfigError("env.slip: must lie in [0, 1)");
  }

  int state_count() const override { return width_ * height_; }
  int action_count() const override { return 4; }  // up, right, down, left
  int horizon() const override { return horizon_; }

  ReturnBounds return_bounds() const override { return {0.0, 1.0}; }

  int reset(std::mt19937_64&) override { return 0; }

  int goal_state() const { return width_ * height_ - 1; }

  StepResult step(int state, int action, std::mt19937_64& rng) override {
    check_transition(state, action);
    int executed = action;
    if (slip_ > 0.0 && uniform_unit(rng) < slip_)
      executed = static_cast<int>(uniform_index(rng, 4));

    int x = state % width_;
    int y = state / width_;
    switch (executed) {
      case 0: y = std::max(y - 1, 0); break;
      case 1: x = std::min(x + 1, width_ - 1); break;
      case 2: y = std::min(y + 1, height_ - 1); break;
      case 3: x = std::max(x - 1, 0); break;
      default: break;
    }

    StepResult out;
    out.next_state = y * width_ + x;
    if (out.next_state == goal_state()) {
      out.reward = 1.0;
      out.terminal = true;
    }
    return out;
  }

 private:
  int width_;
  int height_;
  int horizon_;
  double slip_;
};

}  // namespace lrfree
