#pragma once

// Independent straight-line re-implementations used as test oracles. These
// deliberately avoid every helper in include/lrfree: each update is the
// pseudocode transcribed step by step over plain arrays.

#include <algorithm>
#include <cmath>
#include <cstdint>
#include <limits>
#include <stdexcept>
#include <vector>

namespace oracle {

inline constexpr double kEuler = 2.718281828459045;

struct BanditState {
  int m = 0;
  std::vector<long long> n;  // pulls
  std::vector<double> u;     // cumulative normalized reward
  std::vector<double> d;     // regret coefficient
  std::vector<double> psi;   // potential / probability
  std::vector<bool> active;
  std::vector<double> scores;      // exp3
  std::vector<double> probs;       // exp3 / corral
  std::vector<double> etas;        // corral
  std::vector<double> thresholds;  // corral

  explicit BanditState(int m_) : m(m_) {
    n.assign(m, 0);
    u.assign(m, 0.0);
    d.assign(m, 1.0);
    psi.assign(m, 0.0);
    active.assign(m, true);
    scores.assign(m, 0.0);
    probs.assign(m, 1.0 / m);
    etas.assign(m, 0.0);
    thresholds.assign(m, 2.0 * m);
  }
};

inline double conf_width(long long pulls, int m, double delta, double c) {
  const double nd = static_cast<double>(pulls);
  const double inner = std::log(std::max(nd, kEuler));
  return c * std::sqrt(std::log(static_cast<double>(m) * inner / delta) / nd);
}

inline double best_pessimistic(const BanditState& s, double delta, double c,
                               bool active_only) {
  double best = -std::numeric_limits<double>::infinity();
  for (int j = 0; j < s.m; ++j) {
    if (active_only && !s.active[j]) continue;
    if (s.n[j] == 0) continue;
    const double mean = s.u[j] / static_cast<double>(s.n[j]);
    const double v = mean - conf_width(s.n[j], s.m, delta, c);
    if (v > best) best = v;
  }
  return best;
}

inline void d3rb_update(BanditState& s, int i, double r, double delta, double c) {
  s.u[i] += r;
  s.n[i] += 1;
  const double nd = static_cast<double>(s.n[i]);
  const double mean_i = s.u[i] / nd;
  const double lhs = mean_i + s.d[i] * std::sqrt(nd) / nd +
                     conf_width(s.n[i], s.m, delta, c);
  const double rhs = best_pessimistic(s, delta, c, false);
  if (lhs < rhs) s.d[i] = 2.0 * s.d[i];
  s.psi[i] = s.d[i] * std::sqrt(nd);
}

inline void ed2rb_update(BanditState& s, int i, double r, double delta, double c,
                         double d_min) {
  s.u[i] += r;
  s.n[i] += 1;
  const double nd = static_cast<double>(s.n[i]);
  const double mean_i = s.u[i] / nd;
  const double rhs = best_pessimistic(s, delta, c, false);
  const double estimate =
      std::sqrt(nd) * (rhs - conf_width(s.n[i], s.m, delta, c) - mean_i);
  s.d[i] = std::max(d_min, estimate);
  const double candidate = s.d[i] * std::sqrt(nd);
  if (s.psi[i] > 0.0)
    s.psi[i] = std::min(std::max(candidate, s.psi[i]), 2.0 * s.psi[i]);
  else
    s.psi[i] = candidate;
}

inline void classic_update(BanditState& s, int i, double r, double delta,
                           double c) {
  s.u[i] += r;
  s.n[i] += 1;
  const double rhs = best_pessimistic(s, delta, c, true);

  std::vector<int> failed;
  int n_active = 0;
  for (int k = 0; k < s.m; ++k) {
    if (!s.active[k]) continue;
    ++n_active;
    if (s.n[k] == 0) continue;
    const double nd = static_cast<double>(s.n[k]);
    const double mean_k = s.u[k] / nd;
    const double lhs = mean_k + s.d[k] * std::sqrt(nd) / nd +
                       conf_width(s.n[k], s.m, delta, c);
    if (lhs < rhs) failed.push_back(k);
  }
  if (!failed.empty() && static_cast<int>(failed.size()) == n_active) {
    int keep = failed.front();
    double best = -std::numeric_limits<double>::infinity();
    for (int k : failed) {
      const double nd = static_cast<double>(s.n[k]);
      const double v = s.u[k] / nd - conf_width(s.n[k], s.m, delta, c);
      if (v > best) {
        best = v;
        keep = k;
      }
    }
    failed.erase(std::find(failed.begin(), failed.end(), keep));
  }
  for (int k : failed) s.active[k] = false;
  s.psi[i] = s.d[i] * std::sqrt(static_cast<double>(s.n[i]));
}

inline void exp3_update(BanditState& s, int i, double r, double eta) {
  s.u[i] += r;
  s.n[i] += 1;
  for (int j = 0; j < s.m; ++j) {
    const double indicator = (j == i) ? 1.0 : 0.0;
    s.scores[j] += 1.0 - indicator * (1.0 - r) / s.probs[i];
  }
  double mx = s.scores[0];
  for (int j = 1; j < s.m; ++j) mx = std::max(mx, s.scores[j]);
  double total = 0.0;
  std::vector<double> w(s.m);
  for (int j = 0; j < s.m; ++j) {
    w[j] = std::max(std::exp(eta * (s.scores[j] - mx)),
                    std::numeric_limits<double>::min());
    total += w[j];
  }
  for (int j = 0; j < s.m; ++j) s.probs[j] = w[j] / total;
  for (int j = 0; j < s.m; ++j) s.psi[j] = s.probs[j];
}

inline void corral_update(BanditState& s, int i, double r, double gamma,
                          double eta_scale) {
  s.u[i] += r;
  s.n[i] += 1;
  std::vector<double> loss(s.m, 0.0);
  loss[i] = (1.0 - r) / s.probs[i];

  double lo = loss[0], hi = loss[0];
  for (int j = 1; j < s.m; ++j) {
    lo = std::min(lo, loss[j]);
    hi = std::max(hi, loss[j]);
  }
  double lambda = std::numeric_limits<double>::quiet_NaN();
  for (int iter = 0; iter < 200; ++iter) {
    const double mid = 0.5 * (lo + hi);
    double sum = 0.0;
    bool feasible = true;
    for (int j = 0; j < s.m; ++j) {
      const double den = 1.0 / s.probs[j] + s.etas[j] * (loss[j] - mid);
      if (!(den > 0.0)) {
        feasible = false;
        break;
      }
      sum += 1.0 / den;
    }
    if (feasible && std::abs(sum - 1.0) <= 1e-10) {
      lambda = mid;
      break;
    }
    if (!feasible || sum > 1.0)
      hi = mid;
    else
      lo = mid;
  }
  if (std::isnan(lambda))
    throw std::runtime_error("oracle corral bisection failed");

  for (int j = 0; j < s.m; ++j)
    s.probs[j] = 1.0 / (1.0 / s.probs[j] + s.etas[j] * (loss[j] - lambda));
  for (int j = 0; j < s.m; ++j)
    s.probs[j] = (1.0 - gamma) * s.probs[j] + gamma / static_cast<double>(s.m);
  for (int j = 0; j < s.m; ++j) {
    if (1.0 / s.probs[j] > s.thresholds[j]) {
      s.thresholds[j] = 2.0 * s.thresholds[j];
      s.etas[j] = eta_scale * s.etas[j];
    }
  }
  for (int j = 0; j < s.m; ++j) s.psi[j] = s.probs[j];
}

inline void ucb_update(BanditState& s, int i, double r, double delta) {
  s.u[i] += r;
  s.n[i] += 1;
  const double nd = static_cast<double>(s.n[i]);
  const double mean = s.u[i] / nd;
  s.psi[i] = mean + std::sqrt(2.0 * std::log(1.0 / delta) / nd);
}

// Finite-horizon dynamic programming over a deterministic chain: optimal
// episodic return for the left(0.1)/right(1.0-at-end) chain with no slip.
inline double chain_optimal_return(int length, int horizon) {
  std::vector<std::vector<double>> value(
      horizon + 1, std::vector<double>(length, 0.0));
  for (int t = horizon - 1; t >= 0; --t) {
    for (int st = 0; st < length; ++st) {
      const int left_next = std::max(st - 1, 0);
      const double left = 0.1 + value[t + 1][left_next];
      double right;
      if (st == length - 1)
        right = 1.0 + value[t + 1][st];
      else
        right = 0.0 + value[t + 1][st + 1];
      value[t][st] = std::max(left, right);
    }
  }
  return value[0][0];
}

// Infinite-horizon discounted optimal Q for the same chain, by value
// iteration to a 1e-12 sup-norm fixed point.
inline std::vector<std::vector<double>> chain_q_star(int length, double gamma) {
  std::vector<std::vector<double>> q(length, std::vector<double>(2, 0.0));
  for (int iter = 0; iter < 1000000; ++iter) {
    double diff = 0.0;
    std::vector<std::vector<double>> next = q;
    for (int st = 0; st < length; ++st) {
      const int left_next = std::max(st - 1, 0);
      const double v_left = std::max(q[left_next][0], q[left_next][1]);
      next[st][0] = 0.1 + gamma * v_left;
      double reward_right;
      int right_next;
      if (st == length - 1) {
        reward_right = 1.0;
        right_next = st;
      } else {
        reward_right = 0.0;
        right_next = st + 1;
      }
      const double v_right = std::max(q[right_next][0], q[right_next][1]);
      next[st][1] = reward_right + gamma * v_right;
      diff = std::max(diff, std::abs(next[st][0] - q[st][0]));
      diff = std::max(diff, std::abs(next[st][1] - q[st][1]));
    }
    q = next;
    if (diff < 1e-12) break;
  }
  return q;
}

// Spearman rank correlation with tie-averaged ranks.
inline std::vector<double> tie_ranks(const std::vector<double>& values) {
  const std::size_t n = values.size();
  std::vector<std::size_t> order(n);
  for (std::size_t i = 0; i < n; ++i) order[i] = i;
  std::sort(order.begin(), order.end(),
            [&](std::size_t a, std::size_t b) { return values[a] < values[b]; });
  std::vector<double> ranks(n, 0.0);
  std::size_t i = 0;
  while (i < n) {
    std::size_t j = i;
    while (j + 1 < n && values[order[j + 1]] == values[order[i]]) ++j;
    const double avg = 0.5 * (static_cast<double>(i) + static_cast<double>(j)) + 1.0;
    for (std::size_t k = i; k <= j; ++k) ranks[order[k]] = avg;
    i = j + 1;
  }
  return ranks;
}

inline double spearman_rho(const std::vector<double>& xs,
                           const std::vector<double>& ys) {
  const std::vector<double> rx = tie_ranks(xs);
  const std::vector<double> ry = tie_ranks(ys);
  const double n = static_cast<double>(xs.size());
  double mx = 0.0, my = 0.0;
  for (std::size_t i = 0; i < xs.size(); ++i) {
    mx += rx[i];
    my += ry[i];
  }
  mx /= n;
  my /= n;
  double sxy = 0.0, sxx = 0.0, syy = 0.0;
  for (std::size_t i = 0; i < xs.size(); ++i) {
    sxy += (rx[i] - mx) * (ry[i] - my);
    sxx += (rx[i] - mx) * (rx[i] - mx);
    syy += (ry[i] - my) * (ry[i] - my);
  }
  if (sxx == 0.0 || syy == 0.0) return 0.0;
  return sxy / std::sqrt(sxx * syy);
}

}  // namespace oracle
