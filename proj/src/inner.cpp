#include "tinregion/inner.hpp"

#include <algorithm>
#include <cmath>
#include <cstdint>
#include <numbers>
#include <queue>
#include <vector>

namespace tin {

namespace {

constexpr double kUnpricedLambda = 1e-9;
constexpr double kRootRelTolerance = 1e-9;

// Interference-free single-user bound mu log2(1 + g p / noise) - lambda p.
double interference_free(double mu, double lambda, double gain, double noise, double p) {
  return mu * std::log1p(gain * p / noise) / std::numbers::ln2 - lambda * p;
}

double interference_free_argmax(double mu, double lambda, double gain, double noise) {
  if (mu == 0.0 || gain == 0.0) return 0.0;
  return std::max(0.0, mu / (lambda * std::numbers::ln2) - noise / gain);
}

// Smallest p0 >= start with value(p) <= 0 for all p >= p0; `value` is
// concave and decreasing beyond `start`.
template <class Fn>
double bracketed_root(Fn value, double start) {
  if (value(start) <= 0.0) return start;
  double lo = start;
  double hi = 2.0 * start + 1.0;
  while (value(hi) > 0.0) {
    lo = hi;
    hi *= 2.0;
  }
  while (hi - lo > kRootRelTolerance * std::max(1.0, hi)) {
    const double mid = 0.5 * (lo + hi);
    (value(mid) > 0.0 ? lo : hi) = mid;
  }
  return hi;
}

}  // namespace

void DualPoint::validate() const {
  for (int k = 0; k < 2; ++k)
    if (!(mu[k] >= 0.0) || !(lambda[k] >= 0.0) || !std::isfinite(mu[k]) ||
        !std::isfinite(lambda[k]))
      throw PreconditionError("dual multipliers must be nonnegative and finite");
}

bool Box::contains(const PowerVector& p) const {
  return lower[0] <= p[0] && p[0] <= upper[0] && lower[1] <= p[1] && p[1] <= upper[1];
}

void Box::validate() const {
  for (int k = 0; k < 2; ++k)
    if (!(lower[k] >= 0.0) || !(lower[k] <= upper[k]))
      throw PreconditionError("box requires 0 <= lower <= upper");
}

void BnbConfig::validate() const {
  if (!(epsilon > 0.0)) throw PreconditionError("branch-and-bound epsilon must be positive");
  if (max_iterations == 0) throw PreconditionError("iteration budget must be positive");
  if (!(power_cap > 0.0)) throw PreconditionError("power cap must be positive");
}

double extended_objective(const ChannelRealization& ch, const DualPoint& dual,
                          const PowerVector& x, const PowerVector& y) {
  double value = 0.0;
  for (int k = 0; k < 2; ++k) {
    const int j = 1 - k;
    if (dual.mu[k] != 0.0) {
      const double sinr = ch.power_gain(k, k) * x[k] / (ch.noise[k] + ch.power_gain(k, j) * y[j]);
      value += dual.mu[k] * std::log1p(sinr) / std::numbers::ln2;
    }
    value -= dual.lambda[k] * y[k];
  }
  return value;
}

double inner_objective(const ChannelRealization& ch, const DualPoint& dual,
                       const PowerVector& p) {
  if (!(p[0] >= 0.0) || !(p[1] >= 0.0))
    throw PreconditionError("transmit powers must be nonnegative");
  return extended_objective(ch, dual, p, p);
}

BoxBounds box_bounds(const ChannelRealization& ch, const DualPoint& dual, const Box& box) {
  return {extended_objective(ch, dual, box.upper, box.lower),
          extended_objective(ch, dual, box.lower, box.lower)};
}

double secant_tangent_bound(const ChannelRealization& ch, const DualPoint& dual,
                            const Box& box) {
  const PowerVector mid{0.5 * (box.lower[0] + box.upper[0]),
                        0.5 * (box.lower[1] + box.upper[1])};
  double value = 0.0;
  std::array<double, 2> grad{-dual.lambda[0], -dual.lambda[1]};
  for (int k = 0; k < 2; ++k) {
    const int j = 1 - k;
    value -= dual.lambda[k] * mid[k];
    if (dual.mu[k] == 0.0) continue;
    const double scale = dual.mu[k] / std::numbers::ln2;
    const double gkk = ch.power_gain(k, k);
    const double gkj = ch.power_gain(k, j);
    const double noise = ch.noise[k];

    // ln(noise + gkk p_k + gkj p_j) is concave; -ln(noise + gkj p_j) is
    // convex and lies below its secant over [a_j, b_j].
    const double total = noise + gkk * mid[k] + gkj * mid[j];
    const double lo = std::log(noise + gkj * box.lower[j]);
    const double width = box.upper[j] - box.lower[j];
    double slope = 0.0;
    if (width > 0.0) slope = -(std::log(noise + gkj * box.upper[j]) - lo) / width;
    value += scale * (std::log(total) - lo + slope * (mid[j] - box.lower[j]));
    grad[k] += scale * gkk / total;
    grad[j] += scale * (gkj / total + slope);
  }
  return value + 0.5 * (std::abs(grad[0]) * (box.upper[0] - box.lower[0]) +
                        std::abs(grad[1]) * (box.upper[1] - box.lower[1]));
}

std::pair<Box, Box> branch(const Box& box) {
  const double w0 = box.upper[0] - box.lower[0];
  const double w1 = box.upper[1] - box.lower[1];
  if (!(w0 > 0.0) && !(w1 > 0.0)) throw CannotBranchError("cannot branch a degenerate box");
  const int k = (w1 > w0) ? 1 : 0;
  const double cut = box.lower[k] + 0.5 * (box.upper[k] - box.lower[k]);
  Box first = box;
  Box second = box;
  first.upper[k] = cut;
  second.lower[k] = cut;
  return {first, second};
}

InitialBox init_box(const ChannelRealization& ch, const DualPoint& dual, const BnbConfig& cfg) {
  dual.validate();
  cfg.validate();
  for (int k = 0; k < 2; ++k)
    if (dual.mu[k] > 0.0 && dual.lambda[k] <= kUnpricedLambda)
      return {Box{{0.0, 0.0}, {cfg.power_cap, cfg.power_cap}}, true};

  std::array<double, 2> peak_arg{};
  std::array<double, 2> peak{};
  for (int k = 0; k < 2; ++k) {
    peak_arg[k] = interference_free_argmax(dual.mu[k], dual.lambda[k], ch.power_gain(k, k),
                                           ch.noise[k]);
    peak[k] = interference_free(dual.mu[k], dual.lambda[k], ch.power_gain(k, k), ch.noise[k],
                                peak_arg[k]);
  }

  InitialBox out;
  for (int k = 0; k < 2; ++k) {
    const int j = 1 - k;
    // With mu_k = 0 the objective is nonincreasing in p_k.
    if (dual.mu[k] == 0.0) continue;
    auto bound = [&](double p) {
      return interference_free(dual.mu[k], dual.lambda[k], ch.power_gain(k, k), ch.noise[k], p) +
             peak[j];
    };
    out.box.upper[k] = bracketed_root(bound, peak_arg[k]);
  }
  return out;
}

BnbResult bnb_solve(const ChannelRealization& ch, const DualPoint& dual, const BnbConfig& cfg) {
  const InitialBox init = init_box(ch, dual, cfg);

  struct Node {
    double upper;
    std::uint64_t seq;
    Box box;
  };
  auto lower_priority = [](const Node& a, const Node& b) {
    return a.upper < b.upper || (a.upper == b.upper && a.seq > b.seq);
  };
  std::priority_queue<Node, std::vector<Node>, decltype(lower_priority)> live(lower_priority);

  auto upper_of = [&](const Box& box) {
    return std::min(box_bounds(ch, dual, box).upper, secant_tangent_bound(ch, dual, box));
  };

  BnbResult result;
  result.capped = init.capped;
  result.p = init.box.lower;
  result.value = inner_objective(ch, dual, init.box.lower);
  std::uint64_t seq = 0;
  live.push({upper_of(init.box), seq++, init.box});

  while (!live.empty()) {
    const Node& top = live.top();
    if (top.upper - result.value <= cfg.epsilon) break;
    if (result.iterations >= cfg.max_iterations) {
      result.budget_exhausted = true;
      break;
    }
    const Box parent = top.box;
    live.pop();
    ++result.iterations;
    if (parent.degenerate()) continue;

    const auto [first, second] = branch(parent);
    for (const Box& child : {first, second}) {
      const double achievable = inner_objective(ch, dual, child.lower);
      if (achievable > result.value) {
        result.value = achievable;
        result.p = child.lower;
      }
      const double upper = upper_of(child);
      if (upper > result.value) live.push({upper, seq++, child});
    }
  }
  result.certified_gap = live.empty() ? 0.0 : std::max(0.0, live.top().upper - result.value);
  return result;
}

}  // namespace tin
