#include <algorithm>
#include <limits>
#include <numbers>

#include "tinregion/kernels.hpp"

namespace tin::kernels {

PowerVector PowerGrid::at(std::size_t index) const {
  const std::size_t i = index / points;
  const std::size_t j = index % points;
  const double denom = points > 1 ? static_cast<double>(points - 1) : 1.0;
  return {budget.p1 * static_cast<double>(i) / denom, budget.p2 * static_cast<double>(j) / denom};
}

double balanced_value(const RatePair& rates, const RateProfile& profile) {
  double value = std::numeric_limits<double>::infinity();
  for (int k = 0; k < 2; ++k)
    if (profile.rho(k) > 0.0) value = std::min(value, rates[k] / profile.rho(k));
  return value;
}

TransmitStrategy StrategyGrid::at(std::size_t index) const {
  const std::size_t phase_idx = index % phases;
  index /= phases;
  const std::size_t f2 = index % fractions;
  index /= fractions;
  const std::size_t f1 = index % fractions;
  index /= fractions;
  const PowerVector p = PowerGrid{budget, powers}.at(index);

  const double fden = fractions > 1 ? static_cast<double>(fractions - 1) : 1.0;
  TransmitStrategy x;
  x.variance = p;
  x.impropriety = {p[0] * static_cast<double>(f1) / fden, p[1] * static_cast<double>(f2) / fden};
  x.phase = {2.0 * std::numbers::pi * static_cast<double>(phase_idx) / static_cast<double>(phases),
             0.0};
  return x;
}

namespace serial {

GridBest rate_balance_grid(const ChannelRealization& ch, const PowerGrid& grid,
                           const RateProfile& profile) {
  GridBest best{-std::numeric_limits<double>::infinity(), {}, 0};
  for (std::size_t i = 0; i < grid.size(); ++i) {
    const PowerVector p = grid.at(i);
    const double v = balanced_value(rate_pair_proper(ch, p), profile);
    if (v > best.value) best = {v, p, i};
  }
  return best;
}

void improper_rates(const ChannelRealization& ch, const StrategyGrid& grid,
                    std::span<RatePair> out) {
  for (std::size_t i = 0; i < out.size(); ++i) out[i] = rate_pair_improper(ch, grid.at(i));
}

void improper_rates(const ChannelRealization& ch, std::span<const TransmitStrategy> strategies,
                    std::span<RatePair> out) {
  for (std::size_t i = 0; i < strategies.size(); ++i) out[i] = rate_pair_improper(ch, strategies[i]);
}

}  // namespace serial
}  // namespace tin::kernels
