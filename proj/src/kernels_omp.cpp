#include <omp.h>

#include <cstdint>
#include <limits>
#include <vector>

#include "tinregion/kernels.hpp"

namespace tin::kernels::omp {

GridBest rate_balance_grid(const ChannelRealization& ch, const PowerGrid& grid,
                           const RateProfile& profile) {
  const auto n = static_cast<std::int64_t>(grid.size());
  std::vector<GridBest> partial(static_cast<std::size_t>(omp_get_max_threads()),
                                GridBest{-std::numeric_limits<double>::infinity(), {}, 0});
#pragma omp parallel
  {
    GridBest& mine = partial[static_cast<std::size_t>(omp_get_thread_num())];
#pragma omp for schedule(static)
    for (std::int64_t i = 0; i < n; ++i) {
      const auto idx = static_cast<std::size_t>(i);
      const PowerVector p = grid.at(idx);
      const double v = balanced_value(rate_pair_proper(ch, p), profile);
      if (v > mine.value) mine = {v, p, idx};
    }
  }
  // Lowest index among equal values, matching the serial scan.
  GridBest best = partial.front();
  for (const GridBest& g : partial)
    if (g.value > best.value || (g.value == best.value && g.index < best.index)) best = g;
  return best;
}

void improper_rates(const ChannelRealization& ch, const StrategyGrid& grid,
                    std::span<RatePair> out) {
  const auto n = static_cast<std::int64_t>(out.size());
#pragma omp parallel for schedule(static)
  for (std::int64_t i = 0; i < n; ++i) {
    const auto idx = static_cast<std::size_t>(i);
    out[idx] = rate_pair_improper(ch, grid.at(idx));
  }
}

void improper_rates(const ChannelRealization& ch, std::span<const TransmitStrategy> strategies,
                    std::span<RatePair> out) {
  const auto n = static_cast<std::int64_t>(strategies.size());
#pragma omp parallel for schedule(static)
  for (std::int64_t i = 0; i < n; ++i) {
    const auto idx = static_cast<std::size_t>(i);
    out[idx] = rate_pair_improper(ch, strategies[idx]);
  }
}

int max_threads() { return omp_get_max_threads(); }

}  // namespace tin::kernels::omp
