#pragma once

// Data-parallel inner loops. Every kernel has a serial reference in
// `kernels::serial` and an OpenMP version in `kernels::omp`; both produce
// bitwise-identical results (reductions are merged by index).

#include <cstddef>
#include <cstdint>
#include <exception>
#include <span>
#include <vector>

#include "tinregion/model.hpp"

namespace tin::kernels {

enum class Execution { serial, parallel };

/// Uniform grid over [0, P1] x [0, P2] with `points` nodes per axis.
struct PowerGrid {
  PowerBudget budget;
  std::size_t points = 201;

  std::size_t size() const { return points * points; }
  PowerVector at(std::size_t index) const;
};

struct GridBest {
  double value = 0.0;
  PowerVector p{};
  std::size_t index = 0;
};

/// min over users with rho_k > 0 of r_k(p) / rho_k.
double balanced_value(const RatePair& rates, const RateProfile& profile);

/// Impropriety-parametrized strategy grid: powers on a PowerGrid, kappa_k/c_k
/// on `fractions` nodes in [0, 1], and phase difference phi1 - phi2 on
/// `phases` nodes in [0, 2pi) (phi2 = 0).
struct StrategyGrid {
  PowerBudget budget;
  std::size_t powers = 31;
  std::size_t fractions = 11;
  std::size_t phases = 24;

  std::size_t size() const { return powers * powers * fractions * fractions * phases; }
  TransmitStrategy at(std::size_t index) const;
};

namespace serial {

/// Best grid node for proper rate balancing; ties go to the lowest index.
GridBest rate_balance_grid(const ChannelRealization& ch, const PowerGrid& grid,
                           const RateProfile& profile);

void improper_rates(const ChannelRealization& ch, const StrategyGrid& grid,
                    std::span<RatePair> out);

void improper_rates(const ChannelRealization& ch, std::span<const TransmitStrategy> strategies,
                    std::span<RatePair> out);

}  // namespace serial

namespace omp {

GridBest rate_balance_grid(const ChannelRealization& ch, const PowerGrid& grid,
                           const RateProfile& profile);

void improper_rates(const ChannelRealization& ch, const StrategyGrid& grid,
                    std::span<RatePair> out);

void improper_rates(const ChannelRealization& ch, std::span<const TransmitStrategy> strategies,
                    std::span<RatePair> out);

/// Number of threads OpenMP would use for a parallel region.
int max_threads();

}  // namespace omp

/// Calls fn(i) for i in [0, n) and stores the results by index.
template <class Result, class Fn>
std::vector<Result> map_indexed(std::size_t n, Fn&& fn, Execution exec) {
  std::vector<Result> out(n);
  if (exec == Execution::serial) {
    for (std::size_t i = 0; i < n; ++i) out[i] = fn(i);
    return out;
  }
  // Exceptions cannot cross the parallel region; the lowest-index one is
  // rethrown afterwards.
  std::vector<std::exception_ptr> errors(n);
  const auto count = static_cast<std::int64_t>(n);
#pragma omp parallel for schedule(dynamic, 1)
  for (std::int64_t i = 0; i < count; ++i) {
    const auto idx = static_cast<std::size_t>(i);
    try {
      out[idx] = fn(idx);
    } catch (...) {
      errors[idx] = std::current_exception();
    }
  }
  for (const auto& e : errors)
    if (e) std::rethrow_exception(e);
  return out;
}

}  // namespace tin::kernels
