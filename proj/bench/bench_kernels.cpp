#include <benchmark/benchmark.h>

#include <complex>
#include <vector>

#include "tinregion/kernels.hpp"

using namespace tin;
using namespace tin::kernels;

namespace {

ChannelRealization channel() {
  return ChannelRealization::from_coefficients(std::polar(2.0310, -0.6858), std::polar(1.4766, 2.6452),
                                               std::polar(0.7280, 1.9726), std::polar(0.9935, -0.6676),
                                               1.0, 1.0);
}

void BM_RateBalanceSerial(benchmark::State& state) {
  const auto ch = channel();
  const PowerGrid grid{{10.0, 10.0}, static_cast<std::size_t>(state.range(0))};
  for (auto _ : state) benchmark::DoNotOptimize(serial::rate_balance_grid(ch, grid, RateProfile(0.5)));
  state.SetItemsProcessed(state.iterations() * static_cast<std::int64_t>(grid.size()));
}

void BM_RateBalanceOmp(benchmark::State& state) {
  const auto ch = channel();
  const PowerGrid grid{{10.0, 10.0}, static_cast<std::size_t>(state.range(0))};
  for (auto _ : state) benchmark::DoNotOptimize(omp::rate_balance_grid(ch, grid, RateProfile(0.5)));
  state.SetItemsProcessed(state.iterations() * static_cast<std::int64_t>(grid.size()));
  state.counters["threads"] = omp::max_threads();
}

void BM_ImproperSerial(benchmark::State& state) {
  const auto ch = channel();
  const StrategyGrid grid{{10.0, 10.0}, static_cast<std::size_t>(state.range(0)), 11, 24};
  std::vector<RatePair> out(grid.size());
  for (auto _ : state) {
    serial::improper_rates(ch, grid, out);
    benchmark::ClobberMemory();
  }
  state.SetItemsProcessed(state.iterations() * static_cast<std::int64_t>(grid.size()));
}

void BM_ImproperOmp(benchmark::State& state) {
  const auto ch = channel();
  const StrategyGrid grid{{10.0, 10.0}, static_cast<std::size_t>(state.range(0)), 11, 24};
  std::vector<RatePair> out(grid.size());
  for (auto _ : state) {
    omp::improper_rates(ch, grid, out);
    benchmark::ClobberMemory();
  }
  state.SetItemsProcessed(state.iterations() * static_cast<std::int64_t>(grid.size()));
  state.counters["threads"] = omp::max_threads();
}

}  // namespace

BENCHMARK(BM_RateBalanceSerial)->Arg(101)->Arg(201)->Unit(benchmark::kMillisecond);
BENCHMARK(BM_RateBalanceOmp)->Arg(101)->Arg(201)->Unit(benchmark::kMillisecond);
BENCHMARK(BM_ImproperSerial)->Arg(11)->Arg(21)->Unit(benchmark::kMillisecond);
BENCHMARK(BM_ImproperOmp)->Arg(11)->Arg(21)->Unit(benchmark::kMillisecond);

BENCHMARK_MAIN();
