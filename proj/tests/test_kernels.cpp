#include <doctest.h>

#include <stdexcept>

#include "fixtures.hpp"
#include "tinregion/kernels.hpp"

using namespace tin;
using namespace tin::kernels;

TEST_CASE("power grid nodes") {
  const PowerGrid grid{{10.0, 4.0}, 5};
  CHECK(grid.size() == 25);
  CHECK(grid.at(0) == PowerVector{0.0, 0.0});
  CHECK(grid.at(4) == PowerVector{0.0, 4.0});
  CHECK(grid.at(5) == PowerVector{2.5, 0.0});
  CHECK(grid.at(24) == PowerVector{10.0, 4.0});
}

TEST_CASE("strategy grid decoding") {
  const StrategyGrid grid{{10.0, 10.0}, 3, 2, 4};
  CHECK(grid.size() == 3 * 3 * 2 * 2 * 4);
  const TransmitStrategy last = grid.at(grid.size() - 1);
  CHECK(last.variance == PowerVector{10.0, 10.0});
  CHECK(last.impropriety == PowerVector{10.0, 10.0});
  CHECK(last.phase[0] == doctest::Approx(1.5 * 3.141592653589793));
  CHECK(last.phase[1] == 0.0);
  const TransmitStrategy first = grid.at(0);
  CHECK(first.variance == PowerVector{0.0, 0.0});
  CHECK(first.phase[0] == 0.0);
}

TEST_CASE("balanced value ignores users without a target") {
  CHECK(balanced_value({2.0, 1.0}, RateProfile(0.5)) == doctest::Approx(2.0));
  CHECK(balanced_value({2.0, 0.0}, RateProfile(1.0)) == doctest::Approx(2.0));
  CHECK(balanced_value({0.0, 3.0}, RateProfile(0.0)) == doctest::Approx(3.0));
}

TEST_CASE("serial and OpenMP kernels agree bitwise") {
  const auto ch = fixture::reference_channel();
  const PowerGrid grid{fixture::kBudget, 101};
  for (double beta : {0.0, 0.1, 0.5, 0.77, 1.0}) {
    const GridBest s = serial::rate_balance_grid(ch, grid, RateProfile(beta));
    const GridBest o = omp::rate_balance_grid(ch, grid, RateProfile(beta));
    CHECK(s.value == o.value);
    CHECK(s.index == o.index);
    CHECK(s.p == o.p);
  }

  const StrategyGrid sgrid{fixture::kBudget, 7, 3, 6};
  std::vector<RatePair> a(sgrid.size()), b(sgrid.size());
  serial::improper_rates(ch, sgrid, a);
  omp::improper_rates(ch, sgrid, b);
  for (std::size_t i = 0; i < a.size(); ++i) {
    CHECK(a[i].r1 == b[i].r1);
    CHECK(a[i].r2 == b[i].r2);
  }

  std::vector<TransmitStrategy> xs;
  for (std::size_t i = 0; i < sgrid.size(); i += 7) xs.push_back(sgrid.at(i));
  std::vector<RatePair> c(xs.size()), d(xs.size());
  serial::improper_rates(ch, xs, c);
  omp::improper_rates(ch, xs, d);
  for (std::size_t i = 0; i < c.size(); ++i) {
    CHECK(c[i].r1 == d[i].r1);
    CHECK(c[i].r2 == d[i].r2);
    CHECK(c[i].r1 == rate_pair_improper(ch, xs[i]).r1);
  }
}

TEST_CASE("grid ties go to the lowest index") {
  // Both users silent: every node with p = 0 for the targeted user ties at zero.
  const auto ch = fixture::reference_channel();
  const PowerGrid grid{{0.0, 0.0}, 11};
  CHECK(serial::rate_balance_grid(ch, grid, RateProfile(0.5)).index == 0);
  CHECK(omp::rate_balance_grid(ch, grid, RateProfile(0.5)).index == 0);
}

TEST_CASE("map_indexed keeps order and rethrows the first failure") {
  for (Execution exec : {Execution::serial, Execution::parallel}) {
    const auto squares = map_indexed<std::size_t>(100, [](std::size_t i) { return i * i; }, exec);
    for (std::size_t i = 0; i < squares.size(); ++i) CHECK(squares[i] == i * i);

    auto failing = [](std::size_t i) -> int {
      if (i == 7 || i == 40) throw std::runtime_error(std::to_string(i));
      return 0;
    };
    try {
      map_indexed<int>(64, failing, exec);
      FAIL("expected an exception");
    } catch (const std::runtime_error& e) {
      CHECK(std::string(e.what()) == "7");
    }
  }
}
