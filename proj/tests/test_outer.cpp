#include <doctest.h>

#include <cmath>

#include "fixtures.hpp"
#include "tinregion/outer.hpp"

using namespace tin;

namespace {

void check_solution(const ChannelRealization& ch, const TimeSharingSolution& sol,
                    const RateProfile& profile, const PowerBudget& budget) {
  REQUIRE_FALSE(sol.strategies.empty());
  CHECK(sol.strategies.size() <= 4);
  double total = 0.0;
  for (const auto& s : sol.strategies) {
    CHECK(s.tau > 1e-9);
    total += s.tau;
    const RatePair r = rate_pair_proper(ch, s.p);
    CHECK(s.rates.r1 == r.r1);
    CHECK(s.rates.r2 == r.r2);
  }
  CHECK(std::abs(total - 1.0) <= 1e-9);
  const PowerVector avg = sol.average_powers();
  CHECK(avg[0] <= budget.p1 + 1e-9);
  CHECK(avg[1] <= budget.p2 + 1e-9);
  const RatePair rates = sol.average_rates();
  for (int k = 0; k < 2; ++k)
    if (profile.rho(k) > 0.0) CHECK(rates[k] >= profile.rho(k) * sol.R - 1e-9);
  CHECK(std::abs(sol.R - sol.dual_upper) <= 2e-4);
}

}  // namespace

TEST_CASE("relaxed dual with the origin as the only cut") {
  const std::vector<Cut> cuts{make_cut(fixture::reference_channel(), {0.0, 0.0}, CutOrigin::initial)};
  const LpSolution s = lp_solve(relaxed_dual_lp(cuts, fixture::kBudget, RateProfile(0.3)));
  REQUIRE(s.status == LpStatus::optimal);
  CHECK(s.objective == doctest::Approx(0.0));
  CHECK(s.primal[2] == doctest::Approx(0.0));
  CHECK(s.primal[3] == doctest::Approx(0.0));
  CHECK(0.3 * s.primal[0] + 0.7 * s.primal[1] == doctest::Approx(1.0));
}

TEST_CASE("relaxed dual layout") {
  const auto ch = fixture::reference_channel();
  const std::vector<Cut> cuts{make_cut(ch, {5.0, 5.0}, CutOrigin::initial),
                              make_cut(ch, {10.0, 0.0}, CutOrigin::bnb)};
  const LinearProgram lp = relaxed_dual_lp(cuts, fixture::kBudget, RateProfile(0.5));
  CHECK(lp.sense == Sense::minimize);
  CHECK(lp.num_variables() == 5);
  CHECK(lp.rows.size() == 3);
  CHECK(lp.bound(4) == LowerBound::unbounded);
  CHECK_THROWS_AS(relaxed_dual_lp({}, fixture::kBudget, RateProfile(0.5)), PreconditionError);
}

TEST_CASE("dual value of a zero multiplier") {
  const auto ch = fixture::reference_channel();
  const Cut cut = make_cut(ch, {3.0, 7.0}, CutOrigin::bnb);
  CHECK(achieved_dual_value(ch, DualPoint{}, fixture::kBudget, cut) == 0.0);
}

TEST_CASE("recovery from a single feasible cut") {
  const auto ch = fixture::reference_channel();
  const RateProfile profile(0.4);
  const std::vector<Cut> cuts{make_cut(ch, {4.0, 6.0}, CutOrigin::initial)};
  const TimeSharingSolution sol = primal_recover(ch, cuts, fixture::kBudget, profile);
  REQUIRE(sol.strategies.size() == 1);
  CHECK(sol.strategies[0].tau == doctest::Approx(1.0));
  const RatePair r = rate_pair_proper(ch, {4.0, 6.0});
  CHECK(sol.R == doctest::Approx(std::min(r.r1 / 0.4, r.r2 / 0.6)));
}

TEST_CASE("intercepts") {
  const auto ch = fixture::reference_channel();
  const TimeSharingSolution one = ts_point(ch, fixture::kBudget, RateProfile(1.0));
  CHECK(std::abs(one.R - fixture::kIntercept1) <= 1e-3);
  CHECK(one.strategies.size() == 1);
  CHECK(one.converged);
  check_solution(ch, one, RateProfile(1.0), fixture::kBudget);

  const TimeSharingSolution zero = ts_point(ch, fixture::kBudget, RateProfile(0.0));
  CHECK(std::abs(zero.R - fixture::kIntercept2) <= 1e-3);
  CHECK(zero.converged);
  check_solution(ch, zero, RateProfile(0.0), fixture::kBudget);
}

TEST_CASE("symmetric time-sharing point") {
  const auto ch = fixture::reference_channel();
  const RateProfile half(0.5);
  const TimeSharingSolution sol = ts_point(ch, fixture::kBudget, half);
  CHECK(sol.converged);
  const RatePair r = sol.average_rates();
  CHECK(std::abs(r.r1 - fixture::kSymmetricTs) <= 5e-3);
  CHECK(std::abs(r.r2 - fixture::kSymmetricTs) <= 5e-3);
  check_solution(ch, sol, half, fixture::kBudget);
}

TEST_CASE("cutting-plane bounds are monotone and bracket the value") {
  const auto ch = fixture::reference_channel();
  const CuttingPlaneResult cp = cutting_plane(ch, fixture::kBudget, RateProfile(0.7));
  CHECK(cp.converged);
  CHECK_FALSE(cp.inner_exhausted);
  for (std::size_t i = 1; i < cp.lower_history.size(); ++i)
    CHECK(cp.lower_history[i] >= cp.lower_history[i - 1]);
  for (std::size_t i = 1; i < cp.upper_history.size(); ++i)
    CHECK(cp.upper_history[i] <= cp.upper_history[i - 1]);
  CHECK(cp.upper - cp.lower <= 1e-4);
  const TimeSharingSolution sol = primal_recover(ch, cp.cuts, fixture::kBudget, RateProfile(0.7));
  CHECK(sol.R <= cp.upper + 1e-6);
}

TEST_CASE("several profiles") {
  const auto ch = fixture::reference_channel();
  for (double beta : {0.05, 0.2, 0.35, 0.65, 0.8, 0.95}) {
    CAPTURE(beta);
    const RateProfile profile(beta);
    const TimeSharingSolution sol = ts_point(ch, fixture::kBudget, profile);
    CHECK(sol.converged);
    check_solution(ch, sol, profile, fixture::kBudget);
  }
}

TEST_CASE("cut budget exhaustion is reported") {
  const auto ch = fixture::reference_channel();
  OuterConfig cfg;
  cfg.max_cuts = 2;
  const CuttingPlaneResult cp = cutting_plane(ch, fixture::kBudget, RateProfile(0.5), cfg);
  CHECK_FALSE(cp.converged);
  const TimeSharingSolution sol = ts_point(ch, fixture::kBudget, RateProfile(0.5), cfg);
  CHECK_FALSE(sol.converged);
}

TEST_CASE("single-user capacity") {
  const auto ch = fixture::reference_channel();
  CHECK(single_user_capacity(ch, fixture::kBudget, 0) ==
        doctest::Approx(std::log2(1.0 + 10.0 * 2.0310 * 2.0310)).epsilon(1e-12));
  CHECK(single_user_capacity(ch, fixture::kBudget, 1) ==
        doctest::Approx(std::log2(1.0 + 10.0 * 0.9935 * 0.9935)).epsilon(1e-12));
}
