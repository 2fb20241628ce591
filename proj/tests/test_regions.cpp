#include <doctest.h>

#include <algorithm>
#include <cmath>

#include "fixtures.hpp"
#include "tinregion/regions.hpp"

using namespace tin;

namespace {

bool same(const RatePair& a, const RatePair& b, double tol = 1e-12) {
  return std::abs(a.r1 - b.r1) <= tol && std::abs(a.r2 - b.r2) <= tol;
}

void check_convex_dominating(const std::vector<RatePair>& hull, const std::vector<RatePair>& points) {
  REQUIRE(hull.size() >= 2);
  for (std::size_t i = 1; i < hull.size(); ++i) CHECK(hull[i].r1 <= hull[i - 1].r1);
  // Outward turn at every interior vertex: slopes strictly decreasing.
  for (std::size_t i = 1; i + 1 < hull.size(); ++i) {
    const double ax = hull[i].r1 - hull[i - 1].r1, ay = hull[i].r2 - hull[i - 1].r2;
    const double bx = hull[i + 1].r1 - hull[i].r1, by = hull[i + 1].r2 - hull[i].r2;
    CHECK(ax * by - ay * bx > 0.0);
  }
  for (const RatePair& p : points) {
    const double sum = p.r1 + p.r2;
    if (sum <= 0.0) continue;
    CHECK(ray_value(hull, RateProfile(p.r1 / sum)) >= sum - 1e-9);
  }
}

}  // namespace

TEST_CASE("method names") {
  for (Method m : {Method::pure_proper, Method::hull_proper, Method::ts_proper,
                   Method::pure_improper_samples, Method::hull_improper})
    CHECK(parse_method(to_string(m)) == m);
  CHECK_FALSE(parse_method("proper").has_value());
}

TEST_CASE("hull examples") {
  const std::vector<RatePair> below{{1.0, 0.0}, {0.0, 1.0}, {0.4, 0.4}};
  const auto h1 = upper_right_hull(below);
  REQUIRE(h1.size() == 2);
  CHECK(same(h1[0], {1.0, 0.0}));
  CHECK(same(h1[1], {0.0, 1.0}));

  const std::vector<RatePair> above{{1.0, 0.0}, {0.0, 1.0}, {0.6, 0.6}};
  const auto h2 = upper_right_hull(above);
  REQUIRE(h2.size() == 3);
  CHECK(same(h2[0], {1.0, 0.0}));
  CHECK(same(h2[1], {0.6, 0.6}));
  CHECK(same(h2[2], {0.0, 1.0}));

  CHECK_THROWS_AS(upper_right_hull(std::vector<RatePair>{}), PreconditionError);
}

TEST_CASE("hull of interior points includes the axis projections") {
  const std::vector<RatePair> pts{{2.0, 1.0}, {1.0, 2.0}};
  const auto h = upper_right_hull(pts);
  REQUIRE(h.size() == 4);
  CHECK(same(h.front(), {2.0, 0.0}));
  CHECK(same(h.back(), {0.0, 2.0}));
  check_convex_dominating(h, pts);
}

TEST_CASE("hull of random point clouds") {
  std::vector<RatePair> pts;
  std::uint64_t state = 12345;
  auto next = [&]() {
    state = state * 6364136223846793005ULL + 1442695040888963407ULL;
    return static_cast<double>(state >> 11) * 0x1.0p-53;
  };
  for (int i = 0; i < 500; ++i) pts.push_back({3.0 * next(), 2.0 * next()});
  check_convex_dominating(upper_right_hull(pts), pts);
}

TEST_CASE("ray values on a polygon") {
  const std::vector<RatePair> square{{1.0, 0.0}, {1.0, 1.0}, {0.0, 1.0}};
  CHECK(ray_value(square, RateProfile(1.0)) == doctest::Approx(1.0));
  CHECK(ray_value(square, RateProfile(0.0)) == doctest::Approx(1.0));
  CHECK(ray_value(square, RateProfile(0.5)) == doctest::Approx(2.0));
  CHECK(ray_value(square, RateProfile(0.25)) == doctest::Approx(4.0 / 3.0));
}

TEST_CASE("beta grid") {
  const auto b = beta_grid(5);
  REQUIRE(b.size() == 5);
  CHECK(b.front() == 1.0);
  CHECK(b[2] == 0.5);
  CHECK(b.back() == 0.0);
  CHECK(beta_grid(1) == std::vector<double>{0.5});
}

TEST_CASE("pure proper points") {
  const auto ch = fixture::reference_channel();
  const PureProperPoint one = pure_proper_point(ch, fixture::kBudget, RateProfile(1.0));
  CHECK(std::abs(one.R - fixture::kIntercept1) <= 1e-6);
  CHECK(one.p[0] == 10.0);
  CHECK(one.p[1] == 0.0);

  const PureProperPoint half = pure_proper_point(ch, fixture::kBudget, RateProfile(0.5));
  CHECK(std::abs(half.rates.r1 - fixture::kSymmetricPure) <= 1e-3);
  CHECK(std::abs(half.rates.r2 - fixture::kSymmetricPure) <= 1e-3);

  const PureProperPoint none = pure_proper_point(ch, PowerBudget{0.0, 0.0}, RateProfile(0.5));
  CHECK(none.R == 0.0);
}

TEST_CASE("pure proper refinement beats the coarse grid") {
  const auto ch = fixture::reference_channel();
  RegionConfig coarse;
  coarse.proper_grid = 11;
  for (double beta : {0.2, 0.5, 0.8}) {
    const PureProperPoint fine = pure_proper_point(ch, fixture::kBudget, RateProfile(beta));
    const PureProperPoint rough = pure_proper_point(ch, fixture::kBudget, RateProfile(beta), coarse);
    CHECK(rough.R == doctest::Approx(fine.R).epsilon(1e-6));
  }
}

TEST_CASE("proper convex hull is a single chord") {
  const auto ch = fixture::reference_channel();
  std::vector<RatePair> pts;
  for (double beta : beta_grid(101))
    pts.push_back(pure_proper_point(ch, fixture::kBudget, RateProfile(beta)).rates);
  const auto hull = upper_right_hull(pts);
  REQUIRE(hull.size() == 2);
  CHECK(std::abs(hull[0].r1 - 5.401) < 1e-3);
  CHECK(std::abs(hull[1].r2 - 3.442) < 1e-3);
}

TEST_CASE("improper samples are deterministic and reach the reference point") {
  const auto ch = fixture::reference_channel();
  SamplingConfig s;
  s.random_samples = 1000;
  s.seed = 4;
  const auto a = pure_improper_samples(ch, fixture::kBudget, s, kernels::Execution::serial);
  const auto b = pure_improper_samples(ch, fixture::kBudget, s, kernels::Execution::parallel);
  REQUIRE(a.size() == b.size());
  for (std::size_t i = 0; i < a.size(); ++i) CHECK(same(a[i], b[i], 0.0));

  double best = INFINITY;
  for (const RatePair& r : a)
    best = std::min(best, std::max(std::abs(r.r1 - 3.191), std::abs(r.r2 - 2.112)));
  CHECK(best <= 0.05);
}

TEST_CASE("ts sweep over three profiles") {
  const auto ch = fixture::reference_channel();
  const std::vector<double> betas = beta_grid(3);
  const RegionBoundary ts = sweep_boundary(Method::ts_proper, ch, fixture::kBudget, betas);
  REQUIRE(ts.entries.size() == 3);
  CHECK(ts.entries[0].beta == 1.0);
  CHECK(std::abs(ts.entries[0].rates.r1 - fixture::kIntercept1) <= 1e-3);
  CHECK(ts.entries[0].rates.r2 == doctest::Approx(0.0));
  CHECK(std::abs(ts.entries[1].rates.r1 - fixture::kSymmetricTs) <= 5e-3);
  CHECK(std::abs(ts.entries[1].rates.r2 - fixture::kSymmetricTs) <= 5e-3);
  CHECK(std::abs(ts.entries[2].rates.r2 - fixture::kIntercept2) <= 1e-3);
  for (const auto& e : ts.entries) CHECK(e.converged);
}

TEST_CASE("nesting on a coarse sweep") {
  const auto ch = fixture::reference_channel();
  const auto betas = beta_grid(11);
  RegionConfig cfg;
  const auto pure = sweep_boundary(Method::pure_proper, ch, fixture::kBudget, betas, cfg);
  const auto hull = sweep_boundary(Method::hull_proper, ch, fixture::kBudget, betas, cfg);
  const auto ts = sweep_boundary(Method::ts_proper, ch, fixture::kBudget, betas, cfg);
  for (std::size_t i = 0; i < betas.size(); ++i) {
    CAPTURE(betas[i]);
    CHECK(hull.entries[i].R >= pure.entries[i].R - 1e-6);
    CHECK(ts.entries[i].R >= hull.entries[i].R - 1e-6);
  }
}

TEST_CASE("sweeps reject bad profiles") {
  const auto ch = fixture::reference_channel();
  CHECK_THROWS_AS(sweep_boundary(Method::pure_proper, ch, fixture::kBudget, std::vector<double>{}),
                  PreconditionError);
  CHECK_THROWS_AS(sweep_boundary(Method::pure_proper, ch, fixture::kBudget, std::vector<double>{1.5}),
                  PreconditionError);
}

TEST_CASE("containment harness") {
  const auto ch = fixture::reference_channel();
  RegionConfig cfg;
  Theorem1Options opt;
  opt.trials = 200;
  opt.boundary_betas = 51;

  const Theorem1Report improper = theorem1_check(ch, fixture::kBudget, cfg, opt);
  CHECK(improper.passed());
  CHECK(improper.max_violation <= 5e-3);

  opt.proper_only = true;
  CHECK(theorem1_check(ch, fixture::kBudget, cfg, opt).passed());

  opt.proper_only = false;
  ChannelRealization doubled = ch;
  for (auto& row : doubled.gain)
    for (auto& h : row) h *= 2.0;
  CHECK(theorem1_check(doubled, fixture::kBudget, cfg, opt).passed());
}

TEST_CASE("bound harness") {
  const auto ch = fixture::reference_channel();
  const Lemma1Report r = lemma1_check(ch, fixture::kBudget, 5000, 7);
  CHECK(r.passed());
  CHECK(r.trials == 5000);
  CHECK(r.max_bound_violation <= 1e-12);
  CHECK(r.max_alignment_error <= 1e-9);
  CHECK(r.simultaneous_alignment);
  const Lemma1Report again = lemma1_check(ch, fixture::kBudget, 5000, 7, kernels::Execution::serial);
  CHECK(again.max_bound_violation == r.max_bound_violation);
  CHECK(again.max_alignment_error == r.max_alignment_error);
}
