#pragma once

// Rate-region constructions (pure proper, sampled improper, convex hulls,
// coded time-sharing) and the numerical checks of the propriety results.

#include <cstdint>
#include <optional>
#include <span>
#include <string>
#include <string_view>
#include <vector>

#include "tinregion/kernels.hpp"
#include "tinregion/model.hpp"
#include "tinregion/outer.hpp"

namespace tin {

enum class Method { pure_proper, hull_proper, ts_proper, pure_improper_samples, hull_improper };

std::string_view to_string(Method method);
std::optional<Method> parse_method(std::string_view name);

struct SamplingConfig {
  std::uint64_t seed = 1;
  std::size_t power_grid = 31;
  std::size_t impropriety_grid = 11;
  std::size_t phase_grid = 24;
  std::size_t random_samples = 0;

  void validate() const;
};

struct RegionConfig {
  OuterConfig outer;
  SamplingConfig sampling;
  std::size_t proper_grid = 201;    // nodes per axis of the pure-proper search
  std::size_t hull_betas = 101;     // profiles feeding the proper convex hull
  kernels::Execution execution = kernels::Execution::parallel;
};

struct RegionEntry {
  double beta = 0.0;
  RatePair rates;
  double R = 0.0;
  Method method = Method::ts_proper;
  bool converged = true;
};

struct RegionBoundary {
  std::vector<RegionEntry> entries;
};

struct PureProperPoint {
  double R = 0.0;
  PowerVector p{};
  RatePair rates;
};

/// max over p in [0,P1]x[0,P2] of min_k r_k(p)/rho_k: dense grid, then
/// golden-section refinement along each coordinate around the best node and
/// along the two full-power edges.
PureProperPoint pure_proper_point(const ChannelRealization& ch, const PowerBudget& budget,
                                  const RateProfile& profile, const RegionConfig& cfg = {});

/// Rate pairs of the strategy grid followed by `random_samples` seeded
/// random strategies, in that order.
std::vector<RatePair> pure_improper_samples(const ChannelRealization& ch, const PowerBudget& budget,
                                            const SamplingConfig& sampling,
                                            kernels::Execution exec = kernels::Execution::parallel);

/// Vertices of the upper-right face of conv(points and their projections
/// on both axes), from (max r1, 0) to (0, max r2), sorted by r1 descending.
std::vector<RatePair> upper_right_hull(std::span<const RatePair> points);

/// Largest R with R * rho on or below the piecewise-linear face through
/// `vertices` (as returned by upper_right_hull).
double ray_value(std::span<const RatePair> vertices, const RateProfile& profile);

/// Profiles 1, 1 - 1/(n-1), ..., 0.
std::vector<double> beta_grid(std::size_t count);

RegionBoundary sweep_boundary(Method method, const ChannelRealization& ch,
                              const PowerBudget& budget, std::span<const double> betas,
                              const RegionConfig& cfg = {});

struct Theorem1Report {
  std::size_t trials = 0;
  std::size_t violations = 0;
  double max_violation = 0.0;  // signed distance in bits outside the proper time-sharing region
  double tolerance = 5e-3;
  std::size_t boundary_points = 0;
  bool boundary_converged = true;

  bool passed() const { return violations == 0 && boundary_converged; }
};

struct Theorem1Options {
  std::size_t trials = 1000;
  std::uint64_t seed = 1;
  std::size_t boundary_betas = 101;
  bool proper_only = false;
};

/// Falsification harness: random time-sharing combinations of up to four
/// (improper) strategies under average power constraints must stay inside
/// the proper time-sharing region.
Theorem1Report theorem1_check(const ChannelRealization& ch, const PowerBudget& budget,
                              const RegionConfig& cfg, const Theorem1Options& options);

struct Lemma1Report {
  std::size_t trials = 0;
  std::size_t bound_violations = 0;
  double max_bound_violation = 0.0;     // max r_k - rbar_k on the original channel
  double max_alignment_error = 0.0;     // max |r_k - rbar_k| on the enhanced channel, aligned
  double max_enhancement_difference = 0.0;  // max |rbar(original) - rbar(enhanced)|
  double max_proper_difference = 0.0;   // max |r(original) - r(enhanced)| with kappa = 0
  bool simultaneous_alignment = false;  // enhanced channel admits a common phase pair

  static constexpr double kBoundTolerance = 1e-12;
  static constexpr double kAlignmentTolerance = 1e-9;
  static constexpr double kInvarianceTolerance = 1e-12;

  bool passed() const;
};

Lemma1Report lemma1_check(const ChannelRealization& ch, const PowerBudget& budget,
                          std::size_t trials, std::uint64_t seed,
                          kernels::Execution exec = kernels::Execution::parallel);

}  // namespace tin
