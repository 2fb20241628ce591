#include "tinregion/regions.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <numbers>
#include <random>

#include "tinregion/lp.hpp"

namespace tin {

namespace {

using kernels::Execution;

constexpr double kGoldenTolerance = 1e-6;
constexpr double kTwoPi = 2.0 * std::numbers::pi;

double uniform01(std::mt19937_64& rng) {
  return static_cast<double>(rng() >> 11) * 0x1.0p-53;
}

std::mt19937_64 stream(std::uint64_t seed, std::uint64_t index) {
  std::seed_seq seq{static_cast<std::uint32_t>(seed), static_cast<std::uint32_t>(seed >> 32),
                    static_cast<std::uint32_t>(index), static_cast<std::uint32_t>(index >> 32)};
  return std::mt19937_64(seq);
}

// Variances are silent, at the cap, or uniform with equal odds, so that
// candidates reach the edges of the region where the boundary is attained.
TransmitStrategy edge_biased_strategy(std::mt19937_64& rng, double cap1, double cap2) {
  TransmitStrategy x;
  const double caps[2] = {cap1, cap2};
  for (int k = 0; k < 2; ++k) {
    const double u = uniform01(rng);
    x.variance[k] = u < 1.0 / 3.0 ? 0.0 : u < 2.0 / 3.0 ? caps[k] : caps[k] * uniform01(rng);
    x.impropriety[k] = x.variance[k] * uniform01(rng);
    x.phase[k] = kTwoPi * uniform01(rng);
  }
  return x;
}

TransmitStrategy random_strategy(std::mt19937_64& rng, double cap1, double cap2) {
  TransmitStrategy x;
  x.variance = {cap1 * uniform01(rng), cap2 * uniform01(rng)};
  x.impropriety = {x.variance[0] * uniform01(rng), x.variance[1] * uniform01(rng)};
  x.phase = {kTwoPi * uniform01(rng), kTwoPi * uniform01(rng)};
  for (int k = 0; k < 2; ++k) x.impropriety[k] = std::min(x.impropriety[k], x.variance[k]);
  return x;
}

// Maximizes a unimodal function on [lo, hi]; endpoints are also checked.
template <class Fn>
std::pair<double, double> golden_max(Fn fn, double lo, double hi) {
  const double inv_phi = (std::sqrt(5.0) - 1.0) / 2.0;
  double best_x = lo;
  double best_v = fn(lo);
  if (const double v = fn(hi); v > best_v) {
    best_x = hi;
    best_v = v;
  }
  double a = lo, b = hi;
  double c = b - inv_phi * (b - a);
  double d = a + inv_phi * (b - a);
  double fc = fn(c), fd = fn(d);
  while (b - a > kGoldenTolerance) {
    if (fc >= fd) {
      b = d;
      d = c;
      fd = fc;
      c = b - inv_phi * (b - a);
      fc = fn(c);
    } else {
      a = c;
      c = d;
      fc = fd;
      d = a + inv_phi * (b - a);
      fd = fn(d);
    }
  }
  for (auto [x, v] : {std::pair{c, fc}, std::pair{d, fd}})
    if (v > best_v) {
      best_x = x;
      best_v = v;
    }
  return {best_x, best_v};
}

double cross(const RatePair& a, const RatePair& b) { return a.r1 * b.r2 - a.r2 * b.r1; }

RegionEntry entry_from_ray(double beta, double R, Method method) {
  const RateProfile profile(beta);
  return {beta, {R * profile.rho(0), R * profile.rho(1)}, R, method, true};
}

RatePair rates_of(const PureProperPoint& p) { return p.rates; }

}  // namespace

std::string_view to_string(Method method) {
  switch (method) {
    case Method::pure_proper: return "pure-proper";
    case Method::hull_proper: return "hull-proper";
    case Method::ts_proper: return "ts-proper";
    case Method::pure_improper_samples: return "pure-improper-samples";
    case Method::hull_improper: return "hull-improper";
  }
  return "unknown";
}

std::optional<Method> parse_method(std::string_view name) {
  for (Method m : {Method::pure_proper, Method::hull_proper, Method::ts_proper,
                   Method::pure_improper_samples, Method::hull_improper})
    if (to_string(m) == name) return m;
  return std::nullopt;
}

void SamplingConfig::validate() const {
  if (power_grid < 2 || impropriety_grid < 2 || phase_grid < 2)
    throw PreconditionError("sampling grids need at least two nodes");
}

PureProperPoint pure_proper_point(const ChannelRealization& ch, const PowerBudget& budget,
                                  const RateProfile& profile, const RegionConfig& cfg) {
  budget.validate();
  const kernels::PowerGrid grid{budget, std::max<std::size_t>(cfg.proper_grid, 2)};
  const kernels::GridBest start = cfg.execution == Execution::parallel
                                      ? kernels::omp::rate_balance_grid(ch, grid, profile)
                                      : kernels::serial::rate_balance_grid(ch, grid, profile);

  auto value = [&](const PowerVector& p) {
    return kernels::balanced_value(rate_pair_proper(ch, p), profile);
  };
  PowerVector best_p = start.p;
  double best_v = start.value;
  auto consider = [&](const PowerVector& p, double v) {
    if (v > best_v) {
      best_v = v;
      best_p = p;
    }
  };

  // Coordinate-wise refinement within one grid cell of the best node.
  const double step[2] = {budget.p1 / static_cast<double>(grid.points - 1),
                          budget.p2 / static_cast<double>(grid.points - 1)};
  PowerVector p = start.p;
  double v = start.value;
  for (int round = 0; round < 20; ++round) {
    const double before = v;
    for (int k = 0; k < 2; ++k) {
      const double lo = std::max(0.0, p[k] - step[k]);
      const double hi = std::min(budget[k], p[k] + step[k]);
      auto along = [&](double x) {
        PowerVector q = p;
        q[k] = x;
        return value(q);
      };
      const auto [x, vx] = golden_max(along, lo, hi);
      if (vx > v) {
        p[k] = x;
        v = vx;
      }
    }
    if (v - before <= 1e-15) break;
  }
  consider(p, v);

  // Full-power edges: along each, min_k r_k/rho_k is unimodal.
  for (int k = 0; k < 2; ++k) {
    const int j = 1 - k;
    auto along = [&](double x) {
      PowerVector q{};
      q[k] = budget[k];
      q[j] = x;
      return value(q);
    };
    const auto [x, vx] = golden_max(along, 0.0, budget[j]);
    PowerVector q{};
    q[k] = budget[k];
    q[j] = x;
    consider(q, vx);
  }
  return {best_v, best_p, rate_pair_proper(ch, best_p)};
}

std::vector<RatePair> pure_improper_samples(const ChannelRealization& ch, const PowerBudget& budget,
                                            const SamplingConfig& sampling, Execution exec) {
  sampling.validate();
  budget.validate();
  const kernels::StrategyGrid grid{budget, sampling.power_grid, sampling.impropriety_grid,
                                   sampling.phase_grid};
  std::vector<RatePair> out(grid.size() + sampling.random_samples);
  std::span<RatePair> grid_part(out.data(), grid.size());

  std::vector<TransmitStrategy> random(sampling.random_samples);
  std::mt19937_64 rng(sampling.seed);
  for (auto& x : random) {
    x = random_strategy(rng, budget.p1, budget.p2);
    x.phase[1] = 0.0;
  }
  std::span<RatePair> random_part(out.data() + grid.size(), random.size());

  if (exec == Execution::parallel) {
    kernels::omp::improper_rates(ch, grid, grid_part);
    kernels::omp::improper_rates(ch, random, random_part);
  } else {
    kernels::serial::improper_rates(ch, grid, grid_part);
    kernels::serial::improper_rates(ch, random, random_part);
  }
  return out;
}

std::vector<RatePair> upper_right_hull(std::span<const RatePair> points) {
  if (points.empty()) throw PreconditionError("convex hull of an empty point set");
  double r1max = 0.0, r2max = 0.0;
  for (const RatePair& p : points) {
    if (!std::isfinite(p.r1) || !std::isfinite(p.r2) || p.r1 < 0.0 || p.r2 < 0.0)
      throw PreconditionError("rate pairs must be finite and nonnegative");
    r1max = std::max(r1max, p.r1);
    r2max = std::max(r2max, p.r2);
  }
  std::vector<RatePair> pts(points.begin(), points.end());
  pts.push_back({r1max, 0.0});
  pts.push_back({0.0, r2max});
  // r1 ascending, r2 descending within equal r1.
  std::sort(pts.begin(), pts.end(), [](const RatePair& a, const RatePair& b) {
    return a.r1 < b.r1 || (a.r1 == b.r1 && a.r2 > b.r2);
  });
  pts.erase(std::unique(pts.begin(), pts.end(),
                        [](const RatePair& a, const RatePair& b) { return a.r1 == b.r1 && a.r2 == b.r2; }),
            pts.end());

  std::vector<RatePair> chain;
  for (const RatePair& p : pts) {
    while (chain.size() >= 2) {
      const RatePair& o = chain[chain.size() - 2];
      const RatePair& a = chain.back();
      const RatePair oa{a.r1 - o.r1, a.r2 - o.r2};
      const RatePair op{p.r1 - o.r1, p.r2 - o.r2};
      if (cross(oa, op) >= 0.0)
        chain.pop_back();
      else
        break;
    }
    chain.push_back(p);
  }
  std::reverse(chain.begin(), chain.end());
  return chain;
}

double ray_value(std::span<const RatePair> vertices, const RateProfile& profile) {
  const RatePair d{profile.rho(0), profile.rho(1)};
  double best = 0.0;
  for (const RatePair& v : vertices)
    if (cross(v, d) == 0.0 && v.r1 * d.r1 + v.r2 * d.r2 >= 0.0)
      best = std::max(best, (v.r1 * d.r1 + v.r2 * d.r2) / (d.r1 * d.r1 + d.r2 * d.r2));
  for (std::size_t i = 0; i + 1 < vertices.size(); ++i) {
    const RatePair& a = vertices[i];
    const RatePair& b = vertices[i + 1];
    const RatePair ab{b.r1 - a.r1, b.r2 - a.r2};
    const double denom = cross(d, ab);
    if (denom == 0.0) continue;
    const double s = -cross(d, a) / denom;
    if (s < 0.0 || s > 1.0) continue;
    const RatePair hit{a.r1 + s * ab.r1, a.r2 + s * ab.r2};
    const double t = (hit.r1 * d.r1 + hit.r2 * d.r2) / (d.r1 * d.r1 + d.r2 * d.r2);
    best = std::max(best, t);
  }
  return best;
}

std::vector<double> beta_grid(std::size_t count) {
  if (count == 0) return {};
  if (count == 1) return {0.5};
  std::vector<double> betas(count);
  const double n = static_cast<double>(count - 1);
  for (std::size_t i = 0; i < count; ++i) betas[i] = static_cast<double>(count - 1 - i) / n;
  return betas;
}

RegionBoundary sweep_boundary(Method method, const ChannelRealization& ch,
                              const PowerBudget& budget, std::span<const double> betas,
                              const RegionConfig& cfg) {
  if (betas.empty()) throw PreconditionError("sweep needs at least one profile");
  for (double b : betas) RateProfile{b};
  const Execution exec = cfg.execution;
  RegionBoundary out;

  switch (method) {
    case Method::pure_proper: {
      out.entries = kernels::map_indexed<RegionEntry>(
          betas.size(),
          [&](std::size_t i) {
            const PureProperPoint pt = pure_proper_point(ch, budget, RateProfile(betas[i]), cfg);
            return RegionEntry{betas[i], pt.rates, pt.R, method, true};
          },
          exec);
      break;
    }
    case Method::hull_proper: {
      std::vector<double> hull_betas = beta_grid(std::max<std::size_t>(cfg.hull_betas, 2));
      hull_betas.insert(hull_betas.end(), betas.begin(), betas.end());
      const auto points = kernels::map_indexed<RatePair>(
          hull_betas.size(),
          [&](std::size_t i) {
            return rates_of(pure_proper_point(ch, budget, RateProfile(hull_betas[i]), cfg));
          },
          exec);
      const auto hull = upper_right_hull(points);
      for (double b : betas) out.entries.push_back(entry_from_ray(b, ray_value(hull, RateProfile(b)), method));
      break;
    }
    case Method::ts_proper: {
      out.entries = kernels::map_indexed<RegionEntry>(
          betas.size(),
          [&](std::size_t i) {
            const TimeSharingSolution sol = ts_point(ch, budget, RateProfile(betas[i]), cfg.outer);
            return RegionEntry{betas[i], sol.average_rates(), sol.R, method, sol.converged};
          },
          exec);
      break;
    }
    case Method::pure_improper_samples: {
      const auto samples = pure_improper_samples(ch, budget, cfg.sampling, exec);
      for (double b : betas) {
        const RateProfile profile(b);
        RegionEntry best{b, {}, -1.0, method, true};
        for (const RatePair& r : samples)
          if (const double v = kernels::balanced_value(r, profile); v > best.R) {
            best.R = v;
            best.rates = r;
          }
        out.entries.push_back(best);
      }
      break;
    }
    case Method::hull_improper: {
      const auto hull = upper_right_hull(pure_improper_samples(ch, budget, cfg.sampling, exec));
      for (double b : betas) out.entries.push_back(entry_from_ray(b, ray_value(hull, RateProfile(b)), method));
      break;
    }
  }
  return out;
}

Theorem1Report theorem1_check(const ChannelRealization& ch, const PowerBudget& budget,
                              const RegionConfig& cfg, const Theorem1Options& options) {
  const auto betas = beta_grid(std::max<std::size_t>(options.boundary_betas, 2));
  const RegionBoundary boundary = sweep_boundary(Method::ts_proper, ch, budget, betas, cfg);

  Theorem1Report report;
  report.trials = options.trials;
  report.boundary_points = boundary.entries.size();
  std::vector<RatePair> points;
  for (const auto& e : boundary.entries) {
    points.push_back(e.rates);
    report.boundary_converged = report.boundary_converged && e.converged;
  }
  // Achievable points of a convex region: their hull is an inner approximation.
  const auto face = upper_right_hull(points);

  const auto violation = kernels::map_indexed<double>(
      options.trials,
      [&](std::size_t trial) {
        std::mt19937_64 rng = stream(options.seed, trial);
        const std::size_t count = 1 + rng() % 4;
        std::vector<TransmitStrategy> strategies;
        std::vector<RatePair> rates;
        for (std::size_t l = 0; l < count; ++l) {
          // The first strategy respects the budget so the weights are feasible.
          const double scale = l == 0 ? 1.0 : 2.0;
          TransmitStrategy x = edge_biased_strategy(rng, scale * budget.p1, scale * budget.p2);
          if (options.proper_only) x.impropriety = {0.0, 0.0};
          strategies.push_back(x);
          rates.push_back(rate_pair_improper(ch, x));
        }
        const RateProfile profile(uniform01(rng));

        LinearProgram lp;
        lp.objective.assign(count + 1, 0.0);
        lp.objective[count] = 1.0;
        lp.bounds.assign(count + 1, LowerBound::zero);
        lp.bounds[count] = LowerBound::unbounded;
        for (int k = 0; k < 2; ++k) {
          Constraint rate{std::vector<double>(count + 1), Relation::greater_equal, 0.0};
          Constraint power{std::vector<double>(count + 1), Relation::less_equal, budget[k]};
          for (std::size_t l = 0; l < count; ++l) {
            rate.coefficients[l] = rates[l][k];
            power.coefficients[l] = strategies[l].variance[k];
          }
          rate.coefficients[count] = -profile.rho(k);
          lp.rows.push_back(std::move(rate));
          lp.rows.push_back(std::move(power));
        }
        Constraint simplex{std::vector<double>(count + 1, 1.0), Relation::equal, 1.0};
        simplex.coefficients[count] = 0.0;
        lp.rows.push_back(std::move(simplex));
        const LpSolution sol = lp_solve(lp);
        if (sol.status != LpStatus::optimal)
          throw InvariantError("containment trial LP is " + std::string(to_string(sol.status)));

        RatePair avg;
        for (std::size_t l = 0; l < count; ++l) {
          avg.r1 += sol.primal[l] * rates[l].r1;
          avg.r2 += sol.primal[l] * rates[l].r2;
        }
        const double sum = avg.r1 + avg.r2;
        if (sum <= 0.0) return -ray_value(face, RateProfile(0.5));
        const RateProfile direction(std::clamp(avg.r1 / sum, 0.0, 1.0));
        return sum - ray_value(face, direction);
      },
      cfg.execution);

  // Signed: a negative maximum is the closest approach to the boundary.
  report.max_violation = violation.empty() ? 0.0 : -std::numeric_limits<double>::infinity();
  for (double v : violation) {
    report.max_violation = std::max(report.max_violation, v);
    if (v > report.tolerance) ++report.violations;
  }
  return report;
}

bool Lemma1Report::passed() const {
  return bound_violations == 0 && max_alignment_error <= kAlignmentTolerance &&
         max_enhancement_difference <= kInvarianceTolerance &&
         max_proper_difference <= kInvarianceTolerance && simultaneous_alignment;
}

Lemma1Report lemma1_check(const ChannelRealization& ch, const PowerBudget& budget,
                          std::size_t trials, std::uint64_t seed, Execution exec) {
  const ChannelRealization enhanced = enhance(ch);
  const AlignmentPhases align = alignment_phases(enhanced);

  struct Sample {
    double bound_violation;
    double alignment_error;
    double enhancement_difference;
    double proper_difference;
  };
  const auto samples = kernels::map_indexed<Sample>(
      trials,
      [&](std::size_t trial) {
        std::mt19937_64 rng = stream(seed, trial);
        const TransmitStrategy x = random_strategy(rng, budget.p1, budget.p2);
        Sample s{};
        const RatePair r = rate_pair_improper(ch, x);
        const RatePair bound = rate_upper_bound(ch, x);
        const RatePair bound_enh = rate_upper_bound(enhanced, x);

        TransmitStrategy aligned = x;
        aligned.phase[0] = wrap_phase(x.phase[1] + align.psi1);
        const RatePair r_aligned = rate_pair_improper(enhanced, aligned);
        const RatePair bound_aligned = rate_upper_bound(enhanced, aligned);

        const TransmitStrategy proper = TransmitStrategy::proper(x.variance);
        const RatePair rp = rate_pair_improper(ch, proper);
        const RatePair rp_enh = rate_pair_improper(enhanced, proper);

        s.bound_violation = std::max(r.r1 - bound.r1, r.r2 - bound.r2);
        for (int k = 0; k < 2; ++k) {
          s.alignment_error = std::max(s.alignment_error, std::abs(r_aligned[k] - bound_aligned[k]));
          s.enhancement_difference = std::max(s.enhancement_difference, std::abs(bound[k] - bound_enh[k]));
          s.proper_difference = std::max(s.proper_difference, std::abs(rp[k] - rp_enh[k]));
        }
        return s;
      },
      exec);

  Lemma1Report report;
  report.trials = trials;
  report.simultaneous_alignment = align.simultaneous;
  report.max_bound_violation = -std::numeric_limits<double>::infinity();
  for (const Sample& s : samples) {
    report.max_bound_violation = std::max(report.max_bound_violation, s.bound_violation);
    if (s.bound_violation > Lemma1Report::kBoundTolerance) ++report.bound_violations;
    report.max_alignment_error = std::max(report.max_alignment_error, s.alignment_error);
    report.max_enhancement_difference = std::max(report.max_enhancement_difference, s.enhancement_difference);
    report.max_proper_difference = std::max(report.max_proper_difference, s.proper_difference);
  }
  if (trials == 0) report.max_bound_violation = 0.0;
  return report;
}

}  // namespace tin
