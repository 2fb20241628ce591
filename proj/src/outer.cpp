#include "tinregion/outer.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <numbers>

namespace tin {

namespace {

constexpr double kActiveTau = 1e-9;
constexpr double kDuplicateCut = 1e-12;
constexpr std::size_t kMaxActive = 4;
constexpr double kLpSlack = 1e-8;  // recovery LP value vs. relaxed dual value

bool same_power(const PowerVector& a, const PowerVector& b) {
  return std::abs(a[0] - b[0]) <= kDuplicateCut && std::abs(a[1] - b[1]) <= kDuplicateCut;
}

// Endpoint profiles: one user alone at full power, priced by its KKT point.
CuttingPlaneResult single_user_solution(const ChannelRealization& ch, const PowerBudget& budget,
                                        int k) {
  CuttingPlaneResult out;
  PowerVector p{};
  p[k] = budget[k];
  out.cuts.push_back(make_cut(ch, p, CutOrigin::initial));
  const double gain = ch.power_gain(k, k);
  out.dual.mu[k] = 1.0;
  out.dual.lambda[k] = gain / (std::numbers::ln2 * (ch.noise[k] + gain * budget[k]));
  out.lower = out.upper = single_user_capacity(ch, budget, k);
  out.lower_history = {out.lower};
  out.upper_history = {out.upper};
  out.converged = true;
  return out;
}

double balanced_rate(const RatePair& rates, const RateProfile& profile) {
  double value = std::numeric_limits<double>::infinity();
  for (int k = 0; k < 2; ++k)
    if (profile.rho(k) > 0.0) value = std::min(value, rates[k] / profile.rho(k));
  return value;
}

}  // namespace

Cut make_cut(const ChannelRealization& ch, const PowerVector& p, CutOrigin origin) {
  return {p, rate_pair_proper(ch, p), origin};
}

RatePair TimeSharingSolution::average_rates() const {
  RatePair avg;
  for (const auto& s : strategies) {
    avg.r1 += s.tau * s.rates.r1;
    avg.r2 += s.tau * s.rates.r2;
  }
  return avg;
}

PowerVector TimeSharingSolution::average_powers() const {
  PowerVector avg{};
  for (const auto& s : strategies) {
    avg[0] += s.tau * s.p[0];
    avg[1] += s.tau * s.p[1];
  }
  return avg;
}

void OuterConfig::validate() const {
  if (!(epsilon_cp > 0.0)) throw PreconditionError("cutting-plane epsilon must be positive");
  if (max_cuts < 2) throw PreconditionError("cut budget must allow at least two cuts");
  inner.validate();
}

double single_user_capacity(const ChannelRealization& ch, const PowerBudget& budget, int k) {
  return std::log1p(ch.power_gain(k, k) * budget[k] / ch.noise[k]) / std::numbers::ln2;
}

LinearProgram relaxed_dual_lp(const std::vector<Cut>& cuts, const PowerBudget& budget,
                              const RateProfile& profile) {
  if (cuts.empty()) throw PreconditionError("relaxed dual needs at least one cut");
  LinearProgram lp;
  lp.sense = Sense::minimize;
  lp.objective = {0.0, 0.0, 0.0, 0.0, 1.0};
  lp.bounds = {LowerBound::zero, LowerBound::zero, LowerBound::zero, LowerBound::zero,
               LowerBound::unbounded};
  lp.rows.push_back({{profile.rho(0), profile.rho(1), 0.0, 0.0, 0.0}, Relation::equal, 1.0});
  for (const Cut& cut : cuts)
    lp.rows.push_back({{-cut.rates.r1, -cut.rates.r2, -(budget.p1 - cut.p[0]),
                        -(budget.p2 - cut.p[1]), 1.0},
                       Relation::greater_equal,
                       0.0});
  return lp;
}

double achieved_dual_value(const ChannelRealization& ch, const DualPoint& dual,
                           const PowerBudget& budget, const Cut& cut) {
  return dual.lambda[0] * budget.p1 + dual.lambda[1] * budget.p2 +
         inner_objective(ch, dual, cut.p);
}

CuttingPlaneResult cutting_plane(const ChannelRealization& ch, const PowerBudget& budget,
                                 const RateProfile& profile, const OuterConfig& cfg) {
  ch.validate();
  budget.validate();
  cfg.validate();
  if (profile.beta() == 1.0) return single_user_solution(ch, budget, 0);
  if (profile.beta() == 0.0) return single_user_solution(ch, budget, 1);
  for (int k = 0; k < 2; ++k)
    if (profile.rho(k) > 0.0 && !(budget[k] > 0.0))
      throw PreconditionError("every user with a rate target needs a positive budget");

  BnbConfig inner = cfg.inner;
  inner.power_cap = 1e3 * std::max(budget.p1, budget.p2);

  CuttingPlaneResult out;
  out.cuts.push_back(make_cut(ch, {0.5 * budget.p1, 0.5 * budget.p2}, CutOrigin::initial));
  out.lower = -std::numeric_limits<double>::infinity();
  out.upper = std::numeric_limits<double>::infinity();

  while (true) {
    const LpSolution lp = lp_solve(relaxed_dual_lp(out.cuts, budget, profile));
    if (lp.status != LpStatus::optimal)
      throw InvariantError(std::string("relaxed dual LP is ") + to_string(lp.status));
    DualPoint dual;
    for (int k = 0; k < 2; ++k) {
      dual.mu[k] = std::max(0.0, lp.primal[k]);
      dual.lambda[k] = std::max(0.0, lp.primal[2 + k]);
    }
    out.lower = std::max(out.lower, lp.objective);
    out.lower_history.push_back(out.lower);
    if (out.upper - out.lower <= cfg.epsilon_cp) {
      out.converged = true;
      break;
    }

    const BnbResult best = bnb_solve(ch, dual, inner);
    if (best.budget_exhausted) {
      out.inner_exhausted = true;
      break;
    }
    const Cut cut = make_cut(ch, best.p, best.capped ? CutOrigin::capped : CutOrigin::bnb);
    const double psi = achieved_dual_value(ch, dual, budget, cut);
    if (psi < out.upper) {
      out.upper = psi;
      out.dual = dual;
    }
    out.upper_history.push_back(out.upper);

    const bool duplicate = std::any_of(out.cuts.begin(), out.cuts.end(),
                                       [&](const Cut& c) { return same_power(c.p, cut.p); });
    if (!duplicate) out.cuts.push_back(cut);
    if (out.upper - out.lower <= cfg.epsilon_cp) {
      out.converged = true;
      break;
    }
    if (duplicate) {
      out.stalled = true;
      break;
    }
    if (out.cuts.size() >= cfg.max_cuts) break;
  }
  return out;
}

TimeSharingSolution primal_recover(const ChannelRealization& ch, const std::vector<Cut>& cuts,
                                   const PowerBudget& budget, const RateProfile& profile) {
  if (cuts.empty()) throw PreconditionError("primal recovery needs at least one cut");
  const std::size_t n = cuts.size();

  // Variables (tau_1..tau_L, R).
  LinearProgram lp;
  lp.sense = Sense::maximize;
  lp.objective.assign(n + 1, 0.0);
  lp.objective[n] = 1.0;
  lp.bounds.assign(n + 1, LowerBound::zero);
  lp.bounds[n] = LowerBound::unbounded;
  for (int k = 0; k < 2; ++k) {
    Constraint rate{std::vector<double>(n + 1), Relation::greater_equal, 0.0};
    Constraint power{std::vector<double>(n + 1), Relation::less_equal, budget[k]};
    for (std::size_t l = 0; l < n; ++l) {
      rate.coefficients[l] = cuts[l].rates[k];
      power.coefficients[l] = cuts[l].p[k];
    }
    rate.coefficients[n] = -profile.rho(k);
    lp.rows.push_back(std::move(rate));
    lp.rows.push_back(std::move(power));
  }
  Constraint simplex{std::vector<double>(n + 1, 1.0), Relation::equal, 1.0};
  simplex.coefficients[n] = 0.0;
  lp.rows.push_back(std::move(simplex));

  const LpSolution sol = lp_solve(lp);
  if (sol.status != LpStatus::optimal)
    throw InvariantError(std::string("primal recovery LP is ") + to_string(sol.status));

  TimeSharingSolution out;
  for (std::size_t l = 0; l < n; ++l)
    if (sol.primal[l] > kActiveTau) {
      const Cut& cut = cuts[l];
      // Rates are re-evaluated so the document is self-consistent.
      out.strategies.push_back({sol.primal[l], cut.p, rate_pair_proper(ch, cut.p)});
    }
  if (out.strategies.size() > kMaxActive)
    throw InvariantError("recovered solution has more than four active strategies");
  out.R = balanced_rate(out.average_rates(), profile);
  out.cut_count = n;
  return out;
}

TimeSharingSolution ts_point(const ChannelRealization& ch, const PowerBudget& budget,
                             const RateProfile& profile, const OuterConfig& cfg) {
  const CuttingPlaneResult cp = cutting_plane(ch, budget, profile, cfg);
  TimeSharingSolution sol = primal_recover(ch, cp.cuts, budget, profile);
  sol.dual = cp.dual;
  sol.dual_lower = cp.lower;
  sol.dual_upper = cp.upper;
  sol.converged = cp.converged;
  // The dual bound is only as exact as the inner solver.
  if (cp.converged &&
      std::abs(cp.upper - sol.R) > 2.0 * cfg.epsilon_cp + cfg.inner.epsilon + kLpSlack)
    throw InvariantError("recovered primal value disagrees with the dual bound");
  return sol;
}

}  // namespace tin
