#pragma once

// Coded time-sharing rate balancing with proper signals, solved through its
// Lagrangian dual by a cutting-plane method; the time-sharing weights are
// recovered from the dual of the final relaxed linear program.

#include <cstddef>
#include <stdexcept>
#include <vector>

#include "tinregion/inner.hpp"
#include "tinregion/lp.hpp"
#include "tinregion/model.hpp"

namespace tin {

enum class CutOrigin { initial, bnb, capped };

struct Cut {
  PowerVector p{};
  RatePair rates;
  CutOrigin origin = CutOrigin::bnb;
};

Cut make_cut(const ChannelRealization& ch, const PowerVector& p, CutOrigin origin);

struct TimeSharingStrategy {
  double tau = 0.0;
  PowerVector p{};
  RatePair rates;
};

struct TimeSharingSolution {
  std::vector<TimeSharingStrategy> strategies;
  double R = 0.0;

  // Dual side, filled in by ts_point.
  DualPoint dual;
  double dual_lower = 0.0;
  double dual_upper = 0.0;
  std::size_t cut_count = 0;
  bool converged = true;

  RatePair average_rates() const;
  PowerVector average_powers() const;
};

struct OuterConfig {
  double epsilon_cp = 1e-4;
  std::size_t max_cuts = 1000;
  BnbConfig inner;

  void validate() const;
};

/// Raised when an internal invariant fails (e.g. infeasible recovery LP).
class InvariantError : public std::logic_error {
public:
  using std::logic_error::logic_error;
};

/// Variables (mu1, mu2, lambda1, lambda2, z): minimize z subject to
/// rho^T mu = 1 and z >= lambda^T (P - p) + mu^T r(p) for every cut.
LinearProgram relaxed_dual_lp(const std::vector<Cut>& cuts, const PowerBudget& budget,
                              const RateProfile& profile);

/// lambda^T P + f(p): the dual function value certified by a cut at `dual`.
double achieved_dual_value(const ChannelRealization& ch, const DualPoint& dual,
                           const PowerBudget& budget, const Cut& cut);

struct CuttingPlaneResult {
  DualPoint dual;  // multipliers attaining `upper`
  std::vector<Cut> cuts;
  double lower = 0.0;
  double upper = 0.0;
  bool converged = false;
  bool stalled = false;          // a repeated cut arrived before convergence
  bool inner_exhausted = false;  // branch-and-bound ran out of iterations
  std::vector<double> lower_history;
  std::vector<double> upper_history;
};

CuttingPlaneResult cutting_plane(const ChannelRealization& ch, const PowerBudget& budget,
                                 const RateProfile& profile, const OuterConfig& cfg = {});

/// Time-sharing weights over the cut powers maximizing the balanced rate
/// under average power constraints. Strategies with tau <= 1e-9 are dropped.
TimeSharingSolution primal_recover(const ChannelRealization& ch, const std::vector<Cut>& cuts,
                                   const PowerBudget& budget, const RateProfile& profile);

TimeSharingSolution ts_point(const ChannelRealization& ch, const PowerBudget& budget,
                             const RateProfile& profile, const OuterConfig& cfg = {});

/// log2(1 + |h_kk|^2 P_k / noise_k)
double single_user_capacity(const ChannelRealization& ch, const PowerBudget& budget, int k);

}  // namespace tin
