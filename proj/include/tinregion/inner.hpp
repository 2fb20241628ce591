#pragma once

// Globally optimal solver for the inner dual subproblem
//   max_{p >= 0} f(p) = sum_k mu_k r_k(p) - lambda_k p_k
// by monotonic branch-and-bound over power boxes.

#include <cstddef>
#include <utility>

#include "tinregion/model.hpp"

namespace tin {

/// Multipliers for the rate constraints (mu) and power constraints (lambda).
struct DualPoint {
  std::array<double, 2> mu{};
  std::array<double, 2> lambda{};

  void validate() const;
};

/// Axis-aligned power rectangle [lower, upper].
struct Box {
  PowerVector lower{};
  PowerVector upper{};

  bool degenerate() const { return lower == upper; }
  bool contains(const PowerVector& p) const;
  void validate() const;
};

struct BnbConfig {
  double epsilon = 1e-6;
  std::size_t max_iterations = 20'000'000;
  double power_cap = 1e4;

  void validate() const;
};

class CannotBranchError : public std::logic_error {
public:
  using std::logic_error::logic_error;
};

double inner_objective(const ChannelRealization& ch, const DualPoint& dual,
                       const PowerVector& p);

/// Extended objective F(x, y), nondecreasing in x and nonincreasing in y,
/// with F(p, p) = f(p).
double extended_objective(const ChannelRealization& ch, const DualPoint& dual,
                          const PowerVector& x, const PowerVector& y);

struct BoxBounds {
  double upper = 0.0;       // U = F(b, a)
  double achievable = 0.0;  // A = f(a)
};

BoxBounds box_bounds(const ChannelRealization& ch, const DualPoint& dual, const Box& box);

/// Second upper bound valid on the box: the convex interference terms are
/// replaced by their secants, and the resulting concave majorant is bounded
/// by its tangent plane at the box centre. Tight to second order near
/// stationary points, where F(b, a) is only first-order tight.
double secant_tangent_bound(const ChannelRealization& ch, const DualPoint& dual,
                            const Box& box);

/// Bisects the box at the midpoint of its longest edge (lowest index on ties).
std::pair<Box, Box> branch(const Box& box);

struct InitialBox {
  Box box;
  bool capped = false;  // some mu_k > 0 had lambda_k ~ 0; box is the power cap
};

/// Box [0, p0] that contains every maximizer of f.
InitialBox init_box(const ChannelRealization& ch, const DualPoint& dual,
                    const BnbConfig& cfg);

struct BnbResult {
  PowerVector p{};
  double value = 0.0;
  double certified_gap = 0.0;
  bool budget_exhausted = false;
  bool capped = false;
  std::size_t iterations = 0;
};

BnbResult bnb_solve(const ChannelRealization& ch, const DualPoint& dual,
                    const BnbConfig& cfg = {});

}  // namespace tin
