#pragma once

// Dense two-phase simplex with Bland's rule, for the small linear programs
// of the cutting-plane loop and primal recovery.

#include <stdexcept>
#include <vector>

namespace tin {

enum class Sense { maximize, minimize };
enum class Relation { less_equal, greater_equal, equal };
enum class LowerBound { zero, unbounded };
enum class LpStatus { optimal, infeasible, unbounded };

struct Constraint {
  std::vector<double> coefficients;
  Relation relation = Relation::less_equal;
  double rhs = 0.0;
};

struct LinearProgram {
  Sense sense = Sense::maximize;
  std::vector<double> objective;
  std::vector<Constraint> rows;
  /// One entry per variable; empty means every variable is >= 0.
  std::vector<LowerBound> bounds;

  std::size_t num_variables() const { return objective.size(); }
  LowerBound bound(std::size_t j) const { return bounds.empty() ? LowerBound::zero : bounds[j]; }
};

struct LpSolution {
  LpStatus status = LpStatus::infeasible;
  std::vector<double> primal;
  /// d(objective)/d(rhs_i), one price per row, in the sense of the input.
  std::vector<double> dual;
  double objective = 0.0;
};

class LpStructureError : public std::invalid_argument {
public:
  using std::invalid_argument::invalid_argument;
};

struct LpTolerances {
  double feasibility = 1e-9;
  double optimality = 1e-10;
  double pivot = 1e-11;
};

/// Throws LpStructureError on mismatched dimensions or non-finite data.
LpSolution lp_solve(const LinearProgram& lp, const LpTolerances& tol = {});

const char* to_string(LpStatus status);

}  // namespace tin
