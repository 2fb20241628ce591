#include "tinregion/lp.hpp"

#include <algorithm>
#include <cassert>
#include <cmath>
#include <limits>
#include <optional>

namespace tin {

namespace {

using Matrix = std::vector<std::vector<double>>;

void check_structure(const LinearProgram& lp) {
  const std::size_t n = lp.num_variables();
  if (n == 0) throw LpStructureError("linear program has no variables");
  if (!lp.bounds.empty() && lp.bounds.size() != n)
    throw LpStructureError("bounds size does not match the objective");
  for (double c : lp.objective)
    if (!std::isfinite(c)) throw LpStructureError("objective coefficient is not finite");
  for (const auto& row : lp.rows) {
    if (row.coefficients.size() != n)
      throw LpStructureError("constraint row size does not match the objective");
    if (!std::isfinite(row.rhs)) throw LpStructureError("right-hand side is not finite");
    for (double a : row.coefficients)
      if (!std::isfinite(a)) throw LpStructureError("constraint coefficient is not finite");
  }
}

// Solves M x = rhs (or M^T x = rhs) by LU with partial pivoting.
std::optional<std::vector<double>> dense_solve(Matrix m, std::vector<double> rhs) {
  const std::size_t n = rhs.size();
  for (std::size_t col = 0; col < n; ++col) {
    std::size_t piv = col;
    for (std::size_t r = col + 1; r < n; ++r)
      if (std::abs(m[r][col]) > std::abs(m[piv][col])) piv = r;
    if (std::abs(m[piv][col]) < 1e-13) return std::nullopt;
    std::swap(m[piv], m[col]);
    std::swap(rhs[piv], rhs[col]);
    for (std::size_t r = col + 1; r < n; ++r) {
      const double factor = m[r][col] / m[col][col];
      if (factor == 0.0) continue;
      for (std::size_t c = col; c < n; ++c) m[r][c] -= factor * m[col][c];
      rhs[r] -= factor * rhs[col];
    }
  }
  std::vector<double> x(n);
  for (std::size_t i = n; i-- > 0;) {
    double s = rhs[i];
    for (std::size_t c = i + 1; c < n; ++c) s -= m[i][c] * x[c];
    x[i] = s / m[i][i];
  }
  return x;
}

// Standard form: maximize cost^T x, A x = b, x >= 0, b >= 0.
class Tableau {
public:
  Tableau(const LinearProgram& lp, const LpTolerances& tol) : tol_(tol) {
    const std::size_t n = lp.num_variables();
    m_ = lp.rows.size();

    // Structural columns; free variables split into x+ - x-.
    for (std::size_t j = 0; j < n; ++j) {
      plus_col_.push_back(num_cols_++);
      minus_col_.push_back(lp.bound(j) == LowerBound::unbounded ? num_cols_++ : kNone);
    }

    // Rows with rhs < 0, or rhs == 0 and >=, are negated so every row
    // starts with a feasible slack or an artificial.
    row_sign_.resize(m_);
    std::vector<Relation> rel(m_);
    for (std::size_t i = 0; i < m_; ++i) {
      const auto& row = lp.rows[i];
      const bool flip = row.rhs < 0.0 || (row.rhs == 0.0 && row.relation == Relation::greater_equal);
      row_sign_[i] = flip ? -1.0 : 1.0;
      rel[i] = row.relation;
      if (flip && rel[i] != Relation::equal)
        rel[i] = rel[i] == Relation::less_equal ? Relation::greater_equal : Relation::less_equal;
    }
    std::vector<std::size_t> slack_col(m_, kNone);
    for (std::size_t i = 0; i < m_; ++i)
      if (rel[i] != Relation::equal) slack_col[i] = num_cols_++;
    first_artificial_ = num_cols_;
    std::vector<std::size_t> art_col(m_, kNone);
    for (std::size_t i = 0; i < m_; ++i)
      if (rel[i] != Relation::less_equal) art_col[i] = num_cols_++;

    a_.assign(m_, std::vector<double>(num_cols_, 0.0));
    b_.resize(m_);
    basis_.resize(m_);
    for (std::size_t i = 0; i < m_; ++i) {
      const auto& row = lp.rows[i];
      for (std::size_t j = 0; j < n; ++j) {
        const double a = row_sign_[i] * row.coefficients[j];
        a_[i][plus_col_[j]] = a;
        if (minus_col_[j] != kNone) a_[i][minus_col_[j]] = -a;
      }
      if (slack_col[i] != kNone) a_[i][slack_col[i]] = rel[i] == Relation::less_equal ? 1.0 : -1.0;
      if (art_col[i] != kNone) a_[i][art_col[i]] = 1.0;
      b_[i] = row_sign_[i] * row.rhs;
      basis_[i] = art_col[i] != kNone ? art_col[i] : slack_col[i];
    }

    const double direction = lp.sense == Sense::maximize ? 1.0 : -1.0;
    cost_.assign(num_cols_, 0.0);
    for (std::size_t j = 0; j < n; ++j) {
      cost_[plus_col_[j]] = direction * lp.objective[j];
      if (minus_col_[j] != kNone) cost_[minus_col_[j]] = -direction * lp.objective[j];
    }
    t_ = a_;
    rhs_ = b_;
  }

  LpStatus solve() {
    if (first_artificial_ < num_cols_) {
      std::vector<double> phase1(num_cols_, 0.0);
      for (std::size_t c = first_artificial_; c < num_cols_; ++c) phase1[c] = -1.0;
      run(phase1, num_cols_);
      double infeasibility = 0.0;
      for (std::size_t i = 0; i < m_; ++i)
        if (basis_[i] >= first_artificial_) infeasibility += rhs_[i];
      if (infeasibility > tol_.feasibility * std::max(1.0, max_abs(b_))) return LpStatus::infeasible;
      drive_out_artificials();
    }
    return run(cost_, first_artificial_) ? LpStatus::optimal : LpStatus::unbounded;
  }

  // Basic solution recomputed from the original data for accuracy.
  std::vector<double> standard_primal() const {
    std::vector<double> x(num_cols_, 0.0);
    std::vector<double> xb = rhs_;
    if (auto refined = dense_solve(basis_matrix(false), b_)) xb = *refined;
    for (std::size_t i = 0; i < m_; ++i) x[basis_[i]] = std::max(0.0, xb[i]);
    return x;
  }

  // y with B^T y = c_B, so y_i = d(objective)/d(b_i) in standard form.
  std::vector<double> standard_dual() const {
    std::vector<double> cb(m_);
    for (std::size_t i = 0; i < m_; ++i) cb[i] = basis_[i] < first_artificial_ ? cost_[basis_[i]] : 0.0;
    if (auto y = dense_solve(basis_matrix(true), cb)) return *y;
    return std::vector<double>(m_, 0.0);
  }

  double original_value(const std::vector<double>& x, std::size_t j) const {
    double v = x[plus_col_[j]];
    if (minus_col_[j] != kNone) v -= x[minus_col_[j]];
    return v;
  }
  double row_sign(std::size_t i) const { return row_sign_[i]; }

private:
  static constexpr std::size_t kNone = std::numeric_limits<std::size_t>::max();

  static double max_abs(const std::vector<double>& v) {
    double m = 0.0;
    for (double x : v) m = std::max(m, std::abs(x));
    return m;
  }

  Matrix basis_matrix(bool transpose) const {
    Matrix bm(m_, std::vector<double>(m_));
    for (std::size_t i = 0; i < m_; ++i)
      for (std::size_t k = 0; k < m_; ++k)
        (transpose ? bm[k][i] : bm[i][k]) = a_[i][basis_[k]];
    return bm;
  }

  void pivot(std::size_t row, std::size_t col) {
    const double p = t_[row][col];
    for (double& v : t_[row]) v /= p;
    rhs_[row] /= p;
    t_[row][col] = 1.0;
    for (std::size_t i = 0; i < m_; ++i) {
      if (i == row) continue;
      const double factor = t_[i][col];
      if (factor == 0.0) continue;
      for (std::size_t c = 0; c < num_cols_; ++c) t_[i][c] -= factor * t_[row][c];
      t_[i][col] = 0.0;
      rhs_[i] -= factor * rhs_[row];
      if (rhs_[i] < 0.0 && rhs_[i] > -tol_.feasibility) rhs_[i] = 0.0;
    }
    basis_[row] = col;
  }

  // Bland's rule; columns >= `limit` never enter. Returns false if unbounded.
  bool run(const std::vector<double>& cost, std::size_t limit) {
    std::vector<bool> basic(num_cols_, false);
    [[maybe_unused]] double previous = -std::numeric_limits<double>::infinity();
    while (true) {
      std::fill(basic.begin(), basic.end(), false);
      for (std::size_t b : basis_) basic[b] = true;

      std::size_t entering = kNone;
      for (std::size_t c = 0; c < limit && entering == kNone; ++c) {
        if (basic[c]) continue;
        double reduced = cost[c];
        for (std::size_t i = 0; i < m_; ++i) reduced -= cost[basis_[i]] * t_[i][c];
        if (reduced > tol_.optimality) entering = c;
      }
      if (entering == kNone) return true;

      std::size_t leaving = kNone;
      double best_ratio = 0.0;
      for (std::size_t i = 0; i < m_; ++i) {
        if (t_[i][entering] <= tol_.pivot) continue;
        const double ratio = rhs_[i] / t_[i][entering];
        if (leaving == kNone) {
          leaving = i;
          best_ratio = ratio;
          continue;
        }
        const double tie = 1e-12 * std::max(1.0, std::abs(best_ratio));
        if (ratio < best_ratio - tie) {
          leaving = i;
          best_ratio = ratio;
        } else if (ratio <= best_ratio + tie && basis_[i] < basis_[leaving]) {
          leaving = i;
          best_ratio = std::min(best_ratio, ratio);
        }
      }
      if (leaving == kNone) return false;
      pivot(leaving, entering);
#ifndef NDEBUG
      double value = 0.0;
      for (std::size_t i = 0; i < m_; ++i) value += cost[basis_[i]] * rhs_[i];
      assert(value >= previous - 1e-7 * std::max(1.0, std::abs(previous)));
      previous = value;
#endif
    }
  }

  // Artificials left basic at zero are pivoted out; rows where that is
  // impossible are redundant and keep their artificial at zero.
  void drive_out_artificials() {
    for (std::size_t i = 0; i < m_; ++i) {
      if (basis_[i] < first_artificial_) continue;
      std::size_t best = kNone;
      for (std::size_t c = 0; c < first_artificial_; ++c)
        if (std::abs(t_[i][c]) > 1e-9 && (best == kNone || std::abs(t_[i][c]) > std::abs(t_[i][best])))
          best = c;
      if (best != kNone) pivot(i, best);
    }
  }

  LpTolerances tol_;
  std::size_t m_ = 0;
  std::size_t num_cols_ = 0;
  std::size_t first_artificial_ = 0;
  std::vector<std::size_t> plus_col_, minus_col_;
  std::vector<double> row_sign_;
  Matrix a_;
  std::vector<double> b_;
  Matrix t_;
  std::vector<double> rhs_;
  std::vector<double> cost_;
  std::vector<std::size_t> basis_;
};

}  // namespace

LpSolution lp_solve(const LinearProgram& lp, const LpTolerances& tol) {
  check_structure(lp);
  Tableau tableau(lp, tol);
  LpSolution out;
  out.status = tableau.solve();
  if (out.status != LpStatus::optimal) return out;

  const std::vector<double> x = tableau.standard_primal();
  out.primal.resize(lp.num_variables());
  for (std::size_t j = 0; j < lp.num_variables(); ++j) {
    out.primal[j] = tableau.original_value(x, j);
    out.objective += lp.objective[j] * out.primal[j];
  }
  const std::vector<double> y = tableau.standard_dual();
  const double direction = lp.sense == Sense::maximize ? 1.0 : -1.0;
  out.dual.resize(lp.rows.size());
  for (std::size_t i = 0; i < lp.rows.size(); ++i) out.dual[i] = direction * tableau.row_sign(i) * y[i];
  return out;
}

const char* to_string(LpStatus status) {
  switch (status) {
    case LpStatus::optimal: return "optimal";
    case LpStatus::infeasible: return "infeasible";
    case LpStatus::unbounded: return "unbounded";
  }
  return "unknown";
}

}  // namespace tin
