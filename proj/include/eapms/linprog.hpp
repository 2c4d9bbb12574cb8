#pragma once

#include <algorithm>
#include <cmath>
#include <limits>
#include <string>
#include <vector>

#include "eapms/core.hpp"

namespace eapms {

enum class Sense { Minimize, Maximize };
enum class Relation { LessEq, Equal, GreaterEq };
enum class LpStatus { Optimal, Infeasible, Unbounded };

struct LpRow {
  std::vector<double> coeffs;
  Relation rel = Relation::LessEq;
  double rhs = 0.0;
};

// min/max objective . x  subject to  rows, x >= 0.
struct LinearProgram {
  Sense sense = Sense::Minimize;
  std::vector<double> objective;
  std::vector<LpRow> rows;

  int var_count() const { return static_cast<int>(objective.size()); }
};

struct LpSolution {
  LpStatus status = LpStatus::Infeasible;
  std::vector<double> values;       // one per structural variable
  double objective_value = 0.0;
  std::vector<int> basis;           // structural variables basic at the optimum
};

namespace detail {

constexpr double kPivotTol = 1e-9;
constexpr double kReducedCostTol = 1e-9;

// Two-phase primal simplex on a dense tableau. Bland's entering/leaving rule
// keeps the pivot sequence finite and deterministic; the result is always a
// vertex of the feasible region, so an optimal solution has at most one
// positive variable per constraint row.
class SimplexSolver {
 public:
  explicit SimplexSolver(const LinearProgram& lp) : lp_(lp) {
    n_ = lp.var_count();
    m_ = static_cast<int>(lp.rows.size());
    for (const auto& row : lp.rows)
      require(static_cast<int>(row.coeffs.size()) == n_, ErrorCode::Contract,
              "constraint row length does not match variable count");
    build();
  }

  LpSolution solve() {
    LpSolution out;
    if (!phase1()) {
      out.status = LpStatus::Infeasible;
      return out;
    }
    drive_out_artificials();
    if (!phase2()) {
      out.status = LpStatus::Unbounded;
      return out;
    }
    out.status = LpStatus::Optimal;
    out.values.assign(n_, 0.0);
    for (int r = 0; r < m_; ++r)
      if (basis_[r] < n_) out.values[basis_[r]] = tab_[r][rhs_col_];
    for (double& v : out.values)
      if (std::abs(v) < 1e-12) v = 0.0;
    out.objective_value = 0.0;
    for (int j = 0; j < n_; ++j)
      out.objective_value += lp_.objective[j] * out.values[j];
    for (int r = 0; r < m_; ++r)
      if (basis_[r] < n_) out.basis.push_back(basis_[r]);
    std::sort(out.basis.begin(), out.basis.end());
    return out;
  }

 private:
  void build() {
    // Copy rows, making every right-hand side non-negative.
    std::vector<std::vector<double>> coeffs(m_);
    std::vector<Relation> rel(m_);
    rhs_.assign(m_, 0.0);
    for (int r = 0; r < m_; ++r) {
      coeffs[r] = lp_.rows[r].coeffs;
      rel[r] = lp_.rows[r].rel;
      rhs_[r] = lp_.rows[r].rhs;
      if (rhs_[r] < 0.0) {
        for (double& c : coeffs[r]) c = -c;
        rhs_[r] = -rhs_[r];
        if (rel[r] == Relation::LessEq) rel[r] = Relation::GreaterEq;
        else if (rel[r] == Relation::GreaterEq) rel[r] = Relation::LessEq;
      }
    }

    // Column layout: structural | slack/surplus | artificial | rhs.
    int slack_count = 0;
    for (int r = 0; r < m_; ++r)
      if (rel[r] != Relation::Equal) ++slack_count;
    slack_begin_ = n_;
    art_begin_ = n_ + slack_count;
    int art_count = 0;
    for (int r = 0; r < m_; ++r)
      if (rel[r] != Relation::LessEq) ++art_count;
    cols_ = art_begin_ + art_count;
    rhs_col_ = cols_;

    tab_.assign(m_, std::vector<double>(cols_ + 1, 0.0));
    basis_.assign(m_, -1);
    int next_slack = slack_begin_, next_art = art_begin_;
    for (int r = 0; r < m_; ++r) {
      for (int j = 0; j < n_; ++j) tab_[r][j] = coeffs[r][j];
      tab_[r][rhs_col_] = rhs_[r];
      if (rel[r] == Relation::LessEq) {
        tab_[r][next_slack] = 1.0;
        basis_[r] = next_slack++;
      } else if (rel[r] == Relation::GreaterEq) {
        tab_[r][next_slack++] = -1.0;
        tab_[r][next_art] = 1.0;
        basis_[r] = next_art++;
      } else {
        tab_[r][next_art] = 1.0;
        basis_[r] = next_art++;
      }
    }
    max_iter_ = 10000 + 200LL * (m_ + cols_);
  }

  // Reduced-cost row for the given column costs under the current basis.
  std::vector<double> reduced_costs(const std::vector<double>& cost) const {
    std::vector<double> red(cost);
    red.push_back(0.0);  // objective value cell
    for (int r = 0; r < m_; ++r) {
      double cb = cost[basis_[r]];
      if (cb == 0.0) continue;
      for (int j = 0; j <= cols_; ++j) red[j] -= cb * tab_[r][j];
    }
    return red;
  }

  void pivot(int r, int j, std::vector<double>& red) {
    double p = tab_[r][j];
    for (int c = 0; c <= cols_; ++c) tab_[r][c] /= p;
    tab_[r][j] = 1.0;
    for (int rr = 0; rr < m_; ++rr) {
      if (rr == r) continue;
      double f = tab_[rr][j];
      if (f == 0.0) continue;
      for (int c = 0; c <= cols_; ++c) tab_[rr][c] -= f * tab_[r][c];
      tab_[rr][j] = 0.0;
      if (std::abs(tab_[rr][rhs_col_]) < 1e-12) tab_[rr][rhs_col_] = 0.0;
    }
    double f = red[j];
    if (f != 0.0) {
      for (int c = 0; c <= cols_; ++c) red[c] -= f * tab_[r][c];
      red[j] = 0.0;
    }
    basis_[r] = j;
  }

  // Runs Bland-rule iterations until `red` has no improving column among
  // columns < limit. Returns false when an improving column is unbounded.
  bool iterate(std::vector<double>& red, int limit) {
    for (long long iter = 0;; ++iter) {
      require(iter < max_iter_, ErrorCode::Internal, "simplex iteration cap hit");
      int enter = -1;
      for (int j = 0; j < limit; ++j)
        if (red[j] < -kReducedCostTol) { enter = j; break; }
      if (enter < 0) return true;

      double best = std::numeric_limits<double>::infinity();
      for (int r = 0; r < m_; ++r)
        if (tab_[r][enter] > kPivotTol)
          best = std::min(best, tab_[r][rhs_col_] / tab_[r][enter]);
      if (!std::isfinite(best)) return false;

      int leave = -1;
      double tie = 1e-9 * (1.0 + std::abs(best));
      for (int r = 0; r < m_; ++r) {
        if (tab_[r][enter] <= kPivotTol) continue;
        double ratio = tab_[r][rhs_col_] / tab_[r][enter];
        if (ratio <= best + tie && (leave < 0 || basis_[r] < basis_[leave]))
          leave = r;
      }
      pivot(leave, enter, red);
    }
  }

  bool phase1() {
    if (art_begin_ == cols_) {
      // No artificial variables: the all-slack basis is already feasible.
      return true;
    }
    std::vector<double> cost(cols_, 0.0);
    for (int j = art_begin_; j < cols_; ++j) cost[j] = 1.0;
    auto red = reduced_costs(cost);
    bool bounded = iterate(red, cols_);
    require(bounded, ErrorCode::Internal, "phase-1 objective cannot be unbounded");
    double infeas = -red[rhs_col_];  // current sum of artificial variables
    double scale = 1.0;
    for (int r = 0; r < m_; ++r) scale = std::max(scale, std::abs(rhs_[r]));
    return infeas <= 1e-7 * scale;
  }

  // Pivot residual artificial variables out of the basis where possible so
  // phase 2 starts from a basis of real columns; rows that admit no pivot are
  // redundant constraints and keep their artificial at value zero.
  void drive_out_artificials() {
    std::vector<double> dummy(cols_ + 1, 0.0);
    for (int r = 0; r < m_; ++r) {
      if (basis_[r] < art_begin_) continue;
      for (int j = 0; j < art_begin_; ++j) {
        if (std::abs(tab_[r][j]) > kPivotTol) {
          pivot(r, j, dummy);
          break;
        }
      }
    }
  }

  bool phase2() {
    std::vector<double> cost(cols_, 0.0);
    for (int j = 0; j < n_; ++j)
      cost[j] = lp_.sense == Sense::Maximize ? -lp_.objective[j] : lp_.objective[j];
    auto red = reduced_costs(cost);
    return iterate(red, art_begin_);  // artificial columns may not re-enter
  }

  const LinearProgram& lp_;
  int n_ = 0, m_ = 0, cols_ = 0, rhs_col_ = 0;
  int slack_begin_ = 0, art_begin_ = 0;
  long long max_iter_ = 0;
  std::vector<std::vector<double>> tab_;
  std::vector<double> rhs_;
  std::vector<int> basis_;
};

}  // namespace detail

inline LpSolution solve_lp(const LinearProgram& lp) {
  detail::SimplexSolver solver(lp);
  return solver.solve();
}

}  // namespace eapms
