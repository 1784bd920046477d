#include <algorithm>
#include <ostream>
#include <utility>

#include "gridsec/error.hpp"
#include "gridsec/lp.hpp"

namespace gridsec {

namespace {

void check_shape(const StandardFormLP& lp) {
  if (lp.rhs.size() != lp.row_count())
    throw DimensionMismatch("rhs length does not match constraint rows");
  if (lp.cost.size() != lp.variable_count())
    throw DimensionMismatch("cost length does not match constraint columns");
}

constexpr std::size_t kDegenerateStreakLimit = 50;

// Dense simplex tableau. Columns [0, structural) are the LP variables, followed
// by phase-1 artificials; the right-hand side is stored separately.
class Tableau {
 public:
  Tableau(const StandardFormLP& lp, const SolveOptions& options)
      : options_(options), structural_(lp.variable_count()) {
    const std::size_t rows = lp.row_count();
    body_ = RationalMatrix(rows, structural_);
    rhs_ = lp.rhs;
    for (std::size_t r = 0; r < rows; ++r) {
      const bool flip = sgn(lp.rhs[r]) < 0;
      for (std::size_t c = 0; c < structural_; ++c)
        body_(r, c) = flip ? Rational(-lp.constraints(r, c)) : lp.constraints(r, c);
      if (flip) rhs_[r] = -rhs_[r];
    }
    basis_.assign(rows, kNone);
    crash_basis();
  }

  std::size_t artificial_count() const { return columns_ - structural_; }

  // Phase 1: minimize the sum of artificials. Returns false if the LP is infeasible.
  bool phase1(LpStats& stats) {
    if (artificial_count() == 0) return true;
    objective_.assign(columns_, Rational(0));
    objective_value_ = 0;
    for (std::size_t c = structural_; c < columns_; ++c) objective_[c] = 1;
    for (std::size_t r = 0; r < rows(); ++r) {
      if (basis_[r] < structural_) continue;
      for (std::size_t c = 0; c < columns_; ++c)
        if (sgn(body_(r, c)) != 0) objective_[c] -= body_(r, c);
      objective_value_ -= rhs_[r];
    }
    const auto result = iterate(columns_, stats.phase1_pivots, "phase 1");
    if (result != LpStatus::optimal) throw InternalError("phase 1 reported an unbounded ray");
    if (sgn(objective_value_) != 0) return false;

    // Drive zero-valued artificials out of the basis, dropping redundant rows.
    std::vector<std::size_t> redundant;
    for (std::size_t r = 0; r < rows(); ++r) {
      if (basis_[r] < structural_) continue;
      std::size_t entering = kNone;
      for (std::size_t c = 0; c < structural_; ++c)
        if (sgn(body_(r, c)) != 0) {
          entering = c;
          break;
        }
      if (entering == kNone)
        redundant.push_back(r);
      else
        pivot(r, entering);
    }
    stats.removed_rows = redundant.size();
    drop_rows(redundant);
    return true;
  }

  LpStatus phase2(const RationalVector& cost, LpStats& stats) {
    objective_.assign(columns_, Rational(0));
    for (std::size_t c = 0; c < structural_; ++c) objective_[c] = cost[c];
    objective_value_ = 0;
    for (std::size_t r = 0; r < rows(); ++r) {
      const Rational& cb = cost[basis_[r]];
      if (sgn(cb) == 0) continue;
      for (std::size_t c = 0; c < columns_; ++c)
        if (sgn(body_(r, c)) != 0) objective_[c] -= cb * body_(r, c);
      objective_value_ -= cb * rhs_[r];
    }
    return iterate(structural_, stats.phase2_pivots, "phase 2");
  }

  BasicFeasibleSolution solution(const RationalVector& cost) const {
    BasicFeasibleSolution sol;
    sol.values.assign(structural_, Rational(0));
    sol.basis = basis_;
    for (std::size_t r = 0; r < rows(); ++r) sol.values[basis_[r]] = rhs_[r];
    sol.objective = 0;
    for (std::size_t c = 0; c < structural_; ++c)
      if (sgn(sol.values[c]) != 0) sol.objective += cost[c] * sol.values[c];
    return sol;
  }

  RationalVector structural_reduced_costs() const {
    return RationalVector(objective_.begin(), objective_.begin() + static_cast<long>(structural_));
  }

 private:
  static constexpr std::size_t kNone = static_cast<std::size_t>(-1);

  std::size_t rows() const { return body_.rows(); }

  // Use existing unit columns as the starting basis; add artificials elsewhere.
  void crash_basis() {
    for (std::size_t c = 0; c < structural_; ++c) {
      std::size_t hit = kNone;
      bool unit = true;
      for (std::size_t r = 0; r < rows() && unit; ++r) {
        if (sgn(body_(r, c)) == 0) continue;
        if (hit != kNone || body_(r, c) != 1) unit = false;
        hit = r;
      }
      if (unit && hit != kNone && basis_[hit] == kNone) basis_[hit] = c;
    }
    std::size_t missing = std::count(basis_.begin(), basis_.end(), kNone);
    columns_ = structural_ + missing;
    if (missing == 0) return;
    RationalMatrix widened(rows(), columns_);
    std::size_t next = structural_;
    for (std::size_t r = 0; r < rows(); ++r) {
      for (std::size_t c = 0; c < structural_; ++c) widened(r, c) = std::move(body_(r, c));
      if (basis_[r] == kNone) {
        widened(r, next) = 1;
        basis_[r] = next++;
      }
    }
    body_ = std::move(widened);
  }

  std::size_t choose_entering(std::size_t limit, bool bland) const {
    std::size_t best = kNone;
    for (std::size_t c = 0; c < limit; ++c) {
      if (sgn(objective_[c]) >= 0) continue;
      if (bland) return c;
      if (best == kNone || objective_[c] < objective_[best]) best = c;
    }
    return best;
  }

  std::size_t choose_leaving(std::size_t entering) const {
    std::size_t best = kNone;
    Rational best_ratio, ratio;
    for (std::size_t r = 0; r < rows(); ++r) {
      if (sgn(body_(r, entering)) <= 0) continue;
      ratio = rhs_[r] / body_(r, entering);
      if (best == kNone || ratio < best_ratio ||
          (ratio == best_ratio && basis_[r] < basis_[best])) {
        best = r;
        best_ratio = ratio;
      }
    }
    return best;
  }

  LpStatus iterate(std::size_t limit, std::size_t& pivots, const char* phase) {
    bool bland = options_.rule == PivotRule::bland;
    std::size_t degenerate_streak = 0;
    for (;;) {
      if (options_.trace) dump(*options_.trace, phase);
      const std::size_t entering = choose_entering(limit, bland);
      if (entering == kNone) return LpStatus::optimal;
      const std::size_t leaving = choose_leaving(entering);
      if (leaving == kNone) return LpStatus::unbounded;
      if (++total_pivots_ > options_.max_pivots)
        throw InternalError("simplex exceeded the pivot limit");
      if (sgn(rhs_[leaving]) == 0) {
        if (++degenerate_streak >= kDegenerateStreakLimit) bland = true;
      } else {
        degenerate_streak = 0;
      }
      pivot(leaving, entering);
      ++pivots;
    }
  }

  void pivot(std::size_t prow, std::size_t pcol) {
    const Rational inv = 1 / body_(prow, pcol);
    std::vector<std::size_t> nz;
    for (std::size_t c = 0; c < columns_; ++c)
      if (sgn(body_(prow, c)) != 0) {
        body_(prow, c) *= inv;
        nz.push_back(c);
      }
    rhs_[prow] *= inv;

    Rational f;
    for (std::size_t r = 0; r < rows(); ++r) {
      if (r == prow || sgn(body_(r, pcol)) == 0) continue;
      f = body_(r, pcol);
      for (std::size_t c : nz) body_(r, c) -= f * body_(prow, c);
      if (sgn(rhs_[prow]) != 0) rhs_[r] -= f * rhs_[prow];
    }
    if (sgn(objective_[pcol]) != 0) {
      f = objective_[pcol];
      for (std::size_t c : nz) objective_[c] -= f * body_(prow, c);
      if (sgn(rhs_[prow]) != 0) objective_value_ -= f * rhs_[prow];
    }
    basis_[prow] = pcol;
  }

  void drop_rows(const std::vector<std::size_t>& doomed) {
    if (doomed.empty()) return;
    RationalMatrix kept(0, columns_);
    RationalVector rhs;
    std::vector<std::size_t> basis;
    for (std::size_t r = 0; r < rows(); ++r) {
      if (std::find(doomed.begin(), doomed.end(), r) != doomed.end()) continue;
      kept.append_row(body_.row(r));
      rhs.push_back(rhs_[r]);
      basis.push_back(basis_[r]);
    }
    body_ = std::move(kept);
    rhs_ = std::move(rhs);
    basis_ = std::move(basis);
  }

  void dump(std::ostream& os, const char* phase) const {
    os << "# " << phase << " pivot " << total_pivots_ << " objective " << -objective_value_ << '\n';
    os << "obj |";
    for (std::size_t c = 0; c < columns_; ++c) os << ' ' << objective_[c];
    os << " | " << objective_value_ << '\n';
    for (std::size_t r = 0; r < rows(); ++r) {
      os << 'x' << basis_[r] << " |";
      for (std::size_t c = 0; c < columns_; ++c) os << ' ' << body_(r, c);
      os << " | " << rhs_[r] << '\n';
    }
  }

  const SolveOptions& options_;
  std::size_t structural_;
  std::size_t columns_ = 0;
  RationalMatrix body_;
  RationalVector rhs_;
  RationalVector objective_;
  // Negated objective value of the current basis.
  Rational objective_value_;
  std::vector<std::size_t> basis_;
  std::size_t total_pivots_ = 0;
};

// Solves the square system m x = b; throws if m is singular.
RationalVector solve_square(const RationalMatrix& m, const RationalVector& b) {
  RationalMatrix aug(m.rows(), m.cols() + 1);
  for (std::size_t r = 0; r < m.rows(); ++r) {
    for (std::size_t c = 0; c < m.cols(); ++c) aug(r, c) = m(r, c);
    aug(r, m.cols()) = b[r];
  }
  std::vector<std::size_t> pivots;
  const RationalMatrix red = rref(aug, &pivots);
  if (pivots.size() != m.cols() || (!pivots.empty() && pivots.back() == m.cols()))
    throw InvalidArgument("basis matrix is singular");
  RationalVector x(m.cols());
  for (std::size_t i = 0; i < pivots.size(); ++i) x[pivots[i]] = red(i, m.cols());
  return x;
}

}  // namespace

StandardFormLP preprocess(const StandardFormLP& raw) {
  check_shape(raw);
  const std::size_t cols = raw.variable_count();
  // Reduce augmented rows [C | d] against the kept rows, pivoting only on C.
  std::vector<RationalVector> basis_rows;
  std::vector<std::size_t> pivot_cols;
  std::vector<std::size_t> kept;
  for (std::size_t r = 0; r < raw.row_count(); ++r) {
    RationalVector v(raw.constraints.row(r).begin(), raw.constraints.row(r).end());
    v.push_back(raw.rhs[r]);
    for (std::size_t i = 0; i < basis_rows.size(); ++i) {
      if (sgn(v[pivot_cols[i]]) == 0) continue;
      const Rational f = v[pivot_cols[i]];
      for (std::size_t c = 0; c <= cols; ++c)
        if (sgn(basis_rows[i][c]) != 0) v[c] -= f * basis_rows[i][c];
    }
    std::size_t pc = 0;
    while (pc < cols && sgn(v[pc]) == 0) ++pc;
    if (pc == cols) {
      if (sgn(v[cols]) != 0) throw InconsistentRow(r);
      continue;
    }
    const Rational inv = 1 / v[pc];
    for (auto& x : v) x *= inv;
    for (auto& b : basis_rows) {
      if (sgn(b[pc]) == 0) continue;
      const Rational f = b[pc];
      for (std::size_t c = 0; c <= cols; ++c)
        if (sgn(v[c]) != 0) b[c] -= f * v[c];
    }
    basis_rows.push_back(std::move(v));
    pivot_cols.push_back(pc);
    kept.push_back(r);
  }

  StandardFormLP out;
  out.constraints = raw.constraints.select_rows(kept);
  out.rhs.reserve(kept.size());
  for (auto r : kept) out.rhs.push_back(raw.rhs[r]);
  out.cost = raw.cost;
  return out;
}

LpOutcome solve_lp(const StandardFormLP& lp, const SolveOptions& options) {
  check_shape(lp);
  LpOutcome outcome;
  Tableau tableau(lp, options);
  outcome.stats.artificials = tableau.artificial_count();
  if (!tableau.phase1(outcome.stats)) {
    outcome.status = LpStatus::infeasible;
    return outcome;
  }
  outcome.status = tableau.phase2(lp.cost, outcome.stats);
  if (outcome.status == LpStatus::optimal) {
    outcome.solution = tableau.solution(lp.cost);
    outcome.reduced_costs = tableau.structural_reduced_costs();
  }
  return outcome;
}

bool verify_bfs(const StandardFormLP& lp, const BasicFeasibleSolution& sol) {
  check_shape(lp);
  const std::size_t rows = lp.row_count();
  const std::size_t cols = lp.variable_count();
  if (sol.values.size() != cols) throw DimensionMismatch("solution length does not match LP");

  if (sol.basis.size() != rows) return false;
  std::vector<bool> in_basis(cols, false);
  for (auto j : sol.basis) {
    if (j >= cols || in_basis[j]) return false;
    in_basis[j] = true;
  }
  for (std::size_t j = 0; j < cols; ++j) {
    if (sgn(sol.values[j]) < 0) return false;
    if (!in_basis[j] && sgn(sol.values[j]) != 0) return false;
  }
  if (multiply(lp.constraints, sol.values) != lp.rhs) return false;
  return rank(lp.constraints.select_cols(sol.basis)) == rows;
}

RationalVector reduced_costs(const StandardFormLP& lp, const std::vector<std::size_t>& basis) {
  check_shape(lp);
  if (basis.size() != lp.row_count()) throw DimensionMismatch("basis size differs from row count");
  const RationalMatrix basis_t = lp.constraints.select_cols(basis).transpose();
  RationalVector cb;
  cb.reserve(basis.size());
  for (auto j : basis) cb.push_back(lp.cost.at(j));
  const RationalVector pi = solve_square(basis_t, cb);
  const RationalVector ct_pi = multiply(lp.constraints.transpose(), pi);
  RationalVector out(lp.variable_count());
  for (std::size_t j = 0; j < out.size(); ++j) out[j] = lp.cost[j] - ct_pi[j];
  return out;
}

bool verify_optimal(const StandardFormLP& lp, const BasicFeasibleSolution& sol) {
  if (!verify_bfs(lp, sol)) return false;
  const RationalVector r = reduced_costs(lp, sol.basis);
  return std::all_of(r.begin(), r.end(), [](const Rational& x) { return sgn(x) >= 0; });
}

}  // namespace gridsec
