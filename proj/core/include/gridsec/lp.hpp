#pragma once

#include <cstddef>
#include <iosfwd>
#include <optional>
#include <vector>

#include "gridsec/matrix.hpp"
#include "gridsec/rational.hpp"

namespace gridsec {

/// minimize cost·x  subject to  constraints·x = rhs,  x >= 0.
struct StandardFormLP {
  RationalMatrix constraints;
  RationalVector rhs;
  RationalVector cost;

  std::size_t row_count() const { return constraints.rows(); }
  std::size_t variable_count() const { return constraints.cols(); }
};

struct BasicFeasibleSolution {
  RationalVector values;
  /// Column indices of the basic variables, ordered by the row they are basic in.
  std::vector<std::size_t> basis;
  Rational objective;
};

enum class LpStatus { infeasible, unbounded, optimal };

struct LpStats {
  std::size_t phase1_pivots = 0;
  std::size_t phase2_pivots = 0;
  std::size_t artificials = 0;
  std::size_t removed_rows = 0;

  std::size_t pivots() const { return phase1_pivots + phase2_pivots; }
};

struct LpOutcome {
  LpStatus status = LpStatus::infeasible;
  /// Present iff status == optimal.
  std::optional<BasicFeasibleSolution> solution;
  /// Reduced costs at the final basis (optimal outcomes only); all entries are >= 0.
  RationalVector reduced_costs;
  LpStats stats;

  bool optimal() const { return status == LpStatus::optimal; }
};

enum class PivotRule {
  /// Lowest-index entering and leaving variable; never cycles.
  bland,
  /// Most negative reduced cost. Switches to Bland after a run of degenerate pivots.
  dantzig,
};

struct SolveOptions {
  PivotRule rule = PivotRule::bland;
  /// Hard cap on total pivots; exceeding it throws InternalError.
  std::size_t max_pivots = 1'000'000;
  /// When set, every tableau is written here as plain text.
  std::ostream* trace = nullptr;
};

/// Drops redundant equality rows so the result has full row rank. Feasible set and
/// objective are unchanged. Throws InconsistentRow when a row reduces to 0 = nonzero.
StandardFormLP preprocess(const StandardFormLP& raw);

/// Two-phase tableau simplex in exact arithmetic. Accepts rank-deficient input as
/// well (redundant rows are dropped after phase 1), but the basis of an optimal
/// solution then has rank(C) entries rather than row_count().
LpOutcome solve_lp(const StandardFormLP& lp, const SolveOptions& options = {});

/// True iff `sol` is a basic feasible solution of `lp`: C·x = d, x >= 0,
/// |basis| = rows, C(:,basis) nonsingular, and x vanishes off the basis.
/// Throws DimensionMismatch when sizes disagree.
bool verify_bfs(const StandardFormLP& lp, const BasicFeasibleSolution& sol);

/// Reduced costs c - Cᵀπ where C(:,basis)ᵀ π = c(basis). Requires a nonsingular basis.
RationalVector reduced_costs(const StandardFormLP& lp, const std::vector<std::size_t>& basis);

/// verify_bfs plus nonnegative reduced costs: an exact optimality certificate.
bool verify_optimal(const StandardFormLP& lp, const BasicFeasibleSolution& sol);

}  // namespace gridsec
