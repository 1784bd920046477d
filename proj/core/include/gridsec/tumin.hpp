#pragma once

#include <cstddef>
#include <cstdint>
#include <optional>
#include <vector>

#include "gridsec/lp.hpp"
#include "gridsec/matrix.hpp"

namespace gridsec {

/// minimize ‖A(Ī,:)x‖₀  s.t.  A(k,:)x = 1,  A(I,:)x = 0, with A totally unimodular.
/// All indices are 0-based. Ī is the complement of the protected rows and contains k.
struct TUProblem {
  IntMatrix matrix;
  std::size_t target = 0;
  std::vector<std::size_t> protected_rows;

  /// Rows not in the protected set, ascending.
  std::vector<std::size_t> unprotected_rows() const;
  /// Throws InvalidArgument if k or I are out of range, or k ∈ I.
  void validate() const;
};

struct TUSolution {
  /// Minimizer; entries are in {-1, 0, 1} for TU input.
  std::vector<std::int64_t> x;
  /// Rows j ∈ Ī with A(j,:)x ≠ 0, ascending.
  std::vector<std::size_t> support;
  std::size_t cardinality = 0;
  /// |A(Ī(j),:)x| for every position j of Ī.
  std::vector<std::int64_t> image;
  /// Optimal value of the l1 LP (equals cardinality on TU input).
  Rational lp_objective;
  LpStats lp_stats;
};

/// Variable blocks of the standard-form l1 LP: x₊, x₋ (n each), y₊, y₋ (|Ī| each).
struct L1Layout {
  std::size_t n = 0;
  std::size_t unprotected = 0;
  std::size_t x_plus(std::size_t i) const { return i; }
  std::size_t x_minus(std::size_t i) const { return n + i; }
  std::size_t y_plus(std::size_t j) const { return 2 * n + j; }
  std::size_t y_minus(std::size_t j) const { return 2 * n + unprotected + j; }
};

/// Standard-form l1 relaxation. Rows: A(Ī,:)(x₊-x₋) - y₊ + y₋ = 0, then the
/// linearly independent subset of A(I,:)(x₊-x₋) = 0, then A(k,:)(x₊-x₋) = 1.
/// Cost is the sum of y₊ and y₋.
StandardFormLP build_l1_lp(const TUProblem& problem);

L1Layout l1_layout(const TUProblem& problem);

/// Exact minimizer recovered from an optimal basic feasible solution of the l1 LP.
/// Returns nullopt iff the cardinality problem is infeasible. Throws InternalError
/// if the LP vertex is fractional (the input was not totally unimodular).
std::optional<TUSolution> solve_min_support(const TUProblem& problem,
                                            const SolveOptions& options = {});

/// x ∈ {-1,0,1}ⁿ and |A(j,:)x| ∈ {0,1} for every unprotected row j.
bool validate_integrality(const TUSolution& solution, const TUProblem& problem);

/// Brute-force total-unimodularity test: every square submatrix of order
/// <= max_order has determinant in {-1, 0, 1}. Throws SizeLimitExceeded when the
/// number of minors exceeds `budget`.
bool verify_tu(const IntMatrix& a, std::size_t max_order,
               std::uint64_t budget = 50'000'000);

/// Random 0/1 matrix whose ones form a single contiguous run in every column
/// (a column may also be all zero). Deterministic per seed.
IntMatrix gen_consecutive_ones(std::size_t rows, std::size_t cols, std::uint64_t seed);

}  // namespace gridsec
