#pragma once

#include <cstddef>
#include <optional>
#include <string>
#include <string_view>
#include <utility>
#include <vector>

#include "gridsec/grid.hpp"
#include "gridsec/lp.hpp"
#include "gridsec/tumin.hpp"

namespace gridsec {

enum class Method { l1, milp, exhaustive };

std::string_view to_string(Method m);
/// Accepts "l1", "milp" and "exhaustive"; throws InvalidArgument otherwise.
Method parse_method(std::string_view text);

struct SecurityIndexResult {
  std::size_t meter = 0;
  /// Minimum number of meters to compromise; nullopt when the problem is infeasible.
  std::optional<std::size_t> index;
  AttackVector attack;
  /// Meters whose reading the attack changes, computed exactly.
  std::vector<std::size_t> support;
  Method method = Method::l1;
  /// (lower, upper) for relaxation-based results.
  std::optional<std::pair<std::size_t, std::size_t>> bounds;
  double solve_seconds = 0.0;
};

/// Flow-only security index problem rewritten on the incidence structure: A = P·Bᵀ
/// (entries in {-1,0,1}), target row k, protected rows I. Line susceptances cancel,
/// so the result is independent of every reactance.
/// Throws HasInjections, or InvalidArgument if k is not an unprotected meter.
TUProblem reduce_to_tu(const Network& net, const MeasurementSystem& meas, std::size_t k);

/// Exact security index of meter k via the l1 relaxation. The returned attack
/// is scaled so that Δz(k) = 1.
/// Throws Infeasible when no unobservable attack can reach meter k.
SecurityIndexResult security_index(const Network& net, const MeasurementSystem& meas,
                                   std::size_t k, const SolveOptions& options = {});

struct SecurityIndexBounds {
  /// Optimum over flow meters only (a relaxation of the full problem).
  std::size_t lower = 0;
  /// Flow plus injection cardinality of the relaxation's minimizer.
  std::size_t upper = 0;
  /// The minimizer, as an attack on the full measurement system.
  AttackVector witness;
  std::vector<std::size_t> witness_support;
};

/// Certified bounds for systems that also carry injection meters.
/// Throws TargetIsInjection if k is an injection meter, InvalidArgument if an
/// injection meter is protected, Infeasible if the relaxation is infeasible.
SecurityIndexBounds security_index_bounds(const Network& net, const MeasurementSystem& meas,
                                          std::size_t k);

struct ObservabilityConditions {
  /// H(k,:) ≠ 0.
  bool target_nonzero = false;
  /// rank(H) = number of columns.
  bool full_column_rank = false;
};

ObservabilityConditions check_conditions(const RationalMatrix& h, std::size_t k);
/// Floating-point variant: rank via SVD with tolerance 1e-9·σmax.
ObservabilityConditions check_conditions(const Eigen::MatrixXd& h, std::size_t k);

/// Measurement set J ∋ k whose loss makes the system unobservable while J̄ ∪ {k}
/// restores full rank.
struct CriticalTuple {
  std::vector<std::size_t> measurements;
  std::size_t cardinality = 0;
  std::size_t target = 0;
};

/// Minimum critical tuple containing k, recovered from an optimal attack: J is the
/// support of H·θ*. Each row of H must be a positive multiple of a {-1,0,1} row
/// and the normalized matrix totally unimodular (true for flow-only H).
/// Throws ConditionViolated if H(k,:) = 0 or H lacks full column rank,
/// InvalidArgument if a row cannot be normalized to {-1,0,1}.
CriticalTuple min_critical_tuple(const RationalMatrix& h, std::size_t k);
CriticalTuple min_critical_tuple(const Network& net, const MeasurementSystem& meas, std::size_t k);

/// rank(H(J̄,:)) < n and rank(H(J̄ ∪ {k},:)) = n.
bool is_critical_tuple(const RationalMatrix& h, const std::vector<std::size_t>& j, std::size_t k);

}  // namespace gridsec
