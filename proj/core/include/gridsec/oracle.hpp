#pragma once

#include <cstddef>
#include <cstdint>
#include <iosfwd>
#include <limits>
#include <optional>
#include <utility>
#include <vector>

#include <Eigen/Dense>

#include "gridsec/grid.hpp"
#include "gridsec/lp.hpp"
#include "gridsec/matrix.hpp"
#include "gridsec/security_index.hpp"

namespace gridsec {

// Ground-truth solvers used to cross-check the l1 pipeline, plus the sparse
// recovery diagnostics that show why generic compressed-sensing guarantees do
// not apply here.

enum class SearchStatus { optimal, infeasible, cap_exceeded };

struct ExhaustiveResult {
  SearchStatus status = SearchStatus::infeasible;
  std::size_t value = 0;
  /// Rows of the optimal support, ascending; lexicographically smallest among
  /// all minimum-cardinality supports.
  std::vector<std::size_t> support;
};

/// min ‖A(Ī,:)x‖₀ s.t. A(k,:)x = 1, A(I,:)x = 0 by enumerating candidate supports
/// {k} ∪ S, S ⊆ Ī\{k}, by increasing size. A support is feasible iff A(k,:) is
/// not in the row space of the rows forced to zero. `cap` bounds the returned
/// value (k included). Works for any matrix, TU or not.
ExhaustiveResult exhaustive_min_support(const IntMatrix& a, std::size_t k,
                                        const std::vector<std::size_t>& protected_rows,
                                        std::size_t cap);
ExhaustiveResult exhaustive_min_support(const RationalMatrix& a, std::size_t k,
                                        const std::vector<std::size_t>& protected_rows,
                                        std::size_t cap);

/// Same search with the extra constraint ‖Ax‖∞ <= 1; each rank-feasible support is
/// confirmed by an LP feasibility check.
ExhaustiveResult exhaustive_min_support_bounded(const IntMatrix& a, std::size_t k,
                                                const std::vector<std::size_t>& protected_rows,
                                                std::size_t cap);

/// Smallest J ∋ k with rank(H(J̄,:)) < n and rank(H(J̄ ∪ {k},:)) = n, by subset
/// enumeration with exact ranks. Returns nullopt when no such J has size <= cap.
std::optional<std::vector<std::size_t>> brute_force_critical_tuple(const RationalMatrix& h,
                                                                   std::size_t k,
                                                                   std::size_t cap);

/// min ‖z‖₀ s.t. Φz = b, supports enumerated by size then lexicographically.
ExhaustiveResult exhaustive_sparsest_solution(const RationalMatrix& phi, const RationalVector& b,
                                              std::size_t cap);

// ---------------------------------------------------------------------------
// Big-M branch and bound

/// minimize Σ y  s.t.  |A(Ī(j),:)θ| <= M·y(j),  A(k,:)θ = 1,  A(I,:)θ = 0,  y binary.
struct MilpInstance {
  IntMatrix rows;
  std::size_t target = 0;
  std::vector<std::size_t> protected_rows;
  Rational big_m = 1;
};

/// y(j) fixed to 0 or 1, keyed by row index j ∈ Ī of the instance matrix.
using Fixing = std::pair<std::size_t, int>;

struct NodeRecord {
  std::size_t depth = 0;
  std::vector<Fixing> fixings;
  /// LP relaxation value; nullopt when the node LP is infeasible.
  std::optional<Rational> bound;
  bool pruned = false;
};

struct MilpOptions {
  /// Extra fixings applied at the root (used to audit subtrees).
  std::vector<Fixing> root_fixings;
  bool record_tree = false;
  /// One line per node: depth, fixed y entries, LP bound, pruned flag.
  std::ostream* trace = nullptr;
  std::size_t max_nodes = 1'000'000;
  SolveOptions lp;
};

struct MilpResult {
  /// Optimal Σ y; nullopt when infeasible.
  std::optional<std::size_t> value;
  RationalVector dtheta;
  /// Rows of Ī with A(j,:)θ ≠ 0.
  std::vector<std::size_t> support;
  std::size_t nodes = 0;
  std::vector<NodeRecord> tree;
};

/// ‖B‖₁ of the truncated incidence matrix: the largest absolute column sum.
Rational big_m(const Network& net);

/// Depth-first branch and bound, 0-branch first, branching on the lowest-index
/// fractional y. Nodes whose rounded-up bound cannot beat the incumbent are pruned.
MilpResult milp_min_support(const MilpInstance& instance, const MilpOptions& options = {});

/// Security index by the big-M formulation with M = ‖B‖₁. Throws Infeasible.
SecurityIndexResult milp_solve(const Network& net, const MeasurementSystem& meas, std::size_t k,
                               const MilpOptions& options = {});

// ---------------------------------------------------------------------------
// Compressed-sensing diagnostics

/// Largest |⟨φᵢ, φⱼ⟩| / (‖φᵢ‖‖φⱼ‖) over distinct columns. The rational overload
/// takes the maximum exactly on squared ratios. Throws ZeroColumn.
double mutual_coherence(const RationalMatrix& phi);
double mutual_coherence(const Eigen::MatrixXd& phi);

/// ½(1 + 1/μ); +∞ when μ = 0.
double coherence_bound(double mu);
double coherence_bound(const RationalMatrix& phi);

/// δ_s = max over |T| <= s of max(λmax(G_T) - 1, 1 - λmin(G_T)), G_T = Φ(:,T)ᵀΦ(:,T).
/// Closed-form eigenvalues up to 2×2, a symmetric eigensolver beyond. Throws
/// InvalidArgument if s exceeds the column count, SizeLimitExceeded if the
/// number of subsets exceeds `budget`.
double rip_constant(const Eigen::MatrixXd& phi, std::size_t s, std::uint64_t budget = 5'000'000);
double rip_constant(const RationalMatrix& phi, std::size_t s, std::uint64_t budget = 5'000'000);

struct CsInstance {
  RationalMatrix phi;
  RationalVector b;
};

/// Rewrites the cardinality problem over z̃ = Ax: Φ = [L; e_I; e_k], b = [0; 0; 1]
/// with L the reduced-echelon basis of the left null space of A, reduced to
/// linearly independent rows. Throws TrivialNullspace if Aᵀ has a trivial null
/// space, Infeasible if the constraints are inconsistent.
CsInstance nullspace_reformulate(const RationalMatrix& a, std::size_t k,
                                 const std::vector<std::size_t>& protected_rows);

}  // namespace gridsec
