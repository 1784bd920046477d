#include <algorithm>
#include <random>

#include "gridsec/error.hpp"
#include "gridsec/tumin.hpp"

namespace gridsec {

std::vector<std::size_t> TUProblem::unprotected_rows() const {
  std::vector<bool> prot(matrix.rows(), false);
  for (auto i : protected_rows) prot.at(i) = true;
  std::vector<std::size_t> out;
  for (std::size_t r = 0; r < matrix.rows(); ++r)
    if (!prot[r]) out.push_back(r);
  return out;
}

void TUProblem::validate() const {
  if (target >= matrix.rows()) throw InvalidArgument("target row out of range");
  for (auto i : protected_rows) {
    if (i >= matrix.rows()) throw InvalidArgument("protected row out of range");
    if (i == target) throw InvalidArgument("target row is protected");
  }
}

L1Layout l1_layout(const TUProblem& problem) {
  return {problem.matrix.cols(), problem.unprotected_rows().size()};
}

StandardFormLP build_l1_lp(const TUProblem& problem) {
  problem.validate();
  const IntMatrix& a = problem.matrix;
  const std::size_t n = a.cols();
  const auto unprotected = problem.unprotected_rows();
  const L1Layout layout{n, unprotected.size()};

  std::vector<std::size_t> prot(problem.protected_rows);
  std::sort(prot.begin(), prot.end());
  prot.erase(std::unique(prot.begin(), prot.end()), prot.end());
  std::vector<std::size_t> independent;
  for (auto i : independent_rows(to_rational(a.select_rows(prot)))) independent.push_back(prot[i]);

  const std::size_t vars = 2 * n + 2 * unprotected.size();
  StandardFormLP lp;
  lp.cost.assign(vars, Rational(0));
  for (std::size_t j = 0; j < unprotected.size(); ++j) {
    lp.cost[layout.y_plus(j)] = 1;
    lp.cost[layout.y_minus(j)] = 1;
  }

  RationalVector row(vars);
  auto put_x = [&](std::size_t source) {
    for (std::size_t i = 0; i < n; ++i) {
      row[layout.x_plus(i)] = static_cast<long>(a(source, i));
      row[layout.x_minus(i)] = -static_cast<long>(a(source, i));
    }
  };
  for (std::size_t j = 0; j < unprotected.size(); ++j) {
    std::fill(row.begin(), row.end(), Rational(0));
    put_x(unprotected[j]);
    row[layout.y_plus(j)] = -1;
    row[layout.y_minus(j)] = 1;
    lp.constraints.append_row(row);
    lp.rhs.emplace_back(0);
  }
  for (auto i : independent) {
    std::fill(row.begin(), row.end(), Rational(0));
    put_x(i);
    lp.constraints.append_row(row);
    lp.rhs.emplace_back(0);
  }
  std::fill(row.begin(), row.end(), Rational(0));
  put_x(problem.target);
  lp.constraints.append_row(row);
  lp.rhs.emplace_back(1);
  return lp;
}

std::optional<TUSolution> solve_min_support(const TUProblem& problem, const SolveOptions& options) {
  const StandardFormLP lp = build_l1_lp(problem);
  const L1Layout layout = l1_layout(problem);
  const LpOutcome outcome = solve_lp(lp, options);
  if (outcome.status == LpStatus::infeasible) return std::nullopt;
  if (outcome.status == LpStatus::unbounded)
    throw InternalError("l1 LP reported unbounded although its cost is nonnegative");

  const BasicFeasibleSolution& bfs = *outcome.solution;
  TUSolution sol;
  sol.lp_objective = bfs.objective;
  sol.lp_stats = outcome.stats;
  sol.x.resize(layout.n);
  for (std::size_t i = 0; i < layout.n; ++i) {
    const Rational v = bfs.values[layout.x_plus(i)] - bfs.values[layout.x_minus(i)];
    if (!is_integer(v))
      throw InternalError("l1 LP optimum is fractional; the matrix is not totally unimodular");
    sol.x[i] = v.get_num().get_si();
  }
  const IntMatrix& a = problem.matrix;
  for (auto j : problem.unprotected_rows()) {
    std::int64_t v = 0;
    for (std::size_t i = 0; i < layout.n; ++i) v += a(j, i) * sol.x[i];
    sol.image.push_back(v < 0 ? -v : v);
    if (v != 0) sol.support.push_back(j);
  }
  sol.cardinality = sol.support.size();
  return sol;
}

bool validate_integrality(const TUSolution& solution, const TUProblem& problem) {
  const IntMatrix& a = problem.matrix;
  if (solution.x.size() != a.cols()) return false;
  for (auto v : solution.x)
    if (v < -1 || v > 1) return false;
  for (auto j : problem.unprotected_rows()) {
    std::int64_t v = 0;
    for (std::size_t i = 0; i < a.cols(); ++i) v += a(j, i) * solution.x[i];
    if (v < -1 || v > 1) return false;
  }
  return true;
}

namespace {

std::uint64_t binomial(std::uint64_t n, std::uint64_t k) {
  if (k > n) return 0;
  std::uint64_t r = 1;
  for (std::uint64_t i = 1; i <= k; ++i) {
    r = r * (n - k + i) / i;
    if (r > (1ull << 62)) return 1ull << 62;
  }
  return r;
}

// Advances `idx` (strictly increasing, values < n) to the next combination.
bool next_combination(std::vector<std::size_t>& idx, std::size_t n) {
  const std::size_t k = idx.size();
  for (std::size_t i = k; i-- > 0;) {
    if (idx[i] < n - k + i) {
      ++idx[i];
      for (std::size_t j = i + 1; j < k; ++j) idx[j] = idx[j - 1] + 1;
      return true;
    }
  }
  return false;
}

}  // namespace

bool verify_tu(const IntMatrix& a, std::size_t max_order, std::uint64_t budget) {
  const std::size_t limit = std::min(a.rows(), a.cols());
  if (max_order == 0 || max_order > limit)
    throw InvalidArgument("max_order must lie in [1, min(rows, cols)]");

  std::uint64_t minors = 0;
  for (std::size_t k = 1; k <= max_order; ++k) {
    const std::uint64_t term = binomial(a.rows(), k) * binomial(a.cols(), k);
    if (term > budget || (minors += term) > budget)
      throw SizeLimitExceeded("TU verification needs more than " + std::to_string(budget) + " minors");
  }

  for (std::size_t r = 0; r < a.rows(); ++r)
    for (std::size_t c = 0; c < a.cols(); ++c)
      if (a(r, c) < -1 || a(r, c) > 1) return false;

  IntMatrix sub;
  for (std::size_t k = 2; k <= max_order; ++k) {
    std::vector<std::size_t> rows(k);
    for (std::size_t i = 0; i < k; ++i) rows[i] = i;
    do {
      const IntMatrix band = a.select_rows(rows);
      std::vector<std::size_t> cols(k);
      for (std::size_t i = 0; i < k; ++i) cols[i] = i;
      do {
        sub = band.select_cols(cols);
        const std::int64_t d = determinant(sub);
        if (d < -1 || d > 1) return false;
      } while (next_combination(cols, a.cols()));
    } while (next_combination(rows, a.rows()));
  }
  return true;
}

IntMatrix gen_consecutive_ones(std::size_t rows, std::size_t cols, std::uint64_t seed) {
  if (rows == 0 || cols == 0) throw InvalidArgument("consecutive-ones matrix needs rows, cols >= 1");
  std::mt19937_64 rng(seed);
  IntMatrix out(rows, cols, 0);
  for (std::size_t c = 0; c < cols; ++c) {
    const std::size_t length = std::uniform_int_distribution<std::size_t>(0, rows)(rng);
    const std::size_t start = std::uniform_int_distribution<std::size_t>(0, rows - length)(rng);
    for (std::size_t r = start; r < start + length; ++r) out(r, c) = 1;
  }
  return out;
}

}  // namespace gridsec
