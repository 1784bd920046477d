#include <algorithm>
#include <numeric>

#include "gridsec/error.hpp"
#include "gridsec/oracle.hpp"

namespace gridsec {
namespace {

// Advances `idx` (strictly increasing, values < n) to the next combination in
// lexicographic order. Returns false after the last one.
bool next_combination(std::vector<std::size_t>& idx, std::size_t n) {
  const std::size_t s = idx.size();
  for (std::size_t i = s; i-- > 0;) {
    if (idx[i] < n - s + i) {
      ++idx[i];
      for (std::size_t j = i + 1; j < s; ++j) idx[j] = idx[j - 1] + 1;
      return true;
    }
  }
  return false;
}

template <typename M>
void check_problem(const M& a, std::size_t k, const std::vector<std::size_t>& protected_rows) {
  if (k >= a.rows()) throw InvalidArgument("target row out of range");
  for (auto i : protected_rows) {
    if (i >= a.rows()) throw InvalidArgument("protected row out of range");
    if (i == k) throw InvalidArgument("target row is protected");
  }
}

std::vector<std::size_t> candidates(std::size_t rows, std::size_t k,
                                    const std::vector<std::size_t>& protected_rows) {
  std::vector<std::size_t> out;
  for (std::size_t r = 0; r < rows; ++r)
    if (r != k && std::find(protected_rows.begin(), protected_rows.end(), r) == protected_rows.end())
      out.push_back(r);
  return out;
}

// A(k,:) lies outside the row space of A(zero,:), i.e. A(k)x = 1, A(zero)x = 0 is solvable.
template <typename M>
bool reachable(const M& a, std::vector<std::size_t> zero, std::size_t k) {
  const std::size_t base = rank(a.select_rows(zero));
  zero.push_back(k);
  return rank(a.select_rows(zero)) > base;
}

template <typename M, typename Accept>
ExhaustiveResult search(const M& a, std::size_t k, const std::vector<std::size_t>& protected_rows,
                        std::size_t cap, Accept&& accept) {
  check_problem(a, k, protected_rows);
  ExhaustiveResult out;
  if (!reachable(a, protected_rows, k)) return out;

  const auto cand = candidates(a.rows(), k, protected_rows);
  const std::size_t m = cand.size();
  std::vector<char> chosen(m);
  for (std::size_t s = 0; s <= m && s + 1 <= cap; ++s) {
    std::vector<std::size_t> idx(s);
    std::iota(idx.begin(), idx.end(), 0);
    do {
      std::fill(chosen.begin(), chosen.end(), 0);
      for (auto i : idx) chosen[i] = 1;
      std::vector<std::size_t> zero = protected_rows;
      std::vector<std::size_t> support{k};
      for (std::size_t i = 0; i < m; ++i) (chosen[i] ? support : zero).push_back(cand[i]);
      if (reachable(a, zero, k) && accept(zero, support)) {
        std::sort(support.begin(), support.end());
        out.status = SearchStatus::optimal;
        out.value = support.size();
        out.support = std::move(support);
        return out;
      }
    } while (next_combination(idx, m));
  }
  // Every support was tried: only an extra acceptance test can have rejected them all.
  out.status = cap > m ? SearchStatus::infeasible : SearchStatus::cap_exceeded;
  return out;
}

}  // namespace

ExhaustiveResult exhaustive_min_support(const IntMatrix& a, std::size_t k,
                                        const std::vector<std::size_t>& protected_rows,
                                        std::size_t cap) {
  return search(a, k, protected_rows, cap, [](const auto&, const auto&) { return true; });
}

ExhaustiveResult exhaustive_min_support(const RationalMatrix& a, std::size_t k,
                                        const std::vector<std::size_t>& protected_rows,
                                        std::size_t cap) {
  return search(a, k, protected_rows, cap, [](const auto&, const auto&) { return true; });
}

ExhaustiveResult exhaustive_min_support_bounded(const IntMatrix& a, std::size_t k,
                                                const std::vector<std::size_t>& protected_rows,
                                                std::size_t cap) {
  const std::size_t n = a.cols();
  auto bounded_feasible = [&](const std::vector<std::size_t>& zero,
                              const std::vector<std::size_t>& support) {
    // Variables: x₊, x₋, then one slack per side of every |A(j,:)x| <= 1, j ∈ support.
    const std::size_t vars = 2 * n + 2 * support.size();
    StandardFormLP lp;
    lp.constraints = RationalMatrix(0, vars);
    auto add = [&](std::size_t r, int sign, std::optional<std::size_t> slack, int rhs) {
      RationalVector row(vars);
      for (std::size_t c = 0; c < n; ++c) {
        row[c] = sign * a(r, c);
        row[n + c] = -sign * a(r, c);
      }
      if (slack) row[*slack] = 1;
      lp.constraints.append_row(row);
      lp.rhs.push_back(rhs);
    };
    add(k, 1, std::nullopt, 1);
    for (auto r : zero) add(r, 1, std::nullopt, 0);
    for (std::size_t i = 0; i < support.size(); ++i) {
      add(support[i], 1, 2 * n + 2 * i, 1);
      add(support[i], -1, 2 * n + 2 * i + 1, 1);
    }
    lp.cost.assign(vars, 0);
    return solve_lp(lp).optimal();
  };
  return search(a, k, protected_rows, cap, bounded_feasible);
}

std::optional<std::vector<std::size_t>> brute_force_critical_tuple(const RationalMatrix& h,
                                                                   std::size_t k,
                                                                   std::size_t cap) {
  if (k >= h.rows()) throw InvalidArgument("target row out of range");
  const std::size_t n = h.cols();
  std::vector<std::size_t> others;
  for (std::size_t r = 0; r < h.rows(); ++r)
    if (r != k) others.push_back(r);
  const std::size_t m = others.size();
  for (std::size_t s = 0; s <= m && s + 1 <= cap; ++s) {
    std::vector<std::size_t> idx(s);
    std::iota(idx.begin(), idx.end(), 0);
    do {
      std::vector<std::size_t> rest;
      std::vector<std::size_t> j{k};
      std::size_t next = 0;
      for (std::size_t i = 0; i < m; ++i) {
        if (next < s && idx[next] == i) {
          j.push_back(others[i]);
          ++next;
        } else {
          rest.push_back(others[i]);
        }
      }
      if (rank(h.select_rows(rest)) < n) {
        rest.push_back(k);
        if (rank(h.select_rows(rest)) == n) {
          std::sort(j.begin(), j.end());
          return j;
        }
      }
    } while (next_combination(idx, m));
  }
  return std::nullopt;
}

ExhaustiveResult exhaustive_sparsest_solution(const RationalMatrix& phi, const RationalVector& b,
                                              std::size_t cap) {
  if (b.size() != phi.rows()) throw DimensionMismatch("Φ and b disagree in length");
  auto augmented = [&](const std::vector<std::size_t>& cols) {
    RationalMatrix m(phi.rows(), cols.size() + 1);
    for (std::size_t r = 0; r < phi.rows(); ++r) {
      for (std::size_t j = 0; j < cols.size(); ++j) m(r, j) = phi(r, cols[j]);
      m(r, cols.size()) = b[r];
    }
    return m;
  };
  auto consistent = [&](const std::vector<std::size_t>& cols) {
    const RationalMatrix aug = augmented(cols);
    std::vector<std::size_t> left(cols.size());
    std::iota(left.begin(), left.end(), 0);
    return rank(aug.select_cols(left)) == rank(aug);
  };

  ExhaustiveResult out;
  std::vector<std::size_t> all(phi.cols());
  std::iota(all.begin(), all.end(), 0);
  if (!consistent(all)) return out;

  const std::size_t m = phi.cols();
  for (std::size_t s = 0; s <= m && s <= cap; ++s) {
    std::vector<std::size_t> idx(s);
    std::iota(idx.begin(), idx.end(), 0);
    do {
      if (consistent(idx)) {
        out.status = SearchStatus::optimal;
        out.value = s;
        out.support = idx;
        return out;
      }
    } while (next_combination(idx, m));
  }
  out.status = SearchStatus::cap_exceeded;
  return out;
}

}  // namespace gridsec
