#include <algorithm>
#include <cmath>
#include <limits>
#include <numeric>

#include "gridsec/error.hpp"
#include "gridsec/oracle.hpp"

namespace gridsec {
namespace {

std::uint64_t binomial(std::uint64_t n, std::uint64_t k) {
  if (k > n) return 0;
  k = std::min(k, n - k);
  std::uint64_t out = 1;
  for (std::uint64_t i = 1; i <= k; ++i) {
    // out·(n-k+i) may overflow near the top; saturate, the caller only compares.
    if (out > std::numeric_limits<std::uint64_t>::max() / (n - k + i))
      return std::numeric_limits<std::uint64_t>::max();
    out = out * (n - k + i) / i;
  }
  return out;
}

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

}  // namespace

double mutual_coherence(const RationalMatrix& phi) {
  const std::size_t n = phi.cols();
  std::vector<Rational> norm2(n, 0);
  for (std::size_t c = 0; c < n; ++c) {
    for (std::size_t r = 0; r < phi.rows(); ++r) norm2[c] += phi(r, c) * phi(r, c);
    if (sgn(norm2[c]) == 0) throw ZeroColumn("column " + std::to_string(c + 1) + " is zero");
  }
  Rational best = 0;
  for (std::size_t i = 0; i < n; ++i)
    for (std::size_t j = i + 1; j < n; ++j) {
      Rational dot = 0;
      for (std::size_t r = 0; r < phi.rows(); ++r) dot += phi(r, i) * phi(r, j);
      const Rational ratio = dot * dot / (norm2[i] * norm2[j]);
      if (ratio > best) best = ratio;
    }
  return std::sqrt(best.get_d());
}

double mutual_coherence(const Eigen::MatrixXd& phi) {
  const Eigen::VectorXd norms = phi.colwise().norm();
  for (Eigen::Index c = 0; c < phi.cols(); ++c)
    if (norms(c) == 0.0) throw ZeroColumn("column " + std::to_string(c + 1) + " is zero");
  double best = 0.0;
  for (Eigen::Index i = 0; i < phi.cols(); ++i)
    for (Eigen::Index j = i + 1; j < phi.cols(); ++j)
      best = std::max(best, std::abs(phi.col(i).dot(phi.col(j))) / (norms(i) * norms(j)));
  return best;
}

double coherence_bound(double mu) {
  if (mu == 0.0) return std::numeric_limits<double>::infinity();
  return 0.5 * (1.0 + 1.0 / mu);
}

double coherence_bound(const RationalMatrix& phi) { return coherence_bound(mutual_coherence(phi)); }

double rip_constant(const Eigen::MatrixXd& phi, std::size_t s, std::uint64_t budget) {
  const auto n = static_cast<std::size_t>(phi.cols());
  if (s > n) throw InvalidArgument("sparsity exceeds the column count");
  std::uint64_t subsets = 0;
  for (std::size_t t = 1; t <= s; ++t) {
    const auto c = binomial(n, t);
    subsets = c > budget ? budget + 1 : subsets + c;
    if (subsets > budget) throw SizeLimitExceeded("RIP enumeration exceeds the subset budget");
  }

  const Eigen::MatrixXd gram = phi.transpose() * phi;
  double delta = 0.0;
  for (std::size_t t = 1; t <= s; ++t) {
    std::vector<std::size_t> idx(t);
    std::iota(idx.begin(), idx.end(), 0);
    do {
      double lo = 0.0;
      double hi = 0.0;
      if (t == 1) {
        lo = hi = gram(idx[0], idx[0]);
      } else if (t == 2) {
        const double a = gram(idx[0], idx[0]);
        const double b = gram(idx[1], idx[1]);
        const double c = gram(idx[0], idx[1]);
        const double mid = 0.5 * (a + b);
        const double rad = std::hypot(0.5 * (a - b), c);
        lo = mid - rad;
        hi = mid + rad;
      } else {
        Eigen::MatrixXd g(t, t);
        for (std::size_t i = 0; i < t; ++i)
          for (std::size_t j = 0; j < t; ++j) g(i, j) = gram(idx[i], idx[j]);
        const Eigen::SelfAdjointEigenSolver<Eigen::MatrixXd> eig(g, Eigen::EigenvaluesOnly);
        lo = eig.eigenvalues().minCoeff();
        hi = eig.eigenvalues().maxCoeff();
      }
      delta = std::max({delta, hi - 1.0, 1.0 - lo});
    } while (next_combination(idx, n));
  }
  return delta;
}

double rip_constant(const RationalMatrix& phi, std::size_t s, std::uint64_t budget) {
  return rip_constant(to_eigen(phi), s, budget);
}

CsInstance nullspace_reformulate(const RationalMatrix& a, std::size_t k,
                                 const std::vector<std::size_t>& protected_rows) {
  const std::size_t m = a.rows();
  if (k >= m) throw InvalidArgument("target row out of range");
  for (auto i : protected_rows) {
    if (i >= m) throw InvalidArgument("protected row out of range");
    if (i == k) throw InvalidArgument("target row is protected");
  }
  const RationalMatrix l = nullspace_basis(a.transpose());
  if (l.rows() == 0) throw TrivialNullspace("Aᵀ has a trivial null space; z̃ = Ax is unconstrained");

  RationalMatrix stacked(0, m);
  RationalVector rhs;
  for (std::size_t r = 0; r < l.rows(); ++r) {
    stacked.append_row(l.row(r));
    rhs.push_back(0);
  }
  RationalVector unit(m);
  auto add_unit = [&](std::size_t i, int value) {
    std::fill(unit.begin(), unit.end(), 0);
    unit[i] = 1;
    stacked.append_row(unit);
    rhs.push_back(value);
  };
  for (auto i : protected_rows) add_unit(i, 0);
  add_unit(k, 1);

  // The target row enters last, so it is dropped exactly when it is implied by the
  // homogeneous rows, i.e. when z̃(k) = 1 is unreachable.
  const auto keep = independent_rows(stacked);
  if (keep.empty() || keep.back() != stacked.rows() - 1)
    throw Infeasible("z̃(k) = 1 is inconsistent with the remaining constraints");

  CsInstance out;
  out.phi = stacked.select_rows(keep);
  for (auto r : keep) out.b.push_back(rhs[r]);
  return out;
}

}  // namespace gridsec
