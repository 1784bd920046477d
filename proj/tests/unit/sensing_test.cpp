#include <cmath>
#include <limits>

#include <gtest/gtest.h>

#include "gridsec/error.hpp"
#include "gridsec/oracle.hpp"
#include "instances.hpp"

namespace gridsec {
namespace {

// Φ and b of the worked counterexample, as printed.
RationalMatrix paper_phi() {
  return RationalMatrix({{1, 1, -1, -1, -1, 0, 1}, {1, 0, -1, 0, -1, 1, 0}, {0, 0, 0, 0, 0, 1, 0}});
}

TEST(MutualCoherence, Examples) {
  EXPECT_EQ(mutual_coherence(paper_phi()), 1.0);
  EXPECT_EQ(mutual_coherence(RationalMatrix({{1, 0}, {0, 1}})), 0.0);
  EXPECT_EQ(mutual_coherence(RationalMatrix({{1, 1}, {2, 2}})), 1.0);
  EXPECT_NEAR(mutual_coherence(RationalMatrix({{1, 1}, {0, 1}})), std::sqrt(0.5), 1e-15);
  EXPECT_NEAR(mutual_coherence(to_eigen(paper_phi())), 1.0, 1e-12);
  EXPECT_THROW(mutual_coherence(RationalMatrix({{1, 0}, {1, 0}})), ZeroColumn);
  EXPECT_THROW(mutual_coherence(Eigen::MatrixXd::Zero(2, 2)), ZeroColumn);
}

TEST(CoherenceBound, Examples) {
  EXPECT_EQ(coherence_bound(1.0), 1.0);
  EXPECT_EQ(coherence_bound(1.0 / 3.0), 2.0);
  EXPECT_EQ(coherence_bound(0.0), std::numeric_limits<double>::infinity());
  EXPECT_EQ(coherence_bound(paper_phi()), 1.0);
  EXPECT_TRUE(std::isinf(coherence_bound(RationalMatrix({{1, 0}, {0, 1}}))));
}

TEST(RipConstant, Examples) {
  EXPECT_GE(rip_constant(paper_phi(), 2), 1.0);
  EXPECT_NEAR(rip_constant(Eigen::MatrixXd::Identity(4, 4), 3), 0.0, 1e-12);
  EXPECT_EQ(rip_constant(RationalMatrix({{1}}), 1), 0.0);
  EXPECT_EQ(rip_constant(RationalMatrix({{1}}), 0), 0.0);
  EXPECT_THROW(rip_constant(RationalMatrix({{1}}), 2), InvalidArgument);
  EXPECT_THROW(rip_constant(Eigen::MatrixXd::Identity(40, 40), 20, 1000), SizeLimitExceeded);
}

TEST(RipConstant, ClosedFormMatchesEigensolver) {
  // Beyond s = 2 the eigensolver path takes over; δ is monotone in s.
  const Eigen::MatrixXd phi = to_eigen(paper_phi());
  double prev = 0.0;
  for (std::size_t s = 1; s <= 4; ++s) {
    const double d = rip_constant(phi, s);
    EXPECT_GE(d, prev - 1e-12);
    prev = d;
  }
  Eigen::MatrixXd two(2, 2);
  two << 1, 0.5, 0, 1;
  const Eigen::SelfAdjointEigenSolver<Eigen::MatrixXd> eig(two.transpose() * two);
  const double expected = std::max(eig.eigenvalues().maxCoeff() - 1, 1 - eig.eigenvalues().minCoeff());
  EXPECT_NEAR(rip_constant(two, 2), std::max(expected, 0.25), 1e-12);
}

TEST(NullspaceReformulate, SixBusMatchesWorkedExample) {
  const CsInstance cs = nullspace_reformulate(to_rational(testing::six_bus_a()), 5, {});
  EXPECT_EQ(cs.phi.rows(), 3u);
  EXPECT_EQ(rank(cs.phi), 3u);
  EXPECT_TRUE(same_row_space(cs.phi, paper_phi()));
  // Same affine solution set: equal row spaces of [Φ | b].
  RationalMatrix ours(3, 8), theirs(3, 8);
  const RationalVector b{0, 0, 1};
  const RationalMatrix p = paper_phi();
  for (std::size_t r = 0; r < 3; ++r) {
    for (std::size_t c = 0; c < 7; ++c) {
      ours(r, c) = cs.phi(r, c);
      theirs(r, c) = p(r, c);
    }
    ours(r, 7) = cs.b[r];
    theirs(r, 7) = b[r];
  }
  EXPECT_TRUE(same_row_space(ours, theirs));
}

TEST(NullspaceReformulate, SparsestSolutionMatchesTumin) {
  const IntMatrix a = testing::six_bus_a();
  const CsInstance cs = nullspace_reformulate(to_rational(a), 5, {});
  const auto r = exhaustive_sparsest_solution(cs.phi, cs.b, 7);
  EXPECT_EQ(r.value, solve_min_support({a, 5, {}})->cardinality);
  // Optima exhibited in the worked example are feasible for Φ.
  for (const RationalVector& z : {RationalVector{-1, 0, 0, -1, 0, 1, 0}, RationalVector{-1, 1, 0, 0, 0, 1, 0}})
    EXPECT_EQ(multiply(cs.phi, z), cs.b);
}

TEST(NullspaceReformulate, Errors) {
  EXPECT_THROW(nullspace_reformulate(RationalMatrix({{1, 0}, {0, 1}}), 0, {}), TrivialNullspace);
  // Row 2 = row 0 + row 1: protecting 0 and 1 forces z̃(2) = 0.
  EXPECT_THROW(nullspace_reformulate(RationalMatrix({{1, -1, 0}, {0, 1, -1}, {1, 0, -1}}), 2, {0, 1}),
               Infeasible);
  EXPECT_THROW(nullspace_reformulate(RationalMatrix({{1}, {1}}), 2, {}), InvalidArgument);
}

}  // namespace
}  // namespace gridsec
