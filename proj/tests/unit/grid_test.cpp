#include <random>

#include <gtest/gtest.h>

#include "gridsec/error.hpp"
#include "gridsec/grid.hpp"
#include "instances.hpp"

namespace gridsec {
namespace {

Network two_bus(Rational x = Rational(1, 2)) {
  Network net;
  net.bus_count = 2;
  net.lines.push_back({0, 1, x});
  return net;
}

TEST(Incidence, TwoBus) {
  const Incidence inc = incidence(two_bus());
  EXPECT_EQ(inc.full, (IntMatrix{{1}, {-1}}));
  EXPECT_EQ(inc.truncated, (IntMatrix{{-1}}));
}

TEST(Incidence, ThreeBusPath) {
  Network net;
  net.bus_count = 3;
  net.lines = {{0, 1, 1}, {1, 2, 1}};
  EXPECT_EQ(incidence(net).truncated, (IntMatrix{{-1, 1}, {0, -1}}));
}

TEST(Incidence, ColumnSumsVanishOnRandomGraphs) {
  std::mt19937_64 rng(17);
  for (int t = 0; t < 50; ++t) {
    const Network net = testing::random_network(2 + t % 9, t % 7, rng);
    const Incidence inc = incidence(net);
    for (std::size_t c = 0; c < inc.full.cols(); ++c) {
      std::int64_t sum = 0;
      for (std::size_t r = 0; r < inc.full.rows(); ++r) {
        sum += inc.full(r, c);
        EXPECT_LE(std::abs(inc.full(r, c)), 1);
      }
      EXPECT_EQ(sum, 0);
    }
    EXPECT_EQ(inc.truncated.rows(), net.bus_count - 1);
  }
}

TEST(Incidence, DisconnectedThrows) {
  Network net;
  net.bus_count = 4;
  net.lines = {{0, 1, 1}, {2, 3, 1}};
  EXPECT_THROW(incidence(net), DisconnectedGraph);
  EXPECT_THROW(validate(net), DisconnectedGraph);
}

TEST(Validate, RejectsBadNetworks) {
  Network net = two_bus(0);
  EXPECT_THROW(validate(net), ValidationError);
  net = two_bus(-1);
  EXPECT_THROW(validate(net), ValidationError);
  net = two_bus();
  net.lines.push_back({1, 1, 1});
  EXPECT_THROW(validate(net), ValidationError);
  net = two_bus();
  net.lines.push_back({0, 5, 1});
  EXPECT_THROW(validate(net), ValidationError);
  net = two_bus();
  net.reference_bus = 2;
  EXPECT_THROW(validate(net), ValidationError);
}

TEST(BuildH, TwoBusFlowAndInjection) {
  const Network net = two_bus();
  MeasurementSystem flow;
  flow.flow_meters = {0};
  EXPECT_EQ(build_H(net, flow).h, Eigen::MatrixXd::Constant(1, 1, -2.0));
  EXPECT_EQ(build_H_exact(net, flow), RationalMatrix({{-2}}));

  MeasurementSystem inj;
  inj.injection_meters = {1};
  EXPECT_EQ(build_H(net, inj).h, Eigen::MatrixXd::Constant(1, 1, 2.0));
  EXPECT_EQ(build_H(net, inj).labels.front().kind, MeterKind::injection);
}

TEST(BuildH, NoMetersGivesEmptyMatrix) {
  const auto h = build_H(two_bus(), MeasurementSystem{});
  EXPECT_EQ(h.h.rows(), 0);
  EXPECT_EQ(h.h.cols(), 1);
  EXPECT_THROW(wls_estimate(h.h, Eigen::VectorXd(0), Eigen::VectorXd(0)), RankDeficient);
}

TEST(BuildH, UnknownMeters) {
  MeasurementSystem m;
  m.flow_meters = {3};
  EXPECT_THROW(build_H(two_bus(), m), UnknownMeterId);
  m.flow_meters = {0};
  m.protected_meters = {4};
  EXPECT_THROW(build_H(two_bus(), m), UnknownMeterId);
  m = {};
  m.injection_meters = {7};
  EXPECT_THROW(build_H(two_bus(), m), UnknownMeterId);
}

TEST(BuildH, FlowRowsHaveOppositeSignPairs) {
  std::mt19937_64 rng(3);
  const Case c = testing::random_flow_case(8, rng);
  const RationalMatrix h = build_H_exact(c.network, c.meters);
  for (std::size_t r = 0; r < h.rows(); ++r) {
    int nonzeros = 0;
    Rational sum = 0;
    for (const auto& v : h.row(r)) {
      nonzeros += sgn(v) != 0;
      sum += v;
    }
    const Line& line = c.network.lines[c.meters.flow_meters[r]];
    const bool touches_ref = line.from == c.network.reference_bus || line.to == c.network.reference_bus;
    EXPECT_EQ(nonzeros, touches_ref ? 1 : 2);
    if (!touches_ref) {
      EXPECT_EQ(sum, 0);
    }
  }
}

TEST(BuildH, FloatMatchesExact) {
  std::mt19937_64 rng(8);
  for (int t = 0; t < 20; ++t) {
    const Case c = testing::random_injection_case(6, rng);
    EXPECT_TRUE(build_H(c.network, c.meters).h.isApprox(to_eigen(build_H_exact(c.network, c.meters))));
  }
}

TEST(BuildH, ReactanceScalingScalesRows) {
  std::mt19937_64 rng(4);
  const Case c = testing::random_injection_case(6, rng);
  Network scaled = c.network;
  for (auto& l : scaled.lines) l.reactance *= 3;
  EXPECT_EQ(build_H_exact(scaled, c.meters).rows(), build_H_exact(c.network, c.meters).rows());
  const RationalMatrix a = build_H_exact(c.network, c.meters);
  const RationalMatrix b = build_H_exact(scaled, c.meters);
  for (std::size_t r = 0; r < a.rows(); ++r)
    for (std::size_t j = 0; j < a.cols(); ++j) EXPECT_EQ(b(r, j) * 3, a(r, j));
}

TEST(Wls, RecoversNoiseFreeState) {
  const Case c = parse_case(testing::data_path("ieee14.case"));
  const Eigen::MatrixXd h = build_H(c.network, c.meters).h;
  const Eigen::VectorXd w = Eigen::VectorXd::LinSpaced(h.rows(), 1.0, 3.0);
  const Eigen::VectorXd theta = Eigen::VectorXd::LinSpaced(h.cols(), -0.2, 0.3);
  const Eigen::VectorXd est = wls_estimate(h, w, h * theta);
  EXPECT_LT((est - theta).norm(), 1e-10);
  // Idempotence.
  EXPECT_LT((wls_estimate(h, w, h * est) - est).norm(), 1e-10);
}

TEST(Wls, TwoBusExample) {
  const Eigen::MatrixXd h = Eigen::MatrixXd::Constant(1, 1, -2.0);
  const Eigen::VectorXd est = wls_estimate(h, Eigen::VectorXd::Ones(1), Eigen::VectorXd::Constant(1, -2.0));
  EXPECT_NEAR(est(0), 1.0, 1e-15);
}

TEST(Wls, ZeroColumnIsRankDeficient) {
  Eigen::MatrixXd h(3, 2);
  h << 1, 0, 2, 0, 3, 0;
  EXPECT_THROW(wls_estimate(h, Eigen::VectorXd::Ones(3), Eigen::VectorXd::Ones(3)), RankDeficient);
  EXPECT_THROW(wls_estimate(h, Eigen::VectorXd::Ones(2), Eigen::VectorXd::Ones(3)), DimensionMismatch);
}

TEST(Residual, ConsistentAndSquareCasesVanish) {
  Eigen::MatrixXd h(3, 2);
  h << 1, 0, -1, 1, 0, 2;
  const Eigen::VectorXd w = Eigen::VectorXd::Ones(3);
  EXPECT_LT(bdd_residual(h, w, h * Eigen::Vector2d(0.3, -0.1)).norm, 1e-14);
  Eigen::MatrixXd sq(2, 2);
  sq << 2, 1, 1, 3;
  EXPECT_LT(bdd_residual(sq, Eigen::VectorXd::Ones(2), Eigen::Vector2d(5, -7)).norm, 1e-12);
}

TEST(Residual, AttackIsInvisible) {
  const Case c = parse_case(testing::data_path("ieee14.case"));
  const Eigen::MatrixXd h = build_H(c.network, c.meters).h;
  const Eigen::VectorXd w = Eigen::VectorXd::Ones(h.rows());
  std::mt19937_64 rng(1);
  std::normal_distribution<double> n(0.0, 0.1);
  Eigen::VectorXd z = h * Eigen::VectorXd::NullaryExpr(h.cols(), [&] { return n(rng); });
  z += Eigen::VectorXd::NullaryExpr(h.rows(), [&] { return 0.01 * n(rng); });
  const Eigen::VectorXd dtheta = Eigen::VectorXd::NullaryExpr(h.cols(), [&] { return n(rng); });
  const Residual before = bdd_residual(h, w, z);
  const Residual after = bdd_residual(h, w, z + craft_attack(h, dtheta).dz);
  EXPECT_GT(before.norm, 1e-4);
  EXPECT_LT((after.values - before.values).norm(), 1e-10);
}

TEST(CraftAttack, Examples) {
  const Eigen::MatrixXd h = Eigen::MatrixXd::Constant(1, 1, -2.0);
  const AttackVector zero = craft_attack(h, Eigen::VectorXd::Zero(1));
  EXPECT_TRUE(zero.touched.empty());
  const AttackVector a = craft_attack(h, Eigen::VectorXd::Ones(1));
  EXPECT_EQ(a.dz(0), -2.0);
  EXPECT_EQ(a.touched, std::vector<std::size_t>{0});
  EXPECT_THROW(craft_attack(h, Eigen::VectorXd::Ones(2)), DimensionMismatch);
}

TEST(MeasurementSystem, LabelsAndDefaults) {
  Network net;
  net.bus_count = 3;
  net.lines = {{0, 1, 1}, {1, 2, 1}};
  const MeasurementSystem def = default_metering(net);
  EXPECT_EQ(def.flow_meters, (std::vector<std::size_t>{0, 1}));
  EXPECT_FALSE(def.has_injections());
  MeasurementSystem m;
  m.flow_meters = {1};
  m.injection_meters = {2};
  m.protected_meters = {1};
  EXPECT_EQ(m.label(1).kind, MeterKind::injection);
  EXPECT_EQ(m.label(1).element, 2u);
  EXPECT_TRUE(m.is_protected(1));
  EXPECT_FALSE(m.is_protected(0));
  m.injection_meters = {0};
  EXPECT_THROW(validate(net, m), ValidationError);  // reference bus
  m.injection_meters = {};
  m.protected_meters = {};
  m.flow_meters = {1, 1};
  EXPECT_THROW(validate(net, m), ValidationError);
  m.flow_meters = {1};
  m.weights = {0.0};
  EXPECT_THROW(validate(net, m), ValidationError);
}

}  // namespace
}  // namespace gridsec
