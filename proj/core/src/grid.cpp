#include <algorithm>
#include <cmath>
#include <numeric>
#include <set>

#include "gridsec/error.hpp"
#include "gridsec/grid.hpp"

namespace gridsec {

std::size_t Network::state_of(std::size_t bus) const {
  if (bus == reference_bus) return npos;
  return bus < reference_bus ? bus : bus - 1;
}

namespace {

bool connected(const Network& net) {
  if (net.bus_count <= 1) return true;
  std::vector<std::size_t> parent(net.bus_count);
  std::iota(parent.begin(), parent.end(), 0);
  auto find = [&](std::size_t x) {
    while (parent[x] != x) x = parent[x] = parent[parent[x]];
    return x;
  };
  std::size_t components = net.bus_count;
  for (const auto& l : net.lines) {
    auto a = find(l.from), b = find(l.to);
    if (a != b) {
      parent[a] = b;
      --components;
    }
  }
  return components == 1;
}

}  // namespace

void validate(const Network& net) {
  if (net.bus_count == 0) throw ValidationError("network has no buses");
  if (net.reference_bus >= net.bus_count) throw ValidationError("reference bus out of range");
  for (std::size_t i = 0; i < net.lines.size(); ++i) {
    const Line& l = net.lines[i];
    const std::string which = "line " + std::to_string(i + 1);
    if (l.from >= net.bus_count || l.to >= net.bus_count)
      throw ValidationError(which + " references an unknown bus");
    if (l.from == l.to) throw ValidationError(which + " is a self loop");
    if (sgn(l.reactance) <= 0) throw ValidationError(which + " has nonpositive reactance");
  }
  if (!connected(net)) throw DisconnectedGraph("network graph is not connected");
}

bool MeasurementSystem::is_protected(std::size_t meter) const {
  return std::find(protected_meters.begin(), protected_meters.end(), meter) != protected_meters.end();
}

MeterLabel MeasurementSystem::label(std::size_t meter) const {
  if (meter < flow_meters.size()) return {MeterKind::flow, flow_meters[meter]};
  if (meter < meter_count()) return {MeterKind::injection, injection_meters[meter - flow_meters.size()]};
  throw UnknownMeterId("meter " + std::to_string(meter) + " out of range");
}

Eigen::VectorXd MeasurementSystem::weight_vector() const {
  if (weights.empty()) return Eigen::VectorXd::Ones(static_cast<Eigen::Index>(meter_count()));
  return Eigen::Map<const Eigen::VectorXd>(weights.data(), static_cast<Eigen::Index>(weights.size()));
}

MeasurementSystem default_metering(const Network& net) {
  MeasurementSystem m;
  m.flow_meters.resize(net.line_count());
  std::iota(m.flow_meters.begin(), m.flow_meters.end(), 0);
  return m;
}

void validate(const Network& net, const MeasurementSystem& meas) {
  validate(net);
  std::set<std::size_t> seen;
  for (auto l : meas.flow_meters) {
    if (l >= net.line_count()) throw UnknownMeterId("flow meter on unknown line " + std::to_string(l + 1));
    if (!seen.insert(l).second) throw ValidationError("duplicate flow meter on line " + std::to_string(l + 1));
  }
  seen.clear();
  for (auto b : meas.injection_meters) {
    if (b >= net.bus_count) throw UnknownMeterId("injection meter on unknown bus " + std::to_string(b + 1));
    if (b == net.reference_bus)
      throw ValidationError("injection meter on the reference bus is not representable");
    if (!seen.insert(b).second) throw ValidationError("duplicate injection meter on bus " + std::to_string(b + 1));
  }
  seen.clear();
  for (auto p : meas.protected_meters) {
    if (p >= meas.meter_count()) throw UnknownMeterId("protected meter " + std::to_string(p + 1) + " does not exist");
    if (!seen.insert(p).second) throw ValidationError("meter " + std::to_string(p + 1) + " protected twice");
  }
  if (!meas.weights.empty()) {
    if (meas.weights.size() != meas.meter_count()) throw ValidationError("weight count differs from meter count");
    for (double w : meas.weights)
      if (!(w > 0.0)) throw ValidationError("meter weights must be positive");
  }
}

Incidence incidence(const Network& net) {
  if (!connected(net)) throw DisconnectedGraph("network graph is not connected");
  Incidence inc;
  inc.full = IntMatrix(net.bus_count, net.line_count(), 0);
  inc.truncated = IntMatrix(net.state_count(), net.line_count(), 0);
  for (std::size_t l = 0; l < net.line_count(); ++l) {
    const Line& line = net.lines[l];
    inc.full(line.from, l) = 1;
    inc.full(line.to, l) = -1;
    if (auto s = net.state_of(line.from); s != Network::npos) inc.truncated(s, l) = 1;
    if (auto s = net.state_of(line.to); s != Network::npos) inc.truncated(s, l) = -1;
  }
  return inc;
}

namespace {

// Assembles H for any scalar type given the line susceptances D = 1/x.
template <typename Scalar, typename Store>
void assemble_h(const Network& net, const MeasurementSystem& meas,
                const std::vector<Scalar>& susceptance, Store&& set) {
  std::size_t row = 0;
  for (auto l : meas.flow_meters) {
    const Line& line = net.lines[l];
    if (auto s = net.state_of(line.from); s != Network::npos) set(row, s, susceptance[l]);
    if (auto s = net.state_of(line.to); s != Network::npos) set(row, s, Scalar(-susceptance[l]));
    ++row;
  }
  for (auto bus : meas.injection_meters) {
    // Row `bus` of B·D·Bᵀ: each incident line contributes d·(e_bus - e_other).
    const std::size_t sb = net.state_of(bus);
    for (std::size_t l = 0; l < net.line_count(); ++l) {
      const Line& line = net.lines[l];
      if (line.from != bus && line.to != bus) continue;
      const std::size_t other = line.from == bus ? line.to : line.from;
      set(row, sb, susceptance[l]);
      if (auto so = net.state_of(other); so != Network::npos) set(row, so, Scalar(-susceptance[l]));
    }
    ++row;
  }
}

}  // namespace

MeasurementMatrix build_H(const Network& net, const MeasurementSystem& meas) {
  validate(net, meas);
  std::vector<double> d;
  for (const auto& l : net.lines) d.push_back(1.0 / l.reactance.get_d());
  MeasurementMatrix out;
  out.h = Eigen::MatrixXd::Zero(static_cast<Eigen::Index>(meas.meter_count()),
                                static_cast<Eigen::Index>(net.state_count()));
  assemble_h(net, meas, d, [&](std::size_t r, std::size_t c, double v) {
    out.h(static_cast<Eigen::Index>(r), static_cast<Eigen::Index>(c)) += v;
  });
  for (std::size_t m = 0; m < meas.meter_count(); ++m) out.labels.push_back(meas.label(m));
  return out;
}

RationalMatrix build_H_exact(const Network& net, const MeasurementSystem& meas) {
  validate(net, meas);
  std::vector<Rational> d;
  for (const auto& l : net.lines) d.push_back(1 / l.reactance);
  RationalMatrix h(meas.meter_count(), net.state_count());
  assemble_h(net, meas, d, [&](std::size_t r, std::size_t c, const Rational& v) { h(r, c) += v; });
  return h;
}

Eigen::VectorXd wls_estimate(const Eigen::MatrixXd& h, const Eigen::VectorXd& weights,
                             const Eigen::VectorXd& z) {
  if (weights.size() != h.rows() || z.size() != h.rows())
    throw DimensionMismatch("H, W and z must have matching row counts");
  if ((weights.array() <= 0.0).any()) throw InvalidArgument("weights must be positive");
  if (h.cols() == 0) return Eigen::VectorXd(0);
  if (h.rows() < h.cols()) throw RankDeficient("fewer measurements than states");
  const Eigen::VectorXd sqrt_w = weights.cwiseSqrt();
  const Eigen::MatrixXd scaled = sqrt_w.asDiagonal() * h;
  Eigen::ColPivHouseholderQR<Eigen::MatrixXd> qr(scaled);
  if (qr.rank() < h.cols()) throw RankDeficient("measurement matrix lacks full column rank");
  return qr.solve(sqrt_w.cwiseProduct(z));
}

Residual bdd_residual(const Eigen::MatrixXd& h, const Eigen::VectorXd& weights,
                      const Eigen::VectorXd& z) {
  const Eigen::VectorXd theta = wls_estimate(h, weights, z);
  Residual r;
  r.values = z - h * theta;
  r.norm = r.values.norm();
  return r;
}

AttackVector craft_attack(const Eigen::MatrixXd& h, const Eigen::VectorXd& dtheta, double tolerance) {
  if (dtheta.size() != h.cols()) throw DimensionMismatch("dtheta length must equal state count");
  AttackVector a;
  a.dtheta = dtheta;
  a.dz = h * dtheta;
  for (Eigen::Index i = 0; i < a.dz.size(); ++i)
    if (std::abs(a.dz(i)) > tolerance) a.touched.push_back(static_cast<std::size_t>(i));
  return a;
}

}  // namespace gridsec
