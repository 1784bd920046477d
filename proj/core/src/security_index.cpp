#include <algorithm>
#include <chrono>

#include "gridsec/error.hpp"
#include "gridsec/security_index.hpp"

namespace gridsec {

std::string_view to_string(Method m) {
  switch (m) {
    case Method::l1: return "l1";
    case Method::milp: return "milp";
    case Method::exhaustive: return "exhaustive";
  }
  return "unknown";
}

Method parse_method(std::string_view text) {
  if (text == "l1") return Method::l1;
  if (text == "milp") return Method::milp;
  if (text == "exhaustive") return Method::exhaustive;
  throw InvalidArgument("unknown method '" + std::string(text) + "'");
}

TUProblem reduce_to_tu(const Network& net, const MeasurementSystem& meas, std::size_t k) {
  validate(net, meas);
  if (meas.has_injections())
    throw HasInjections("exact security index requires a flow-only measurement system");
  if (k >= meas.meter_count()) throw InvalidArgument("meter " + std::to_string(k + 1) + " does not exist");
  if (meas.is_protected(k)) throw InvalidArgument("meter " + std::to_string(k + 1) + " is protected");

  const IntMatrix bt = incidence(net).truncated.transpose();
  TUProblem p;
  p.matrix = bt.select_rows(meas.flow_meters);
  p.target = k;
  p.protected_rows = meas.protected_meters;
  std::sort(p.protected_rows.begin(), p.protected_rows.end());
  return p;
}

SecurityIndexResult security_index(const Network& net, const MeasurementSystem& meas, std::size_t k,
                                   const SolveOptions& options) {
  const auto start = std::chrono::steady_clock::now();
  const TUProblem problem = reduce_to_tu(net, meas, k);
  const auto sol = solve_min_support(problem, options);
  if (!sol) throw Infeasible("meter " + std::to_string(k + 1) + " admits no unobservable attack");

  // H(k,:) = d_k·A(k,:), so dividing x* by d_k gives H(k,:)Δθ = 1.
  const double scale = net.lines[meas.flow_meters[k]].reactance.get_d();
  Eigen::VectorXd dtheta(static_cast<Eigen::Index>(sol->x.size()));
  for (std::size_t i = 0; i < sol->x.size(); ++i)
    dtheta(static_cast<Eigen::Index>(i)) = static_cast<double>(sol->x[i]) * scale;

  SecurityIndexResult r;
  r.meter = k;
  r.index = sol->cardinality;
  r.support = sol->support;
  r.method = Method::l1;
  r.attack = craft_attack(build_H(net, meas).h, dtheta);
  r.solve_seconds = std::chrono::duration<double>(std::chrono::steady_clock::now() - start).count();
  return r;
}

SecurityIndexBounds security_index_bounds(const Network& net, const MeasurementSystem& meas,
                                          std::size_t k) {
  validate(net, meas);
  if (k >= meas.meter_count()) throw InvalidArgument("meter " + std::to_string(k + 1) + " does not exist");
  if (!meas.is_flow(k)) throw TargetIsInjection("bounds are defined for flow-meter targets only");
  for (auto p : meas.protected_meters)
    if (!meas.is_flow(p)) throw InvalidArgument("protected injection meters are not supported by the bound");

  MeasurementSystem flows = meas;
  flows.injection_meters.clear();
  flows.weights.clear();
  const auto sol = solve_min_support(reduce_to_tu(net, flows, k));
  if (!sol) throw Infeasible("meter " + std::to_string(k + 1) + " admits no unobservable attack");

  const Rational& scale = net.lines[meas.flow_meters[k]].reactance;
  RationalVector dtheta;
  for (auto v : sol->x) dtheta.push_back(Rational(static_cast<long>(v)) * scale);
  const RationalVector dz = multiply(build_H_exact(net, meas), dtheta);

  SecurityIndexBounds b;
  b.lower = sol->cardinality;
  for (std::size_t m = 0; m < dz.size(); ++m)
    if (sgn(dz[m]) != 0) b.witness_support.push_back(m);
  b.upper = b.witness_support.size();

  Eigen::VectorXd dtheta_d(static_cast<Eigen::Index>(dtheta.size()));
  for (std::size_t i = 0; i < dtheta.size(); ++i) dtheta_d(static_cast<Eigen::Index>(i)) = dtheta[i].get_d();
  b.witness = craft_attack(build_H(net, meas).h, dtheta_d);
  return b;
}

ObservabilityConditions check_conditions(const RationalMatrix& h, std::size_t k) {
  if (k >= h.rows()) throw InvalidArgument("target row out of range");
  ObservabilityConditions c;
  const auto row = h.row(k);
  c.target_nonzero = std::any_of(row.begin(), row.end(), [](const Rational& v) { return sgn(v) != 0; });
  c.full_column_rank = rank(h) == h.cols();
  return c;
}

ObservabilityConditions check_conditions(const Eigen::MatrixXd& h, std::size_t k) {
  if (k >= static_cast<std::size_t>(h.rows())) throw InvalidArgument("target row out of range");
  ObservabilityConditions c;
  c.target_nonzero = (h.row(static_cast<Eigen::Index>(k)).array() != 0.0).any();
  if (h.cols() == 0) {
    c.full_column_rank = true;
    return c;
  }
  if (h.rows() == 0) return c;
  const Eigen::JacobiSVD<Eigen::MatrixXd> svd(h);
  const auto& s = svd.singularValues();
  const double tol = 1e-9 * s(0);
  const auto r = (s.array() > tol).count();
  c.full_column_rank = r == h.cols();
  return c;
}

bool is_critical_tuple(const RationalMatrix& h, const std::vector<std::size_t>& j, std::size_t k) {
  if (std::find(j.begin(), j.end(), k) == j.end()) return false;
  std::vector<std::size_t> rest;
  for (std::size_t r = 0; r < h.rows(); ++r)
    if (std::find(j.begin(), j.end(), r) == j.end()) rest.push_back(r);
  if (rank(h.select_rows(rest)) >= h.cols()) return false;
  rest.push_back(k);
  return rank(h.select_rows(rest)) == h.cols();
}

CriticalTuple min_critical_tuple(const RationalMatrix& h, std::size_t k) {
  const ObservabilityConditions cond = check_conditions(h, k);
  if (!cond.target_nonzero) throw ConditionViolated("condition I violated: H(k,:) is zero");
  if (!cond.full_column_rank) throw ConditionViolated("condition II violated: H lacks full column rank");

  // Positive row scaling leaves every support unchanged.
  TUProblem p;
  p.matrix = IntMatrix(h.rows(), h.cols(), 0);
  p.target = k;
  for (std::size_t r = 0; r < h.rows(); ++r) {
    const auto row = h.row(r);
    auto first = std::find_if(row.begin(), row.end(), [](const Rational& v) { return sgn(v) != 0; });
    if (first == row.end()) continue;
    const Rational scale = abs(*first);
    for (std::size_t c = 0; c < h.cols(); ++c) {
      const Rational v = h(r, c) / scale;
      if (v != 0 && v != 1 && v != -1)
        throw InvalidArgument("row " + std::to_string(r + 1) + " is not a scaled {-1,0,1} row");
      p.matrix(r, c) = v.get_num().get_si();
    }
  }
  const auto sol = solve_min_support(p);
  if (!sol) throw InternalError("security index infeasible despite condition I");

  CriticalTuple t;
  t.measurements = sol->support;
  t.cardinality = sol->cardinality;
  t.target = k;
  if (!is_critical_tuple(h, t.measurements, k))
    throw InternalError("attack support failed the critical-tuple rank conditions");
  return t;
}

CriticalTuple min_critical_tuple(const Network& net, const MeasurementSystem& meas, std::size_t k) {
  if (meas.has_injections()) throw HasInjections("critical tuples use the flow-only TU pipeline");
  return min_critical_tuple(build_H_exact(net, meas), k);
}

}  // namespace gridsec
