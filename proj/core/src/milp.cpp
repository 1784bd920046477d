#include <algorithm>
#include <chrono>
#include <ostream>

#include "gridsec/error.hpp"
#include "gridsec/oracle.hpp"

namespace gridsec {
namespace {

constexpr int kFree = -1;

class BranchAndBound {
 public:
  BranchAndBound(const MilpInstance& inst, const MilpOptions& opt) : inst_(inst), opt_(opt) {
    const auto& a = inst_.rows;
    if (inst_.target >= a.rows()) throw InvalidArgument("target row out of range");
    if (sgn(inst_.big_m) <= 0) throw InvalidArgument("big-M must be positive");
    for (auto i : inst_.protected_rows) {
      if (i >= a.rows()) throw InvalidArgument("protected row out of range");
      if (i == inst_.target) throw InvalidArgument("target row is protected");
    }
    for (std::size_t r = 0; r < a.rows(); ++r)
      if (std::find(inst_.protected_rows.begin(), inst_.protected_rows.end(), r) ==
          inst_.protected_rows.end())
        unprotected_.push_back(r);
  }

  MilpResult run() {
    std::vector<int> root(inst_.rows.rows(), kFree);
    for (auto [row, value] : opt_.root_fixings) {
      if (row >= root.size() || std::find(unprotected_.begin(), unprotected_.end(), row) == unprotected_.end())
        throw InvalidArgument("fixing refers to a row outside Ī");
      if (value != 0 && value != 1) throw InvalidArgument("fixings must be 0 or 1");
      root[row] = value;
    }

    struct Pending {
      std::vector<int> fix;
      std::size_t depth;
    };
    std::vector<Pending> stack{{std::move(root), 0}};
    while (!stack.empty()) {
      Pending node = std::move(stack.back());
      stack.pop_back();
      if (++result_.nodes > opt_.max_nodes) throw SizeLimitExceeded("branch and bound node limit reached");

      NodeRecord rec;
      rec.depth = node.depth;
      for (std::size_t r = 0; r < node.fix.size(); ++r)
        if (node.fix[r] != kFree) rec.fixings.emplace_back(r, node.fix[r]);

      const auto branch_row = evaluate(node.fix, rec);
      log(rec);
      if (!branch_row) continue;

      auto one = node.fix;
      auto zero = std::move(node.fix);
      one[*branch_row] = 1;
      zero[*branch_row] = 0;
      stack.push_back({std::move(one), node.depth + 1});
      stack.push_back({std::move(zero), node.depth + 1});
    }
    if (incumbent_) {
      result_.value = *incumbent_;
      const auto& a = inst_.rows;
      for (auto r : unprotected_) {
        Rational v = 0;
        for (std::size_t c = 0; c < a.cols(); ++c) v += a(r, c) * result_.dtheta[c];
        if (sgn(v) != 0) result_.support.push_back(r);
      }
    }
    return std::move(result_);
  }

 private:
  // Solves the node LP, updates the incumbent and returns the row to branch on,
  // or nullopt when the node is fathomed.
  std::optional<std::size_t> evaluate(const std::vector<int>& fix, NodeRecord& rec) {
    const auto& a = inst_.rows;
    const std::size_t n = a.cols();
    const Rational& m = inst_.big_m;

    std::vector<std::size_t> free_rows;
    std::size_t fixed_one = 0;
    for (auto r : unprotected_) {
      if (fix[r] == kFree) free_rows.push_back(r);
      if (fix[r] == 1) ++fixed_one;
    }
    // θ₊, θ₋, y(free), then slacks: three per free row, two per row fixed to one.
    const std::size_t y0 = 2 * n;
    std::size_t slack = y0 + free_rows.size();
    const std::size_t vars = slack + 3 * free_rows.size() + 2 * fixed_one;

    StandardFormLP lp;
    lp.constraints = RationalMatrix(0, vars);
    lp.cost.assign(vars, 0);
    RationalVector row(vars);
    auto emit = [&](std::size_t r, int sign, const Rational& rhs) {
      for (std::size_t c = 0; c < n; ++c) {
        row[c] = sign * a(r, c);
        row[n + c] = -sign * a(r, c);
      }
      lp.constraints.append_row(row);
      lp.rhs.push_back(rhs);
      std::fill(row.begin(), row.end(), 0);
    };

    for (std::size_t i = 0; i < free_rows.size(); ++i) {
      const std::size_t y = y0 + i;
      lp.cost[y] = 1;
      for (int sign : {1, -1}) {
        row[y] = -m;
        row[slack++] = 1;
        emit(free_rows[i], sign, 0);
      }
      row[y] = 1;
      row[slack++] = 1;
      lp.constraints.append_row(row);
      lp.rhs.push_back(1);
      std::fill(row.begin(), row.end(), 0);
    }
    for (auto r : unprotected_) {
      if (fix[r] == 0) emit(r, 1, 0);
      if (fix[r] == 1) {
        for (int sign : {1, -1}) {
          row[slack++] = 1;
          emit(r, sign, m);
        }
      }
    }
    for (auto r : inst_.protected_rows) emit(r, 1, 0);
    emit(inst_.target, 1, 1);

    const LpOutcome out = solve_lp(lp, opt_.lp);
    if (!out.optimal()) {
      rec.pruned = true;
      return std::nullopt;
    }
    const auto& x = out.solution->values;
    const Rational bound = out.solution->objective + static_cast<long>(fixed_one);
    rec.bound = bound;

    mpz_class ceil_bound;
    mpz_cdiv_q(ceil_bound.get_mpz_t(), bound.get_num_mpz_t(), bound.get_den_mpz_t());
    if (incumbent_ && ceil_bound >= static_cast<long>(*incumbent_)) {
      rec.pruned = true;
      return std::nullopt;
    }

    for (std::size_t i = 0; i < free_rows.size(); ++i) {
      const Rational& y = x[y0 + i];
      if (y != 0 && y != 1) return free_rows[i];
    }
    // Integral: bound < incumbent here, and bound is an integer.
    incumbent_ = static_cast<std::size_t>(bound.get_num().get_ui());
    result_.dtheta.assign(n, 0);
    for (std::size_t c = 0; c < n; ++c) result_.dtheta[c] = x[c] - x[n + c];
    return std::nullopt;
  }

  void log(NodeRecord& rec) {
    if (opt_.trace) {
      auto& os = *opt_.trace;
      os << "depth=" << rec.depth << " fixed=";
      if (rec.fixings.empty()) os << '-';
      for (std::size_t i = 0; i < rec.fixings.size(); ++i)
        os << (i ? "," : "") << 'y' << rec.fixings[i].first + 1 << ':' << rec.fixings[i].second;
      os << " bound=" << (rec.bound ? to_string(*rec.bound) : std::string("infeasible"))
         << " pruned=" << (rec.pruned ? 1 : 0) << '\n';
    }
    if (opt_.record_tree) result_.tree.push_back(std::move(rec));
  }

  const MilpInstance& inst_;
  const MilpOptions& opt_;
  std::vector<std::size_t> unprotected_;
  std::optional<std::size_t> incumbent_;
  MilpResult result_;
};

}  // namespace

Rational big_m(const Network& net) {
  const IntMatrix b = incidence(net).truncated;
  std::int64_t best = 0;
  for (std::size_t c = 0; c < b.cols(); ++c) {
    std::int64_t sum = 0;
    for (std::size_t r = 0; r < b.rows(); ++r) sum += b(r, c) < 0 ? -b(r, c) : b(r, c);
    best = std::max(best, sum);
  }
  return Rational(static_cast<long>(best));
}

MilpResult milp_min_support(const MilpInstance& instance, const MilpOptions& options) {
  return BranchAndBound(instance, options).run();
}

SecurityIndexResult milp_solve(const Network& net, const MeasurementSystem& meas, std::size_t k,
                               const MilpOptions& options) {
  const auto start = std::chrono::steady_clock::now();
  const TUProblem p = reduce_to_tu(net, meas, k);
  MilpInstance inst{p.matrix, p.target, p.protected_rows, big_m(net)};
  const MilpResult res = milp_min_support(inst, options);
  if (!res.value) throw Infeasible("meter " + std::to_string(k + 1) + " admits no unobservable attack");

  const Rational& scale = net.lines[meas.flow_meters[k]].reactance;
  Eigen::VectorXd dtheta(static_cast<Eigen::Index>(res.dtheta.size()));
  for (std::size_t i = 0; i < res.dtheta.size(); ++i)
    dtheta(static_cast<Eigen::Index>(i)) = Rational(res.dtheta[i] * scale).get_d();

  SecurityIndexResult r;
  r.meter = k;
  r.index = *res.value;
  r.support = res.support;
  r.method = Method::milp;
  r.attack = craft_attack(build_H(net, meas).h, dtheta);
  r.solve_seconds = std::chrono::duration<double>(std::chrono::steady_clock::now() - start).count();
  return r;
}

}  // namespace gridsec
