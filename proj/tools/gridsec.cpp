// gridsec: security indices for DC state estimation.
//
//   gridsec solve --case ieee14.case --method all --format csv --out report.csv
//   gridsec verify-tu --case ieee14.case --max-order 4
//   gridsec attack --case six_bus.case --k 6 --out attack.json
//   gridsec bench --case ieee14.case

#include <algorithm>
#include <cstdio>
#include <fstream>
#include <iostream>
#include <string>

#include <CLI11.hpp>
#include <json.hpp>

#include "gridsec/batch.hpp"
#include "gridsec/error.hpp"
#include "gridsec/grid.hpp"
#include "gridsec/oracle.hpp"
#include "gridsec/security_index.hpp"
#include "gridsec/tumin.hpp"

namespace {

enum Exit : int { kOk = 0, kUsage = 1, kInput = 2, kInfeasible = 3, kMismatch = 4 };

using namespace gridsec;

std::size_t meter_id(const Case& c, const std::string& text) {
  std::size_t pos = 0;
  unsigned long id = 0;
  try {
    id = std::stoul(text, &pos);
  } catch (const std::exception&) {
    pos = 0;
  }
  if (pos != text.size() || id == 0 || id > c.meters.meter_count())
    throw InvalidArgument("meter id '" + text + "' is not in 1.." + std::to_string(c.meters.meter_count()));
  return id - 1;
}

void write_text(const std::string& path, const std::string& text) {
  if (path.empty() || path == "-") {
    std::cout << text;
    return;
  }
  std::ofstream out(path, std::ios::binary);
  if (!out || !(out << text).flush()) throw IoError("cannot write " + path);
}

struct SolveArgs {
  std::string case_path;
  std::string method = "l1";
  std::string k = "all";
  std::string out;
  std::string format = "csv";
  std::string sorted;
  std::size_t jobs = 0;
};

int run_solve(const SolveArgs& a) {
  const Case c = parse_case(a.case_path);
  BatchOptions opt;
  opt.jobs = a.jobs;
  if (a.method == "all")
    opt.methods = {Method::l1, Method::milp, Method::exhaustive};
  else
    opt.methods = {parse_method(a.method)};
  if (a.k != "all") opt.meters = {meter_id(c, a.k)};
  const ReportFormat format = parse_format(a.format);

  const BatchReport report = run_batch(c, opt);
  write_text(a.out, format == ReportFormat::json ? to_json(report) : to_csv(report));
  if (!a.sorted.empty()) write_text(a.sorted, sorted_csv(report));

  if (!report.mismatches.empty()) {
    for (const auto& mm : report.mismatches) {
      std::cerr << "mismatch at meter " << mm.meter + 1 << ":";
      for (const auto& [m, idx] : mm.values)
        std::cerr << ' ' << to_string(m) << '=' << (idx ? std::to_string(*idx) : "infeasible");
      std::cerr << '\n';
    }
    return kMismatch;
  }
  // A single requested meter that cannot be attacked is reported as infeasible.
  if (opt.meters.size() == 1 && !report.results.front().index) return kInfeasible;
  return kOk;
}

int run_verify_tu(const std::string& case_path, std::size_t max_order) {
  const Case c = parse_case(case_path);
  validate(c.network, c.meters);
  MeasurementSystem flows = c.meters;
  flows.injection_meters.clear();
  flows.protected_meters.clear();
  flows.weights.clear();
  if (flows.flow_meters.empty()) throw MethodUnavailable("no flow meters");
  const IntMatrix a = reduce_to_tu(c.network, flows, 0).matrix;
  // Orders beyond the smaller dimension have no minors; clamp rather than reject.
  const std::size_t order = std::min({max_order, a.rows(), a.cols()});
  const bool tu = verify_tu(a, order);
  std::cout << c.name << ": " << a.rows() << "x" << a.cols() << " flow matrix, minors up to order "
            << order << ": " << (tu ? "totally unimodular" : "NOT totally unimodular") << '\n';
  return tu ? kOk : kMismatch;
}

int run_attack(const std::string& case_path, const std::string& k, const std::string& out) {
  const Case c = parse_case(case_path);
  const std::size_t meter = meter_id(c, k);
  const SecurityIndexResult r = security_index(c.network, c.meters, meter);

  nlohmann::json j;
  j["case"] = c.name;
  j["meter"] = meter + 1;
  j["index"] = *r.index;
  std::vector<std::size_t> support;
  for (auto s : r.support) support.push_back(s + 1);
  j["support"] = support;
  j["dtheta"] = std::vector<double>(r.attack.dtheta.begin(), r.attack.dtheta.end());
  j["dz"] = std::vector<double>(r.attack.dz.begin(), r.attack.dz.end());
  write_text(out, j.dump(2) + '\n');
  return kOk;
}

int run_bench(const std::string& case_path, std::size_t jobs) {
  const Case c = parse_case(case_path);
  BatchOptions opt;
  opt.methods = {Method::l1, Method::milp};
  opt.jobs = jobs;
  const BatchReport report = run_batch(c, opt);
  std::printf("%-8s %8s %12s %12s\n", "method", "meters", "total_s", "mean_ms");
  for (const auto& [m, total] : report.totals) {
    const auto n = report.sorted_indices(m).size();
    std::printf("%-8s %8zu %12.6f %12.3f\n", std::string(to_string(m)).c_str(), n, total,
                n ? 1e3 * total / static_cast<double>(n) : 0.0);
  }
  std::printf("mismatches: %zu\n", report.mismatches.size());
  return report.mismatches.empty() ? kOk : kMismatch;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"Security indices of DC state-estimation measurement systems"};
  app.require_subcommand(1);

  SolveArgs solve;
  auto* cmd_solve = app.add_subcommand("solve", "Compute security indices for a case");
  cmd_solve->add_option("--case", solve.case_path, "Case file")->required()->check(CLI::ExistingFile);
  cmd_solve->add_option("--method", solve.method, "l1 | milp | exhaustive | all")
      ->check(CLI::IsMember({"l1", "milp", "exhaustive", "all"}));
  cmd_solve->add_option("--k", solve.k, "1-based meter id or 'all'");
  cmd_solve->add_option("--out", solve.out, "Report path (default: stdout)");
  cmd_solve->add_option("--format", solve.format, "json | csv")->check(CLI::IsMember({"json", "csv"}));
  cmd_solve->add_option("--sorted", solve.sorted, "Also write the sorted index table (CSV)");
  cmd_solve->add_option("--jobs", solve.jobs, "Worker threads (default: all cores)");

  std::string case_path;
  std::size_t max_order = 3;
  auto* cmd_tu = app.add_subcommand("verify-tu", "Brute-force total unimodularity check of the flow matrix");
  cmd_tu->add_option("--case", case_path, "Case file")->required()->check(CLI::ExistingFile);
  cmd_tu->add_option("--max-order", max_order, "Largest minor order to check")->check(CLI::PositiveNumber);

  std::string k;
  std::string out;
  auto* cmd_attack = app.add_subcommand("attack", "Construct a minimum unobservable attack on one meter");
  cmd_attack->add_option("--case", case_path, "Case file")->required()->check(CLI::ExistingFile);
  cmd_attack->add_option("--k", k, "1-based meter id")->required();
  cmd_attack->add_option("--out", out, "Output JSON (default: stdout)");

  std::size_t jobs = 0;
  auto* cmd_bench = app.add_subcommand("bench", "Time the l1 and MILP approaches on every meter");
  cmd_bench->add_option("--case", case_path, "Case file")->required()->check(CLI::ExistingFile);
  cmd_bench->add_option("--jobs", jobs, "Worker threads (default: all cores)");

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    const int code = app.exit(e);
    return code == 0 ? kOk : kUsage;
  }

  try {
    if (*cmd_solve) return run_solve(solve);
    if (*cmd_tu) return run_verify_tu(case_path, max_order);
    if (*cmd_attack) return run_attack(case_path, k, out);
    if (*cmd_bench) return run_bench(case_path, jobs);
  } catch (const ParseError& e) {
    std::cerr << "gridsec: parse error: " << e.what() << '\n';
    return kInput;
  } catch (const ValidationError& e) {
    std::cerr << "gridsec: invalid case: " << e.what() << '\n';
    return kInput;
  } catch (const IoError& e) {
    std::cerr << "gridsec: " << e.what() << '\n';
    return kInput;
  } catch (const Infeasible& e) {
    std::cerr << "gridsec: infeasible: " << e.what() << '\n';
    return kInfeasible;
  } catch (const MethodMismatch& e) {
    std::cerr << "gridsec: " << e.what() << '\n';
    return kMismatch;
  } catch (const InternalError& e) {
    std::cerr << "gridsec: internal error: " << e.what() << '\n';
    return kMismatch;
  } catch (const Error& e) {
    std::cerr << "gridsec: " << e.what() << '\n';
    return kUsage;
  }
  return kUsage;
}
