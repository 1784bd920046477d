#include <algorithm>
#include <atomic>
#include <chrono>
#include <cstdio>
#include <exception>
#include <fstream>
#include <mutex>
#include <sstream>
#include <thread>

#include <json.hpp>

#include "gridsec/batch.hpp"
#include "gridsec/error.hpp"
#include "gridsec/oracle.hpp"

namespace gridsec {
namespace {

using nlohmann::json;

std::optional<std::size_t> solve_one(const Case& c, std::size_t k, Method method) {
  try {
    switch (method) {
      case Method::l1: return security_index(c.network, c.meters, k).index;
      case Method::milp: return milp_solve(c.network, c.meters, k).index;
      case Method::exhaustive: {
        const TUProblem p = reduce_to_tu(c.network, c.meters, k);
        const auto r = exhaustive_min_support(p.matrix, k, p.protected_rows, p.matrix.rows());
        if (r.status == SearchStatus::infeasible) return std::nullopt;
        if (r.status != SearchStatus::optimal) throw InternalError("uncapped search hit its cap");
        return r.value;
      }
    }
  } catch (const Infeasible&) {
    return std::nullopt;
  }
  return std::nullopt;
}

std::string format_seconds(double s) {
  char buf[32];
  std::snprintf(buf, sizeof buf, "%.6f", s);
  return buf;
}

std::string index_text(const std::optional<std::size_t>& index) {
  return index ? std::to_string(*index) : std::string("infeasible");
}

}  // namespace

std::vector<std::size_t> BatchReport::sorted_indices(Method m) const {
  std::vector<std::size_t> out;
  for (const auto& r : results)
    if (r.method == m && r.index) out.push_back(*r.index);
  std::sort(out.begin(), out.end());
  return out;
}

BatchReport run_batch(const Case& c, const BatchOptions& options) {
  if (c.meters.meter_count() == 0) throw MethodUnavailable("no meters");
  if (c.meters.has_injections())
    throw MethodUnavailable("exact methods require a flow-only measurement system");
  if (options.methods.empty()) throw InvalidArgument("no methods requested");
  validate(c.network, c.meters);

  std::vector<std::size_t> meters = options.meters;
  if (meters.empty()) {
    for (std::size_t k = 0; k < c.meters.meter_count(); ++k)
      if (!c.meters.is_protected(k)) meters.push_back(k);
  }
  for (auto k : meters) {
    if (k >= c.meters.meter_count()) throw UnknownMeterId("meter " + std::to_string(k + 1) + " does not exist");
    if (c.meters.is_protected(k)) throw InvalidArgument("meter " + std::to_string(k + 1) + " is protected");
  }
  const std::size_t unprotected = c.meters.meter_count() - c.meters.protected_meters.size();
  if (std::find(options.methods.begin(), options.methods.end(), Method::exhaustive) != options.methods.end() &&
      unprotected > kExhaustiveMaxRows)
    throw MethodUnavailable("exhaustive search is limited to " + std::to_string(kExhaustiveMaxRows) +
                            " unprotected meters");

  BatchReport report;
  report.case_name = c.name;
  const std::size_t per_meter = options.methods.size();
  report.results.resize(meters.size() * per_meter);
  for (std::size_t i = 0; i < meters.size(); ++i)
    for (std::size_t j = 0; j < per_meter; ++j) {
      auto& r = report.results[i * per_meter + j];
      r.meter = meters[i];
      r.method = options.methods[j];
    }

  std::size_t jobs = options.jobs ? options.jobs : std::max(1u, std::thread::hardware_concurrency());
  jobs = std::min(jobs, report.results.size());
  std::atomic<std::size_t> next{0};
  std::exception_ptr failure;
  std::mutex failure_mutex;
  auto worker = [&] {
    for (std::size_t t; (t = next.fetch_add(1)) < report.results.size();) {
      auto& r = report.results[t];
      try {
        const auto start = std::chrono::steady_clock::now();
        r.index = solve_one(c, r.meter, r.method);
        r.seconds = std::chrono::duration<double>(std::chrono::steady_clock::now() - start).count();
      } catch (...) {
        std::lock_guard lock(failure_mutex);
        if (!failure) failure = std::current_exception();
        next = report.results.size();
      }
    }
  };
  {
    std::vector<std::jthread> pool;
    for (std::size_t i = 1; i < jobs; ++i) pool.emplace_back(worker);
    worker();
  }
  if (failure) std::rethrow_exception(failure);

  for (auto m : options.methods) {
    double total = 0.0;
    for (const auto& r : report.results)
      if (r.method == m) total += r.seconds;
    report.totals.emplace_back(m, total);
  }
  for (std::size_t i = 0; i < meters.size(); ++i) {
    const auto first = report.results.begin() + static_cast<std::ptrdiff_t>(i * per_meter);
    const bool agree = std::all_of(first, first + static_cast<std::ptrdiff_t>(per_meter),
                                   [&](const MeterResult& r) { return r.index == first->index; });
    if (agree) continue;
    Mismatch mm{meters[i], {}};
    for (auto it = first; it != first + static_cast<std::ptrdiff_t>(per_meter); ++it)
      mm.values.emplace_back(it->method, it->index);
    report.mismatches.push_back(std::move(mm));
  }
  return report;
}

BatchReport run_batch(const std::filesystem::path& case_path, const BatchOptions& options) {
  return run_batch(parse_case(case_path), options);
}

ReportFormat parse_format(std::string_view text) {
  if (text == "json") return ReportFormat::json;
  if (text == "csv") return ReportFormat::csv;
  throw InvalidArgument("unknown format '" + std::string(text) + "'");
}

std::string to_csv(const BatchReport& report) {
  std::string out = "meter,index,method,seconds\n";
  for (const auto& r : report.results) {
    out += std::to_string(r.meter + 1) + ',' + index_text(r.index) + ',' + std::string(to_string(r.method)) +
           ',' + format_seconds(r.seconds) + '\n';
  }
  return out;
}

std::string to_json(const BatchReport& report) {
  json j;
  j["case"] = report.case_name;
  j["results"] = json::array();
  for (const auto& r : report.results) {
    json e{{"meter", r.meter + 1}, {"method", to_string(r.method)}, {"seconds", r.seconds}};
    e["index"] = r.index ? json(*r.index) : json(nullptr);
    j["results"].push_back(std::move(e));
  }
  j["totals"] = json::array();
  for (const auto& [m, s] : report.totals) j["totals"].push_back({{"method", to_string(m)}, {"seconds", s}});
  j["mismatches"] = json::array();
  for (const auto& mm : report.mismatches) {
    json values = json::array();
    for (const auto& [m, idx] : mm.values)
      values.push_back({{"method", to_string(m)}, {"index", idx ? json(*idx) : json(nullptr)}});
    j["mismatches"].push_back({{"meter", mm.meter + 1}, {"values", std::move(values)}});
  }
  json sorted = json::object();
  for (const auto& [m, s] : report.totals) sorted[std::string(to_string(m))] = report.sorted_indices(m);
  j["sorted"] = std::move(sorted);
  return j.dump(2) + '\n';
}

std::string sorted_csv(const BatchReport& report) {
  std::string out = "method,position,index\n";
  for (const auto& [m, s] : report.totals) {
    const auto idx = report.sorted_indices(m);
    for (std::size_t i = 0; i < idx.size(); ++i)
      out += std::string(to_string(m)) + ',' + std::to_string(i + 1) + ',' + std::to_string(idx[i]) + '\n';
  }
  return out;
}

void emit(const BatchReport& report, ReportFormat format, const std::filesystem::path& path) {
  std::ofstream out(path, std::ios::binary);
  if (!out) throw IoError("cannot open " + path.string() + " for writing");
  out << (format == ReportFormat::json ? to_json(report) : to_csv(report));
  if (!out.flush()) throw IoError("failed writing " + path.string());
}

BatchReport report_from_json(std::string_view text) {
  json j;
  try {
    j = json::parse(text);
  } catch (const json::parse_error& e) {
    const auto upto = text.substr(0, std::min<std::size_t>(e.byte, text.size()));
    throw ParseError(1 + static_cast<std::size_t>(std::count(upto.begin(), upto.end(), '\n')), e.what());
  }
  auto index_of = [](const json& v) -> std::optional<std::size_t> {
    if (v.is_null()) return std::nullopt;
    return v.get<std::size_t>();
  };
  auto meter_of = [](const json& v) {
    const auto id = v.get<std::size_t>();
    if (id == 0) throw ParseError(0, "meter ids are 1-based");
    return id - 1;
  };
  try {
    BatchReport r;
    r.case_name = j.at("case").get<std::string>();
    for (const auto& e : j.at("results"))
      r.results.push_back({meter_of(e.at("meter")), index_of(e.at("index")),
                           parse_method(e.at("method").get<std::string>()), e.at("seconds").get<double>()});
    for (const auto& t : j.at("totals"))
      r.totals.emplace_back(parse_method(t.at("method").get<std::string>()), t.at("seconds").get<double>());
    for (const auto& mm : j.at("mismatches")) {
      Mismatch m{meter_of(mm.at("meter")), {}};
      for (const auto& v : mm.at("values"))
        m.values.emplace_back(parse_method(v.at("method").get<std::string>()), index_of(v.at("index")));
      r.mismatches.push_back(std::move(m));
    }
    return r;
  } catch (const json::exception& e) {
    throw ParseError(0, std::string("malformed report: ") + e.what());
  } catch (const InvalidArgument& e) {
    throw ParseError(0, e.what());
  }
}

BatchReport load_report(const std::filesystem::path& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw IoError("cannot open " + path.string());
  std::ostringstream ss;
  ss << in.rdbuf();
  return report_from_json(ss.str());
}

}  // namespace gridsec
