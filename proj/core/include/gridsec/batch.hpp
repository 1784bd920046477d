#pragma once

#include <cstddef>
#include <filesystem>
#include <optional>
#include <string>
#include <string_view>
#include <utility>
#include <vector>

#include "gridsec/grid.hpp"
#include "gridsec/security_index.hpp"

namespace gridsec {

struct MeterResult {
  /// 0-based meter index (reports print it 1-based).
  std::size_t meter = 0;
  /// nullopt when no unobservable attack reaches the meter.
  std::optional<std::size_t> index;
  Method method = Method::l1;
  double seconds = 0.0;

  friend bool operator==(const MeterResult&, const MeterResult&) = default;
};

struct Mismatch {
  std::size_t meter = 0;
  std::vector<std::pair<Method, std::optional<std::size_t>>> values;

  friend bool operator==(const Mismatch&, const Mismatch&) = default;
};

struct BatchReport {
  std::string case_name;
  /// Ordered by meter, then by method in request order.
  std::vector<MeterResult> results;
  /// Sum of per-meter solve times for each method, in request order.
  std::vector<std::pair<Method, double>> totals;
  std::vector<Mismatch> mismatches;

  /// Feasible indices of one method, nondecreasing.
  std::vector<std::size_t> sorted_indices(Method m) const;

  friend bool operator==(const BatchReport&, const BatchReport&) = default;
};

struct BatchOptions {
  std::vector<Method> methods{Method::l1};
  /// Meters to evaluate (0-based); empty means every unprotected flow meter.
  std::vector<std::size_t> meters;
  /// Worker threads; 0 means hardware concurrency.
  std::size_t jobs = 0;
};

/// Largest |Ī| the exhaustive method accepts.
inline constexpr std::size_t kExhaustiveMaxRows = 25;

/// Runs every requested method on every eligible meter in a worker pool and
/// cross-checks the indices. Throws MethodUnavailable for an empty meter set,
/// injection meters, or exhaustive search beyond kExhaustiveMaxRows.
BatchReport run_batch(const Case& c, const BatchOptions& options);
BatchReport run_batch(const std::filesystem::path& case_path, const BatchOptions& options);

enum class ReportFormat { json, csv };
ReportFormat parse_format(std::string_view text);

/// CSV: header `meter,index,method,seconds`, one row per result.
std::string to_csv(const BatchReport& report);
std::string to_json(const BatchReport& report);
/// Throws IoError if the file cannot be written.
void emit(const BatchReport& report, ReportFormat format, const std::filesystem::path& path);

/// Plot-ready sorted table: `method,position,index`, indices nondecreasing per method.
std::string sorted_csv(const BatchReport& report);

/// Inverse of to_json. Throws ParseError on malformed input.
BatchReport report_from_json(std::string_view text);
BatchReport load_report(const std::filesystem::path& path);

}  // namespace gridsec
