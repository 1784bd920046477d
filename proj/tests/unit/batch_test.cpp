#include <filesystem>
#include <fstream>

#include <gtest/gtest.h>

#include "gridsec/batch.hpp"
#include "gridsec/error.hpp"
#include "instances.hpp"

namespace gridsec {
namespace {

using testing::data_path;

TEST(RunBatch, SixBusL1AndExhaustive) {
  BatchOptions opt;
  opt.methods = {Method::l1, Method::exhaustive};
  opt.jobs = 3;
  const BatchReport r = run_batch(data_path("six_bus.case"), opt);
  EXPECT_EQ(r.case_name, "six_bus");
  ASSERT_EQ(r.results.size(), 14u);
  EXPECT_TRUE(r.mismatches.empty());
  EXPECT_EQ(r.results[10].meter, 5u);
  EXPECT_EQ(r.results[10].index, 3u);
  EXPECT_EQ(r.sorted_indices(Method::l1).size(), 7u);
}

TEST(RunBatch, Ieee14L1AndMilp) {
  BatchOptions opt;
  opt.methods = {Method::l1, Method::milp};
  const BatchReport r = run_batch(data_path("ieee14.case"), opt);
  EXPECT_EQ(r.results.size(), 40u);
  EXPECT_TRUE(r.mismatches.empty());
  EXPECT_EQ(r.totals.size(), 2u);
  EXPECT_LE(r.sorted_indices(Method::milp).front(), 2u);
}

TEST(RunBatch, ResultsIndependentOfParallelism) {
  BatchOptions opt;
  opt.methods = {Method::l1, Method::milp, Method::exhaustive};
  opt.jobs = 1;
  const BatchReport serial = run_batch(data_path("ieee14.case"), opt);
  opt.jobs = 8;
  const BatchReport parallel = run_batch(data_path("ieee14.case"), opt);
  ASSERT_EQ(serial.results.size(), parallel.results.size());
  for (std::size_t i = 0; i < serial.results.size(); ++i) {
    EXPECT_EQ(serial.results[i].meter, parallel.results[i].meter);
    EXPECT_EQ(serial.results[i].index, parallel.results[i].index);
    EXPECT_EQ(serial.results[i].method, parallel.results[i].method);
  }
}

TEST(RunBatch, ProtectedMetersAreSkipped) {
  const BatchReport r = run_batch(data_path("protected6.case"), {});
  ASSERT_EQ(r.results.size(), 5u);
  for (const auto& m : r.results) EXPECT_TRUE(m.meter != 0 && m.meter != 3);
}

TEST(RunBatch, InfeasibleMetersAreRecorded) {
  const Case c = parse_case_text(
      "buses 3\nline 1 2 1\nline 2 3 1\nline 1 3 1\n"
      "meter flow 1\nmeter flow 2\nmeter flow 3\nprotect 1\nprotect 2\n", "blocked");
  BatchOptions opt;
  opt.methods = {Method::l1, Method::milp, Method::exhaustive};
  const BatchReport r = run_batch(c, opt);
  ASSERT_EQ(r.results.size(), 3u);
  for (const auto& m : r.results) EXPECT_FALSE(m.index);
  EXPECT_TRUE(r.mismatches.empty());
  EXPECT_NE(to_csv(r).find("3,infeasible,l1,"), std::string::npos);
}

TEST(RunBatch, Unavailable) {
  Case empty = parse_case(data_path("two_bus.case"));
  empty.meters.flow_meters.clear();
  EXPECT_THROW(run_batch(empty, {}), MethodUnavailable);
  EXPECT_THROW(run_batch(data_path("injection3.case"), {}), MethodUnavailable);

  Case big;
  big.name = "ladder";
  big.network.bus_count = 16;
  for (std::size_t i = 0; i + 1 < 16; ++i) big.network.lines.push_back({i, i + 1, 1});
  for (std::size_t i = 0; i + 2 < 16; ++i) big.network.lines.push_back({i, i + 2, 1});
  big.meters = default_metering(big.network);
  ASSERT_GT(big.meters.meter_count(), kExhaustiveMaxRows);
  BatchOptions opt;
  opt.methods = {Method::exhaustive};
  EXPECT_THROW(run_batch(big, opt), MethodUnavailable);
  EXPECT_THROW(run_batch(data_path("malformed.case"), {}), ParseError);
  opt.methods = {};
  EXPECT_THROW(run_batch(parse_case(data_path("two_bus.case")), opt), InvalidArgument);
}

TEST(RunBatch, SelectedMeters) {
  BatchOptions opt;
  opt.meters = {13};
  const BatchReport r = run_batch(data_path("ieee14.case"), opt);
  ASSERT_EQ(r.results.size(), 1u);
  EXPECT_EQ(r.results[0].index, 1u);
  opt.meters = {20};
  EXPECT_THROW(run_batch(data_path("ieee14.case"), opt), UnknownMeterId);
}

BatchReport sample_report() {
  BatchReport r;
  r.case_name = "sample";
  r.results = {{0, 2, Method::l1, 0.125}, {0, 2, Method::milp, 1.0 / 3.0}, {1, std::nullopt, Method::l1, 0.0},
               {1, std::nullopt, Method::milp, 2e-7}};
  r.totals = {{Method::l1, 0.125}, {Method::milp, 1.0 / 3.0 + 2e-7}};
  r.mismatches = {{4, {{Method::l1, 1}, {Method::milp, std::nullopt}}}};
  return r;
}

TEST(Emit, CsvHeaderAndRows) {
  const std::string csv = to_csv(sample_report());
  EXPECT_EQ(csv.substr(0, csv.find('\n')), "meter,index,method,seconds");
  EXPECT_NE(csv.find("\n1,2,milp,0.333333\n"), std::string::npos);
  EXPECT_NE(csv.find("\n2,infeasible,l1,0.000000\n"), std::string::npos);
}

TEST(Emit, SortedTableIsNondecreasing) {
  BatchOptions opt;
  opt.methods = {Method::l1, Method::milp};
  const BatchReport r = run_batch(data_path("ieee14.case"), opt);
  const std::string table = sorted_csv(r);
  EXPECT_EQ(table.substr(0, table.find('\n')), "method,position,index");
  for (auto m : opt.methods) {
    const auto idx = r.sorted_indices(m);
    EXPECT_TRUE(std::is_sorted(idx.begin(), idx.end()));
    EXPECT_EQ(idx.size(), 20u);
  }
}

TEST(Emit, JsonRoundTrip) {
  const BatchReport r = sample_report();
  EXPECT_EQ(report_from_json(to_json(r)), r);
  const auto path = std::filesystem::temp_directory_path() / "gridsec_report_test.json";
  emit(r, ReportFormat::json, path);
  EXPECT_EQ(load_report(path), r);
  std::filesystem::remove(path);
}

TEST(Emit, CsvIsDeterministicApartFromTimings) {
  BatchOptions opt;
  opt.methods = {Method::l1, Method::milp};
  auto strip = [](const BatchReport& r) {
    std::string out;
    for (const auto& m : r.results)
      out += std::to_string(m.meter) + ':' + (m.index ? std::to_string(*m.index) : "-") + ';';
    return out;
  };
  EXPECT_EQ(strip(run_batch(data_path("ieee14.case"), opt)), strip(run_batch(data_path("ieee14.case"), opt)));
}

TEST(Emit, Errors) {
  EXPECT_THROW(emit(sample_report(), ReportFormat::csv, "/nonexistent-dir/x.csv"), IoError);
  EXPECT_THROW(report_from_json("{\"case\": 1"), ParseError);
  EXPECT_THROW(report_from_json("{\"case\": \"x\"}"), ParseError);
  EXPECT_THROW(report_from_json(R"({"case":"x","results":[{"meter":1,"index":1,"method":"lp","seconds":0}],
                                   "totals":[],"mismatches":[]})"),
               ParseError);
  EXPECT_THROW(load_report("/nonexistent-dir/x.json"), IoError);
  EXPECT_EQ(parse_format("csv"), ReportFormat::csv);
  EXPECT_THROW(parse_format("xml"), InvalidArgument);
}

}  // namespace
}  // namespace gridsec
