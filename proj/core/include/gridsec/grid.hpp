#pragma once

#include <cstddef>
#include <filesystem>
#include <string>
#include <string_view>
#include <vector>

#include <Eigen/Dense>

#include "gridsec/matrix.hpp"
#include "gridsec/rational.hpp"

namespace gridsec {

// Buses, lines and meters are 0-based throughout the library. Case files and the
// command line use 1-based ids.

struct Line {
  std::size_t from = 0;
  std::size_t to = 0;
  /// Per-unit reactance, kept exact as written in the case file.
  Rational reactance;
};

/// DC power-flow network. The reference bus angle is fixed at zero, so the state
/// vector has bus_count - 1 entries (all buses except the reference, in order).
struct Network {
  std::size_t bus_count = 0;
  std::vector<Line> lines;
  std::size_t reference_bus = 0;

  std::size_t state_count() const { return bus_count == 0 ? 0 : bus_count - 1; }
  std::size_t line_count() const { return lines.size(); }
  /// State index of `bus`, or npos for the reference bus.
  std::size_t state_of(std::size_t bus) const;

  static constexpr std::size_t npos = static_cast<std::size_t>(-1);
};

/// Throws ValidationError (or DisconnectedGraph) unless ids are in range,
/// reactances are positive, there are no self loops, and the graph is connected.
void validate(const Network& net);

enum class MeterKind { flow, injection };

struct MeterLabel {
  MeterKind kind = MeterKind::flow;
  /// Line index for flow meters, bus index for injection meters.
  std::size_t element = 0;
};

/// Meter selection. Meter indices enumerate flow meters first, then injections.
struct MeasurementSystem {
  std::vector<std::size_t> flow_meters;
  std::vector<std::size_t> injection_meters;
  std::vector<std::size_t> protected_meters;
  /// Diagonal of W; empty means identity.
  std::vector<double> weights;

  std::size_t meter_count() const { return flow_meters.size() + injection_meters.size(); }
  bool has_injections() const { return !injection_meters.empty(); }
  bool is_flow(std::size_t meter) const { return meter < flow_meters.size(); }
  bool is_protected(std::size_t meter) const;
  MeterLabel label(std::size_t meter) const;
  Eigen::VectorXd weight_vector() const;
};

/// Every line flow metered, no injections, nothing protected.
MeasurementSystem default_metering(const Network& net);

/// Throws UnknownMeterId / ValidationError on bad ids, duplicates, or nonpositive weights.
void validate(const Network& net, const MeasurementSystem& meas);

struct Incidence {
  /// (bus_count × lines): +1 at the from-bus, -1 at the to-bus of each line.
  IntMatrix full;
  /// `full` without the reference-bus row.
  IntMatrix truncated;
};

/// Throws DisconnectedGraph if the network is not connected.
Incidence incidence(const Network& net);

struct MeasurementMatrix {
  /// Flow rows P·D·Bᵀ stacked above injection rows Q·B·D·Bᵀ.
  Eigen::MatrixXd h;
  std::vector<MeterLabel> labels;
};

MeasurementMatrix build_H(const Network& net, const MeasurementSystem& meas);
/// Same matrix in exact arithmetic (D = 1/reactance as rationals).
RationalMatrix build_H_exact(const Network& net, const MeasurementSystem& meas);

/// Weighted least squares state estimate (HᵀWH)⁻¹HᵀWz via QR of W^{1/2}H.
/// Throws RankDeficient if H lacks full column rank (or has no rows).
Eigen::VectorXd wls_estimate(const Eigen::MatrixXd& h, const Eigen::VectorXd& weights,
                             const Eigen::VectorXd& z);

struct Residual {
  Eigen::VectorXd values;
  double norm = 0.0;
};

/// Bad-data-detection residual z - H·θ̂.
Residual bdd_residual(const Eigen::MatrixXd& h, const Eigen::VectorXd& weights,
                      const Eigen::VectorXd& z);

/// Entries with magnitude at or below this are treated as zero on per-unit data.
inline constexpr double kZeroTolerance = 1e-9;

struct AttackVector {
  Eigen::VectorXd dtheta;
  Eigen::VectorXd dz;
  /// Meters with |dz| > tolerance, ascending.
  std::vector<std::size_t> touched;
};

AttackVector craft_attack(const Eigen::MatrixXd& h, const Eigen::VectorXd& dtheta,
                          double tolerance = kZeroTolerance);

struct Case {
  std::string name;
  Network network;
  MeasurementSystem meters;
};

/// Case file grammar (UTF-8, one directive per line, '#' starts a comment):
///   buses <N> [ref <id>]
///   line <from> <to> <reactance>
///   meter flow <line-index>
///   meter injection <bus-id>
///   protect <meter-index>
/// Ids are 1-based; line indices follow file order, meter indices follow
/// declaration order with flows first. Without meter lines every line flow is metered.
Case parse_case(const std::filesystem::path& path);
Case parse_case_text(std::string_view text, std::string name = "case");

/// Writes `c` back in case-file syntax.
std::string format_case(const Case& c);

}  // namespace gridsec
