#pragma once

#include <cstdint>
#include <optional>
#include <string>
#include <vector>

#include "lrdsc/codec.hpp"
#include "lrdsc/metrics.hpp"
#include "lrdsc/sources.hpp"
#include "lrdsc/theory.hpp"

namespace lrdsc {

struct FamilySpec {
  LatticeKind kind = LatticeKind::IntegerGrid;
  int n = 1;
  double base_scale = 1.0;
  std::optional<Mat> generator_rows;  // generic families
};

struct R0Rule {
  enum class Type { Fixed, FractionOfRc };
  // FractionOfRc keeps the structural condition satisfied by construction:
  // r0 = min(r_in - 2 rbar_c, value * r_c).
  Type type = Type::FractionOfRc;
  double value = 0.5;
};

struct ExperimentConfig {
  FamilySpec family;
  std::int64_t k_index = 4;
  std::vector<int> mu_ladder;
  std::vector<double> theta_ladder;
  enum class Pairing { Zip, Grid } pairing = Pairing::Zip;
  R0Rule r0_rule;
  std::optional<double> c_constant;
  SourceModel source;
  std::uint64_t samples = 100'000;
  std::vector<std::uint64_t> samples_ladder;  // optional per-point override (zip only)
  std::uint64_t seed = 1;
  bool unsafe_small_mu = false;
  std::string out_path;
  enum class Format { Csv, Json } format = Format::Csv;

  void check() const;
  std::size_t point_count() const;
};

ExperimentConfig load_config(const std::string& path);
ExperimentConfig parse_config_text(const std::string& text);

/// Builds the nested triple for one ladder point. Throws ValidationError
/// with margin diagnostics when a condition fails.
LrdscCodec build_point_codec(const ExperimentConfig& cfg, double theta, int mu);
double resolve_r0(const R0Rule& rule, const Lattice& central, const Lattice& intermediate);

struct PointOutcome {
  double theta = 0.0;
  int mu = 0;
  std::int64_t k_index = 0;
  double r0 = 0.0;
  int n = 0;
  std::uint64_t samples = 0;
  std::uint64_t seed = 0;
  std::string status;  // "ok", "ok-unsafe", or "skipped: <reason>"
  RdReport report;
  Prediction pred;
  TailEstimate tail;
  std::uint64_t branch_fallback = 0;
  std::uint64_t branch_common = 0;
  std::uint64_t branch_split = 0;
  bool ok() const { return status.rfind("skipped", 0) != 0; }
};

/// Runs one (theta, mu) point: encodes `samples` pairs, decodes, accumulates
/// distortions and count tables, and attaches leading-order predictions.
/// Deterministic given (config seed, stream).
PointOutcome run_point(const ExperimentConfig& cfg, double theta, int mu,
                       std::uint64_t samples, std::uint64_t stream);

/// All ladder points in order; skipped points keep their row with a status.
std::vector<PointOutcome> run_sweep(const ExperimentConfig& cfg);

std::string csv_header();
std::string csv_row(const PointOutcome& p);
std::string json_row(const PointOutcome& p);
void write_outcomes(const std::vector<PointOutcome>& rows, const ExperimentConfig& cfg,
                    const std::string& out_path);

struct CheckResult {
  std::string name;
  bool pass = false;
  std::string detail;
};

/// Property suite over the finest valid ladder point: exact recovery,
/// distance bounds, labeling identities, the nested-sum oracle, and the
/// worst-case reconstruction bound. Failures are findings, not errors.
std::vector<CheckResult> validate_suite(const ExperimentConfig& cfg);

}  // namespace lrdsc
