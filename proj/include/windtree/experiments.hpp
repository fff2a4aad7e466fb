#pragma once

#include <cstdint>
#include <optional>
#include <span>
#include <string>
#include <vector>

#include "windtree/lyapunov.hpp"
#include "windtree/tracker.hpp"
#include "windtree/veech.hpp"

namespace windtree {

inline constexpr const char* kVersion = "0.1.0";

struct VeechTriple {
  Rational x;
  Rational y;
  std::int64_t D = 2;
};

struct ExperimentConfig {
  double a = 0.5;
  double b = 0.5;
  std::optional<VeechTriple> veech;  // overrides a, b when set
  int angle_count = 64;
  double t_min = 1;
  double t_max = 1e7;
  double schedule_ratio = 1.189207115002721;  // 2^(1/4)
  std::uint64_t seed = 1;
  double fit_window_fraction = 0.5;
  std::optional<double> theta;  // forced direction for every angle slot
  int max_retries = 8;          // resamples per angle slot after a corner hit
  int threads = 1;
  std::string output;  // directory for report files; empty writes nothing

  std::uint64_t lyapunov_steps = 1'000'000;
  int consistency_cases = 100;
  std::uint64_t consistency_events = 100'000;
  bool mutate_sheet_toggles = false;  // fault injection for the consistency suite

  TableParams table() const;
  /// t_min * ratio^k up to t_max (t_max itself is always the last point).
  std::vector<double> schedule() const;
  /// Throws InvalidArgument on an unusable configuration.
  void validate() const;
  /// Canonical JSON echo, used for the manifest and the config hash.
  std::string to_json() const;
  std::uint64_t hash() const;
};

/// Uniform angle in (0, pi/2) for a slot, drawn from (seed, index, retry)
/// alone. Angles whose tangent lies within 1e-9 of p/q with q <= 1000 are
/// redrawn.
double sample_angle(std::uint64_t seed, int index, int retry);

struct FitResult {
  double slope = 0;
  double std_error = 0;
  int points = 0;
};

/// Least-squares slope of log d against log T over the last `fraction` of the
/// points. Throws InsufficientData with fewer than 5 points in the window or a
/// non-positive d.
FitResult fit_exponent(std::span<const double> T, std::span<const double> d, double fraction);

struct Quartiles {
  double q1 = 0, median = 0, q3 = 0;
  double iqr() const { return q3 - q1; }
};
/// Linear-interpolation quartiles. Throws InsufficientData on an empty list.
Quartiles quartiles(std::vector<double> v);

struct SeriesPoint {
  double t = 0;
  double value = 0;
  double running_max = 0;
};

struct AngleResult {
  int index = 0;
  double theta = 0;
  FitResult fit;
  std::uint64_t events = 0;
  int aborted = 0;  // corner hits before this slot produced a full run
  bool ok = false;  // false when the slot ran out of retries
  std::vector<SeriesPoint> series;
};

struct DiffusionReport {
  ExperimentConfig config;
  std::vector<AngleResult> angles;  // by angle index
  Quartiles exponent;               // over slots with ok == true
  int aborted_slots = 0;
  int corner_hits = 0;
};

/// Displacement exponent per sampled direction, started at (0.5, 0).
/// Throws RetryExhausted if more than half of the slots run out of retries.
DiffusionReport run_diffusion(const ExperimentConfig& cfg);

/// Integer classes whose pairing with the trajectory is tracked. "f" is the
/// Euclidean norm of the wind-tree level (f1, f2).
struct DeviationClass {
  std::string name;
  HomologyClass cls;
  bool level_norm = false;
};
std::vector<DeviationClass> default_deviation_classes();

struct DeviationAngle {
  int index = 0;
  double theta = 0;
  std::vector<FitResult> fits;  // one per class
  std::uint64_t walls = 0;
  int aborted = 0;
  bool ok = false;
};

struct DeviationReport {
  ExperimentConfig config;
  std::vector<DeviationClass> classes;
  std::vector<DeviationAngle> angles;
  std::vector<Quartiles> exponent;  // per class
  int aborted_slots = 0;
  int corner_hits = 0;

  const Quartiles& of(const std::string& name) const;
};

DeviationReport run_deviation_spectrum(const ExperimentConfig& cfg,
                                       const std::vector<DeviationClass>& classes = default_deviation_classes());

struct LyapunovReport {
  ExperimentConfig config;
  SpectrumSummary summary;
};

/// Character spectrum of L(a, b) over angle_count sampled directions with
/// lyapunov_steps Zorich steps each.
LyapunovReport run_lyapunov(const ExperimentConfig& cfg);

struct CheckResult {
  std::string name;
  bool passed = false;
  std::string detail;
};

struct ConsistencyReport {
  ExperimentConfig config;
  std::vector<CheckResult> checks;
  bool passed() const;
};

/// Displacement bound over random (a, b, theta), the ray-marching differential
/// test, time reversal and the surface invariants of the configured table.
ConsistencyReport run_consistency(const ExperimentConfig& cfg);

/// Largest |level - displacement| over `events` reflections, or a negative
/// value when the trajectory meets a corner.
double displacement_gap(const TableParams& table, const ParticleState& start, std::uint64_t events,
                        const TrackerOptions& opts = {});

// Text renderings. All are byte-deterministic for a fixed config.
std::string report_csv(const DiffusionReport& r);
std::string report_csv(const DeviationReport& r);
std::string report_csv(const LyapunovReport& r);
std::string report_csv(const ConsistencyReport& r);
std::string series_csv(const AngleResult& a);

/// Writes report.csv, manifest.json and (for diffusion) series_<k>.csv into
/// cfg.output. Does nothing when cfg.output is empty. Throws IoError.
void write_outputs(const DiffusionReport& r, double wall_seconds);
void write_outputs(const DeviationReport& r, double wall_seconds);
void write_outputs(const LyapunovReport& r, double wall_seconds);
void write_outputs(const ConsistencyReport& r, double wall_seconds);

}  // namespace windtree
