#pragma once

#include <array>
#include <cstdint>
#include <functional>
#include <vector>

#include "windtree/iet.hpp"
#include "windtree/klein.hpp"

namespace windtree {

struct LyapunovConfig {
  std::uint64_t steps = 1'000'000;  // accelerated (Zorich) steps per run
  int reorth_every = 10;
  double overflow_guard = 1e100;
  double growth_guard = 1e3;  // reorthonormalize early once a frame entry exceeds this
  double degenerate_tol = 1e-30;
  std::uint64_t seed = 1;  // initial frame
  InductionOptions induction;
};

struct LyapunovEstimate {
  Character character;
  std::vector<double> exponents;  // descending
  std::uint64_t step_count = 0;
  double time = 0;                 // accumulated Teichmuller time
  double half_window_delta = 0;    // max |estimate at half the run - final estimate|
  std::uint64_t seed = 0;
};

/// Growth rates of k frame vectors under v -> M^T v for a stream of integer
/// matrices, with Gram-Schmidt every `reorth_every` matrices.
class LyapunovAccumulator {
 public:
  LyapunovAccumulator(int dim, int k, const LyapunovConfig& cfg);

  /// Applies the transpose of m to the frame and adds dt to the clock.
  void apply(const IntMatrix& m, double dt);
  /// Current estimates (descending). Throws InsufficientData when no time has
  /// elapsed, Degenerate when the frame collapses.
  std::vector<double> exponents();
  double time() const { return time_; }
  std::uint64_t count() const { return count_; }

 private:
  void orthonormalize();

  int dim_, k_;
  LyapunovConfig cfg_;
  std::vector<std::vector<double>> frame_;
  std::vector<double> log_stretch_;
  std::vector<double> scratch_;
  double time_ = 0;
  std::uint64_t count_ = 0;
  int since_reorth_ = 0;
};

/// Exponents of a finite stream of matrices with their time increments.
LyapunovEstimate lyapunov_estimate(const std::vector<IntMatrix>& records, const std::vector<double>& times, int k,
                                   const LyapunovConfig& cfg);

/// Runs Zorich induction from `iet` for cfg.steps accelerated steps and
/// estimates the full spectrum of every twisted cocycle.
std::array<LyapunovEstimate, 4> twisted_spectrum(const LabeledIET& iet, const LyapunovConfig& cfg);

struct SpectrumSummary {
  std::vector<double> angles;                          // angles actually used
  std::vector<std::array<LyapunovEstimate, 4>> runs;   // per angle
  std::array<double, 4> second_or_top{};  // median of nu^{++} (second exponent) and top of the others
  double trivial_top = 0;                 // median top exponent of the trivial character
  double sum_pp_mm = 0;                   // positive exponents of E^{++} + E^{--}
  double sum_pp_pm = 0;                   // positive exponents of E^{++} + E^{+-}
  double sum_pp_mp = 0;                   // positive exponents of E^{++} + E^{-+}
  std::uint64_t resampled = 0;
};

/// Median of a non-empty list.
double median(std::vector<double> v);

/// For each angle index, draws angles from `sampler(index, retry)` until the
/// first-return IET and the induction succeed (SaddleConnection / TieBreak
/// trigger a retry), then aggregates per-character medians. Angle indices are
/// distributed over `threads` workers; results do not depend on the count.
/// Throws RetryExhausted when an index runs out of retries.
SpectrumSummary character_spectrum(const PolygonalSurface& surface, int angle_count,
                                   const std::function<double(int, int)>& sampler, const LyapunovConfig& cfg,
                                   int max_retries = 20, int threads = 1);

}  // namespace windtree
