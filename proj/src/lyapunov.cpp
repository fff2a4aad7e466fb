#include "windtree/lyapunov.hpp"

#include <algorithm>
#include <cmath>
#include <random>

#include "parallel.hpp"

namespace windtree {

LyapunovAccumulator::LyapunovAccumulator(int dim, int k, const LyapunovConfig& cfg)
    : dim_(dim), k_(k), cfg_(cfg) {
  if (dim < 1 || k < 1 || k > dim) fail(ErrorCode::InvalidArgument, "frame size must satisfy 1 <= k <= dim");
  if (cfg.reorth_every < 1) fail(ErrorCode::InvalidArgument, "reorth_every must be positive");
  std::mt19937_64 rng(cfg.seed);
  frame_.assign(static_cast<std::size_t>(k), std::vector<double>(static_cast<std::size_t>(dim)));
  for (auto& v : frame_)
    for (auto& x : v) x = 2.0 * static_cast<double>(rng() >> 11) * 0x1.0p-53 - 1.0;
  log_stretch_.assign(static_cast<std::size_t>(k), 0.0);
  scratch_.resize(static_cast<std::size_t>(dim));
  orthonormalize();
  std::fill(log_stretch_.begin(), log_stretch_.end(), 0.0);
}

void LyapunovAccumulator::orthonormalize() {
  for (int i = 0; i < k_; ++i) {
    auto& v = frame_[i];
    for (int j = 0; j < i; ++j) {
      const auto& q = frame_[j];
      double p = 0;
      for (int c = 0; c < dim_; ++c) p += v[c] * q[c];
      for (int c = 0; c < dim_; ++c) v[c] -= p * q[c];
    }
    double r = 0;
    for (double x : v) r += x * x;
    r = std::sqrt(r);
    if (!(r > cfg_.degenerate_tol)) fail(ErrorCode::Degenerate, "Lyapunov frame collapsed");
    for (double& x : v) x /= r;
    log_stretch_[i] += std::log(r);
  }
  since_reorth_ = 0;
}

void LyapunovAccumulator::apply(const IntMatrix& m, double dt) {
  if (m.size() != dim_) fail(ErrorCode::InvalidArgument, "matrix dimension does not match the frame");
  double biggest = 0;
  for (auto& v : frame_) {
    for (int j = 0; j < dim_; ++j) {
      double s = 0;
      for (int i = 0; i < dim_; ++i) s += static_cast<double>(m(i, j)) * v[i];
      scratch_[j] = s;
      biggest = std::max(biggest, std::fabs(s));
    }
    std::copy(scratch_.begin(), scratch_.end(), v.begin());
  }
  time_ += dt;
  ++count_;
  if (++since_reorth_ >= cfg_.reorth_every || biggest > cfg_.overflow_guard ||
      biggest > cfg_.growth_guard) orthonormalize();
}

std::vector<double> LyapunovAccumulator::exponents() {
  if (!(time_ > 0)) fail(ErrorCode::InsufficientData, "no elapsed time for Lyapunov estimate");
  if (since_reorth_ > 0) orthonormalize();
  std::vector<double> e(static_cast<std::size_t>(k_));
  for (int i = 0; i < k_; ++i) e[i] = log_stretch_[i] / time_;
  std::sort(e.begin(), e.end(), std::greater<>());
  return e;
}

namespace {

double max_delta(const std::vector<double>& a, const std::vector<double>& b) {
  double d = 0;
  for (std::size_t i = 0; i < a.size() && i < b.size(); ++i) d = std::max(d, std::fabs(a[i] - b[i]));
  return d;
}

}  // namespace

LyapunovEstimate lyapunov_estimate(const std::vector<IntMatrix>& records, const std::vector<double>& times, int k,
                                   const LyapunovConfig& cfg) {
  if (records.empty()) fail(ErrorCode::InsufficientData, "empty matrix stream");
  if (records.size() != times.size()) fail(ErrorCode::InvalidArgument, "one time increment per matrix required");
  LyapunovAccumulator acc(records.front().size(), k, cfg);
  std::vector<double> half;
  for (std::size_t n = 0; n < records.size(); ++n) {
    acc.apply(records[n], times[n]);
    if (n + 1 == records.size() / 2 && acc.time() > 0) half = acc.exponents();
  }
  LyapunovEstimate est;
  est.exponents = acc.exponents();
  est.step_count = records.size();
  est.time = acc.time();
  est.half_window_delta = half.empty() ? 0.0 : max_delta(half, est.exponents);
  est.seed = cfg.seed;
  return est;
}

std::array<LyapunovEstimate, 4> twisted_spectrum(const LabeledIET& iet, const LyapunovConfig& cfg) {
  if (cfg.steps == 0) fail(ErrorCode::InsufficientData, "zero induction steps requested");
  iet.validate();
  LabeledIET cur = iet;
  const double total = cur.total();
  for (double& l : cur.lengths) l /= total;
  const int d = cur.size();
  std::vector<LyapunovAccumulator> acc;
  for (int c = 0; c < 4; ++c) acc.emplace_back(d, d, cfg);
  std::array<std::vector<double>, 4> half;
  RauzyStepRecord rec;
  for (std::uint64_t n = 0; n < cfg.steps; ++n) {
    zorich_step_inplace(cur, rec, cfg.induction);
    for (int c = 0; c < 4; ++c) acc[c].apply(rec.twisted[c], rec.time);
    if (n + 1 == cfg.steps / 2)
      for (int c = 0; c < 4; ++c) half[c] = acc[c].exponents();
  }
  std::array<LyapunovEstimate, 4> out;
  for (const auto chi : all_characters()) {
    auto& e = out[chi.index()];
    e.character = chi;
    e.exponents = acc[chi.index()].exponents();
    e.step_count = cfg.steps;
    e.time = acc[chi.index()].time();
    e.half_window_delta = half[chi.index()].empty() ? 0.0 : max_delta(half[chi.index()], e.exponents);
    e.seed = cfg.seed;
  }
  return out;
}

double median(std::vector<double> v) {
  if (v.empty()) fail(ErrorCode::InsufficientData, "median of an empty list");
  std::sort(v.begin(), v.end());
  const std::size_t n = v.size();
  return n % 2 ? v[n / 2] : 0.5 * (v[n / 2 - 1] + v[n / 2]);
}

SpectrumSummary character_spectrum(const PolygonalSurface& surface, int angle_count,
                                   const std::function<double(int, int)>& sampler, const LyapunovConfig& cfg,
                                   int max_retries, int threads) {
  if (angle_count < 1) fail(ErrorCode::InsufficientData, "at least one angle is required");
  SpectrumSummary out;
  out.angles.resize(static_cast<std::size_t>(angle_count));
  out.runs.resize(static_cast<std::size_t>(angle_count));
  std::vector<std::uint64_t> retries(static_cast<std::size_t>(angle_count), 0);
  detail::parallel_for(static_cast<std::size_t>(angle_count), threads, [&](std::size_t i) {
    for (int r = 0; r <= max_retries; ++r) {
      const double theta = sampler(static_cast<int>(i), r);
      try {
        LyapunovConfig c = cfg;
        c.seed = cfg.seed + i;
        out.runs[i] = twisted_spectrum(first_return_iet(surface, theta), c);
        out.angles[i] = theta;
        retries[i] = static_cast<std::uint64_t>(r);
        return;
      } catch (const Error& e) {
        if (e.code() != ErrorCode::SaddleConnection && e.code() != ErrorCode::TieBreak &&
            e.code() != ErrorCode::NonReturning)
          throw;
      }
    }
    fail(ErrorCode::RetryExhausted, "no usable angle within the retry cap");
  });
  for (auto r : retries) out.resampled += r;

  std::array<std::vector<double>, 4> lead;
  std::vector<double> top, s_mm, s_pm, s_mp;
  for (const auto& run : out.runs) {
    const auto& pp = run[0].exponents;
    lead[0].push_back(pp.size() > 1 ? pp[1] : pp[0]);
    for (int c = 1; c < 4; ++c) lead[c].push_back(run[c].exponents.front());
    top.push_back(pp.front());
    const double pos_pp = pp[0] + (pp.size() > 1 ? pp[1] : 0.0);
    s_mm.push_back(pos_pp + run[Character{-1, -1}.index()].exponents.front());
    s_pm.push_back(pos_pp + run[Character{1, -1}.index()].exponents.front());
    s_mp.push_back(pos_pp + run[Character{-1, 1}.index()].exponents.front());
  }
  for (int c = 0; c < 4; ++c) out.second_or_top[c] = median(lead[c]);
  out.trivial_top = median(top);
  out.sum_pp_mm = median(s_mm);
  out.sum_pp_pm = median(s_pm);
  out.sum_pp_mp = median(s_mp);
  return out;
}

}  // namespace windtree
