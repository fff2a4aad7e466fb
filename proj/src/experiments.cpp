#include "windtree/experiments.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <numbers>
#include <random>
#include <sstream>

#include "parallel.hpp"

namespace windtree {

namespace {

constexpr double kHalfPi = std::numbers::pi / 2;
constexpr double kNaN = std::numeric_limits<double>::quiet_NaN();

double unit(std::mt19937_64& rng) { return static_cast<double>(rng() >> 11) * 0x1.0p-53; }

double uniform(std::mt19937_64& rng, double lo, double hi) { return lo + (hi - lo) * unit(rng); }

std::mt19937_64 stream(std::uint64_t seed, std::uint64_t a, std::uint64_t b) {
  std::seed_seq seq{static_cast<std::uint32_t>(seed), static_cast<std::uint32_t>(seed >> 32),
                    static_cast<std::uint32_t>(a), static_cast<std::uint32_t>(b)};
  return std::mt19937_64(seq);
}

bool near_rational(double t) {
  for (int q = 1; q <= 1000; ++q) {
    const double p = std::nearbyint(t * q);
    if (std::fabs(t - p / q) < 1e-9) return true;
  }
  return false;
}

// Quartiles of the finite entries, NaN when there are none.
Quartiles finite_quartiles(const std::vector<double>& v) {
  std::vector<double> f;
  for (double x : v)
    if (std::isfinite(x)) f.push_back(x);
  if (f.empty()) return {kNaN, kNaN, kNaN};
  return quartiles(std::move(f));
}

ParticleState start_state(const TableParams& t, double theta) { return make_state(t, 0.5L, 0.0L, theta); }

double slot_angle(const ExperimentConfig& cfg, int index, int retry) {
  return cfg.theta ? *cfg.theta : sample_angle(cfg.seed, index, retry);
}

}  // namespace

TableParams ExperimentConfig::table() const {
  if (veech) return veech_params(veech->x, veech->y, veech->D);
  return make_table(a, b);
}

std::vector<double> ExperimentConfig::schedule() const {
  std::vector<double> s;
  if (!(schedule_ratio > 1) || !(t_min > 0) || !(t_max > t_min)) return s;
  for (int k = 0;; ++k) {
    const double t = t_min * std::pow(schedule_ratio, k);
    if (t >= t_max * (1 - 1e-12)) break;
    s.push_back(t);
  }
  s.push_back(t_max);
  return s;
}

void ExperimentConfig::validate() const {
  if (!(t_max >= 1e3)) fail(ErrorCode::InvalidArgument, "t_max must be at least 1e3");
  if (!(t_min > 0) || !(t_min < t_max)) fail(ErrorCode::InvalidArgument, "t_min must lie in (0, t_max)");
  if (!(schedule_ratio > 1)) fail(ErrorCode::InvalidArgument, "schedule ratio must exceed 1");
  if (schedule().size() < 20) fail(ErrorCode::InvalidArgument, "schedule has fewer than 20 points");
  if (!(fit_window_fraction > 0 && fit_window_fraction <= 1))
    fail(ErrorCode::InvalidArgument, "fit window fraction must lie in (0, 1]");
  if (angle_count < 1) fail(ErrorCode::InvalidArgument, "angle count must be positive");
  if (threads < 1) fail(ErrorCode::InvalidArgument, "thread count must be positive");
  if (max_retries < 0) fail(ErrorCode::InvalidArgument, "retry cap must be non-negative");
  if (theta && !(*theta >= 0 && *theta <= kHalfPi)) fail(ErrorCode::InvalidArgument, "theta must lie in [0, pi/2]");
  if (consistency_cases < 1) fail(ErrorCode::InvalidArgument, "consistency cases must be positive");
  table();
}

double sample_angle(std::uint64_t seed, int index, int retry) {
  auto rng = stream(seed, static_cast<std::uint64_t>(index), static_cast<std::uint64_t>(retry));
  for (;;) {
    const double theta = unit(rng) * kHalfPi;
    if (theta <= 0) continue;
    if (!near_rational(std::tan(theta))) return theta;
  }
}

FitResult fit_exponent(std::span<const double> T, std::span<const double> d, double fraction) {
  if (T.size() != d.size()) fail(ErrorCode::InvalidArgument, "series lengths differ");
  if (!(fraction > 0 && fraction <= 1)) fail(ErrorCode::InvalidArgument, "fit window fraction must lie in (0, 1]");
  const std::size_t n = T.size();
  const auto m = static_cast<std::size_t>(std::ceil(fraction * static_cast<double>(n) - 1e-9));
  if (m < 5) fail(ErrorCode::InsufficientData, "fewer than 5 points in the fit window");
  double sx = 0, sy = 0;
  for (std::size_t i = n - m; i < n; ++i) {
    if (!(T[i] > 0) || !(d[i] > 0)) fail(ErrorCode::InsufficientData, "non-positive value in the fit window");
    sx += std::log(T[i]);
    sy += std::log(d[i]);
  }
  const double mx = sx / m, my = sy / m;
  double sxx = 0, sxy = 0;
  for (std::size_t i = n - m; i < n; ++i) {
    const double x = std::log(T[i]) - mx, y = std::log(d[i]) - my;
    sxx += x * x;
    sxy += x * y;
  }
  if (!(sxx > 0)) fail(ErrorCode::InsufficientData, "fit window has no spread in T");
  FitResult r;
  r.slope = sxy / sxx;
  r.points = static_cast<int>(m);
  double ssr = 0;
  for (std::size_t i = n - m; i < n; ++i) {
    const double res = std::log(d[i]) - my - r.slope * (std::log(T[i]) - mx);
    ssr += res * res;
  }
  r.std_error = std::sqrt(ssr / static_cast<double>(m - 2) / sxx);
  return r;
}

Quartiles quartiles(std::vector<double> v) {
  if (v.empty()) fail(ErrorCode::InsufficientData, "quartiles of an empty list");
  std::sort(v.begin(), v.end());
  auto at = [&](double p) {
    const double pos = p * static_cast<double>(v.size() - 1);
    const auto lo = static_cast<std::size_t>(std::floor(pos));
    const std::size_t hi = std::min(lo + 1, v.size() - 1);
    return v[lo] + (pos - static_cast<double>(lo)) * (v[hi] - v[lo]);
  };
  return {at(0.25), at(0.5), at(0.75)};
}

DiffusionReport run_diffusion(const ExperimentConfig& cfg) {
  cfg.validate();
  const TableParams table = cfg.table();
  const auto sched = cfg.schedule();
  DiffusionReport rep;
  rep.config = cfg;
  rep.angles.resize(static_cast<std::size_t>(cfg.angle_count));
  detail::parallel_for(rep.angles.size(), cfg.threads, [&](std::size_t i) {
    AngleResult& out = rep.angles[i];
    out.index = static_cast<int>(i);
    for (int r = 0; r <= cfg.max_retries; ++r) {
      out.theta = slot_angle(cfg, out.index, r);
      const auto series = displacement_series(table, start_state(table, out.theta), sched);
      if (series.truncated) {
        ++out.aborted;
        continue;
      }
      out.events = series.events;
      std::vector<double> runmax;
      for (const auto& s : series.samples) {
        out.series.push_back(
            {s.time, static_cast<double>(s.distance), static_cast<double>(s.running_max)});
        runmax.push_back(static_cast<double>(s.running_max));
      }
      out.fit = fit_exponent(sched, runmax, cfg.fit_window_fraction);
      out.ok = true;
      return;
    }
  });
  std::vector<double> slopes;
  for (const auto& a : rep.angles) {
    rep.corner_hits += a.aborted;
    if (a.ok)
      slopes.push_back(a.fit.slope);
    else
      ++rep.aborted_slots;
  }
  if (2 * rep.aborted_slots > cfg.angle_count) fail(ErrorCode::RetryExhausted, "more than half of the angles aborted");
  rep.exponent = quartiles(slopes);
  return rep;
}

std::vector<DeviationClass> default_deviation_classes() {
  const auto f = windtree_cocycle();
  return {{"f", {}, true},
          {"f1", f.f1, false},
          {"f2", f.f2, false},
          {"h_total", h_total(), false},
          {"e_mm", e_minus_minus_class(), false}};
}

const Quartiles& DeviationReport::of(const std::string& name) const {
  for (std::size_t k = 0; k < classes.size(); ++k)
    if (classes[k].name == name) return exponent[k];
  fail(ErrorCode::InvalidArgument, "unknown deviation class " + name);
}

DeviationReport run_deviation_spectrum(const ExperimentConfig& cfg, const std::vector<DeviationClass>& classes) {
  cfg.validate();
  if (classes.empty()) fail(ErrorCode::InvalidArgument, "no deviation classes");
  const TableParams table = cfg.table();
  const auto sched = cfg.schedule();
  const std::size_t nc = classes.size();
  DeviationReport rep;
  rep.config = cfg;
  rep.classes = classes;
  rep.angles.resize(static_cast<std::size_t>(cfg.angle_count));
  detail::parallel_for(rep.angles.size(), cfg.threads, [&](std::size_t i) {
    DeviationAngle& out = rep.angles[i];
    out.index = static_cast<int>(i);
    for (int r = 0; r <= cfg.max_retries; ++r) {
      out.theta = slot_angle(cfg, out.index, r);
      std::vector<std::vector<double>> runmax(nc);
      std::vector<double> best(nc, 0.0);
      try {
        SurfaceTracker tr(table, start_state(table, out.theta));
        for (double t : sched) {
          tr.advance(t - tr.clock());
          for (std::size_t c = 0; c < nc; ++c) {
            double v;
            if (classes[c].level_norm) {
              const auto lv = tr.level();
              v = std::hypot(static_cast<double>(lv[0]), static_cast<double>(lv[1]));
            } else {
              v = std::fabs(static_cast<double>(tr.counts().pair(classes[c].cls)));
            }
            best[c] = std::max(best[c], v);
            runmax[c].push_back(best[c]);
          }
        }
        out.walls = tr.wall_hits();
      } catch (const Error& e) {
        if (e.code() != ErrorCode::CornerHit) throw;
        ++out.aborted;
        continue;
      }
      for (std::size_t c = 0; c < nc; ++c) {
        try {
          out.fits.push_back(fit_exponent(sched, runmax[c], cfg.fit_window_fraction));
        } catch (const Error& e) {
          if (e.code() != ErrorCode::InsufficientData) throw;
          out.fits.push_back({kNaN, kNaN, 0});  // pairing stayed zero
        }
      }
      out.ok = true;
      return;
    }
  });
  std::vector<std::vector<double>> slopes(nc);
  for (const auto& a : rep.angles) {
    rep.corner_hits += a.aborted;
    if (!a.ok) {
      ++rep.aborted_slots;
      continue;
    }
    for (std::size_t c = 0; c < nc; ++c) slopes[c].push_back(a.fits[c].slope);
  }
  if (2 * rep.aborted_slots > cfg.angle_count) fail(ErrorCode::RetryExhausted, "more than half of the angles aborted");
  for (const auto& s : slopes) rep.exponent.push_back(finite_quartiles(s));
  return rep;
}

LyapunovReport run_lyapunov(const ExperimentConfig& cfg) {
  cfg.validate();
  if (cfg.lyapunov_steps == 0) fail(ErrorCode::InsufficientData, "zero induction steps requested");
  const auto surface = build_surface_L(cfg.table());
  LyapunovConfig lc;
  lc.steps = cfg.lyapunov_steps;
  lc.seed = cfg.seed;
  LyapunovReport rep;
  rep.config = cfg;
  rep.summary = character_spectrum(
      surface, cfg.angle_count, [&](int idx, int retry) { return slot_angle(cfg, idx, retry); }, lc,
      cfg.max_retries, cfg.threads);
  return rep;
}

double displacement_gap(const TableParams& table, const ParticleState& start, std::uint64_t events,
                        const TrackerOptions& opts) {
  SurfaceTracker tr(table, start, opts);
  ParticleState s = start;
  double worst = 0;
  try {
    for (std::uint64_t k = 0; k < events; ++k) {
      const auto ev = next_event(table, s, 1e30);
      if (ev.kind != EventKind::VerticalWall && ev.kind != EventKind::HorizontalWall) return -1;
      s = reflect(table, s, ev);
      tr.advance(ev.time);
      const auto lv = tr.level();
      const Point2 d = displacement_vector(start, s);
      worst = std::max(worst, static_cast<double>(std::hypot(lv[0] - d.x, lv[1] - d.y)));
    }
  } catch (const Error& e) {
    if (e.code() == ErrorCode::CornerHit) return -1;
    throw;
  }
  return worst;
}

bool ConsistencyReport::passed() const {
  return std::all_of(checks.begin(), checks.end(), [](const CheckResult& c) { return c.passed; });
}

namespace {

Point2 random_free_point(std::mt19937_64& rng, const TableParams& t) {
  for (;;) {
    const long double x = uniform(rng, -3, 3), y = uniform(rng, -3, 3);
    if (!inside_scatterer(t, x, y)) return {x, y};
  }
}

CheckResult check_displacement_bound(const ExperimentConfig& cfg) {
  auto rng = stream(cfg.seed, 0x5157, 1);
  TrackerOptions opts;
  opts.swap_wall_toggles = cfg.mutate_sheet_toggles;
  int done = 0, resampled = 0, violations = 0;
  double worst = 0;
  while (done < cfg.consistency_cases) {
    const auto t = make_table(uniform(rng, 0.05, 0.95), uniform(rng, 0.05, 0.95));
    const double theta = uniform(rng, 0.0, kHalfPi);
    const int sx = (rng() & 1) ? 1 : -1;
    const int sy = (rng() & 1) ? 1 : -1;
    const double g = displacement_gap(t, make_state(t, 0.5L, 0.0L, theta, sx, sy), cfg.consistency_events, opts);
    if (g < 0) {
      ++resampled;
      continue;
    }
    worst = std::max(worst, g);
    if (g > std::numbers::sqrt2) ++violations;
    ++done;
  }
  std::ostringstream os;
  os << "cases " << done << " events " << cfg.consistency_events << " worst " << worst << " violations "
     << violations << " resampled " << resampled;
  return {"displacement_bound", violations == 0, os.str()};
}

CheckResult check_oracle(const ExperimentConfig& cfg) {
  auto rng = stream(cfg.seed, 0x5157, 2);
  const double step = 1e-4, horizon = 10;
  SimOptions wide;
  wide.corner_tol = 10 * step;
  int done = 0;
  double worst = 0;
  while (done < cfg.consistency_cases) {
    const auto t = make_table(uniform(rng, 0.05, 0.95), uniform(rng, 0.05, 0.95));
    const double theta = uniform(rng, 0.0, kHalfPi);
    const int sx = (rng() & 1) ? 1 : -1;
    const int sy = (rng() & 1) ? 1 : -1;
    const Point2 p = random_free_point(rng, t);
    ParticleState end;
    try {
      end = advance(t, make_state(t, p.x, p.y, theta, sx, sy), horizon, nullptr, wide);
    } catch (const CornerHitError&) {
      continue;
    }
    const Point2 o = oracle_raymarch(t, p, theta, sx, sy, horizon, step);
    worst = std::max(worst, static_cast<double>(std::hypot(end.position().x - o.x, end.position().y - o.y)));
    ++done;
  }
  std::ostringstream os;
  os << "cases " << done << " step " << step << " worst " << worst;
  return {"oracle_differential", worst <= 10 * step, os.str()};
}

CheckResult check_reversal(const ExperimentConfig& cfg) {
  auto rng = stream(cfg.seed, 0x5157, 3);
  int done = 0;
  double worst = 0;
  while (done < cfg.consistency_cases) {
    const auto t = make_table(uniform(rng, 0.1, 0.9), uniform(rng, 0.1, 0.9));
    const double theta = uniform(rng, 0.01, kHalfPi - 0.01);
    const Point2 p = random_free_point(rng, t);
    const auto s = make_state(t, p.x, p.y, theta);
    try {
      auto e = advance(t, s, 1000.0);
      e.sx = -e.sx;
      e.sy = -e.sy;
      worst = std::max(worst, static_cast<double>(displacement(s, advance(t, e, 1000.0))));
      ++done;
    } catch (const CornerHitError&) {
    }
  }
  std::ostringstream os;
  os << "cases " << done << " horizon 1000 worst " << worst;
  return {"time_reversal", worst <= 1e-9, os.str()};
}

CheckResult check_invariants(const ExperimentConfig& cfg) {
  const TableParams t = cfg.table();
  const auto x = build_surface_X(t);
  const auto angles = cone_points(x);
  bool ok = angles.size() == 4 && stratum_signature(angles) == std::vector<int>{2, 2, 2, 2};
  ok = ok && genus(x) == 5 && euler_genus(x) == 5;
  std::ostringstream os;
  os << "X cone points " << angles.size() << " genus " << genus(x);
  for (auto h : {KleinSubgroup::TauV, KleinSubgroup::TauH, KleinSubgroup::TauVH}) {
    const auto sig = stratum_signature(quotient_cone_angles(t, h));
    ok = ok && sig == std::vector<int>{2, 2};
    os << " quotient " << sig.size() << " zeros";
  }
  const auto whole = stratum_signature(quotient_cone_angles(t, KleinSubgroup::Whole));
  ok = ok && whole == std::vector<int>{2};
  os << " X/K " << whole.size() << " zero";
  return {"surface_invariants", ok, os.str()};
}

}  // namespace

ConsistencyReport run_consistency(const ExperimentConfig& cfg) {
  cfg.validate();
  ConsistencyReport rep;
  rep.config = cfg;
  rep.checks.resize(4);
  detail::parallel_for(4, cfg.threads, [&](std::size_t k) {
    switch (k) {
      case 0: rep.checks[k] = check_displacement_bound(cfg); break;
      case 1: rep.checks[k] = check_oracle(cfg); break;
      case 2: rep.checks[k] = check_reversal(cfg); break;
      default: rep.checks[k] = check_invariants(cfg); break;
    }
  });
  return rep;
}

}  // namespace windtree
