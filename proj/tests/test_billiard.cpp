#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include "doctest.h"

#include <cmath>
#include <numbers>
#include <random>
#include <vector>

#include "windtree/billiard.hpp"

using namespace windtree;

namespace {

constexpr double kPi = std::numbers::pi;

double uniform(std::mt19937_64& rng, double lo, double hi) {
  return lo + (hi - lo) * static_cast<double>(rng() >> 11) * 0x1.0p-53;
}

// Random start point outside every scatterer.
Point2 random_free_point(std::mt19937_64& rng, const TableParams& t) {
  for (;;) {
    Point2 p{uniform(rng, -3, 3), uniform(rng, -3, 3)};
    const long double dx = std::fabs(p.x - std::nearbyint(p.x));
    const long double dy = std::fabs(p.y - std::nearbyint(p.y));
    if (dx > t.a / 2 + 1e-3 || dy > t.b / 2 + 1e-3) return p;
  }
}

}  // namespace

TEST_CASE("make_table validates the open unit square") {
  CHECK_NOTHROW(make_table(0.5, 0.5));
  CHECK_NOTHROW(make_table(3 - 2 * std::sqrt(2.0), 3 - 2 * std::sqrt(2.0)));
  CHECK_THROWS_AS(make_table(1.0, 0.5), Error);
  CHECK_THROWS_AS(make_table(0.5, 0.0), Error);
  try {
    make_table(-0.1, 0.5);
  } catch (const Error& e) {
    CHECK(e.code() == ErrorCode::DomainError);
  }
}

TEST_CASE("make_state rejects interior points and bad angles") {
  const auto t = make_table(0.5, 0.5);
  CHECK_THROWS_AS(make_state(t, 0.1L, 0.1L, 0.3), Error);
  CHECK_THROWS_AS(make_state(t, 0.5L, 0.0L, -0.1), Error);
  CHECK_THROWS_AS(make_state(t, 0.5L, 0.0L, 2.0), Error);
  CHECK_THROWS_AS(make_state(t, 0.5L, 0.0L, 0.3, 2, 1), Error);
  const auto s = make_state(t, -2.5L, 7.25L, 0.3);
  CHECK(s.cell == CellIndex{-3, 7});
  CHECK(s.ox == doctest::Approx(0.5));
  CHECK(s.oy == doctest::Approx(0.25));
}

TEST_CASE("next_event closed-form cases") {
  const auto t = make_table(0.5, 0.5);

  SUBCASE("east ray hits the left face of the next scatterer") {
    const auto s = make_state(t, 0.5L, 0.0L, 0.0);
    const auto ev = next_event(t, s, 10.0);
    CHECK(ev.kind == EventKind::VerticalWall);
    CHECK(ev.time == doctest::Approx(0.25).epsilon(1e-15));
    CHECK(ev.cell_hit == CellIndex{1, 0});
  }
  SUBCASE("north ray threads the vertical corridor") {
    const auto s = make_state(t, 0.5L, 0.0L, kPi / 2);
    const auto ev = next_event(t, s, 10.0);
    CHECK(ev.kind == EventKind::HorizonReached);
    CHECK(ev.time == 10.0);
  }
  SUBCASE("diagonal aimed at a corner") {
    const auto s = make_state(t, 0.5L, 0.5L, kPi / 4, -1, -1);
    const auto ev = next_event(t, s, 10.0);
    CHECK(ev.kind == EventKind::Corner);
    CHECK(ev.cell_hit == CellIndex{0, 0});
    CHECK(ev.time == doctest::Approx(0.25 * std::sqrt(2.0)));
  }
  SUBCASE("grazing along a wall line is free flight") {
    const auto s = make_state(t, 0.25L, 0.5L, kPi / 2);
    CHECK(next_event(t, s, 5.0).kind == EventKind::HorizonReached);
    const auto w = make_state(t, 0.5L, 0.25L, 0.0, -1, 1);
    CHECK(next_event(t, w, 5.0).kind == EventKind::HorizonReached);
  }
  SUBCASE("horizontal wall from below") {
    const auto s = make_state(t, 0.0L, 0.5L, kPi / 2, 1, 1);
    const auto ev = next_event(t, s, 10.0);
    CHECK(ev.kind == EventKind::HorizontalWall);
    CHECK(ev.time == doctest::Approx(0.25));
    CHECK(ev.cell_hit == CellIndex{0, 1});
  }
}

TEST_CASE("reflect flips exactly one sign and is an involution on signs") {
  const auto t = make_table(0.5, 0.5);
  auto s = make_state(t, 0.5L, 0.0L, 0.0);
  auto ev = next_event(t, s, 10.0);
  auto r = reflect(t, s, ev);
  CHECK(r.sx == -1);
  CHECK(r.sy == 1);
  CHECK(r.clock == doctest::Approx(0.25));
  CHECK(r.position().x == doctest::Approx(0.75));
  CHECK(r.base_angle == s.base_angle);
  ev = next_event(t, r, 10.0);
  CHECK(ev.kind == EventKind::VerticalWall);
  r = reflect(t, r, ev);
  CHECK(r.sx == 1);

  auto h = make_state(t, 0.0L, 0.5L, kPi / 2, -1, 1);
  h.sx = -1;
  const auto hv = next_event(t, h, 10.0);
  REQUIRE(hv.kind == EventKind::HorizontalWall);
  const auto hr = reflect(t, h, hv);
  CHECK(hr.sx == -1);
  CHECK(hr.sy == -1);
  CHECK_THROWS_AS(reflect(t, h, CollisionEvent{1.0, EventKind::HorizonReached, {}}), Error);
}

TEST_CASE("advance on closed-form trajectories") {
  const auto t = make_table(0.5, 0.5);
  const auto s = make_state(t, 0.5L, 0.0L, 0.7);
  const auto same = advance(t, s, 0.0);
  CHECK(same.cell == s.cell);
  CHECK(same.ox == s.ox);
  CHECK(same.oy == s.oy);

  std::uint64_t events = 0;
  const auto north = advance(t, make_state(t, 0.5L, 0.0L, kPi / 2), 3.0, &events);
  CHECK(events == 0);
  CHECK(north.position().x == doctest::Approx(0.5));
  CHECK(north.position().y == doctest::Approx(3.0));
  CHECK(north.clock == 3.0);

  const auto east = advance(t, make_state(t, 0.5L, 0.0L, 0.0), 1.0, &events);
  const auto oracle = oracle_raymarch(t, {0.5L, 0.0L}, 0.0, 1, 1, 1.0, 1e-6);
  CHECK(std::fabs(east.position().x - oracle.x) < 1e-5);
  CHECK(std::fabs(east.position().y - oracle.y) < 1e-5);
  CHECK(events == 2);
}

TEST_CASE("oracle_raymarch closed-form cases") {
  const auto t = make_table(0.5, 0.5);
  const auto p = oracle_raymarch(t, {0.5L, 0.0L}, kPi / 2, 1, 1, 3.0, 1e-4);
  CHECK(std::fabs(p.x - 0.5) < 1e-4);
  CHECK(std::fabs(p.y - 3.0) < 1e-4);
  const auto q = oracle_raymarch(t, {0.5L, 0.0L}, 0.0, 1, 1, 0.25, 1e-4);
  CHECK(std::fabs(q.x - 0.75) < 1e-4);
  CHECK_THROWS_AS(oracle_raymarch(t, {0.5L, 0.5L}, kPi / 4, -1, -1, 1.0, 1e-4), Error);
}

TEST_CASE("corner hit aborts advance with the partial time") {
  const auto t = make_table(0.5, 0.5);
  const auto s = make_state(t, 0.5L, 0.5L, kPi / 4, -1, -1);
  try {
    advance(t, s, 5.0);
    FAIL("expected a corner hit");
  } catch (const CornerHitError& e) {
    CHECK(e.code() == ErrorCode::CornerHit);
    CHECK(e.elapsed() == doctest::Approx(0.25 * std::sqrt(2.0)));
  }
}

TEST_CASE("differential test against the ray-march oracle") {
  std::mt19937_64 rng(20240601);
  const double step = 1e-4;
  int checked = 0;
  double worst = 0;
  while (checked < 1000) {
    const auto t = make_table(uniform(rng, 0.05, 0.95), uniform(rng, 0.05, 0.95));
    const double theta = uniform(rng, 0.0, kPi / 2);
    const int sx = (rng() & 1) ? 1 : -1;
    const int sy = (rng() & 1) ? 1 : -1;
    const Point2 p = random_free_point(rng, t);
    const auto s = make_state(t, p.x, p.y, theta, sx, sy);
    // Near-corner passes are where a fixed-step integrator is ambiguous.
    SimOptions wide;
    wide.corner_tol = 10 * step;
    ParticleState end;
    try {
      end = advance(t, s, 10.0, nullptr, wide);
    } catch (const CornerHitError&) {
      continue;
    }
    const Point2 o = oracle_raymarch(t, p, theta, sx, sy, 10.0, step);
    const double err = static_cast<double>(
        std::hypot(end.position().x - o.x, end.position().y - o.y));
    worst = std::max(worst, err);
    ++checked;
  }
  MESSAGE("worst discrepancy " << worst);
  CHECK(worst <= 10 * step);
}

TEST_CASE("time reversal returns to the start") {
  std::mt19937_64 rng(77);
  int checked = 0;
  double worst = 0;
  while (checked < 200) {
    const auto t = make_table(uniform(rng, 0.1, 0.9), uniform(rng, 0.1, 0.9));
    const double theta = uniform(rng, 0.01, kPi / 2 - 0.01);
    const Point2 p = random_free_point(rng, t);
    const auto s = make_state(t, p.x, p.y, theta);
    try {
      auto e = advance(t, s, 1000.0);
      e.sx = -e.sx;
      e.sy = -e.sy;
      const auto back = advance(t, e, 1000.0);
      const auto d = displacement(s, back);
      worst = std::max(worst, static_cast<double>(d));
      ++checked;
    } catch (const CornerHitError&) {
    }
  }
  MESSAGE("worst reversal error " << worst);
  CHECK(worst <= 1e-9);
}

TEST_CASE("offsets stay normalized and outside scatterers after every event") {
  std::mt19937_64 rng(5);
  for (int trial = 0; trial < 50; ++trial) {
    const auto t = make_table(uniform(rng, 0.1, 0.9), uniform(rng, 0.1, 0.9));
    auto s = make_state(t, 0.5L, 0.5L, uniform(rng, 0.05, 1.5));
    const auto base = s.base_angle;
    for (int k = 0; k < 2000; ++k) {
      const auto ev = next_event(t, s, 1e9);
      if (ev.kind == EventKind::Corner) break;
      REQUIRE(ev.kind != EventKind::HorizonReached);
      s = reflect(t, s, ev);
      REQUIRE(s.ox >= 0.0);
      REQUIRE(s.ox < 1.0);
      REQUIRE(s.oy >= 0.0);
      REQUIRE(s.oy < 1.0);
      const long double dx = std::fabs(s.position().x - std::nearbyint(s.position().x));
      const long double dy = std::fabs(s.position().y - std::nearbyint(s.position().y));
      REQUIRE((dx >= t.a / 2 - 1e-12 || dy >= t.b / 2 - 1e-12));
      REQUIRE(s.base_angle == base);
      REQUIRE((std::abs(s.sx) == 1 && std::abs(s.sy) == 1));
    }
  }
}

TEST_CASE("event count grows linearly in time") {
  const auto t = make_table(0.5, 0.5);
  for (double theta : {0.3, 0.6, 1.1}) {
    std::uint64_t events = 0;
    advance(t, make_state(t, 0.5L, 0.0L, theta), 1e4, &events);
    CHECK(events >= 1000);
    CHECK(events <= 100000);
  }
}

TEST_CASE("displacement_series") {
  const auto t = make_table(0.5, 0.5);
  const auto s = make_state(t, 0.5L, 0.0L, kPi / 2);
  const std::vector<double> sched{1, 2, 4};
  const auto series = displacement_series(t, s, sched);
  REQUIRE(series.samples.size() == 3);
  CHECK(series.samples[0].distance == doctest::Approx(1));
  CHECK(series.samples[1].distance == doctest::Approx(2));
  CHECK(series.samples[2].distance == doctest::Approx(4));
  CHECK(series.samples[2].running_max == doctest::Approx(4));
  CHECK_FALSE(series.truncated);

  const std::vector<double> bad{1, 1};
  CHECK_THROWS_AS(displacement_series(t, s, bad), Error);

  const auto corner = make_state(t, 0.5L, 0.5L, kPi / 4, -1, -1);
  const auto cut = displacement_series(t, corner, sched);
  CHECK(cut.truncated);
  CHECK(cut.samples.empty());

  // Running max is monotone and bounds the distance.
  const auto gen = make_state(t, 0.5L, 0.0L, 0.6);
  std::vector<double> geo;
  for (double T = 1; T <= 1e4; T *= std::pow(2.0, 0.25)) geo.push_back(T);
  const auto g = displacement_series(t, gen, geo);
  for (std::size_t k = 1; k < g.samples.size(); ++k) {
    CHECK(g.samples[k].running_max >= g.samples[k - 1].running_max);
    CHECK(g.samples[k].running_max >= g.samples[k].distance);
  }
}

TEST_CASE("positions far from the origin keep full offset precision") {
  const auto t = make_table(0.5, 0.5);
  const auto s = make_state(t, 1e6L + 0.5L, -3e6L + 0.5L, kPi / 2);
  const auto e = advance(t, s, 0.125);
  CHECK(e.cell == CellIndex{1000000, -3000000});
  CHECK(e.oy == 0.625);
}
