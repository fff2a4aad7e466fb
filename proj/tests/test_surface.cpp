#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include "doctest.h"

#include <cmath>
#include <numbers>
#include <random>
#include <set>

#include "windtree/surface.hpp"
#include "windtree/veech.hpp"

using namespace windtree;

namespace {

constexpr double kPi = std::numbers::pi;

std::vector<TableParams> sample_tables() {
  return {make_table(0.5, 0.5), make_table(0.3, 0.7), make_table(0.17157287525381, 0.9), make_table(0.05, 0.2)};
}

bool all_close(const std::vector<double>& got, std::vector<double> want) {
  if (got.size() != want.size()) return false;
  std::sort(want.begin(), want.end());
  for (std::size_t i = 0; i < got.size(); ++i)
    if (std::fabs(got[i] - want[i]) > 1e-9) return false;
  return true;
}

}  // namespace

TEST_CASE("X has four sheets and area 4(1 - ab)") {
  const auto x = build_surface_X(make_table(0.5, 0.5));
  CHECK(x.sheet_count() == 4);
  CHECK(x.polygons().size() == 12);
  CHECK(x.area() == doctest::Approx(3.0).epsilon(1e-14));
  for (const auto& t : sample_tables()) {
    CHECK(build_surface_X(t).area() == doctest::Approx(4 * (1 - t.a * t.b)));
    CHECK(build_surface_L(t).area() == doctest::Approx(1 - t.a * t.b));
  }
}

TEST_CASE("cone angles and genus") {
  for (const auto& t : sample_tables()) {
    const auto x = build_surface_X(t);
    CHECK(all_close(cone_points(x), {6 * kPi, 6 * kPi, 6 * kPi, 6 * kPi}));
    CHECK(genus(x) == 5);
    CHECK(euler_genus(x) == 5);
    const auto l = build_surface_L(t);
    CHECK(all_close(cone_points(l), {6 * kPi}));
    CHECK(genus(l) == 2);
    CHECK(euler_genus(l) == 2);
  }
  const auto torus = build_torus();
  CHECK(all_close(cone_points(torus), {2 * kPi}));
  CHECK(genus(torus) == 1);
  CHECK(euler_genus(torus) == 1);
}

TEST_CASE("quotients by index-2 subgroups lie in H(2,2), X/K in H(2)") {
  for (const auto& t : sample_tables()) {
    for (auto h : {KleinSubgroup::TauV, KleinSubgroup::TauH, KleinSubgroup::TauVH}) {
      const auto angles = quotient_cone_angles(t, h);
      CHECK(all_close(angles, {6 * kPi, 6 * kPi}));
      CHECK(stratum_signature(angles) == std::vector<int>{2, 2});
      CHECK(genus(build_quotient(t, h)) == 3);
    }
    CHECK(stratum_signature(quotient_cone_angles(t, KleinSubgroup::Whole)) == std::vector<int>{2});
  }
}

TEST_CASE("six horizontal and six vertical cylinders") {
  const auto t = make_table(0.5, 0.5);
  const auto x = build_surface_X(t);
  for (const Vec2 dir : {Vec2{1, 0}, Vec2{0, 1}}) {
    std::set<std::set<int>> cylinders;
    std::vector<double> circumferences;
    for (std::size_t p = 0; p < x.polygons().size(); ++p) {
      const auto& poly = x.polygons()[p];
      const Vec2 c = (poly.vertices[0] + poly.vertices[2]) * 0.5;
      const auto curve = trace_closed_curve(x, static_cast<int>(p), c, dir);
      std::set<int> visited;
      for (const auto& s : curve.segments) visited.insert(s.polygon);
      if (cylinders.insert(visited).second) {
        const Vec2 hol = holonomy(x, curve);
        circumferences.push_back(std::hypot(hol.x, hol.y));
      }
    }
    CHECK(cylinders.size() == 6);
    std::sort(circumferences.begin(), circumferences.end());
    CHECK(circumferences == std::vector<double>{1, 1, 1, 1, 1, 1});
  }
}

TEST_CASE("malformed gluings are rejected") {
  std::vector<Polygon> p(1);
  p[0].vertices = {{0, 0}, {1, 0}, {1, 1}, {0, 1}};
  CHECK_THROWS_AS(PolygonalSurface(p, {{{0, 0}, {0, 2}, {}}}, 1), Error);
  CHECK_THROWS_AS(PolygonalSurface(p, {{{0, 0}, {0, 1}, {}}, {{0, 2}, {0, 3}, {}}}, 1), Error);
  std::vector<Polygon> q(1);
  q[0].vertices = {{0, 0}, {2, 0}, {2, 1}, {0, 1}};
  CHECK_THROWS_AS(PolygonalSurface(q, {{{0, 0}, {0, 2}, {}}, {{0, 1}, {0, 3}, {}}, {{0, 0}, {0, 2}, {}}}, 1), Error);
}

TEST_CASE("surface dump") {
  const auto l = build_surface_L(make_table(0.5, 0.5));
  const std::string golden =
      "surface polygons 3 gluings 6 sheets 1\n"
      "polygon 0 sheet 0 piece 0 origin 0 0 width 0.5 height 0.5\n"
      "polygon 1 sheet 0 piece 1 origin 0.5 0 width 0.5 height 0.5\n"
      "polygon 2 sheet 0 piece 2 origin 0 0.5 width 0.5 height 0.5\n"
      "glue 0:1 1:3 deck 00\n"
      "glue 0:2 2:0 deck 00\n"
      "glue 0:0 2:2 deck 00\n"
      "glue 0:3 1:1 deck 00\n"
      "glue 1:2 1:0 deck 01\n"
      "glue 2:1 2:3 deck 10\n";
  CHECK(l.dump() == golden);
  const auto x = build_surface_X(make_table(0.5, 0.5));
  const std::string dx = x.dump();
  CHECK(dx.rfind("surface polygons 12 gluings 24 sheets 4\n", 0) == 0);
  CHECK(dx.find("glue 4:2 1:0 deck 01") != std::string::npos);  // sheet 01 top-right piece wraps to sheet 00
}

TEST_CASE("holonomy of the generators") {
  for (const auto& t : sample_tables()) {
    const auto x = build_surface_X(t);
    const auto g = homology_generators(x, t);
    for (int k = 0; k < 4; ++k) {
      const Vec2 hh = holonomy(x, g[kH00 + k]);
      CHECK(hh.x == doctest::Approx(1));
      CHECK(hh.y == doctest::Approx(0));
      const Vec2 hv = holonomy(x, g[kV00 + k]);
      CHECK(hv.x == doctest::Approx(0));
      CHECK(hv.y == doctest::Approx(1));
    }
    for (int j = 0; j < 2; ++j) {
      const Vec2 cx = holonomy(x, g[kCx0 + j]);
      CHECK(cx.x == doctest::Approx(2 - 2 * t.a));
      CHECK(cx.y == doctest::Approx(0));
      const Vec2 cy = holonomy(x, g[kC0x + j]);
      CHECK(cy.x == doctest::Approx(0));
      CHECK(cy.y == doctest::Approx(2 - 2 * t.b));
    }
  }
}

TEST_CASE("non-closed curves are rejected") {
  const auto t = make_table(0.5, 0.5);
  const auto x = build_surface_X(t);
  Curve broken{"broken", {{0, {0.1, 0.25}, {0.5, 0.25}}}};
  CHECK_THROWS_AS(validate_closed(x, broken), Error);
  CHECK_THROWS_AS(holonomy(x, broken), Error);
  // Horizontal line through a vertex row.
  CHECK_THROWS_AS(trace_closed_curve(x, 0, {0.25, 0.0}, {1, 0}), Error);
}

TEST_CASE("intersection form") {
  const auto t = make_table(0.5, 0.5);
  const auto x = build_surface_X(t);
  const auto m = intersection_matrix(x, homology_generators(x, t));
  for (int i = 0; i < 4; ++i)
    for (int j = 0; j < 4; ++j) {
      CHECK(m[kH00 + i][kV00 + j] == (i == j ? 1 : 0));
      CHECK(m[kH00 + i][kH00 + j] == 0);
      CHECK(m[kV00 + i][kV00 + j] == 0);
    }
  for (int i = 0; i < kGenCount; ++i)
    for (int j = 0; j < kGenCount; ++j) CHECK(m[i][j] == -m[j][i]);
  CHECK(integer_rank(m) == 10);

  // Dropping c_x1 and c_1x leaves a unimodular block: the remaining ten
  // curves form a basis of H_1(X; Z).
  std::vector<int> keep{kH00, kH01, kH10, kH11, kV00, kV01, kV10, kV11, kCx0, kC0x};
  std::vector<std::vector<std::int64_t>> r;
  for (int i : keep) {
    r.emplace_back();
    for (int j : keep) r.back().push_back(m[i][j]);
  }
  CHECK(std::llabs(integer_determinant(r)) == 1);

  // The form does not depend on (a, b).
  for (const auto& s : sample_tables()) {
    const auto f = compute_intersection_form(s);
    for (int i = 0; i < kGenCount; ++i)
      for (int j = 0; j < kGenCount; ++j) CHECK(f[i][j] == m[i][j]);
  }
}

TEST_CASE("relations hold as crossing-count identities") {
  const auto form = compute_intersection_form(make_table(0.5, 0.5));
  const auto lhs_h = make_class({{1, kCx0}, {-1, kCx1}});
  const auto rhs_h = make_class({{1, kH00}, {-1, kH01}, {1, kH10}, {-1, kH11}});
  const auto lhs_v = make_class({{1, kC0x}, {-1, kC1x}});
  const auto rhs_v = make_class({{1, kV00}, {-1, kV10}, {1, kV01}, {-1, kV11}});
  for (int g = 0; g < kGenCount; ++g) {
    const auto e = HomologyClass::generator(g);
    CHECK(intersect(form, lhs_h, e) == intersect(form, rhs_h, e));
    CHECK(intersect(form, lhs_v, e) == intersect(form, rhs_v, e));
  }
  for (const auto& rel : homology_relations()) CHECK(rel.is_zero());
}

TEST_CASE("canonical form") {
  const auto c = HomologyClass::generator(kCx1).canonical();
  CHECK(c.coeffs[kCx1] == 0);
  CHECK(c.coeffs[kC1x] == 0);
  CHECK(c.same_class(HomologyClass::generator(kCx1)));
  CHECK(c.str() == "-h00 + h01 - h10 + h11 + c_x0");
  CHECK_FALSE(HomologyClass::generator(kH00).is_zero());
  CHECK(HomologyClass{}.str() == "0");
}

TEST_CASE("deck action") {
  const auto form = compute_intersection_form(make_table(0.5, 0.5));
  std::mt19937_64 rng(3);
  for (int trial = 0; trial < 200; ++trial) {
    HomologyClass x, y;
    for (int g = 0; g < kGenCount; ++g) {
      x.coeffs[g] = static_cast<std::int64_t>(rng() % 7) - 3;
      y.coeffs[g] = static_cast<std::int64_t>(rng() % 7) - 3;
    }
    for (const auto g : klein_elements()) {
      CHECK(x.act(g).act(g) == x);
      CHECK(intersect(form, x.act(g), y.act(g)) == intersect(form, x, y));
      for (const auto h : klein_elements()) CHECK(x.act(g).act(h) == x.act(g * h));
    }
    CHECK(intersect(form, x, x) == 0);
  }
  for (const auto& rel : homology_relations())
    for (const auto g : klein_elements()) CHECK(rel.act(g).is_zero());
}

TEST_CASE("character splitting") {
  const auto form = compute_intersection_form(make_table(0.5, 0.5));
  const auto hk = h_total();
  auto parts = character_split(hk);
  CHECK(parts[0] == hk * 4);
  for (int c = 1; c < 4; ++c) CHECK(parts[c].is_zero());

  const auto pm = make_class({{1, kH00}, {-1, kH01}, {1, kH10}, {-1, kH11}});
  parts = character_split(pm);
  CHECK(parts[Character{1, -1}.index()] == pm * 4);

  const auto f = windtree_cocycle();
  CHECK(character_component4(f.f1, Character{-1, 1}).same_class(f.f1 * 4));
  CHECK(character_component4(f.f2, Character{1, -1}).same_class(f.f2 * 4));
  CHECK(character_component4(e_minus_minus_class(), Character{-1, -1}).same_class(e_minus_minus_class() * 4));

  std::mt19937_64 rng(11);
  for (int trial = 0; trial < 100; ++trial) {
    HomologyClass x, y;
    for (int g = 0; g < kGenCount; ++g) {
      x.coeffs[g] = static_cast<std::int64_t>(rng() % 9) - 4;
      y.coeffs[g] = static_cast<std::int64_t>(rng() % 9) - 4;
    }
    const auto px = character_split(x);
    const auto py = character_split(y);
    HomologyClass sum;
    for (int c = 0; c < 4; ++c) sum = sum + px[c];
    CHECK(sum == x * 4);
    for (const auto chi : all_characters()) {
      // Idempotent up to the factor 4.
      CHECK(character_component4(px[chi.index()], chi) == px[chi.index()] * 4);
      for (const auto psi : all_characters())
        if (!(chi == psi)) CHECK(intersect(form, px[chi.index()], py[psi.index()]) == 0);
    }
  }
  // E_h and E_v are isotropic and pair perfectly with each other.
  for (int i = 0; i < 4; ++i)
    for (int j = 0; j < 4; ++j) {
      CHECK(form[kH00 + i][kH00 + j] == 0);
      CHECK(form[kV00 + i][kV00 + j] == 0);
    }
}

TEST_CASE("Veech parameters") {
  const auto t = veech_params({1, 2}, {1, 2}, 2);
  const double expect = 3 - 2 * std::sqrt(2.0);
  CHECK(t.a == doctest::Approx(expect).epsilon(1e-14));
  CHECK(t.b == doctest::Approx(expect).epsilon(1e-14));
  CHECK(1 / (1 - t.a) == doctest::Approx((1 + std::sqrt(2.0)) / 2).epsilon(1e-14));
  try {
    veech_params({1, 2}, {1, 2}, 4);
    FAIL("expected NotSquareFree");
  } catch (const Error& e) {
    CHECK(e.code() == ErrorCode::NotSquareFree);
  }
  CHECK_THROWS_AS(veech_params({1, 2}, {1, 10}, 2), Error);  // 1/(1-a) < 1
  CHECK_THROWS_AS(veech_params({1, 2}, {1, 2}, 0), Error);
  CHECK(is_square_free(30));
  CHECK_FALSE(is_square_free(12));
  // Unequal x gives unequal sides, still a valid table.
  const auto u = veech_params({1, 3}, {1, 1}, 5);
  CHECK(u.a > 0);
  CHECK(u.b < 1);
  CHECK(1 / (1 - u.a) == doctest::Approx(1.0 / 3 + std::sqrt(5.0)));
  CHECK(1 / (1 - u.b) == doctest::Approx(2.0 / 3 + std::sqrt(5.0)));
  const auto xs = build_surface_X(t);
  CHECK(genus(xs) == 5);
}
