#include "windtree/surface.hpp"

#include <algorithm>
#include <cmath>
#include <iomanip>
#include <limits>
#include <numbers>
#include <sstream>

namespace windtree {

namespace {

constexpr double kGeomTol = 1e-12;

bool near(Vec2 a, Vec2 b, double tol = 1e-9) { return std::fabs(a.x - b.x) <= tol && std::fabs(a.y - b.y) <= tol; }

Polygon rectangle(double x0, double y0, double w, double h, int sheet, int piece) {
  Polygon p;
  p.vertices = {{x0, y0}, {x0 + w, y0}, {x0 + w, y0 + h}, {x0, y0 + h}};
  p.sheet = sheet;
  p.piece = piece;
  return p;
}

// Coset of g in K/H, numbered by first appearance in index order.
std::vector<int> coset_numbering(KleinSubgroup h, int& count) {
  std::vector<int> id(4, -1);
  count = 0;
  for (int i = 0; i < 4; ++i) {
    if (id[i] >= 0) continue;
    for (const auto e : klein_elements())
      if (subgroup_contains(h, e)) id[(KleinElement::from_index(i) * e).index()] = count;
    ++count;
  }
  return id;
}

}  // namespace

double Polygon::area() const {
  double s = 0;
  for (std::size_t i = 0; i < size(); ++i) s += cross(vertices[i], vertices[(i + 1) % size()]);
  return s / 2;
}

PolygonalSurface::PolygonalSurface(std::vector<Polygon> polygons, std::vector<Gluing> gluings, int sheets)
    : polygons_(std::move(polygons)), gluings_(std::move(gluings)), sheets_(sheets) {
  std::size_t total = 0;
  for (const auto& p : polygons_) {
    if (p.size() < 3) fail(ErrorCode::GluingError, "polygon with fewer than 3 vertices");
    if (p.area() <= 0) fail(ErrorCode::GluingError, "polygon is not counter-clockwise");
    offsets_.push_back(total);
    total += p.size();
  }
  partner_.assign(total, EdgeRef{-1, -1});
  deck_.assign(total, KleinElement{});
  for (const auto& g : gluings_) {
    for (const auto e : {g.a, g.b}) {
      if (e.polygon < 0 || e.polygon >= static_cast<int>(polygons_.size()) || e.edge < 0 ||
          e.edge >= static_cast<int>(polygons_[e.polygon].size()))
        fail(ErrorCode::GluingError, "gluing references a missing edge");
    }
    const std::size_t sa = slot(g.a), sb = slot(g.b);
    if (partner_[sa].polygon >= 0 || partner_[sb].polygon >= 0 || sa == sb)
      fail(ErrorCode::GluingError, "edge glued more than once");
    const Vec2 va = polygons_[g.a.polygon].edge_vector(g.a.edge);
    const Vec2 vb = polygons_[g.b.polygon].edge_vector(g.b.edge);
    if (!near(va, vb * -1.0, 1e-12)) fail(ErrorCode::GluingError, "glued edges are not parallel translates");
    partner_[sa] = g.b;
    partner_[sb] = g.a;
    deck_[sa] = g.deck;
    deck_[sb] = g.deck;
  }
  for (const auto& p : partner_)
    if (p.polygon < 0) fail(ErrorCode::GluingError, "unglued edge");
}

std::size_t PolygonalSurface::slot(EdgeRef e) const {
  return offsets_[static_cast<std::size_t>(e.polygon)] + static_cast<std::size_t>(e.edge);
}

EdgeRef PolygonalSurface::partner(EdgeRef e) const { return partner_[slot(e)]; }

KleinElement PolygonalSurface::deck(EdgeRef e) const { return deck_[slot(e)]; }

Vec2 PolygonalSurface::gluing_shift(EdgeRef e) const {
  const EdgeRef f = partner(e);
  const Polygon& p = polygons_[e.polygon];
  const Polygon& q = polygons_[f.polygon];
  return q.vertices[(f.edge + 1) % q.size()] - p.vertices[e.edge];
}

double PolygonalSurface::area() const {
  double s = 0;
  for (const auto& p : polygons_) s += p.area();
  return s;
}

std::string PolygonalSurface::dump() const {
  std::ostringstream os;
  os << std::setprecision(17);
  os << "surface polygons " << polygons_.size() << " gluings " << gluings_.size() << " sheets " << sheets_
     << "\n";
  for (std::size_t i = 0; i < polygons_.size(); ++i) {
    const auto& p = polygons_[i];
    double x0 = p.vertices[0].x, y0 = p.vertices[0].y, x1 = x0, y1 = y0;
    for (const auto& v : p.vertices) {
      x0 = std::min(x0, v.x);
      y0 = std::min(y0, v.y);
      x1 = std::max(x1, v.x);
      y1 = std::max(y1, v.y);
    }
    os << "polygon " << i << " sheet " << p.sheet << " piece " << p.piece << " origin "
       << x0 + p.placement.x << " " << y0 + p.placement.y << " width " << x1 - x0 << " height " << y1 - y0
       << "\n";
  }
  for (const auto& g : gluings_) {
    os << "glue " << g.a.polygon << ":" << g.a.edge << " " << g.b.polygon << ":" << g.b.edge << " deck "
       << g.deck.str() << "\n";
  }
  return os.str();
}

PolygonalSurface build_quotient(const TableParams& table, KleinSubgroup h) {
  const double a = table.a, b = table.b;
  if (!(a > 0 && a < 1 && b > 0 && b < 1)) fail(ErrorCode::DomainError, "table parameters out of range");
  int sheets = 0;
  const auto coset = coset_numbering(h, sheets);
  std::vector<KleinElement> rep(static_cast<std::size_t>(sheets));
  for (int i = 3; i >= 0; --i) rep[coset[i]] = KleinElement::from_index(i);

  std::vector<Polygon> polys;
  for (int s = 0; s < sheets; ++s) {
    polys.push_back(rectangle(0, 0, 1 - a, 1 - b, s, 0));
    polys.push_back(rectangle(1 - a, 0, a, 1 - b, s, 1));
    polys.push_back(rectangle(0, 1 - b, 1 - a, b, s, 2));
    for (int r = 0; r < kPiecesPerSheet; ++r) polys[kPiecesPerSheet * s + r].placement = {2.0 * s, 0};
  }
  auto id = [](int s, int r) { return kPiecesPerSheet * s + r; };
  enum { Bottom = 0, Right = 1, Top = 2, Left = 3 };
  std::vector<Gluing> glue;
  for (int s = 0; s < sheets; ++s) {
    const KleinElement e{};
    glue.push_back({{id(s, 0), Right}, {id(s, 1), Left}, e});
    glue.push_back({{id(s, 0), Top}, {id(s, 2), Bottom}, e});
    glue.push_back({{id(s, 0), Bottom}, {id(s, 2), Top}, e});
    glue.push_back({{id(s, 0), Left}, {id(s, 1), Right}, e});
    // Crossing a scatterer face switches to the reflected copy.
    const int up = coset[(rep[s] * KleinElement::tau_h()).index()];
    glue.push_back({{id(s, 1), Top}, {id(up, 1), Bottom}, KleinElement::tau_h()});
    const int over = coset[(rep[s] * KleinElement::tau_v()).index()];
    glue.push_back({{id(s, 2), Right}, {id(over, 2), Left}, KleinElement::tau_v()});
  }
  return PolygonalSurface(std::move(polys), std::move(glue), sheets);
}

PolygonalSurface build_surface_X(const TableParams& table) { return build_quotient(table, KleinSubgroup::Trivial); }

PolygonalSurface build_surface_L(const TableParams& table) { return build_quotient(table, KleinSubgroup::Whole); }

PolygonalSurface build_torus() {
  std::vector<Polygon> p{rectangle(0, 0, 1, 1, 0, 0)};
  std::vector<Gluing> g{{{0, 0}, {0, 2}, {}}, {{0, 1}, {0, 3}, {}}};
  return PolygonalSurface(std::move(p), std::move(g), 1);
}

std::vector<double> cone_points(const PolygonalSurface& s) {
  const auto& polys = s.polygons();
  std::vector<std::vector<char>> seen(polys.size());
  for (std::size_t i = 0; i < polys.size(); ++i) seen[i].assign(polys[i].size(), 0);
  std::size_t total_corners = 0;
  for (const auto& p : polys) total_corners += p.size();

  std::vector<double> angles;
  for (std::size_t p0 = 0; p0 < polys.size(); ++p0) {
    for (std::size_t v0 = 0; v0 < polys[p0].size(); ++v0) {
      if (seen[p0][v0]) continue;
      double angle = 0;
      int p = static_cast<int>(p0), v = static_cast<int>(v0);
      std::size_t steps = 0;
      do {
        if (++steps > total_corners || seen[p][v]) fail(ErrorCode::GluingError, "vertex cycle does not close");
        seen[p][v] = 1;
        const Polygon& poly = polys[p];
        const std::size_t n = poly.size();
        const Vec2 out = poly.vertices[(v + 1) % n] - poly.vertices[v];
        const Vec2 back = poly.vertices[(v + n - 1) % n] - poly.vertices[v];
        angle += std::atan2(cross(out, back), dot(out, back));
        // Rotate across the incoming edge to the partner's matching corner.
        const EdgeRef f = s.partner({p, static_cast<int>((v + n - 1) % n)});
        p = f.polygon;
        v = f.edge;
      } while (!(p == static_cast<int>(p0) && v == static_cast<int>(v0)));
      angles.push_back(angle);
    }
  }
  std::sort(angles.begin(), angles.end());
  return angles;
}

std::vector<int> stratum_signature(const std::vector<double>& angles) {
  std::vector<int> orders;
  for (double a : angles) {
    const double turns = a / (2 * std::numbers::pi);
    const double r = std::round(turns);
    if (std::fabs(turns - r) > 1e-9 || r < 1) fail(ErrorCode::GluingError, "cone angle is not a multiple of 2*pi");
    orders.push_back(static_cast<int>(r) - 1);
  }
  return orders;
}

int genus(const PolygonalSurface& s) {
  int sum = 0;
  for (int o : stratum_signature(cone_points(s))) sum += o;
  if (sum % 2 != 0) fail(ErrorCode::GluingError, "odd total cone order");
  return (sum + 2) / 2;
}

int euler_genus(const PolygonalSurface& s) {
  const long v = static_cast<long>(cone_points(s).size());
  long e2 = 0;
  for (const auto& p : s.polygons()) e2 += static_cast<long>(p.size());
  const long f = static_cast<long>(s.polygons().size());
  const long chi = v - e2 / 2 + f;
  return static_cast<int>((2 - chi) / 2);
}

std::vector<double> quotient_cone_angles(const TableParams& table, KleinSubgroup h) {
  return cone_points(build_quotient(table, h));
}

namespace {

struct Exit {
  int edge = -1;
  double t = 0;
  Vec2 point;
};

// First exit of the ray p + t*d from a convex polygon.
Exit ray_exit(const Polygon& poly, Vec2 p, Vec2 d) {
  Exit best;
  best.t = std::numeric_limits<double>::infinity();
  const std::size_t n = poly.size();
  for (std::size_t i = 0; i < n; ++i) {
    const Vec2 e = poly.edge_vector(i);
    const double den = cross(d, e);
    if (den == 0) continue;
    const Vec2 w = poly.vertices[i] - p;
    const double t = cross(w, e) / den;
    const double s = cross(w, d) / den;
    if (t > kGeomTol && s >= -kGeomTol && s <= 1 + kGeomTol && t < best.t) {
      if (s < 1e-9 || s > 1 - 1e-9) fail(ErrorCode::NonClosedCurve, "curve runs into a vertex");
      best = {static_cast<int>(i), t, p + d * t};
    }
  }
  if (best.edge < 0) fail(ErrorCode::NonClosedCurve, "ray does not leave the polygon");
  return best;
}

}  // namespace

Curve trace_closed_curve(const PolygonalSurface& s, int polygon, Vec2 start, Vec2 dir, std::string name,
                         int max_segments) {
  Curve c;
  c.name = std::move(name);
  int poly = polygon;
  Vec2 p = start;
  for (int k = 0; k < max_segments; ++k) {
    const Polygon& P = s.polygons()[poly];
    const Exit ex = ray_exit(P, p, dir);
    if (k > 0 && poly == polygon) {
      // Closed if the start point lies on this segment.
      const Vec2 w = start - p;
      const double along = dot(w, dir) / dot(dir, dir);
      if (std::fabs(cross(w, dir)) < 1e-9 && along > -kGeomTol && along <= ex.t + kGeomTol) {
        c.segments.push_back({poly, p, start});
        return c;
      }
    }
    c.segments.push_back({poly, p, ex.point});
    const EdgeRef e{poly, ex.edge};
    p = ex.point + s.gluing_shift(e);
    poly = s.partner(e).polygon;
  }
  fail(ErrorCode::NonClosedCurve, "curve did not close within the segment cap");
}

void validate_closed(const PolygonalSurface& s, const Curve& c) {
  if (c.segments.empty()) fail(ErrorCode::NonClosedCurve, "empty curve");
  const std::size_t n = c.segments.size();
  for (std::size_t k = 0; k < n; ++k) {
    const auto& cur = c.segments[k];
    const auto& next = c.segments[(k + 1) % n];
    if (cur.polygon == next.polygon && near(cur.to, next.from)) continue;
    const Polygon& P = s.polygons()[cur.polygon];
    bool joined = false;
    for (std::size_t i = 0; i < P.size() && !joined; ++i) {
      const Vec2 e = P.edge_vector(i);
      const Vec2 w = cur.to - P.vertices[i];
      const double along = dot(w, e) / dot(e, e);
      if (std::fabs(cross(w, e)) > 1e-9 * std::sqrt(dot(e, e)) || along < -1e-12 || along > 1 + 1e-12) continue;
      const EdgeRef ref{cur.polygon, static_cast<int>(i)};
      if (s.partner(ref).polygon == next.polygon && near(cur.to + s.gluing_shift(ref), next.from)) joined = true;
    }
    if (!joined) fail(ErrorCode::NonClosedCurve, "curve '" + c.name + "' is not closed");
  }
}

Vec2 holonomy(const PolygonalSurface& s, const Curve& c) {
  validate_closed(s, c);
  Vec2 h;
  for (const auto& seg : c.segments) h = h + (seg.to - seg.from);
  return h;
}

std::int64_t intersection_number(const PolygonalSurface& s, const Curve& c1, const Curve& c2) {
  validate_closed(s, c1);
  validate_closed(s, c2);
  std::int64_t n = 0;
  for (const auto& s1 : c1.segments) {
    for (const auto& s2 : c2.segments) {
      if (s1.polygon != s2.polygon) continue;
      const Vec2 d1 = s1.to - s1.from, d2 = s2.to - s2.from;
      const double den = cross(d1, d2);
      if (std::fabs(den) < 1e-15) continue;
      const Vec2 w = s2.from - s1.from;
      const double t = cross(w, d2) / den;
      const double u = cross(w, d1) / den;
      constexpr double eps = 1e-12;
      if (t > eps && t < 1 - eps && u > eps && u < 1 - eps) n += den > 0 ? 1 : -1;
    }
  }
  return n;
}

std::vector<std::vector<std::int64_t>> intersection_matrix(const PolygonalSurface& s,
                                                           const std::vector<Curve>& curves) {
  const std::size_t n = curves.size();
  std::vector<std::vector<std::int64_t>> m(n, std::vector<std::int64_t>(n, 0));
  for (std::size_t i = 0; i < n; ++i)
    for (std::size_t j = 0; j < n; ++j) m[i][j] = intersection_number(s, curves[i], curves[j]);
  return m;
}

std::vector<Curve> homology_generators(const PolygonalSurface& x, const TableParams& table) {
  const double a = table.a, b = table.b;
  std::vector<Curve> g(kGenCount);
  const Vec2 right{1, 0}, up{0, 1};
  for (const auto k : klein_elements()) {
    g[h_gen(k)] = trace_closed_curve(x, x_polygon(k, 0), {(1 - a) / 4, (1 - b) / 2}, right, generator_name(h_gen(k)));
    g[v_gen(k)] = trace_closed_curve(x, x_polygon(k, 0), {(1 - a) / 2, (1 - b) / 4}, up, generator_name(v_gen(k)));
  }
  // c_xj runs through the top pieces of the sheets with e_h = j, c_ix through
  // the right pieces of the sheets with e_v = i.
  for (int j = 0; j < 2; ++j) {
    g[kCx0 + j] = trace_closed_curve(x, x_polygon(KleinElement{0, j}, 2), {(1 - a) / 4, 1 - b / 2}, right,
                                     generator_name(kCx0 + j));
    g[kC0x + j] = trace_closed_curve(x, x_polygon(KleinElement{j, 0}, 1), {1 - a / 2, (1 - b) / 4}, up,
                                     generator_name(kC0x + j));
  }
  return g;
}

IntersectionForm compute_intersection_form(const TableParams& table) {
  const auto x = build_surface_X(table);
  const auto m = intersection_matrix(x, homology_generators(x, table));
  IntersectionForm f{};
  for (int i = 0; i < kGenCount; ++i)
    for (int j = 0; j < kGenCount; ++j) f[i][j] = m[i][j];
  return f;
}

}  // namespace windtree
