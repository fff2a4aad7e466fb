#pragma once

#include <array>
#include <cstdint>
#include <string>
#include <vector>

#include "windtree/billiard.hpp"
#include "windtree/homology.hpp"
#include "windtree/klein.hpp"

namespace windtree {

struct Vec2 {
  double x = 0;
  double y = 0;
  Vec2 operator+(Vec2 o) const { return {x + o.x, y + o.y}; }
  Vec2 operator-(Vec2 o) const { return {x - o.x, y - o.y}; }
  Vec2 operator*(double k) const { return {x * k, y * k}; }
};

inline double cross(Vec2 a, Vec2 b) { return a.x * b.y - a.y * b.x; }
inline double dot(Vec2 a, Vec2 b) { return a.x * b.x + a.y * b.y; }

/// Convex polygon with counter-clockwise vertices. Edge i runs from vertex i
/// to vertex i+1. For the unfolding, rectangle edges are numbered
/// 0 bottom, 1 right, 2 top, 3 left.
struct Polygon {
  std::vector<Vec2> vertices;
  int sheet = 0;  // coset index of the sheet this polygon belongs to
  int piece = 0;  // index of the piece inside its sheet
  Vec2 placement;  // translation used for the dump layout only

  std::size_t size() const { return vertices.size(); }
  Vec2 edge_vector(std::size_t i) const { return vertices[(i + 1) % size()] - vertices[i]; }
  double area() const;
};

struct EdgeRef {
  int polygon = 0;
  int edge = 0;
  bool operator==(const EdgeRef&) const = default;
};

/// Edge `a` glued to edge `b` by translation. `deck` is the sheet change of the
/// covering X -> L when crossing from a to b (the inverse crossing has the same
/// label since every element of K is an involution).
struct Gluing {
  EdgeRef a;
  EdgeRef b;
  KleinElement deck;
};

class PolygonalSurface {
 public:
  /// Validates that every edge is glued exactly once to an edge of equal
  /// length and opposite direction. Throws GluingError otherwise.
  PolygonalSurface(std::vector<Polygon> polygons, std::vector<Gluing> gluings, int sheets);

  const std::vector<Polygon>& polygons() const { return polygons_; }
  const std::vector<Gluing>& gluings() const { return gluings_; }
  int sheet_count() const { return sheets_; }

  EdgeRef partner(EdgeRef e) const;
  KleinElement deck(EdgeRef e) const;
  /// Translation carrying points of edge e onto its partner.
  Vec2 gluing_shift(EdgeRef e) const;
  double area() const;

  /// Structured text: one line per polygon (origin, width, height, sheet) and
  /// one line per gluing pair.
  std::string dump() const;

 private:
  std::size_t slot(EdgeRef e) const;
  std::vector<Polygon> polygons_;
  std::vector<Gluing> gluings_;
  std::vector<std::size_t> offsets_;   // first edge slot of each polygon
  std::vector<EdgeRef> partner_;       // by slot
  std::vector<KleinElement> deck_;     // by slot
  int sheets_ = 1;
};

/// Rectangle pieces of one sheet of the L-shaped table surface, in
/// coordinates shifted so that the scatterer is the top-right corner of the
/// unit square: piece 0 = [0,1-a]x[0,1-b], 1 = [1-a,1]x[0,1-b],
/// 2 = [0,1-a]x[1-b,1].
inline constexpr int kPiecesPerSheet = 3;

/// Quotient X/H of the four-sheeted unfolding by a subgroup H of the deck
/// group. Trivial gives X itself, Whole gives L(a,b).
PolygonalSurface build_quotient(const TableParams& table, KleinSubgroup h);
PolygonalSurface build_surface_X(const TableParams& table);
PolygonalSurface build_surface_L(const TableParams& table);
/// Unit square with opposite sides glued.
PolygonalSurface build_torus();

/// Polygon id of piece r on sheet k of X (sheet index = KleinElement::index()).
inline constexpr int x_polygon(KleinElement k, int piece) { return kPiecesPerSheet * k.index() + piece; }

/// Total angle of every vertex class, sorted ascending. Throws GluingError if
/// a vertex cycle does not close.
std::vector<double> cone_points(const PolygonalSurface& s);
/// Cone angles in units of 2*pi minus one, checked to be integers.
std::vector<int> stratum_signature(const std::vector<double>& angles);
/// Genus from the cone angles: sum of orders = 2g - 2.
int genus(const PolygonalSurface& s);
/// Genus from the Euler characteristic V - E + F of the polygon complex.
int euler_genus(const PolygonalSurface& s);

std::vector<double> quotient_cone_angles(const TableParams& table, KleinSubgroup h);

/// Straight segment inside one polygon, in that polygon's coordinates.
struct CurveSegment {
  int polygon = 0;
  Vec2 from;
  Vec2 to;
};

struct Curve {
  std::string name;
  std::vector<CurveSegment> segments;
};

/// Follows the straight line from an interior point until it closes up.
/// Throws NonClosedCurve if it does not close within max_segments or meets a
/// vertex.
Curve trace_closed_curve(const PolygonalSurface& s, int polygon, Vec2 start, Vec2 dir,
                         std::string name = {}, int max_segments = 1000);

/// Throws NonClosedCurve unless consecutive segments (cyclically) are joined
/// through the gluings.
void validate_closed(const PolygonalSurface& s, const Curve& c);

Vec2 holonomy(const PolygonalSurface& s, const Curve& c);

/// Algebraic intersection number: sum over transverse crossings inside
/// polygons of sign(cross(d1, d2)).
std::int64_t intersection_number(const PolygonalSurface& s, const Curve& c1, const Curve& c2);

std::vector<std::vector<std::int64_t>> intersection_matrix(const PolygonalSurface& s,
                                                           const std::vector<Curve>& curves);

/// Straight representatives of the 12 generators on X, in Gen order.
std::vector<Curve> homology_generators(const PolygonalSurface& x, const TableParams& table);

/// Intersection form of the generators, computed from crossing counts.
IntersectionForm compute_intersection_form(const TableParams& table);

}  // namespace windtree
