#include "windtree/iet.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <numbers>
#include <numeric>

#include "windtree/homology.hpp"

namespace windtree {

IntMatrix IntMatrix::identity(int n) {
  IntMatrix m(n);
  for (int i = 0; i < n; ++i) m(i, i) = 1;
  return m;
}

IntMatrix IntMatrix::operator*(const IntMatrix& o) const {
  if (n_ != o.n_) fail(ErrorCode::InvalidArgument, "matrix size mismatch");
  IntMatrix r(n_);
  for (int i = 0; i < n_; ++i)
    for (int k = 0; k < n_; ++k) {
      const std::int64_t x = (*this)(i, k);
      if (x == 0) continue;
      for (int j = 0; j < n_; ++j) r(i, j) += x * o(k, j);
    }
  return r;
}

std::int64_t IntMatrix::determinant() const {
  std::vector<std::vector<std::int64_t>> m(static_cast<std::size_t>(n_), std::vector<std::int64_t>(n_));
  for (int i = 0; i < n_; ++i)
    for (int j = 0; j < n_; ++j) m[i][j] = (*this)(i, j);
  return integer_determinant(std::move(m));
}

bool IntMatrix::nonnegative() const {
  return std::all_of(a_.begin(), a_.end(), [](std::int64_t x) { return x >= 0; });
}

double LabeledIET::total() const { return std::accumulate(lengths.begin(), lengths.end(), 0.0); }

std::vector<double> LabeledIET::top_positions() const {
  std::vector<double> pos(lengths.size());
  double x = 0;
  for (int s : top) {
    pos[s] = x;
    x += lengths[s];
  }
  return pos;
}

std::vector<double> LabeledIET::bottom_positions() const {
  std::vector<double> pos(lengths.size());
  double x = 0;
  for (int s : bottom) {
    pos[s] = x;
    x += lengths[s];
  }
  return pos;
}

double LabeledIET::apply(double x) const {
  const auto tp = top_positions();
  const auto bp = bottom_positions();
  for (int s : top)
    if (x >= tp[s] && x < tp[s] + lengths[s]) return x - tp[s] + bp[s];
  fail(ErrorCode::DomainError, "point outside the interval");
}

bool LabeledIET::irreducible() const {
  const int d = size();
  std::vector<int> bottom_pos(d);
  for (int k = 0; k < d; ++k) bottom_pos[bottom[k]] = k;
  // Reducible iff some proper prefix of top is mapped onto a prefix of bottom.
  int reach = -1;
  for (int k = 0; k + 1 < d; ++k) {
    reach = std::max(reach, bottom_pos[top[k]]);
    if (reach == k) return false;
  }
  return true;
}

void LabeledIET::validate() const {
  const int d = size();
  if (d < 2) fail(ErrorCode::DomainError, "an IET needs at least two intervals");
  if (static_cast<int>(top.size()) != d || static_cast<int>(bottom.size()) != d ||
      static_cast<int>(labels.size()) != d)
    fail(ErrorCode::DomainError, "IET data sizes disagree");
  for (double l : lengths)
    if (!(l > 0)) fail(ErrorCode::DomainError, "IET lengths must be positive");
  auto check_perm = [d](const std::vector<int>& p) {
    std::vector<char> seen(d, 0);
    for (int s : p) {
      if (s < 0 || s >= d || seen[s]) fail(ErrorCode::DomainError, "IET ordering is not a permutation");
      seen[s] = 1;
    }
  };
  check_perm(top);
  check_perm(bottom);
  if (!irreducible()) fail(ErrorCode::DomainError, "IET permutation is reducible");
}

LabeledIET rotation_iet(double l0, double l1) {
  LabeledIET t;
  t.lengths = {l0, l1};
  t.top = {0, 1};
  t.bottom = {1, 0};
  t.labels = {KleinElement{}, KleinElement{}};
  t.validate();
  return t;
}

namespace {

struct Exit {
  int edge = -1;
  double t = 0;
  double s = 0;  // position along the edge in [0,1]
  Vec2 point;
};

Exit exit_polygon(const Polygon& poly, Vec2 p, Vec2 d) {
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
    if (t > 1e-13 && s >= -1e-9 && s <= 1 + 1e-9 && t < best.t) best = {static_cast<int>(i), t, s, p + d * t};
  }
  if (best.edge < 0) fail(ErrorCode::NonReturning, "flow line does not leave the polygon");
  return best;
}

}  // namespace

LabeledIET first_return_iet(const PolygonalSurface& s, double theta, const ReturnOptions& opts) {
  if (!(theta > 0 && theta < std::numbers::pi / 2)) fail(ErrorCode::DomainError, "direction must lie in (0, pi/2)");
  const Vec2 d{std::cos(theta), std::sin(theta)};
  const Vec2 back = d * -1.0;
  const EdgeRef base{0, 0};
  const Polygon& p0 = s.polygons()[0];
  const Vec2 i0 = p0.vertices[0];
  const Vec2 ie = p0.edge_vector(0);
  if (ie.y != 0 || !(ie.x > 0)) fail(ErrorCode::DomainError, "transversal must be a horizontal bottom edge");
  const double len = ie.x;

  // Backward separatrices: corners whose sector strictly contains -d.
  std::vector<double> cuts;
  for (std::size_t pi = 0; pi < s.polygons().size(); ++pi) {
    const Polygon& poly = s.polygons()[pi];
    const std::size_t n = poly.size();
    for (std::size_t v = 0; v < n; ++v) {
      const Vec2 out = poly.vertices[(v + 1) % n] - poly.vertices[v];
      const Vec2 in = poly.vertices[(v + n - 1) % n] - poly.vertices[v];
      if (!(cross(out, back) > 0 && cross(back, in) > 0)) continue;
      int cur = static_cast<int>(pi);
      Vec2 p = poly.vertices[v];
      for (std::uint64_t k = 0;; ++k) {
        if (k > opts.max_crossings) fail(ErrorCode::NonReturning, "separatrix does not reach the transversal");
        const Exit ex = exit_polygon(s.polygons()[cur], p, back);
        if (ex.s < opts.vertex_tol || ex.s > 1 - opts.vertex_tol)
          fail(ErrorCode::SaddleConnection, "separatrix meets a singular point");
        const EdgeRef e{cur, ex.edge};
        if (e == base) {
          cuts.push_back(ex.point.x - i0.x);
          break;
        }
        p = ex.point + s.gluing_shift(e);
        cur = s.partner(e).polygon;
      }
    }
  }
  std::sort(cuts.begin(), cuts.end());
  for (std::size_t k = 1; k < cuts.size(); ++k)
    if (cuts[k] - cuts[k - 1] < opts.vertex_tol * len)
      fail(ErrorCode::SaddleConnection, "two separatrices meet the transversal at the same point");

  std::vector<double> bounds{0.0};
  bounds.insert(bounds.end(), cuts.begin(), cuts.end());
  bounds.push_back(len);
  const int count = static_cast<int>(bounds.size()) - 1;

  LabeledIET iet;
  iet.lengths.resize(count);
  iet.labels.resize(count);
  iet.return_times.resize(count);
  std::vector<double> image_start(count);
  for (int k = 0; k < count; ++k) {
    const double mid = 0.5 * (bounds[k] + bounds[k + 1]);
    int cur = 0;
    Vec2 p{i0.x + mid, i0.y};
    KleinElement label;
    double time = 0;
    for (std::uint64_t n = 0;; ++n) {
      if (n > opts.max_crossings) fail(ErrorCode::NonReturning, "orbit does not return to the transversal");
      const Exit ex = exit_polygon(s.polygons()[cur], p, d);
      if (ex.s < opts.vertex_tol || ex.s > 1 - opts.vertex_tol)
        fail(ErrorCode::SaddleConnection, "return orbit meets a singular point");
      const EdgeRef e{cur, ex.edge};
      label *= s.deck(e);
      time += ex.t;
      p = ex.point + s.gluing_shift(e);
      cur = s.partner(e).polygon;
      if (s.partner(e) == base) break;
    }
    iet.lengths[k] = bounds[k + 1] - bounds[k];
    iet.labels[k] = label;
    iet.return_times[k] = time;
    image_start[k] = bounds[k] + (p.x - i0.x - mid);
  }
  iet.top.resize(count);
  std::iota(iet.top.begin(), iet.top.end(), 0);
  iet.bottom = iet.top;
  std::sort(iet.bottom.begin(), iet.bottom.end(), [&](int x, int y) { return image_start[x] < image_start[y]; });
  double x = 0;
  for (int sym : iet.bottom) {
    if (std::fabs(image_start[sym] - x) > 1e-9 * len)
      fail(ErrorCode::DomainError, "return images do not tile the transversal");
    x += iet.lengths[sym];
  }
  iet.validate();
  return iet;
}

namespace {

void reset_record(RauzyStepRecord& r, int d) {
  r.steps = 0;
  r.time = 0;
  r.matrix = IntMatrix::identity(d);
  for (auto& m : r.twisted) m = IntMatrix::identity(d);
}

// m <- m * (I + c E_{i,j}): column j += c * column i.
void add_column(IntMatrix& m, int j, int i, std::int64_t c) {
  for (int r = 0; r < m.size(); ++r) m(r, j) += c * m(r, i);
}

}  // namespace

void rauzy_step_inplace(LabeledIET& iet, RauzyStepRecord* record, const InductionOptions& opts) {
  const int d = iet.size();
  const int alpha = iet.top.back();
  const int beta = iet.bottom.back();
  const double la = iet.lengths[alpha];
  const double lb = iet.lengths[beta];
  const double before = iet.total();
  if (std::fabs(la - lb) < opts.tie_tol * before) fail(ErrorCode::TieBreak, "Rauzy step tie between last intervals");
  const KleinElement first = iet.labels[beta];
  const RauzyKind kind = la > lb ? RauzyKind::Top : RauzyKind::Bottom;
  if (kind == RauzyKind::Top) {
    iet.lengths[alpha] = la - lb;
    iet.bottom.pop_back();
    const auto pos = std::find(iet.bottom.begin(), iet.bottom.end(), alpha);
    iet.bottom.insert(pos + 1, beta);
    iet.labels[beta] = iet.labels[beta] * iet.labels[alpha];
    if (!iet.return_times.empty()) iet.return_times[beta] += iet.return_times[alpha];
  } else {
    iet.lengths[beta] = lb - la;
    iet.top.pop_back();
    const auto pos = std::find(iet.top.begin(), iet.top.end(), beta);
    iet.top.insert(pos + 1, alpha);
    iet.labels[alpha] = iet.labels[beta] * iet.labels[alpha];
    if (!iet.return_times.empty()) iet.return_times[alpha] += iet.return_times[beta];
  }
  if (!record) return;
  if (record->matrix.size() != d) reset_record(*record, d);
  if (record->steps == 0) record->kind = kind;
  ++record->steps;
  record->time += std::log(before / (before - std::min(la, lb)));
  if (kind == RauzyKind::Top) {
    add_column(record->matrix, beta, alpha, 1);
    for (const auto chi : all_characters()) add_column(record->twisted[chi.index()], beta, alpha, chi(first));
  } else {
    add_column(record->matrix, alpha, beta, 1);
    for (const auto chi : all_characters()) {
      IntMatrix& m = record->twisted[chi.index()];
      const int c = chi(first);
      for (int r = 0; r < d; ++r) m(r, alpha) = c * m(r, alpha) + m(r, beta);
    }
  }
}

std::pair<LabeledIET, RauzyStepRecord> rauzy_step(const LabeledIET& iet, const InductionOptions& opts) {
  LabeledIET next = iet;
  RauzyStepRecord rec;
  reset_record(rec, iet.size());
  rauzy_step_inplace(next, &rec, opts);
  return {std::move(next), std::move(rec)};
}

void zorich_step_inplace(LabeledIET& iet, RauzyStepRecord& record, const InductionOptions& opts) {
  reset_record(record, iet.size());
  const double total0 = iet.total();
  rauzy_step_inplace(iet, &record, opts);
  const RauzyKind kind = record.kind;
  for (;;) {
    const double la = iet.lengths[iet.top.back()];
    const double lb = iet.lengths[iet.bottom.back()];
    const RauzyKind next = la > lb ? RauzyKind::Top : RauzyKind::Bottom;
    if (next != kind && std::fabs(la - lb) >= opts.tie_tol * iet.total()) break;
    if (record.steps >= opts.max_group) fail(ErrorCode::TieBreak, "Zorich group exceeds the step cap");
    rauzy_step_inplace(iet, &record, opts);
  }
  const double total = iet.total();
  record.time = std::log(total0 / total);
  for (double& l : iet.lengths) l /= total;
}

std::pair<LabeledIET, RauzyStepRecord> zorich_step(const LabeledIET& iet, const InductionOptions& opts) {
  LabeledIET next = iet;
  RauzyStepRecord rec;
  zorich_step_inplace(next, rec, opts);
  return {std::move(next), std::move(rec)};
}

const IntMatrix& twist_matrix(const RauzyStepRecord& record, Character chi) { return record.twisted[chi.index()]; }

}  // namespace windtree
