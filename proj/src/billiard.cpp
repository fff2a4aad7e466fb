#include "windtree/billiard.hpp"

#include <cmath>
#include <limits>
#include <numbers>
#include <sstream>

namespace windtree {

namespace {

constexpr double kInf = std::numeric_limits<double>::infinity();

void normalize_axis(double& offset, std::int64_t& cell) {
  const double f = std::floor(offset);
  if (f != 0.0) {
    cell += static_cast<std::int64_t>(f);
    offset -= f;
  }
  if (offset >= 1.0) {
    offset -= 1.0;
    ++cell;
  }
  if (offset < 0.0) {
    offset += 1.0;
    --cell;
    if (offset >= 1.0) {  // -tiny + 1 rounded up
      offset = 0.0;
      ++cell;
    }
  }
}

// Direction cosines with the axis directions represented exactly.
void direction_of(double theta, double& c, double& s) {
  if (theta == 0.0) {
    c = 1.0;
    s = 0.0;
  } else if (theta == std::numbers::pi / 2) {
    c = 0.0;
    s = 1.0;
  } else {
    c = std::cos(theta);
    s = std::sin(theta);
  }
}

}  // namespace

TableParams make_table(double a, double b) {
  if (!(a > 0.0 && a < 1.0) || !(b > 0.0 && b < 1.0)) {
    std::ostringstream os;
    os << "scatterer size must lie in (0,1)^2, got a=" << a << " b=" << b;
    fail(ErrorCode::DomainError, os.str());
  }
  return TableParams{a, b};
}

bool inside_scatterer(const TableParams& table, long double x, long double y) {
  const long double dx = std::fabs(x - std::nearbyint(x));
  const long double dy = std::fabs(y - std::nearbyint(y));
  return dx < table.a / 2 && dy < table.b / 2;
}

ParticleState make_state(const TableParams& table, long double x, long double y, double theta, int sx,
                         int sy) {
  if (!(theta >= 0.0 && theta <= std::numbers::pi / 2)) {
    fail(ErrorCode::DomainError, "base angle must lie in [0, pi/2]");
  }
  if ((sx != 1 && sx != -1) || (sy != 1 && sy != -1)) {
    fail(ErrorCode::InvalidArgument, "direction signs must be +1 or -1");
  }
  if (inside_scatterer(table, x, y)) {
    fail(ErrorCode::DomainError, "start point lies inside a scatterer");
  }
  ParticleState s;
  const long double fx = std::floor(x);
  const long double fy = std::floor(y);
  s.cell = {static_cast<std::int64_t>(fx), static_cast<std::int64_t>(fy)};
  s.ox = static_cast<double>(x - fx);
  s.oy = static_cast<double>(y - fy);
  normalize_axis(s.ox, s.cell.i);
  normalize_axis(s.oy, s.cell.j);
  s.base_angle = theta;
  direction_of(theta, s.cos_t, s.sin_t);
  s.sx = sx;
  s.sy = sy;
  return s;
}

CollisionEvent next_event(const TableParams& table, const ParticleState& state, double horizon,
                          const SimOptions& opts) {
  const double ha = table.a / 2;
  const double hb = table.b / 2;
  const double x = state.ox;
  const double y = state.oy;
  const double vx = state.vx();
  const double vy = state.vy();
  const double tol = opts.corner_tol;

  CollisionEvent horizon_event{horizon, EventKind::HorizonReached, {}};

  // Axis-parallel flight never crosses faces of the parallel family; it is
  // free unless the line runs through a column (row) of scatterers.
  if (vx == 0.0) {
    const double dx = std::fabs(x - std::nearbyint(x));
    if (dx >= ha - tol) return horizon_event;
  }
  if (vy == 0.0) {
    const double dy = std::fabs(y - std::nearbyint(y));
    if (dy >= hb - tol) return horizon_event;
  }

  // Vertical faces facing the motion: x = k - a/2 when moving right,
  // x = k + a/2 when moving left (cell-relative, k integer).
  double kx = 0, ky = 0;
  double stepx = 0, stepy = 0;
  double facex_shift = 0, facey_shift = 0;
  double tx = kInf, ty = kInf;
  if (vx > 0) {
    kx = std::floor(x + ha) + 1;
    stepx = 1;
    facex_shift = -ha;
  } else if (vx < 0) {
    kx = std::ceil(x - ha) - 1;
    stepx = -1;
    facex_shift = ha;
  }
  if (vy > 0) {
    ky = std::floor(y + hb) + 1;
    stepy = 1;
    facey_shift = -hb;
  } else if (vy < 0) {
    ky = std::ceil(y - hb) - 1;
    stepy = -1;
    facey_shift = hb;
  }
  if (vx != 0) tx = (kx + facex_shift - x) / vx;
  if (vy != 0) ty = (ky + facey_shift - y) / vy;

  for (;;) {
    if (tx <= ty) {
      if (tx > horizon) return horizon_event;
      const double yy = y + vy * tx;
      const double m = std::nearbyint(yy);
      const double d = std::fabs(yy - m);
      const CellIndex hit{state.cell.i + static_cast<std::int64_t>(kx),
                          state.cell.j + static_cast<std::int64_t>(m)};
      if (std::fabs(d - hb) <= tol) return {tx, EventKind::Corner, hit};
      if (d < hb) return {tx, EventKind::VerticalWall, hit};
      kx += stepx;
      tx = (kx + facex_shift - x) / vx;
    } else {
      if (ty > horizon) return horizon_event;
      const double xx = x + vx * ty;
      const double m = std::nearbyint(xx);
      const double d = std::fabs(xx - m);
      const CellIndex hit{state.cell.i + static_cast<std::int64_t>(m),
                          state.cell.j + static_cast<std::int64_t>(ky)};
      if (std::fabs(d - ha) <= tol) return {ty, EventKind::Corner, hit};
      if (d < ha) return {ty, EventKind::HorizontalWall, hit};
      ky += stepy;
      ty = (ky + facey_shift - y) / vy;
    }
  }
}

void drift(ParticleState& state, double t) {
  state.ox += state.vx() * t;
  state.oy += state.vy() * t;
  normalize_axis(state.ox, state.cell.i);
  normalize_axis(state.oy, state.cell.j);
  state.clock += t;
}

ParticleState reflect(const TableParams& table, const ParticleState& state, const CollisionEvent& event) {
  ParticleState s = state;
  const double t = event.time;
  if (event.kind == EventKind::VerticalWall) {
    s.oy += s.vy() * t;
    normalize_axis(s.oy, s.cell.j);
    // Land exactly on the face so the position never drifts into the scatterer.
    if (s.sx > 0) {
      s.cell.i = event.cell_hit.i - 1;
      s.ox = 1.0 - table.a / 2;
    } else {
      s.cell.i = event.cell_hit.i;
      s.ox = table.a / 2;
    }
    normalize_axis(s.ox, s.cell.i);
    s.sx = -s.sx;
  } else if (event.kind == EventKind::HorizontalWall) {
    s.ox += s.vx() * t;
    normalize_axis(s.ox, s.cell.i);
    if (s.sy > 0) {
      s.cell.j = event.cell_hit.j - 1;
      s.oy = 1.0 - table.b / 2;
    } else {
      s.cell.j = event.cell_hit.j;
      s.oy = table.b / 2;
    }
    normalize_axis(s.oy, s.cell.j);
    s.sy = -s.sy;
  } else {
    fail(ErrorCode::InvalidArgument, "reflect requires a wall event");
  }
  s.clock += t;
  return s;
}

ParticleState advance(const TableParams& table, ParticleState state, double T, std::uint64_t* events,
                      const SimOptions& opts) {
  if (!(T >= 0)) fail(ErrorCode::InvalidArgument, "advance: T must be non-negative");
  const double clock0 = state.clock;
  double remaining = T;
  std::uint64_t count = 0;
  while (remaining > 0) {
    const CollisionEvent ev = next_event(table, state, remaining, opts);
    if (ev.kind == EventKind::HorizonReached) {
      drift(state, remaining);
      break;
    }
    if (ev.kind == EventKind::Corner) {
      drift(state, ev.time);
      if (events) *events += count;
      throw CornerHitError(state, T - remaining + ev.time);
    }
    state = reflect(table, state, ev);
    remaining -= ev.time;
    ++count;
  }
  state.clock = clock0 + T;
  if (events) *events += count;
  return state;
}

Point2 displacement_vector(const ParticleState& from, const ParticleState& to) {
  const long double dx = static_cast<long double>(to.cell.i - from.cell.i) + (static_cast<long double>(to.ox) - from.ox);
  const long double dy = static_cast<long double>(to.cell.j - from.cell.j) + (static_cast<long double>(to.oy) - from.oy);
  return {dx, dy};
}

long double displacement(const ParticleState& from, const ParticleState& to) {
  const Point2 d = displacement_vector(from, to);
  return std::hypot(d.x, d.y);
}

DisplacementSeries displacement_series(const TableParams& table, const ParticleState& start,
                                       std::span<const double> schedule, const SimOptions& opts) {
  double prev = 0;
  for (double t : schedule) {
    if (!(t > prev)) fail(ErrorCode::InvalidArgument, "schedule must be positive and strictly increasing");
    prev = t;
  }
  DisplacementSeries out;
  out.samples.reserve(schedule.size());
  ParticleState state = start;
  double now = 0;
  long double running = 0;
  for (double t : schedule) {
    try {
      state = advance(table, state, t - now, &out.events, opts);
    } catch (const CornerHitError& e) {
      out.truncated = true;
      out.truncated_at = now + e.elapsed();
      break;
    }
    now = t;
    const long double d = displacement(start, state);
    running = std::max(running, d);
    out.samples.push_back({t, d, running});
  }
  return out;
}

Point2 oracle_raymarch(const TableParams& table, Point2 start, double theta, int sx, int sy, double T,
                       double step) {
  if (!(step > 0)) fail(ErrorCode::InvalidArgument, "oracle_raymarch: step must be positive");
  if (inside_scatterer(table, start.x, start.y)) fail(ErrorCode::DomainError, "start inside scatterer");
  double c, s;
  direction_of(theta, c, s);
  long double vx = sx * c;
  long double vy = sy * s;
  const long double ha = table.a / 2.0L;
  const long double hb = table.b / 2.0L;
  long double x = start.x;
  long double y = start.y;
  long double elapsed = 0;
  while (elapsed < T) {
    const long double h = std::min<long double>(step, T - elapsed);
    const long double nx = x + vx * h;
    const long double ny = y + vy * h;
    if (inside_scatterer(table, nx, ny)) {
      const long double lx = std::nearbyint(nx);
      const long double ly = std::nearbyint(ny);
      const bool was_in_x = std::fabs(x - lx) < ha;
      const bool was_in_y = std::fabs(y - ly) < hb;
      if (was_in_y && !was_in_x) {
        const long double face = vx > 0 ? lx - ha : lx + ha;
        x = 2 * face - nx;
        y = ny;
        vx = -vx;
      } else if (was_in_x && !was_in_y) {
        const long double face = vy > 0 ? ly - hb : ly + hb;
        y = 2 * face - ny;
        x = nx;
        vy = -vy;
      } else {
        fail(ErrorCode::CornerHit, "oracle_raymarch: step entered a scatterer through a corner");
      }
    } else {
      x = nx;
      y = ny;
    }
    elapsed += h;
  }
  return {x, y};
}

const char* error_code_name(ErrorCode code) noexcept {
  switch (code) {
    case ErrorCode::Ok: return "Ok";
    case ErrorCode::DomainError: return "DomainError";
    case ErrorCode::CornerHit: return "CornerHit";
    case ErrorCode::GluingError: return "GluingError";
    case ErrorCode::NonClosedCurve: return "NonClosedCurve";
    case ErrorCode::NotSquareFree: return "NotSquareFree";
    case ErrorCode::SaddleConnection: return "SaddleConnection";
    case ErrorCode::NonReturning: return "NonReturning";
    case ErrorCode::TieBreak: return "TieBreak";
    case ErrorCode::Degenerate: return "Degenerate";
    case ErrorCode::InsufficientData: return "InsufficientData";
    case ErrorCode::RetryExhausted: return "RetryExhausted";
    case ErrorCode::InvalidArgument: return "InvalidArgument";
    case ErrorCode::IoError: return "IoError";
  }
  return "Unknown";
}

}  // namespace windtree
