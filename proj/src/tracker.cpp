#include "windtree/tracker.hpp"

#include <algorithm>
#include <cmath>
#include <limits>

namespace windtree {

std::int64_t CrossingCounts::pair(const HomologyClass& x) const {
  std::int64_t s = 0;
  for (int g = 0; g < kGenCount; ++g) s += x.coeffs[g] * pairing[g];
  return s;
}

std::array<std::int64_t, 2> CrossingCounts::level() const {
  // f1 = v10 + v11 - v00 - v01, f2 = h00 - h01 + h10 - h11
  return {pairing[kV10] + pairing[kV11] - pairing[kV00] - pairing[kV01],
          pairing[kH00] - pairing[kH01] + pairing[kH10] - pairing[kH11]};
}

namespace {

// Image of a billiard coordinate in the unfolded copy selected by the sign,
// shifted so the scatterer sits at the top-right of the unit square.
double unfolded_coordinate(double offset, int sign, double half) {
  double c = sign > 0 ? offset : (offset == 0.0 ? 0.0 : 1.0 - offset);
  c -= half;
  if (c < 0) c += 1.0;
  if (c >= 1.0) c -= 1.0;
  return c;
}

int first_index_above(const std::array<double, 4>& grid, double& x) {
  for (int k = 0; k < 4; ++k) {
    if (std::fabs(x - grid[k]) < 1e-12) x = grid[k] == 1.0 ? 0.0 : grid[k];
  }
  for (int k = 0; k < 4; ++k)
    if (grid[k] > x) return k;
  return 0;
}

bool near_any(double x, double a, double b, double c, double tol) {
  return std::fabs(x - a) <= tol || std::fabs(x - b) <= tol || std::fabs(x - c) <= tol;
}

}  // namespace

SurfaceTracker::SurfaceTracker(const TableParams& table, const ParticleState& start, const TrackerOptions& opts)
    : table_(table), opts_(opts) {
  const double a = table.a, b = table.b;
  cu_ = start.cos_t;
  cw_ = start.sin_t;
  ugrid_ = {(1 - a) / 2, 1 - a, 1 - a / 2, 1.0};
  wgrid_ = {(1 - b) / 2, 1 - b, 1 - b / 2, 1.0};
  u_ = unfolded_coordinate(start.ox, start.sx, a / 2);
  w_ = unfolded_coordinate(start.oy, start.sy, b / 2);
  ui_ = first_index_above(ugrid_, u_);
  wi_ = first_index_above(wgrid_, w_);
  if (u_ > 1 - a && w_ > 1 - b) fail(ErrorCode::DomainError, "tracker start lies inside the scatterer");
  sheet_ = KleinElement{start.sx < 0 ? 1 : 0, start.sy < 0 ? 1 : 0};
}

void SurfaceTracker::u_event() {
  const double b = table_.b;
  const double tol = opts_.corner_tol;
  switch (ui_) {
    case 0:
      u_ = ugrid_[0];
      counts_.pairing[v_gen(sheet_)] -= 1;
      ui_ = 1;
      break;
    case 1:
      if (near_any(w_, 0.0, 1 - b, 1.0, tol)) fail(ErrorCode::CornerHit, "trajectory hit a scatterer corner");
      if (w_ > 1 - b) {
        sheet_ *= opts_.swap_wall_toggles ? KleinElement::tau_h() : KleinElement::tau_v();
        ++walls_;
        u_ = 0;
        ui_ = 0;
      } else {
        u_ = ugrid_[1];
        ui_ = 2;
      }
      break;
    case 2:
      u_ = ugrid_[2];
      counts_.pairing[kC0x + sheet_.v()] -= 1;
      ui_ = 3;
      break;
    default:
      if (near_any(w_, 0.0, 1 - b, 1.0, tol)) fail(ErrorCode::CornerHit, "trajectory hit a scatterer corner");
      u_ = 0;
      ui_ = 0;
      break;
  }
}

void SurfaceTracker::w_event() {
  const double a = table_.a;
  const double tol = opts_.corner_tol;
  switch (wi_) {
    case 0:
      w_ = wgrid_[0];
      counts_.pairing[h_gen(sheet_)] += 1;
      wi_ = 1;
      break;
    case 1:
      if (near_any(u_, 0.0, 1 - a, 1.0, tol)) fail(ErrorCode::CornerHit, "trajectory hit a scatterer corner");
      if (u_ > 1 - a) {
        sheet_ *= opts_.swap_wall_toggles ? KleinElement::tau_v() : KleinElement::tau_h();
        ++walls_;
        w_ = 0;
        wi_ = 0;
      } else {
        w_ = wgrid_[1];
        wi_ = 2;
      }
      break;
    case 2:
      w_ = wgrid_[2];
      counts_.pairing[kCx0 + sheet_.h()] += 1;
      wi_ = 3;
      break;
    default:
      if (near_any(u_, 0.0, 1 - a, 1.0, tol)) fail(ErrorCode::CornerHit, "trajectory hit a scatterer corner");
      w_ = 0;
      wi_ = 0;
      break;
  }
}

void SurfaceTracker::advance(double dt) {
  if (!(dt >= 0)) fail(ErrorCode::InvalidArgument, "tracker: dt must be non-negative");
  constexpr double inf = std::numeric_limits<double>::infinity();
  double remaining = dt;
  for (;;) {
    const double tu = cu_ > 0 ? std::max(0.0, (ugrid_[ui_] - u_) / cu_) : inf;
    const double tw = cw_ > 0 ? std::max(0.0, (wgrid_[wi_] - w_) / cw_) : inf;
    const double t = std::min(tu, tw);
    if (t > remaining) {
      u_ = std::min(u_ + cu_ * remaining, ugrid_[ui_]);
      w_ = std::min(w_ + cw_ * remaining, wgrid_[wi_]);
      clock_ += remaining;
      return;
    }
    remaining -= t;
    clock_ += t;
    if (tu <= tw) {
      w_ = std::min(w_ + cw_ * t, wgrid_[wi_]);
      u_event();
    } else {
      u_ = std::min(u_ + cu_ * t, ugrid_[ui_]);
      w_event();
    }
  }
}

std::array<std::int64_t, 2> track_intersection(const TableParams& table, const ParticleState& start, double T) {
  SurfaceTracker tr(table, start);
  tr.advance(T);
  return tr.level();
}

}  // namespace windtree
