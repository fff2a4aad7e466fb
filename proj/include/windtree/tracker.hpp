#pragma once

#include <array>
#include <cstdint>

#include "windtree/billiard.hpp"
#include "windtree/homology.hpp"
#include "windtree/klein.hpp"

namespace windtree {

/// Signed crossing counts of a trajectory arc gamma with the 12 generator
/// curves: pairing[g] = <g, gamma>.
struct CrossingCounts {
  std::array<std::int64_t, kGenCount> pairing{};

  /// <x, gamma> for any class, by linearity.
  std::int64_t pair(const HomologyClass& x) const;
  /// (<f1, gamma>, <f2, gamma>): the lattice level of the wind-tree cocycle.
  std::array<std::int64_t, 2> level() const;
};

struct TrackerOptions {
  double corner_tol = 1e-12;
  /// Test fixture: vertical walls toggle tau_h and horizontal walls toggle
  /// tau_v. Breaks the displacement bound on purpose.
  bool swap_wall_toggles = false;
};

/// Linear flow on the four-sheeted unfolding, run in L-shaped coordinates
/// (u, w) in [0,1)^2 with the scatterer occupying (1-a,1) x (1-b,1) and a
/// sheet label. Scatterer faces move the flow to the reflected sheet; every
/// crossing of a generator curve is counted.
class SurfaceTracker {
 public:
  /// Starts at the unfolded image of a billiard state: the sheet is
  /// (s_x < 0, s_y < 0) and the flow direction is (cos t, sin t).
  SurfaceTracker(const TableParams& table, const ParticleState& start, const TrackerOptions& opts = {});

  /// Flows for time dt. Throws Error(CornerHit) at a scatterer corner.
  void advance(double dt);

  const CrossingCounts& counts() const { return counts_; }
  std::array<std::int64_t, 2> level() const { return counts_.level(); }
  KleinElement sheet() const { return sheet_; }
  double u() const { return u_; }
  double w() const { return w_; }
  double clock() const { return clock_; }
  std::uint64_t wall_hits() const { return walls_; }

 private:
  void u_event();
  void w_event();

  TableParams table_;
  TrackerOptions opts_;
  double cu_, cw_;  // direction cosines, both >= 0
  std::array<double, 4> ugrid_, wgrid_;
  int ui_ = 0, wi_ = 0;  // index of the next grid line ahead
  double u_ = 0, w_ = 0;
  KleinElement sheet_;
  CrossingCounts counts_;
  double clock_ = 0;
  std::uint64_t walls_ = 0;
};

/// <f, gamma_T(p)> for the billiard trajectory from `start` for time T.
std::array<std::int64_t, 2> track_intersection(const TableParams& table, const ParticleState& start, double T);

}  // namespace windtree
