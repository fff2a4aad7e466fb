#pragma once

#include <cstdint>
#include <span>
#include <vector>

#include "windtree/errors.hpp"

namespace windtree {

/// Scatterer geometry: the obstacle at lattice point (i, j) is the closed
/// rectangle [i - a/2, i + a/2] x [j - b/2, j + b/2].
struct TableParams {
  double a = 0.5;
  double b = 0.5;
};

/// Throws DomainError unless 0 < a < 1 and 0 < b < 1.
TableParams make_table(double a, double b);

struct CellIndex {
  std::int64_t i = 0;
  std::int64_t j = 0;
  bool operator==(const CellIndex&) const = default;
};

struct Point2 {
  long double x = 0;
  long double y = 0;
};

/// Billiard state in cell-indexed form. The direction is stored as an
/// immutable base angle with a sign pair, so reflections are exact.
struct ParticleState {
  CellIndex cell;
  double ox = 0;  // offset in [0,1)
  double oy = 0;
  double base_angle = 0;  // in [0, pi/2]
  double cos_t = 1;       // cached cos(base_angle), never recomputed
  double sin_t = 0;
  int sx = 1;
  int sy = 1;
  double clock = 0;

  double vx() const { return sx * cos_t; }
  double vy() const { return sy * sin_t; }
  Point2 position() const {
    return {static_cast<long double>(cell.i) + ox, static_cast<long double>(cell.j) + oy};
  }
};

/// Builds a state at an absolute position. Throws DomainError if the point is
/// strictly inside a scatterer or the angle is outside [0, pi/2].
ParticleState make_state(const TableParams& table, long double x, long double y, double theta,
                         int sx = 1, int sy = 1);

/// Returns true if the absolute point lies strictly inside a scatterer.
bool inside_scatterer(const TableParams& table, long double x, long double y);

enum class EventKind { VerticalWall, HorizontalWall, Corner, HorizonReached };

struct CollisionEvent {
  double time = 0;
  EventKind kind = EventKind::HorizonReached;
  CellIndex cell_hit;  // lattice point of the scatterer, when applicable
};

struct SimOptions {
  /// A face crossing whose perpendicular coordinate lies within this distance
  /// of a scatterer corner is reported as a corner event.
  double corner_tol = 1e-12;
};

/// Earliest wall intersection of the ray from the current position, or
/// HorizonReached when none occurs within `horizon`. Corners are reported as
/// EventKind::Corner rather than thrown.
CollisionEvent next_event(const TableParams& table, const ParticleState& state, double horizon,
                          const SimOptions& opts = {});

/// Moves to the wall of a VerticalWall/HorizontalWall event and flips the
/// matching direction sign.
ParticleState reflect(const TableParams& table, const ParticleState& state, const CollisionEvent& event);

/// Free flight for time t (no collision checks).
void drift(ParticleState& state, double t);

/// Thrown when a trajectory meets a scatterer corner. Carries the state at the
/// moment of the hit.
class CornerHitError : public Error {
 public:
  CornerHitError(const ParticleState& at, double elapsed)
      : Error(ErrorCode::CornerHit, "trajectory hit a scatterer corner"), state_(at), elapsed_(elapsed) {}
  const ParticleState& state() const { return state_; }
  double elapsed() const { return elapsed_; }

 private:
  ParticleState state_;
  double elapsed_;
};

/// Flows for time T, reflecting off walls. `events` (if non-null) is
/// incremented by the number of reflections. Throws CornerHitError.
ParticleState advance(const TableParams& table, ParticleState state, double T,
                      std::uint64_t* events = nullptr, const SimOptions& opts = {});

/// Euclidean displacement between two states, computed from the integer cell
/// difference in extended precision.
long double displacement(const ParticleState& from, const ParticleState& to);
Point2 displacement_vector(const ParticleState& from, const ParticleState& to);

struct DisplacementSample {
  double time = 0;
  long double distance = 0;
  long double running_max = 0;
};

struct DisplacementSeries {
  std::vector<DisplacementSample> samples;
  std::uint64_t events = 0;
  bool truncated = false;  // a corner was hit; samples stop before it
  double truncated_at = 0;
};

/// Distances from the start position at each schedule time, in one pass.
/// Throws InvalidArgument unless the schedule is positive and strictly
/// increasing.
DisplacementSeries displacement_series(const TableParams& table, const ParticleState& start,
                                       std::span<const double> schedule, const SimOptions& opts = {});

/// Fixed-step reference integrator: steps of length `step`, checks scatterer
/// membership after each step and mirrors the penetrating coordinate back
/// across the face it crossed. Independent of next_event. Throws an Error with
/// code CornerHit when a step enters a scatterer through both coordinates at
/// once.
Point2 oracle_raymarch(const TableParams& table, Point2 start, double theta, int sx, int sy, double T,
                       double step);

}  // namespace windtree
