#pragma once

#include <array>
#include <cstdint>
#include <string>
#include <utility>
#include <vector>

#include "windtree/klein.hpp"
#include "windtree/surface.hpp"

namespace windtree {

/// Dense square integer matrix, row-major.
class IntMatrix {
 public:
  IntMatrix() = default;
  explicit IntMatrix(int n) : n_(n), a_(static_cast<std::size_t>(n) * n, 0) {}
  static IntMatrix identity(int n);

  int size() const { return n_; }
  std::int64_t& operator()(int i, int j) { return a_[static_cast<std::size_t>(i) * n_ + j]; }
  std::int64_t operator()(int i, int j) const { return a_[static_cast<std::size_t>(i) * n_ + j]; }

  IntMatrix operator*(const IntMatrix& o) const;
  bool operator==(const IntMatrix&) const = default;
  std::int64_t determinant() const;
  bool nonnegative() const;

 private:
  int n_ = 0;
  std::vector<std::int64_t> a_;
};

/// Interval exchange with a deck-group label per interval. Symbols are
/// 0..d-1; `top` lists them in the order of the intervals, `bottom` in the
/// order of their images. Interval k is translated and, on the cover, moves
/// from sheet g to sheet g * labels[k].
struct LabeledIET {
  std::vector<double> lengths;
  std::vector<int> top;
  std::vector<int> bottom;
  std::vector<KleinElement> labels;
  std::vector<double> return_times;  // flow time to first return, when known

  int size() const { return static_cast<int>(lengths.size()); }
  double total() const;
  /// Left endpoint of each symbol's interval and of its image.
  std::vector<double> top_positions() const;
  std::vector<double> bottom_positions() const;
  /// Applies the map to a point of [0, total).
  double apply(double x) const;

  /// Throws DomainError unless lengths are positive, the orderings are
  /// permutations of the same symbols and the permutation is irreducible.
  void validate() const;
  bool irreducible() const;
};

/// Lengths plus swap permutation: the rotation by lengths[1] on a circle.
LabeledIET rotation_iet(double l0, double l1);

struct ReturnOptions {
  double vertex_tol = 1e-11;        // relative position on an edge treated as a vertex
  std::uint64_t max_crossings = 1'000'000;
};

/// First-return map of the linear flow in direction (cos t, sin t),
/// 0 < t < pi/2, to the bottom edge of polygon 0. The discontinuities are the
/// first hits of the backward separatrices of the singular corners. Labels are
/// the products of the gluing deck labels along each return path.
/// Throws SaddleConnection when a separatrix meets a vertex, NonReturning when
/// a path exceeds max_crossings.
LabeledIET first_return_iet(const PolygonalSurface& s, double theta, const ReturnOptions& opts = {});

enum class RauzyKind { Top, Bottom };

/// One or more consecutive Rauzy-Veech steps. `matrix` maps new lengths to old
/// ones (lambda_old = matrix * lambda_new); twisted[c] is the same product in
/// which each elementary step carries the character value of the label that
/// the loser's return word passes first. Heights transform by the transpose.
struct RauzyStepRecord {
  RauzyKind kind = RauzyKind::Top;
  std::uint64_t steps = 0;
  double time = 0;  // Teichmuller time: log(total before / total after)
  IntMatrix matrix;
  std::array<IntMatrix, 4> twisted;  // by Character::index()
};

struct InductionOptions {
  double tie_tol = 1e-14;  // relative to the total length
  std::uint64_t max_group = 1'000'000'000;
};

/// One Rauzy-Veech step. Throws TieBreak when the two last lengths agree
/// within tie_tol * total.
std::pair<LabeledIET, RauzyStepRecord> rauzy_step(const LabeledIET& iet, const InductionOptions& opts = {});

/// All consecutive steps of one kind, then lengths renormalized to total 1.
std::pair<LabeledIET, RauzyStepRecord> zorich_step(const LabeledIET& iet, const InductionOptions& opts = {});

const IntMatrix& twist_matrix(const RauzyStepRecord& record, Character chi);

/// In-place versions used by long induction runs. When `record` is non-null
/// the step is composed into it.
void rauzy_step_inplace(LabeledIET& iet, RauzyStepRecord* record, const InductionOptions& opts = {});
void zorich_step_inplace(LabeledIET& iet, RauzyStepRecord& record, const InductionOptions& opts = {});

}  // namespace windtree
