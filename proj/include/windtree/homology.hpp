#pragma once

#include <array>
#include <cstdint>
#include <initializer_list>
#include <string>
#include <utility>
#include <vector>

#include "windtree/klein.hpp"

namespace windtree {

/// Generator order of the 12-curve presentation of H_1(X; Z).
enum Gen : int {
  kH00 = 0, kH01, kH10, kH11,
  kV00, kV01, kV10, kV11,
  kCx0, kCx1, kC0x, kC1x,
  kGenCount
};

const char* generator_name(int g);

inline constexpr int h_gen(KleinElement k) { return kH00 + k.index(); }
inline constexpr int v_gen(KleinElement k) { return kV00 + k.index(); }

/// Integer combination of the 12 generators. Two vectors represent the same
/// class iff their canonical forms agree.
struct HomologyClass {
  std::array<std::int64_t, kGenCount> coeffs{};

  static HomologyClass generator(int g, std::int64_t n = 1);

  /// Eliminates c_x1 and c_1x using
  ///   c_x0 - c_x1 = h00 - h01 + h10 - h11,
  ///   c_0x - c_1x = v00 - v10 + v01 - v11.
  HomologyClass canonical() const;

  /// Image under a deck transformation: sheet labels are translated by g.
  HomologyClass act(KleinElement g) const;

  bool is_zero() const;
  /// Equality in homology (compares canonical forms).
  bool same_class(const HomologyClass& other) const;
  std::string str() const;

  HomologyClass operator+(const HomologyClass& o) const;
  HomologyClass operator-(const HomologyClass& o) const;
  HomologyClass operator-() const;
  HomologyClass operator*(std::int64_t k) const;
  bool operator==(const HomologyClass&) const = default;
};

/// Builds a class from (coefficient, generator) pairs.
HomologyClass make_class(std::initializer_list<std::pair<std::int64_t, int>> terms);

/// The relation vectors that are zero in homology.
std::array<HomologyClass, 2> homology_relations();

/// 4 * (projection onto the chi-isotypic subspace), i.e. sum_g chi(g) g.x.
/// Integer-valued so that no rational arithmetic is needed.
HomologyClass character_component4(const HomologyClass& x, Character chi);

/// All four components in the order ++, +-, -+, --. They sum to 4x.
std::array<HomologyClass, 4> character_split(const HomologyClass& x);

/// The wind-tree cocycle as a pair of cycles whose pairings with a trajectory
/// give its lattice displacement:
///   f1 = v10 + v11 - v00 - v01   (horizontal level),
///   f2 = h00 - h01 + h10 - h11   (vertical level).
struct WindtreeCocycle {
  HomologyClass f1;
  HomologyClass f2;
};
WindtreeCocycle windtree_cocycle();

/// Sum of the horizontal curves; its pairing with a trajectory counts total
/// vertical progress.
HomologyClass h_total();
/// A class in E^{--}: h00 - h01 - h10 + h11.
HomologyClass e_minus_minus_class();

/// Antisymmetric integer form on the 12 generators.
using IntersectionForm = std::array<std::array<std::int64_t, kGenCount>, kGenCount>;

std::int64_t intersect(const IntersectionForm& form, const HomologyClass& x, const HomologyClass& y);

/// Rank over Q of an integer matrix.
int integer_rank(const std::vector<std::vector<std::int64_t>>& m);
/// Exact determinant of a square integer matrix (fraction-free elimination).
std::int64_t integer_determinant(std::vector<std::vector<std::int64_t>> m);

}  // namespace windtree
