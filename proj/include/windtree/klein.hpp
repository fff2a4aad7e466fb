#pragma once

#include <array>
#include <cstdint>
#include <string>

namespace windtree {

/// Element of the Klein four-group Z/2 x Z/2, written (e_v, e_h).
///
/// The same type doubles as a sheet label of the four-sheeted unfolding: the
/// sheet (e_v, e_h) is the copy of the fundamental domain reached after an odd
/// number of vertical-wall (resp. horizontal-wall) reflections when e_v = 1
/// (resp. e_h = 1). Index order 00, 01, 10, 11 matches the generator order
/// h00, h01, h10, h11 used by HomologyClass.
class KleinElement {
 public:
  constexpr KleinElement() = default;
  constexpr KleinElement(int v, int h) : bits_(static_cast<std::uint8_t>(((v & 1) << 1) | (h & 1))) {}

  static constexpr KleinElement identity() { return {}; }
  static constexpr KleinElement tau_v() { return {1, 0}; }
  static constexpr KleinElement tau_h() { return {0, 1}; }
  static constexpr KleinElement from_index(int index) { return {(index >> 1) & 1, index & 1}; }

  constexpr int v() const { return (bits_ >> 1) & 1; }
  constexpr int h() const { return bits_ & 1; }
  constexpr int index() const { return bits_; }

  constexpr KleinElement operator*(KleinElement other) const {
    KleinElement r;
    r.bits_ = static_cast<std::uint8_t>(bits_ ^ other.bits_);
    return r;
  }
  constexpr KleinElement& operator*=(KleinElement other) { return *this = *this * other; }
  constexpr bool operator==(const KleinElement&) const = default;

  std::string str() const { return std::string{char('0' + v()), char('0' + h())}; }

 private:
  std::uint8_t bits_ = 0;
};

constexpr std::array<KleinElement, 4> klein_elements() {
  return {KleinElement::from_index(0), KleinElement::from_index(1), KleinElement::from_index(2),
          KleinElement::from_index(3)};
}

/// A real character of K, determined by its values on tau_v and tau_h.
struct Character {
  int on_v = 1;  // chi(tau_v) in {+1,-1}
  int on_h = 1;  // chi(tau_h) in {+1,-1}

  constexpr int operator()(KleinElement g) const {
    return (g.v() && on_v < 0 ? -1 : 1) * (g.h() && on_h < 0 ? -1 : 1);
  }
  constexpr bool trivial() const { return on_v > 0 && on_h > 0; }
  constexpr bool operator==(const Character&) const = default;

  /// "++", "+-", "-+" or "--".
  std::string name() const { return std::string{on_v > 0 ? '+' : '-', on_h > 0 ? '+' : '-'}; }
  /// Position in the order ++, +-, -+, --.
  constexpr int index() const { return (on_v < 0 ? 2 : 0) + (on_h < 0 ? 1 : 0); }
};

constexpr std::array<Character, 4> all_characters() {
  return {Character{1, 1}, Character{1, -1}, Character{-1, 1}, Character{-1, -1}};
}

/// Index-2 subgroups of K plus the trivial group and K itself, used to select
/// quotients of the unfolded surface.
enum class KleinSubgroup { Trivial, TauV, TauH, TauVH, Whole };

constexpr bool subgroup_contains(KleinSubgroup s, KleinElement g) {
  switch (s) {
    case KleinSubgroup::Trivial: return g.index() == 0;
    case KleinSubgroup::TauV: return g.h() == 0;
    case KleinSubgroup::TauH: return g.v() == 0;
    case KleinSubgroup::TauVH: return g.v() == g.h();
    case KleinSubgroup::Whole: return true;
  }
  return false;
}

constexpr int subgroup_order(KleinSubgroup s) {
  return s == KleinSubgroup::Trivial ? 1 : (s == KleinSubgroup::Whole ? 4 : 2);
}

}  // namespace windtree
