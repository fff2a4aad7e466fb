#include "windtree/homology.hpp"

#include <numeric>
#include <sstream>
#include <stdexcept>

namespace windtree {

const char* generator_name(int g) {
  static constexpr const char* names[kGenCount] = {"h00", "h01", "h10", "h11", "v00", "v01",
                                                   "v10", "v11", "c_x0", "c_x1", "c_0x", "c_1x"};
  return (g >= 0 && g < kGenCount) ? names[g] : "?";
}

HomologyClass HomologyClass::generator(int g, std::int64_t n) {
  HomologyClass c;
  c.coeffs.at(static_cast<std::size_t>(g)) = n;
  return c;
}

HomologyClass make_class(std::initializer_list<std::pair<std::int64_t, int>> terms) {
  HomologyClass c;
  for (const auto& [n, g] : terms) c.coeffs.at(static_cast<std::size_t>(g)) += n;
  return c;
}

std::array<HomologyClass, 2> homology_relations() {
  // c_x0 - c_x1 - (h00 - h01 + h10 - h11) and c_0x - c_1x - (v00 - v10 + v01 - v11).
  return {make_class({{1, kCx0}, {-1, kCx1}, {-1, kH00}, {1, kH01}, {-1, kH10}, {1, kH11}}),
          make_class({{1, kC0x}, {-1, kC1x}, {-1, kV00}, {1, kV10}, {-1, kV01}, {1, kV11}})};
}

HomologyClass HomologyClass::canonical() const {
  HomologyClass r = *this;
  const auto rel = homology_relations();
  // Adding k * relation with k = coefficient of c_x1 clears it.
  const std::int64_t kx = r.coeffs[kCx1];
  r = r + rel[0] * kx;
  const std::int64_t ky = r.coeffs[kC1x];
  r = r + rel[1] * ky;
  return r;
}

HomologyClass HomologyClass::act(KleinElement g) const {
  HomologyClass r;
  for (const auto k : klein_elements()) {
    r.coeffs[h_gen(g * k)] += coeffs[h_gen(k)];
    r.coeffs[v_gen(g * k)] += coeffs[v_gen(k)];
  }
  r.coeffs[kCx0 + g.h()] += coeffs[kCx0];
  r.coeffs[kCx0 + (1 - g.h())] += coeffs[kCx1];
  r.coeffs[kC0x + g.v()] += coeffs[kC0x];
  r.coeffs[kC0x + (1 - g.v())] += coeffs[kC1x];
  return r;
}

bool HomologyClass::is_zero() const {
  const auto c = canonical();
  for (auto x : c.coeffs)
    if (x != 0) return false;
  return true;
}

bool HomologyClass::same_class(const HomologyClass& other) const { return (*this - other).is_zero(); }

std::string HomologyClass::str() const {
  std::ostringstream os;
  bool first = true;
  for (int g = 0; g < kGenCount; ++g) {
    const auto n = coeffs[g];
    if (n == 0) continue;
    if (!first) os << (n > 0 ? " + " : " - ");
    else if (n < 0) os << "-";
    const auto m = n < 0 ? -n : n;
    if (m != 1) os << m << "*";
    os << generator_name(g);
    first = false;
  }
  if (first) os << "0";
  return os.str();
}

HomologyClass HomologyClass::operator+(const HomologyClass& o) const {
  HomologyClass r;
  for (int g = 0; g < kGenCount; ++g) r.coeffs[g] = coeffs[g] + o.coeffs[g];
  return r;
}

HomologyClass HomologyClass::operator-(const HomologyClass& o) const { return *this + (-o); }

HomologyClass HomologyClass::operator-() const { return *this * -1; }

HomologyClass HomologyClass::operator*(std::int64_t k) const {
  HomologyClass r;
  for (int g = 0; g < kGenCount; ++g) r.coeffs[g] = coeffs[g] * k;
  return r;
}

HomologyClass character_component4(const HomologyClass& x, Character chi) {
  HomologyClass r;
  for (const auto g : klein_elements()) r = r + x.act(g) * chi(g);
  return r;
}

std::array<HomologyClass, 4> character_split(const HomologyClass& x) {
  std::array<HomologyClass, 4> out;
  for (const auto chi : all_characters()) out[chi.index()] = character_component4(x, chi);
  return out;
}

WindtreeCocycle windtree_cocycle() {
  return {make_class({{1, kV10}, {1, kV11}, {-1, kV00}, {-1, kV01}}),
          make_class({{1, kH00}, {-1, kH01}, {1, kH10}, {-1, kH11}})};
}

HomologyClass h_total() { return make_class({{1, kH00}, {1, kH01}, {1, kH10}, {1, kH11}}); }

HomologyClass e_minus_minus_class() { return make_class({{1, kH00}, {-1, kH01}, {-1, kH10}, {1, kH11}}); }

std::int64_t intersect(const IntersectionForm& form, const HomologyClass& x, const HomologyClass& y) {
  std::int64_t s = 0;
  for (int i = 0; i < kGenCount; ++i) {
    if (x.coeffs[i] == 0) continue;
    for (int j = 0; j < kGenCount; ++j) s += x.coeffs[i] * form[i][j] * y.coeffs[j];
  }
  return s;
}

int integer_rank(const std::vector<std::vector<std::int64_t>> & m) {
  auto a = m;
  const std::size_t rows = a.size();
  const std::size_t cols = rows ? a[0].size() : 0;
  std::size_t rank = 0;
  for (std::size_t c = 0; c < cols && rank < rows; ++c) {
    std::size_t p = rank;
    while (p < rows && a[p][c] == 0) ++p;
    if (p == rows) continue;
    std::swap(a[p], a[rank]);
    for (std::size_t r = rank + 1; r < rows; ++r) {
      if (a[r][c] == 0) continue;
      const std::int64_t f = a[r][c], g = a[rank][c];
      std::int64_t common = 0;
      for (std::size_t k = 0; k < cols; ++k) {
        a[r][k] = a[r][k] * g - a[rank][k] * f;
        common = std::gcd(common, a[r][k]);
      }
      if (common > 1)
        for (auto& v : a[r]) v /= common;
    }
    ++rank;
  }
  return static_cast<int>(rank);
}

std::int64_t integer_determinant(std::vector<std::vector<std::int64_t>> m) {
  const std::size_t n = m.size();
  for (const auto& row : m)
    if (row.size() != n) throw std::invalid_argument("integer_determinant: matrix not square");
  if (n == 0) return 1;
  // Bareiss fraction-free elimination; every division is exact.
  std::int64_t sign = 1;
  __int128 prev = 1;
  std::vector<std::vector<__int128>> a(n, std::vector<__int128>(n));
  for (std::size_t i = 0; i < n; ++i)
    for (std::size_t j = 0; j < n; ++j) a[i][j] = m[i][j];
  for (std::size_t k = 0; k + 1 < n; ++k) {
    if (a[k][k] == 0) {
      std::size_t p = k + 1;
      while (p < n && a[p][k] == 0) ++p;
      if (p == n) return 0;
      std::swap(a[p], a[k]);
      sign = -sign;
    }
    for (std::size_t i = k + 1; i < n; ++i)
      for (std::size_t j = k + 1; j < n; ++j) a[i][j] = (a[i][j] * a[k][k] - a[i][k] * a[k][j]) / prev;
    prev = a[k][k];
  }
  return sign * static_cast<std::int64_t>(a[n - 1][n - 1]);
}

}  // namespace windtree
