#pragma once

#include <cstdint>

#include "windtree/billiard.hpp"

namespace windtree {

struct Rational {
  std::int64_t num = 0;
  std::int64_t den = 1;
  double value() const { return static_cast<double>(num) / static_cast<double>(den); }
};

/// Table whose L-shaped surface is a Veech surface with quadratic trace field:
/// 1/(1-a) = x + y*sqrt(D) and 1/(1-b) = (1-x) + y*sqrt(D).
/// Throws NotSquareFree if D has a square factor, DomainError if D < 1, a
/// denominator is zero, or a or b falls outside (0,1).
TableParams veech_params(Rational x, Rational y, std::int64_t D);

bool is_square_free(std::int64_t n);

}  // namespace windtree
