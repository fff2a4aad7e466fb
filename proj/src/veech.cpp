#include "windtree/veech.hpp"

#include <cmath>
#include <sstream>

namespace windtree {

bool is_square_free(std::int64_t n) {
  if (n < 1) return false;
  for (std::int64_t p = 2; p * p <= n; ++p) {
    if (n % (p * p) == 0) return false;
  }
  return true;
}

TableParams veech_params(Rational x, Rational y, std::int64_t D) {
  if (x.den == 0 || y.den == 0) fail(ErrorCode::DomainError, "zero denominator");
  if (D < 1) fail(ErrorCode::DomainError, "D must be a positive integer");
  if (!is_square_free(D)) fail(ErrorCode::NotSquareFree, "D = " + std::to_string(D) + " is not square-free");
  const long double root = std::sqrt(static_cast<long double>(D));
  const long double xv = static_cast<long double>(x.num) / x.den;
  const long double yv = static_cast<long double>(y.num) / y.den;
  const long double sa = xv + yv * root;
  const long double sb = (1 - xv) + yv * root;
  if (!(sa > 1) || !(sb > 1)) {
    std::ostringstream os;
    os << "parameters give 1/(1-a) = " << static_cast<double>(sa) << ", 1/(1-b) = " << static_cast<double>(sb)
       << "; both must exceed 1";
    fail(ErrorCode::DomainError, os.str());
  }
  const double a = static_cast<double>(1 - 1 / sa);
  const double b = static_cast<double>(1 - 1 / sb);
  return make_table(a, b);
}

}  // namespace windtree
