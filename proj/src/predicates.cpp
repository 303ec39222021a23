#include "areal/predicates.hpp"

#include <array>
#include <cmath>
#include <cstddef>
#include <limits>

namespace areal::geom {
namespace {

constexpr double kEpsilon = 0x1p-53;
constexpr double kErrBound = (3.0 + 16.0 * kEpsilon) * kEpsilon;

struct TwoTerm {
  double hi, lo;
};

TwoTerm twoProduct(double a, double b) {
  const double p = a * b;
  return {p, std::fma(a, b, -p)};
}

TwoTerm twoSum(double a, double b) {
  const double s = a + b;
  const double bv = s - a;
  const double av = s - bv;
  return {s, (a - av) + (b - bv)};
}

/// Sign of the exact sum of `terms`, accumulated as a non-overlapping
/// expansion (Shewchuk's grow-expansion).
int exactSign(const std::array<double, 12>& terms) {
  std::array<double, 13> expansion{};
  std::size_t length = 0;
  for (double b : terms) {
    double q = b;
    std::size_t out = 0;
    for (std::size_t i = 0; i < length; ++i) {
      const auto [s, err] = twoSum(q, expansion[i]);
      q = s;
      if (err != 0) expansion[out++] = err;
    }
    if (q != 0) expansion[out++] = q;
    length = out;
  }
  if (length == 0) return 0;
  return expansion[length - 1] > 0 ? 1 : -1;
}

int exactOrientation(Point a, Point b, Point c) {
  // det = ax*by - ax*cy - cx*by - ay*bx + ay*cx + cy*bx
  const std::array<TwoTerm, 6> products{twoProduct(a.x, b.y),  twoProduct(-a.x, c.y), twoProduct(-c.x, b.y),
                                        twoProduct(-a.y, b.x), twoProduct(a.y, c.x),  twoProduct(c.y, b.x)};
  std::array<double, 12> terms{};
  for (std::size_t i = 0; i < products.size(); ++i) {
    terms[2 * i] = products[i].lo;
    terms[2 * i + 1] = products[i].hi;
  }
  return exactSign(terms);
}

}  // namespace

double orient2d(Point a, Point b, Point c) {
  const double left = (a.x - c.x) * (b.y - c.y);
  const double right = (a.y - c.y) * (b.x - c.x);
  const double det = left - right;
  const double sum = std::fabs(left) + std::fabs(right);
  if (std::fabs(det) >= kErrBound * sum) return det;
  const int sign = exactOrientation(a, b, c);
  if (sign == 0) return 0.0;
  // keep the exact sign even when the rounded determinant disagrees
  if ((det > 0) == (sign > 0) && det != 0) return det;
  return sign * std::numeric_limits<double>::min();
}

int orientation(Point a, Point b, Point c) {
  const double d = orient2d(a, b, c);
  return (d > 0) - (d < 0);
}

}  // namespace areal::geom
