#pragma once

namespace areal::geom {

struct Point {
  double x = 0;
  double y = 0;

  friend bool operator==(const Point&, const Point&) = default;
};

/// Twice the signed area of triangle (a, b, c): positive when c lies left of
/// a→b. The sign is exact (floating-point filter with an exact expansion
/// fallback); the magnitude is the plain floating-point determinant.
double orient2d(Point a, Point b, Point c);

/// -1, 0 or +1.
int orientation(Point a, Point b, Point c);

}  // namespace areal::geom
