#pragma once

#include <cstddef>
#include <string>
#include <vector>

#include "areal/predicates.hpp"

namespace areal::geom {

/// Ring without the repeated closing vertex.
using Ring = std::vector<Point>;

struct Polygon {
  Ring outer;
  std::vector<Ring> holes;

  friend bool operator==(const Polygon&, const Polygon&) = default;
};

using MultiPolygon = std::vector<Polygon>;

struct BBox {
  double minX = 0, minY = 0, maxX = 0, maxY = 0;
  bool empty = true;

  void extend(Point p);
  void extend(const BBox& other);
  bool intersects(const BBox& other) const;
  Point centre() const { return {(minX + maxX) / 2, (minY + maxY) / 2}; }
};

BBox bounds(const Ring& ring);
BBox bounds(const MultiPolygon& mp);

/// Positive for counter-clockwise rings.
double signedArea(const Ring& ring);

/// Area of outers minus holes (orientation-independent).
double area(const MultiPolygon& mp);

std::size_t vertexCount(const MultiPolygon& mp);

/// Ring cleaning equivalent to a zero-width buffer on recoverable input:
/// drops repeated and closing vertices, back-and-forth spikes and zero-area
/// rings, and orients outers counter-clockwise and holes clockwise. Repairs
/// are described in `notes`. Throws DegenerateGeometry when nothing with
/// area remains and InvalidGeometry when edges still cross or overlap.
MultiPolygon cleanGeometry(const MultiPolygon& input, std::vector<std::string>* notes = nullptr);

/// True when no two non-adjacent edges cross, touch along a segment or
/// meet a vertex in an edge's interior.
bool isSimple(const MultiPolygon& mp);

/// Winding-number containment; boundary points count as outside.
bool containsStrictly(const MultiPolygon& mp, Point p);

/// Area of the intersection of two cleaned multipolygons, computed as the
/// boundary integral over the parts of each boundary that lie inside the
/// other. Shared edges count once when both polygons lie on the same side.
double intersectionArea(const MultiPolygon& a, const MultiPolygon& b);

/// area(a ∩ b) / area(a), clamped to [0, 1], in the planar frame the
/// coordinates are given in. Throws DegenerateGeometry for zero-area `a`.
double overlapFraction(const MultiPolygon& a, const MultiPolygon& b);

}  // namespace areal::geom
