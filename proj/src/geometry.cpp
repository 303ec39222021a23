#include "areal/geometry.hpp"

#include <algorithm>
#include <array>
#include <cmath>
#include <cstdint>

#include "areal/error.hpp"

namespace areal::geom {

void BBox::extend(Point p) {
  if (empty) {
    minX = maxX = p.x;
    minY = maxY = p.y;
    empty = false;
    return;
  }
  minX = std::min(minX, p.x);
  maxX = std::max(maxX, p.x);
  minY = std::min(minY, p.y);
  maxY = std::max(maxY, p.y);
}

void BBox::extend(const BBox& other) {
  if (other.empty) return;
  extend(Point{other.minX, other.minY});
  extend(Point{other.maxX, other.maxY});
}

bool BBox::intersects(const BBox& o) const {
  return !empty && !o.empty && minX <= o.maxX && o.minX <= maxX && minY <= o.maxY && o.minY <= maxY;
}

BBox bounds(const Ring& ring) {
  BBox b;
  for (auto p : ring) b.extend(p);
  return b;
}

BBox bounds(const MultiPolygon& mp) {
  BBox b;
  for (const auto& poly : mp) b.extend(bounds(poly.outer));
  return b;
}

double signedArea(const Ring& ring) {
  double sum = 0;
  const auto n = ring.size();
  for (std::size_t i = 0; i < n; ++i) {
    const auto& p = ring[i];
    const auto& q = ring[(i + 1) % n];
    sum += p.x * q.y - q.x * p.y;
  }
  return sum / 2;
}

double area(const MultiPolygon& mp) {
  double total = 0;
  for (const auto& poly : mp) {
    total += std::fabs(signedArea(poly.outer));
    for (const auto& h : poly.holes) total -= std::fabs(signedArea(h));
  }
  return total;
}

std::size_t vertexCount(const MultiPolygon& mp) {
  std::size_t n = 0;
  for (const auto& poly : mp) {
    n += poly.outer.size();
    for (const auto& h : poly.holes) n += h.size();
  }
  return n;
}

namespace {

struct Edge {
  Point p, q;
  std::uint32_t ring;   // global ring number
  std::uint32_t index;  // position within the ring
  std::uint32_t ringSize;
  BBox box() const {
    BBox b;
    b.extend(p);
    b.extend(q);
    return b;
  }
};

std::vector<Edge> edgesOf(const MultiPolygon& mp) {
  std::vector<Edge> edges;
  std::uint32_t ringNo = 0;
  auto addRing = [&](const Ring& ring) {
    const auto n = static_cast<std::uint32_t>(ring.size());
    for (std::uint32_t i = 0; i < n; ++i) edges.push_back({ring[i], ring[(i + 1) % n], ringNo, i, n});
    ++ringNo;
  };
  for (const auto& poly : mp) {
    addRing(poly.outer);
    for (const auto& h : poly.holes) addRing(h);
  }
  return edges;
}

/// Uniform grid over edge bounding boxes.
class EdgeGrid {
public:
  EdgeGrid(const std::vector<Edge>& edges, BBox extent) : extent_(extent) {
    const double n = static_cast<double>(std::max<std::size_t>(edges.size(), 1));
    const int side = std::clamp(static_cast<int>(std::sqrt(n)), 1, 512);
    nx_ = ny_ = side;
    const double w = extent_.maxX - extent_.minX;
    const double h = extent_.maxY - extent_.minY;
    cellW_ = w > 0 ? w / nx_ : 1;
    cellH_ = h > 0 ? h / ny_ : 1;
    cells_.resize(static_cast<std::size_t>(nx_ * ny_));
    for (std::size_t i = 0; i < edges.size(); ++i) {
      const auto b = edges[i].box();
      const auto [x0, x1, y0, y1] = span(b);
      for (int y = y0; y <= y1; ++y)
        for (int x = x0; x <= x1; ++x) cells_[static_cast<std::size_t>(y * nx_ + x)].push_back(static_cast<std::uint32_t>(i));
    }
    stamp_.assign(edges.size(), 0);
  }

  template <typename F>
  void visit(const BBox& b, F&& f) {
    if (!b.intersects(extent_)) return;
    ++generation_;
    const auto [x0, x1, y0, y1] = span(b);
    for (int y = y0; y <= y1; ++y)
      for (int x = x0; x <= x1; ++x)
        for (auto e : cells_[static_cast<std::size_t>(y * nx_ + x)]) {
          if (stamp_[e] == generation_) continue;
          stamp_[e] = generation_;
          f(e);
        }
  }

private:
  std::array<int, 4> span(const BBox& b) const {
    auto cx = [&](double x) { return std::clamp(static_cast<int>(std::floor((x - extent_.minX) / cellW_)), 0, nx_ - 1); };
    auto cy = [&](double y) { return std::clamp(static_cast<int>(std::floor((y - extent_.minY) / cellH_)), 0, ny_ - 1); };
    return {cx(b.minX), cx(b.maxX), cy(b.minY), cy(b.maxY)};
  }

  BBox extent_;
  int nx_ = 1, ny_ = 1;
  double cellW_ = 1, cellH_ = 1;
  std::vector<std::vector<std::uint32_t>> cells_;
  std::vector<std::uint64_t> stamp_;
  std::uint64_t generation_ = 0;
};

bool onSegment(Point p, Point q, Point r) {
  // r collinear with p→q assumed
  return std::min(p.x, q.x) <= r.x && r.x <= std::max(p.x, q.x) && std::min(p.y, q.y) <= r.y &&
         r.y <= std::max(p.y, q.y);
}

/// Horizontal band index for strict point-in-polygon queries.
class ContainmentIndex {
public:
  explicit ContainmentIndex(const MultiPolygon& mp) : edges_(edgesOf(mp)) {
    box_ = bounds(mp);
    bands_ = std::clamp(static_cast<int>(std::sqrt(static_cast<double>(edges_.size()))), 1, 1024);
    const double h = box_.maxY - box_.minY;
    bandH_ = h > 0 ? h / bands_ : 1;
    buckets_.resize(static_cast<std::size_t>(bands_));
    for (std::size_t i = 0; i < edges_.size(); ++i) {
      const auto& e = edges_[i];
      const int b0 = band(std::min(e.p.y, e.q.y));
      const int b1 = band(std::max(e.p.y, e.q.y));
      for (int b = b0; b <= b1; ++b) buckets_[static_cast<std::size_t>(b)].push_back(static_cast<std::uint32_t>(i));
    }
  }

  bool containsStrictly(Point pt) const {
    if (box_.empty || pt.x < box_.minX || pt.x > box_.maxX || pt.y < box_.minY || pt.y > box_.maxY) return false;
    int winding = 0;
    for (auto i : buckets_[static_cast<std::size_t>(band(pt.y))]) {
      const auto& e = edges_[i];
      const int o = orientation(e.p, e.q, pt);
      if (o == 0 && onSegment(e.p, e.q, pt)) return false;
      if (e.p.y <= pt.y) {
        if (e.q.y > pt.y && o > 0) ++winding;
      } else if (e.q.y <= pt.y && o < 0) {
        --winding;
      }
    }
    return winding != 0;
  }

private:
  int band(double y) const { return std::clamp(static_cast<int>(std::floor((y - box_.minY) / bandH_)), 0, bands_ - 1); }

  std::vector<Edge> edges_;
  BBox box_;
  int bands_ = 1;
  double bandH_ = 1;
  std::vector<std::vector<std::uint32_t>> buckets_;
};

double cross(Point a, Point b) { return a.x * b.y - a.y * b.x; }
Point sub(Point a, Point b) { return {a.x - b.x, a.y - b.y}; }
double dot(Point a, Point b) { return a.x * b.x + a.y * b.y; }

Point at(const Edge& e, double t) {
  if (t <= 0) return e.p;
  if (t >= 1) return e.q;
  return {e.p.x + t * (e.q.x - e.p.x), e.p.y + t * (e.q.y - e.p.y)};
}

void orientRing(Ring& ring, bool ccw) {
  if ((signedArea(ring) > 0) != ccw) std::reverse(ring.begin(), ring.end());
}

MultiPolygon oriented(const MultiPolygon& mp, Point shift) {
  MultiPolygon out = mp;
  for (auto& poly : out) {
    for (auto& p : poly.outer) p = sub(p, shift);
    orientRing(poly.outer, true);
    for (auto& h : poly.holes) {
      for (auto& p : h) p = sub(p, shift);
      orientRing(h, false);
    }
  }
  return out;
}

struct Overlap {
  double t0, t1;
  bool sameDirection;
};

struct EdgeSplits {
  std::vector<double> ts{0.0, 1.0};
  std::vector<Overlap> overlaps;
};

double clamp01(double t) { return std::clamp(t, 0.0, 1.0); }

void recordCollinear(const Edge& e, const Edge& other, EdgeSplits& splits) {
  const Point d = sub(e.q, e.p);
  const double len2 = dot(d, d);
  if (len2 == 0) return;
  const double t0 = clamp01(dot(sub(other.p, e.p), d) / len2);
  const double t1 = clamp01(dot(sub(other.q, e.p), d) / len2);
  const double lo = std::min(t0, t1), hi = std::max(t0, t1);
  if (hi <= lo) return;
  splits.ts.push_back(lo);
  splits.ts.push_back(hi);
  splits.overlaps.push_back({lo, hi, dot(sub(other.q, other.p), d) > 0});
}

void intersectEdges(const Edge& a, const Edge& b, EdgeSplits& sa, EdgeSplits& sb) {
  const int o1 = orientation(a.p, a.q, b.p);
  const int o2 = orientation(a.p, a.q, b.q);
  if (o1 == 0 && o2 == 0) {
    recordCollinear(a, b, sa);
    recordCollinear(b, a, sb);
    return;
  }
  if (o1 * o2 > 0) return;
  const int o3 = orientation(b.p, b.q, a.p);
  const int o4 = orientation(b.p, b.q, a.q);
  if (o3 * o4 > 0) return;
  const Point da = sub(a.q, a.p);
  const Point db = sub(b.q, b.p);
  const double denom = cross(da, db);
  if (denom == 0) return;
  const Point w = sub(b.p, a.p);
  sa.ts.push_back(clamp01(cross(w, db) / denom));
  sb.ts.push_back(clamp01(cross(w, da) / denom));
}

/// Sum of x·dy − y·dx over the sub-segments of `edges` that lie inside
/// `other` (or along a same-direction shared edge when `countShared`).
double boundaryIntegral(const std::vector<Edge>& edges, std::vector<EdgeSplits>& splits,
                        const ContainmentIndex& other, bool countShared) {
  double sum = 0;
  for (std::size_t i = 0; i < edges.size(); ++i) {
    auto& ts = splits[i].ts;
    std::sort(ts.begin(), ts.end());
    ts.erase(std::unique(ts.begin(), ts.end()), ts.end());
    for (std::size_t k = 0; k + 1 < ts.size(); ++k) {
      const double t0 = ts[k], t1 = ts[k + 1];
      const double mid = (t0 + t1) / 2;
      const Overlap* shared = nullptr;
      for (const auto& o : splits[i].overlaps)
        if (o.t0 <= mid && mid <= o.t1) {
          shared = &o;
          if (o.sameDirection) break;
        }
      bool inside;
      if (shared) {
        inside = countShared && shared->sameDirection;
      } else {
        inside = other.containsStrictly(at(edges[i], mid));
      }
      if (!inside) continue;
      const Point p = at(edges[i], t0);
      const Point q = at(edges[i], t1);
      sum += p.x * q.y - q.x * p.y;
    }
  }
  return sum;
}

}  // namespace

bool containsStrictly(const MultiPolygon& mp, Point p) { return ContainmentIndex(mp).containsStrictly(p); }

bool isSimple(const MultiPolygon& mp) {
  const auto edges = edgesOf(mp);
  if (edges.empty()) return true;
  EdgeGrid grid(edges, bounds(mp));
  for (std::size_t i = 0; i < edges.size(); ++i) {
    const auto& a = edges[i];
    bool ok = true;
    grid.visit(a.box(), [&](std::uint32_t j) {
      if (!ok || j <= i) return;
      const auto& b = edges[j];
      const bool sameRing = a.ring == b.ring;
      const bool adjacent = sameRing && (b.index == (a.index + 1) % a.ringSize || a.index == (b.index + 1) % a.ringSize);
      const int o1 = orientation(a.p, a.q, b.p);
      const int o2 = orientation(a.p, a.q, b.q);
      if (adjacent) {
        // consecutive edges may only share their common vertex
        const Point shared = (a.q == b.p) ? a.q : a.p;
        const Point far = (a.q == b.p) ? b.q : b.p;
        const Point back = (a.q == b.p) ? a.p : a.q;
        if (orientation(back, shared, far) == 0 && dot(sub(far, shared), sub(back, shared)) > 0) ok = false;
        if (a.ringSize == 2) ok = false;
        return;
      }
      if (o1 == 0 && o2 == 0) {
        if (onSegment(a.p, a.q, b.p) || onSegment(a.p, a.q, b.q) || onSegment(b.p, b.q, a.p) ||
            onSegment(b.p, b.q, a.q)) {
          // collinear segments meeting in more than a shared endpoint overlap
          const bool endpointOnly = (a.p == b.p || a.p == b.q || a.q == b.p || a.q == b.q);
          const Point da = sub(a.q, a.p);
          const double lo = std::min(dot(sub(b.p, a.p), da), dot(sub(b.q, a.p), da));
          const double hi = std::max(dot(sub(b.p, a.p), da), dot(sub(b.q, a.p), da));
          const double len2 = dot(da, da);
          const double overlap = std::min(hi, len2) - std::max(lo, 0.0);
          if (!endpointOnly || overlap > 0) ok = false;
          else if (sameRing) ok = false;
        }
        return;
      }
      const int o3 = orientation(b.p, b.q, a.p);
      const int o4 = orientation(b.p, b.q, a.q);
      if (o1 * o2 > 0 || o3 * o4 > 0) return;
      const bool sharesVertex = (a.p == b.p || a.p == b.q || a.q == b.p || a.q == b.q);
      if (sharesVertex && !sameRing) return;  // rings may touch at a vertex
      ok = false;
    });
    if (!ok) return false;
  }
  return true;
}

MultiPolygon cleanGeometry(const MultiPolygon& input, std::vector<std::string>* notes) {
  auto note = [&](std::string s) {
    if (notes) notes->push_back(std::move(s));
  };
  auto cleanRing = [&](Ring ring) -> Ring {
    Ring out;
    for (auto p : ring) {
      if (!std::isfinite(p.x) || !std::isfinite(p.y)) throw Error(Errc::InvalidGeometry, "non-finite coordinate");
      if (out.empty() || !(out.back() == p)) out.push_back(p);
    }
    if (out.size() > 1 && out.front() == out.back()) out.pop_back();
    bool changed = true;
    while (changed && out.size() >= 3) {
      changed = false;
      for (std::size_t i = 0; i < out.size() && out.size() >= 3; ++i) {
        const auto n = out.size();
        const Point prev = out[(i + n - 1) % n], cur = out[i], next = out[(i + 1) % n];
        const bool duplicate = prev == next || cur == next;
        const bool straight = orientation(prev, cur, next) == 0;
        if (duplicate || straight) {
          out.erase(out.begin() + static_cast<std::ptrdiff_t>(i));
          if (duplicate || dot(sub(cur, prev), sub(next, cur)) < 0) note("removed spike or repeated vertex");
          changed = true;
          break;
        }
      }
    }
    // any ring left has a non-collinear vertex; a bowtie's cancelling halves
    // are caught by the simplicity check below
    if (out.size() < 3) return {};
    return out;
  };

  MultiPolygon result;
  for (const auto& poly : input) {
    Polygon cleaned;
    cleaned.outer = cleanRing(poly.outer);
    if (cleaned.outer.empty()) {
      note("dropped polygon with degenerate outer ring");
      continue;
    }
    orientRing(cleaned.outer, true);
    for (const auto& h : poly.holes) {
      auto ring = cleanRing(h);
      if (ring.empty()) {
        note("dropped degenerate hole");
        continue;
      }
      orientRing(ring, false);
      cleaned.holes.push_back(std::move(ring));
    }
    result.push_back(std::move(cleaned));
  }
  if (result.empty()) throw Error(Errc::DegenerateGeometry, "geometry has no area");
  if (!isSimple(result)) throw Error(Errc::InvalidGeometry, "rings cross or overlap themselves or each other");
  if (area(result) <= 0) throw Error(Errc::DegenerateGeometry, "geometry has no area");
  return result;
}

double intersectionArea(const MultiPolygon& aIn, const MultiPolygon& bIn) {
  const auto boxA = bounds(aIn);
  const auto boxB = bounds(bIn);
  if (!boxA.intersects(boxB)) return 0;
  const Point shift = boxA.centre();
  const auto a = oriented(aIn, shift);
  const auto b = oriented(bIn, shift);
  const auto edgesA = edgesOf(a);
  const auto edgesB = edgesOf(b);
  std::vector<EdgeSplits> splitsA(edgesA.size()), splitsB(edgesB.size());

  BBox extent = bounds(b);
  EdgeGrid grid(edgesB, extent);
  for (std::size_t i = 0; i < edgesA.size(); ++i)
    grid.visit(edgesA[i].box(), [&](std::uint32_t j) {
      if (edgesA[i].box().intersects(edgesB[j].box())) intersectEdges(edgesA[i], edgesB[j], splitsA[i], splitsB[j]);
    });

  const ContainmentIndex inA(a), inB(b);
  const double twice = boundaryIntegral(edgesA, splitsA, inB, true) + boundaryIntegral(edgesB, splitsB, inA, false);
  return std::max(0.0, twice / 2);
}

double overlapFraction(const MultiPolygon& a, const MultiPolygon& b) {
  const auto shift = bounds(a).centre();
  const double areaA = area(oriented(a, shift));
  if (!(areaA > 0)) throw Error(Errc::DegenerateGeometry, "overlap reference geometry has zero area");
  return std::clamp(intersectionArea(a, b) / areaA, 0.0, 1.0);
}

}  // namespace areal::geom
