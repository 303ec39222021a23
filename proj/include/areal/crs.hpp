#pragma once

#include <optional>
#include <string>
#include <string_view>

#include "areal/geometry.hpp"

namespace areal::crs {

/// Supported reference systems. Geographic coordinates are (lon, lat) in
/// degrees; everything else is metres on the WGS84 ellipsoid.
struct Crs {
  enum class Kind { Geographic, WebMercator, Utm, Laea };
  Kind kind = Kind::Geographic;
  int epsg = 4326;  // 0 for the internal equal-area frame
  int zone = 0;
  bool south = false;
  double lon0 = 0, lat0 = 0;  // degrees, Laea only

  friend bool operator==(const Crs&, const Crs&) = default;
};

Crs wgs84();

/// Lambert azimuthal equal-area centred at (lon0, lat0).
Crs laea(double lon0, double lat0);

/// EPSG 4326 (and the WGS84-compatible 4269, 4674), 3857, 32601–32660 and
/// 32701–32760. Throws UnknownSourceCrs otherwise.
Crs fromEpsg(int code);

/// Reads EPSG codes out of names like "EPSG:4326", "urn:ogc:def:crs:EPSG::3857"
/// or the CRS84 urn.
std::optional<int> parseCrsName(std::string_view name);

std::string crsName(int epsg);

geom::Point toGeographic(const Crs& crs, geom::Point p);
geom::Point fromGeographic(const Crs& crs, geom::Point lonLat);

/// Transforms every vertex; the identity transform returns the input as is.
geom::MultiPolygon reproject(const geom::MultiPolygon& g, const Crs& from, const Crs& to);

/// overlapFraction of two WGS84 geometries measured in an equal-area frame
/// centred on `a`.
double geographicOverlapFraction(const geom::MultiPolygon& a, const geom::MultiPolygon& b);

/// Area in square metres of a WGS84 geometry (equal-area frame at its centre).
double geographicArea(const geom::MultiPolygon& g);

}  // namespace areal::crs
