#include "areal/crs.hpp"

#include <algorithm>
#include <array>
#include <charconv>
#include <cmath>
#include <numbers>

#include "areal/error.hpp"
#include "areal/text.hpp"

namespace areal::crs {

namespace {

constexpr double kA = 6378137.0;
constexpr double kF = 1 / 298.257223563;
constexpr double kDeg = std::numbers::pi / 180;

const double kE2 = kF * (2 - kF);
const double kE = std::sqrt(kE2);

// Krüger series for the transverse Mercator (UTM) projection
struct TmSeries {
  double A;
  std::array<double, 4> alpha, beta, delta;
};

const TmSeries& tm() {
  static const TmSeries s = [] {
    const double n = kF / (2 - kF);
    const double n2 = n * n, n3 = n2 * n, n4 = n3 * n;
    TmSeries t;
    t.A = kA / (1 + n) * (1 + n2 / 4 + n4 / 64);
    t.alpha = {n / 2 - 2 * n2 / 3 + 5 * n3 / 16 + 41 * n4 / 180, 13 * n2 / 48 - 3 * n3 / 5 + 557 * n4 / 1440,
               61 * n3 / 240 - 103 * n4 / 140, 49561 * n4 / 161280};
    t.beta = {n / 2 - 2 * n2 / 3 + 37 * n3 / 96 - n4 / 360, n2 / 48 + n3 / 15 - 437 * n4 / 1440,
              17 * n3 / 480 - 37 * n4 / 840, 4397 * n4 / 161280};
    t.delta = {2 * n - 2 * n2 / 3 - 2 * n3 + 116 * n4 / 45, 7 * n2 / 3 - 8 * n3 / 5 - 227 * n4 / 45,
               56 * n3 / 15 - 136 * n4 / 35, 4279 * n4 / 630};
    return t;
  }();
  return s;
}

constexpr double kUtmK0 = 0.9996;

double utmLon0(int zone) { return (zone * 6 - 183) * kDeg; }

geom::Point utmForward(const Crs& c, geom::Point ll) {
  const auto& s = tm();
  const double phi = ll.y * kDeg;
  const double dl = ll.x * kDeg - utmLon0(c.zone);
  const double k = 2 * std::sqrt(kF / (2 - kF)) / (1 + kF / (2 - kF));
  const double t = std::sinh(std::atanh(std::sin(phi)) - k * std::atanh(k * std::sin(phi)));
  const double xi1 = std::atan2(t, std::cos(dl));
  const double eta1 = std::atanh(std::sin(dl) / std::sqrt(1 + t * t));
  double xi = xi1, eta = eta1;
  for (int j = 1; j <= 4; ++j) {
    xi += s.alpha[j - 1] * std::sin(2 * j * xi1) * std::cosh(2 * j * eta1);
    eta += s.alpha[j - 1] * std::cos(2 * j * xi1) * std::sinh(2 * j * eta1);
  }
  return {500000.0 + kUtmK0 * s.A * eta, (c.south ? 10000000.0 : 0.0) + kUtmK0 * s.A * xi};
}

geom::Point utmInverse(const Crs& c, geom::Point en) {
  const auto& s = tm();
  const double xi = (en.y - (c.south ? 10000000.0 : 0.0)) / (kUtmK0 * s.A);
  const double eta = (en.x - 500000.0) / (kUtmK0 * s.A);
  double xi1 = xi, eta1 = eta;
  for (int j = 1; j <= 4; ++j) {
    xi1 -= s.beta[j - 1] * std::sin(2 * j * xi) * std::cosh(2 * j * eta);
    eta1 -= s.beta[j - 1] * std::cos(2 * j * xi) * std::sinh(2 * j * eta);
  }
  const double chi = std::asin(std::sin(xi1) / std::cosh(eta1));
  double phi = chi;
  for (int j = 1; j <= 4; ++j) phi += s.delta[j - 1] * std::sin(2 * j * chi);
  const double lon = utmLon0(c.zone) + std::atan2(std::sinh(eta1), std::cos(xi1));
  return {lon / kDeg, phi / kDeg};
}

// authalic latitude helpers
double q(double sinPhi) {
  const double es = kE * sinPhi;
  return (1 - kE2) * (sinPhi / (1 - es * es) - std::log((1 - es) / (1 + es)) / (2 * kE));
}

struct LaeaFrame {
  double qp, rq, sinB1, cosB1, d, lon0;
};

LaeaFrame laeaFrame(const Crs& c) {
  LaeaFrame f;
  const double lat0 = std::clamp(c.lat0, -89.9, 89.9) * kDeg;
  f.qp = q(1.0);
  f.rq = kA * std::sqrt(f.qp / 2);
  const double b1 = std::asin(q(std::sin(lat0)) / f.qp);
  f.sinB1 = std::sin(b1);
  f.cosB1 = std::cos(b1);
  const double m1 = std::cos(lat0) / std::sqrt(1 - kE2 * std::sin(lat0) * std::sin(lat0));
  f.d = kA * m1 / (f.rq * f.cosB1);
  f.lon0 = c.lon0 * kDeg;
  return f;
}

geom::Point laeaForward(const Crs& c, geom::Point ll) {
  const auto f = laeaFrame(c);
  const double beta = std::asin(std::clamp(q(std::sin(ll.y * kDeg)) / f.qp, -1.0, 1.0));
  const double dl = ll.x * kDeg - f.lon0;
  const double denom = 1 + f.sinB1 * std::sin(beta) + f.cosB1 * std::cos(beta) * std::cos(dl);
  const double b = f.rq * std::sqrt(2 / std::max(denom, 1e-300));
  return {b * f.d * std::cos(beta) * std::sin(dl),
          (b / f.d) * (f.cosB1 * std::sin(beta) - f.sinB1 * std::cos(beta) * std::cos(dl))};
}

geom::Point laeaInverse(const Crs& c, geom::Point xy) {
  const auto f = laeaFrame(c);
  const double rho = std::hypot(xy.x / f.d, f.d * xy.y);
  if (rho == 0) return {c.lon0, c.lat0};
  const double ce = 2 * std::asin(std::min(1.0, rho / (2 * f.rq)));
  const double qv = f.qp * (std::cos(ce) * f.sinB1 + f.d * xy.y * std::sin(ce) * f.cosB1 / rho);
  const double lon =
      f.lon0 + std::atan2(xy.x * std::sin(ce), f.d * rho * f.cosB1 * std::cos(ce) - f.d * f.d * xy.y * f.sinB1 * std::sin(ce));
  // invert q(φ) by Newton iteration
  double phi = std::asin(std::clamp(qv / 2, -1.0, 1.0));
  for (int i = 0; i < 20; ++i) {
    const double sp = std::sin(phi), cp = std::cos(phi);
    const double es2 = 1 - kE2 * sp * sp;
    const double step = es2 * es2 / (2 * cp) *
                        (qv / (1 - kE2) - sp / es2 + std::log((1 - kE * sp) / (1 + kE * sp)) / (2 * kE));
    phi += step;
    if (std::fabs(step) < 1e-15) break;
  }
  return {lon / kDeg, phi / kDeg};
}

}  // namespace

Crs wgs84() { return {}; }

Crs laea(double lon0, double lat0) {
  Crs c;
  c.kind = Crs::Kind::Laea;
  c.epsg = 0;
  c.lon0 = lon0;
  c.lat0 = lat0;
  return c;
}

Crs fromEpsg(int code) {
  Crs c;
  c.epsg = code;
  if (code == 4326 || code == 4269 || code == 4674) {
    c.kind = Crs::Kind::Geographic;
  } else if (code == 3857) {
    c.kind = Crs::Kind::WebMercator;
  } else if ((code > 32600 && code <= 32660) || (code > 32700 && code <= 32760)) {
    c.kind = Crs::Kind::Utm;
    c.zone = code % 100;
    c.south = code > 32700;
  } else {
    throw Error(Errc::UnknownSourceCrs, "unsupported reference system EPSG:" + std::to_string(code));
  }
  return c;
}

std::optional<int> parseCrsName(std::string_view name) {
  const std::string s = text::lowerAscii(text::trim(name));
  if (s.find("crs84") != std::string::npos) return 4326;
  const auto pos = s.rfind("epsg");
  if (pos == std::string::npos) return std::nullopt;
  std::size_t i = pos + 4;
  // OGC urns may carry a version before the code
  if (const auto last = s.rfind(':'); last != std::string::npos && last >= i) i = last + 1;
  while (i < s.size() && s[i] == ' ') ++i;
  int code = 0;
  const auto [end, ec] = std::from_chars(s.data() + i, s.data() + s.size(), code);
  if (ec != std::errc{} || code <= 0) return std::nullopt;
  if (end != s.data() + s.size()) return std::nullopt;
  return code;
}

std::string crsName(int epsg) { return "EPSG:" + std::to_string(epsg); }

geom::Point toGeographic(const Crs& crs, geom::Point p) {
  switch (crs.kind) {
    case Crs::Kind::Geographic:
      return p;
    case Crs::Kind::WebMercator:
      return {p.x / kA / kDeg, (2 * std::atan(std::exp(p.y / kA)) - std::numbers::pi / 2) / kDeg};
    case Crs::Kind::Utm:
      return utmInverse(crs, p);
    case Crs::Kind::Laea:
      return laeaInverse(crs, p);
  }
  return p;
}

geom::Point fromGeographic(const Crs& crs, geom::Point ll) {
  switch (crs.kind) {
    case Crs::Kind::Geographic:
      return ll;
    case Crs::Kind::WebMercator:
      return {kA * ll.x * kDeg, kA * std::log(std::tan(std::numbers::pi / 4 + ll.y * kDeg / 2))};
    case Crs::Kind::Utm:
      return utmForward(crs, ll);
    case Crs::Kind::Laea:
      return laeaForward(crs, ll);
  }
  return ll;
}

geom::MultiPolygon reproject(const geom::MultiPolygon& g, const Crs& from, const Crs& to) {
  const bool sameGeographic = from.kind == Crs::Kind::Geographic && to.kind == Crs::Kind::Geographic;
  if (from == to || sameGeographic) return g;
  geom::MultiPolygon out = g;
  auto apply = [&](geom::Ring& ring) {
    for (auto& p : ring) p = fromGeographic(to, toGeographic(from, p));
  };
  for (auto& poly : out) {
    apply(poly.outer);
    for (auto& h : poly.holes) apply(h);
  }
  return out;
}

double geographicOverlapFraction(const geom::MultiPolygon& a, const geom::MultiPolygon& b) {
  const auto c = geom::bounds(a).centre();
  const auto frame = laea(c.x, c.y);
  return geom::overlapFraction(reproject(a, wgs84(), frame), reproject(b, wgs84(), frame));
}

double geographicArea(const geom::MultiPolygon& g) {
  const auto c = geom::bounds(g).centre();
  return geom::area(reproject(g, wgs84(), laea(c.x, c.y)));
}

}  // namespace areal::crs
