#include "areal/vector_io.hpp"

#include <sqlite3.h>

#include <algorithm>
#include <bit>
#include <cmath>
#include <cstdint>
#include <cstring>
#include <fstream>
#include <nlohmann/json.hpp>
#include <memory>
#include <set>

#include "areal/crs.hpp"
#include "areal/csv.hpp"
#include "areal/error.hpp"
#include "areal/text.hpp"

namespace areal::vec {

namespace fs = std::filesystem;
using json = nlohmann::ordered_json;

std::optional<std::size_t> FeatureCollection::field(std::string_view name) const {
  for (std::size_t i = 0; i < fields.size(); ++i)
    if (fields[i].name == name) return i;
  return std::nullopt;
}

const std::string& FeatureCollection::value(std::size_t feature, std::string_view name) const {
  const auto i = field(name);
  if (!i) throw Error(Errc::NameColumnMissing, "layer '" + layer + "' has no attribute '" + std::string(name) + "'");
  return features.at(feature).values.at(*i);
}

Format formatOf(const fs::path& path) {
  const auto ext = text::lowerAscii(path.extension().string());
  if (ext == ".gpkg") return Format::GeoPackage;
  if (ext == ".geojson" || ext == ".json") return Format::GeoJson;
  throw Error(Errc::UnreadableGeometry, path.string() + ": unsupported vector format '" + ext + "'");
}

std::string_view extensionOf(Format format) { return format == Format::GeoPackage ? "gpkg" : "geojson"; }

namespace {

[[noreturn]] void unreadable(const fs::path& path, const std::string& what) {
  throw Error(Errc::UnreadableGeometry, path.string() + ": " + what);
}

geom::Ring openRing(geom::Ring ring) {
  if (ring.size() > 1 && ring.front() == ring.back()) ring.pop_back();
  return ring;
}

// --- WKB ---------------------------------------------------------------------

class WkbReader {
public:
  WkbReader(const unsigned char* data, std::size_t size) : data_(data), size_(size) {}

  geom::MultiPolygon geometry() {
    geom::MultiPolygon out;
    readGeometry(out, 0);
    return out;
  }

  std::size_t offset() const { return pos_; }

private:
  void need(std::size_t n) const {
    if (pos_ + n > size_) throw std::runtime_error("truncated geometry blob");
  }
  std::uint32_t u32(bool little) {
    need(4);
    std::uint32_t v;
    std::memcpy(&v, data_ + pos_, 4);
    pos_ += 4;
    if (little != (std::endian::native == std::endian::little)) v = __builtin_bswap32(v);
    return v;
  }
  double f64(bool little) {
    need(8);
    std::uint64_t v;
    std::memcpy(&v, data_ + pos_, 8);
    pos_ += 8;
    if (little != (std::endian::native == std::endian::little)) v = __builtin_bswap64(v);
    return std::bit_cast<double>(v);
  }

  void readGeometry(geom::MultiPolygon& out, int depth) {
    if (depth > 4) throw std::runtime_error("geometry nesting too deep");
    need(1);
    const bool little = data_[pos_++] == 1;
    std::uint32_t type = u32(little);
    int dims = 2;
    if (type & 0x80000000u) ++dims;
    if (type & 0x40000000u) ++dims;
    if (type & 0x20000000u) u32(little);  // EWKB srid
    type &= 0x0fffffffu;
    if (type >= 1000) {
      const auto flavour = type / 1000;
      dims = flavour == 3 ? 4 : 3;
      type %= 1000;
    }
    auto ring = [&]() {
      const auto n = u32(little);
      geom::Ring r;
      r.reserve(n);
      for (std::uint32_t i = 0; i < n; ++i) {
        const double x = f64(little), y = f64(little);
        for (int d = 2; d < dims; ++d) f64(little);
        r.push_back({x, y});
      }
      return openRing(std::move(r));
    };
    if (type == 3) {
      const auto nr = u32(little);
      geom::Polygon poly;
      for (std::uint32_t i = 0; i < nr; ++i) {
        auto r = ring();
        if (i == 0) poly.outer = std::move(r);
        else poly.holes.push_back(std::move(r));
      }
      if (nr > 0) out.push_back(std::move(poly));
    } else if (type == 6 || type == 7) {
      const auto n = u32(little);
      for (std::uint32_t i = 0; i < n; ++i) readGeometry(out, depth + 1);
    } else {
      throw std::runtime_error("geometry type " + std::to_string(type) + " is not polygonal");
    }
  }

  const unsigned char* data_;
  std::size_t size_;
  std::size_t pos_ = 0;
};

void putU32(std::string& out, std::uint32_t v) {
  if constexpr (std::endian::native != std::endian::little) v = __builtin_bswap32(v);
  out.append(reinterpret_cast<const char*>(&v), 4);
}
void putF64(std::string& out, double d) {
  auto v = std::bit_cast<std::uint64_t>(d);
  if constexpr (std::endian::native != std::endian::little) v = __builtin_bswap64(v);
  out.append(reinterpret_cast<const char*>(&v), 8);
}

std::string gpkgBlob(const geom::MultiPolygon& g, int srsId) {
  std::string out = "GP";
  out.push_back(0);
  const auto box = geom::bounds(g);
  const bool empty = g.empty();
  out.push_back(static_cast<char>(0x01 | (empty ? 0x10 : 0x02)));  // little endian, xy envelope
  putU32(out, static_cast<std::uint32_t>(srsId));
  if (!empty) {
    putF64(out, box.minX);
    putF64(out, box.maxX);
    putF64(out, box.minY);
    putF64(out, box.maxY);
  }
  out.push_back(1);
  putU32(out, 6);
  putU32(out, static_cast<std::uint32_t>(g.size()));
  auto ring = [&](const geom::Ring& r) {
    putU32(out, static_cast<std::uint32_t>(r.size() + 1));
    for (auto p : r) {
      putF64(out, p.x);
      putF64(out, p.y);
    }
    putF64(out, r.front().x);
    putF64(out, r.front().y);
  };
  for (const auto& poly : g) {
    out.push_back(1);
    putU32(out, 3);
    putU32(out, static_cast<std::uint32_t>(1 + poly.holes.size()));
    ring(poly.outer);
    for (const auto& h : poly.holes) ring(h);
  }
  return out;
}

geom::MultiPolygon parseGpkgBlob(const unsigned char* data, std::size_t size) {
  if (size < 8 || data[0] != 'G' || data[1] != 'P') throw std::runtime_error("not a GeoPackage geometry blob");
  const unsigned flags = data[3];
  const unsigned envelope = (flags >> 1) & 0x7;
  static constexpr std::size_t kEnvelopeSize[] = {0, 32, 48, 48, 64};
  if (envelope > 4) throw std::runtime_error("bad envelope code");
  if (flags & 0x10) return {};
  const std::size_t header = 8 + kEnvelopeSize[envelope];
  if (size < header) throw std::runtime_error("truncated geometry blob");
  return WkbReader(data + header, size - header).geometry();
}

// --- sqlite ------------------------------------------------------------------

struct DbCloser {
  void operator()(sqlite3* db) const { sqlite3_close(db); }
};
struct StmtCloser {
  void operator()(sqlite3_stmt* s) const { sqlite3_finalize(s); }
};
using DbPtr = std::unique_ptr<sqlite3, DbCloser>;
using StmtPtr = std::unique_ptr<sqlite3_stmt, StmtCloser>;

std::string quoteIdent(std::string_view name) {
  std::string out = "\"";
  for (char c : name) {
    if (c == '"') out += '"';
    out += c;
  }
  return out + '"';
}

DbPtr openDb(const fs::path& path, bool writable) {
  sqlite3* raw = nullptr;
  const int flags = writable ? (SQLITE_OPEN_READWRITE | SQLITE_OPEN_CREATE) : SQLITE_OPEN_READONLY;
  const int rc = sqlite3_open_v2(path.c_str(), &raw, flags, nullptr);
  DbPtr db(raw);
  if (rc != SQLITE_OK) unreadable(path, std::string("cannot open: ") + (raw ? sqlite3_errmsg(raw) : "out of memory"));
  sqlite3_busy_timeout(raw, 5000);
  return db;
}

StmtPtr prepare(sqlite3* db, const std::string& sql) {
  sqlite3_stmt* s = nullptr;
  if (sqlite3_prepare_v2(db, sql.c_str(), -1, &s, nullptr) != SQLITE_OK)
    throw std::runtime_error(std::string(sqlite3_errmsg(db)) + " in: " + sql);
  return StmtPtr(s);
}

void exec(sqlite3* db, const std::string& sql) {
  char* err = nullptr;
  if (sqlite3_exec(db, sql.c_str(), nullptr, nullptr, &err) != SQLITE_OK) {
    std::string msg = err ? err : "sqlite error";
    sqlite3_free(err);
    throw Error(Errc::Io, msg + " in: " + sql);
  }
}

std::string columnText(sqlite3_stmt* s, int i) {
  const auto* t = sqlite3_column_text(s, i);
  return t ? std::string(reinterpret_cast<const char*>(t), static_cast<std::size_t>(sqlite3_column_bytes(s, i))) : "";
}

FieldType sqlType(std::string declared) {
  declared = text::lowerAscii(declared);
  if (declared.find("int") != std::string::npos) return FieldType::Integer;
  if (declared.find("real") != std::string::npos || declared.find("double") != std::string::npos ||
      declared.find("float") != std::string::npos || declared.find("numeric") != std::string::npos)
    return FieldType::Real;
  return FieldType::Text;
}

std::string_view sqlTypeName(FieldType t) {
  switch (t) {
    case FieldType::Integer:
      return "INTEGER";
    case FieldType::Real:
      return "REAL";
    case FieldType::Text:
      break;
  }
  return "TEXT";
}

FeatureCollection readGpkg(const fs::path& path, std::string_view layer) {
  auto db = openDb(path, false);
  FeatureCollection fc;
  try {
    std::string sql = "SELECT c.table_name, g.column_name, g.srs_id FROM gpkg_contents c "
                      "JOIN gpkg_geometry_columns g ON g.table_name = c.table_name "
                      "WHERE c.data_type = 'features'";
    if (!layer.empty()) sql += " AND c.table_name = ?";
    sql += " ORDER BY c.rowid LIMIT 1";
    auto st = prepare(db.get(), sql);
    if (!layer.empty()) sqlite3_bind_text(st.get(), 1, layer.data(), static_cast<int>(layer.size()), SQLITE_TRANSIENT);
    if (sqlite3_step(st.get()) != SQLITE_ROW)
      unreadable(path, layer.empty() ? "no feature layer" : "no feature layer '" + std::string(layer) + "'");
    fc.layer = columnText(st.get(), 0);
    const std::string geomColumn = columnText(st.get(), 1);
    const int srsId = sqlite3_column_int(st.get(), 2);

    if (srsId > 0) {
      auto srs = prepare(db.get(), "SELECT organization, organization_coordsys_id FROM gpkg_spatial_ref_sys WHERE srs_id = ?");
      sqlite3_bind_int(srs.get(), 1, srsId);
      if (sqlite3_step(srs.get()) == SQLITE_ROW && text::lowerAscii(columnText(srs.get(), 0)) == "epsg")
        fc.epsg = sqlite3_column_int(srs.get(), 1);
    }

    auto info = prepare(db.get(), "PRAGMA table_info(" + quoteIdent(fc.layer) + ")");
    std::vector<std::string> selected;
    while (sqlite3_step(info.get()) == SQLITE_ROW) {
      const std::string name = columnText(info.get(), 1);
      const bool pk = sqlite3_column_int(info.get(), 5) != 0;
      if (pk || name == geomColumn) continue;
      fc.fields.push_back({name, sqlType(columnText(info.get(), 2))});
      selected.push_back(quoteIdent(name));
    }
    std::string query = "SELECT " + quoteIdent(geomColumn);
    for (const auto& s : selected) query += ", " + s;
    query += " FROM " + quoteIdent(fc.layer) + " ORDER BY rowid";
    auto rows = prepare(db.get(), query);
    int rc;
    while ((rc = sqlite3_step(rows.get())) == SQLITE_ROW) {
      Feature f;
      if (sqlite3_column_type(rows.get(), 0) != SQLITE_NULL) {
        const auto* blob = static_cast<const unsigned char*>(sqlite3_column_blob(rows.get(), 0));
        f.geometry = parseGpkgBlob(blob, static_cast<std::size_t>(sqlite3_column_bytes(rows.get(), 0)));
      }
      for (std::size_t i = 0; i < selected.size(); ++i) f.values.push_back(columnText(rows.get(), static_cast<int>(i + 1)));
      fc.features.push_back(std::move(f));
    }
    if (rc != SQLITE_DONE) unreadable(path, sqlite3_errmsg(db.get()));
  } catch (const Error&) {
    throw;
  } catch (const std::exception& e) {
    unreadable(path, e.what());
  }
  return fc;
}

void ensureSrs(sqlite3* db, int srsId) {
  auto st = prepare(db, "SELECT 1 FROM gpkg_spatial_ref_sys WHERE srs_id = ?");
  sqlite3_bind_int(st.get(), 1, srsId);
  if (sqlite3_step(st.get()) == SQLITE_ROW) return;
  auto ins = prepare(db, "INSERT INTO gpkg_spatial_ref_sys (srs_name, srs_id, organization, organization_coordsys_id, "
                         "definition) VALUES (?, ?, 'EPSG', ?, 'undefined')");
  const std::string name = crs::crsName(srsId);
  sqlite3_bind_text(ins.get(), 1, name.c_str(), -1, SQLITE_TRANSIENT);
  sqlite3_bind_int(ins.get(), 2, srsId);
  sqlite3_bind_int(ins.get(), 3, srsId);
  sqlite3_step(ins.get());
}

void createGpkg(sqlite3* db) {
  exec(db, "PRAGMA application_id = 1196444487");
  exec(db, "PRAGMA user_version = 10200");
  exec(db,
       "CREATE TABLE gpkg_spatial_ref_sys (srs_name TEXT NOT NULL, srs_id INTEGER PRIMARY KEY, organization TEXT NOT "
       "NULL, organization_coordsys_id INTEGER NOT NULL, definition TEXT NOT NULL, description TEXT)");
  exec(db,
       "INSERT INTO gpkg_spatial_ref_sys VALUES "
       "('Undefined cartesian SRS', -1, 'NONE', -1, 'undefined', NULL), "
       "('Undefined geographic SRS', 0, 'NONE', 0, 'undefined', NULL), "
       "('WGS 84 geodetic', 4326, 'EPSG', 4326, 'GEOGCS[\"WGS 84\",DATUM[\"WGS_1984\",SPHEROID[\"WGS "
       "84\",6378137,298.257223563,AUTHORITY[\"EPSG\",\"7030\"]],AUTHORITY[\"EPSG\",\"6326\"]],PRIMEM[\"Greenwich\",0,"
       "AUTHORITY[\"EPSG\",\"8901\"]],UNIT[\"degree\",0.0174532925199433,AUTHORITY[\"EPSG\",\"9122\"]],AUTHORITY[\"EPSG\","
       "\"4326\"]]', NULL)");
  exec(db,
       "CREATE TABLE gpkg_contents (table_name TEXT NOT NULL PRIMARY KEY, data_type TEXT NOT NULL, identifier TEXT "
       "UNIQUE, description TEXT DEFAULT '', last_change DATETIME NOT NULL DEFAULT "
       "(strftime('%Y-%m-%dT%H:%M:%fZ','now')), min_x DOUBLE, min_y DOUBLE, max_x DOUBLE, max_y DOUBLE, srs_id INTEGER, "
       "CONSTRAINT fk_gc_r_srs_id FOREIGN KEY (srs_id) REFERENCES gpkg_spatial_ref_sys(srs_id))");
  exec(db,
       "CREATE TABLE gpkg_geometry_columns (table_name TEXT NOT NULL, column_name TEXT NOT NULL, geometry_type_name "
       "TEXT NOT NULL, srs_id INTEGER NOT NULL, z TINYINT NOT NULL, m TINYINT NOT NULL, CONSTRAINT pk_geom_cols "
       "PRIMARY KEY (table_name, column_name))");
}

bool hasTable(sqlite3* db, std::string_view name) {
  auto st = prepare(db, "SELECT 1 FROM sqlite_master WHERE type = 'table' AND name = ?");
  sqlite3_bind_text(st.get(), 1, name.data(), static_cast<int>(name.size()), SQLITE_TRANSIENT);
  return sqlite3_step(st.get()) == SQLITE_ROW;
}

void createLayer(sqlite3* db, const FeatureCollection& fc, int srsId) {
  ensureSrs(db, srsId);
  std::string sql = "CREATE TABLE " + quoteIdent(fc.layer) + " (fid INTEGER PRIMARY KEY AUTOINCREMENT, geom MULTIPOLYGON";
  for (const auto& f : fc.fields) sql += ", " + quoteIdent(f.name) + " " + std::string(sqlTypeName(f.type));
  sql += ")";
  exec(db, sql);
  auto st = prepare(db, "INSERT INTO gpkg_contents (table_name, data_type, identifier, srs_id) VALUES (?, 'features', ?, ?)");
  sqlite3_bind_text(st.get(), 1, fc.layer.c_str(), -1, SQLITE_TRANSIENT);
  sqlite3_bind_text(st.get(), 2, fc.layer.c_str(), -1, SQLITE_TRANSIENT);
  sqlite3_bind_int(st.get(), 3, srsId);
  sqlite3_step(st.get());
  auto gc = prepare(db, "INSERT INTO gpkg_geometry_columns VALUES (?, 'geom', 'MULTIPOLYGON', ?, 0, 0)");
  sqlite3_bind_text(gc.get(), 1, fc.layer.c_str(), -1, SQLITE_TRANSIENT);
  sqlite3_bind_int(gc.get(), 2, srsId);
  sqlite3_step(gc.get());
}

void insertFeatures(sqlite3* db, const FeatureCollection& fc, int srsId) {
  std::string sql = "INSERT INTO " + quoteIdent(fc.layer) + " (geom";
  for (const auto& f : fc.fields) sql += ", " + quoteIdent(f.name);
  sql += ") VALUES (?";
  for (std::size_t i = 0; i < fc.fields.size(); ++i) sql += ", ?";
  sql += ")";
  auto st = prepare(db, sql);
  for (const auto& feature : fc.features) {
    sqlite3_reset(st.get());
    const auto blob = gpkgBlob(feature.geometry, srsId);
    sqlite3_bind_blob(st.get(), 1, blob.data(), static_cast<int>(blob.size()), SQLITE_TRANSIENT);
    for (std::size_t i = 0; i < fc.fields.size(); ++i) {
      const auto& v = feature.values.at(i);
      const int slot = static_cast<int>(i + 2);
      if (v.empty()) {
        sqlite3_bind_null(st.get(), slot);
      } else if (fc.fields[i].type == FieldType::Integer && text::parseInteger(v)) {
        sqlite3_bind_int64(st.get(), slot, *text::parseInteger(v));
      } else if (fc.fields[i].type == FieldType::Real && text::parseNumber(v)) {
        sqlite3_bind_double(st.get(), slot, *text::parseNumber(v));
      } else {
        sqlite3_bind_text(st.get(), slot, v.c_str(), -1, SQLITE_TRANSIENT);
      }
    }
    if (sqlite3_step(st.get()) != SQLITE_DONE) throw Error(Errc::Io, sqlite3_errmsg(db));
  }
  // refresh the layer extent
  auto ext = prepare(db, "UPDATE gpkg_contents SET min_x = ?, min_y = ?, max_x = ?, max_y = ?, last_change = "
                         "strftime('%Y-%m-%dT%H:%M:%fZ','now') WHERE table_name = ?");
  geom::BBox box;
  for (const auto& feature : fc.features) box.extend(geom::bounds(feature.geometry));
  if (!box.empty) {
    auto cur = prepare(db, "SELECT min_x, min_y, max_x, max_y FROM gpkg_contents WHERE table_name = ?");
    sqlite3_bind_text(cur.get(), 1, fc.layer.c_str(), -1, SQLITE_TRANSIENT);
    if (sqlite3_step(cur.get()) == SQLITE_ROW && sqlite3_column_type(cur.get(), 0) != SQLITE_NULL) {
      box.extend(geom::Point{sqlite3_column_double(cur.get(), 0), sqlite3_column_double(cur.get(), 1)});
      box.extend(geom::Point{sqlite3_column_double(cur.get(), 2), sqlite3_column_double(cur.get(), 3)});
    }
    sqlite3_bind_double(ext.get(), 1, box.minX);
    sqlite3_bind_double(ext.get(), 2, box.minY);
    sqlite3_bind_double(ext.get(), 3, box.maxX);
    sqlite3_bind_double(ext.get(), 4, box.maxY);
  }
  sqlite3_bind_text(ext.get(), 5, fc.layer.c_str(), -1, SQLITE_TRANSIENT);
  sqlite3_step(ext.get());
}

void writeGpkgFile(const fs::path& path, const FeatureCollection& fc) {
  const fs::path tmp = path.string() + ".tmp";
  fs::remove(tmp);
  {
    auto db = openDb(tmp, true);
    exec(db.get(), "BEGIN");
    createGpkg(db.get());
    const int srsId = fc.epsg.value_or(-1);
    createLayer(db.get(), fc, srsId);
    insertFeatures(db.get(), fc, srsId);
    exec(db.get(), "COMMIT");
  }
  fs::rename(tmp, path);
}

void appendGpkg(const fs::path& path, const FeatureCollection& fc) {
  auto db = openDb(path, true);
  exec(db.get(), "BEGIN IMMEDIATE");
  try {
    int srsId = fc.epsg.value_or(-1);
    if (!hasTable(db.get(), fc.layer)) {
      createLayer(db.get(), fc, srsId);
    } else {
      const auto existing = [&] {
        FeatureCollection probe;
        auto info = prepare(db.get(), "PRAGMA table_info(" + quoteIdent(fc.layer) + ")");
        while (sqlite3_step(info.get()) == SQLITE_ROW) {
          const std::string name = columnText(info.get(), 1);
          if (sqlite3_column_int(info.get(), 5) != 0 || name == "geom") continue;
          probe.fields.push_back({name, sqlType(columnText(info.get(), 2))});
        }
        return probe.fields;
      }();
      std::vector<std::string> a, b;
      for (const auto& f : existing) a.push_back(f.name);
      for (const auto& f : fc.fields) b.push_back(f.name);
      if (a != b) throw Error(Errc::OutputColumnMismatch, path.string() + ": layer fields differ");
      auto st = prepare(db.get(), "SELECT srs_id FROM gpkg_geometry_columns WHERE table_name = ?");
      sqlite3_bind_text(st.get(), 1, fc.layer.c_str(), -1, SQLITE_TRANSIENT);
      if (sqlite3_step(st.get()) == SQLITE_ROW) srsId = sqlite3_column_int(st.get(), 0);
    }
    insertFeatures(db.get(), fc, srsId);
    exec(db.get(), "COMMIT");
  } catch (...) {
    sqlite3_exec(db.get(), "ROLLBACK", nullptr, nullptr, nullptr);
    throw;
  }
}

// --- GeoJSON -----------------------------------------------------------------

geom::Ring jsonRing(const json& coords) {
  geom::Ring r;
  for (const auto& c : coords) {
    if (!c.is_array() || c.size() < 2) throw std::runtime_error("bad coordinate");
    r.push_back({c[0].get<double>(), c[1].get<double>()});
  }
  return openRing(std::move(r));
}

geom::Polygon jsonPolygon(const json& rings) {
  geom::Polygon p;
  for (std::size_t i = 0; i < rings.size(); ++i) {
    if (i == 0) p.outer = jsonRing(rings[i]);
    else p.holes.push_back(jsonRing(rings[i]));
  }
  return p;
}

geom::MultiPolygon jsonGeometry(const json& g) {
  geom::MultiPolygon out;
  if (g.is_null()) return out;
  const auto type = g.at("type").get<std::string>();
  if (type == "Polygon") {
    if (!g.at("coordinates").empty()) out.push_back(jsonPolygon(g.at("coordinates")));
  } else if (type == "MultiPolygon") {
    for (const auto& p : g.at("coordinates"))
      if (!p.empty()) out.push_back(jsonPolygon(p));
  } else if (type == "GeometryCollection") {
    for (const auto& part : g.at("geometries")) {
      auto sub = jsonGeometry(part);
      out.insert(out.end(), sub.begin(), sub.end());
    }
  } else {
    throw std::runtime_error("geometry type " + type + " is not polygonal");
  }
  return out;
}

std::string jsonValueText(const json& v) {
  if (v.is_null()) return "";
  if (v.is_string()) return v.get<std::string>();
  if (v.is_number_integer()) return std::to_string(v.get<std::int64_t>());
  if (v.is_number_unsigned()) return std::to_string(v.get<std::uint64_t>());
  if (v.is_number_float()) return v.dump();
  if (v.is_boolean()) return v.get<bool>() ? "true" : "false";
  return v.dump();
}

FeatureCollection readGeoJson(const fs::path& path) {
  FeatureCollection fc;
  try {
    const json doc = json::parse(readTextFile(path));
    std::vector<json> features;
    if (doc.at("type") == "FeatureCollection") {
      for (const auto& f : doc.at("features")) features.push_back(f);
    } else if (doc.at("type") == "Feature") {
      features.push_back(doc);
    } else {
      unreadable(path, "expected a FeatureCollection or a Feature");
    }
    fc.layer = doc.contains("name") && doc["name"].is_string() ? doc["name"].get<std::string>() : path.stem().string();

    bool crsDeclared = false;
    if (doc.contains("crs") && doc["crs"].is_object()) {
      crsDeclared = true;
      const auto& c = doc["crs"];
      if (c.contains("properties") && c["properties"].contains("name"))
        fc.epsg = crs::parseCrsName(c["properties"]["name"].get<std::string>());
    }

    struct Seen {
      bool integer = false, real = false, other = false;
    };
    std::vector<Seen> seen;
    for (const auto& f : features) {
      if (!f.contains("properties") || !f["properties"].is_object()) continue;
      for (auto it = f["properties"].begin(); it != f["properties"].end(); ++it) {
        if (!fc.field(it.key())) {
          fc.fields.push_back({it.key(), FieldType::Text});
          seen.emplace_back();
        }
        auto& s = seen[*fc.field(it.key())];
        const auto& v = it.value();
        if (v.is_null()) continue;
        if (v.is_number_integer() || v.is_number_unsigned()) s.integer = true;
        else if (v.is_number_float()) s.real = true;
        else s.other = true;
      }
    }
    for (std::size_t i = 0; i < fc.fields.size(); ++i) {
      const auto& s = seen[i];
      fc.fields[i].type = s.other ? FieldType::Text : s.real ? FieldType::Real : s.integer ? FieldType::Integer : FieldType::Text;
    }

    bool geographicRange = true;
    for (const auto& f : features) {
      Feature out;
      out.values.assign(fc.fields.size(), "");
      if (f.contains("properties") && f["properties"].is_object())
        for (auto it = f["properties"].begin(); it != f["properties"].end(); ++it)
          out.values[*fc.field(it.key())] = jsonValueText(it.value());
      out.geometry = jsonGeometry(f.contains("geometry") ? f["geometry"] : json());
      const auto box = geom::bounds(out.geometry);
      if (!box.empty && (box.minX < -180 || box.maxX > 180 || box.minY < -90 || box.maxY > 90)) geographicRange = false;
      fc.features.push_back(std::move(out));
    }
    // RFC 7946 coordinates are WGS84; projected coordinates without a crs member are unknown
    if (!crsDeclared && geographicRange) fc.epsg = 4326;
  } catch (const Error&) {
    throw;
  } catch (const std::exception& e) {
    unreadable(path, e.what());
  }
  return fc;
}

json ringJson(const geom::Ring& r) {
  json out = json::array();
  for (auto p : r) out.push_back({p.x, p.y});
  if (!r.empty()) out.push_back({r.front().x, r.front().y});
  return out;
}

void writeGeoJson(const fs::path& path, const FeatureCollection& fc) {
  json doc{{"type", "FeatureCollection"}, {"name", fc.layer}};
  if (fc.epsg && *fc.epsg != 4326)
    doc["crs"] = {{"type", "name"}, {"properties", {{"name", "urn:ogc:def:crs:EPSG::" + std::to_string(*fc.epsg)}}}};
  json features = json::array();
  for (const auto& f : fc.features) {
    json props = json::object();
    for (std::size_t i = 0; i < fc.fields.size(); ++i) {
      const auto& v = f.values.at(i);
      const auto& name = fc.fields[i].name;
      if (v.empty()) props[name] = nullptr;
      else if (fc.fields[i].type == FieldType::Integer && text::parseInteger(v)) props[name] = *text::parseInteger(v);
      else if (fc.fields[i].type == FieldType::Real && text::parseNumber(v)) props[name] = *text::parseNumber(v);
      else props[name] = v;
    }
    json polys = json::array();
    for (const auto& poly : f.geometry) {
      json rings = json::array({ringJson(poly.outer)});
      for (const auto& h : poly.holes) rings.push_back(ringJson(h));
      polys.push_back(std::move(rings));
    }
    features.push_back({{"type", "Feature"},
                        {"properties", std::move(props)},
                        {"geometry", {{"type", "MultiPolygon"}, {"coordinates", std::move(polys)}}}});
  }
  doc["features"] = std::move(features);
  writeTextFileAtomic(path, doc.dump() + "\n");
}

}  // namespace

FeatureCollection read(const fs::path& path, std::string_view layer) {
  if (!fs::is_regular_file(path)) unreadable(path, "no such file");
  return formatOf(path) == Format::GeoPackage ? readGpkg(path, layer) : readGeoJson(path);
}

void write(const fs::path& path, const FeatureCollection& fc) {
  if (formatOf(path) == Format::GeoPackage) writeGpkgFile(path, fc);
  else writeGeoJson(path, fc);
}

void append(const fs::path& path, const FeatureCollection& fc) {
  if (!fs::exists(path)) return write(path, fc);
  if (formatOf(path) == Format::GeoPackage) return appendGpkg(path, fc);
  auto existing = readGeoJson(path);
  std::vector<std::string> a, b;
  for (const auto& f : existing.fields) a.push_back(f.name);
  for (const auto& f : fc.fields) b.push_back(f.name);
  if (!existing.features.empty() && a != b) throw Error(Errc::OutputColumnMismatch, path.string() + ": layer fields differ");
  existing.fields = fc.fields;
  existing.epsg = fc.epsg;
  existing.features.insert(existing.features.end(), fc.features.begin(), fc.features.end());
  writeGeoJson(path, existing);
}

}  // namespace areal::vec
