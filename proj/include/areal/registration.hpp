#pragma once

#include <cstdint>
#include <filesystem>
#include <optional>
#include <string>
#include <vector>

#include "areal/inventory.hpp"
#include "areal/schema.hpp"

namespace areal {

struct DataseriesRecord {
  std::int64_t datID = 0;
  std::string name;
  std::string description;
  std::string homepage;
  std::string licence;
  std::string notes;
};

struct GeometryRecord {
  std::int64_t geoID = 0;
  std::int64_t datID = 0;
  std::string nation;  // lowercase English name or "global"
  int level = 1;
  std::string layer;
  /// Attribute columns holding unit names, one per level ending at `level`.
  std::vector<std::string> nameColumns;
  std::optional<int> epsg;
  std::string sourceFile;
  std::string stage2Name;
  std::string date;
  std::string notes;

  /// Administrative level described by nameColumns[i].
  int levelOfColumn(std::size_t i) const { return level - static_cast<int>(nameColumns.size()) + 1 + static_cast<int>(i); }
};

struct TableRecord {
  std::int64_t tabID = 0;
  std::int64_t datID = 0;
  std::int64_t geoID = 0;
  std::string nation;
  int level = 1;
  std::string subject;
  int yearBegin = 0;
  int yearEnd = 0;
  std::string schema;  // file name under adb_tables/meta/schemas
  double unitFactor = 1;
  std::string sourceFile;
  std::string stage2Name;
  std::string date;
  std::string notes;
};

DataseriesRecord regDataseries(const Database& db, const std::string& name, const std::string& description,
                               const std::string& homepage, const std::string& licence, const std::string& notes = {});

struct GeometryRegistration {
  std::filesystem::path file;
  std::int64_t datID = 0;
  std::string nation;
  int level = 1;
  std::string layer;  // GeoPackage layer; the first layer when empty
  std::vector<std::string> nameColumns;
  std::optional<int> epsg;  // overrides the file's own CRS metadata
  std::string notes;
};

GeometryRecord regGeometry(const Database& db, const GeometryRegistration& reg);

struct TableRegistration {
  std::filesystem::path file;
  std::int64_t datID = 0;
  std::int64_t geoID = 0;
  std::string nation;
  int level = 1;
  std::string subject;
  int yearBegin = 0;
  int yearEnd = 0;
  Schema schema;
  double unitFactor = 1;
  std::string notes;
};

TableRecord regTable(const Database& db, const TableRegistration& reg);

std::string geometryStageName(std::string_view nationToken, int level, std::string_view dataseries,
                              std::string_view extension);
std::string tableStageName(std::string_view nationToken, int level, std::string_view subject, int yearBegin,
                           int yearEnd, std::string_view dataseries);

/// The token nations carry in stage2 file names: alpha-3 code or "global".
std::string nationToken(std::string_view nation);

std::vector<DataseriesRecord> dataseries(const Database& db);
std::vector<GeometryRecord> geometries(const Database& db);
std::vector<TableRecord> tables(const Database& db);

std::optional<DataseriesRecord> findDataseries(const Database& db, std::int64_t datID);
std::optional<GeometryRecord> findGeometry(const Database& db, std::int64_t geoID);
std::optional<TableRecord> findTable(const Database& db, std::int64_t tabID);

/// Current location of a registered stage2 file (stage2 or its processed folder).
std::filesystem::path tableStagePath(const Database& db, const TableRecord& rec);
std::filesystem::path geometryStagePath(const Database& db, const GeometryRecord& rec);

}  // namespace areal
