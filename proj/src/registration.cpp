#include "areal/registration.hpp"

#include <algorithm>

#include "areal/crs.hpp"
#include "areal/error.hpp"
#include "areal/nations.hpp"
#include "areal/text.hpp"
#include "areal/vector_io.hpp"

namespace areal {

namespace {

void requireField(const std::string& value, std::string_view what) {
  if (text::trim(value).empty()) throw Error(Errc::MissingField, std::string(what) + " is required");
}

void checkToken(const std::string& value, std::string_view what) {
  requireField(value, what);
  for (char c : value) {
    const bool ok = (c >= 'a' && c <= 'z') || (c >= '0' && c <= '9') || c == '-';
    if (!ok)
      throw Error(Errc::InvalidArgument, std::string(what) + " '" + value + "' must be lowercase [a-z0-9-]");
  }
}

bool sameBytes(const fs::path& a, const fs::path& b) {
  return fs::file_size(a) == fs::file_size(b) && readTextFile(a) == readTextFile(b);
}

/// Copies `source` to dir/name; an identical existing file is reused.
void placeStageFile(const fs::path& source, const fs::path& dir, const fs::path& processedDir, const std::string& name) {
  for (const auto& existing : {dir / name, processedDir / name}) {
    if (!fs::exists(existing)) continue;
    if (sameBytes(source, existing)) return;
    throw Error(Errc::StageNameConflict,
                existing.string() + " already exists with different content; use a different dataseries or subject");
  }
  const fs::path tmp = dir / (name + ".tmp");
  fs::copy_file(source, tmp, fs::copy_options::overwrite_existing);
  fs::rename(tmp, dir / name);
}

std::string field(const CsvTable& t, const Row& row, std::string_view name) {
  return row.at(*t.column(name));
}

std::int64_t intField(const CsvTable& t, const Row& row, std::string_view name) {
  const auto v = text::parseInteger(field(t, row, name));
  if (!v) throw Error(Errc::CorruptInventory, "bad integer in column '" + std::string(name) + "'");
  return *v;
}

std::string formatFactor(double f) {
  char buf[64];
  std::snprintf(buf, sizeof buf, "%.17g", f);
  return buf;
}

}  // namespace

std::string nationToken(std::string_view nation) {
  const auto n = requireNation(nation);
  return std::string(n.iso3);
}

std::string geometryStageName(std::string_view nationTok, int level, std::string_view ds, std::string_view ext) {
  return std::string(nationTok) + "_" + std::to_string(level) + "_" + std::string(ds) + "." + std::string(ext);
}

std::string tableStageName(std::string_view nationTok, int level, std::string_view subject, int yearBegin, int yearEnd,
                           std::string_view ds) {
  return std::string(nationTok) + "_" + std::to_string(level) + "_" + std::string(subject) + "_" +
         std::to_string(yearBegin) + "_" + std::to_string(yearEnd) + "_" + std::string(ds) + ".csv";
}

DataseriesRecord regDataseries(const Database& db, const std::string& name, const std::string& description,
                               const std::string& homepage, const std::string& licence, const std::string& notes) {
  checkToken(name, "dataseries name");
  auto guard = db.lockForWrite();
  for (const auto& d : dataseries(db))
    if (d.name == name) throw Error(Errc::DuplicateDataseries, "dataseries '" + name + "' is already registered");
  DataseriesRecord rec{nextId(db, InventoryKind::Dataseries), name, description, homepage, licence, notes};
  appendInventoryRow(db, InventoryKind::Dataseries,
                     {std::to_string(rec.datID), rec.name, rec.description, rec.homepage, rec.licence, rec.notes});
  return rec;
}

GeometryRecord regGeometry(const Database& db, const GeometryRegistration& reg) {
  if (reg.level < 1) throw Error(Errc::InvalidArgument, "level must be at least 1");
  if (reg.nameColumns.empty()) throw Error(Errc::MissingField, "at least one name column is required");
  requireField(reg.nation, "nation");
  const auto nation = requireNation(reg.nation);
  const bool global = nation.name == kGlobalNation;
  const int cols = static_cast<int>(reg.nameColumns.size());
  const int needed = global ? reg.level : std::max(1, reg.level - 1);
  if (cols < needed || cols > reg.level)
    throw Error(Errc::InvalidArgument, "a level-" + std::to_string(reg.level) + " layer of " + std::string(nation.name) +
                                           " needs " + std::to_string(needed) + " to " + std::to_string(reg.level) +
                                           " name columns, got " + std::to_string(cols));

  const auto format = vec::formatOf(reg.file);
  const auto fc = vec::read(reg.file, reg.layer);
  for (const auto& c : reg.nameColumns)
    if (!fc.field(c))
      throw Error(Errc::NameColumnMissing, reg.file.string() + ": name column '" + c + "' is absent from layer '" +
                                               fc.layer + "'");

  auto guard = db.lockForWrite();
  const auto ds = findDataseries(db, reg.datID);
  if (!ds) throw Error(Errc::UnknownDataseries, "no dataseries with datID " + std::to_string(reg.datID));

  GeometryRecord rec;
  rec.geoID = nextId(db, InventoryKind::Geometry);
  rec.datID = reg.datID;
  rec.nation = std::string(nation.name);
  rec.level = reg.level;
  rec.layer = fc.layer;
  rec.nameColumns = reg.nameColumns;
  rec.epsg = reg.epsg ? reg.epsg : fc.epsg;
  rec.sourceFile = reg.file.filename().string();
  rec.stage2Name = geometryStageName(global ? std::string(kGlobalNation) : std::string(nation.iso3), reg.level, ds->name,
                                     vec::extensionOf(format));
  rec.date = utcTimestamp();
  rec.notes = reg.notes;

  placeStageFile(reg.file, db.geometriesDir(2), db.processedGeometriesDir(), rec.stage2Name);
  appendInventoryRow(db, InventoryKind::Geometry,
                     {std::to_string(rec.geoID), std::to_string(rec.datID), rec.nation, std::to_string(rec.level),
                      rec.layer, text::join(rec.nameColumns, "|"), rec.epsg ? crs::crsName(*rec.epsg) : "",
                      rec.sourceFile, rec.stage2Name, rec.date, rec.notes});
  return rec;
}

TableRecord regTable(const Database& db, const TableRegistration& reg) {
  if (reg.level < 1) throw Error(Errc::InvalidArgument, "level must be at least 1");
  checkToken(reg.subject, "subject");
  requireField(reg.nation, "nation");
  const auto nation = requireNation(reg.nation);
  if (reg.yearBegin > reg.yearEnd)
    throw Error(Errc::BadYearRange, "year range " + std::to_string(reg.yearBegin) + "–" + std::to_string(reg.yearEnd) +
                                        " is reversed");
  if (!(reg.unitFactor > 0)) throw Error(Errc::InvalidArgument, "unit factor must be positive");
  if (!fs::is_regular_file(reg.file)) throw Error(Errc::Io, reg.file.string() + ": no such file");

  const auto raw = RawTable::readCsv(reg.file);
  const auto diags = validateSchema(reg.schema, raw);
  if (!diags.empty()) throw Error(Errc::SchemaMismatch, reg.file.string() + ":\n" + formatDiagnostics(diags));

  auto guard = db.lockForWrite();
  const auto ds = findDataseries(db, reg.datID);
  if (!ds) throw Error(Errc::UnknownDataseries, "no dataseries with datID " + std::to_string(reg.datID));
  if (!findGeometry(db, reg.geoID)) throw Error(Errc::UnknownGeometry, "no geometry with geoID " + std::to_string(reg.geoID));

  TableRecord rec;
  rec.tabID = nextId(db, InventoryKind::Table);
  rec.datID = reg.datID;
  rec.geoID = reg.geoID;
  rec.nation = std::string(nation.name);
  rec.level = reg.level;
  rec.subject = reg.subject;
  rec.yearBegin = reg.yearBegin;
  rec.yearEnd = reg.yearEnd;
  rec.schema = "schema_" + std::to_string(rec.tabID) + ".yaml";
  rec.unitFactor = reg.unitFactor;
  rec.sourceFile = reg.file.filename().string();
  rec.stage2Name = tableStageName(nation.name == kGlobalNation ? std::string(kGlobalNation) : std::string(nation.iso3),
                                  reg.level, reg.subject, reg.yearBegin, reg.yearEnd, ds->name);
  rec.date = utcTimestamp();
  rec.notes = reg.notes;

  placeStageFile(reg.file, db.tablesDir(2), db.processedTablesDir(), rec.stage2Name);
  writeTextFileAtomic(db.schemasDir() / rec.schema, serialiseSchema(reg.schema));
  appendInventoryRow(db, InventoryKind::Table,
                     {std::to_string(rec.tabID), std::to_string(rec.datID), std::to_string(rec.geoID), rec.nation,
                      std::to_string(rec.level), rec.subject, std::to_string(rec.yearBegin),
                      std::to_string(rec.yearEnd), rec.schema, formatFactor(rec.unitFactor), rec.sourceFile,
                      rec.stage2Name, rec.date, rec.notes});
  return rec;
}

std::vector<DataseriesRecord> dataseries(const Database& db) {
  const auto t = readInventory(db, InventoryKind::Dataseries);
  std::vector<DataseriesRecord> out;
  for (const auto& r : t.rows)
    out.push_back({intField(t, r, "datID"), field(t, r, "name"), field(t, r, "description"), field(t, r, "homepage"),
                   field(t, r, "licence"), field(t, r, "notes")});
  return out;
}

std::vector<GeometryRecord> geometries(const Database& db) {
  const auto t = readInventory(db, InventoryKind::Geometry);
  std::vector<GeometryRecord> out;
  for (const auto& r : t.rows) {
    GeometryRecord g;
    g.geoID = intField(t, r, "geoID");
    g.datID = intField(t, r, "datID");
    g.nation = field(t, r, "nation");
    g.level = static_cast<int>(intField(t, r, "level"));
    g.layer = field(t, r, "layer");
    g.nameColumns = text::split(field(t, r, "name_columns"), '|');
    if (const auto c = field(t, r, "crs"); !c.empty()) g.epsg = crs::parseCrsName(c);
    g.sourceFile = field(t, r, "source_file");
    g.stage2Name = field(t, r, "stage2_name");
    g.date = field(t, r, "date");
    g.notes = field(t, r, "notes");
    out.push_back(std::move(g));
  }
  return out;
}

std::vector<TableRecord> tables(const Database& db) {
  const auto t = readInventory(db, InventoryKind::Table);
  std::vector<TableRecord> out;
  for (const auto& r : t.rows) {
    TableRecord rec;
    rec.tabID = intField(t, r, "tabID");
    rec.datID = intField(t, r, "datID");
    rec.geoID = intField(t, r, "geoID");
    rec.nation = field(t, r, "nation");
    rec.level = static_cast<int>(intField(t, r, "level"));
    rec.subject = field(t, r, "subject");
    rec.yearBegin = static_cast<int>(intField(t, r, "year_begin"));
    rec.yearEnd = static_cast<int>(intField(t, r, "year_end"));
    rec.schema = field(t, r, "schema");
    const auto f = text::parseNumber(field(t, r, "unit_factor"));
    if (!f) throw Error(Errc::CorruptInventory, "bad unit factor for tabID " + std::to_string(rec.tabID));
    rec.unitFactor = *f;
    rec.sourceFile = field(t, r, "source_file");
    rec.stage2Name = field(t, r, "stage2_name");
    rec.date = field(t, r, "date");
    rec.notes = field(t, r, "notes");
    out.push_back(std::move(rec));
  }
  return out;
}

std::optional<DataseriesRecord> findDataseries(const Database& db, std::int64_t datID) {
  for (auto& d : dataseries(db))
    if (d.datID == datID) return d;
  return std::nullopt;
}

std::optional<GeometryRecord> findGeometry(const Database& db, std::int64_t geoID) {
  for (auto& g : geometries(db))
    if (g.geoID == geoID) return g;
  return std::nullopt;
}

std::optional<TableRecord> findTable(const Database& db, std::int64_t tabID) {
  for (auto& t : tables(db))
    if (t.tabID == tabID) return t;
  return std::nullopt;
}

fs::path tableStagePath(const Database& db, const TableRecord& rec) {
  const auto p = db.tablesDir(2) / rec.stage2Name;
  return fs::exists(p) ? p : db.processedTablesDir() / rec.stage2Name;
}

fs::path geometryStagePath(const Database& db, const GeometryRecord& rec) {
  const auto p = db.geometriesDir(2) / rec.stage2Name;
  return fs::exists(p) ? p : db.processedGeometriesDir() / rec.stage2Name;
}

}  // namespace areal
