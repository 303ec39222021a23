#include "areal/inventory.hpp"

#include <fcntl.h>
#include <sys/file.h>
#include <unistd.h>

#include <array>
#include <chrono>
#include <ctime>
#include <map>
#include <mutex>
#include <set>

#include <nlohmann/json.hpp>

#include "areal/error.hpp"
#include "areal/text.hpp"
#include "areal/translation.hpp"

namespace areal {
namespace {

constexpr std::array<std::string_view, 11> kLayout{
    "adb_tables/stage1",
    "adb_tables/stage2",
    "adb_tables/stage2/processed",
    "adb_tables/stage3",
    "adb_tables/meta/schemas",
    "adb_geometries/stage1",
    "adb_geometries/stage2",
    "adb_geometries/stage2/processed",
    "adb_geometries/stage3",
    "adb_geometries/meta",
    "meta",
};

const Row kDataseriesHeader{"datID", "name", "description", "homepage", "licence", "notes"};
const Row kGeometryHeader{"geoID", "datID",       "nation",      "level", "layer", "name_columns",
                          "crs",   "source_file", "stage2_name", "date",  "notes"};
const Row kTableHeader{"tabID",       "datID",       "geoID", "nation", "level",
                       "subject",     "year_begin",  "year_end", "schema", "unit_factor",
                       "source_file", "stage2_name", "date",  "notes"};

bool isWritableDir(const fs::path& p) { return ::access(p.c_str(), W_OK) == 0; }

nlohmann::json readManifest(const Database& db) {
  try {
    return nlohmann::json::parse(readTextFile(db.manifestFile()));
  } catch (const nlohmann::json::exception& e) {
    throw Error(Errc::CorruptLayout, db.manifestFile().string() + ": " + e.what());
  }
}

void writeManifest(const Database& db, const nlohmann::json& manifest) {
  writeTextFileAtomic(db.manifestFile(), manifest.dump(2) + "\n");
}

void checkVariableName(std::string_view name) {
  if (name.empty()) throw Error(Errc::MissingField, "variable name is empty");
  for (char c : name) {
    const bool ok = (c >= 'a' && c <= 'z') || (c >= 'A' && c <= 'Z') || (c >= '0' && c <= '9') ||
                    c == '_' || c == '-';
    if (!ok) throw Error(Errc::InvalidArgument, "variable name '" + std::string(name) + "' must be [A-Za-z0-9_-]");
  }
}

}  // namespace

std::string_view inventoryFileName(InventoryKind kind) {
  switch (kind) {
    case InventoryKind::Dataseries: return "inv_dataseries.csv";
    case InventoryKind::Geometry: return "inv_geometries.csv";
    case InventoryKind::Table: return "inv_tables.csv";
  }
  return {};
}

const Row& inventoryHeader(InventoryKind kind) {
  switch (kind) {
    case InventoryKind::Dataseries: return kDataseriesHeader;
    case InventoryKind::Geometry: return kGeometryHeader;
    case InventoryKind::Table: return kTableHeader;
  }
  return kTableHeader;
}

std::span<const std::string_view> layoutDirectories() { return kLayout; }

// --- lock -------------------------------------------------------------------

struct WriteGuard::LockState {
  fs::path lockFile;
  std::mutex mutex;  // guards fd and depth only
  int fd = -1;
  int depth = 0;
};

WriteGuard::WriteGuard(std::shared_ptr<LockState> state) : state_(std::move(state)) {}
WriteGuard::WriteGuard(WriteGuard&& other) noexcept : state_(std::move(other.state_)) {}

WriteGuard::~WriteGuard() {
  if (!state_) return;
  std::lock_guard lk(state_->mutex);
  if (--state_->depth == 0 && state_->fd >= 0) {
    ::flock(state_->fd, LOCK_UN);
    ::close(state_->fd);
    state_->fd = -1;
  }
}

WriteGuard Database::lockForWrite() const {
  std::lock_guard lk(lock_->mutex);
  if (lock_->depth == 0) {
    const int fd = ::open(lock_->lockFile.c_str(), O_RDWR | O_CREAT | O_CLOEXEC, 0644);
    if (fd < 0) {
      throw Error(Errc::PathNotWritable, "cannot open lock file " + lock_->lockFile.string());
    }
    if (::flock(fd, LOCK_EX | LOCK_NB) != 0) {
      ::close(fd);
      throw Error(Errc::WriterLocked, "another writer holds " + lock_->lockFile.string());
    }
    const auto pid = std::to_string(::getpid()) + "\n";
    if (::ftruncate(fd, 0) == 0) {
      [[maybe_unused]] auto n = ::write(fd, pid.data(), pid.size());
    }
    lock_->fd = fd;
  }
  ++lock_->depth;
  return WriteGuard(lock_);
}

// --- database ---------------------------------------------------------------

Database::Database(fs::path root) : root_(std::move(root)), lock_(std::make_shared<WriteGuard::LockState>()) {
  lock_->lockFile = metaDir() / ".lock";
}

fs::path Database::indexFile(std::string_view variable) const {
  return metaDir() / ("index_" + std::string(variable) + ".csv");
}

fs::path Database::translationFile(std::string_view variable) const {
  return metaDir() / ("translation_" + std::string(variable) + ".csv");
}

fs::path Database::tablesDir(int stage) const { return root_ / "adb_tables" / ("stage" + std::to_string(stage)); }
fs::path Database::geometriesDir(int stage) const {
  return root_ / "adb_geometries" / ("stage" + std::to_string(stage));
}

std::vector<std::string> Database::missingLayoutEntries() const {
  std::vector<std::string> missing;
  for (auto dir : kLayout)
    if (!fs::is_directory(root_ / dir)) missing.emplace_back(dir);
  for (auto kind : {InventoryKind::Dataseries, InventoryKind::Geometry, InventoryKind::Table})
    if (!fs::is_regular_file(inventoryFile(kind)))
      missing.push_back("meta/" + std::string(inventoryFileName(kind)));
  if (!fs::is_regular_file(manifestFile())) missing.emplace_back("meta/manifest.json");
  return missing;
}

Database Database::init(const fs::path& rootIn) {
  std::error_code ec;
  const fs::path root = fs::absolute(rootIn, ec);
  if (ec) throw Error(Errc::PathNotWritable, rootIn.string() + ": " + ec.message());

  if (fs::exists(root) && !fs::is_directory(root))
    throw Error(Errc::PathNotWritable, root.string() + " exists and is not a directory");
  fs::create_directories(root, ec);
  if (ec || !isWritableDir(root))
    throw Error(Errc::PathNotWritable, root.string() + (ec ? ": " + ec.message() : ": not writable"));

  Database db(root);
  const bool hasManifest = fs::is_regular_file(db.manifestFile());
  if (!hasManifest && !fs::is_empty(root)) {
    // a partial layout from an interrupted init may be completed; foreign content may not
    for (const auto& entry : fs::directory_iterator(root)) {
      const auto name = entry.path().filename().string();
      if (name != "adb_tables" && name != "adb_geometries" && name != "meta")
        throw Error(Errc::CorruptLayout, root.string() + " is neither empty nor a database (found " + name + ")");
    }
  }

  for (auto dir : kLayout) {
    fs::create_directories(root / dir, ec);
    if (ec) throw Error(Errc::PathNotWritable, (root / dir).string() + ": " + ec.message());
  }
  auto guard = db.lockForWrite();
  for (auto kind : {InventoryKind::Dataseries, InventoryKind::Geometry, InventoryKind::Table}) {
    const auto path = db.inventoryFile(kind);
    if (!fs::exists(path)) {
      csv::writeFile(path, inventoryHeader(kind), {});
    } else {
      try {
        readInventory(db, kind);
      } catch (const Error& e) {
        throw Error(Errc::CorruptLayout, e.what());
      }
    }
  }
  if (!hasManifest) {
    nlohmann::json manifest{{"tool", "areal"},
                            {"version", AREAL_VERSION},
                            {"created", utcTimestamp()},
                            {"variables", nlohmann::json::array()}};
    writeManifest(db, manifest);
  } else {
    readManifest(db);
  }
  return db;
}

Database Database::open(const fs::path& rootIn) {
  Database db(fs::absolute(rootIn));
  const auto missing = db.missingLayoutEntries();
  if (!missing.empty())
    throw Error(Errc::CorruptLayout, db.root().string() + " is not a database (missing " + missing.front() + ")");
  return db;
}

// --- variables --------------------------------------------------------------

std::string_view variableKindName(VariableKind kind) {
  return kind == VariableKind::Identifying ? "identifying" : "measured";
}

VariableKind parseVariableKind(std::string_view text) {
  if (text == "identifying" || text == "id") return VariableKind::Identifying;
  if (text == "measured") return VariableKind::Measured;
  throw Error(Errc::InvalidArgument, "variable kind must be identifying or measured, got '" + std::string(text) + "'");
}

std::optional<std::string> IndexTable::conceptId(std::string_view term) const {
  const auto key = text::matchKey(term);
  for (std::size_t i = 0; i < terms.size(); ++i)
    if (text::matchKey(terms[i]) == key) return ids[i];
  return std::nullopt;
}

IndexTable IndexTable::parse(const std::vector<Row>& rows, std::string_view conceptIdName, const fs::path& origin) {
  if (rows.empty()) throw Error(Errc::MalformedIndexTable, origin.string() + ": no header row");
  IndexTable t;
  t.conceptIdName = std::string(conceptIdName);
  t.header = rows.front();
  std::optional<std::size_t> termCol, idCol;
  for (std::size_t i = 0; i < t.header.size(); ++i) {
    if (t.header[i] == "term") termCol = i;
    if (t.header[i] == conceptIdName) idCol = i;
  }
  if (!termCol) throw Error(Errc::MalformedIndexTable, origin.string() + ": missing 'term' column");
  if (!idCol)
    throw Error(Errc::MalformedIndexTable,
                origin.string() + ": missing ID column '" + std::string(conceptIdName) + "'");
  std::set<std::string> seen;
  for (std::size_t r = 1; r < rows.size(); ++r) {
    Row row = rows[r];
    row.resize(t.header.size());
    if (row[*termCol].empty() && row[*idCol].empty()) continue;
    if (row[*termCol].empty() || row[*idCol].empty())
      throw Error(Errc::MalformedIndexTable, origin.string() + ": line " + std::to_string(r + 1) + " lacks term or ID");
    if (!seen.insert(text::matchKey(row[*termCol])).second)
      throw Error(Errc::MalformedIndexTable,
                  origin.string() + ": duplicated term '" + row[*termCol] + "' at line " + std::to_string(r + 1));
    t.terms.push_back(row[*termCol]);
    t.ids.push_back(row[*idCol]);
  }
  return t;
}

IndexTable IndexTable::load(const fs::path& path, std::string_view conceptIdName) {
  return parse(csv::readFile(path), conceptIdName, path);
}

void setVariables(const Database& db, std::span<const VariableDef> defs) {
  auto guard = db.lockForWrite();
  auto manifest = readManifest(db);

  std::set<std::string> names;
  for (const auto& v : manifest["variables"]) names.insert(v.at("name").get<std::string>());
  for (const auto& def : defs) {
    checkVariableName(def.name);
    if (!names.insert(def.name).second)
      throw Error(Errc::DuplicateVariable, "variable '" + def.name + "' already defined");
    if (def.conceptIdName.empty()) throw Error(Errc::MissingField, "concept ID column name is empty");
  }

  // validate every seed before writing anything
  std::vector<std::optional<IndexTable>> indexes;
  for (const auto& def : defs) {
    if (def.indexSource) {
      indexes.push_back(IndexTable::load(*def.indexSource, def.conceptIdName));
    } else {
      indexes.emplace_back();
    }
    if (def.seedTranslations) TranslationTable::load(*def.seedTranslations);
  }

  for (std::size_t i = 0; i < defs.size(); ++i) {
    const auto& def = defs[i];
    const auto indexPath = db.indexFile(def.name);
    if (def.indexSource) {
      fs::copy_file(*def.indexSource, indexPath, fs::copy_options::overwrite_existing);
    } else {
      csv::writeFile(indexPath, Row{"term", def.conceptIdName, "notes"}, {});
    }
    const auto trPath = db.translationFile(def.name);
    if (def.seedTranslations) {
      fs::copy_file(*def.seedTranslations, trPath, fs::copy_options::overwrite_existing);
    } else {
      csv::writeFile(trPath, translationHeader(), {});
    }
    manifest["variables"].push_back({{"name", def.name},
                                     {"kind", variableKindName(def.kind)},
                                     {"concept_id", def.conceptIdName},
                                     {"index_seeded", def.indexSource.has_value()},
                                     {"translations_seeded", def.seedTranslations.has_value()}});
  }
  writeManifest(db, manifest);
}

std::vector<VariableDef> variables(const Database& db) {
  const auto manifest = readManifest(db);
  std::vector<VariableDef> out;
  for (const auto& v : manifest.value("variables", nlohmann::json::array())) {
    VariableDef def;
    def.name = v.at("name").get<std::string>();
    def.kind = parseVariableKind(v.at("kind").get<std::string>());
    def.conceptIdName = v.value("concept_id", "ID");
    out.push_back(std::move(def));
  }
  return out;
}

std::optional<VariableDef> findVariable(const Database& db, std::string_view name) {
  for (auto& v : variables(db))
    if (v.name == name) return v;
  return std::nullopt;
}

std::optional<IndexTable> loadIndex(const Database& db, const VariableDef& def) {
  const auto path = db.indexFile(def.name);
  if (!fs::exists(path)) return std::nullopt;
  auto index = IndexTable::load(path, def.conceptIdName);
  if (index.terms.empty()) return std::nullopt;
  return index;
}

// --- inventories ------------------------------------------------------------

CsvTable readInventory(const Database& db, InventoryKind kind) {
  const auto path = db.inventoryFile(kind);
  if (!fs::exists(path)) throw Error(Errc::CorruptInventory, path.string() + " is missing");
  CsvTable t;
  try {
    t = CsvTable::read(path);
  } catch (const Error& e) {
    throw Error(Errc::CorruptInventory, path.string() + ": " + e.what());
  }
  if (t.header != inventoryHeader(kind))
    throw Error(Errc::CorruptInventory, path.string() + ": unexpected header");
  std::int64_t previous = 0;
  for (std::size_t i = 0; i < t.rows.size(); ++i) {
    const auto id = text::parseInteger(t.rows[i][0]);
    if (!id || *id <= 0)
      throw Error(Errc::CorruptInventory, path.string() + ": bad id '" + t.rows[i][0] + "' on line " +
                                              std::to_string(i + 2));
    if (*id <= previous)
      throw Error(Errc::CorruptInventory, path.string() + ": ids not increasing at line " + std::to_string(i + 2));
    previous = *id;
  }
  return t;
}

std::int64_t nextId(const Database& db, InventoryKind kind) {
  const auto t = readInventory(db, kind);
  std::int64_t maxId = 0;
  for (const auto& r : t.rows) maxId = std::max<std::int64_t>(maxId, *text::parseInteger(r[0]));
  return maxId + 1;
}

void appendInventoryRow(const Database& db, InventoryKind kind, const Row& row) {
  csv::appendRows(db.inventoryFile(kind), inventoryHeader(kind), {row});
}

namespace {
const Row kProcessedHeader{"kind", "id", "date"};

std::string_view kindToken(InventoryKind kind) {
  return kind == InventoryKind::Geometry ? "geometry" : kind == InventoryKind::Table ? "table" : "dataseries";
}
}  // namespace

bool isProcessed(const Database& db, InventoryKind kind, std::int64_t id) {
  const auto path = db.processedLogFile();
  if (!fs::exists(path) || fs::file_size(path) == 0) return false;
  const auto t = CsvTable::read(path);
  const auto k = t.requireColumn("kind", path);
  const auto i = t.requireColumn("id", path);
  const auto idText = std::to_string(id);
  for (const auto& r : t.rows)
    if (r[k] == kindToken(kind) && r[i] == idText) return true;
  return false;
}

void markProcessed(const Database& db, InventoryKind kind, std::int64_t id) {
  if (isProcessed(db, kind, id)) return;
  csv::appendRows(db.processedLogFile(), kProcessedHeader, {{std::string(kindToken(kind)), std::to_string(id), utcTimestamp()}});
}

std::string utcTimestamp() {
  const auto now = std::chrono::system_clock::to_time_t(std::chrono::system_clock::now());
  std::tm tm{};
  ::gmtime_r(&now, &tm);
  char buf[32];
  std::strftime(buf, sizeof buf, "%Y-%m-%dT%H:%M:%SZ", &tm);
  return buf;
}

}  // namespace areal
