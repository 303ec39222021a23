#pragma once

#include <cstdint>
#include <filesystem>
#include <memory>
#include <optional>
#include <span>
#include <string>
#include <string_view>
#include <vector>

#include "areal/csv.hpp"

namespace areal {

namespace fs = std::filesystem;

enum class InventoryKind { Dataseries, Geometry, Table };

std::string_view inventoryFileName(InventoryKind kind);
const Row& inventoryHeader(InventoryKind kind);

/// Relative directories that make up a database.
std::span<const std::string_view> layoutDirectories();

class Database;

/// Holds the database's writer lock for its lifetime. Guards nest within
/// one Database handle and its copies, across threads; a second handle on
/// the same root or another process is rejected. In-process writers still
/// serialise through the owning components.
class WriteGuard {
public:
  WriteGuard(WriteGuard&&) noexcept;
  WriteGuard(const WriteGuard&) = delete;
  WriteGuard& operator=(const WriteGuard&) = delete;
  WriteGuard& operator=(WriteGuard&&) = delete;
  ~WriteGuard();

private:
  friend class Database;
  struct LockState;
  explicit WriteGuard(std::shared_ptr<LockState> state);
  std::shared_ptr<LockState> state_;
};

/// Handle on an initialised database root. All paths resolve relative to it.
class Database {
public:
  /// Creates the layout, inventories and manifest. Idempotent on an
  /// existing database.
  static Database init(const fs::path& root);

  /// Opens an existing database; throws CorruptLayout if it isn't one.
  static Database open(const fs::path& root);

  const fs::path& root() const { return root_; }

  fs::path metaDir() const { return root_ / "meta"; }
  fs::path inventoryFile(InventoryKind kind) const { return metaDir() / inventoryFileName(kind); }
  fs::path manifestFile() const { return metaDir() / "manifest.json"; }
  fs::path queueFile() const { return metaDir() / "review_queue.json"; }
  fs::path processedLogFile() const { return metaDir() / "processed.csv"; }
  fs::path indexFile(std::string_view variable) const;
  fs::path translationFile(std::string_view variable) const;

  fs::path tablesDir(int stage) const;
  fs::path geometriesDir(int stage) const;
  fs::path processedTablesDir() const { return tablesDir(2) / "processed"; }
  fs::path processedGeometriesDir() const { return geometriesDir(2) / "processed"; }
  fs::path schemasDir() const { return root_ / "adb_tables" / "meta" / "schemas"; }
  fs::path gazetteerFile() const { return root_ / "adb_geometries" / "meta" / "gazetteer.csv"; }

  /// Relative layout entries (directories and inventory files) that are absent.
  std::vector<std::string> missingLayoutEntries() const;

  /// Acquires (or re-enters) the single-writer lock. Throws WriterLocked.
  WriteGuard lockForWrite() const;

private:
  explicit Database(fs::path root);
  fs::path root_;
  std::shared_ptr<WriteGuard::LockState> lock_;
};

enum class VariableKind { Identifying, Measured };

std::string_view variableKindName(VariableKind kind);
VariableKind parseVariableKind(std::string_view text);

struct VariableDef {
  std::string name;
  VariableKind kind = VariableKind::Identifying;
  std::optional<fs::path> indexSource;
  std::optional<fs::path> seedTranslations;
  /// Header of the concept-ID column in the index table (e.g. "faoID").
  std::string conceptIdName = "ID";
};

/// Term ↔ concept-ID table of one variable. Terms are unique by match key.
struct IndexTable {
  std::string conceptIdName;
  Row header;
  std::vector<std::string> terms;
  std::vector<std::string> ids;

  std::optional<std::string> conceptId(std::string_view term) const;
  bool contains(std::string_view term) const { return conceptId(term).has_value(); }

  /// Validates header shape and uniqueness; throws MalformedIndexTable.
  static IndexTable parse(const std::vector<Row>& rows, std::string_view conceptIdName,
                          const fs::path& origin);
  static IndexTable load(const fs::path& path, std::string_view conceptIdName);
};

/// Creates index and translation tables for each definition and records the
/// definitions in the manifest. Seed files are validated, then copied.
void setVariables(const Database& db, std::span<const VariableDef> defs);

std::vector<VariableDef> variables(const Database& db);
std::optional<VariableDef> findVariable(const Database& db, std::string_view name);

/// Loads the index table of a variable if it has any terms.
std::optional<IndexTable> loadIndex(const Database& db, const VariableDef& def);

/// max(existing id) + 1 for the inventory of `kind`; 1 when empty.
std::int64_t nextId(const Database& db, InventoryKind kind);

/// Reads an inventory and checks its header and id column.
CsvTable readInventory(const Database& db, InventoryKind kind);

/// Appends one row to an inventory. Callers hold the writer lock.
void appendInventoryRow(const Database& db, InventoryKind kind, const Row& row);

/// Normalisation log: a record listed here is not normalised again.
bool isProcessed(const Database& db, InventoryKind kind, std::int64_t id);
void markProcessed(const Database& db, InventoryKind kind, std::int64_t id);

std::string utcTimestamp();

}  // namespace areal
