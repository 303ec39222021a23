#include <gtest/gtest.h>

#include <algorithm>
#include <thread>

#include "areal/inventory.hpp"
#include "areal/registration.hpp"
#include "expect_errc.hpp"
#include "fixtures.hpp"

using namespace areal;
using fixtures::TempDir;

namespace {

std::vector<std::int64_t> idColumn(const Database& db, InventoryKind kind) {
  const auto inv = readInventory(db, kind);
  std::vector<std::int64_t> ids;
  for (std::size_t i = 0; i < inv.rows.size(); ++i) ids.push_back(std::stoll(inv.rows[i][0]));
  return ids;
}

}  // namespace

TEST(Inventory, InitCreatesLayout) {
  TempDir tmp;
  const auto db = Database::init(tmp / "adb");
  EXPECT_TRUE(fs::is_directory(tmp / "adb/adb_tables/stage2/processed"));
  EXPECT_TRUE(fs::is_directory(tmp / "adb/adb_geometries/stage3"));
  EXPECT_TRUE(fs::is_directory(tmp / "adb/adb_tables/meta/schemas"));
  for (auto kind : {InventoryKind::Dataseries, InventoryKind::Geometry, InventoryKind::Table}) {
    EXPECT_TRUE(fs::is_regular_file(db.inventoryFile(kind)));
    EXPECT_EQ(readInventory(db, kind).rows.size(), 0u);
  }
  EXPECT_EQ(db.inventoryFile(InventoryKind::Table).filename(), "inv_tables.csv");
  EXPECT_TRUE(db.missingLayoutEntries().empty());
  for (auto dir : layoutDirectories()) EXPECT_TRUE(fs::is_directory(db.root() / dir)) << dir;
}

TEST(Inventory, InitIsIdempotent) {
  TempDir tmp;
  auto db = Database::init(tmp.path());
  regDataseries(db, "ibge", "d", "h", "l");
  const auto before = fixtures::readFile(db.inventoryFile(InventoryKind::Dataseries));
  const auto manifest = fixtures::readFile(db.manifestFile());
  auto again = Database::init(tmp.path());
  EXPECT_EQ(again.root(), db.root());
  EXPECT_EQ(fixtures::readFile(db.inventoryFile(InventoryKind::Dataseries)), before);
  EXPECT_EQ(fixtures::readFile(db.manifestFile()), manifest);
}

TEST(Inventory, InitOnReadOnlyPath) {
  EXPECT_ERRC(Database::init("/proc/areal-db"), Errc::PathNotWritable);
}

TEST(Inventory, OpenRejectsNonDatabase) {
  TempDir tmp;
  EXPECT_ERRC(Database::open(tmp.path()), Errc::CorruptLayout);
  const auto db = Database::init(tmp.path());
  fixtures::writeFile(db.inventoryFile(InventoryKind::Geometry), "nonsense\n");
  EXPECT_ERRC(Database::init(tmp.path()), Errc::CorruptLayout);
}

TEST(Inventory, InitRejectsForeignContent) {
  TempDir tmp;
  fixtures::writeFile(tmp / "notes.txt", "hello");
  EXPECT_THROW(Database::init(tmp.path()), Error);
}

TEST(Inventory, CorruptIdColumn) {
  TempDir tmp;
  const auto db = Database::init(tmp.path());
  regDataseries(db, "ibge", "d", "h", "l");
  auto text = fixtures::readFile(db.inventoryFile(InventoryKind::Dataseries));
  text.replace(text.find("\n1,") + 1, 1, "x");
  fixtures::writeFile(db.inventoryFile(InventoryKind::Dataseries), text);
  EXPECT_ERRC(nextId(db, InventoryKind::Dataseries), Errc::CorruptInventory);
}

TEST(Inventory, SetVariablesCreatesTwoFilesEach) {
  TempDir tmp;
  const auto db = Database::init(tmp / "db");
  fixtures::writeFile(tmp / "fao.csv", fixtures::commodityIndexCsv());
  std::vector<VariableDef> defs(3);
  defs[0].name = "commodities";
  defs[0].indexSource = tmp / "fao.csv";
  defs[0].conceptIdName = "faoID";
  defs[1].name = "year";
  defs[2].name = "territories";
  setVariables(db, defs);
  for (const auto& d : defs) {
    EXPECT_TRUE(fs::is_regular_file(db.indexFile(d.name))) << d.name;
    EXPECT_TRUE(fs::is_regular_file(db.translationFile(d.name))) << d.name;
  }
  const auto tt = csv::readFile(db.translationFile("year"));
  ASSERT_FALSE(tt.empty());
  EXPECT_EQ(tt[0], (Row{"origin", "target", "source", "ID", "notes"}));
  const auto index = loadIndex(db, *findVariable(db, "commodities"));
  ASSERT_TRUE(index);
  EXPECT_EQ(index->conceptId("soybean"), "236");
  EXPECT_EQ(index->conceptId("SOYBEAN"), "236");
  EXPECT_FALSE(index->contains("quinoa"));
  EXPECT_EQ(variables(db).size(), 3u);
  EXPECT_FALSE(findVariable(db, "missing"));
}

TEST(Inventory, EmptyDefinitionList) {
  TempDir tmp;
  const auto db = Database::init(tmp.path());
  std::vector<fs::path> before;
  for (const auto& e : fs::recursive_directory_iterator(tmp.path())) before.push_back(e.path());
  setVariables(db, {});
  std::vector<fs::path> after;
  for (const auto& e : fs::recursive_directory_iterator(tmp.path())) after.push_back(e.path());
  std::sort(before.begin(), before.end());
  std::sort(after.begin(), after.end());
  after.erase(std::remove(after.begin(), after.end(), db.metaDir() / ".lock"), after.end());
  before.erase(std::remove(before.begin(), before.end(), db.metaDir() / ".lock"), before.end());
  EXPECT_EQ(before, after);
}

TEST(Inventory, MalformedIndexTables) {
  TempDir tmp;
  const auto db = Database::init(tmp / "db");
  fixtures::writeFile(tmp / "dup.csv", "term,faoID\nsoybean,236\nmaize,56\nsoybean,237\n");
  fixtures::writeFile(tmp / "noid.csv", "term,notes\nsoybean,x\n");
  std::vector<VariableDef> defs(1);
  defs[0].name = "commodities";
  defs[0].conceptIdName = "faoID";
  defs[0].indexSource = tmp / "dup.csv";
  EXPECT_ERRC(setVariables(db, defs), Errc::MalformedIndexTable);
  defs[0].indexSource = tmp / "noid.csv";
  EXPECT_ERRC(setVariables(db, defs), Errc::MalformedIndexTable);
  EXPECT_FALSE(findVariable(db, "commodities"));
}

TEST(Inventory, DuplicateVariable) {
  TempDir tmp;
  const auto db = Database::init(tmp.path());
  std::vector<VariableDef> defs(2);
  defs[0].name = defs[1].name = "year";
  EXPECT_ERRC(setVariables(db, defs), Errc::DuplicateVariable);
  defs.resize(1);
  setVariables(db, defs);
  EXPECT_ERRC(setVariables(db, defs), Errc::DuplicateVariable);
}

TEST(Inventory, NextIdIsMaxPlusOne) {
  TempDir tmp;
  const auto db = Database::init(tmp.path());
  EXPECT_EQ(nextId(db, InventoryKind::Dataseries), 1);
  for (auto name : {"a", "b", "c"}) regDataseries(db, name, "", "", "");
  EXPECT_EQ(nextId(db, InventoryKind::Dataseries), 4);

  // a gap left by a failed run: drop the row with id 2
  const auto inv = readInventory(db, InventoryKind::Dataseries);
  std::vector<Row> rows;
  for (const auto& r : inv.rows)
    if (r[0] != "2") rows.push_back(r);
  csv::writeFile(db.inventoryFile(InventoryKind::Dataseries), inv.header, rows);
  const auto ids = idColumn(db, InventoryKind::Dataseries);
  EXPECT_EQ(ids, (std::vector<std::int64_t>{1, 3}));
  EXPECT_EQ(nextId(db, InventoryKind::Dataseries), *std::max_element(ids.begin(), ids.end()) + 1);
  EXPECT_EQ(nextId(db, InventoryKind::Geometry), 1);
}

TEST(Inventory, SecondHandleIsRejectedWhileLocked) {
  TempDir tmp;
  const auto db = Database::init(tmp.path());
  const auto other = Database::open(tmp.path());
  {
    auto guard = db.lockForWrite();
    auto nested = db.lockForWrite();
    const auto copy = db;
    auto viaCopy = copy.lockForWrite();
    EXPECT_ERRC(other.lockForWrite(), Errc::WriterLocked);
    EXPECT_ERRC(regDataseries(other, "x", "", "", ""), Errc::WriterLocked);
    regDataseries(db, "y", "", "", "");
  }
  regDataseries(other, "x", "", "", "");
  EXPECT_EQ(idColumn(db, InventoryKind::Dataseries), (std::vector<std::int64_t>{1, 2}));
}

TEST(Inventory, LockReentersAcrossThreadsOfOneHandle) {
  TempDir tmp;
  const auto db = Database::init(tmp.path());
  auto guard = db.lockForWrite();
  bool ok = false;
  std::thread t([&] {
    auto g = db.lockForWrite();
    ok = true;
  });
  t.join();
  EXPECT_TRUE(ok);
}

TEST(Inventory, ProcessedLog) {
  TempDir tmp;
  const auto db = Database::init(tmp.path());
  EXPECT_FALSE(isProcessed(db, InventoryKind::Table, 1));
  markProcessed(db, InventoryKind::Table, 1);
  markProcessed(db, InventoryKind::Table, 1);
  EXPECT_TRUE(isProcessed(db, InventoryKind::Table, 1));
  EXPECT_FALSE(isProcessed(db, InventoryKind::Geometry, 1));
}

TEST(Inventory, VariableKindNames) {
  EXPECT_EQ(variableKindName(VariableKind::Measured), "measured");
  EXPECT_EQ(parseVariableKind("identifying"), VariableKind::Identifying);
  EXPECT_THROW(parseVariableKind("other"), Error);
}
