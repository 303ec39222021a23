#pragma once

#include <array>
#include <cstdint>
#include <filesystem>
#include <optional>
#include <string>
#include <vector>

#include "areal/geometry.hpp"
#include "areal/inventory.hpp"
#include "areal/schema.hpp"

namespace fixtures {

namespace fs = std::filesystem;

class TempDir {
public:
  TempDir();
  ~TempDir();
  TempDir(const TempDir&) = delete;
  TempDir& operator=(const TempDir&) = delete;

  const fs::path& path() const { return path_; }
  fs::path operator/(const std::string& name) const { return path_ / name; }

private:
  fs::path path_;
};

void writeFile(const fs::path& path, const std::string& content);
std::string readFile(const fs::path& path);

areal::geom::MultiPolygon rect(double x0, double y0, double x1, double y1);

// -- Brazil table: IBGE-style sheet with a three-row metadata header -----

inline constexpr int kBrazilFirstYear = 2000;
inline constexpr int kBrazilYears = 19;  // 2000..2018 in columns 2..20

struct BrazilRow {
  std::string municipality;
  std::string state;  // abbreviation as it appears in the sheet
  std::array<const char*, kBrazilYears> cells;
};

const std::vector<BrazilRow>& brazilRows();
std::string brazilTableCsv();
areal::Schema brazilSchema();

// -- US table: NASS quickstats export, already tidy ----------------------

struct UsRow {
  std::string year;
  std::string state;
  std::string county;
  std::string value;  // as exported, e.g. "5,300", "(D)"
};

const std::vector<UsRow>& usRows();
std::string usTableCsv();
areal::Schema usSchema();
inline constexpr double kAcresToHectares = 0.404686;

// -- geometries ------------------------------------------------------------

/// Level-1 layer: fillers put brazil at rank 32 and estonia at rank 70.
std::string nationsGeoJson();
/// Level-3 layer of two Brazilian states (columns state, municipality).
std::string brazilMunicipalitiesGeoJson();
/// Level-3 layer of US counties (columns STATE_NAME, NAME).
std::string usCountiesGeoJson();
/// Level-2 layer of Estonian counties; tartu ranks 13th (column county).
std::string estoniaCountiesGeoJson();

// -- vocabularies ----------------------------------------------------------

std::string commodityIndexCsv();       // term,faoID with soybean=236
std::string commodityTranslationsCsv();
std::string stateTranslationsCsv();    // RO -> Rondônia, AC -> Acre

/// Registered ids of the end-to-end database.
struct Registered {
  std::int64_t gadm = 0, ibge = 0, usda = 0;
  std::int64_t nationsGeo = 0, brazilGeo = 0, usGeo = 0;
  std::int64_t brazilTab = 0, usTab = 0;
};

/// Initialises `root`, defines the variables and registers nations,
/// the Brazilian and US geometries and both tables.
Registered buildDatabase(const fs::path& root, const fs::path& scratch);

/// As buildDatabase, then normalises geometries, ignores the US catch-all
/// county rows in review and normalises tables.
Registered buildNormalisedDatabase(const fs::path& root, const fs::path& scratch);

}  // namespace fixtures
