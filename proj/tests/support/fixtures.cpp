#include "fixtures.hpp"

#include <fstream>
#include <random>
#include <sstream>

#include <nlohmann/json.hpp>

#include "areal/csv.hpp"
#include "areal/geometry_norm.hpp"
#include "areal/normalize.hpp"
#include "areal/registration.hpp"
#include "areal/review_service.hpp"

namespace fixtures {

using nlohmann::json;

TempDir::TempDir() {
  std::random_device rd;
  const auto base = fs::temp_directory_path();
  for (;;) {
    path_ = base / ("areal-test-" + std::to_string(rd()) + std::to_string(rd()));
    if (fs::create_directory(path_)) break;
  }
}

TempDir::~TempDir() {
  std::error_code ec;
  fs::remove_all(path_, ec);
}

void writeFile(const fs::path& path, const std::string& content) {
  if (path.has_parent_path()) fs::create_directories(path.parent_path());
  std::ofstream out(path, std::ios::binary);
  out << content;
}

std::string readFile(const fs::path& path) {
  std::ifstream in(path, std::ios::binary);
  std::ostringstream ss;
  ss << in.rdbuf();
  return ss.str();
}

areal::geom::MultiPolygon rect(double x0, double y0, double x1, double y1) {
  return {areal::geom::Polygon{{{x0, y0}, {x1, y0}, {x1, y1}, {x0, y1}}, {}}};
}

// -- Brazil ---------------------------------------------------------------

const std::vector<BrazilRow>& brazilRows() {
  static const std::vector<BrazilRow> rows{
      {"Alta Floresta D'Oeste", "RO",
       {"-", "-", "-", "-", "100", "-", "-", "-", "-", "-", "-", "120", "-", "-", "-", "-", "-", "-", "-"}},
      {"Ariquemes", "RO",
       {"-", "-", "450", "-", "-", "-", "50", "-", "-", "-", "-", "-", "-", "-", "-", "-", "-", "-", "-"}},
      {"Cabixi", "RO",
       {"200", "486", "600", "1500", "1500", "5370", "7500", "6000", "7000", "7200", "8100", "9400", "10500",
        "11000", "12480", "13000", "14200", "15000", "16500"}},
      {"Cacoal", "RO",
       {"-", "-", "-", "-", "-", "-", "-", "-", "-", "-", "-", "-", "-", "-", "-", "-", "-", "-", "-"}},
      {"Cerejeiras", "RO",
       {"2700", "3353", "3400", "4516", "7184", "8000", "18000", "16200", "18000", "19000", "20500", "21400",
        "22300", "23000", "24100", "25000", "26500", "27000", "28400"}},
      {"Acrelândia", "AC",
       {"-", "-", "-", "-", "-", "-", "-", "-", "-", "-", "-", "-", "-", "-", "-", "30", "45", "-", "60"}},
  };
  return rows;
}

std::string brazilTableCsv() {
  std::vector<areal::Row> rows;
  auto blank = [] { return areal::Row(1 + kBrazilYears, ""); };
  areal::Row r = blank();
  r[0] = "Tabela 1612 - Área colhida, por tipo de lavoura, produto e ano";
  rows.push_back(r);
  r = blank();
  r[0] = "Variável - Área colhida (Hectares)";
  rows.push_back(r);
  r = blank();
  r[0] = "Município";
  r[1] = "Ano x Produto das lavouras temporárias";
  rows.push_back(r);
  r = blank();
  for (int y = 0; y < kBrazilYears; ++y) r[1 + y] = std::to_string(kBrazilFirstYear + y);
  rows.push_back(r);
  r = blank();
  for (int y = 0; y < kBrazilYears; ++y) r[1 + y] = "Soja";
  rows.push_back(r);
  for (const auto& b : brazilRows()) {
    r = blank();
    r[0] = b.municipality + " (" + b.state + ")";
    for (int y = 0; y < kBrazilYears; ++y) r[1 + y] = b.cells[y];
    rows.push_back(r);
  }
  std::string out;
  for (const auto& row : rows) out += areal::csv::formatRow(row);
  return out;
}

areal::Schema brazilSchema() {
  areal::Schema s;
  s.clusters = {areal::Cluster{4, 1, std::nullopt, std::nullopt}};
  areal::VariableSpec al2{"al2", areal::VarType::Id, std::nullopt, areal::CellRange{1, 1}};
  al2.split = R"(^.*\(([A-Z]{2})\)\s*$)";
  areal::VariableSpec al3{"al3", areal::VarType::Id, std::nullopt, areal::CellRange{1, 1}};
  al3.split = R"(^(.*\S)\s*\([A-Z]{2}\)\s*$)";
  areal::VariableSpec year{"year", areal::VarType::Id, areal::CellRange{4, 4}, areal::CellRange{2, 20}};
  areal::VariableSpec commodities{"commodities", areal::VarType::Id, areal::CellRange{5, 5}, areal::CellRange{2, 20}};
  areal::VariableSpec harvested{"harvested", areal::VarType::Measured, std::nullopt, areal::CellRange{2, 20}};
  s.variables = {al2, al3, year, commodities, harvested};
  s.naMarkers = {"", "-"};
  return s;
}

// -- US --------------------------------------------------------------------

const std::vector<UsRow>& usRows() {
  static const std::vector<UsRow> rows{
      {"2018", "ALABAMA", "DALLAS", "5,300"},
      {"2018", "ALABAMA", "ELMORE", "1,200"},
      {"2018", "ALABAMA", "OTHER (COMBINED) COUNTIES", "3,450"},
      {"2018", "ALABAMA", "PERRY", "(D)"},
      {"2018", "ALABAMA", "SUMTER", "2,100"},
      {"2018", "ALABAMA", "BALDWIN", "38,500"},
      {"2018", "ALABAMA", "BLOUNT", "(Z)"},
      {"2018", "ALABAMA", "CHEROKEE", "17,800"},
      {"2017", "ALABAMA", "PERRY", "100"},
      {"2017", "ALABAMA", "DALLAS", "4,900"},
      {"2017", "IOWA", "ADAIR", "94,300"},
      {"2017", "IOWA", "BOONE", "152,000"},
      {"2017", "IOWA", "OTHER (COMBINED) COUNTIES", "12,600"},
  };
  return rows;
}

std::string usTableCsv() {
  std::string out = areal::csv::formatRow({"Program", "Year", "Period", "Week Ending", "Geo Level", "State",
                                           "State ANSI", "Ag District", "Ag District Code", "County", "County ANSI",
                                           "Zip Code", "Region", "watershed_code", "Watershed", "Commodity",
                                           "Data Item", "Domain", "Domain Category", "Value", "CV (%)"});
  int ansi = 1;
  for (const auto& r : usRows()) {
    const bool other = r.county.rfind("OTHER", 0) == 0;
    out += areal::csv::formatRow({"SURVEY", r.year, "YEAR", "", "COUNTY", r.state, r.state == "IOWA" ? "19" : "01",
                                  r.state == "IOWA" ? "WEST CENTRAL" : "BLACK BELT", r.state == "IOWA" ? "40" : "40",
                                  r.county, other ? "" : std::to_string(ansi++), "", "", "00000000", "", "SOYBEANS",
                                  "SOYBEANS - ACRES HARVESTED", "TOTAL", "NOT SPECIFIED", r.value, ""});
  }
  return out;
}

areal::Schema usSchema() {
  areal::Schema s;
  s.clusters = {areal::Cluster{2, 1, std::nullopt, std::nullopt}};
  auto column = [](std::string name, areal::VarType type, int col) {
    return areal::VariableSpec{std::move(name), type, std::nullopt, areal::CellRange{col, col}};
  };
  s.variables = {column("al2", areal::VarType::Id, 6), column("al3", areal::VarType::Id, 10),
                 column("year", areal::VarType::Id, 2), column("commodities", areal::VarType::Id, 16),
                 column("harvested", areal::VarType::Measured, 20)};
  s.naMarkers = {"", "-", "(D)", "(Z)"};
  return s;
}

// -- geometries --------------------------------------------------------------

namespace {

json ring(const areal::geom::MultiPolygon& mp) {
  json polys = json::array();
  for (const auto& p : mp) {
    json rings = json::array();
    json outer = json::array();
    for (const auto& v : p.outer) outer.push_back({v.x, v.y});
    outer.push_back({p.outer.front().x, p.outer.front().y});
    rings.push_back(outer);
    polys.push_back(rings);
  }
  return {{"type", "MultiPolygon"}, {"coordinates", polys}};
}

struct Cell {
  json properties;
  areal::geom::MultiPolygon shape;
};

std::string collection(const std::vector<Cell>& cells) {
  json features = json::array();
  for (const auto& c : cells)
    features.push_back({{"type", "Feature"}, {"properties", c.properties}, {"geometry", ring(c.shape)}});
  return json{{"type", "FeatureCollection"}, {"features", features}}.dump(1);
}

std::string twoDigits(int i) { return (i < 10 ? "0" : "") + std::to_string(i); }

}  // namespace

std::string nationsGeoJson() {
  std::vector<Cell> cells;
  // 31 names sort before "brazil", 37 between "brazil" and "estonia"
  for (int i = 1; i <= 31; ++i)
    cells.push_back({{{"name", "aa filler " + twoDigits(i)}}, rect(-179 + 2.0 * i, 70, -178 + 2.0 * i, 71)});
  for (int i = 1; i <= 37; ++i)
    cells.push_back({{{"name", "ca filler " + twoDigits(i)}}, rect(-179 + 2.0 * i, 74, -178 + 2.0 * i, 75)});
  cells.push_back({{{"name", "estonia"}}, rect(21, 57, 28, 60)});
  cells.push_back({{{"name", "brazil"}}, rect(-75, -15, -55, -5)});
  cells.push_back({{{"name", "united states of america"}}, rect(-125, 25, -66, 49)});
  return collection(cells);
}

std::string brazilMunicipalitiesGeoJson() {
  std::vector<Cell> cells;
  const std::vector<std::string> acre{"Acrelândia", "Assis Brasil", "Brasiléia"};
  for (std::size_t i = 0; i < acre.size(); ++i) {
    const double x = -74 + 2.0 * static_cast<double>(i);
    cells.push_back({{{"state", "Acre"}, {"municipality", acre[i]}}, rect(x, -11, x + 2, -8)});
  }
  const std::vector<std::string> ro{"Alta Floresta D'Oeste", "Ariquemes", "Cabixi", "Cacoal", "Cerejeiras"};
  for (std::size_t i = 0; i < ro.size(); ++i) {
    const double x = -66 + 1.0 * static_cast<double>(i);
    cells.push_back({{{"state", "Rondônia"}, {"municipality", ro[i]}}, rect(x, -13, x + 1, -9)});
  }
  return collection(cells);
}

std::string usCountiesGeoJson() {
  std::vector<Cell> cells;
  const std::vector<std::string> al{"Baldwin", "Blount", "Cherokee", "Dallas", "Elmore", "Perry", "Sumter"};
  for (std::size_t i = 0; i < al.size(); ++i) {
    const double x = -88 + 0.4 * static_cast<double>(i);
    cells.push_back({{{"STATE_NAME", "Alabama"}, {"NAME", al[i]}}, rect(x, 31, x + 0.4, 33)});
  }
  cells.push_back({{{"STATE_NAME", "Iowa"}, {"NAME", "Adair"}}, rect(-95, 41, -94, 42)});
  cells.push_back({{{"STATE_NAME", "Iowa"}, {"NAME", "Boone"}}, rect(-94, 41, -93, 42)});
  return collection(cells);
}

std::string estoniaCountiesGeoJson() {
  // 12 counties sort ahead of tartu
  const std::vector<std::string> counties{"Võru",  "Harju",       "Hiiu",   "Saare", "Ida-Viru", "Jõgeva", "Järva",
                                          "Tartu", "Lääne-Viru", "Lääne",  "Põlva", "Pärnu",    "Rapla",  "Tallinn"};
  std::vector<Cell> cells;
  for (std::size_t i = 0; i < counties.size(); ++i) {
    const double x = 21 + 0.5 * static_cast<double>(i % 7);
    const double y = 57.5 + 1.0 * static_cast<double>(i / 7);
    cells.push_back({{{"county", counties[i]}}, rect(x, y, x + 0.5, y + 1)});
  }
  return collection(cells);
}

// -- vocabularies ------------------------------------------------------------

std::string commodityIndexCsv() { return "term,faoID,notes\nsoybean,236,\nmaize,56,\nwheat,15,\n"; }

std::string commodityTranslationsCsv() {
  return "origin,target,source,ID,notes\nSoja,soybean,,,\nSOYBEANS,soybean,,,\n";
}

std::string stateTranslationsCsv() { return "origin,target,source,ID,notes\nRO,Rondônia,,,\nAC,Acre,,,\n"; }

// -- end-to-end database -------------------------------------------------------

Registered buildDatabase(const fs::path& root, const fs::path& scratch) {
  using namespace areal;
  const auto db = Database::init(root);
  writeFile(scratch / "faostat.csv", commodityIndexCsv());
  writeFile(scratch / "commodities_seed.csv", commodityTranslationsCsv());
  writeFile(scratch / "al2_seed.csv", stateTranslationsCsv());
  std::vector<VariableDef> defs(2);
  defs[0].name = "al2";
  defs[0].seedTranslations = scratch / "al2_seed.csv";
  defs[1].name = "commodities";
  defs[1].indexSource = scratch / "faostat.csv";
  defs[1].seedTranslations = scratch / "commodities_seed.csv";
  defs[1].conceptIdName = "faoID";
  setVariables(db, defs);

  Registered r;
  r.gadm = regDataseries(db, "gadm", "Database of Global Administrative Areas", "https://gadm.org", "CC BY").datID;
  r.ibge = regDataseries(db, "ibge", "Instituto Brasileiro de Geografia e Estatística", "https://sidra.ibge.gov.br",
                         "open")
               .datID;
  r.usda = regDataseries(db, "usda", "USDA NASS quickstats", "https://quickstats.nass.usda.gov", "public domain").datID;

  writeFile(scratch / "nations.geojson", nationsGeoJson());
  writeFile(scratch / "bra_municipalities.geojson", brazilMunicipalitiesGeoJson());
  writeFile(scratch / "usa_counties.geojson", usCountiesGeoJson());
  GeometryRegistration g;
  g.file = scratch / "nations.geojson";
  g.datID = r.gadm;
  g.nation = "global";
  g.level = 1;
  g.nameColumns = {"name"};
  r.nationsGeo = regGeometry(db, g).geoID;
  g.file = scratch / "bra_municipalities.geojson";
  g.datID = r.ibge;
  g.nation = "brazil";
  g.level = 3;
  g.nameColumns = {"state", "municipality"};
  r.brazilGeo = regGeometry(db, g).geoID;
  g.file = scratch / "usa_counties.geojson";
  g.datID = r.usda;
  g.nation = "usa";
  g.nameColumns = {"STATE_NAME", "NAME"};
  r.usGeo = regGeometry(db, g).geoID;

  writeFile(scratch / "brazil_soy.csv", brazilTableCsv());
  writeFile(scratch / "usa_soy.csv", usTableCsv());
  TableRegistration t;
  t.file = scratch / "brazil_soy.csv";
  t.datID = r.ibge;
  t.geoID = r.brazilGeo;
  t.nation = "brazil";
  t.level = 3;
  t.subject = "soy";
  t.yearBegin = 2000;
  t.yearEnd = 2018;
  t.schema = brazilSchema();
  r.brazilTab = regTable(db, t).tabID;
  t.file = scratch / "usa_soy.csv";
  t.datID = r.usda;
  t.geoID = r.usGeo;
  t.nation = "usa";
  t.schema = usSchema();
  t.unitFactor = kAcresToHectares;
  r.usTab = regTable(db, t).tabID;
  return r;
}

Registered buildNormalisedDatabase(const fs::path& root, const fs::path& scratch) {
  using namespace areal;
  const auto r = buildDatabase(root, scratch);
  const auto db = Database::open(root);
  normGeometry(db);
  const auto first = normTable(db);
  ReviewService service(db);
  for (const auto& item : first.pending) {
    ReviewDecision d;
    d.kind = ReviewDecision::Kind::Ignore;
    service.resolve(item.id, d);
  }
  normTable(db);
  return r;
}

}  // namespace fixtures
