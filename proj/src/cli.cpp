#include "areal/cli.hpp"

#include <CLI11.hpp>

#include <cstdlib>
#include <iostream>
#include <map>

#include "areal/crs.hpp"
#include "areal/error.hpp"
#include "areal/gazetteer.hpp"
#include "areal/geometry_norm.hpp"
#include "areal/inventory.hpp"
#include "areal/normalize.hpp"
#include "areal/registration.hpp"
#include "areal/review_service.hpp"
#include "areal/schema.hpp"
#include "areal/text.hpp"

namespace areal::cli {

namespace {

constexpr const char* kDbEnv = "AREAL_DB_ROOT";

/// Terminal review: ranked suggestions, accept by number, type a target,
/// '!' to ignore, empty line to defer.
class TerminalResolver : public Resolver {
public:
  TerminalResolver(std::istream& in, std::ostream& err) : in_(in), err_(err) {}

  Resolution resolve(const QueueItem& item) override {
    Resolution r;
    r.resolver = "terminal";
    err_ << "\n";
    if (item.kind == ItemKind::Geometry) {
      err_ << "unit '" << item.term << "' (" << item.variable << ", geoID " << (item.scope ? item.scope->id : 0)
           << ") overlaps several units under " << item.parentAhId << ":\n";
      for (std::size_t i = 0; i < item.candidates.size(); ++i)
        err_ << "  [" << i + 1 << "] " << item.candidates[i].name << "  " << item.candidates[i].ahId << "  "
             << text::formatNumber(item.candidates[i].fraction) << "\n";
      err_ << "number to accept, 'new' for a new unit, '!' to ignore, empty to defer: " << std::flush;
    } else {
      err_ << item.variable << ": '" << item.term << "'";
      if (item.scope) err_ << " (" << sourceKindName(item.scope->kind) << " " << item.scope->id << ")";
      err_ << " has no translation\n";
      for (std::size_t i = 0; i < item.suggestions.size(); ++i)
        err_ << "  [" << i + 1 << "] " << item.suggestions[i].candidate << "  "
             << text::formatNumber(item.suggestions[i].distance) << "\n";
      err_ << "number to accept, a term to translate to, '!' to ignore, empty to defer: " << std::flush;
    }
    std::string line;
    if (!std::getline(in_, line)) return r;
    line = text::trim(line);
    if (line.empty()) return r;
    if (line == "!") {
      r.kind = Resolution::Kind::Ignore;
      return r;
    }
    const auto n = text::parseInteger(line);
    const std::size_t count = item.kind == ItemKind::Geometry ? item.candidates.size() : item.suggestions.size();
    r.kind = Resolution::Kind::Target;
    if (n && *n >= 1 && static_cast<std::size_t>(*n) <= count) {
      r.target = item.kind == ItemKind::Geometry ? item.candidates[static_cast<std::size_t>(*n - 1)].ahId
                                                 : item.suggestions[static_cast<std::size_t>(*n - 1)].candidate;
    } else {
      r.target = line;
    }
    return r;
  }

private:
  std::istream& in_;
  std::ostream& err_;
};

std::vector<std::int64_t> parseIds(const std::string& list) {
  std::vector<std::int64_t> ids;
  for (const auto& part : text::split(list, ',')) {
    const auto v = text::parseInteger(text::trim(part));
    if (!v || *v <= 0) throw Error(Errc::InvalidArgument, "bad id '" + part + "' in --ids");
    ids.push_back(*v);
  }
  return ids;
}

void printPending(std::ostream& err, const std::vector<QueueItem>& items) {
  if (items.empty()) return;
  err << "pending review items:\n";
  for (const auto& i : items) {
    err << "  #" << i.id << " " << itemKindName(i.kind) << " " << i.variable << "='" << i.term << "'";
    if (i.scope) err << " " << sourceKindName(i.scope->kind) << "=" << i.scope->id;
    if (!i.suggestions.empty()) err << " suggestion: " << i.suggestions.front().candidate;
    err << "\n";
  }
}

struct Settings {
  std::string db;
  bool strict = false;
  bool interactive = false;
  std::string review;
  int port = 8765;
  std::string host = "127.0.0.1";
  std::string staticDir;
  double threshold = 0.9;
  double margin = 0.1;
  double reviewFloor = 0.5;
  double fuzzyCutoff = 0.4;
  std::size_t fuzzyK = 10;
  std::string ids;
  std::string format = "gpkg";
};

}  // namespace

int run(int argc, const char* const* argv, std::istream& in, std::ostream& out, std::ostream& err) {
  Settings s;
  if (const char* env = std::getenv(kDbEnv)) s.db = env;

  CLI::App app{"Harmonise areal statistics and territorial-unit geometries into one database", "areal"};
  app.set_version_flag("--version", AREAL_VERSION);
  app.require_subcommand(1);
  app.add_option("--db", s.db, std::string("database root (default: $") + kDbEnv + ")");

  // init
  std::string initPath;
  auto* init = app.add_subcommand("init", "create the database layout (idempotent)");
  init->add_option("path", initPath, "database root (overrides --db)");

  // variables
  auto* vars = app.add_subcommand("variables", "manage variables");
  vars->require_subcommand(1);
  VariableDef def;
  std::string kindText = "identifying", indexFile, seedFile;
  auto* varsAdd = vars->add_subcommand("add", "define a variable and create its index and translation tables");
  varsAdd->add_option("name", def.name, "variable name")->required();
  varsAdd->add_option("--kind", kindText, "identifying or measured")->check(CLI::IsMember({"identifying", "measured"}));
  varsAdd->add_option("--index", indexFile, "term/concept-ID table to copy in")->check(CLI::ExistingFile);
  varsAdd->add_option("--concept-id", def.conceptIdName, "concept-ID column of the index table");
  varsAdd->add_option("--translations", seedFile, "seed translation table")->check(CLI::ExistingFile);
  auto* varsList = vars->add_subcommand("list", "list defined variables");

  // register
  auto* reg = app.add_subcommand("register", "register stage2 inputs");
  reg->require_subcommand(1);
  std::string dsName, dsDescription, dsHomepage, dsLicence, notes;
  auto* regDs = reg->add_subcommand("dataseries", "document a data series");
  regDs->add_option("name", dsName, "short lowercase tag")->required();
  regDs->add_option("--description", dsDescription);
  regDs->add_option("--homepage", dsHomepage);
  regDs->add_option("--licence", dsLicence);
  regDs->add_option("--notes", notes);

  GeometryRegistration greg;
  std::string nameColumns, crsText;
  auto* regGeo = reg->add_subcommand("geometry", "register a GeoPackage or GeoJSON layer");
  regGeo->add_option("file", greg.file)->required()->check(CLI::ExistingFile);
  regGeo->add_option("--datid", greg.datID, "owning dataseries")->required();
  regGeo->add_option("--nation", greg.nation, "nation name or alpha-3 code, or 'global'")->required();
  regGeo->add_option("--level", greg.level, "administrative level of the units (1 = nation)")->required();
  regGeo->add_option("--layer", greg.layer, "layer name for GeoPackages");
  regGeo->add_option("--name-columns", nameColumns, "comma-separated name columns, one per level ending at --level")
      ->required();
  regGeo->add_option("--crs", crsText, "reference system when the file lacks one, e.g. EPSG:4326");
  regGeo->add_option("--notes", greg.notes);

  TableRegistration treg;
  std::string schemaFile;
  auto* regTab = reg->add_subcommand("table", "register a delimited table with its schema");
  regTab->add_option("file", treg.file)->required()->check(CLI::ExistingFile);
  regTab->add_option("--datid", treg.datID)->required();
  regTab->add_option("--geoid", treg.geoID, "geometry the table refers to")->required();
  regTab->add_option("--nation", treg.nation)->required();
  regTab->add_option("--level", treg.level)->required();
  regTab->add_option("--subject", treg.subject)->required();
  regTab->add_option("--begin", treg.yearBegin, "first year")->required();
  regTab->add_option("--end", treg.yearEnd, "last year")->required();
  regTab->add_option("--schema", schemaFile, "schema description (YAML)")->required()->check(CLI::ExistingFile);
  regTab->add_option("--unit-factor", treg.unitFactor, "factor converting measured values to canonical units");
  regTab->add_option("--notes", treg.notes);

  // normalize
  auto* norm = app.add_subcommand("normalize", "build stage3 outputs");
  norm->require_subcommand(1);
  auto addNormOptions = [&](CLI::App* c) {
    c->add_option("--ids", s.ids, "comma-separated IDs to normalise (default: all pending)");
    c->add_flag("--strict", s.strict, "fail with exit code 2 when review items remain");
    c->add_flag("--interactive", s.interactive, "resolve items at the terminal");
    c->add_option("--review", s.review, "'web' runs the review service while normalising")->check(CLI::IsMember({"web"}));
    c->add_option("--port", s.port, "review service port");
    c->add_option("--static", s.staticDir, "review UI assets to serve");
    c->add_option("--threshold", s.threshold, "overlap fraction that accepts a match");
    c->add_option("--margin", s.margin, "required lead of the best overlap over the runner-up");
    c->add_option("--review-floor", s.reviewFloor, "overlap below which a unit is new");
    c->add_option("--fuzzy-cutoff", s.fuzzyCutoff, "largest normalised edit distance suggested");
    c->add_option("--fuzzy-k", s.fuzzyK, "number of suggestions");
    c->add_option("--format", s.format, "stage3 geometry format")->check(CLI::IsMember({"gpkg", "geojson"}));
  };
  auto* normGeo = norm->add_subcommand("geometries", "normalise registered geometries");
  auto* normTab = norm->add_subcommand("tables", "normalise registered tables");
  auto* normAll = norm->add_subcommand("all", "geometries, then tables");
  for (auto* c : {normGeo, normTab, normAll}) addNormOptions(c);

  auto* status = app.add_subcommand("status", "inventory and queue summary");

  auto* schemaCmd = app.add_subcommand("schema", "inspect schema descriptions");
  schemaCmd->require_subcommand(1);
  std::string schemaPath, tablePath;
  std::int64_t schemaTab = 0;
  auto* schemaShow = schemaCmd->add_subcommand("show", "print a schema in tabular form");
  schemaShow->add_option("schema", schemaPath, "schema file")->check(CLI::ExistingFile);
  schemaShow->add_option("--tab", schemaTab, "schema of a registered table");
  auto* schemaCheck = schemaCmd->add_subcommand("check", "validate a schema against a table");
  schemaCheck->add_option("schema", schemaPath)->required()->check(CLI::ExistingFile);
  schemaCheck->add_option("table", tablePath)->required()->check(CLI::ExistingFile);

  auto* serve = app.add_subcommand("serve", "run the review service");
  serve->add_option("--port", s.port);
  serve->add_option("--host", s.host, "bind address (loopback by default)");
  serve->add_option("--static", s.staticDir, "review UI assets to serve");

  try {
    try {
      app.parse(argc, argv);
    } catch (const CLI::ParseError& e) {
      const int code = app.exit(e, out, err);
      return code == 0 ? 0 : 1;
    }

    auto openDb = [&]() {
      if (s.db.empty()) throw Error(Errc::InvalidArgument, std::string("no database: pass --db or set ") + kDbEnv);
      return Database::open(s.db);
    };

    if (*init) {
      const auto root = initPath.empty() ? s.db : initPath;
      if (root.empty()) throw Error(Errc::InvalidArgument, "init needs a path");
      Database::init(root);
      err << "initialised " << root << "\n";
      return 0;
    }

    if (*varsAdd) {
      const auto db = openDb();
      def.kind = parseVariableKind(kindText);
      if (!indexFile.empty()) def.indexSource = indexFile;
      if (!seedFile.empty()) def.seedTranslations = seedFile;
      const std::vector<VariableDef> defs{def};
      setVariables(db, defs);
      err << "variable " << def.name << " added\n";
      return 0;
    }
    if (*varsList) {
      const auto db = openDb();
      for (const auto& v : variables(db))
        out << v.name << ": " << variableKindName(v.kind) << (loadIndex(db, v) ? " (indexed)" : "") << "\n";
      return 0;
    }

    if (*regDs) {
      const auto rec = regDataseries(openDb(), dsName, dsDescription, dsHomepage, dsLicence, notes);
      out << "datID: " << rec.datID << "\n";
      return 0;
    }
    if (*regGeo) {
      greg.nameColumns = text::split(nameColumns, ',');
      for (auto& c : greg.nameColumns) c = text::trim(c);
      if (!crsText.empty()) {
        greg.epsg = crs::parseCrsName(crsText);
        if (!greg.epsg) throw Error(Errc::UnknownSourceCrs, "cannot read reference system '" + crsText + "'");
      }
      const auto rec = regGeometry(openDb(), greg);
      out << "geoID: " << rec.geoID << "\nstage2: " << rec.stage2Name << "\n";
      return 0;
    }
    if (*regTab) {
      treg.schema = loadSchema(schemaFile);
      const auto rec = regTable(openDb(), treg);
      out << "tabID: " << rec.tabID << "\nstage2: " << rec.stage2Name << "\n";
      return 0;
    }

    if (*normGeo || *normTab || *normAll) {
      const auto db = openDb();
      FuzzyConfig fuzzy{s.fuzzyCutoff, s.fuzzyK};
      std::unique_ptr<ReviewService> service;
      std::unique_ptr<ReviewServer> server;
      std::unique_ptr<Resolver> resolver;
      if (s.review == "web") {
        service = std::make_unique<ReviewService>(db, fuzzy);
        server = std::make_unique<ReviewServer>(*service, s.host, s.port,
                                                s.staticDir.empty() ? std::nullopt
                                                                    : std::optional<std::filesystem::path>(s.staticDir));
        const int port = server->start();
        err << "review service on http://" << s.host << ":" << port << "/\n";
        resolver = std::make_unique<WebResolver>(service->queue());
      } else if (s.interactive) {
        resolver = std::make_unique<TerminalResolver>(in, err);
      }
      std::optional<std::vector<std::int64_t>> ids;
      if (!s.ids.empty()) ids = parseIds(s.ids);

      std::vector<QueueItem> pending;
      int code = 0;
      auto strictFailure = [&](const Error& e, const std::vector<QueueItem>& items) {
        err << "error: " << e.what() << "\n";
        printPending(err, items);
        code = 2;
      };

      if (*normGeo || *normAll) {
        GeometryNormOptions g;
        g.geoIDs = *normGeo ? ids : std::nullopt;
        g.threshold = s.threshold;
        g.margin = s.margin;
        g.reviewFloor = s.reviewFloor;
        g.fuzzy = fuzzy;
        g.resolver = resolver.get();
        g.format = s.format == "geojson" ? vec::Format::GeoJson : vec::Format::GeoPackage;
        GeometryNormOptions lenient = g;
        lenient.strict = false;
        const auto report = normGeometry(db, lenient);
        std::map<std::string, int> counts;
        for (const auto& u : report.units) ++counts[std::string(unitOutcomeName(u.outcome))];
        err << "geometries: " << report.processed.size() << " normalised, " << report.deferred.size()
            << " waiting for review\n";
        for (const auto& [k, v] : counts) err << "  units " << k << ": " << v << "\n";
        for (const auto& u : report.units)
          if (u.outcome == UnitOutcome::Rejected) err << "  rejected geoID " << u.geoID << " feature " << u.feature << ": " << u.note << "\n";
        pending.insert(pending.end(), report.pending.begin(), report.pending.end());
        if (s.strict && !report.pending.empty()) {
          strictFailure(Error(Errc::UnresolvedUnits, std::to_string(report.pending.size()) + " geometry decision(s) pending"),
                        report.pending);
          return code;
        }
      }
      if (*normTab || *normAll) {
        TableNormOptions t;
        t.tabIDs = *normTab ? ids : std::nullopt;
        t.fuzzy = fuzzy;
        t.resolver = resolver.get();
        const auto report = normTable(db, t);
        for (const auto& e : report.tables) {
          err << "tabID " << e.tabID << " (" << e.nation << "): ";
          if (e.deferred) err << "waiting for review\n";
          else err << e.written << " rows written, " << e.quarantined << " quarantined\n";
        }
        pending.insert(pending.end(), report.pending.begin(), report.pending.end());
        if (s.strict && !report.pending.empty()) {
          const bool units = std::any_of(report.pending.begin(), report.pending.end(),
                                         [](const QueueItem& i) { return i.variable.rfind("al", 0) == 0; });
          strictFailure(Error(units ? Errc::UnresolvedUnits : Errc::UnresolvedConcepts,
                              std::to_string(report.pending.size()) + " review item(s) pending"),
                        report.pending);
          return code;
        }
      }
      if (!pending.empty()) {
        err << pending.size() << " item(s) wait for review; run 'areal serve' or normalise with --interactive\n";
        printPending(err, pending);
      }
      return code;
    }

    if (*status) {
      const auto db = openDb();
      const auto ds = dataseries(db);
      const auto geos = geometries(db);
      const auto tabs = tables(db);
      std::size_t geoDone = 0, tabDone = 0;
      for (const auto& g : geos) geoDone += isProcessed(db, InventoryKind::Geometry, g.geoID);
      for (const auto& t : tabs) tabDone += isProcessed(db, InventoryKind::Table, t.tabID);
      const ReviewQueue queue(db.queueFile());
      out << "database: " << db.root().string() << "\n"
          << "variables: " << variables(db).size() << "\n"
          << "dataseries: " << ds.size() << "\n"
          << "geometries: " << geos.size() << "\n"
          << "geometries_normalised: " << geoDone << "\n"
          << "tables: " << tabs.size() << "\n"
          << "tables_normalised: " << tabDone << "\n"
          << "gazetteer_units: " << Gazetteer::load(db.gazetteerFile()).size() << "\n"
          << "queue_pending: " << queue.items(ItemStatus::Pending).size() << "\n"
          << "queue_resolved: " << queue.items(ItemStatus::Resolved).size() << "\n"
          << "queue_ignored: " << queue.items(ItemStatus::Ignored).size() << "\n";
      return 0;
    }

    if (*schemaShow) {
      std::filesystem::path p = schemaPath;
      if (schemaTab > 0) {
        const auto db = openDb();
        const auto rec = findTable(db, schemaTab);
        if (!rec) throw Error(Errc::InvalidArgument, "no table with tabID " + std::to_string(schemaTab));
        p = db.schemasDir() / rec->schema;
      }
      if (p.empty()) throw Error(Errc::InvalidArgument, "schema show needs a file or --tab");
      out << renderSchema(loadSchema(p));
      return 0;
    }
    if (*schemaCheck) {
      const auto diags = validateSchema(loadSchema(schemaPath), RawTable::readCsv(tablePath));
      if (diags.empty()) {
        out << "ok\n";
        return 0;
      }
      out << formatDiagnostics(diags);
      return 1;
    }

    if (*serve) {
      ReviewService service(openDb());
      ReviewServer server(service, s.host, s.port,
                          s.staticDir.empty() ? std::nullopt : std::optional<std::filesystem::path>(s.staticDir));
      err << "review service on http://" << s.host << ":" << s.port << "/\n";
      server.run();
      return 0;
    }
  } catch (const Error& e) {
    err << "error: " << e.what() << "\n";
    return isUnresolvedError(e.code()) ? 2 : 1;
  } catch (const std::filesystem::filesystem_error& e) {
    err << "error: Io: " << e.what() << "\n";
    return 1;
  } catch (const std::exception& e) {
    err << "error: " << e.what() << "\n";
    return 1;
  }
  return 0;
}

}  // namespace areal::cli
