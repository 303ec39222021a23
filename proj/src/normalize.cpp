#include "areal/normalize.hpp"

#include <algorithm>
#include <map>
#include <set>

#include "areal/csv.hpp"
#include "areal/error.hpp"
#include "areal/gazetteer.hpp"
#include "areal/nations.hpp"
#include "areal/registration.hpp"
#include "areal/text.hpp"

namespace areal {

namespace {

const Row kQuarantineHeader{"tabID", "source_row", "reason", "variable", "term", "record"};

bool isUnitColumn(std::string_view name) {
  return name.size() > 2 && name.substr(0, 2) == "al" &&
         std::all_of(name.begin() + 2, name.end(), [](char c) { return c >= '0' && c <= '9'; });
}

std::string describe(const TidyTable& tidy, const TidyTable::Record& r) {
  std::vector<std::string> parts;
  for (std::size_t i = 0; i < tidy.idNames.size(); ++i) parts.push_back(tidy.idNames[i] + "=" + r.ids[i]);
  for (std::size_t i = 0; i < tidy.measuredNames.size(); ++i)
    parts.push_back(tidy.measuredNames[i] + "=" + (r.values[i] ? text::formatNumber(*r.values[i]) : "NA"));
  return text::join(parts, "; ");
}

std::string joinPending(const std::vector<QueueItem>& items) {
  std::string list;
  for (const auto& p : items) list += (list.empty() ? "" : ", ") + p.variable + "=" + p.term;
  return list;
}

}  // namespace

std::filesystem::path stage3TableFile(const Database& db, std::string_view nation) {
  return db.tablesDir(3) / (nationFileStem(nation) + ".csv");
}

std::filesystem::path quarantineFile(const Database& db, std::string_view nation) {
  return db.tablesDir(3) / (nationFileStem(nation) + "_unresolved.csv");
}

ConceptMatch matchVars(const TidyTable& tidy, std::string_view variable, const IndexTable& index,
                       TranslationTable& translations, const TranslateOptions& base) {
  const auto col = tidy.idIndex(variable);
  if (!col) throw Error(Errc::LevelMissing, "table has no column '" + std::string(variable) + "'");
  ConceptMatch out;
  out.ids.resize(tidy.rows.size());
  out.ignored.resize(tidy.rows.size(), false);
  std::vector<std::string> terms;
  std::set<std::string> seen;
  for (const auto& r : tidy.rows)
    if (seen.insert(r.ids[*col]).second) terms.push_back(r.ids[*col]);

  TranslateOptions opts = base;
  opts.variable = std::string(variable);
  opts.vocabulary = index.terms;
  opts.index = &index;
  opts.strict = false;
  const auto tr = translateTerms(terms, translations, opts);
  out.pending = tr.pending;
  const std::set<std::string> ignored(tr.ignored.begin(), tr.ignored.end());
  for (std::size_t i = 0; i < tidy.rows.size(); ++i) {
    const auto& term = tidy.rows[i].ids[*col];
    if (auto it = tr.mapping.find(term); it != tr.mapping.end()) out.ids[i] = index.conceptId(it->second);
    out.ignored[i] = ignored.count(term) > 0;
  }
  if (base.strict && !out.pending.empty())
    throw Error(Errc::UnresolvedConcepts, std::to_string(out.pending.size()) + " unresolved term(s): " + joinPending(out.pending));
  return out;
}

TableNormReport normTable(const Database& db, const TableNormOptions& options) {
  TableNormReport report;
  auto guard = db.lockForWrite();
  const Gazetteer gaz = Gazetteer::load(db.gazetteerFile());
  ReviewQueue queue(db.queueFile());
  std::map<std::string, TranslationTable> translations;
  auto tableFor = [&](const std::string& variable) -> TranslationTable& {
    auto it = translations.find(variable);
    if (it == translations.end()) it = translations.emplace(variable, TranslationTable::open(db.translationFile(variable))).first;
    return it->second;
  };
  const auto defs = variables(db);
  std::map<std::string, IndexTable> indexes;
  for (const auto& d : defs)
    if (auto idx = loadIndex(db, d)) indexes.emplace(d.name, std::move(*idx));

  auto records = tables(db);
  if (options.tabIDs)
    for (auto id : *options.tabIDs)
      if (std::none_of(records.begin(), records.end(), [&](const TableRecord& r) { return r.tabID == id; }))
        throw Error(Errc::InvalidArgument, "no table with tabID " + std::to_string(id));

  bool unitsPending = false;
  for (const auto& rec : records) {
    if (options.tabIDs && std::find(options.tabIDs->begin(), options.tabIDs->end(), rec.tabID) == options.tabIDs->end())
      continue;
    if (isProcessed(db, InventoryKind::Table, rec.tabID)) continue;
    if (!isProcessed(db, InventoryKind::Geometry, rec.geoID))
      throw Error(Errc::GeometryNotNormalised, "tabID " + std::to_string(rec.tabID) + " refers to geoID " +
                                                   std::to_string(rec.geoID) + ", which is not normalised yet");

    const auto raw = RawTable::readCsv(tableStagePath(db, rec));
    const auto schema = loadSchema(db.schemasDir() / rec.schema);
    const auto tidy = reorganise(raw, schema);
    const Scope scope{SourceKind::TabID, rec.tabID};
    TableNormEntry entry;
    entry.tabID = rec.tabID;
    entry.nation = rec.nation;
    entry.tidyRows = tidy.rows.size();

    UnitMatchOptions uopts;
    uopts.nation = rec.nation == kGlobalNation ? "" : rec.nation;
    uopts.level = rec.level;
    uopts.scope = scope;
    uopts.fuzzy = options.fuzzy;
    uopts.resolver = options.resolver;
    uopts.queue = &queue;
    uopts.translations = [&](int level) { return &tableFor(levelColumn(level)); };
    const auto units = matchUnits(tidy, gaz, uopts);
    std::vector<QueueItem> pending = units.pending;
    if (!units.pending.empty()) unitsPending = true;

    // identifying variables with an index table become concept-ID columns
    struct Concept {
      std::string variable;
      std::string column;
      ConceptMatch match;
    };
    std::vector<Concept> concepts;
    for (const auto& name : tidy.idNames) {
      if (isUnitColumn(name)) continue;
      auto it = indexes.find(name);
      if (it == indexes.end()) continue;
      TranslateOptions base;
      base.scope = scope;
      base.fuzzy = options.fuzzy;
      base.resolver = options.resolver;
      base.queue = &queue;
      auto m = matchVars(tidy, name, it->second, tableFor(name), base);
      pending.insert(pending.end(), m.pending.begin(), m.pending.end());
      concepts.push_back({name, it->second.conceptIdName, std::move(m)});
    }

    if (!pending.empty()) {
      entry.deferred = true;
      report.pending.insert(report.pending.end(), pending.begin(), pending.end());
      report.tables.push_back(entry);
      continue;
    }

    Row header{"id", "tabID", "geoID", "ahID"};
    std::vector<std::size_t> keptIds;
    for (std::size_t i = 0; i < tidy.idNames.size(); ++i) {
      const auto& name = tidy.idNames[i];
      if (isUnitColumn(name) ||
          std::any_of(concepts.begin(), concepts.end(), [&](const Concept& c) { return c.variable == name; }))
        continue;
      keptIds.push_back(i);
      header.push_back(name);
    }
    for (const auto& m : tidy.measuredNames) header.push_back(m);
    for (const auto& c : concepts) header.push_back(c.column);

    const auto outFile = stage3TableFile(db, rec.nation);
    std::int64_t nextRowId = 1;
    if (std::filesystem::exists(outFile) && std::filesystem::file_size(outFile) > 0) {
      const auto existing = CsvTable::read(outFile);
      if (existing.header != header)
        throw Error(Errc::OutputColumnMismatch, outFile.string() + " has columns (" + text::join(existing.header, ", ") +
                                                    ") but tabID " + std::to_string(rec.tabID) + " produces (" +
                                                    text::join(header, ", ") + ")");
      for (const auto& r : existing.rows)
        if (auto v = text::parseInteger(r[0])) nextRowId = std::max<std::int64_t>(nextRowId, *v + 1);
    }

    std::vector<Row> out, quarantined;
    for (std::size_t i = 0; i < tidy.rows.size(); ++i) {
      const auto& r = tidy.rows[i];
      const auto& u = units.rows[i];
      auto quarantine = [&](std::string reason, std::string variable, std::string term) {
        quarantined.push_back({std::to_string(rec.tabID), std::to_string(r.sourceRow), std::move(reason),
                               std::move(variable), std::move(term), describe(tidy, r)});
      };
      if (!u.ahId) {
        quarantine(u.ignored ? "IgnoredUnit" : "UnresolvedUnit", levelColumn(u.failedLevel), u.failedTerm);
        continue;
      }
      const auto missing = std::find_if(concepts.begin(), concepts.end(), [&](const Concept& c) { return !c.match.ids[i]; });
      if (missing != concepts.end()) {
        quarantine(missing->match.ignored[i] ? "IgnoredConcept" : "UnresolvedConcept", missing->variable,
                   r.ids[*tidy.idIndex(missing->variable)]);
        continue;
      }
      Row row{std::to_string(nextRowId++), std::to_string(rec.tabID), std::to_string(rec.geoID),
              std::to_string(u.ahId->numeric())};
      for (auto k : keptIds) row.push_back(r.ids[k]);
      for (const auto& v : r.values) row.push_back(v ? text::formatNumber(*v * rec.unitFactor) : "NA");
      for (const auto& c : concepts) row.push_back(*c.match.ids[i]);
      out.push_back(std::move(row));
    }

    csv::appendRows(outFile, header, out);
    if (!quarantined.empty()) csv::appendRows(quarantineFile(db, rec.nation), kQuarantineHeader, quarantined);
    entry.written = out.size();
    entry.quarantined = quarantined.size();
    report.tables.push_back(entry);
    markProcessed(db, InventoryKind::Table, rec.tabID);

    const bool shared = std::any_of(records.begin(), records.end(), [&](const TableRecord& other) {
      return other.tabID != rec.tabID && other.stage2Name == rec.stage2Name &&
             !isProcessed(db, InventoryKind::Table, other.tabID);
    });
    const auto staged = db.tablesDir(2) / rec.stage2Name;
    if (!shared && std::filesystem::exists(staged))
      std::filesystem::rename(staged, db.processedTablesDir() / rec.stage2Name);
  }

  if (options.strict && !report.pending.empty())
    throw Error(unitsPending ? Errc::UnresolvedUnits : Errc::UnresolvedConcepts,
                std::to_string(report.pending.size()) + " pending review item(s): " + joinPending(report.pending));
  return report;
}

}  // namespace areal
