#include "areal/geometry_norm.hpp"

#include <algorithm>
#include <map>
#include <set>

#include "areal/crs.hpp"
#include "areal/error.hpp"
#include "areal/gazetteer.hpp"
#include "areal/geometry.hpp"
#include "areal/nations.hpp"
#include "areal/registration.hpp"
#include "areal/text.hpp"

namespace areal {

std::string_view unitOutcomeName(UnitOutcome outcome) {
  switch (outcome) {
    case UnitOutcome::NameMatch: return "name";
    case UnitOutcome::OverlapMatch: return "overlap";
    case UnitOutcome::Reviewed: return "reviewed";
    case UnitOutcome::Created: return "created";
    case UnitOutcome::Queued: return "queued";
    case UnitOutcome::Deferred: return "deferred";
    case UnitOutcome::Ignored: return "ignored";
    case UnitOutcome::Rejected: return "rejected";
  }
  return "";
}

std::filesystem::path stage3GeometryFile(const Database& db, std::string_view nation, vec::Format format) {
  return db.geometriesDir(3) / (nationFileStem(nation) + "." + std::string(vec::extensionOf(format)));
}

namespace {

constexpr std::string_view kNewUnit = "new";

vec::FeatureCollection stage3Layer(std::string layer) {
  vec::FeatureCollection fc;
  fc.layer = std::move(layer);
  fc.epsg = 4326;
  fc.fields = {{"ahID", vec::FieldType::Integer},
               {"level", vec::FieldType::Integer},
               {"name", vec::FieldType::Text},
               {"geoID", vec::FieldType::Integer}};
  return fc;
}

struct Unit {
  std::vector<std::string> chain;  // names from level 1
  geom::MultiPolygon geometry;     // WGS84, cleaned
  std::optional<AhId> at;          // deepest resolved unit
  bool alive = true;
  std::size_t report = 0;
};

/// Existing unit geometries of one nation by canonical ahID.
class Stage3Geometries {
public:
  Stage3Geometries(const Database& db, vec::Format format) : db_(db), format_(format) {}

  const geom::MultiPolygon* get(std::string_view nation, const AhId& id) {
    auto& cache = load(nation);
    auto it = cache.find(id.canonical());
    return it == cache.end() ? nullptr : &it->second;
  }

  void invalidate(std::string_view nation) { cache_.erase(nationFileStem(nation)); }

private:
  std::map<std::string, geom::MultiPolygon>& load(std::string_view nation) {
    const auto stem = nationFileStem(nation);
    if (auto it = cache_.find(stem); it != cache_.end()) return it->second;
    auto& out = cache_[stem];
    for (auto fmt : {format_, format_ == vec::Format::GeoPackage ? vec::Format::GeoJson : vec::Format::GeoPackage}) {
      const auto path = stage3GeometryFile(db_, nation, fmt);
      if (!std::filesystem::exists(path)) continue;
      const auto fc = vec::read(path);
      for (std::size_t i = 0; i < fc.features.size(); ++i) {
        const auto numeric = text::parseInteger(fc.value(i, "ahID"));
        const auto level = text::parseInteger(fc.value(i, "level"));
        if (!numeric || !level) continue;
        const auto id = AhId::fromNumeric(static_cast<std::uint64_t>(*numeric), static_cast<int>(*level)).canonical();
        out.emplace(id, fc.features[i].geometry);  // the first collection to introduce a unit sets its reference shape
      }
    }
    return out;
  }

  const Database& db_;
  vec::Format format_;
  std::map<std::string, std::map<std::string, geom::MultiPolygon>> cache_;
};

struct Choice {
  std::string ahId;  // canonical; kNewUnit for a new node; empty when still open
  bool ignored = false;
  bool pending = false;
  std::optional<QueueItem> item;
};

Choice decideGeometryItem(QueueItem item, ReviewQueue& queue, Resolver* resolver) {
  Choice c;
  item = queue.enqueueGeometry(std::move(item));
  if (item.status == ItemStatus::Pending && resolver) {
    const auto d = resolver->resolve(item);
    const bool open = queue.get(item.id).status == ItemStatus::Pending;
    if (d.kind == Resolution::Kind::Target && open) queue.markResolved(item.id, d.target, std::nullopt, d.resolver);
    else if (d.kind == Resolution::Kind::Ignore && open) queue.markIgnored(item.id, d.resolver);
    item = queue.get(item.id);
  }
  if (item.status == ItemStatus::Resolved) c.ahId = item.resolution;
  else if (item.status == ItemStatus::Ignored) c.ignored = true;
  else c.pending = true;
  c.item = std::move(item);
  return c;
}

}  // namespace

GeometryNormReport normGeometry(const Database& db, const GeometryNormOptions& options) {
  GeometryNormReport report;
  auto guard = db.lockForWrite();
  Gazetteer gaz = Gazetteer::load(db.gazetteerFile());
  ReviewQueue queue(db.queueFile());
  Stage3Geometries existing(db, options.format);
  std::map<int, TranslationTable> tables;
  auto tableFor = [&](int level) -> TranslationTable& {
    auto it = tables.find(level);
    if (it == tables.end()) it = tables.emplace(level, TranslationTable::open(db.translationFile(levelColumn(level)))).first;
    return it->second;
  };

  auto records = geometries(db);
  if (options.geoIDs) {
    for (auto id : *options.geoIDs)
      if (std::none_of(records.begin(), records.end(), [&](const GeometryRecord& r) { return r.geoID == id; }))
        throw Error(Errc::UnknownGeometry, "no geometry with geoID " + std::to_string(id));
  }

  for (const auto& rec : records) {
    if (options.geoIDs && std::find(options.geoIDs->begin(), options.geoIDs->end(), rec.geoID) == options.geoIDs->end())
      continue;
    if (isProcessed(db, InventoryKind::Geometry, rec.geoID)) continue;
    if (!rec.epsg)
      throw Error(Errc::UnknownSourceCrs, rec.stage2Name + " declares no reference system and none was registered");
    const auto from = crs::fromEpsg(*rec.epsg);
    const bool global = rec.nation == kGlobalNation;
    const auto fc = vec::read(geometryStagePath(db, rec), rec.layer);
    const Scope scope{SourceKind::GeoID, rec.geoID};
    const std::size_t firstReport = report.units.size();

    std::vector<Unit> units;
    for (std::size_t i = 0; i < fc.features.size(); ++i) {
      UnitReport ur;
      ur.geoID = rec.geoID;
      ur.feature = i;
      Unit u;
      u.chain.assign(static_cast<std::size_t>(rec.level), "");
      if (!global) u.chain[0] = rec.nation;
      for (std::size_t c = 0; c < rec.nameColumns.size(); ++c) {
        const int level = rec.levelOfColumn(c);
        if (level == 1 && !global) continue;
        u.chain[static_cast<std::size_t>(level - 1)] = text::trim(fc.value(i, rec.nameColumns[c]));
      }
      ur.name = u.chain.back();
      u.report = report.units.size();
      if (std::any_of(u.chain.begin(), u.chain.end(), [](const std::string& n) { return n.empty(); })) {
        ur.outcome = UnitOutcome::Rejected;
        ur.note = "empty unit name";
        u.alive = false;
      } else {
        try {
          std::vector<std::string> notes;
          u.geometry = geom::cleanGeometry(crs::reproject(fc.features[i].geometry, from, crs::wgs84()), &notes);
          if (!notes.empty()) ur.note = text::join(notes, "; ");
        } catch (const Error& e) {
          ur.outcome = UnitOutcome::Rejected;
          ur.note = e.what();
          u.alive = false;
        }
      }
      report.units.push_back(std::move(ur));
      units.push_back(std::move(u));
    }

    Gazetteer work = gaz;
    bool deferred = false;
    auto hadChildren = [&](const std::optional<AhId>& parent) { return !gaz.children(parent).empty(); };

    for (int k = 1; k <= rec.level; ++k) {
      const bool leaf = k == rec.level;
      std::map<std::optional<AhId>, std::vector<std::size_t>> groups;
      for (std::size_t i = 0; i < units.size(); ++i)
        if (units[i].alive) groups[units[i].at].push_back(i);

      for (const auto& [parent, members] : groups) {
        const bool established = hadChildren(parent);
        std::vector<std::string> terms;
        std::set<std::string> distinct;
        for (auto i : members)
          if (distinct.insert(units[i].chain[static_cast<std::size_t>(k - 1)]).second)
            terms.push_back(units[i].chain[static_cast<std::size_t>(k - 1)]);
        TranslateOptions topts;
        topts.variable = levelColumn(k);
        topts.scope = scope;
        topts.vocabulary = work.childNames(parent);
        topts.fuzzy = options.fuzzy;
        // an unknown name under an established parent needs a decision, except for
        // the layer's own units, which may be new
        if (established && !leaf) {
          topts.queue = &queue;
          topts.resolver = options.resolver;
        }
        const auto tr = translateTerms(terms, tableFor(k), topts);
        if (topts.queue)
          for (const auto& p : tr.pending) report.pending.push_back(p);
        const std::set<std::string> ignoredTerms(tr.ignored.begin(), tr.ignored.end());

        std::vector<std::string> fresh;
        std::vector<std::size_t> waiting;
        for (auto i : members) {
          auto& u = units[i];
          auto& ur = report.units[u.report];
          const auto& name = u.chain[static_cast<std::size_t>(k - 1)];
          const GazetteerNode* node = nullptr;
          if (auto it = tr.mapping.find(name); it != tr.mapping.end()) node = work.child(parent, it->second);
          if (node) {
            u.at = node->ahId;
            if (leaf) ur.outcome = UnitOutcome::NameMatch;
            continue;
          }
          if (!established) {
            fresh.push_back(name);
            waiting.push_back(i);
            continue;
          }
          if (!leaf) {
            u.alive = false;
            if (ignoredTerms.count(name)) {
              ur.outcome = UnitOutcome::Ignored;
              ur.note = levelColumn(k) + " '" + name + "' was ignored in review";
            } else {
              ur.outcome = UnitOutcome::Deferred;
              ur.note = levelColumn(k) + " '" + name + "' is unknown under " +
                        (parent ? parent->canonical() : std::string("the root"));
              deferred = true;
            }
            continue;
          }

          // leaf without a name match: compare with the parent's units
          std::vector<GeometryCandidate> candidates;
          const std::string nationName = parent ? work.find(AhId({parent->segments().front()}))->name : name;
          const auto box = geom::bounds(u.geometry);
          for (const auto* sibling : gaz.children(parent)) {
            const auto* shape = existing.get(nationName, sibling->ahId);
            if (!shape || !geom::bounds(*shape).intersects(box)) continue;
            const double f = crs::geographicOverlapFraction(u.geometry, *shape);
            if (f > 0) candidates.push_back({sibling->ahId.canonical(), sibling->name, f});
          }
          std::sort(candidates.begin(), candidates.end(), [](const auto& a, const auto& b) {
            return a.fraction != b.fraction ? a.fraction > b.fraction : a.ahId < b.ahId;
          });
          const double best = candidates.empty() ? 0 : candidates[0].fraction;
          const double runnerUp = candidates.size() > 1 ? candidates[1].fraction : 0;
          ur.fraction = best;
          ur.runnerUp = runnerUp;
          if (best >= options.threshold && best - runnerUp >= options.margin) {
            u.at = AhId::parse(candidates[0].ahId);
            ur.outcome = UnitOutcome::OverlapMatch;
            continue;
          }
          if (best < options.reviewFloor) {
            fresh.push_back(name);
            waiting.push_back(i);
            continue;
          }
          QueueItem item;
          item.variable = levelColumn(k);
          item.term = name;
          item.scope = scope;
          item.nation = nationName;
          item.level = k;
          item.parentAhId = parent ? parent->canonical() : "";
          item.featureIndex = static_cast<std::int64_t>(i);
          item.candidates = candidates;
          const auto choice = decideGeometryItem(std::move(item), queue, options.resolver);
          if (choice.pending) {
            u.alive = false;
            ur.outcome = UnitOutcome::Queued;
            ur.note = "ambiguous overlap";
            report.pending.push_back(*choice.item);
            deferred = true;
          } else if (choice.ignored) {
            u.alive = false;
            ur.outcome = UnitOutcome::Ignored;
          } else if (choice.ahId == kNewUnit) {
            fresh.push_back(name);
            waiting.push_back(i);
          } else {
            const auto chosen = AhId::parse(choice.ahId);
            const auto* target = work.find(chosen);
            if (!target || !parent || chosen.parent() != *parent)
              throw Error(Errc::InvalidArgument, "review decision " + choice.ahId + " is not a unit under " +
                                                     (parent ? parent->canonical() : std::string("the root")));
            u.at = chosen;
            ur.outcome = UnitOutcome::Reviewed;
          }
        }

        if (!fresh.empty()) {
          // siblings introduced together are numbered alphabetically
          std::vector<std::string> names;
          std::set<std::string> keys;
          std::set<std::string> leafKeys;
          for (std::size_t n = 0; n < fresh.size(); ++n) {
            const auto key = text::matchKey(fresh[n]);
            if (leaf && !leafKeys.insert(key).second)
              throw Error(Errc::DuplicateSibling, rec.stage2Name + ": unit '" + fresh[n] + "' appears twice under " +
                                                      (parent ? parent->canonical() : std::string("the root")));
            if (keys.insert(key).second) names.push_back(fresh[n]);
          }
          work.addSiblings(parent, names, rec.geoID);
          for (auto i : waiting) {
            units[i].at = work.child(parent, units[i].chain[static_cast<std::size_t>(k - 1)])->ahId;
            if (leaf) report.units[units[i].report].outcome = UnitOutcome::Created;
          }
        }
      }
    }

    if (deferred) {
      report.deferred.push_back(rec.geoID);
      for (std::size_t r = firstReport; r < report.units.size(); ++r) {
        auto& ur = report.units[r];
        if (ur.outcome != UnitOutcome::Queued && ur.outcome != UnitOutcome::Rejected && ur.outcome != UnitOutcome::Ignored)
          ur.outcome = UnitOutcome::Deferred;
      }
      continue;
    }

    std::map<std::string, vec::FeatureCollection> perNation;
    for (auto& u : units) {
      if (!u.alive || !u.at) continue;
      const auto* node = work.find(*u.at);
      const auto nation = work.find(AhId({u.at->segments().front()}))->name;
      auto [it, inserted] = perNation.try_emplace(nation, stage3Layer(nationFileStem(nation)));
      it->second.features.push_back({{std::to_string(u.at->numeric()), std::to_string(u.at->level()), node->name,
                                      std::to_string(rec.geoID)},
                                     u.geometry});
      report.units[u.report].ahId = u.at->canonical();
    }
    for (const auto& [nation, layer] : perNation) {
      vec::append(stage3GeometryFile(db, nation, options.format), layer);
      existing.invalidate(nation);
    }
    gaz = std::move(work);
    gaz.save(db.gazetteerFile());
    markProcessed(db, InventoryKind::Geometry, rec.geoID);
    report.processed.push_back(rec.geoID);

    const bool shared = std::any_of(records.begin(), records.end(), [&](const GeometryRecord& other) {
      return other.geoID != rec.geoID && other.stage2Name == rec.stage2Name &&
             !isProcessed(db, InventoryKind::Geometry, other.geoID);
    });
    const auto staged = db.geometriesDir(2) / rec.stage2Name;
    if (!shared && std::filesystem::exists(staged))
      std::filesystem::rename(staged, db.processedGeometriesDir() / rec.stage2Name);
  }

  if (options.strict && !report.pending.empty()) {
    std::string list;
    for (const auto& p : report.pending) list += (list.empty() ? "" : ", ") + p.variable + "=" + p.term;
    throw Error(Errc::UnresolvedUnits, std::to_string(report.pending.size()) + " geometry decision(s) pending: " + list);
  }
  return report;
}

}  // namespace areal
