#include "areal/gazetteer.hpp"

#include <algorithm>
#include <charconv>
#include <set>

#include "areal/csv.hpp"
#include "areal/error.hpp"
#include "areal/text.hpp"

namespace areal {

// --- AhId ------------------------------------------------------------------

AhId::AhId(std::vector<int> segments) : segments_(std::move(segments)) {
  if (static_cast<int>(segments_.size()) > kMaxLevels)
    throw Error(Errc::InvalidArgument, "ahID deeper than " + std::to_string(kMaxLevels) + " levels");
  for (int s : segments_)
    if (s < 1 || s > 999) throw Error(Errc::InvalidArgument, "ahID segment " + std::to_string(s) + " outside 1…999");
}

AhId AhId::parse(std::string_view canonical) {
  if (canonical.empty() || canonical.size() % 3 != 0)
    throw Error(Errc::InvalidArgument, "ahID '" + std::string(canonical) + "' is not a sequence of 3-digit segments");
  std::vector<int> segs;
  for (std::size_t i = 0; i < canonical.size(); i += 3) {
    int v = 0;
    const auto* b = canonical.data() + i;
    const auto [end, ec] = std::from_chars(b, b + 3, v);
    if (ec != std::errc{} || end != b + 3)
      throw Error(Errc::InvalidArgument, "ahID '" + std::string(canonical) + "' is not numeric");
    segs.push_back(v);
  }
  return AhId(std::move(segs));
}

AhId AhId::fromNumeric(std::uint64_t value, int level) {
  if (level < 1 || level > kMaxLevels) throw Error(Errc::InvalidArgument, "bad ahID level " + std::to_string(level));
  std::vector<int> segs(static_cast<std::size_t>(level));
  for (int i = level - 1; i >= 0; --i) {
    segs[static_cast<std::size_t>(i)] = static_cast<int>(value % 1000);
    value /= 1000;
  }
  if (value != 0) throw Error(Errc::InvalidArgument, "numeric ahID has more than " + std::to_string(level) + " levels");
  return AhId(std::move(segs));
}

std::string AhId::canonical() const {
  std::string out;
  char buf[4];
  for (int s : segments_) {
    std::snprintf(buf, sizeof buf, "%03d", s);
    out += buf;
  }
  return out;
}

std::uint64_t AhId::numeric() const {
  std::uint64_t v = 0;
  for (int s : segments_) v = v * 1000 + static_cast<std::uint64_t>(s);
  return v;
}

AhId AhId::parent() const {
  if (segments_.empty()) return {};
  return AhId(std::vector<int>(segments_.begin(), segments_.end() - 1));
}

AhId AhId::child(int segment) const {
  auto segs = segments_;
  segs.push_back(segment);
  return AhId(std::move(segs));
}

bool AhId::isPrefixOf(const AhId& other) const {
  return segments_.size() <= other.segments_.size() &&
         std::equal(segments_.begin(), segments_.end(), other.segments_.begin());
}

// --- Gazetteer -------------------------------------------------------------

namespace {
const Row kGazetteerHeader{"ahID", "level", "parent", "name", "geoID"};
}

std::string Gazetteer::parentKey(const std::optional<AhId>& parent) { return parent ? parent->canonical() : ""; }

Gazetteer Gazetteer::load(const std::filesystem::path& path) {
  Gazetteer gaz;
  if (!std::filesystem::exists(path) || std::filesystem::file_size(path) == 0) return gaz;
  const auto t = CsvTable::read(path);
  if (t.header != kGazetteerHeader) throw Error(Errc::CorruptLayout, path.string() + ": unexpected gazetteer header");
  std::size_t line = 1;
  for (const auto& r : t.rows) {
    ++line;
    try {
      const auto id = AhId::parse(r[0]);
      const auto geo = text::parseInteger(r[4]);
      if (!geo || text::parseInteger(r[1]) != id.level() || r[2] != parentKey(id.level() > 1 ? std::optional(id.parent()) : std::nullopt))
        throw Error(Errc::CorruptLayout, "inconsistent row");
      if (id.level() > 1 && !gaz.find(id.parent())) throw Error(Errc::CorruptLayout, "parent listed after child");
      auto& siblings = gaz.byParent_[r[2]];
      if (!siblings.emplace(text::matchKey(r[3]), gaz.nodes_.size()).second || gaz.byId_.count(id))
        throw Error(Errc::CorruptLayout, "duplicate unit");
      gaz.byId_.emplace(id, gaz.nodes_.size());
      auto& mx = gaz.maxSegment_[r[2]];
      mx = std::max(mx, id.segments().back());
      gaz.nodes_.push_back({id, r[3], *geo});
    } catch (const Error& e) {
      throw Error(Errc::CorruptLayout, path.string() + ":" + std::to_string(line) + ": " + e.what());
    }
  }
  return gaz;
}

void Gazetteer::save(const std::filesystem::path& path) const {
  std::vector<Row> rows;
  rows.reserve(nodes_.size());
  for (const auto& n : nodes_)
    rows.push_back({n.ahId.canonical(), std::to_string(n.level()), parentKey(n.parent()), n.name, std::to_string(n.geoID)});
  csv::writeFile(path, kGazetteerHeader, rows);
}

const GazetteerNode* Gazetteer::find(const AhId& id) const {
  auto it = byId_.find(id);
  return it == byId_.end() ? nullptr : &nodes_[it->second];
}

std::vector<const GazetteerNode*> Gazetteer::children(const std::optional<AhId>& parent) const {
  std::vector<const GazetteerNode*> out;
  auto it = byParent_.find(parentKey(parent));
  if (it == byParent_.end()) return out;
  for (const auto& [key, idx] : it->second) out.push_back(&nodes_[idx]);
  std::sort(out.begin(), out.end(), [](auto* a, auto* b) { return a->ahId < b->ahId; });
  return out;
}

std::vector<std::string> Gazetteer::childNames(const std::optional<AhId>& parent) const {
  std::vector<std::string> out;
  for (const auto* n : children(parent)) out.push_back(n->name);
  return out;
}

const GazetteerNode* Gazetteer::child(const std::optional<AhId>& parent, std::string_view name) const {
  auto it = byParent_.find(parentKey(parent));
  if (it == byParent_.end()) return nullptr;
  auto jt = it->second.find(text::matchKey(name));
  return jt == it->second.end() ? nullptr : &nodes_[jt->second];
}

const GazetteerNode& Gazetteer::add(const std::optional<AhId>& parent, std::string_view name, std::int64_t geoID) {
  const auto ids = addSiblings(parent, {std::string(name)}, geoID);
  return *find(ids.front());
}

std::vector<AhId> Gazetteer::addSiblings(const std::optional<AhId>& parent, std::vector<std::string> names,
                                         std::int64_t geoID) {
  if (parent && !find(*parent)) throw Error(Errc::InvalidArgument, "parent " + parent->canonical() + " does not exist");
  const auto pk = parentKey(parent);
  std::vector<std::pair<std::string, std::string>> keyed;
  std::set<std::string> seen;
  for (auto& n : names) {
    auto name = text::nfc(text::trim(n));
    if (name.empty()) throw Error(Errc::MissingField, "unit name is empty");
    auto key = text::matchKey(name);
    if (!seen.insert(key).second || child(parent, name))
      throw Error(Errc::DuplicateSibling,
                  "'" + name + "' appears twice under " + (parent ? parent->canonical() : std::string("the root")));
    keyed.emplace_back(std::move(key), std::move(name));
  }
  std::sort(keyed.begin(), keyed.end());
  int next = maxSegment_[pk];
  if (next + static_cast<int>(keyed.size()) > 999)
    throw Error(Errc::TooManySiblings, "more than 999 units under " + (parent ? parent->canonical() : std::string("the root")));
  std::vector<AhId> out;
  auto& siblings = byParent_[pk];
  for (auto& [key, name] : keyed) {
    const AhId id = parent ? parent->child(++next) : AhId({++next});
    siblings.emplace(key, nodes_.size());
    byId_.emplace(id, nodes_.size());
    nodes_.push_back({id, std::move(name), geoID});
    out.push_back(id);
  }
  maxSegment_[pk] = next;
  return out;
}

void extendHierarchy(Gazetteer& gaz, const std::vector<std::vector<std::string>>& chains, std::int64_t geoID) {
  std::size_t depth = 0;
  for (const auto& c : chains) depth = std::max(depth, c.size());
  for (std::size_t k = 0; k < depth; ++k) {
    // new names per parent at this level
    std::map<std::string, std::pair<std::optional<AhId>, std::vector<std::string>>> fresh;
    std::map<std::string, std::set<std::string>> leaves;  // full chains ending here
    for (const auto& chain : chains) {
      if (chain.size() <= k) continue;
      std::optional<AhId> parent;
      for (std::size_t j = 0; j < k; ++j) parent = gaz.child(parent, chain[j])->ahId;
      const auto pk = parent ? parent->canonical() : "";
      const auto key = text::matchKey(chain[k]);
      if (chain.size() == k + 1 && !leaves[pk].insert(key).second)
        throw Error(Errc::DuplicateSibling, "'" + chain[k] + "' appears twice under " + (parent ? pk : "the root"));
      if (gaz.child(parent, chain[k])) continue;
      auto& entry = fresh[pk];
      entry.first = parent;
      if (std::none_of(entry.second.begin(), entry.second.end(),
                       [&](const std::string& n) { return text::matchKey(n) == key; }))
        entry.second.push_back(chain[k]);
    }
    for (auto& [pk, entry] : fresh) gaz.addSiblings(entry.first, entry.second, geoID);
  }
}

Gazetteer buildHierarchy(const std::vector<std::vector<std::string>>& chains, std::int64_t geoID) {
  Gazetteer gaz;
  extendHierarchy(gaz, chains, geoID);
  return gaz;
}

std::optional<AhId> lookupAhId(const Gazetteer& gaz, const std::vector<std::string>& chain) {
  if (chain.empty()) return std::nullopt;
  std::optional<AhId> at;
  for (const auto& name : chain) {
    const auto* node = gaz.child(at, name);
    if (!node) return std::nullopt;
    at = node->ahId;
  }
  return at;
}

std::string levelColumn(int level) { return "al" + std::to_string(level); }

std::size_t UnitMatchResult::unresolved() const {
  return static_cast<std::size_t>(std::count_if(rows.begin(), rows.end(), [](const UnitMatch& m) { return !m.ahId; }));
}

UnitMatchResult matchUnits(const TidyTable& tidy, const Gazetteer& gaz, const UnitMatchOptions& options) {
  UnitMatchResult result;
  result.rows.resize(tidy.rows.size());
  if (tidy.rows.empty()) return result;

  std::optional<AhId> root;
  int start = 1;
  if (!options.nation.empty()) {
    const auto* nationNode = gaz.child(std::nullopt, options.nation);
    if (!nationNode)
      throw Error(Errc::GeometryNotNormalised, "'" + options.nation + "' is not in the gazetteer; normalise its geometries first");
    root = nationNode->ahId;
    start = 2;
  }
  std::vector<std::size_t> columns;
  for (int k = start; k <= options.level; ++k) {
    const auto idx = tidy.idIndex(levelColumn(k));
    if (!idx) throw Error(Errc::LevelMissing, "table has no column '" + levelColumn(k) + "' for level " + std::to_string(k));
    columns.push_back(*idx);
  }

  std::vector<std::optional<AhId>> at(tidy.rows.size(), root);
  std::vector<bool> alive(tidy.rows.size(), true);
  std::set<std::int64_t> pendingIds;

  for (int k = start; k <= options.level; ++k) {
    const auto col = columns[static_cast<std::size_t>(k - start)];
    std::map<std::optional<AhId>, std::vector<std::size_t>> groups;
    for (std::size_t r = 0; r < tidy.rows.size(); ++r)
      if (alive[r]) groups[at[r]].push_back(r);

    TranslationTable empty;
    TranslationTable* table = options.translations ? options.translations(k) : nullptr;
    if (!table) table = &empty;

    for (const auto& [parent, rows] : groups) {
      std::vector<std::string> terms;
      std::set<std::string> distinct;
      for (auto r : rows)
        if (distinct.insert(tidy.rows[r].ids[col]).second) terms.push_back(tidy.rows[r].ids[col]);
      TranslateOptions topts;
      topts.variable = levelColumn(k);
      topts.scope = options.scope;
      topts.vocabulary = gaz.childNames(parent);
      topts.fuzzy = options.fuzzy;
      topts.resolver = options.resolver;
      topts.queue = options.queue;
      const auto tr = translateTerms(terms, *table, topts);
      for (const auto& p : tr.pending)
        if (p.id == 0 || pendingIds.insert(p.id).second) result.pending.push_back(p);
      const std::set<std::string> ignored(tr.ignored.begin(), tr.ignored.end());

      for (auto r : rows) {
        const auto& term = tidy.rows[r].ids[col];
        const GazetteerNode* node = nullptr;
        if (auto it = tr.mapping.find(term); it != tr.mapping.end()) node = gaz.child(parent, it->second);
        if (node) {
          at[r] = node->ahId;
          continue;
        }
        alive[r] = false;
        result.rows[r].failedLevel = k;
        result.rows[r].failedTerm = term;
        result.rows[r].ignored = ignored.count(term) > 0;
      }
    }
  }
  for (std::size_t r = 0; r < tidy.rows.size(); ++r)
    if (alive[r]) result.rows[r].ahId = at[r];

  if (options.strict && !result.pending.empty()) {
    std::string list;
    for (const auto& p : result.pending) list += (list.empty() ? "" : ", ") + p.variable + "=" + p.term;
    throw Error(Errc::UnresolvedUnits, std::to_string(result.pending.size()) + " unresolved unit name(s): " + list);
  }
  return result;
}

}  // namespace areal
