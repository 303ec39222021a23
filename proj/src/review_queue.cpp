#include "areal/review_queue.hpp"

#include <algorithm>

#include <nlohmann/json.hpp>

#include "areal/csv.hpp"
#include "areal/error.hpp"
#include "areal/inventory.hpp"
#include "areal/text.hpp"

namespace areal {

using nlohmann::json;

std::string_view sourceKindName(SourceKind kind) { return kind == SourceKind::GeoID ? "geoID" : "tabID"; }

std::optional<SourceKind> parseSourceKind(std::string_view text) {
  if (text == "geoID") return SourceKind::GeoID;
  if (text == "tabID") return SourceKind::TabID;
  return std::nullopt;
}

std::string_view itemKindName(ItemKind kind) { return kind == ItemKind::Term ? "term" : "geometry"; }

std::string_view itemStatusName(ItemStatus status) {
  switch (status) {
    case ItemStatus::Pending: return "pending";
    case ItemStatus::Resolved: return "resolved";
    case ItemStatus::Ignored: return "ignored";
  }
  return "pending";
}

namespace {

json scopeToJson(const std::optional<Scope>& s) {
  if (!s) return nullptr;
  return json{{"source", sourceKindName(s->kind)}, {"id", s->id}};
}

std::optional<Scope> scopeFromJson(const json& j) {
  if (j.is_null()) return std::nullopt;
  auto kind = parseSourceKind(j.at("source").get<std::string>());
  if (!kind) throw Error(Errc::CorruptLayout, "queue: bad scope source");
  return Scope{*kind, j.at("id").get<std::int64_t>()};
}

ItemStatus statusFromName(std::string_view s) {
  if (s == "pending") return ItemStatus::Pending;
  if (s == "resolved") return ItemStatus::Resolved;
  if (s == "ignored") return ItemStatus::Ignored;
  throw Error(Errc::CorruptLayout, "queue: bad status '" + std::string(s) + "'");
}

}  // namespace

json toJson(const QueueItem& item) {
  json j{{"id", item.id},
         {"kind", itemKindName(item.kind)},
         {"status", itemStatusName(item.status)},
         {"variable", item.variable},
         {"term", item.term},
         {"scope", scopeToJson(item.scope)},
         {"suggestions", json::array()},
         {"resolution", item.resolution},
         {"resolution_scope", scopeToJson(item.resolutionScope)},
         {"resolver", item.resolver},
         {"resolved_at", item.resolvedAt},
         {"enqueued_at", item.enqueuedAt}};
  for (const auto& s : item.suggestions) j["suggestions"].push_back({{"candidate", s.candidate}, {"distance", s.distance}});
  if (item.kind == ItemKind::Geometry) {
    j["nation"] = item.nation;
    j["level"] = item.level;
    j["parent_ahID"] = item.parentAhId;
    j["feature_index"] = item.featureIndex;
    j["candidates"] = json::array();
    for (const auto& c : item.candidates)
      j["candidates"].push_back({{"ahID", c.ahId}, {"name", c.name}, {"fraction", c.fraction}});
  }
  return j;
}

namespace {

QueueItem fromJson(const json& j) {
  QueueItem item;
  item.id = j.at("id").get<std::int64_t>();
  item.kind = j.at("kind").get<std::string>() == "geometry" ? ItemKind::Geometry : ItemKind::Term;
  item.status = statusFromName(j.at("status").get<std::string>());
  item.variable = j.value("variable", "");
  item.term = j.value("term", "");
  item.scope = scopeFromJson(j.value("scope", json()));
  for (const auto& s : j.value("suggestions", json::array()))
    item.suggestions.push_back({s.at("candidate").get<std::string>(), s.at("distance").get<double>()});
  item.resolution = j.value("resolution", "");
  item.resolutionScope = scopeFromJson(j.value("resolution_scope", json()));
  item.resolver = j.value("resolver", "");
  item.resolvedAt = j.value("resolved_at", "");
  item.enqueuedAt = j.value("enqueued_at", "");
  if (item.kind == ItemKind::Geometry) {
    item.nation = j.value("nation", "");
    item.level = j.value("level", 0);
    item.parentAhId = j.value("parent_ahID", "");
    item.featureIndex = j.value("feature_index", std::int64_t{-1});
    for (const auto& c : j.value("candidates", json::array()))
      item.candidates.push_back(
          {c.at("ahID").get<std::string>(), c.at("name").get<std::string>(), c.at("fraction").get<double>()});
  }
  return item;
}

bool sameScope(const std::optional<Scope>& a, const std::optional<Scope>& b) { return a == b; }

}  // namespace

ReviewQueue::ReviewQueue(std::filesystem::path file) : file_(std::move(file)) {
  std::lock_guard lk(mutex_);
  refreshLocked();
}

void ReviewQueue::refreshLocked() const {
  std::error_code ec;
  if (!std::filesystem::exists(file_, ec)) {
    items_.clear();
    return;
  }
  const auto stamp = std::filesystem::last_write_time(file_, ec);
  const auto size = std::filesystem::file_size(file_, ec);
  if (!items_.empty() && stamp == loadedStamp_ && size == loadedSize_) return;
  json j;
  try {
    j = json::parse(readTextFile(file_));
  } catch (const json::exception& e) {
    throw Error(Errc::CorruptLayout, file_.string() + ": " + e.what());
  }
  items_.clear();
  for (const auto& item : j.value("items", json::array())) items_.push_back(fromJson(item));
  loadedStamp_ = stamp;
  loadedSize_ = size;
}

void ReviewQueue::saveLocked() {
  json j{{"items", json::array()}};
  for (const auto& item : items_) j["items"].push_back(toJson(item));
  writeTextFileAtomic(file_, j.dump(2) + "\n");
  std::error_code ec;
  loadedStamp_ = std::filesystem::last_write_time(file_, ec);
  loadedSize_ = std::filesystem::file_size(file_, ec);
  changed_.notify_all();
}

QueueItem& ReviewQueue::itemLocked(std::int64_t id) {
  for (auto& item : items_)
    if (item.id == id) return item;
  throw Error(Errc::ItemNotFound, "no queue item " + std::to_string(id));
}

QueueItem ReviewQueue::enqueueTerm(std::string_view variable, std::string_view term,
                                   const std::optional<Scope>& scope, std::vector<Suggestion> suggestions) {
  std::lock_guard lk(mutex_);
  refreshLocked();
  const auto key = text::matchKey(term);
  for (const auto& item : items_)
    if (item.kind == ItemKind::Term && item.variable == variable && text::matchKey(item.term) == key &&
        sameScope(item.scope, scope))
      return item;
  QueueItem item;
  item.id = items_.empty() ? 1 : items_.back().id + 1;
  item.kind = ItemKind::Term;
  item.variable = std::string(variable);
  item.term = std::string(term);
  item.scope = scope;
  item.suggestions = std::move(suggestions);
  item.enqueuedAt = utcTimestamp();
  items_.push_back(item);
  saveLocked();
  return item;
}

QueueItem ReviewQueue::enqueueGeometry(QueueItem item) {
  std::lock_guard lk(mutex_);
  refreshLocked();
  for (const auto& existing : items_)
    if (existing.kind == ItemKind::Geometry && sameScope(existing.scope, item.scope) &&
        existing.featureIndex == item.featureIndex)
      return existing;
  item.id = items_.empty() ? 1 : items_.back().id + 1;
  item.kind = ItemKind::Geometry;
  item.status = ItemStatus::Pending;
  item.enqueuedAt = utcTimestamp();
  items_.push_back(item);
  saveLocked();
  return item;
}

std::optional<QueueItem> ReviewQueue::findTerm(std::string_view variable, std::string_view term,
                                               const std::optional<Scope>& scope) const {
  std::lock_guard lk(mutex_);
  refreshLocked();
  const auto key = text::matchKey(term);
  for (const auto& item : items_)
    if (item.kind == ItemKind::Term && item.variable == variable && text::matchKey(item.term) == key &&
        sameScope(item.scope, scope))
      return item;
  return std::nullopt;
}

std::vector<QueueItem> ReviewQueue::items(std::optional<ItemStatus> status) const {
  std::lock_guard lk(mutex_);
  refreshLocked();
  std::vector<QueueItem> out;
  for (const auto& item : items_)
    if (!status || item.status == *status) out.push_back(item);
  return out;
}

QueueItem ReviewQueue::get(std::int64_t id) const {
  std::lock_guard lk(mutex_);
  refreshLocked();
  for (const auto& item : items_)
    if (item.id == id) return item;
  throw Error(Errc::ItemNotFound, "no queue item " + std::to_string(id));
}

QueueItem ReviewQueue::markResolved(std::int64_t id, std::string resolution, std::optional<Scope> scope,
                                    std::string resolver) {
  std::lock_guard lk(mutex_);
  refreshLocked();
  auto& item = itemLocked(id);
  if (item.status != ItemStatus::Pending)
    throw Error(Errc::ItemNotPending, "queue item " + std::to_string(id) + " is " +
                                          std::string(itemStatusName(item.status)));
  item.status = ItemStatus::Resolved;
  item.resolution = std::move(resolution);
  item.resolutionScope = std::move(scope);
  item.resolver = std::move(resolver);
  item.resolvedAt = utcTimestamp();
  auto copy = item;
  saveLocked();
  return copy;
}

QueueItem ReviewQueue::markIgnored(std::int64_t id, std::string resolver) {
  std::lock_guard lk(mutex_);
  refreshLocked();
  auto& item = itemLocked(id);
  if (item.status != ItemStatus::Pending)
    throw Error(Errc::ItemNotPending, "queue item " + std::to_string(id) + " is " +
                                          std::string(itemStatusName(item.status)));
  item.status = ItemStatus::Ignored;
  item.resolver = std::move(resolver);
  item.resolvedAt = utcTimestamp();
  auto copy = item;
  saveLocked();
  return copy;
}

ItemStatus ReviewQueue::waitWhilePending(std::int64_t id, std::chrono::milliseconds timeout) const {
  std::unique_lock lk(mutex_);
  const auto deadline = std::chrono::steady_clock::now() + timeout;
  while (true) {
    refreshLocked();
    auto it = std::find_if(items_.begin(), items_.end(), [&](const QueueItem& i) { return i.id == id; });
    if (it == items_.end()) throw Error(Errc::ItemNotFound, "no queue item " + std::to_string(id));
    if (it->status != ItemStatus::Pending) return it->status;
    const auto now = std::chrono::steady_clock::now();
    if (now >= deadline) return ItemStatus::Pending;
    // other processes only signal through the file, so poll as well
    changed_.wait_for(lk, std::min<std::chrono::steady_clock::duration>(deadline - now, std::chrono::milliseconds(200)));
  }
}

}  // namespace areal
