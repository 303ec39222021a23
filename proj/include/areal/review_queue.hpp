#pragma once

#include <chrono>
#include <condition_variable>
#include <cstdint>
#include <filesystem>
#include <mutex>
#include <optional>
#include <string>
#include <string_view>
#include <vector>

#include <nlohmann/json_fwd.hpp>

namespace areal {

/// Where a term came from, for one-to-many (source-scoped) translations.
enum class SourceKind { GeoID, TabID };

std::string_view sourceKindName(SourceKind kind);
std::optional<SourceKind> parseSourceKind(std::string_view text);

struct Scope {
  SourceKind kind = SourceKind::TabID;
  std::int64_t id = 0;

  friend bool operator==(const Scope&, const Scope&) = default;
};

struct Suggestion {
  std::string candidate;
  double distance = 0;  // normalised edit distance in [0, 1]

  friend bool operator==(const Suggestion&, const Suggestion&) = default;
};

/// One overlap candidate offered for an ambiguous geometry match.
struct GeometryCandidate {
  std::string ahId;  // canonical form
  std::string name;
  double fraction = 0;
};

enum class ItemKind { Term, Geometry };
enum class ItemStatus { Pending, Resolved, Ignored };

std::string_view itemKindName(ItemKind kind);
std::string_view itemStatusName(ItemStatus status);

struct QueueItem {
  std::int64_t id = 0;
  ItemKind kind = ItemKind::Term;
  ItemStatus status = ItemStatus::Pending;
  std::string variable;
  std::string term;
  std::optional<Scope> scope;
  std::vector<Suggestion> suggestions;

  // geometry items: the unit waiting for a match decision
  std::string nation;
  int level = 0;
  std::string parentAhId;
  std::int64_t featureIndex = -1;
  std::vector<GeometryCandidate> candidates;

  std::string resolution;  // target term, or ahID for geometry items
  std::optional<Scope> resolutionScope;
  std::string resolver;
  std::string resolvedAt;
  std::string enqueuedAt;
};

/// Wire and file form of an item.
nlohmann::json toJson(const QueueItem& item);

/// Persistent queue of items that need a human decision. The state file is
/// rewritten atomically on each change and re-read when another process
/// changed it. Transitions are pending→resolved and pending→ignored only.
class ReviewQueue {
public:
  explicit ReviewQueue(std::filesystem::path file);

  /// Returns the existing item for (variable, term key, scope) or adds one.
  QueueItem enqueueTerm(std::string_view variable, std::string_view term, const std::optional<Scope>& scope,
                        std::vector<Suggestion> suggestions);

  /// Returns the existing item for (geoID scope, featureIndex) or adds one.
  QueueItem enqueueGeometry(QueueItem item);

  std::optional<QueueItem> findTerm(std::string_view variable, std::string_view term,
                                    const std::optional<Scope>& scope) const;

  /// Items in enqueue order, optionally filtered by status.
  std::vector<QueueItem> items(std::optional<ItemStatus> status = std::nullopt) const;
  QueueItem get(std::int64_t id) const;

  QueueItem markResolved(std::int64_t id, std::string resolution, std::optional<Scope> scope,
                         std::string resolver);
  QueueItem markIgnored(std::int64_t id, std::string resolver);

  /// Blocks until the item leaves the pending state or the timeout elapses.
  ItemStatus waitWhilePending(std::int64_t id, std::chrono::milliseconds timeout) const;

  const std::filesystem::path& file() const { return file_; }

private:
  void refreshLocked() const;
  void saveLocked();
  QueueItem& itemLocked(std::int64_t id);

  std::filesystem::path file_;
  mutable std::mutex mutex_;
  mutable std::condition_variable changed_;
  mutable std::vector<QueueItem> items_;
  mutable std::filesystem::file_time_type loadedStamp_{};
  mutable std::uintmax_t loadedSize_ = 0;
};

}  // namespace areal
