#pragma once

#include <compare>
#include <cstdint>
#include <filesystem>
#include <functional>
#include <map>
#include <optional>
#include <string>
#include <string_view>
#include <vector>

#include "areal/review_queue.hpp"
#include "areal/schema.hpp"
#include "areal/translation.hpp"

namespace areal {

/// Administrative hierarchy identifier: one segment (1…999) per level.
class AhId {
public:
  static constexpr int kMaxLevels = 6;  // numeric form must fit 64 bits

  AhId() = default;
  explicit AhId(std::vector<int> segments);

  /// Concatenated three-digit segments, e.g. "070013".
  static AhId parse(std::string_view canonical);
  /// Inverse of numeric() for a known level (leading zeros were dropped).
  static AhId fromNumeric(std::uint64_t value, int level);

  const std::vector<int>& segments() const { return segments_; }
  int level() const { return static_cast<int>(segments_.size()); }
  bool empty() const { return segments_.empty(); }

  std::string canonical() const;
  std::uint64_t numeric() const;

  AhId parent() const;
  AhId child(int segment) const;
  bool isPrefixOf(const AhId& other) const;

  friend bool operator==(const AhId&, const AhId&) = default;
  friend auto operator<=>(const AhId&, const AhId&) = default;

private:
  std::vector<int> segments_;
};

struct GazetteerNode {
  AhId ahId;
  std::string name;
  std::int64_t geoID = 0;

  int level() const { return ahId.level(); }
  std::optional<AhId> parent() const {
    return ahId.level() > 1 ? std::optional<AhId>(ahId.parent()) : std::nullopt;
  }
};

/// Territorial units by ahID. Level-1 nodes (nations) hang off an implicit
/// root addressed by std::nullopt. Sibling names are unique by match key.
class Gazetteer {
public:
  static Gazetteer load(const std::filesystem::path& path);
  void save(const std::filesystem::path& path) const;

  std::size_t size() const { return nodes_.size(); }
  const std::vector<GazetteerNode>& nodes() const { return nodes_; }

  const GazetteerNode* find(const AhId& id) const;
  std::vector<const GazetteerNode*> children(const std::optional<AhId>& parent) const;
  std::vector<std::string> childNames(const std::optional<AhId>& parent) const;
  const GazetteerNode* child(const std::optional<AhId>& parent, std::string_view name) const;

  /// Adds one unit with the next free segment of its parent.
  const GazetteerNode& add(const std::optional<AhId>& parent, std::string_view name, std::int64_t geoID);

  /// Adds several new siblings at once: they are sorted by match key and
  /// numbered after the parent's current maximum (from 1 under a childless
  /// parent). Throws DuplicateSibling or TooManySiblings.
  std::vector<AhId> addSiblings(const std::optional<AhId>& parent, std::vector<std::string> names,
                                std::int64_t geoID);

private:
  static std::string parentKey(const std::optional<AhId>& parent);

  std::vector<GazetteerNode> nodes_;
  std::map<AhId, std::size_t> byId_;
  std::map<std::string, std::map<std::string, std::size_t>> byParent_;  // parent → name key → node
  std::map<std::string, int> maxSegment_;
};

/// Builds (or extends) the hierarchy from name chains that start at level 1.
/// Units are created level by level; new siblings are numbered in
/// alphabetical order. A chain repeated in full is a DuplicateSibling.
void extendHierarchy(Gazetteer& gaz, const std::vector<std::vector<std::string>>& chains, std::int64_t geoID);
Gazetteer buildHierarchy(const std::vector<std::vector<std::string>>& chains, std::int64_t geoID);

/// Exact (match-key) walk from level 1.
std::optional<AhId> lookupAhId(const Gazetteer& gaz, const std::vector<std::string>& chain);

/// Name of the unit-name column of a level ("al2", "al3", …).
std::string levelColumn(int level);

struct UnitMatchOptions {
  std::string nation;  // level-1 unit; empty when the table names nations itself (al1)
  int level = 1;       // deepest level to resolve
  std::optional<Scope> scope;
  FuzzyConfig fuzzy;
  bool strict = false;
  Resolver* resolver = nullptr;
  ReviewQueue* queue = nullptr;
  /// Translation table for a level's names; nullptr to skip translation.
  std::function<TranslationTable*(int level)> translations;
};

struct UnitMatch {
  std::optional<AhId> ahId;  // set when resolved down to options.level
  int failedLevel = 0;
  std::string failedTerm;
  bool ignored = false;  // the failing name was ignored in review
};

struct UnitMatchResult {
  std::vector<UnitMatch> rows;
  std::vector<QueueItem> pending;
  std::size_t unresolved() const;
};

/// Resolves the al<k> columns of each row top-down: every name is looked up
/// among the children of the unit resolved one level up, after translation,
/// so homonyms in other subtrees never match. Throws LevelMissing when a
/// needed column is absent and UnresolvedUnits in strict mode.
UnitMatchResult matchUnits(const TidyTable& tidy, const Gazetteer& gaz, const UnitMatchOptions& options);

}  // namespace areal
