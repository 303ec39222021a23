#pragma once

#include <cstddef>
#include <cstdint>
#include <tuple>
#include <filesystem>
#include <map>
#include <optional>
#include <span>
#include <string>
#include <string_view>
#include <vector>

#include "areal/csv.hpp"
#include "areal/review_queue.hpp"

namespace areal {

struct IndexTable;

/// Columns of every translation table, in file order.
const Row& translationHeader();

struct TranslationEntry {
  std::string origin;
  std::string target;
  std::optional<Scope> scope;
  std::string notes;

  friend bool operator==(const TranslationEntry&, const TranslationEntry&) = default;
};

/// Origin→target terms of one variable. Unscoped entries give many-to-one
/// translations; scoped entries let one origin map to different targets per
/// geoID/tabID. Keys compare by text::matchKey.
class TranslationTable {
public:
  TranslationTable() = default;

  /// Validates shape and (origin, source, ID) uniqueness; throws ParseError
  /// or ConflictingTranslation.
  static TranslationTable parse(const std::vector<Row>& rows, const std::filesystem::path& origin = {});
  static TranslationTable load(const std::filesystem::path& path);

  /// Table backed by `path`; recorded entries are appended to that file.
  static TranslationTable open(const std::filesystem::path& path);

  std::optional<std::string> lookup(std::string_view term, const std::optional<Scope>& scope = std::nullopt) const;

  /// Appends an entry. An identical existing entry is returned unchanged;
  /// a different target for the same key throws ConflictingTranslation.
  /// With an index, the target must be one of its terms (TargetNotInIndex).
  TranslationEntry record(std::string_view origin, std::string_view target, const std::optional<Scope>& scope = {},
                          std::string_view notes = {}, const IndexTable* index = nullptr);

  const std::vector<TranslationEntry>& entries() const { return entries_; }

  /// Distinct target terms, in first-seen order.
  std::vector<std::string> targets() const;

  const std::optional<std::filesystem::path>& path() const { return path_; }

private:
  using Key = std::tuple<std::string, int, std::int64_t>;
  static Key keyOf(std::string_view origin, const std::optional<Scope>& scope);
  void insert(TranslationEntry entry, const std::filesystem::path& origin, std::size_t line);

  std::vector<TranslationEntry> entries_;
  std::map<Key, std::size_t> byKey_;
  std::optional<std::filesystem::path> path_;
  std::uintmax_t syncedSize_ = 0;
};

std::optional<std::string> lookupTerm(const TranslationTable& table, std::string_view term,
                                      const std::optional<Scope>& scope = std::nullopt);

TranslationEntry recordTranslation(TranslationTable& table, std::string_view origin, std::string_view target,
                                   const std::optional<Scope>& scope = std::nullopt, std::string_view notes = {},
                                   const IndexTable* index = nullptr);

/// Levenshtein distance over code points.
std::size_t editDistance(std::u32string_view a, std::u32string_view b);

/// distance / max(len a, len b) on match keys; 0 for two empty strings.
double normalisedDistance(std::string_view a, std::string_view b);

struct FuzzyConfig {
  double cutoff = 0.4;
  std::size_t k = 10;
};

/// Top-k vocabulary terms by normalised distance (ties by candidate),
/// dropping candidates farther than the cutoff.
std::vector<Suggestion> suggestMatches(std::string_view term, std::span<const std::string> vocabulary,
                                       const FuzzyConfig& config = {});

/// A decision for an unresolved term or geometry item.
struct Resolution {
  enum class Kind { Target, Ignore, Defer };
  Kind kind = Kind::Defer;
  std::string target;
  std::optional<Scope> scope;
  std::string resolver = "operator";
};

/// Review channel consulted in interactive mode (terminal prompt, web UI).
class Resolver {
public:
  virtual ~Resolver() = default;
  virtual Resolution resolve(const QueueItem& item) = 0;
};

struct TranslateOptions {
  std::string variable;
  std::optional<Scope> scope;
  /// Target vocabulary: terms already in it translate to themselves and it
  /// seeds the fuzzy suggestions together with the table's targets.
  std::vector<std::string> vocabulary;
  const IndexTable* index = nullptr;
  FuzzyConfig fuzzy;
  bool strict = false;
  Resolver* resolver = nullptr;  // non-null: interactive
  ReviewQueue* queue = nullptr;
};

struct TranslateResult {
  std::map<std::string, std::string> mapping;  // input term → target
  std::vector<QueueItem> pending;
  std::vector<std::string> ignored;
};

/// Resolves each distinct term through the table (scoped first), then the
/// vocabulary. Misses are enqueued with suggestions; in interactive mode
/// each is put to the resolver and accepted targets are recorded.
TranslateResult translateTerms(std::span<const std::string> terms, TranslationTable& table,
                               const TranslateOptions& options);

}  // namespace areal
