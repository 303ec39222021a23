#pragma once

#include <cstdint>
#include <filesystem>
#include <optional>
#include <string>
#include <vector>

#include "areal/inventory.hpp"
#include "areal/review_queue.hpp"
#include "areal/schema.hpp"
#include "areal/translation.hpp"

namespace areal {

struct ConceptMatch {
  std::vector<std::optional<std::string>> ids;  // per tidy row
  std::vector<bool> ignored;                    // per tidy row
  std::vector<QueueItem> pending;
};

/// Translates the levels of one identifying variable into the index
/// vocabulary and joins their concept IDs. `base` supplies scope, queue,
/// resolver and fuzzy settings. Throws UnresolvedConcepts in strict mode.
ConceptMatch matchVars(const TidyTable& tidy, std::string_view variable, const IndexTable& index,
                       TranslationTable& translations, const TranslateOptions& base = {});

struct TableNormOptions {
  std::optional<std::vector<std::int64_t>> tabIDs;
  bool strict = false;
  Resolver* resolver = nullptr;
  FuzzyConfig fuzzy;
};

struct TableNormEntry {
  std::int64_t tabID = 0;
  std::string nation;
  std::size_t tidyRows = 0;
  std::size_t written = 0;
  std::size_t quarantined = 0;
  bool deferred = false;  // waiting for review decisions; nothing written
};

struct TableNormReport {
  std::vector<TableNormEntry> tables;
  std::vector<QueueItem> pending;
};

std::filesystem::path stage3TableFile(const Database& db, std::string_view nation);
std::filesystem::path quarantineFile(const Database& db, std::string_view nation);

/// Reshapes, translates and integrates registered tables into per-nation
/// stage3 tables. Rows whose names were ignored in review go to the
/// nation's quarantine file. A table with pending questions is left in
/// stage2 (strict mode: UnresolvedUnits/UnresolvedConcepts after all
/// tables were tried).
TableNormReport normTable(const Database& db, const TableNormOptions& options = {});

}  // namespace areal
