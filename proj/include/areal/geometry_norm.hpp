#pragma once

#include <cstdint>
#include <filesystem>
#include <optional>
#include <string>
#include <vector>

#include "areal/inventory.hpp"
#include "areal/review_queue.hpp"
#include "areal/translation.hpp"
#include "areal/vector_io.hpp"

namespace areal {

struct GeometryNormOptions {
  std::optional<std::vector<std::int64_t>> geoIDs;  // all unprocessed records when absent
  double threshold = 0.9;    // accept an overlap match at or above this fraction
  double margin = 0.1;       // ... when it beats the runner-up by at least this much
  double reviewFloor = 0.5;  // below this the unit is new
  FuzzyConfig fuzzy;
  bool strict = false;
  Resolver* resolver = nullptr;
  vec::Format format = vec::Format::GeoPackage;
};

enum class UnitOutcome { NameMatch, OverlapMatch, Reviewed, Created, Queued, Deferred, Ignored, Rejected };

std::string_view unitOutcomeName(UnitOutcome outcome);

struct UnitReport {
  std::int64_t geoID = 0;
  std::size_t feature = 0;
  std::string name;
  std::string ahId;  // canonical, empty when unassigned
  UnitOutcome outcome = UnitOutcome::Deferred;
  double fraction = 0;
  double runnerUp = 0;
  std::string note;
};

struct GeometryNormReport {
  std::vector<UnitReport> units;
  std::vector<std::int64_t> processed;
  std::vector<std::int64_t> deferred;  // waiting for review decisions
  std::vector<QueueItem> pending;
};

/// Stage3 geometry collection of a nation.
std::filesystem::path stage3GeometryFile(const Database& db, std::string_view nation, vec::Format format);

/// Normalises registered geometries into per-nation stage3 collections and
/// the gazetteer. Each unit is matched by name under its parent, then by
/// overlap with the parent's existing units, and otherwise added as a new
/// unit. A record with undecided units is left in stage2 untouched and its
/// questions are queued; re-running after review continues it.
GeometryNormReport normGeometry(const Database& db, const GeometryNormOptions& options = {});

}  // namespace areal
