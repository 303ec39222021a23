#pragma once

#include <cstdint>
#include <filesystem>
#include <memory>
#include <mutex>
#include <optional>
#include <string>
#include <vector>

#include "areal/inventory.hpp"
#include "areal/review_queue.hpp"
#include "areal/translation.hpp"

namespace areal {

/// What an operator decided for a queue item.
struct ReviewDecision {
  enum class Kind { AcceptSuggestion, CustomTarget, Ignore };
  Kind kind = Kind::AcceptSuggestion;
  std::size_t suggestion = 0;  // index into the item's suggestions (or geometry candidates)
  std::string target;          // term, or ahID / "new" for geometry items
  std::optional<Scope> scope;  // binds a term translation to one table or geometry
  std::string resolver = "review-service";
};

/// Queue operations behind the review UI. Term resolutions are recorded in
/// the variable's translation table before the item is closed.
class ReviewService {
public:
  explicit ReviewService(Database db, FuzzyConfig fuzzy = {});

  const Database& database() const { return db_; }
  ReviewQueue& queue() { return queue_; }

  /// Pending items in enqueue order, or every item with `all`.
  std::vector<QueueItem> listQueue(bool all = false) const;

  /// Throws ItemNotFound, ItemNotPending, InvalidScope, InvalidArgument and
  /// the translation errors (ConflictingTranslation, TargetNotInIndex).
  QueueItem resolve(std::int64_t itemId, const ReviewDecision& decision);

  /// Fuzzy candidates for a term among the variable's vocabulary.
  std::vector<Suggestion> suggestions(std::string_view term, std::string_view variable,
                                      std::optional<std::size_t> k = std::nullopt) const;

private:
  std::vector<std::string> vocabulary(std::string_view variable) const;

  Database db_;
  FuzzyConfig fuzzy_;
  mutable ReviewQueue queue_;
  std::mutex resolveMutex_;
};

/// HTTP adapter: GET /health, GET /queue, POST /queue/{id}/resolve,
/// GET /suggestions. Optional static assets are served from `/`.
class ReviewServer {
public:
  ReviewServer(ReviewService& service, std::string host = "127.0.0.1", int port = 8765,
               std::optional<std::filesystem::path> staticDir = std::nullopt);
  ~ReviewServer();

  /// Binds (port 0 picks a free one) and serves on a background thread.
  int start();
  /// Binds and serves on the calling thread until stop().
  void run();
  void stop();
  int port() const { return port_; }

private:
  struct Impl;
  std::unique_ptr<Impl> impl_;
  int port_ = 0;
};

/// Resolver for the in-process web review: waits until the item is decided
/// through the service.
class WebResolver : public Resolver {
public:
  explicit WebResolver(ReviewQueue& queue) : queue_(queue) {}
  Resolution resolve(const QueueItem& item) override;

private:
  ReviewQueue& queue_;
};

}  // namespace areal
