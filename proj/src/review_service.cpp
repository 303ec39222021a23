#include "areal/review_service.hpp"

#include <httplib.h>

#include <nlohmann/json.hpp>
#include <set>
#include <thread>

#include "areal/error.hpp"
#include "areal/gazetteer.hpp"
#include "areal/registration.hpp"
#include "areal/text.hpp"

namespace areal {

using nlohmann::json;

ReviewService::ReviewService(Database db, FuzzyConfig fuzzy)
    : db_(std::move(db)), fuzzy_(fuzzy), queue_(db_.queueFile()) {}

std::vector<QueueItem> ReviewService::listQueue(bool all) const {
  return all ? queue_.items() : queue_.items(ItemStatus::Pending);
}

std::vector<std::string> ReviewService::vocabulary(std::string_view variable) const {
  std::vector<std::string> vocab;
  std::set<std::string> seen;
  auto add = [&](const std::string& t) {
    if (seen.insert(text::matchKey(t)).second) vocab.push_back(t);
  };
  if (auto def = findVariable(db_, variable))
    if (auto index = loadIndex(db_, *def))
      for (const auto& t : index->terms) add(t);
  const auto trPath = db_.translationFile(variable);
  if (std::filesystem::exists(trPath))
    for (const auto& t : TranslationTable::open(trPath).targets()) add(t);
  if (variable.size() > 2 && variable.substr(0, 2) == "al") {
    if (const auto level = text::parseInteger(variable.substr(2))) {
      const auto gaz = Gazetteer::load(db_.gazetteerFile());
      for (const auto& n : gaz.nodes())
        if (n.level() == *level) add(n.name);
    }
  }
  return vocab;
}

std::vector<Suggestion> ReviewService::suggestions(std::string_view term, std::string_view variable,
                                                   std::optional<std::size_t> k) const {
  auto config = fuzzy_;
  if (k) config.k = *k;
  if (config.k == 0) throw Error(Errc::InvalidArgument, "k must be at least 1");
  const auto vocab = vocabulary(variable);
  return suggestMatches(term, vocab, config);
}

QueueItem ReviewService::resolve(std::int64_t itemId, const ReviewDecision& decision) {
  std::lock_guard lk(resolveMutex_);
  const auto item = queue_.get(itemId);
  if (item.status != ItemStatus::Pending)
    throw Error(Errc::ItemNotPending, "queue item " + std::to_string(itemId) + " is " +
                                          std::string(itemStatusName(item.status)));
  auto guard = db_.lockForWrite();

  if (decision.kind == ReviewDecision::Kind::Ignore) return queue_.markIgnored(itemId, decision.resolver);

  if (item.kind == ItemKind::Geometry) {
    std::string target;
    if (decision.kind == ReviewDecision::Kind::AcceptSuggestion) {
      if (decision.suggestion >= item.candidates.size())
        throw Error(Errc::InvalidArgument, "item " + std::to_string(itemId) + " has no candidate " +
                                               std::to_string(decision.suggestion));
      target = item.candidates[decision.suggestion].ahId;
    } else {
      target = text::trim(decision.target);
      if (target != "new") {
        const auto gaz = Gazetteer::load(db_.gazetteerFile());
        const auto id = AhId::parse(target);
        if (!gaz.find(id) || id.parent().canonical() != item.parentAhId)
          throw Error(Errc::InvalidArgument, "'" + target + "' is not a unit under " + item.parentAhId);
      }
    }
    return queue_.markResolved(itemId, target, std::nullopt, decision.resolver);
  }

  std::string target;
  if (decision.kind == ReviewDecision::Kind::AcceptSuggestion) {
    if (decision.suggestion >= item.suggestions.size())
      throw Error(Errc::InvalidArgument, "item " + std::to_string(itemId) + " has no suggestion " +
                                             std::to_string(decision.suggestion));
    target = item.suggestions[decision.suggestion].candidate;
  } else {
    target = decision.target;
  }
  if (decision.scope) {
    const bool exists = decision.scope->kind == SourceKind::TabID ? findTable(db_, decision.scope->id).has_value()
                                                                  : findGeometry(db_, decision.scope->id).has_value();
    if (!exists)
      throw Error(Errc::InvalidScope, std::string(sourceKindName(decision.scope->kind)) + " " +
                                          std::to_string(decision.scope->id) + " is not registered");
  }
  std::optional<IndexTable> index;
  if (auto def = findVariable(db_, item.variable)) index = loadIndex(db_, *def);
  auto table = TranslationTable::open(db_.translationFile(item.variable));
  const auto recorded = table.record(item.term, target, decision.scope,
                                     "resolved by " + decision.resolver + " at " + utcTimestamp(),
                                     index ? &*index : nullptr);
  return queue_.markResolved(itemId, recorded.target, decision.scope, decision.resolver);
}

// --- HTTP ---------------------------------------------------------------------

namespace {

int httpStatus(Errc code) {
  switch (code) {
    case Errc::ItemNotFound: return 404;
    case Errc::ItemNotPending:
    case Errc::ConflictingTranslation: return 409;
    case Errc::WriterLocked: return 423;
    case Errc::InvalidScope:
    case Errc::TargetNotInIndex: return 422;
    default: return 400;
  }
}

void sendJson(httplib::Response& res, const json& body, int status = 200) {
  res.status = status;
  res.set_content(body.dump(), "application/json");
}

void sendError(httplib::Response& res, Errc code, const std::string& message) {
  sendJson(res, {{"error", errcName(code)}, {"message", message}}, httpStatus(code));
}

ReviewDecision parseDecision(const std::string& body) {
  json j;
  try {
    j = json::parse(body);
  } catch (const json::exception& e) {
    throw Error(Errc::InvalidArgument, std::string("request body is not JSON: ") + e.what());
  }
  if (!j.is_object()) throw Error(Errc::InvalidArgument, "request body must be an object");
  ReviewDecision d;
  const auto kind = j.value("decision", std::string());
  if (kind == "accept") d.kind = ReviewDecision::Kind::AcceptSuggestion;
  else if (kind == "custom") d.kind = ReviewDecision::Kind::CustomTarget;
  else if (kind == "ignore") d.kind = ReviewDecision::Kind::Ignore;
  else throw Error(Errc::InvalidArgument, "decision must be accept, custom or ignore");
  if (j.contains("suggestion")) {
    const auto& s = j["suggestion"];
    if (!s.is_number_integer() || s.get<std::int64_t>() < 0)
      throw Error(Errc::InvalidArgument, "suggestion must be a non-negative index");
    d.suggestion = s.get<std::size_t>();
  }
  if (j.contains("target") && j["target"].is_string()) d.target = j["target"].get<std::string>();
  if (d.kind == ReviewDecision::Kind::CustomTarget && text::trim(d.target).empty())
    throw Error(Errc::MissingField, "custom decisions need a target");
  if (j.contains("scope") && !j["scope"].is_null()) {
    const auto& s = j["scope"];
    const auto kindText = s.is_object() ? s.value("source", std::string()) : std::string();
    const auto source = parseSourceKind(kindText);
    if (!source || !s.contains("id") || !s["id"].is_number_integer())
      throw Error(Errc::InvalidScope, "scope needs source geoID|tabID and an integer id");
    d.scope = Scope{*source, s["id"].get<std::int64_t>()};
    if (d.scope->id <= 0) throw Error(Errc::InvalidScope, "scope id must be positive");
  }
  if (j.contains("resolver") && j["resolver"].is_string() && !j["resolver"].get<std::string>().empty())
    d.resolver = j["resolver"].get<std::string>();
  return d;
}

}  // namespace

struct ReviewServer::Impl {
  ReviewService& service;
  std::string host;
  int requestedPort;
  httplib::Server server;
  std::thread thread;

  Impl(ReviewService& s, std::string h, int p) : service(s), host(std::move(h)), requestedPort(p) {}

  template <typename F>
  static void guarded(httplib::Response& res, F&& f) {
    try {
      f();
    } catch (const Error& e) {
      sendError(res, e.code(), e.what());
    } catch (const std::exception& e) {
      sendJson(res, {{"error", "Internal"}, {"message", e.what()}}, 500);
    }
  }

  void routes(const std::optional<std::filesystem::path>& staticDir) {
    server.Get("/health", [this](const httplib::Request&, httplib::Response& res) {
      guarded(res, [&] {
        sendJson(res, {{"status", "ok"},
                       {"version", AREAL_VERSION},
                       {"pending", service.listQueue().size()},
                       {"database", service.database().root().string()}});
      });
    });
    server.Get("/queue", [this](const httplib::Request& req, httplib::Response& res) {
      guarded(res, [&] {
        const auto status = req.has_param("status") ? req.get_param_value("status") : "pending";
        std::vector<QueueItem> items;
        if (status == "pending") {
          items = service.listQueue(false);
        } else if (status == "all") {
          items = service.listQueue(true);
        } else if (status == "resolved" || status == "ignored") {
          items = service.queue().items(status == "resolved" ? ItemStatus::Resolved : ItemStatus::Ignored);
        } else {
          throw Error(Errc::InvalidArgument, "status must be pending, resolved, ignored or all");
        }
        json out{{"items", json::array()}};
        for (const auto& i : items) out["items"].push_back(toJson(i));
        sendJson(res, out);
      });
    });
    server.Post(R"(/queue/(\d+)/resolve)", [this](const httplib::Request& req, httplib::Response& res) {
      guarded(res, [&] {
        const auto id = text::parseInteger(req.matches[1].str());
        if (!id) throw Error(Errc::ItemNotFound, "bad item id");
        const auto decision = parseDecision(req.body);
        sendJson(res, toJson(service.resolve(*id, decision)));
      });
    });
    server.Get("/suggestions", [this](const httplib::Request& req, httplib::Response& res) {
      guarded(res, [&] {
        if (!req.has_param("term") || !req.has_param("variable"))
          throw Error(Errc::MissingField, "term and variable are required");
        std::optional<std::size_t> k;
        if (req.has_param("k")) {
          const auto v = text::parseInteger(req.get_param_value("k"));
          if (!v || *v < 1) throw Error(Errc::InvalidArgument, "k must be a positive integer");
          k = static_cast<std::size_t>(*v);
        }
        const auto term = req.get_param_value("term");
        const auto variable = req.get_param_value("variable");
        json out{{"term", term}, {"variable", variable}, {"suggestions", json::array()}};
        for (const auto& s : service.suggestions(term, variable, k))
          out["suggestions"].push_back({{"candidate", s.candidate}, {"distance", s.distance}});
        sendJson(res, out);
      });
    });
    if (staticDir) {
      if (!server.set_mount_point("/", staticDir->string()))
        throw Error(Errc::Io, staticDir->string() + " is not a directory");
    }
  }

  int bind() {
    if (requestedPort == 0) {
      const int p = server.bind_to_any_port(host);
      if (p < 0) throw Error(Errc::Io, "cannot bind " + host);
      return p;
    }
    if (!server.bind_to_port(host, requestedPort))
      throw Error(Errc::Io, "cannot bind " + host + ":" + std::to_string(requestedPort));
    return requestedPort;
  }
};

ReviewServer::ReviewServer(ReviewService& service, std::string host, int port,
                           std::optional<std::filesystem::path> staticDir)
    : impl_(std::make_unique<Impl>(service, std::move(host), port)) {
  impl_->routes(staticDir);
}

ReviewServer::~ReviewServer() { stop(); }

int ReviewServer::start() {
  port_ = impl_->bind();
  impl_->thread = std::thread([this] { impl_->server.listen_after_bind(); });
  impl_->server.wait_until_ready();
  return port_;
}

void ReviewServer::run() {
  port_ = impl_->bind();
  impl_->server.listen_after_bind();
}

void ReviewServer::stop() {
  if (!impl_) return;
  impl_->server.stop();
  if (impl_->thread.joinable()) impl_->thread.join();
}

Resolution WebResolver::resolve(const QueueItem& item) {
  // block until the operator decided through the service
  while (queue_.waitWhilePending(item.id, std::chrono::seconds(5)) == ItemStatus::Pending) {
  }
  const auto decided = queue_.get(item.id);
  Resolution r;
  r.resolver = decided.resolver;
  if (decided.status == ItemStatus::Ignored) {
    r.kind = Resolution::Kind::Ignore;
  } else {
    r.kind = Resolution::Kind::Target;
    r.target = decided.resolution;
    r.scope = decided.resolutionScope;
  }
  return r;
}

}  // namespace areal
