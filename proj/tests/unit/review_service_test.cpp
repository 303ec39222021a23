#include <gtest/gtest.h>

#include <httplib.h>

#include <future>
#include <nlohmann/json.hpp>
#include <thread>

#include "areal/geometry_norm.hpp"
#include "areal/normalize.hpp"
#include "areal/registration.hpp"
#include "areal/review_service.hpp"
#include "expect_errc.hpp"
#include "fixtures.hpp"

using namespace areal;
using namespace std::chrono_literals;
using fixtures::TempDir;
using nlohmann::json;

namespace {

// a database with land-use vocabulary and the US table waiting for review
struct Fixture {
  TempDir tmp;
  fixtures::Registered reg = fixtures::buildDatabase(tmp / "db", tmp.path());
  Database db = Database::open(tmp / "db");

  Fixture() {
    fixtures::writeFile(tmp / "landuse.csv", "term,ID\npasture,1\ngrassland,2\ncropland,3\n");
    std::vector<VariableDef> defs(1);
    defs[0].name = "landuse";
    defs[0].indexSource = tmp / "landuse.csv";
    setVariables(db, defs);
    normGeometry(db);
  }

  // queues the land-use misses as the translation step would
  std::vector<QueueItem> queueLandUse(const std::vector<std::string>& terms) {
    ReviewQueue queue(db.queueFile());
    auto table = TranslationTable::open(db.translationFile("landuse"));
    TranslateOptions opt;
    opt.variable = "landuse";
    opt.vocabulary = {"pasture", "grassland", "cropland"};
    opt.queue = &queue;
    opt.scope = Scope{SourceKind::TabID, reg.brazilTab};
    return translateTerms(terms, table, opt).pending;
  }
};

ReviewDecision custom(std::string target, std::optional<Scope> scope = std::nullopt) {
  ReviewDecision d;
  d.kind = ReviewDecision::Kind::CustomTarget;
  d.target = std::move(target);
  d.scope = scope;
  return d;
}

ReviewDecision ignore() {
  ReviewDecision d;
  d.kind = ReviewDecision::Kind::Ignore;
  return d;
}

std::vector<Row> withoutNotes(std::vector<Row> rows) {
  for (auto& r : rows) r.pop_back();
  return rows;
}

struct Served {
  ReviewService service;
  ReviewServer server;
  int port;
  httplib::Client client;

  explicit Served(const Database& db, std::optional<fs::path> staticDir = std::nullopt)
      : service(db), server(service, "127.0.0.1", 0, staticDir), port(server.start()), client("127.0.0.1", port) {}

  json get(const std::string& path, int expect = 200) {
    auto res = client.Get(path);
    EXPECT_TRUE(res) << path;
    if (!res) return {};
    EXPECT_EQ(res->status, expect) << path << " " << res->body;
    return json::parse(res->body);
  }
  std::pair<int, json> post(std::int64_t id, const json& body) {
    auto res = client.Post("/queue/" + std::to_string(id) + "/resolve", body.dump(), "application/json");
    EXPECT_TRUE(res);
    if (!res) return {0, {}};
    return {res->status, json::parse(res->body)};
  }
};

}  // namespace

TEST(ReviewService, EmptyQueue) {
  TempDir tmp;
  const auto db = Database::init(tmp.path());
  ReviewService service(db);
  EXPECT_TRUE(service.listQueue().empty());
}

TEST(ReviewService, ListsTermAndGeometryItems) {
  Fixture f;
  const auto terms = f.queueLandUse({"pastur"});
  ASSERT_EQ(terms.size(), 1u);
  QueueItem geo;
  geo.kind = ItemKind::Geometry;
  geo.variable = "al3";
  geo.term = "Fronteira";
  geo.scope = Scope{SourceKind::GeoID, f.reg.brazilGeo};
  geo.featureIndex = 0;
  ReviewQueue(f.db.queueFile()).enqueueGeometry(geo);
  ReviewService service(f.db);
  const auto items = service.listQueue();
  ASSERT_EQ(items.size(), 2u);
  EXPECT_EQ(items[0].kind, ItemKind::Term);
  ASSERT_FALSE(items[0].suggestions.empty());
  EXPECT_EQ(items[0].suggestions[0].candidate, "pasture");
  EXPECT_DOUBLE_EQ(items[0].suggestions[0].distance, 1.0 / 7.0);
  EXPECT_EQ(items[1].kind, ItemKind::Geometry);
}

TEST(ReviewService, AcceptRecordsTranslation) {
  Fixture f;
  const auto items = f.queueLandUse({"pastagem"});
  ReviewService service(f.db);
  const auto done = service.resolve(items[0].id, custom("pasture"));
  EXPECT_EQ(done.status, ItemStatus::Resolved);
  EXPECT_EQ(done.resolution, "pasture");
  const auto rows = csv::readFile(f.db.translationFile("landuse"));
  ASSERT_EQ(rows.size(), 2u);
  EXPECT_EQ(withoutNotes(rows)[1], (Row{"pastagem", "pasture", "", ""}));
  EXPECT_NE(rows[1][4].find("resolved by review-service at "), std::string::npos);
  EXPECT_ERRC(service.resolve(items[0].id, custom("pasture")), Errc::ItemNotPending);
  EXPECT_ERRC(service.resolve(999, ignore()), Errc::ItemNotFound);
}

TEST(ReviewService, AcceptSuggestionAndScopedTarget) {
  Fixture f;
  const auto items = f.queueLandUse({"pastur", "pasto"});
  ReviewService service(f.db);
  ReviewDecision accept;
  accept.suggestion = 0;
  EXPECT_EQ(service.resolve(items[0].id, accept).resolution, "pasture");
  const Scope scope{SourceKind::TabID, f.reg.brazilTab};
  const auto scoped = service.resolve(items[1].id, custom("grassland", scope));
  EXPECT_EQ(scoped.resolutionScope, scope);
  const auto table = TranslationTable::load(f.db.translationFile("landuse"));
  EXPECT_EQ(lookupTerm(table, "pasto", scope), "grassland");
  EXPECT_EQ(lookupTerm(table, "pasto"), std::nullopt);
}

TEST(ReviewService, ResolutionErrors) {
  Fixture f;
  const auto items = f.queueLandUse({"pastagem", "campo"});
  ReviewService service(f.db);
  EXPECT_ERRC(service.resolve(items[0].id, custom("meadow")), Errc::TargetNotInIndex);
  EXPECT_ERRC(service.resolve(items[0].id, custom("pasture", Scope{SourceKind::TabID, 99})), Errc::InvalidScope);
  ReviewDecision accept;
  accept.suggestion = 50;
  EXPECT_ERRC(service.resolve(items[0].id, accept), Errc::InvalidArgument);
  service.resolve(items[0].id, custom("pasture"));
  auto table = TranslationTable::open(f.db.translationFile("landuse"));
  recordTranslation(table, "campo", "cropland");
  EXPECT_ERRC(service.resolve(items[1].id, custom("grassland")), Errc::ConflictingTranslation);
  EXPECT_EQ(service.queue().get(items[1].id).status, ItemStatus::Pending);
}

TEST(ReviewService, IgnoringCatchAllRowsQuarantinesThem) {
  Fixture f;
  const auto first = normTable(f.db, {std::vector<std::int64_t>{f.reg.usTab}});
  ASSERT_EQ(first.pending.size(), 1u);
  ReviewService service(f.db);
  const auto items = service.listQueue();
  ASSERT_EQ(items.size(), 1u);
  EXPECT_EQ(service.resolve(items[0].id, ignore()).status, ItemStatus::Ignored);
  const auto r = normTable(f.db, {std::vector<std::int64_t>{f.reg.usTab}});
  EXPECT_EQ(r.tables[0].quarantined, 2u);
  EXPECT_EQ(CsvTable::read(quarantineFile(f.db, "usa")).rows.size(), 2u);
}

TEST(ReviewService, Suggestions) {
  Fixture f;
  ReviewService service(f.db);
  const auto s = service.suggestions("pastur", "landuse");
  ASSERT_EQ(s.size(), 1u);
  EXPECT_EQ(s[0].candidate, "pasture");
  const auto counties = service.suggestions("Perri", "al3", 3);
  ASSERT_FALSE(counties.empty());
  EXPECT_EQ(counties[0].candidate, "Perry");
  EXPECT_LE(counties.size(), 3u);
  EXPECT_FALSE(service.suggestions("soybeen", "commodities").empty());
}

TEST(ReviewService, QueueSurvivesRestart) {
  Fixture f;
  const auto items = f.queueLandUse({"pastagem", "pastur"});
  {
    ReviewService service(f.db);
    service.resolve(items[0].id, custom("pasture"));
  }
  ReviewService again(f.db);
  const auto all = again.listQueue(true);
  ASSERT_EQ(all.size(), 2u);
  EXPECT_EQ(all[0].status, ItemStatus::Resolved);
  EXPECT_EQ(all[1].status, ItemStatus::Pending);
  EXPECT_EQ(again.listQueue().size(), 1u);
}

TEST(ReviewService, ServiceMatchesLibraryCalls) {
  // the same decisions once through HTTP and once through the library
  Fixture viaHttp, viaLib;
  const std::vector<std::string> terms{"pastagem", "grasland", "pasto", "matto"};
  const auto a = viaHttp.queueLandUse(terms);
  const auto b = viaLib.queueLandUse(terms);
  const Scope scope{SourceKind::TabID, viaHttp.reg.brazilTab};
  {
    Served s(viaHttp.db);
    EXPECT_EQ(s.post(a[0].id, {{"decision", "custom"}, {"target", "pasture"}}).first, 200);
    EXPECT_EQ(s.post(a[1].id, {{"decision", "accept"}, {"suggestion", 0}}).first, 200);
    EXPECT_EQ(s.post(a[2].id, {{"decision", "custom"}, {"target", "grassland"},
                               {"scope", {{"source", "tabID"}, {"id", scope.id}}}})
                  .first,
              200);
    EXPECT_EQ(s.post(a[3].id, {{"decision", "ignore"}}).first, 200);
  }
  {
    ReviewQueue queue(viaLib.db.queueFile());
    auto table = TranslationTable::open(viaLib.db.translationFile("landuse"));
    const auto index = *loadIndex(viaLib.db, *findVariable(viaLib.db, "landuse"));
    recordTranslation(table, "pastagem", "pasture", std::nullopt, "", &index);
    queue.markResolved(b[0].id, "pasture", std::nullopt, "review-service");
    const auto suggested = b[1].suggestions.at(0).candidate;
    recordTranslation(table, "grasland", suggested, std::nullopt, "", &index);
    queue.markResolved(b[1].id, suggested, std::nullopt, "review-service");
    recordTranslation(table, "pasto", "grassland", scope, "", &index);
    queue.markResolved(b[2].id, "grassland", scope, "review-service");
    queue.markIgnored(b[3].id, "review-service");
  }
  EXPECT_EQ(withoutNotes(csv::readFile(viaHttp.db.translationFile("landuse"))),
            withoutNotes(csv::readFile(viaLib.db.translationFile("landuse"))));
  const auto x = ReviewQueue(viaHttp.db.queueFile()).items();
  const auto y = ReviewQueue(viaLib.db.queueFile()).items();
  ASSERT_EQ(x.size(), y.size());
  for (std::size_t i = 0; i < x.size(); ++i) {
    EXPECT_EQ(x[i].status, y[i].status);
    EXPECT_EQ(x[i].resolution, y[i].resolution);
    EXPECT_EQ(x[i].resolutionScope, y[i].resolutionScope);
    EXPECT_EQ(x[i].resolver, y[i].resolver);
  }
}

TEST(ReviewServer, HealthQueueAndSuggestions) {
  Fixture f;
  f.queueLandUse({"pastur"});
  Served s(f.db);
  const auto health = s.get("/health");
  EXPECT_EQ(health["status"], "ok");
  EXPECT_EQ(health["pending"], 1);
  EXPECT_EQ(health["version"], AREAL_VERSION);
  EXPECT_EQ(health["database"], f.db.root().string());

  const auto queue = s.get("/queue");
  ASSERT_EQ(queue["items"].size(), 1u);
  const auto& item = queue["items"][0];
  EXPECT_EQ(item["kind"], "term");
  EXPECT_EQ(item["status"], "pending");
  EXPECT_EQ(item["variable"], "landuse");
  EXPECT_EQ(item["term"], "pastur");
  EXPECT_EQ(item["scope"]["source"], "tabID");
  EXPECT_EQ(item["scope"]["id"], f.reg.brazilTab);
  EXPECT_EQ(item["suggestions"][0]["candidate"], "pasture");
  EXPECT_EQ(s.get("/queue?status=all")["items"].size(), 1u);
  EXPECT_EQ(s.get("/queue?status=resolved")["items"].size(), 0u);
  s.get("/queue?status=bogus", 400);

  const auto sug = s.get("/suggestions?term=pastur&variable=landuse&k=2");
  EXPECT_EQ(sug["term"], "pastur");
  EXPECT_EQ(sug["variable"], "landuse");
  ASSERT_EQ(sug["suggestions"].size(), 1u);
  EXPECT_EQ(sug["suggestions"][0]["candidate"], "pasture");
  EXPECT_NEAR(sug["suggestions"][0]["distance"].get<double>(), 1.0 / 7.0, 1e-12);
  s.get("/suggestions?term=x", 400);
  s.get("/suggestions?term=x&variable=landuse&k=0", 400);
}

TEST(ReviewServer, ResolveStatusCodes) {
  Fixture f;
  const auto items = f.queueLandUse({"pastagem", "campo"});
  Served s(f.db);
  EXPECT_EQ(s.post(999, {{"decision", "ignore"}}).first, 404);
  EXPECT_EQ(s.post(items[0].id, {{"decision", "maybe"}}).first, 400);
  EXPECT_EQ(s.post(items[0].id, {{"decision", "custom"}}).first, 400);
  EXPECT_EQ(s.post(items[0].id, {{"decision", "custom"}, {"target", "meadow"}}).first, 422);
  EXPECT_EQ(s.post(items[0].id, {{"decision", "custom"}, {"target", "pasture"},
                                 {"scope", {{"source", "tabID"}, {"id", 99}}}})
                .first,
            422);
  EXPECT_EQ(s.post(items[0].id, {{"decision", "custom"}, {"target", "pasture"}, {"scope", {{"source", "row"}}}}).first,
            422);
  auto res = s.client.Post("/queue/" + std::to_string(items[0].id) + "/resolve", "{not json", "application/json");
  ASSERT_TRUE(res);
  EXPECT_EQ(res->status, 400);

  const auto [ok, body] = s.post(items[0].id, {{"decision", "custom"}, {"target", "pasture"}, {"resolver", "ana"}});
  EXPECT_EQ(ok, 200);
  EXPECT_EQ(body["status"], "resolved");
  EXPECT_EQ(body["resolver"], "ana");
  EXPECT_EQ(body["resolution"], "pasture");
  const auto [again, err] = s.post(items[0].id, {{"decision", "ignore"}});
  EXPECT_EQ(again, 409);
  EXPECT_EQ(err["error"], "ItemNotPending");
  EXPECT_TRUE(err.contains("message"));

  auto table = TranslationTable::open(f.db.translationFile("landuse"));
  recordTranslation(table, "campo", "cropland");
  EXPECT_EQ(s.post(items[1].id, {{"decision", "custom"}, {"target", "grassland"}}).first, 409);

  // another writer holds the database
  const auto other = Database::open(f.db.root());
  auto guard = other.lockForWrite();
  EXPECT_EQ(s.post(items[1].id, {{"decision", "ignore"}}).first, 423);
}

TEST(ReviewServer, GeometryDecisions) {
  Fixture f;
  QueueItem geo;
  geo.kind = ItemKind::Geometry;
  geo.variable = "al3";
  geo.term = "Fronteira";
  geo.scope = Scope{SourceKind::GeoID, f.reg.brazilGeo};
  geo.nation = "brazil";
  geo.level = 3;
  geo.parentAhId = "032001";
  geo.featureIndex = 0;
  geo.candidates = {{"032001002", "Assis Brasil", 0.55}, {"032001001", "Acrel\xC3\xA2ndia", 0.45}};
  const auto a = ReviewQueue(f.db.queueFile()).enqueueGeometry(geo);
  geo.featureIndex = 1;
  const auto b = ReviewQueue(f.db.queueFile()).enqueueGeometry(geo);
  geo.featureIndex = 2;
  const auto c = ReviewQueue(f.db.queueFile()).enqueueGeometry(geo);
  Served s(f.db);
  const auto listed = s.get("/queue")["items"][0];
  EXPECT_EQ(listed["kind"], "geometry");
  EXPECT_EQ(listed["parent_ahID"], "032001");
  EXPECT_EQ(listed["feature_index"], 0);
  EXPECT_EQ(listed["candidates"][0]["ahID"], "032001002");
  EXPECT_DOUBLE_EQ(listed["candidates"][0]["fraction"].get<double>(), 0.55);
  EXPECT_EQ(s.post(a.id, {{"decision", "accept"}, {"suggestion", 1}}).second["resolution"], "032001001");
  EXPECT_EQ(s.post(b.id, {{"decision", "custom"}, {"target", "new"}}).second["resolution"], "new");
  EXPECT_EQ(s.post(c.id, {{"decision", "custom"}, {"target", "032002001"}}).first, 400);
}

TEST(ReviewServer, ServesStaticAssets) {
  Fixture f;
  fixtures::writeFile(f.tmp / "ui/index.html", "<html>review</html>");
  Served s(f.db, f.tmp / "ui");
  auto res = s.client.Get("/");
  ASSERT_TRUE(res);
  EXPECT_EQ(res->status, 200);
  EXPECT_EQ(res->body, "<html>review</html>");
  EXPECT_EQ(s.get("/health")["status"], "ok");
  EXPECT_THROW(ReviewServer(s.service, "127.0.0.1", 0, f.tmp / "absent"), Error);
}

TEST(ReviewServer, WebReviewUnblocksPipeline) {
  Fixture f;
  Served s(f.db);
  WebResolver web(s.service.queue());
  auto run = std::async(std::launch::async, [&] {
    TableNormOptions opt;
    opt.tabIDs = std::vector<std::int64_t>{f.reg.usTab};
    opt.resolver = &web;
    return normTable(f.db, opt);
  });
  json items;
  for (int i = 0; i < 200 && items.empty(); ++i) {
    std::this_thread::sleep_for(25ms);
    items = s.get("/queue")["items"];
  }
  ASSERT_EQ(items.size(), 1u);
  EXPECT_EQ(items[0]["term"], "OTHER (COMBINED) COUNTIES");
  EXPECT_EQ(s.post(items[0]["id"].get<std::int64_t>(), {{"decision", "ignore"}}).first, 200);
  ASSERT_EQ(run.wait_for(20s), std::future_status::ready);
  const auto report = run.get();
  ASSERT_EQ(report.tables.size(), 1u);
  EXPECT_FALSE(report.tables[0].deferred);
  EXPECT_EQ(report.tables[0].quarantined, 2u);
  EXPECT_EQ(report.tables[0].written, 9u);
  EXPECT_TRUE(report.pending.empty());
}
