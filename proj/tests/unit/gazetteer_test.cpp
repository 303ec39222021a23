#include <gtest/gtest.h>

#include <algorithm>
#include <random>
#include <set>

#include "areal/gazetteer.hpp"
#include "areal/text.hpp"
#include "expect_errc.hpp"
#include "fixtures.hpp"
#include "oracles.hpp"

using namespace areal;
using fixtures::TempDir;

namespace {

TidyTable unitTable(std::vector<std::vector<std::string>> rows, std::vector<std::string> names = {"al2", "al3"}) {
  TidyTable t;
  t.idNames = std::move(names);
  t.measuredNames = {"v"};
  for (auto& r : rows) t.rows.push_back({std::move(r), {1.0}, 0, 0});
  return t;
}

// rank of `name` among `siblings` by folded byte order, 1-based
int rankOf(const std::string& name, std::vector<std::string> siblings) {
  std::sort(siblings.begin(), siblings.end(),
            [](const auto& a, const auto& b) { return text::matchKey(a) < text::matchKey(b); });
  return static_cast<int>(std::find(siblings.begin(), siblings.end(), name) - siblings.begin()) + 1;
}

Gazetteer brazilGazetteer() {
  std::vector<std::vector<std::string>> chains{{"argentina"}, {"brazil"}, {"chile"}};
  for (auto s : {"Rond\xC3\xB4nia", "Acre"})
    chains.push_back({"brazil", s});
  for (auto m : {"Cabixi", "Ariquemes", "Cacoal", "Alta Floresta D'Oeste", "Santa Cruz"})
    chains.push_back({"brazil", "Rond\xC3\xB4nia", m});
  for (auto m : {"Brasil\xC3\xA9ia", "Acrel\xC3\xA2ndia", "Santa Cruz"}) chains.push_back({"brazil", "Acre", m});
  chains.push_back({"chile", "Santa Cruz"});
  return buildHierarchy(chains, 1);
}

}  // namespace

TEST(AhId, Forms) {
  const AhId id({70, 13});
  EXPECT_EQ(id.canonical(), "070013");
  EXPECT_EQ(id.numeric(), 70013u);
  EXPECT_EQ(AhId::parse("070013"), id);
  EXPECT_EQ(AhId::fromNumeric(70013, 2), id);
  EXPECT_EQ(AhId({32, 1, 1}).numeric(), 32001001u);
  EXPECT_EQ(id.parent(), AhId({70}));
  EXPECT_EQ(AhId({70}).child(13), id);
  EXPECT_TRUE(AhId({70}).isPrefixOf(id));
  EXPECT_FALSE(AhId({7}).isPrefixOf(id));
  EXPECT_THROW(AhId({0}), Error);
  EXPECT_THROW(AhId({1000}), Error);
  EXPECT_THROW(AhId::parse("07001"), Error);
  EXPECT_THROW(AhId::parse("07a013"), Error);
  EXPECT_LT(AhId({1, 2}), AhId({1, 3}));
}

TEST(Gazetteer, MinimalHierarchy) {
  const auto gaz = buildHierarchy({{"aland"}, {"aland", "mariehamn"}}, 1);
  EXPECT_EQ(lookupAhId(gaz, {"aland", "mariehamn"})->canonical(), "001001");
  EXPECT_EQ(gaz.size(), 2u);
}

TEST(Gazetteer, EstoniaTartu) {
  // 69 nations sort before estonia
  std::vector<std::vector<std::string>> chains;
  for (int i = 0; i < 69; ++i) chains.push_back({"e" + std::string(1, static_cast<char>('a' + i / 26)) +
                                                 std::string(1, static_cast<char>('a' + i % 26))});
  chains.push_back({"estonia"});
  chains.push_back({"finland"});
  const std::vector<std::string> counties{"harju", "hiiu", "ida-viru", "jogeva", "jarva", "laane", "laane-viru",
                                          "parnu", "polva", "rapla", "saare", "tallinn", "tartu", "valga", "viljandi"};
  for (const auto& c : counties) chains.push_back({"estonia", c});
  const auto gaz = buildHierarchy(chains, 1);
  const auto id = lookupAhId(gaz, {"estonia", "tartu"});
  ASSERT_TRUE(id);
  EXPECT_EQ(id->segments()[0], 70);
  EXPECT_EQ(id->segments()[1], rankOf("tartu", counties));
  EXPECT_EQ(id->canonical(), "070013");
  EXPECT_FALSE(lookupAhId(gaz, {"estonia", "atlantis"}));
  EXPECT_FALSE(lookupAhId(gaz, {}));
  EXPECT_EQ(lookupAhId(gaz, {"ESTONIA", " Tartu "}), id);
}

TEST(Gazetteer, SiblingsNumberedAlphabetically) {
  const auto gaz = brazilGazetteer();
  const auto ro = lookupAhId(gaz, {"brazil", "Rond\xC3\xB4nia"});
  ASSERT_TRUE(ro);
  EXPECT_EQ(ro->canonical(), "002002");
  const std::vector<std::string> munis{"Cabixi", "Ariquemes", "Cacoal", "Alta Floresta D'Oeste", "Santa Cruz"};
  for (const auto& m : munis) {
    const auto id = lookupAhId(gaz, {"brazil", "Rond\xC3\xB4nia", m});
    ASSERT_TRUE(id) << m;
    EXPECT_TRUE(ro->isPrefixOf(*id));
    EXPECT_EQ(id->segments()[2], rankOf(m, munis)) << m;
  }
  // prefix property over the whole tree
  for (const auto& n : gaz.nodes()) {
    if (n.level() == 1) continue;
    ASSERT_TRUE(gaz.find(*n.parent())) << n.ahId.canonical();
  }
  // alphabetical consistency among every sibling group
  std::set<std::string> parents;
  for (const auto& n : gaz.nodes()) parents.insert(n.level() > 1 ? n.parent()->canonical() : "");
  for (const auto& p : parents) {
    const auto kids = gaz.children(p.empty() ? std::nullopt : std::optional(AhId::parse(p)));
    for (std::size_t i = 0; i < kids.size(); ++i)
      for (std::size_t j = 0; j < kids.size(); ++j)
        if (text::matchKey(kids[i]->name) < text::matchKey(kids[j]->name))
          EXPECT_LT(kids[i]->ahId.segments().back(), kids[j]->ahId.segments().back());
  }
}

TEST(Gazetteer, LaterUnitsGetNextFreeSegment) {
  auto gaz = buildHierarchy({{"brazil"}, {"brazil", "Rond\xC3\xB4nia"}, {"brazil", "Rond\xC3\xB4nia", "Cabixi"}}, 1);
  const auto before = lookupAhId(gaz, {"brazil", "Rond\xC3\xB4nia", "Cabixi"});
  extendHierarchy(gaz, {{"brazil", "Rond\xC3\xB4nia", "Ariquemes"}, {"brazil", "Acre"}}, 2);
  EXPECT_EQ(lookupAhId(gaz, {"brazil", "Rond\xC3\xB4nia", "Cabixi"}), before);
  EXPECT_EQ(lookupAhId(gaz, {"brazil", "Rond\xC3\xB4nia", "Ariquemes"})->canonical(), "001001002");
  EXPECT_EQ(lookupAhId(gaz, {"brazil", "Acre"})->canonical(), "001002");
  const auto* node = gaz.find(AhId::parse("001002"));
  ASSERT_NE(node, nullptr);
  EXPECT_EQ(node->geoID, 2);
}

TEST(Gazetteer, SiblingLimits) {
  Gazetteer gaz;
  std::vector<std::string> names;
  for (int i = 0; i < 1000; ++i) names.push_back("unit" + std::to_string(i));
  EXPECT_ERRC(gaz.addSiblings(std::nullopt, names, 1), Errc::TooManySiblings);
  names.resize(999);
  EXPECT_EQ(gaz.addSiblings(std::nullopt, names, 1).size(), 999u);
  EXPECT_ERRC(gaz.add(std::nullopt, "one more", 1), Errc::TooManySiblings);
  EXPECT_ERRC(buildHierarchy({{"brazil"}, {"Brazil"}}, 1), Errc::DuplicateSibling);
  EXPECT_ERRC(buildHierarchy({{"brazil"}, {"brazil", "acre"}, {"brazil", "acre"}}, 1), Errc::DuplicateSibling);
}

TEST(Gazetteer, SaveLoadRoundTrip) {
  TempDir tmp;
  const auto gaz = brazilGazetteer();
  gaz.save(tmp / "gaz.csv");
  const auto back = Gazetteer::load(tmp / "gaz.csv");
  ASSERT_EQ(back.size(), gaz.size());
  for (const auto& n : gaz.nodes()) {
    const auto* m = back.find(n.ahId);
    ASSERT_NE(m, nullptr);
    EXPECT_EQ(m->name, n.name);
    EXPECT_EQ(m->geoID, n.geoID);
  }
  const auto rows = csv::readFile(tmp / "gaz.csv");
  EXPECT_EQ(rows[0].size(), 5u);
  EXPECT_TRUE(Gazetteer::load(tmp / "missing.csv").nodes().empty());
}

TEST(Gazetteer, RandomHierarchiesRoundTrip) {
  std::mt19937_64 rng(21);
  for (int round = 0; round < 20; ++round) {
    std::vector<std::vector<std::string>> chains;
    std::vector<std::vector<std::string>> frontier{{}};
    for (int depth = 1; depth <= 4; ++depth) {
      std::vector<std::vector<std::string>> next;
      for (const auto& parent : frontier) {
        std::set<std::string> kids;
        const int n = std::uniform_int_distribution<int>(1, depth == 1 ? 12 : 4)(rng);
        while (static_cast<int>(kids.size()) < n) kids.insert(text::matchKey(oracle::randomWord(rng, 2, 7)));
        for (const auto& k : kids) {
          auto chain = parent;
          chain.push_back(k);
          chains.push_back(chain);
          next.push_back(chain);
        }
      }
      frontier = std::move(next);
    }
    std::shuffle(chains.begin(), chains.end(), rng);
    std::stable_sort(chains.begin(), chains.end(), [](const auto& a, const auto& b) { return a.size() < b.size(); });
    const auto gaz = buildHierarchy(chains, 1);
    ASSERT_EQ(gaz.size(), chains.size());
    for (const auto& n : gaz.nodes()) {
      EXPECT_EQ(AhId::fromNumeric(n.ahId.numeric(), n.level()), n.ahId);
      EXPECT_EQ(AhId::parse(n.ahId.canonical()), n.ahId);
      if (n.level() > 1) EXPECT_TRUE(n.parent()->isPrefixOf(n.ahId));
    }
    for (const auto& c : chains) {
      const auto id = lookupAhId(gaz, c);
      ASSERT_TRUE(id);
      EXPECT_EQ(id->level(), static_cast<int>(c.size()));
    }
  }
}

TEST(MatchUnits, ResolvesTopDown) {
  const auto gaz = brazilGazetteer();
  UnitMatchOptions opt;
  opt.nation = "brazil";
  opt.level = 3;
  const auto r = matchUnits(unitTable({{"Rond\xC3\xB4nia", "Alta Floresta D'Oeste"}, {"rondonia", "cabixi"}}), gaz, opt);
  ASSERT_EQ(r.rows.size(), 2u);
  ASSERT_TRUE(r.rows[0].ahId);
  EXPECT_EQ(r.rows[0].ahId->canonical(), "002002001");
  EXPECT_FALSE(r.rows[1].ahId);
  EXPECT_EQ(r.rows[1].failedLevel, 2);
  EXPECT_EQ(r.rows[1].failedTerm, "rondonia");
  EXPECT_EQ(r.unresolved(), 1u);
}

TEST(MatchUnits, HomonymsResolveWithinParent) {
  const auto gaz = brazilGazetteer();
  // flat lookup: three units are called santa cruz
  std::vector<const GazetteerNode*> flat;
  for (const auto& n : gaz.nodes())
    if (text::matchKey(n.name) == "santa cruz") flat.push_back(&n);
  ASSERT_EQ(flat.size(), 3u);

  UnitMatchOptions opt;
  opt.nation = "brazil";
  opt.level = 3;
  const auto r = matchUnits(unitTable({{"Acre", "Santa Cruz"}, {"Rond\xC3\xB4nia", "santa cruz"}}), gaz, opt);
  const auto acre = *lookupAhId(gaz, {"brazil", "Acre"});
  const auto ro = *lookupAhId(gaz, {"brazil", "Rond\xC3\xB4nia"});
  ASSERT_TRUE(r.rows[0].ahId && r.rows[1].ahId);
  int inScope = 0;
  for (const auto* n : flat) inScope += acre.isPrefixOf(n->ahId);
  EXPECT_EQ(inScope, 1);
  EXPECT_TRUE(acre.isPrefixOf(*r.rows[0].ahId));
  EXPECT_TRUE(ro.isPrefixOf(*r.rows[1].ahId));
  EXPECT_NE(r.rows[0].ahId, r.rows[1].ahId);
}

TEST(MatchUnits, TranslatesNamesPerLevel) {
  TempDir tmp;
  const auto gaz = brazilGazetteer();
  auto al2 = TranslationTable::parse(csv::parse(fixtures::stateTranslationsCsv()));
  UnitMatchOptions opt;
  opt.nation = "brazil";
  opt.level = 3;
  opt.translations = [&](int level) { return level == 2 ? &al2 : nullptr; };
  const auto r = matchUnits(unitTable({{"RO", "Cabixi"}, {"AC", "Brasil\xC3\xA9ia"}}), gaz, opt);
  EXPECT_EQ(r.rows[0].ahId, lookupAhId(gaz, {"brazil", "Rond\xC3\xB4nia", "Cabixi"}));
  EXPECT_EQ(r.rows[1].ahId, lookupAhId(gaz, {"brazil", "Acre", "Brasil\xC3\xA9ia"}));
}

TEST(MatchUnits, UnknownNamesAreQueuedWithSiblingSuggestions) {
  TempDir tmp;
  const auto gaz = brazilGazetteer();
  ReviewQueue queue(tmp / "q.json");
  TranslationTable al3;
  UnitMatchOptions opt;
  opt.nation = "brazil";
  opt.level = 3;
  opt.queue = &queue;
  opt.scope = Scope{SourceKind::TabID, 1};
  opt.translations = [&](int level) { return level == 3 ? &al3 : nullptr; };
  const auto r = matchUnits(unitTable({{"Acre", "Brasileia x"}}), gaz, opt);
  ASSERT_EQ(r.pending.size(), 1u);
  EXPECT_EQ(r.pending[0].variable, "al3");
  ASSERT_FALSE(r.pending[0].suggestions.empty());
  EXPECT_EQ(r.pending[0].suggestions[0].candidate, "Brasil\xC3\xA9ia");
  for (const auto& s : r.pending[0].suggestions) EXPECT_NE(s.candidate, "Cabixi");
}

TEST(MatchUnits, EdgeCases) {
  const auto gaz = brazilGazetteer();
  UnitMatchOptions opt;
  opt.nation = "brazil";
  opt.level = 3;
  const auto empty = matchUnits(unitTable({}), gaz, opt);
  EXPECT_TRUE(empty.rows.empty());
  EXPECT_TRUE(empty.pending.empty());
  EXPECT_ERRC(matchUnits(unitTable({{"Acre"}}, {"al2"}), gaz, opt), Errc::LevelMissing);
  opt.strict = true;
  EXPECT_ERRC(matchUnits(unitTable({{"Acre", "nowhere"}}), gaz, opt), Errc::UnresolvedUnits);
  opt.nation = "atlantis";
  opt.strict = false;
  EXPECT_THROW(matchUnits(unitTable({{"Acre", "Cabixi"}}), gaz, opt), Error);
  EXPECT_EQ(levelColumn(3), "al3");
}

TEST(MatchUnits, NationColumnWhenNoNationGiven) {
  const auto gaz = brazilGazetteer();
  UnitMatchOptions opt;
  opt.level = 2;
  const auto r = matchUnits(unitTable({{"brazil", "Acre"}, {"chile", "Santa Cruz"}}, {"al1", "al2"}), gaz, opt);
  EXPECT_EQ(r.rows[0].ahId, lookupAhId(gaz, {"brazil", "Acre"}));
  EXPECT_EQ(r.rows[1].ahId, lookupAhId(gaz, {"chile", "Santa Cruz"}));
}
