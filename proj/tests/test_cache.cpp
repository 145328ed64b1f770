#include <gtest/gtest.h>

#include <random>
#include <thread>

#include "r2o/cache.hpp"
#include "r2o/error.hpp"
#include "support/cache_model.hpp"

using namespace r2o;
using cache::MappingEntry;
using cache::MappingsCache;

namespace {

MappingEntry entry(const std::string& name, std::uint64_t hits = 0, std::optional<std::uint64_t> last_used = {}) {
  return {"http://fp.test/fp/photos/" + name + ".png", "https://offsite.test/v1/objects/" + name, MediaClass::image,
          hits, last_used};
}

std::vector<std::string> names(const std::vector<MappingEntry>& v) {
  std::vector<std::string> out;
  for (const auto& e : v) out.push_back(e.offsite_locator.substr(e.offsite_locator.rfind('/') + 1));
  return out;
}

using Names = std::vector<std::string>;

}  // namespace

namespace r2o::cache {
void PrintTo(const MappingEntry& e, std::ostream* os) {
  *os << e.pseudo_locator << " hits=" << e.hit_count << " last_used=";
  if (e.last_used) *os << *e.last_used;
  else *os << "unset";
}
}  // namespace r2o::cache

TEST(RecordCreated, EvictsLowestHitCount) {
  MappingsCache c({2, 8});
  c.record_created(entry("A", 5));
  c.record_created(entry("B", 3));
  c.record_created(entry("C", 1));
  EXPECT_EQ(names(c.frequent()), (Names{"A", "B"}));
}

TEST(RecordCreated, ZeroCapacityHoldsNothing) {
  MappingsCache c({0, 8});
  c.record_created(entry("A", 1));
  EXPECT_TRUE(c.frequent().empty());
  EXPECT_FALSE(c.lookup(entry("A").pseudo_locator));
}

TEST(RecordCreated, TieBreaksOnOlderLastUsed) {
  MappingsCache c({2, 8});
  c.record_created(entry("A", 3, 10));
  c.record_created(entry("B", 3, 5));
  c.record_created(entry("C", 4, 11));
  EXPECT_EQ(names(c.frequent()), (Names{"A", "C"}));
}

TEST(RecordCreated, TieBreaksOnLocatorLast) {
  MappingsCache c({1, 8});
  c.record_created(entry("B", 2, 4));
  c.record_created(entry("A", 2, 4));
  EXPECT_EQ(names(c.frequent()), (Names{"B"}));
}

TEST(RecordCreated, RejectsIdenticalLocators) {
  MappingsCache c;
  EXPECT_THROW(c.record_created({"https://x/a", "https://x/a", MediaClass::image, 0, {}}), Error);
  EXPECT_THROW(c.record_created({"https://x/a\tb", "https://x/c", MediaClass::image, 0, {}}), Error);
}

TEST(RecordResolved, LeastRecentlyUsedLeaves) {
  MappingsCache c({0, 2});
  for (auto n : {"A", "B", "C"}) c.record_resolved(entry(n));
  EXPECT_EQ(names(c.recent()), (Names{"B", "C"}));
}

TEST(RecordResolved, ReuseRefreshesRecency) {
  MappingsCache c({0, 2});
  for (auto n : {"A", "B", "A", "C"}) c.record_resolved(entry(n));
  EXPECT_EQ(names(c.recent()), (Names{"A", "C"}));
}

TEST(RecordResolved, RepeatedResolutionCountsHits) {
  MappingsCache c({0, 1});
  for (int i = 0; i < 3; ++i) c.record_resolved(entry("A"));
  auto r = c.recent();
  ASSERT_EQ(r.size(), 1u);
  EXPECT_EQ(r[0].hit_count, 3u);
  EXPECT_TRUE(r[0].last_used.has_value());
}

TEST(Lookup, EmptyCacheMisses) {
  MappingsCache c;
  EXPECT_FALSE(c.lookup("http://fp.test/fp/photos/1.png"));
}

TEST(Lookup, FindsCreatedMapping) {
  MappingsCache c;
  c.record_created(entry("P"));
  EXPECT_EQ(c.lookup(entry("P").pseudo_locator), entry("P").offsite_locator);
}

TEST(Lookup, HitIncrementsEveryCopy) {
  MappingsCache c;
  c.record_created(entry("P"));
  c.record_resolved(entry("P"));
  EXPECT_EQ(c.lookup(entry("P").pseudo_locator), entry("P").offsite_locator);
  EXPECT_EQ(c.frequent()[0].hit_count, 1u);
  EXPECT_EQ(c.recent()[0].hit_count, 2u);
  EXPECT_EQ(c.frequent()[0].last_used, c.recent()[0].last_used);
}

TEST(Lookup, MissChangesNothing) {
  MappingsCache c({2, 2});
  c.record_created(entry("A"));
  c.record_resolved(entry("B"));
  const auto f = c.frequent(), r = c.recent();
  EXPECT_FALSE(c.lookup("http://fp.test/fp/photos/none.png"));
  EXPECT_EQ(c.frequent(), f);
  EXPECT_EQ(c.recent(), r);
  EXPECT_EQ(c.stats().misses, 1u);
}

TEST(Export, EmptyCacheIsHeaderOnly) {
  MappingsCache c;
  EXPECT_EQ(c.export_mappings(), "r2o-map/1\n");
}

TEST(Export, OneLinePerMappingSorted) {
  MappingsCache c;
  c.record_resolved(entry("B"));
  c.record_created(entry("A"));
  EXPECT_EQ(c.export_mappings(),
            "r2o-map/1\n"
            "http://fp.test/fp/photos/A.png\thttps://offsite.test/v1/objects/A\timage\n"
            "http://fp.test/fp/photos/B.png\thttps://offsite.test/v1/objects/B\timage\n");
  EXPECT_EQ(c.export_mappings(cache::Selection::frequent()),
            "r2o-map/1\nhttp://fp.test/fp/photos/A.png\thttps://offsite.test/v1/objects/A\timage\n");
  EXPECT_EQ(c.export_mappings(cache::Selection::recent()),
            "r2o-map/1\nhttp://fp.test/fp/photos/B.png\thttps://offsite.test/v1/objects/B\timage\n");
  EXPECT_EQ(c.export_mappings(cache::Selection::by_prefix("http://fp.test/fp/photos/B")),
            "r2o-map/1\nhttp://fp.test/fp/photos/B.png\thttps://offsite.test/v1/objects/B\timage\n");
}

TEST(Export, MappingInBothSegmentsAppearsOnce) {
  MappingsCache c;
  c.record_created(entry("A"));
  c.record_resolved(entry("A"));
  EXPECT_EQ(c.export_mappings(), "r2o-map/1\nhttp://fp.test/fp/photos/A.png\thttps://offsite.test/v1/objects/A\timage\n");
}

TEST(Import, CountsMergedLines) {
  MappingsCache c;
  auto r = c.import_mappings(
      "r2o-map/1\n"
      "https://f/1\thttps://o/1\timage\n"
      "https://f/2\thttps://o/2\ttext\n"
      "https://f/3\thttps://o/3\timage\n");
  EXPECT_EQ(r.merged, 3u);
  EXPECT_EQ(r.skipped, 0u);
  EXPECT_EQ(c.lookup("https://f/2"), "https://o/2");
  for (const auto& e : c.recent()) EXPECT_GE(e.hit_count, 0u);
}

TEST(Import, SkipsMalformedLines) {
  MappingsCache c;
  auto r = c.import_mappings(
      "r2o-map/1\n"
      "https://f/1\thttps://o/1\timage\n"
      "https://f/2 https://o/2 image\n"
      "https://f/3\thttps://o/3\timage\n");
  EXPECT_EQ(r.merged, 2u);
  EXPECT_EQ(r.skipped, 1u);
}

TEST(Import, ImportedEntriesStartWithZeroHits) {
  MappingsCache c;
  c.import_mappings("r2o-map/1\nhttps://f/1\thttps://o/1\timage\n");
  ASSERT_EQ(c.recent().size(), 1u);
  EXPECT_EQ(c.recent()[0].hit_count, 0u);
}

TEST(Import, RejectsUnknownHeader) {
  MappingsCache c;
  try {
    c.import_mappings("r2o-map/9\nhttps://f/1\thttps://o/1\timage\n");
    FAIL();
  } catch (const Error& e) {
    EXPECT_EQ(e.code(), ErrorCode::UnsupportedVersion);
  }
  EXPECT_THROW(c.import_mappings(""), Error);
}

TEST(Import, RoundTripsThroughFreshCache) {
  MappingsCache a;
  for (int i = 0; i < 20; ++i) (i % 2 ? a.record_created(entry(std::to_string(i))) : a.record_resolved(entry(std::to_string(i))));
  MappingsCache b;
  auto r = b.import_mappings(a.export_mappings());
  EXPECT_EQ(r.merged, 20u);
  for (int i = 0; i < 20; ++i) EXPECT_EQ(b.lookup(entry(std::to_string(i)).pseudo_locator), entry(std::to_string(i)).offsite_locator);
  EXPECT_EQ(b.export_mappings(), a.export_mappings());
}

// Properties

TEST(CacheProperty, MatchesReferenceModelOnRandomWorkloads) {
  for (std::uint32_t seed = 0; seed < 10; ++seed) {
    std::mt19937 rng(seed);
    const std::size_t n = rng() % 9, m = rng() % 9;
    MappingsCache c({n, m});
    reference::CacheModel model(n, m);
    for (int op = 0; op < 10000; ++op) {
      auto e = entry(std::string(1, static_cast<char>('a' + rng() % 16)), rng() % 4);
      switch (rng() % 3) {
        case 0:
          c.record_created(e);
          model.record_created(e);
          break;
        case 1:
          c.record_resolved(e);
          model.record_resolved(e);
          break;
        default:
          ASSERT_EQ(c.lookup(e.pseudo_locator), model.lookup(e.pseudo_locator)) << "seed " << seed << " op " << op;
      }
      ASSERT_LE(c.frequent().size(), n);
      ASSERT_LE(c.recent().size(), m);
      ASSERT_EQ(c.frequent(), model.frequent()) << "seed " << seed << " op " << op;
      ASSERT_EQ(c.recent(), model.recent()) << "seed " << seed << " op " << op;
    }
  }
}

TEST(CacheProperty, ConcurrentUseKeepsSegmentsConsistent) {
  MappingsCache c({8, 8});
  std::vector<std::jthread> threads;
  for (int t = 0; t < 6; ++t)
    threads.emplace_back([&c, t] {
      std::mt19937 rng(t);
      for (int i = 0; i < 3000; ++i) {
        auto e = entry(std::to_string(rng() % 32));
        switch (rng() % 4) {
          case 0: c.record_created(e); break;
          case 1: c.record_resolved(e); break;
          case 2: c.export_mappings(); break;
          default:
            if (auto hit = c.lookup(e.pseudo_locator)) EXPECT_EQ(*hit, e.offsite_locator);
        }
      }
    });
  threads.clear();
  EXPECT_LE(c.frequent().size(), 8u);
  EXPECT_LE(c.recent().size(), 8u);
  MappingsCache copy;
  EXPECT_EQ(copy.import_mappings(c.export_mappings()).skipped, 0u);
}
