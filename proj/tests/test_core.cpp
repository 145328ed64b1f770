#include <gtest/gtest.h>

#include <chrono>
#include <random>
#include <thread>

#include "r2o/core.hpp"
#include "r2o/error.hpp"
#include "support/doubles.hpp"
#include "support/world.hpp"

using namespace r2o;
using namespace std::chrono_literals;
using testing_support::RecordingFetcher;
using testing_support::RecordingFirstParty;
using testing_support::RecordingProvider;
using testing_support::World;

namespace {

using Clock = std::chrono::steady_clock;

double ms_since(Clock::time_point t) { return std::chrono::duration<double, std::milli>(Clock::now() - t).count(); }

bool contains(const std::string& haystack, const std::vector<std::uint8_t>& needle) {
  return std::search(haystack.begin(), haystack.end(), needle.begin(), needle.end()) != haystack.end();
}

std::vector<filter::ElementDescriptor> descriptors_for(const World& w, const std::vector<std::string>& photo_ids) {
  std::vector<filter::ElementDescriptor> out;
  for (const auto& id : photo_ids) {
    auto p = w.service.photo(id);
    out.push_back({p.static_url, p.width, p.height, "png", p.caption});
  }
  return out;
}

}  // namespace

TEST(WritePath, ProducesConsistentReceipt) {
  World w;
  cache::MappingsCache cache;
  firstparty::LocalFirstPartyClient fp(w.service);
  auto album = w.service.create_album("a");
  auto original = testing_support::random_png(210, 1);
  auto receipt = core::write_path(original, "vacation", album, w.offsite, fp, cache);

  EXPECT_NE(receipt.offsite_locator, receipt.pseudo_locator);
  EXPECT_EQ(receipt.album_id, album);
  EXPECT_EQ(w.offsite.fetch(receipt.offsite_locator), original);

  auto photo = w.service.photo(receipt.photo_id);
  EXPECT_EQ(photo.static_url, receipt.pseudo_locator);
  EXPECT_EQ(photo.caption, "r2o:1 vacation");
  EXPECT_EQ(photo.width, 512);
  EXPECT_EQ(photo.height, 512);
  EXPECT_EQ(codec::decode_qr(codec::from_png(photo.image.bytes)).locator, receipt.offsite_locator);
  EXPECT_EQ(cache.lookup(receipt.pseudo_locator), receipt.offsite_locator);
}

TEST(WritePath, OriginalNeverReachesFirstParty) {
  World w;
  cache::MappingsCache cache;
  RecordingFirstParty fp(w.service);
  auto album = fp.create_album("a");
  auto original = testing_support::random_png(100, 2);
  auto receipt = core::write_path(original, std::nullopt, album, w.offsite, fp, cache);
  for (const auto& body : fp.requests()) EXPECT_FALSE(contains(body, original.bytes));
  EXPECT_EQ(w.offsite.fetch(receipt.offsite_locator), original);
}

TEST(WritePath, FirstPartyFailureRemovesOffsiteObject) {
  World w;
  cache::MappingsCache cache;
  RecordingFirstParty fp(w.service);
  RecordingProvider offsite(w.offsite);
  auto album = fp.create_album("a");
  fp.set_down(true);
  try {
    core::write_path(testing_support::random_png(64, 3), std::nullopt, album, offsite, fp, cache);
    FAIL() << "expected an error";
  } catch (const Error& e) {
    EXPECT_EQ(e.code(), ErrorCode::StoreUnavailable);
  }
  ASSERT_EQ(offsite.removed().size(), 1u);
  EXPECT_EQ(w.offsite.size(), 0u);
  EXPECT_TRUE(cache.frequent().empty());
}

TEST(WritePath, EncodeFailureRemovesOffsiteObject) {
  // A base URL this long cannot fit in any supported symbol.
  store::MemoryProvider offsite({"long", store::ProviderKind::memory, "https://offsite.test/" + std::string(300, 'p'), {}});
  RecordingProvider recorded(offsite);
  firstparty::FirstPartyService service;
  firstparty::LocalFirstPartyClient fp(service);
  cache::MappingsCache cache;
  EXPECT_THROW(core::write_path(testing_support::random_png(64, 4), std::nullopt, service.create_album("a"), recorded, fp, cache),
               Error);
  EXPECT_EQ(recorded.removed().size(), 1u);
  EXPECT_EQ(offsite.size(), 0u);
}

TEST(WritePath, UnknownAlbumPropagates) {
  World w;
  cache::MappingsCache cache;
  firstparty::LocalFirstPartyClient fp(w.service);
  try {
    core::write_path(testing_support::random_png(64, 5), std::nullopt, "missing", w.offsite, fp, cache);
    FAIL();
  } catch (const Error& e) {
    EXPECT_EQ(e.code(), ErrorCode::AlbumNotFound);
  }
  EXPECT_EQ(w.offsite.size(), 0u);
}

TEST(WritePath, OptionalBorderPadding) {
  World w;
  cache::MappingsCache cache;
  firstparty::LocalFirstPartyClient fp(w.service);
  core::WriteOptions options;
  options.pad_to = std::pair{800, 600};
  auto receipt = core::write_path(testing_support::random_png(64, 6), std::nullopt, w.service.create_album("a"), w.offsite,
                                  fp, cache, options);
  auto photo = w.service.photo(receipt.photo_id);
  EXPECT_EQ(photo.width, 800);
  EXPECT_EQ(photo.height, 600);
  EXPECT_EQ(codec::decode_qr(codec::from_png(photo.image.bytes)).locator, receipt.offsite_locator);
}

TEST(WritePath, ConcurrentWritesAreIndependent) {
  World w;
  cache::MappingsCache cache;
  firstparty::LocalFirstPartyClient fp(w.service);
  auto album = w.service.create_album("a");
  std::vector<core::WriteReceipt> receipts(6);
  std::vector<store::ContentItem> originals;
  for (int i = 0; i < 6; ++i) originals.push_back(testing_support::random_png(40 + i, 100 + i));
  {
    std::vector<std::jthread> threads;
    for (int i = 0; i < 6; ++i)
      threads.emplace_back([&, i] { receipts[i] = core::write_path(originals[i], std::nullopt, album, w.offsite, fp, cache); });
  }
  EXPECT_EQ(w.service.album(album).photo_ids.size(), 6u);
  for (int i = 0; i < 6; ++i) {
    EXPECT_EQ(w.offsite.fetch(receipts[i].offsite_locator), originals[i]);
    EXPECT_EQ(cache.lookup(receipts[i].pseudo_locator), receipts[i].offsite_locator);
  }
}

TEST(ReadPath, ColdThenWarm) {
  World w;
  cache::MappingsCache writer_cache, reader_cache;
  firstparty::LocalFirstPartyClient fp(w.service);
  auto original = testing_support::random_png(50, 7);
  auto receipt = core::write_path(original, std::nullopt, w.service.create_album("a"), w.offsite, fp, writer_cache);
  RecordingFetcher fetcher(w.fetcher);
  auto elements = descriptors_for(w, {receipt.photo_id});

  auto cold = core::read_path(elements, {}, reader_cache, fetcher);
  ASSERT_EQ(cold.size(), 1u);
  EXPECT_EQ(cold[0].outcome, core::Outcome::replaced);
  EXPECT_EQ(cold[0].via, core::Via::decoded);
  EXPECT_EQ(cold[0].content, original);
  EXPECT_EQ(cold[0].offsite_locator, receipt.offsite_locator);
  EXPECT_EQ(fetcher.count_prefix(receipt.pseudo_locator), 1u);

  fetcher.reset();
  auto warm = core::read_path(elements, {}, reader_cache, fetcher);
  EXPECT_EQ(warm[0].outcome, core::Outcome::replaced);
  EXPECT_EQ(warm[0].via, core::Via::cache_hit);
  EXPECT_EQ(warm[0].content, original);
  EXPECT_EQ(fetcher.urls(), std::vector<std::string>{receipt.offsite_locator});
}

TEST(ReadPath, FilterRejectionIssuesNoFetch) {
  World w;
  cache::MappingsCache cache;
  RecordingFetcher fetcher(w.fetcher);
  std::vector<filter::ElementDescriptor> elements{{"http://fp.test/fp/photos/9.png", 640, 480, "png", std::nullopt},
                                                  {"http://fp.test/static/logo.png", 512, 512, "png", std::nullopt}};
  auto out = core::read_path(elements, {}, cache, fetcher);
  EXPECT_EQ(out[0].outcome, core::Outcome::not_indirection);
  EXPECT_EQ(out[0].reason, "aspect_ratio");
  EXPECT_EQ(out[1].outcome, core::Outcome::not_indirection);
  EXPECT_EQ(out[1].reason, "prefix");
  EXPECT_TRUE(fetcher.urls().empty());
}

TEST(ReadPath, OrdinarySquarePhotoIsNotIndirection) {
  World w;
  cache::MappingsCache cache;
  auto album = w.service.create_album("a");
  auto up = w.service.upload_photo(album, testing_support::random_png(128, 8), "");
  auto out = core::read_path(descriptors_for(w, {up.photo_id}), {}, cache, w.fetcher);
  EXPECT_EQ(out[0].outcome, core::Outcome::not_indirection);
  EXPECT_TRUE(cache.recent().empty());
}

TEST(ReadPath, FailuresStayIsolated) {
  World w;
  cache::MappingsCache writer_cache, cache;
  firstparty::LocalFirstPartyClient fp(w.service);
  auto album = w.service.create_album("a");
  auto good = core::write_path(testing_support::random_png(32, 9), std::nullopt, album, w.offsite, fp, writer_cache);
  auto orphan = core::write_path(testing_support::random_png(32, 10), std::nullopt, album, w.offsite, fp, writer_cache);
  w.offsite.remove(orphan.offsite_locator);
  auto elements = descriptors_for(w, {good.photo_id, orphan.photo_id});
  elements.push_back({"http://fp.test/fp/photos/404.png", 512, 512, "png", std::nullopt});

  auto out = core::read_path(elements, {}, cache, w.fetcher);
  EXPECT_EQ(out[0].outcome, core::Outcome::replaced);
  EXPECT_EQ(out[1].outcome, core::Outcome::failed);
  EXPECT_EQ(out[2].outcome, core::Outcome::failed);
  // The mapping was learned even though the off-site fetch failed.
  EXPECT_EQ(cache.lookup(orphan.pseudo_locator), orphan.offsite_locator);
}

TEST(ReadPath, ResultsKeepInputOrder) {
  World w;
  cache::MappingsCache writer_cache, cache;
  firstparty::LocalFirstPartyClient fp(w.service);
  auto album = w.service.create_album("a");
  std::vector<std::string> ids;
  std::vector<store::ContentItem> originals;
  for (int i = 0; i < 12; ++i) {
    originals.push_back(testing_support::random_png(20 + i, 200 + i));
    ids.push_back(core::write_path(originals.back(), std::nullopt, album, w.offsite, fp, writer_cache).photo_id);
  }
  auto out = core::read_path(descriptors_for(w, ids), {}, cache, w.fetcher, {.parallelism = 3, .max_in_flight = 5});
  for (int i = 0; i < 12; ++i) {
    ASSERT_EQ(out[i].outcome, core::Outcome::replaced);
    EXPECT_EQ(out[i].content, originals[i]);
  }
}

TEST(ReadPath, RejectsZeroParallelism) {
  World w;
  cache::MappingsCache cache;
  EXPECT_THROW(core::read_path({}, {}, cache, w.fetcher, {.parallelism = 0}), Error);
}

TEST(ReadPath, ParallelCandidatesCostAboutOneRoundTrip) {
  World w(100ms, 100ms);
  cache::MappingsCache writer_cache;
  firstparty::LocalFirstPartyClient fp(w.service);
  auto album = w.service.create_album("a");
  std::vector<std::string> ids;
  for (int i = 0; i < 8; ++i)
    ids.push_back(core::write_path(testing_support::random_png(24, 300 + i), std::nullopt, album, w.offsite, fp, writer_cache).photo_id);
  auto elements = descriptors_for(w, ids);

  cache::MappingsCache single_cache;
  auto t = Clock::now();
  core::read_path({elements[0]}, {}, single_cache, w.fetcher);
  const double single = ms_since(t);

  cache::MappingsCache batch_cache;
  t = Clock::now();
  auto out = core::read_path(elements, {}, batch_cache, w.fetcher);
  const double batch = ms_since(t);
  for (const auto& r : out) EXPECT_EQ(r.outcome, core::Outcome::replaced);
  EXPECT_LE(batch, single + 50.0) << "single " << single << " ms";
}

TEST(ResolvePage, RewritesOnlySchemata) {
  World w;
  cache::MappingsCache writer_cache, cache;
  firstparty::LocalFirstPartyClient fp(w.service);
  auto album = w.service.create_album("mixed");
  std::vector<core::WriteReceipt> receipts;
  for (int i = 0; i < 3; ++i)
    receipts.push_back(core::write_path(testing_support::random_png(30, 400 + i), "n" + std::to_string(i), album, w.offsite, fp,
                                        writer_cache));
  png::GrayImage wide{300, 200, std::vector<std::uint8_t>(300 * 200, 90)};
  auto ordinary = w.service.upload_photo(album, {png::encode(wide), "image/png"}, "beach");

  const std::string before = w.service.render_album_page(album);
  auto page = core::resolve_page(w.page_url(album), {}, cache, w.fetcher);
  ASSERT_EQ(page.resolutions.size(), 4u);
  auto scan = rewriter::scan_html(page.html);
  for (int i = 0; i < 3; ++i) EXPECT_EQ(scan.elements[i].descriptor.source_url, receipts[i].offsite_locator);
  EXPECT_EQ(scan.elements[3].descriptor.source_url, ordinary.static_url);

  // Reverse the substitutions: everything else must be untouched.
  std::string restored = page.html;
  for (const auto& r : receipts) restored.replace(restored.find(r.offsite_locator), r.offsite_locator.size(), r.pseudo_locator);
  EXPECT_EQ(restored, before);
}

TEST(ResolvePage, NoCandidatesIsIdentity) {
  World w;
  cache::MappingsCache cache;
  auto album = w.service.create_album("plain");
  png::GrayImage wide{300, 200, std::vector<std::uint8_t>(300 * 200, 90)};
  w.service.upload_photo(album, {png::encode(wide), "image/png"}, "");
  auto page = core::resolve_page(w.page_url(album), {}, cache, w.fetcher);
  EXPECT_EQ(page.html, w.service.render_album_page(album));
}

TEST(ResolvePage, UnreachablePage) {
  World w;
  cache::MappingsCache cache;
  try {
    core::resolve_page(w.page_url("nope"), {}, cache, w.fetcher);
    FAIL();
  } catch (const Error& e) {
    EXPECT_EQ(e.code(), ErrorCode::PageUnreachable);
  }
}

TEST(ResolvePage, InlineModeEmbedsContent) {
  World w;
  cache::MappingsCache writer_cache, cache;
  firstparty::LocalFirstPartyClient fp(w.service);
  auto album = w.service.create_album("inline");
  auto original = testing_support::random_png(16, 11);
  core::write_path(original, std::nullopt, album, w.offsite, fp, writer_cache);
  auto page = core::resolve_page(w.page_url(album), {}, cache, w.fetcher, {.inline_content = true});
  EXPECT_NE(page.html.find("src=\"" + rewriter::data_url(original) + "\""), std::string::npos);
}

TEST(CoreProperty, EndToEndIdentity) {
  World w;
  cache::MappingsCache writer_cache, cache;
  firstparty::LocalFirstPartyClient fp(w.service);
  std::mt19937 rng(12);
  for (int i = 0; i < 10; ++i) {
    auto album = w.service.create_album("e2e");
    auto original = testing_support::random_png(8 + static_cast<int>(rng() % 120), rng());
    auto receipt = core::write_path(original, std::nullopt, album, w.offsite, fp, writer_cache);
    EXPECT_EQ(w.offsite.fetch(receipt.offsite_locator), original);
    auto page = core::resolve_page(w.page_url(album), {}, cache, w.fetcher);
    ASSERT_EQ(page.resolutions.size(), 1u);
    EXPECT_EQ(page.resolutions[0].content, original);
  }
}
