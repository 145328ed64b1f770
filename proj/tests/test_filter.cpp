#include <gtest/gtest.h>

#include <random>

#include "r2o/error.hpp"
#include "r2o/filter.hpp"

using namespace r2o::filter;

namespace {

ElementDescriptor el(std::string url, int w, int h, std::string subtype, std::optional<std::string> caption = {}) {
  return {std::move(url), w, h, std::move(subtype), std::move(caption)};
}

}  // namespace

TEST(Filter, AcceptsSchemaWithMarkedCaption) {
  EXPECT_TRUE(is_candidate(el("/fp/photos/77.png", 512, 512, "png", "r2o:1 vacation"), {}).candidate());
}

TEST(Filter, RejectsNonSquare) {
  EXPECT_EQ(is_candidate(el("/fp/photos/78.png", 640, 480, "png"), {}).rejected_by, Rule::aspect_ratio);
}

TEST(Filter, RejectsExcludedSubtype) {
  EXPECT_EQ(is_candidate(el("/fp/photos/79.gif", 512, 512, "gif"), {}).rejected_by, Rule::subtype);
  EXPECT_EQ(is_candidate(el("/fp/photos/79.gif", 512, 512, "GIF"), {}).rejected_by, Rule::subtype);
}

TEST(Filter, RejectsForeignPrefix) {
  EXPECT_EQ(is_candidate(el("/static/logo.png", 512, 512, "png"), {}).rejected_by, Rule::prefix);
  EXPECT_EQ(is_candidate(el("http://fp.test/avatars/1.png", 512, 512, "png"), {}).rejected_by, Rule::prefix);
  EXPECT_TRUE(is_candidate(el("http://fp.test/fp/photos/1.png?v=2", 512, 512, "png"), {}).candidate());
}

TEST(Filter, RejectsOutOfBounds) {
  EXPECT_EQ(is_candidate(el("/fp/photos/1.png", 32, 32, "png"), {}).rejected_by, Rule::bounds);
  EXPECT_EQ(is_candidate(el("/fp/photos/1.png", 2048, 2048, "png"), {}).rejected_by, Rule::bounds);
  EXPECT_TRUE(is_candidate(el("/fp/photos/1.png", 64, 64, "png"), {}).candidate());
  EXPECT_TRUE(is_candidate(el("/fp/photos/1.png", 1024, 1024, "png"), {}).candidate());
}

TEST(Filter, UnknownDimensionsSkipSizeRules) {
  EXPECT_TRUE(is_candidate(el("/fp/photos/1.png", 0, 0, "png"), {}).candidate());
  EXPECT_TRUE(is_candidate(el("/fp/photos/1.png", 640, 0, "png"), {}).candidate());
}

TEST(Filter, CaptionRule) {
  EXPECT_EQ(is_candidate(el("/fp/photos/1.png", 512, 512, "png", "holiday"), {}).rejected_by, Rule::caption);
  EXPECT_TRUE(is_candidate(el("/fp/photos/1.png", 512, 512, "png"), {}).candidate());
  FilterConfig no_marker;
  no_marker.caption_marker.reset();
  EXPECT_TRUE(is_candidate(el("/fp/photos/1.png", 512, 512, "png", "holiday"), no_marker).candidate());
}

TEST(Filter, ReportsFirstFailingRule) {
  EXPECT_EQ(is_candidate(el("/other/1.gif", 10, 20, "gif", "x"), {}).rejected_by, Rule::prefix);
  EXPECT_EQ(is_candidate(el("/fp/photos/1.gif", 10, 20, "gif", "x"), {}).rejected_by, Rule::subtype);
  EXPECT_EQ(is_candidate(el("/fp/photos/1.png", 10, 20, "png", "x"), {}).rejected_by, Rule::bounds);
  EXPECT_EQ(is_candidate(el("/fp/photos/1.png", 100, 200, "png", "x"), {}).rejected_by, Rule::aspect_ratio);
  EXPECT_EQ(is_candidate(el("/fp/photos/1.png", 100, 100, "png", "x"), {}).rejected_by, Rule::caption);
}

TEST(Filter, RuleNames) {
  EXPECT_EQ(to_string(Rule::aspect_ratio), "aspect_ratio");
  EXPECT_EQ(to_string(Rule::subtype), "subtype");
}

TEST(Filter, ValidateConfig) {
  FilterConfig cfg;
  EXPECT_NO_THROW(validate(cfg));
  cfg.min_edge = 2000;
  EXPECT_THROW(validate(cfg), r2o::Error);
  cfg = {};
  cfg.path_prefixes.clear();
  EXPECT_THROW(validate(cfg), r2o::Error);
}

TEST(MakeCaption, MarkerFirst) {
  FilterConfig cfg;
  EXPECT_EQ(make_caption("vacation", cfg), "r2o:1 vacation");
  EXPECT_EQ(make_caption(std::nullopt, cfg), "r2o:1");
  cfg.caption_marker.reset();
  EXPECT_EQ(make_caption("vacation", cfg), "vacation");
}

TEST(SubtypeFromUrl, LowerCasedExtension) {
  EXPECT_EQ(subtype_from_url("http://h/fp/photos/7.PNG?x=1"), "png");
  EXPECT_EQ(subtype_from_url("/a.b/noext"), "");
  EXPECT_EQ(subtype_from_url("/x.jpeg"), "jpeg");
}

// Properties

TEST(FilterProperty, OwnOutputIsAlwaysCandidate) {
  std::mt19937 rng(1);
  FilterConfig cfg;
  for (int i = 0; i < 500; ++i) {
    std::optional<std::string> user;
    if (rng() % 2) user = "caption " + std::to_string(rng());
    auto e = el("http://fp.test/fp/photos/" + std::to_string(rng() % 100000) + ".png", 512, 512, "png",
                make_caption(user, cfg));
    ASSERT_TRUE(is_candidate(e, cfg).candidate()) << e.source_url;
  }
}

TEST(FilterProperty, ExcludingMoreNeverAccepts) {
  std::mt19937 rng(2);
  const std::vector<std::string> subtypes{"png", "gif", "jpeg", "webp", "bmp"};
  for (int i = 0; i < 2000; ++i) {
    auto e = el(rng() % 4 ? "/fp/photos/1.x" : "/y/1.x", static_cast<int>(rng() % 1500), static_cast<int>(rng() % 1500),
                subtypes[rng() % subtypes.size()]);
    FilterConfig cfg;
    auto before = is_candidate(e, cfg);
    cfg.excluded_subtypes.insert(subtypes[rng() % subtypes.size()]);
    auto after = is_candidate(e, cfg);
    if (!before.candidate()) EXPECT_FALSE(after.candidate());
    EXPECT_EQ(is_candidate(e, cfg), after);  // deterministic
  }
}

TEST(FilterProperty, NonSquareKnownDimsAlwaysRejected) {
  std::mt19937 rng(3);
  for (int i = 0; i < 2000; ++i) {
    const int w = 1 + static_cast<int>(rng() % 2000);
    int h = 1 + static_cast<int>(rng() % 2000);
    if (h == w) ++h;
    EXPECT_FALSE(is_candidate(el("/fp/photos/1.png", w, h, "png"), {}).candidate());
  }
}
