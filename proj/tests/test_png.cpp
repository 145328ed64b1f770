#include <gtest/gtest.h>

#include <zlib.h>

#include <random>

#include "r2o/error.hpp"
#include "r2o/png.hpp"

namespace png = r2o::png;

namespace {

void put32(std::vector<std::uint8_t>& out, std::uint32_t v) {
  for (int s = 24; s >= 0; s -= 8) out.push_back(static_cast<std::uint8_t>(v >> s));
}

void chunk(std::vector<std::uint8_t>& out, const char* type, const std::vector<std::uint8_t>& data) {
  put32(out, static_cast<std::uint32_t>(data.size()));
  std::vector<std::uint8_t> body(type, type + 4);
  body.insert(body.end(), data.begin(), data.end());
  out.insert(out.end(), body.begin(), body.end());
  put32(out, static_cast<std::uint32_t>(crc32(0, body.data(), static_cast<uInt>(body.size()))));
}

// Hand-assembled PNG with arbitrary colour type and per-row filter bytes.
std::vector<std::uint8_t> make_png(int w, int h, int colour_type, int channels, const std::vector<std::uint8_t>& raw) {
  std::vector<std::uint8_t> out{0x89, 'P', 'N', 'G', '\r', '\n', 0x1A, '\n'};
  std::vector<std::uint8_t> ihdr;
  put32(ihdr, w);
  put32(ihdr, h);
  ihdr.insert(ihdr.end(), {8, static_cast<std::uint8_t>(colour_type), 0, 0, 0});
  chunk(out, "IHDR", ihdr);
  uLongf len = compressBound(static_cast<uLong>(raw.size()));
  std::vector<std::uint8_t> z(len);
  compress(z.data(), &len, raw.data(), static_cast<uLong>(raw.size()));
  z.resize(len);
  chunk(out, "IDAT", z);
  chunk(out, "IEND", {});
  (void)channels;
  return out;
}

}  // namespace

TEST(Png, GrayRoundTrip) {
  std::mt19937 rng(1);
  png::GrayImage img{37, 11, {}};
  for (int i = 0; i < 37 * 11; ++i) img.pixels.push_back(static_cast<std::uint8_t>(rng()));
  auto bytes = png::encode(img);
  auto back = png::decode(bytes);
  EXPECT_EQ(back.width, 37);
  EXPECT_EQ(back.height, 11);
  EXPECT_EQ(back.pixels, img.pixels);
}

TEST(Png, EncodesGrayscaleNonInterlacedHeader) {
  auto bytes = png::encode({2, 2, {0, 255, 255, 0}});
  ASSERT_GT(bytes.size(), 33u);
  EXPECT_EQ(bytes[24], 8);  // bit depth
  EXPECT_EQ(bytes[25], 0);  // grayscale
  EXPECT_EQ(bytes[28], 0);  // no interlace
  int w = 0, h = 0;
  EXPECT_TRUE(png::read_dimensions(bytes, w, h));
  EXPECT_EQ(w, 2);
  EXPECT_EQ(h, 2);
}

TEST(Png, DecodesEveryFilterType) {
  // 3x5 gray, one row per filter type; expected pixels worked by hand.
  const std::vector<std::uint8_t> raw{
      0, 10, 20, 30,     // none
      1, 5, 5, 5,        // sub: 5 10 15
      2, 1, 1, 1,        // up: 6 11 16
      3, 4, 4, 4,        // average: 4+3=7, 4+(7+11)/2=13, 4+(13+16)/2=18
      4, 1, 1, 1,        // paeth: 8, 14, 19
  };
  auto img = png::decode(make_png(3, 5, 0, 1, raw));
  const std::vector<std::uint8_t> expected{10, 20, 30, 5, 10, 15, 6, 11, 16, 7, 13, 18, 8, 14, 19};
  EXPECT_EQ(img.pixels, expected);
}

TEST(Png, ConvertsColourToLumaOverWhite) {
  // RGB white, RGB black, RGBA fully transparent black.
  auto rgb = png::decode(make_png(2, 1, 2, 3, {0, 255, 255, 255, 0, 0, 0}));
  EXPECT_EQ(rgb.pixels, (std::vector<std::uint8_t>{255, 0}));
  auto rgba = png::decode(make_png(1, 1, 6, 4, {0, 0, 0, 0, 0}));
  EXPECT_EQ(rgba.pixels, (std::vector<std::uint8_t>{255}));
  auto ga = png::decode(make_png(1, 1, 4, 2, {0, 0, 255}));
  EXPECT_EQ(ga.pixels, (std::vector<std::uint8_t>{0}));
}

TEST(Png, RejectsGarbageAndCorruptCrc) {
  const std::vector<std::uint8_t> junk{'G', 'I', 'F', '8', '9', 'a'};
  EXPECT_THROW(png::decode(junk), r2o::Error);
  auto bytes = png::encode({4, 4, std::vector<std::uint8_t>(16, 128)});
  bytes[30] ^= 0xFF;  // inside the IHDR CRC
  try {
    png::decode(bytes);
    FAIL();
  } catch (const r2o::Error& e) {
    EXPECT_EQ(e.code(), r2o::ErrorCode::InvalidImage);
  }
  int w, h;
  EXPECT_FALSE(png::read_dimensions(junk, w, h));
}
