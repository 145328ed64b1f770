#include "r2o/png.hpp"

#include <zlib.h>

#include <array>
#include <cstdlib>
#include <string>

#include "r2o/error.hpp"

namespace r2o::png {
namespace {

constexpr std::array<std::uint8_t, 8> kSignature{0x89, 'P', 'N', 'G', '\r', '\n', 0x1A, '\n'};

void put_u32(std::vector<std::uint8_t>& out, std::uint32_t v) {
  out.push_back(static_cast<std::uint8_t>(v >> 24));
  out.push_back(static_cast<std::uint8_t>(v >> 16));
  out.push_back(static_cast<std::uint8_t>(v >> 8));
  out.push_back(static_cast<std::uint8_t>(v));
}

std::uint32_t get_u32(std::span<const std::uint8_t> b, std::size_t at) {
  return std::uint32_t{b[at]} << 24 | std::uint32_t{b[at + 1]} << 16 | std::uint32_t{b[at + 2]} << 8 | b[at + 3];
}

void put_chunk(std::vector<std::uint8_t>& out, const char* type, std::span<const std::uint8_t> body) {
  put_u32(out, static_cast<std::uint32_t>(body.size()));
  const std::size_t start = out.size();
  out.insert(out.end(), type, type + 4);
  out.insert(out.end(), body.begin(), body.end());
  uLong crc = crc32(0L, out.data() + start, static_cast<uInt>(out.size() - start));
  put_u32(out, static_cast<std::uint32_t>(crc));
}

[[noreturn]] void invalid(const std::string& why) { throw Error(ErrorCode::InvalidImage, why); }

std::uint8_t paeth(int a, int b, int c) {
  int p = a + b - c;
  int pa = std::abs(p - a), pb = std::abs(p - b), pc = std::abs(p - c);
  if (pa <= pb && pa <= pc) return static_cast<std::uint8_t>(a);
  if (pb <= pc) return static_cast<std::uint8_t>(b);
  return static_cast<std::uint8_t>(c);
}

}  // namespace

std::vector<std::uint8_t> encode(const GrayImage& image) {
  if (image.width <= 0 || image.height <= 0 ||
      image.pixels.size() != static_cast<std::size_t>(image.width) * image.height)
    throw Error(ErrorCode::InvalidArgument, "image dimensions do not match pixel buffer");

  std::vector<std::uint8_t> out(kSignature.begin(), kSignature.end());
  std::vector<std::uint8_t> ihdr;
  put_u32(ihdr, static_cast<std::uint32_t>(image.width));
  put_u32(ihdr, static_cast<std::uint32_t>(image.height));
  ihdr.insert(ihdr.end(), {8, 0, 0, 0, 0});
  put_chunk(out, "IHDR", ihdr);

  std::vector<std::uint8_t> raw;
  raw.reserve(static_cast<std::size_t>(image.width + 1) * image.height);
  for (int y = 0; y < image.height; ++y) {
    raw.push_back(0);
    auto row = image.pixels.begin() + static_cast<std::ptrdiff_t>(y) * image.width;
    raw.insert(raw.end(), row, row + image.width);
  }
  uLongf packed_len = compressBound(static_cast<uLong>(raw.size()));
  std::vector<std::uint8_t> packed(packed_len);
  if (compress2(packed.data(), &packed_len, raw.data(), static_cast<uLong>(raw.size()), Z_BEST_SPEED) != Z_OK)
    throw Error(ErrorCode::InvalidImage, "deflate failed");
  packed.resize(packed_len);
  put_chunk(out, "IDAT", packed);
  put_chunk(out, "IEND", {});
  return out;
}

bool read_dimensions(std::span<const std::uint8_t> bytes, int& width, int& height) noexcept {
  if (bytes.size() < 24 || !std::equal(kSignature.begin(), kSignature.end(), bytes.begin())) return false;
  if (std::string(bytes.begin() + 12, bytes.begin() + 16) != "IHDR") return false;
  width = static_cast<int>(get_u32(bytes, 16));
  height = static_cast<int>(get_u32(bytes, 20));
  return width > 0 && height > 0;
}

GrayImage decode(std::span<const std::uint8_t> bytes) {
  if (bytes.size() < 8 || !std::equal(kSignature.begin(), kSignature.end(), bytes.begin())) invalid("not a PNG");

  int width = 0, height = 0, channels = 0;
  bool seen_header = false, seen_end = false;
  std::vector<std::uint8_t> idat;
  for (std::size_t at = 8; at < bytes.size() && !seen_end;) {
    if (at + 12 > bytes.size()) invalid("truncated chunk");
    const std::uint32_t len = get_u32(bytes, at);
    if (len > bytes.size() - at - 12) invalid("chunk length out of bounds");
    std::string type(bytes.begin() + at + 4, bytes.begin() + at + 8);
    auto body = bytes.subspan(at + 8, len);
    uLong crc = crc32(0L, bytes.data() + at + 4, static_cast<uInt>(len + 4));
    if (crc != get_u32(bytes, at + 8 + len)) invalid("CRC mismatch in " + type);

    if (type == "IHDR") {
      if (len != 13) invalid("bad IHDR");
      width = static_cast<int>(get_u32(body, 0));
      height = static_cast<int>(get_u32(body, 4));
      const int depth = body[8], colour = body[9];
      if (depth != 8) invalid("only 8-bit samples are supported");
      if (body[12] != 0) invalid("interlaced PNG is not supported");
      switch (colour) {
        case 0: channels = 1; break;
        case 2: channels = 3; break;
        case 4: channels = 2; break;
        case 6: channels = 4; break;
        default: invalid("unsupported colour type " + std::to_string(colour));
      }
      if (width <= 0 || height <= 0 || width > (1 << 14) || height > (1 << 14)) invalid("bad dimensions");
      seen_header = true;
    } else if (type == "IDAT") {
      idat.insert(idat.end(), body.begin(), body.end());
    } else if (type == "IEND") {
      seen_end = true;
    } else if (!(type[0] & 0x20)) {
      invalid("unknown critical chunk " + type);
    }
    at += 12 + len;
  }
  if (!seen_header || idat.empty()) invalid("missing IHDR or IDAT");

  const std::size_t stride = static_cast<std::size_t>(width) * channels;
  uLongf raw_len = static_cast<uLongf>((stride + 1) * height);
  std::vector<std::uint8_t> raw(raw_len);
  if (uncompress(raw.data(), &raw_len, idat.data(), static_cast<uLong>(idat.size())) != Z_OK ||
      raw_len != raw.size())
    invalid("corrupt image data");

  std::vector<std::uint8_t> samples(stride * height);
  for (int y = 0; y < height; ++y) {
    const std::uint8_t filter = raw[y * (stride + 1)];
    const std::uint8_t* in = &raw[y * (stride + 1) + 1];
    std::uint8_t* row = &samples[y * stride];
    const std::uint8_t* up = y > 0 ? &samples[(y - 1) * stride] : nullptr;
    for (std::size_t i = 0; i < stride; ++i) {
      const int a = i >= static_cast<std::size_t>(channels) ? row[i - channels] : 0;
      const int b = up ? up[i] : 0;
      const int c = (up && i >= static_cast<std::size_t>(channels)) ? up[i - channels] : 0;
      int pred = 0;
      switch (filter) {
        case 0: pred = 0; break;
        case 1: pred = a; break;
        case 2: pred = b; break;
        case 3: pred = (a + b) / 2; break;
        case 4: pred = paeth(a, b, c); break;
        default: invalid("bad filter type");
      }
      row[i] = static_cast<std::uint8_t>(in[i] + pred);
    }
  }

  GrayImage image{width, height, {}};
  if (channels == 1) {
    image.pixels = std::move(samples);
    return image;
  }
  image.pixels.resize(static_cast<std::size_t>(width) * height);
  for (std::size_t p = 0; p < image.pixels.size(); ++p) {
    const std::uint8_t* s = &samples[p * channels];
    int luma = channels <= 2 ? s[0] : (299 * s[0] + 587 * s[1] + 114 * s[2]) / 1000;
    if (channels == 2 || channels == 4) {
      // Composite over white.
      const int alpha = s[channels - 1];
      luma = (luma * alpha + 255 * (255 - alpha)) / 255;
    }
    image.pixels[p] = static_cast<std::uint8_t>(luma);
  }
  return image;
}

}  // namespace r2o::png
