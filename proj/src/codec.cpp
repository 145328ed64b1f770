#include "r2o/codec.hpp"

#include <algorithm>
#include <array>
#include <cmath>

#include "r2o/error.hpp"
#include "r2o/png.hpp"

namespace r2o::codec {
namespace {

constexpr std::string_view kTextSuffix = "#r2o";
constexpr std::size_t kMaxLocatorBytes = 1024;
constexpr double kMinFunctionMatch = 0.85;

void validate(const IndirectionPayload& payload) {
  if (payload.media_class != MediaClass::image)
    throw Error(ErrorCode::InvalidPayload, "QR schemata carry image locators; text uses the #r2o fragment");
  if (!is_valid_locator(payload.locator))
    throw Error(ErrorCode::InvalidPayload, "locator must be an ASCII http(s) URL");
  for (const auto& [key, value] : payload.extra) {
    if (key.empty() || key.find_first_of("=\n") != std::string::npos || value.find('\n') != std::string::npos)
      throw Error(ErrorCode::InvalidPayload, "extra keys must be non-empty without '=' or newline");
  }
}

// Fraction of finder, separator and timing modules that read correctly when
// the bounding box is divided into `dim` modules per side.
double function_match(const PseudoImage& img, int left, int top, double mw, double mh, int dim) {
  auto dark = [&](int x, int y) {
    int px = left + static_cast<int>((x + 0.5) * mw);
    int py = top + static_cast<int>((y + 0.5) * mh);
    if (px < 0 || py < 0 || px >= img.width || py >= img.height) return false;
    return img.at(px, py) < 128;
  };
  int hits = 0, total = 0;
  auto expect = [&](int x, int y, bool want) {
    ++total;
    hits += dark(x, y) == want;
  };
  const std::array<std::pair<int, int>, 3> corners{{{0, 0}, {dim - 7, 0}, {0, dim - 7}}};
  for (auto [cx, cy] : corners)
    for (int dy = 0; dy < 7; ++dy)
      for (int dx = 0; dx < 7; ++dx) {
        int ring = std::max(std::abs(dx - 3), std::abs(dy - 3));
        expect(cx + dx, cy + dy, ring != 2);
      }
  for (int i = 0; i < 8; ++i) {
    expect(i, 7, false);
    expect(7, i, false);
    expect(dim - 1 - i, 7, false);
    expect(dim - 8, i, false);
    expect(i, dim - 8, false);
    expect(7, dim - 1 - i, false);
  }
  for (int i = 8; i < dim - 8; ++i) {
    expect(i, 6, i % 2 == 0);
    expect(6, i, i % 2 == 0);
  }
  return static_cast<double>(hits) / total;
}

}  // namespace

std::string serialize_payload(const IndirectionPayload& payload) {
  std::string out = payload.locator;
  for (const auto& [key, value] : payload.extra) out += "\n" + key + "=" + value;
  return out;
}

PseudoImage render(const qr::Matrix& matrix, const QrConfig& config) {
  const int dim = matrix.size();
  const int span = dim + 2 * kQuietZoneModules;
  int scale = 0, edge = 0, offset = 0;
  if (config.target_size) {
    scale = *config.target_size / span;
    if (scale < 1)
      throw Error(ErrorCode::TargetTooSmall,
                  "target size " + std::to_string(*config.target_size) + " cannot hold " + std::to_string(span) + " modules");
    edge = *config.target_size;
    offset = (edge - dim * scale) / 2;
  } else {
    if (config.module_scale < 1) throw Error(ErrorCode::InvalidArgument, "module_scale must be >= 1");
    scale = config.module_scale;
    edge = span * scale;
    offset = kQuietZoneModules * scale;
  }

  PseudoImage img;
  img.width = img.height = edge;
  img.pixels.assign(static_cast<std::size_t>(edge) * edge, 255);
  img.module_px = scale;
  img.quiet_zone = offset / scale;
  img.symbol = {offset, offset, dim * scale};
  for (int y = 0; y < dim; ++y)
    for (int x = 0; x < dim; ++x) {
      if (!matrix.at(x, y)) continue;
      for (int py = 0; py < scale; ++py) {
        auto row = img.pixels.begin() + static_cast<std::ptrdiff_t>(offset + y * scale + py) * edge + offset + x * scale;
        std::fill(row, row + scale, std::uint8_t{0});
      }
    }
  return img;
}

PseudoImage encode_qr(const IndirectionPayload& payload, const QrConfig& config) {
  validate(payload);
  if (config.min_version < qr::kMinVersion || config.min_version > qr::kMaxVersion)
    throw Error(ErrorCode::InvalidArgument, "min_version must be within 1..10");
  const std::string bytes = serialize_payload(payload);
  if (payload.locator.size() > kMaxLocatorBytes)
    throw Error(ErrorCode::CapacityExceeded, "locator longer than " + std::to_string(kMaxLocatorBytes) + " bytes");
  auto data = std::span(reinterpret_cast<const std::uint8_t*>(bytes.data()), bytes.size());
  return render(qr::encode_bytes(data, config.ec_level, config.min_version), config);
}

qr::Matrix detect_symbol(const PseudoImage& img) {
  if (img.width <= 0 || img.height <= 0 || img.pixels.size() != static_cast<std::size_t>(img.width) * img.height)
    throw Error(ErrorCode::NotAQrSymbol, "empty or inconsistent image");

  int left = img.width, right = -1, top = img.height, bottom = -1;
  for (int y = 0; y < img.height; ++y) {
    const std::uint8_t* row = &img.pixels[static_cast<std::size_t>(y) * img.width];
    int first = -1, last = -1;
    for (int x = 0; x < img.width; ++x)
      if (row[x] < 128) {
        first = x;
        break;
      }
    if (first < 0) continue;
    for (int x = img.width - 1; x >= first; --x)
      if (row[x] < 128) {
        last = x;
        break;
      }
    left = std::min(left, first);
    right = std::max(right, last);
    top = std::min(top, y);
    bottom = y;
  }
  if (right < 0) throw Error(ErrorCode::NotAQrSymbol, "no dark modules");

  const int w = right - left + 1, h = bottom - top + 1;
  if (std::abs(w - h) * 10 > std::max(w, h)) throw Error(ErrorCode::NotAQrSymbol, "dark region is not square");

  int best_version = 0;
  double best_score = 0;
  for (int v = qr::kMinVersion; v <= qr::kMaxVersion; ++v) {
    const int dim = qr::symbol_size(v);
    const double mw = static_cast<double>(w) / dim, mh = static_cast<double>(h) / dim;
    if (mw < 1.0 || mh < 1.0) break;
    const double score = function_match(img, left, top, mw, mh, dim);
    if (score > best_score) {
      best_score = score;
      best_version = v;
    }
  }
  if (best_version == 0 || best_score < kMinFunctionMatch)
    throw Error(ErrorCode::NotAQrSymbol, "finder and timing patterns not found");

  const int dim = qr::symbol_size(best_version);
  const double mw = static_cast<double>(w) / dim, mh = static_cast<double>(h) / dim;
  qr::Matrix grid(best_version, qr::EcLevel::M, 0);
  for (int y = 0; y < dim; ++y)
    for (int x = 0; x < dim; ++x) {
      const int px = left + static_cast<int>((x + 0.5) * mw);
      const int py = top + static_cast<int>((y + 0.5) * mh);
      grid.set(x, y, img.at(px, py) < 128);
    }
  return grid;
}

IndirectionPayload decode_qr(const PseudoImage& image) {
  const auto bytes = qr::decode_matrix(detect_symbol(image));
  std::string text(bytes.begin(), bytes.end());

  IndirectionPayload payload;
  auto nl = text.find('\n');
  payload.locator = text.substr(0, nl);
  while (nl != std::string::npos) {
    auto next = text.find('\n', nl + 1);
    std::string line = text.substr(nl + 1, next == std::string::npos ? std::string::npos : next - nl - 1);
    auto eq = line.find('=');
    if (eq == std::string::npos || eq == 0) throw Error(ErrorCode::InvalidPayload, "malformed metadata line");
    payload.extra.emplace_back(line.substr(0, eq), line.substr(eq + 1));
    nl = next;
  }
  if (!is_valid_locator(payload.locator)) throw Error(ErrorCode::InvalidPayload, "symbol does not carry a locator");
  return payload;
}

PseudoImage pad_with_border(const PseudoImage& image, int target_width, int target_height) {
  if (target_width < image.width || target_height < image.height)
    throw Error(ErrorCode::TargetTooSmall, std::to_string(image.width) + "x" + std::to_string(image.height) +
                                               " does not fit in " + std::to_string(target_width) + "x" +
                                               std::to_string(target_height));
  if (target_width == image.width && target_height == image.height) return image;

  const int dx = (target_width - image.width) / 2, dy = (target_height - image.height) / 2;
  PseudoImage out = image;
  out.width = target_width;
  out.height = target_height;
  out.pixels.assign(static_cast<std::size_t>(target_width) * target_height, 255);
  for (int y = 0; y < image.height; ++y) {
    auto src = image.pixels.begin() + static_cast<std::ptrdiff_t>(y) * image.width;
    std::copy(src, src + image.width, out.pixels.begin() + static_cast<std::ptrdiff_t>(y + dy) * target_width + dx);
  }
  out.symbol.x += dx;
  out.symbol.y += dy;
  return out;
}

std::vector<std::uint8_t> to_png(const PseudoImage& image) {
  return png::encode(png::GrayImage{image.width, image.height, image.pixels});
}

PseudoImage from_png(std::span<const std::uint8_t> bytes) {
  auto gray = png::decode(bytes);
  PseudoImage img;
  img.width = gray.width;
  img.height = gray.height;
  img.pixels = std::move(gray.pixels);
  img.quiet_zone = 0;
  img.module_px = 0;
  return img;
}

std::string encode_text_indirection(const ContentLocator& locator) {
  if (locator.empty()) throw Error(ErrorCode::InvalidPayload, "empty locator");
  if (locator.find('#') != std::string::npos)
    throw Error(ErrorCode::FragmentConflict, "locator already carries a fragment identifier");
  if (!is_valid_locator(locator)) throw Error(ErrorCode::InvalidPayload, "locator must be an ASCII http(s) URL");
  return locator + std::string(kTextSuffix);
}

std::optional<ContentLocator> decode_text_indirection(std::string_view text) {
  if (!text.ends_with(kTextSuffix)) return std::nullopt;
  std::string_view base = text.substr(0, text.size() - kTextSuffix.size());
  if (base.find('#') != std::string_view::npos || !is_valid_locator(base)) return std::nullopt;
  return ContentLocator(base);
}

}  // namespace r2o::codec
