#pragma once

#include <cstdint>
#include <optional>
#include <span>
#include <string>
#include <utility>
#include <vector>

#include "r2o/qr.hpp"
#include "r2o/types.hpp"
#include "r2o/url.hpp"

namespace r2o::codec {

/// What an indirection schema carries: the off-site locator, plus optional
/// key/value pairs that travel with it but have no defined meaning here.
struct IndirectionPayload {
  ContentLocator locator;
  MediaClass media_class = MediaClass::image;
  std::vector<std::pair<std::string, std::string>> extra;

  friend bool operator==(const IndirectionPayload&, const IndirectionPayload&) = default;
};

/// Pixel rectangle occupied by the symbol itself, quiet zone excluded.
struct SymbolBounds {
  int x = 0;
  int y = 0;
  int size = 0;

  friend bool operator==(const SymbolBounds&, const SymbolBounds&) = default;
};

/// A QR symbol rendered as 8-bit grayscale. Freshly encoded images are
/// square and bimodal (0 dark, 255 light).
struct PseudoImage {
  int width = 0;
  int height = 0;
  std::vector<std::uint8_t> pixels;
  int quiet_zone = 4;  // modules of light margin on the narrowest side
  int module_px = 1;
  SymbolBounds symbol;

  std::uint8_t at(int x, int y) const { return pixels[static_cast<std::size_t>(y) * width + x]; }
};

struct QrConfig {
  qr::EcLevel ec_level = qr::EcLevel::M;
  int min_version = 1;
  int module_scale = 1;  // used only when target_size is unset
  std::optional<int> target_size = 512;
};

inline constexpr int kQuietZoneModules = 4;

/// Byte string placed inside the symbol.
std::string serialize_payload(const IndirectionPayload& payload);

/// Throws Error(InvalidPayload) or Error(CapacityExceeded).
PseudoImage encode_qr(const IndirectionPayload& payload, const QrConfig& config = {});

/// Throws Error(NotAQrSymbol) when no symbol is found, Error(DecodeFailure)
/// past error-correction capacity, Error(InvalidPayload) when the symbol
/// holds something other than a locator.
IndirectionPayload decode_qr(const PseudoImage& image);

/// Draws a module grid with the quiet zone; see QrConfig for sizing.
PseudoImage render(const qr::Matrix& matrix, const QrConfig& config);

/// Locates an axis-aligned symbol and samples its module grid.
qr::Matrix detect_symbol(const PseudoImage& image);

/// Centres the image on a white field of exactly target_width x target_height.
PseudoImage pad_with_border(const PseudoImage& image, int target_width, int target_height);

std::vector<std::uint8_t> to_png(const PseudoImage& image);
/// Symbol bounds of the result are unknown and left zeroed.
PseudoImage from_png(std::span<const std::uint8_t> bytes);

/// "https://host/x" -> "https://host/x#r2o". Throws InvalidPayload or
/// FragmentConflict.
std::string encode_text_indirection(const ContentLocator& locator);

/// Inverse of encode_text_indirection; nullopt for anything that is not a
/// locator tagged with the #r2o fragment.
std::optional<ContentLocator> decode_text_indirection(std::string_view text);

}  // namespace r2o::codec
