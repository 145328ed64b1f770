#pragma once

#include <optional>
#include <string_view>

namespace r2o {

enum class MediaClass { image, text };

constexpr std::string_view to_string(MediaClass c) noexcept { return c == MediaClass::image ? "image" : "text"; }

inline std::optional<MediaClass> parse_media_class(std::string_view s) noexcept {
  if (s == "image") return MediaClass::image;
  if (s == "text") return MediaClass::text;
  return std::nullopt;
}

}  // namespace r2o
