#pragma once

#include <cstdint>
#include <optional>
#include <string>
#include <string_view>

namespace r2o {

/// Absolute URL naming content; the payload of every indirection schema.
using ContentLocator = std::string;

/// Minimal split of an absolute http(s) URL. Fields reference no escaping
/// rules: the path keeps its query string, the fragment excludes '#'.
struct UrlParts {
  std::string scheme;  // lower-case, without "://"
  std::string host;
  std::uint16_t port = 0;  // 0 when absent
  std::string path;        // always begins with '/', includes query
  std::optional<std::string> fragment;

  /// scheme://host[:port]
  std::string origin() const;
};

std::optional<UrlParts> parse_url(std::string_view url);

/// True for non-empty ASCII strings starting with http:// or https:// that
/// carry a host and no whitespace or control characters.
bool is_valid_locator(std::string_view url) noexcept;

/// Path component of an absolute URL, or the input itself when it is already
/// a path ("/fp/photos/1.png"). Query and fragment are dropped.
std::string url_path(std::string_view url);

/// Resolves `ref` against `base`: absolute refs pass through, "/x" takes the
/// base origin; anything else is appended to the base directory.
std::string resolve_url(std::string_view base, std::string_view ref);

}  // namespace r2o
