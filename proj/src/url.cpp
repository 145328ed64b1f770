#include "r2o/url.hpp"

#include <algorithm>
#include <cctype>

namespace r2o {

std::string UrlParts::origin() const {
  std::string out = scheme + "://" + host;
  if (port != 0) out += ":" + std::to_string(port);
  return out;
}

std::optional<UrlParts> parse_url(std::string_view url) {
  auto sep = url.find("://");
  if (sep == std::string_view::npos || sep == 0) return std::nullopt;
  UrlParts parts;
  parts.scheme.assign(url.substr(0, sep));
  for (auto& c : parts.scheme) c = static_cast<char>(std::tolower(static_cast<unsigned char>(c)));
  if (!std::all_of(parts.scheme.begin(), parts.scheme.end(),
                   [](char c) { return std::isalnum(static_cast<unsigned char>(c)) || c == '+' || c == '-' || c == '.'; }))
    return std::nullopt;

  std::string_view rest = url.substr(sep + 3);
  if (auto hash = rest.find('#'); hash != std::string_view::npos) {
    parts.fragment = std::string(rest.substr(hash + 1));
    rest = rest.substr(0, hash);
  }
  auto slash = rest.find_first_of("/?");
  std::string_view authority = rest.substr(0, slash);
  if (slash == std::string_view::npos) {
    parts.path = "/";
  } else {
    parts.path.assign(rest.substr(slash));
    if (parts.path.front() == '?') parts.path.insert(parts.path.begin(), '/');
  }
  if (auto at = authority.rfind('@'); at != std::string_view::npos) authority = authority.substr(at + 1);
  if (authority.empty()) return std::nullopt;

  auto colon = authority.rfind(':');
  if (colon != std::string_view::npos && authority.find(']') == std::string_view::npos) {
    auto port_text = authority.substr(colon + 1);
    if (port_text.empty() || port_text.size() > 5 ||
        !std::all_of(port_text.begin(), port_text.end(), [](char c) { return c >= '0' && c <= '9'; }))
      return std::nullopt;
    unsigned long port = std::stoul(std::string(port_text));
    if (port == 0 || port > 65535) return std::nullopt;
    parts.port = static_cast<std::uint16_t>(port);
    authority = authority.substr(0, colon);
  }
  if (authority.empty()) return std::nullopt;
  parts.host.assign(authority);
  return parts;
}

bool is_valid_locator(std::string_view url) noexcept {
  if (url.empty()) return false;
  for (char c : url) {
    auto u = static_cast<unsigned char>(c);
    if (u >= 0x80 || u <= 0x20 || u == 0x7f) return false;
  }
  if (!(url.starts_with("http://") || url.starts_with("https://"))) return false;
  try {
    return parse_url(url).has_value();
  } catch (...) {
    return false;
  }
}

std::string url_path(std::string_view url) {
  std::string path;
  if (url.find("://") != std::string_view::npos) {
    auto parts = parse_url(url);
    if (!parts) return {};
    path = parts->path;
  } else {
    path.assign(url.substr(0, url.find('#')));
  }
  if (auto q = path.find('?'); q != std::string::npos) path.resize(q);
  return path;
}

std::string resolve_url(std::string_view base, std::string_view ref) {
  if (ref.find("://") != std::string_view::npos) return std::string(ref);
  auto parts = parse_url(base);
  if (!parts) return std::string(ref);
  if (ref.starts_with("/")) return parts->origin() + std::string(ref);
  std::string dir = parts->path.substr(0, parts->path.rfind('/') + 1);
  return parts->origin() + dir + std::string(ref);
}

}  // namespace r2o
