#include "r2o/filter.hpp"

#include <algorithm>
#include <cctype>

#include "r2o/error.hpp"
#include "r2o/url.hpp"

namespace r2o::filter {

std::string_view to_string(Rule rule) noexcept {
  switch (rule) {
    case Rule::prefix: return "prefix";
    case Rule::subtype: return "subtype";
    case Rule::bounds: return "bounds";
    case Rule::aspect_ratio: return "aspect_ratio";
    case Rule::caption: return "caption";
  }
  return "unknown";
}

void validate(const FilterConfig& cfg) {
  if (cfg.path_prefixes.empty()) throw Error(ErrorCode::InvalidArgument, "filter needs at least one path prefix");
  if (cfg.min_edge < 0 || cfg.min_edge > cfg.max_edge)
    throw Error(ErrorCode::InvalidArgument, "filter requires 0 <= min_edge <= max_edge");
}

Decision is_candidate(const ElementDescriptor& e, const FilterConfig& cfg) {
  const std::string path = url_path(e.source_url);
  if (std::none_of(cfg.path_prefixes.begin(), cfg.path_prefixes.end(),
                   [&](const std::string& p) { return path.starts_with(p); }))
    return Decision::reject(Rule::prefix);

  std::string subtype = e.media_subtype;
  std::transform(subtype.begin(), subtype.end(), subtype.begin(), [](unsigned char c) { return std::tolower(c); });
  if (cfg.excluded_subtypes.contains(subtype)) return Decision::reject(Rule::subtype);

  const bool dims_known = e.width > 0 && e.height > 0;
  if (dims_known) {
    auto in_bounds = [&](int edge) { return edge >= cfg.min_edge && edge <= cfg.max_edge; };
    if (!in_bounds(e.width) || !in_bounds(e.height)) return Decision::reject(Rule::bounds);
    if (cfg.require_square && e.width != e.height) return Decision::reject(Rule::aspect_ratio);
  }

  if (cfg.caption_marker && e.caption && e.caption->find(*cfg.caption_marker) == std::string::npos)
    return Decision::reject(Rule::caption);
  return Decision::accept();
}

std::string make_caption(const std::optional<std::string>& user_caption, const FilterConfig& cfg) {
  if (!cfg.caption_marker) return user_caption.value_or("");
  if (!user_caption || user_caption->empty()) return *cfg.caption_marker;
  return *cfg.caption_marker + " " + *user_caption;
}

std::string subtype_from_url(std::string_view url) {
  const std::string path = url_path(url);
  auto slash = path.rfind('/');
  auto dot = path.rfind('.');
  if (dot == std::string::npos || (slash != std::string::npos && dot < slash)) return {};
  std::string ext = path.substr(dot + 1);
  std::transform(ext.begin(), ext.end(), ext.begin(), [](unsigned char c) { return std::tolower(c); });
  return ext;
}

}  // namespace r2o::filter
