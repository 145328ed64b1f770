#pragma once

#include <optional>
#include <set>
#include <string>
#include <string_view>
#include <vector>

namespace r2o::filter {

/// One image element as seen in a scanned page.
struct ElementDescriptor {
  std::string source_url;
  int width = 0;   // 0 when unknown
  int height = 0;  // 0 when unknown
  std::string media_subtype;
  std::optional<std::string> caption;

  friend bool operator==(const ElementDescriptor&, const ElementDescriptor&) = default;
};

struct FilterConfig {
  std::vector<std::string> path_prefixes{"/fp/photos/"};
  int min_edge = 64;
  int max_edge = 1024;
  bool require_square = true;
  std::set<std::string> excluded_subtypes{"gif"};
  std::optional<std::string> caption_marker = "r2o:1";
};

/// Rules in evaluation order; a rejection names the first rule that failed.
enum class Rule { prefix, subtype, bounds, aspect_ratio, caption };

std::string_view to_string(Rule rule) noexcept;

struct Decision {
  std::optional<Rule> rejected_by;  // empty means Candidate

  bool candidate() const noexcept { return !rejected_by.has_value(); }
  static Decision accept() { return {}; }
  static Decision reject(Rule r) { return {r}; }

  friend bool operator==(const Decision&, const Decision&) = default;
};

/// Throws Error(InvalidArgument) for min_edge > max_edge or no prefixes.
void validate(const FilterConfig& cfg);

Decision is_candidate(const ElementDescriptor& e, const FilterConfig& cfg);

/// Marker first, then the user's caption.
std::string make_caption(const std::optional<std::string>& user_caption, const FilterConfig& cfg);

/// Lower-cased extension of the URL path ("png" for ".../7.PNG?x=1").
std::string subtype_from_url(std::string_view url);

}  // namespace r2o::filter
