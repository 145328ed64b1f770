#pragma once

#include <cstddef>
#include <optional>
#include <span>
#include <string>
#include <string_view>
#include <vector>

#include "r2o/filter.hpp"
#include "r2o/store.hpp"

namespace r2o::rewriter {

/// Byte range in a document.
struct Span {
  std::size_t offset = 0;
  std::size_t length = 0;

  std::size_t end() const noexcept { return offset + length; }
  friend bool operator==(const Span&, const Span&) = default;
};

struct ScannedElement {
  filter::ElementDescriptor descriptor;
  Span src_span;  // raw bytes of the src attribute value
};

struct ScanResult {
  std::vector<ScannedElement> elements;  // document order
};

/// Extracts every img element with a non-empty src. A caption is attached
/// when the next tag after the img is a <p> whose class includes "caption".
ScanResult scan_html(std::string_view document);

struct Replacement {
  Span span;
  std::string new_src;
  /// When set, the bytes currently under `span` must equal this.
  std::optional<std::string> expected;
};

/// Substitutes each span; every other byte is copied unchanged. Throws
/// Error(SpanMismatch) for unsorted, overlapping, out-of-range or stale spans.
std::string rewrite_html(std::string_view document, std::span<const Replacement> replacements);

/// "data:<media type>;base64,..." for inline replacement.
std::string data_url(const store::ContentItem& item);

}  // namespace r2o::rewriter
