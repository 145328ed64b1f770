#include "r2o/rewriter.hpp"

#include <cctype>
#include <cstdlib>

#include "r2o/error.hpp"
#include "r2o/html.hpp"

namespace r2o::rewriter {
namespace {

bool is_space(char c) { return std::isspace(static_cast<unsigned char>(c)) != 0; }

bool iequals(std::string_view a, std::string_view b) {
  if (a.size() != b.size()) return false;
  for (std::size_t i = 0; i < a.size(); ++i)
    if (std::tolower(static_cast<unsigned char>(a[i])) != std::tolower(static_cast<unsigned char>(b[i]))) return false;
  return true;
}

struct Attribute {
  std::string name;  // lower-cased
  Span value;
};

struct Tag {
  std::string name;  // lower-cased
  std::vector<Attribute> attributes;
  std::size_t end = 0;  // one past '>'
  const Attribute* find(std::string_view n) const {
    for (const auto& a : attributes)
      if (a.name == n) return &a;
    return nullptr;
  }
};

// Parses the tag opening at doc[at] == '<'. Returns nullopt for anything that
// is not an element start tag.
std::optional<Tag> parse_tag(std::string_view doc, std::size_t at) {
  std::size_t i = at + 1;
  if (i >= doc.size() || !std::isalpha(static_cast<unsigned char>(doc[i]))) return std::nullopt;
  Tag tag;
  while (i < doc.size() && (std::isalnum(static_cast<unsigned char>(doc[i])) || doc[i] == '-'))
    tag.name += static_cast<char>(std::tolower(static_cast<unsigned char>(doc[i++])));

  while (i < doc.size()) {
    while (i < doc.size() && (is_space(doc[i]) || doc[i] == '/')) ++i;
    if (i >= doc.size()) return std::nullopt;
    if (doc[i] == '>') {
      tag.end = i + 1;
      return tag;
    }
    Attribute attr;
    while (i < doc.size() && !is_space(doc[i]) && doc[i] != '=' && doc[i] != '>' && doc[i] != '/')
      attr.name += static_cast<char>(std::tolower(static_cast<unsigned char>(doc[i++])));
    while (i < doc.size() && is_space(doc[i])) ++i;
    if (i < doc.size() && doc[i] == '=') {
      ++i;
      while (i < doc.size() && is_space(doc[i])) ++i;
      if (i >= doc.size()) return std::nullopt;
      if (doc[i] == '"' || doc[i] == '\'') {
        const char quote = doc[i++];
        auto close = doc.find(quote, i);
        if (close == std::string_view::npos) return std::nullopt;
        attr.value = {i, close - i};
        i = close + 1;
      } else {
        std::size_t start = i;
        while (i < doc.size() && !is_space(doc[i]) && doc[i] != '>') ++i;
        attr.value = {start, i - start};
      }
    } else {
      attr.value = {i, 0};
    }
    if (attr.name.empty()) {
      ++i;
      continue;
    }
    tag.attributes.push_back(std::move(attr));
  }
  return std::nullopt;
}

int parse_dimension(std::string_view text) {
  long value = 0;
  std::size_t i = 0;
  while (i < text.size() && is_space(text[i])) ++i;
  std::size_t start = i;
  while (i < text.size() && std::isdigit(static_cast<unsigned char>(text[i])) && value < 1'000'000)
    value = value * 10 + (text[i++] - '0');
  return i == start ? 0 : static_cast<int>(value);
}

bool has_class(std::string_view classes, std::string_view wanted) {
  std::size_t i = 0;
  while (i < classes.size()) {
    while (i < classes.size() && is_space(classes[i])) ++i;
    std::size_t start = i;
    while (i < classes.size() && !is_space(classes[i])) ++i;
    if (classes.substr(start, i - start) == wanted) return true;
  }
  return false;
}

std::optional<std::string> caption_after(std::string_view doc, std::size_t from) {
  while (from < doc.size() && is_space(doc[from])) ++from;
  if (from >= doc.size() || doc[from] != '<') return std::nullopt;
  auto tag = parse_tag(doc, from);
  if (!tag || tag->name != "p") return std::nullopt;
  const Attribute* cls = tag->find("class");
  if (!cls || !has_class(doc.substr(cls->value.offset, cls->value.length), "caption")) return std::nullopt;
  std::size_t close = tag->end;
  while (close < doc.size()) {
    close = doc.find("</", close);
    if (close == std::string_view::npos) return std::nullopt;
    if (close + 3 < doc.size() && iequals(doc.substr(close + 2, 1), "p") && doc[close + 3] == '>') break;
    close += 2;
  }
  if (close >= doc.size()) return std::nullopt;
  return html::unescape(doc.substr(tag->end, close - tag->end));
}

}  // namespace

ScanResult scan_html(std::string_view doc) {
  ScanResult result;
  std::size_t i = 0;
  while ((i = doc.find('<', i)) != std::string_view::npos) {
    if (doc.substr(i, 4) == "<!--") {
      auto close = doc.find("-->", i + 4);
      if (close == std::string_view::npos) break;
      i = close + 3;
      continue;
    }
    auto tag = parse_tag(doc, i);
    if (!tag) {
      ++i;
      continue;
    }
    if (tag->name == "script" || tag->name == "style") {
      // Skip raw text content.
      auto close = doc.find("</", tag->end);
      while (close != std::string_view::npos && !iequals(doc.substr(close + 2, tag->name.size()), tag->name))
        close = doc.find("</", close + 2);
      i = close == std::string_view::npos ? doc.size() : close;
      continue;
    }
    if (tag->name == "img") {
      const Attribute* src = tag->find("src");
      if (src && src->value.length > 0) {
        ScannedElement el;
        el.src_span = src->value;
        el.descriptor.source_url = std::string(doc.substr(src->value.offset, src->value.length));
        if (const auto* w = tag->find("width")) el.descriptor.width = parse_dimension(doc.substr(w->value.offset, w->value.length));
        if (const auto* h = tag->find("height")) el.descriptor.height = parse_dimension(doc.substr(h->value.offset, h->value.length));
        el.descriptor.media_subtype = filter::subtype_from_url(html::unescape(el.descriptor.source_url));
        el.descriptor.caption = caption_after(doc, tag->end);
        result.elements.push_back(std::move(el));
      }
    }
    i = tag->end;
  }
  return result;
}

std::string rewrite_html(std::string_view doc, std::span<const Replacement> replacements) {
  std::string out;
  out.reserve(doc.size());
  std::size_t cursor = 0;
  for (const auto& r : replacements) {
    if (r.span.offset < cursor || r.span.end() > doc.size())
      throw Error(ErrorCode::SpanMismatch, "replacement spans must be sorted, disjoint and inside the document");
    if (r.expected && doc.substr(r.span.offset, r.span.length) != *r.expected)
      throw Error(ErrorCode::SpanMismatch, "span content changed at offset " + std::to_string(r.span.offset));
    out.append(doc.substr(cursor, r.span.offset - cursor));
    out.append(r.new_src);
    cursor = r.span.end();
  }
  out.append(doc.substr(cursor));
  return out;
}

std::string data_url(const store::ContentItem& item) {
  static constexpr char kAlphabet[] = "ABCDEFGHIJKLMNOPQRSTUVWXYZabcdefghijklmnopqrstuvwxyz0123456789+/";
  std::string out = "data:" + item.media_type + ";base64,";
  const auto& b = item.bytes;
  std::size_t i = 0;
  for (; i + 2 < b.size(); i += 3) {
    const unsigned v = b[i] << 16 | b[i + 1] << 8 | b[i + 2];
    out += kAlphabet[v >> 18];
    out += kAlphabet[(v >> 12) & 63];
    out += kAlphabet[(v >> 6) & 63];
    out += kAlphabet[v & 63];
  }
  if (i < b.size()) {
    const unsigned v = b[i] << 16 | (i + 1 < b.size() ? b[i + 1] << 8 : 0);
    out += kAlphabet[v >> 18];
    out += kAlphabet[(v >> 12) & 63];
    out += i + 1 < b.size() ? kAlphabet[(v >> 6) & 63] : '=';
    out += '=';
  }
  return out;
}

}  // namespace r2o::rewriter
