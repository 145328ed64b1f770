#include "r2o/html.hpp"

#include <cstdlib>

namespace r2o::html {

std::string escape(std::string_view text) {
  std::string out;
  out.reserve(text.size());
  for (char c : text) {
    switch (c) {
      case '&': out += "&amp;"; break;
      case '<': out += "&lt;"; break;
      case '>': out += "&gt;"; break;
      case '"': out += "&quot;"; break;
      case '\'': out += "&#39;"; break;
      default: out += c;
    }
  }
  return out;
}

std::string unescape(std::string_view text) {
  std::string out;
  out.reserve(text.size());
  for (std::size_t i = 0; i < text.size(); ++i) {
    if (text[i] != '&') {
      out += text[i];
      continue;
    }
    auto semi = text.find(';', i);
    if (semi == std::string_view::npos || semi - i > 8) {
      out += '&';
      continue;
    }
    std::string_view entity = text.substr(i + 1, semi - i - 1);
    char decoded = 0;
    if (entity == "amp") decoded = '&';
    else if (entity == "lt") decoded = '<';
    else if (entity == "gt") decoded = '>';
    else if (entity == "quot") decoded = '"';
    else if (entity == "apos") decoded = '\'';
    else if (entity.size() > 1 && entity[0] == '#') {
      const bool hex = entity[1] == 'x' || entity[1] == 'X';
      std::string digits(entity.substr(hex ? 2 : 1));
      char* end = nullptr;
      long code = std::strtol(digits.c_str(), &end, hex ? 16 : 10);
      if (!digits.empty() && *end == '\0' && code > 0 && code < 128) decoded = static_cast<char>(code);
    }
    if (decoded == 0) {
      out += '&';
      continue;
    }
    out += decoded;
    i = semi;
  }
  return out;
}

}  // namespace r2o::html
