#pragma once

#include <string>
#include <string_view>

namespace r2o::html {

/// Escapes & < > " ' for text and double-quoted attribute contexts.
std::string escape(std::string_view text);

/// Decodes the five named entities above plus decimal/hex character
/// references in the ASCII range; anything else passes through.
std::string unescape(std::string_view text);

}  // namespace r2o::html
