#pragma once

#include <cstdint>
#include <optional>
#include <span>
#include <vector>

namespace r2o::rs {

/// GF(2^8) arithmetic over the QR field polynomial x^8 + x^4 + x^3 + x^2 + 1.
std::uint8_t gf_mul(std::uint8_t a, std::uint8_t b) noexcept;
std::uint8_t gf_div(std::uint8_t a, std::uint8_t b);
std::uint8_t gf_pow2(int exponent) noexcept;  // alpha^exponent, alpha = 2

/// Error-correction codewords for `data` with a generator whose roots are
/// alpha^0 .. alpha^(ec_len-1).
std::vector<std::uint8_t> encode_block(std::span<const std::uint8_t> data, int ec_len);

/// Corrects `codeword` (data followed by ec_len check bytes) in place.
/// Returns the number of corrected symbols, or nullopt when the errors
/// exceed the correction capacity of floor(ec_len / 2).
std::optional<int> correct_block(std::span<std::uint8_t> codeword, int ec_len);

}  // namespace r2o::rs
