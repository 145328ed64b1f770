#pragma once

#include <cstdint>
#include <optional>
#include <span>
#include <vector>

namespace r2o::qr {

enum class EcLevel { L, M, Q, H };

inline constexpr int kMinVersion = 1;
inline constexpr int kMaxVersion = 10;

/// Square grid of modules; true is dark. Coordinates are (x = column, y = row).
class Matrix {
 public:
  Matrix() = default;
  Matrix(int version, EcLevel ec, int mask);

  int version() const noexcept { return version_; }
  int size() const noexcept { return size_; }
  EcLevel ec_level() const noexcept { return ec_; }
  int mask() const noexcept { return mask_; }

  bool at(int x, int y) const { return modules_[index(x, y)] != 0; }
  void set(int x, int y, bool dark) { modules_[index(x, y)] = dark ? 1 : 0; }
  void flip(int x, int y) { modules_[index(x, y)] ^= 1; }

  /// True for modules reserved by finder, separator, timing, alignment,
  /// format, version and dark-module patterns.
  bool is_function(int x, int y) const { return function_[index(x, y)] != 0; }

  friend bool operator==(const Matrix&, const Matrix&) = default;

 private:
  friend class Builder;
  std::size_t index(int x, int y) const { return static_cast<std::size_t>(y) * size_ + x; }

  int version_ = 0;
  int size_ = 0;
  EcLevel ec_ = EcLevel::M;
  int mask_ = 0;
  std::vector<std::uint8_t> modules_;
  std::vector<std::uint8_t> function_;
};

constexpr int symbol_size(int version) noexcept { return 17 + 4 * version; }

/// Maximum byte-mode payload at (version, ec).
int byte_capacity(int version, EcLevel ec);

/// Smallest version in [min_version, kMaxVersion] that fits `length` bytes.
std::optional<int> smallest_version(std::size_t length, EcLevel ec, int min_version = kMinVersion);

/// 15-bit format word (BCH coded and masked) for (ec, mask).
std::uint16_t format_bits(EcLevel ec, int mask);
/// 18-bit version word for version >= 7.
std::uint32_t version_bits(int version);

/// Standard four-rule penalty (runs, 2x2 blocks, finder-like runs, balance).
long penalty_score(const Matrix& m);

/// Byte-mode symbol. With no forced mask, all eight masks are tried and the
/// lowest penalty wins. Throws Error(CapacityExceeded).
Matrix encode_bytes(std::span<const std::uint8_t> data, EcLevel ec, int min_version = kMinVersion,
                    std::optional<int> forced_mask = std::nullopt);

/// Reads a module grid of known version: format info, unmasking, codeword
/// extraction, Reed-Solomon correction and byte-mode parsing.
/// Throws Error(DecodeFailure) when the data cannot be recovered.
std::vector<std::uint8_t> decode_matrix(const Matrix& m);

}  // namespace r2o::qr
