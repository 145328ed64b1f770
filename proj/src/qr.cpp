#include "r2o/qr.hpp"

#include <algorithm>
#include <array>
#include <cstdlib>
#include <limits>

#include "r2o/error.hpp"
#include "r2o/reed_solomon.hpp"

namespace r2o::qr {
namespace {

// Indexed [ec][version], versions 1..10.
constexpr std::array<std::array<int, 11>, 4> kEcPerBlock{{
    {-1, 7, 10, 15, 20, 26, 18, 20, 24, 30, 18},   // L
    {-1, 10, 16, 26, 18, 24, 16, 18, 22, 22, 26},  // M
    {-1, 13, 22, 18, 26, 18, 24, 18, 22, 20, 24},  // Q
    {-1, 17, 28, 22, 16, 22, 28, 26, 26, 24, 28},  // H
}};
constexpr std::array<std::array<int, 11>, 4> kBlocks{{
    {-1, 1, 1, 1, 1, 1, 2, 2, 2, 2, 4},
    {-1, 1, 1, 1, 2, 2, 4, 4, 4, 5, 5},
    {-1, 1, 1, 2, 2, 4, 4, 6, 6, 8, 8},
    {-1, 1, 1, 2, 4, 4, 4, 5, 6, 8, 8},
}};

int ec_index(EcLevel ec) { return static_cast<int>(ec); }

int format_ec_bits(EcLevel ec) {
  switch (ec) {
    case EcLevel::L: return 1;
    case EcLevel::M: return 0;
    case EcLevel::Q: return 3;
    case EcLevel::H: return 2;
  }
  return 0;
}

std::vector<int> alignment_centers(int version) {
  if (version == 1) return {};
  const int count = version / 7 + 2;
  const int size = symbol_size(version);
  const int step = (version == 32) ? 26 : (version * 4 + count * 2 + 1) / (count * 2 - 2) * 2;
  std::vector<int> result{6};
  for (int i = 0, pos = size - 7; i < count - 1; ++i, pos -= step) result.insert(result.begin() + 1, pos);
  return result;
}

int raw_data_modules(int version) {
  int result = (16 * version + 128) * version + 64;
  if (version >= 2) {
    int align = version / 7 + 2;
    result -= (25 * align - 10) * align - 55;
    if (version >= 7) result -= 36;
  }
  return result;
}

int raw_codewords(int version) { return raw_data_modules(version) / 8; }

int data_codewords(int version, EcLevel ec) {
  return raw_codewords(version) - kEcPerBlock[ec_index(ec)][version] * kBlocks[ec_index(ec)][version];
}

bool mask_bit(int mask, int x, int y) {
  switch (mask) {
    case 0: return (x + y) % 2 == 0;
    case 1: return y % 2 == 0;
    case 2: return x % 3 == 0;
    case 3: return (x + y) % 3 == 0;
    case 4: return (x / 3 + y / 2) % 2 == 0;
    case 5: return x * y % 2 + x * y % 3 == 0;
    case 6: return (x * y % 2 + x * y % 3) % 2 == 0;
    case 7: return ((x + y) % 2 + x * y % 3) % 2 == 0;
  }
  return false;
}

// Visits the data-region modules in codeword placement order.
template <typename Visit>
void for_each_data_module(const Matrix& m, Visit&& visit) {
  const int size = m.size();
  for (int right = size - 1; right >= 1; right -= 2) {
    if (right == 6) right = 5;
    const bool upward = ((right + 1) & 2) == 0;
    for (int vert = 0; vert < size; ++vert) {
      const int y = upward ? size - 1 - vert : vert;
      for (int j = 0; j < 2; ++j) {
        const int x = right - j;
        if (!m.is_function(x, y)) visit(x, y);
      }
    }
  }
}

void apply_mask(Matrix& m, int mask) {
  for (int y = 0; y < m.size(); ++y)
    for (int x = 0; x < m.size(); ++x)
      if (!m.is_function(x, y) && mask_bit(mask, x, y)) m.flip(x, y);
}

}  // namespace

// Draws function patterns; kept as a class so it can reach Matrix internals.
class Builder {
 public:
  static void draw_function_patterns(Matrix& m) {
    const int size = m.size_;
    auto mark = [&](int x, int y, bool dark) {
      m.set(x, y, dark);
      m.function_[m.index(x, y)] = 1;
    };
    for (int i = 0; i < size; ++i) {
      mark(6, i, i % 2 == 0);
      mark(i, 6, i % 2 == 0);
    }
    auto finder = [&](int cx, int cy) {
      for (int dy = -4; dy <= 4; ++dy)
        for (int dx = -4; dx <= 4; ++dx) {
          int x = cx + dx, y = cy + dy;
          if (x < 0 || y < 0 || x >= size || y >= size) continue;
          int dist = std::max(std::abs(dx), std::abs(dy));
          mark(x, y, dist != 2 && dist != 4);
        }
    };
    finder(3, 3);
    finder(size - 4, 3);
    finder(3, size - 4);

    auto centers = alignment_centers(m.version_);
    const int n = static_cast<int>(centers.size());
    for (int i = 0; i < n; ++i)
      for (int j = 0; j < n; ++j) {
        if ((i == 0 && j == 0) || (i == 0 && j == n - 1) || (i == n - 1 && j == 0)) continue;
        for (int dy = -2; dy <= 2; ++dy)
          for (int dx = -2; dx <= 2; ++dx)
            mark(centers[i] + dx, centers[j] + dy, std::max(std::abs(dx), std::abs(dy)) != 1);
      }

    draw_format(m, 0, true);
    if (m.version_ >= 7) {
      std::uint32_t bits = version_bits(m.version_);
      for (int i = 0; i < 18; ++i) {
        bool bit = (bits >> i) & 1;
        int a = size - 11 + i % 3, b = i / 3;
        mark(a, b, bit);
        mark(b, a, bit);
      }
    }
  }

  // Format bits go in both copies; `reserve` also flags them as function modules.
  static void draw_format(Matrix& m, std::uint16_t bits, bool reserve) {
    const int size = m.size_;
    auto put = [&](int x, int y, bool dark) {
      m.set(x, y, dark);
      if (reserve) m.function_[m.index(x, y)] = 1;
    };
    auto bit = [&](int i) { return ((bits >> i) & 1) != 0; };
    for (int i = 0; i <= 5; ++i) put(8, i, bit(i));
    put(8, 7, bit(6));
    put(8, 8, bit(7));
    put(7, 8, bit(8));
    for (int i = 9; i < 15; ++i) put(14 - i, 8, bit(i));
    for (int i = 0; i < 8; ++i) put(size - 1 - i, 8, bit(i));
    for (int i = 8; i < 15; ++i) put(8, size - 15 + i, bit(i));
    put(8, size - 8, true);
  }
};

Matrix::Matrix(int version, EcLevel ec, int mask) : version_(version), size_(symbol_size(version)), ec_(ec), mask_(mask) {
  if (version < kMinVersion || version > kMaxVersion) throw Error(ErrorCode::InvalidArgument, "QR version out of range");
  if (mask < 0 || mask > 7) throw Error(ErrorCode::InvalidArgument, "mask out of range");
  modules_.assign(static_cast<std::size_t>(size_) * size_, 0);
  function_.assign(modules_.size(), 0);
  Builder::draw_function_patterns(*this);
  Builder::draw_format(*this, format_bits(ec, mask), false);
}

int byte_capacity(int version, EcLevel ec) {
  if (version < kMinVersion || version > kMaxVersion) throw Error(ErrorCode::InvalidArgument, "QR version out of range");
  const int count_bits = version <= 9 ? 8 : 16;
  return (data_codewords(version, ec) * 8 - 4 - count_bits) / 8;
}

std::optional<int> smallest_version(std::size_t length, EcLevel ec, int min_version) {
  for (int v = std::max(min_version, kMinVersion); v <= kMaxVersion; ++v)
    if (length <= static_cast<std::size_t>(byte_capacity(v, ec))) return v;
  return std::nullopt;
}

std::uint16_t format_bits(EcLevel ec, int mask) {
  const int data = format_ec_bits(ec) << 3 | mask;
  int rem = data;
  for (int i = 0; i < 10; ++i) rem = (rem << 1) ^ ((rem >> 9) * 0x537);
  return static_cast<std::uint16_t>((data << 10 | rem) ^ 0x5412);
}

std::uint32_t version_bits(int version) {
  std::uint32_t rem = static_cast<std::uint32_t>(version);
  for (int i = 0; i < 12; ++i) rem = (rem << 1) ^ ((rem >> 11) * 0x1F25);
  return static_cast<std::uint32_t>(version) << 12 | rem;
}

long penalty_score(const Matrix& m) {
  const int size = m.size();
  long score = 0;

  auto line_penalty = [&](auto&& get) {
    // Runs of five or more.
    int run = 1;
    for (int i = 1; i <= size; ++i) {
      if (i < size && get(i) == get(i - 1)) {
        ++run;
      } else {
        if (run >= 5) score += 3 + (run - 5);
        run = 1;
      }
    }
    // 1:1:3:1:1 with four light modules on one side; outside the symbol is light.
    auto dark = [&](int i) { return i >= 0 && i < size && get(i); };
    static constexpr std::array<bool, 7> kFinder{true, false, true, true, true, false, true};
    for (int i = 0; i + 7 <= size; ++i) {
      bool match = true;
      for (int k = 0; k < 7 && match; ++k) match = dark(i + k) == kFinder[k];
      if (!match) continue;
      bool before = true, after = true;
      for (int k = 1; k <= 4; ++k) {
        before = before && !dark(i - k);
        after = after && !dark(i + 6 + k);
      }
      if (before || after) score += 40;
    }
  };
  for (int y = 0; y < size; ++y) line_penalty([&](int x) { return m.at(x, y); });
  for (int x = 0; x < size; ++x) line_penalty([&](int y) { return m.at(x, y); });

  for (int y = 0; y + 1 < size; ++y)
    for (int x = 0; x + 1 < size; ++x) {
      bool c = m.at(x, y);
      if (c == m.at(x + 1, y) && c == m.at(x, y + 1) && c == m.at(x + 1, y + 1)) score += 3;
    }

  long dark = 0;
  for (int y = 0; y < size; ++y)
    for (int x = 0; x < size; ++x) dark += m.at(x, y);
  const long total = static_cast<long>(size) * size;
  // Steps of 5% away from a 50% dark ratio, 10 points each.
  const long k = std::abs(dark * 20 - total * 10) / total;
  score += k * 10;
  return score;
}

Matrix encode_bytes(std::span<const std::uint8_t> data, EcLevel ec, int min_version, std::optional<int> forced_mask) {
  if (min_version < kMinVersion || min_version > kMaxVersion)
    throw Error(ErrorCode::InvalidArgument, "min_version must be within 1..10");
  if (forced_mask && (*forced_mask < 0 || *forced_mask > 7)) throw Error(ErrorCode::InvalidArgument, "mask out of range");
  auto version = smallest_version(data.size(), ec, min_version);
  if (!version)
    throw Error(ErrorCode::CapacityExceeded, std::to_string(data.size()) + " bytes exceed version 10 byte-mode capacity");
  const int v = *version;

  // Bit stream: mode, count, data, terminator, byte alignment, pad bytes.
  std::vector<bool> bits;
  auto append = [&](std::uint32_t value, int n) {
    for (int i = n - 1; i >= 0; --i) bits.push_back(((value >> i) & 1) != 0);
  };
  append(0b0100, 4);
  append(static_cast<std::uint32_t>(data.size()), v <= 9 ? 8 : 16);
  for (auto b : data) append(b, 8);
  const std::size_t capacity_bits = static_cast<std::size_t>(data_codewords(v, ec)) * 8;
  append(0, static_cast<int>(std::min<std::size_t>(4, capacity_bits - bits.size())));
  append(0, static_cast<int>((8 - bits.size() % 8) % 8));
  for (std::uint8_t pad = 0xEC; bits.size() < capacity_bits; pad ^= 0xEC ^ 0x11) append(pad, 8);

  std::vector<std::uint8_t> codewords(bits.size() / 8, 0);
  for (std::size_t i = 0; i < bits.size(); ++i)
    if (bits[i]) codewords[i >> 3] |= static_cast<std::uint8_t>(1 << (7 - (i & 7)));

  // Split into blocks, append check bytes, interleave.
  const int num_blocks = kBlocks[ec_index(ec)][v];
  const int ec_len = kEcPerBlock[ec_index(ec)][v];
  const int raw = raw_codewords(v);
  const int num_short = num_blocks - raw % num_blocks;
  const int short_len = raw / num_blocks;
  std::vector<std::vector<std::uint8_t>> blocks;
  for (int i = 0, k = 0; i < num_blocks; ++i) {
    const int dlen = short_len - ec_len + (i < num_short ? 0 : 1);
    std::vector<std::uint8_t> block(codewords.begin() + k, codewords.begin() + k + dlen);
    k += dlen;
    auto check = rs::encode_block(block, ec_len);
    block.insert(block.end(), check.begin(), check.end());
    blocks.push_back(std::move(block));
  }
  // Short blocks get a placeholder where long blocks carry their extra data
  // codeword, so every block is short_len + 1 long during interleaving.
  const int gap = short_len - ec_len;
  for (int j = 0; j < num_short; ++j) blocks[j].insert(blocks[j].begin() + gap, 0);
  std::vector<std::uint8_t> stream;
  for (int i = 0; i <= short_len; ++i)
    for (int j = 0; j < num_blocks; ++j)
      if (i != gap || j >= num_short) stream.push_back(blocks[j][i]);

  auto place = [&](int mask) {
    Matrix m(v, ec, mask);
    std::size_t i = 0;
    for_each_data_module(m, [&](int x, int y) {
      bool dark = i < stream.size() * 8 && ((stream[i >> 3] >> (7 - (i & 7))) & 1);
      m.set(x, y, dark);
      ++i;
    });
    apply_mask(m, mask);
    return m;
  };

  if (forced_mask) return place(*forced_mask);
  Matrix best;
  long best_score = std::numeric_limits<long>::max();
  for (int mask = 0; mask < 8; ++mask) {
    Matrix m = place(mask);
    long score = penalty_score(m);
    if (score < best_score) {
      best_score = score;
      best = std::move(m);
    }
  }
  return best;
}

std::vector<std::uint8_t> decode_matrix(const Matrix& grid) {
  const int v = grid.version();
  const int size = grid.size();

  // Both format copies, nearest valid word by Hamming distance.
  std::uint16_t copy1 = 0, copy2 = 0;
  auto bit = [&](int x, int y) { return grid.at(x, y) ? 1 : 0; };
  for (int i = 0; i <= 5; ++i) copy1 |= bit(8, i) << i;
  copy1 |= bit(8, 7) << 6 | bit(8, 8) << 7 | bit(7, 8) << 8;
  for (int i = 9; i < 15; ++i) copy1 |= bit(14 - i, 8) << i;
  for (int i = 0; i < 8; ++i) copy2 |= bit(size - 1 - i, 8) << i;
  for (int i = 8; i < 15; ++i) copy2 |= bit(8, size - 15 + i) << i;

  int best_distance = 99;
  EcLevel ec = EcLevel::M;
  int mask = 0;
  for (EcLevel level : {EcLevel::L, EcLevel::M, EcLevel::Q, EcLevel::H})
    for (int mk = 0; mk < 8; ++mk) {
      const std::uint16_t word = format_bits(level, mk);
      for (std::uint16_t seen : {copy1, copy2}) {
        int d = __builtin_popcount(static_cast<unsigned>(word ^ seen));
        if (d < best_distance) {
          best_distance = d;
          ec = level;
          mask = mk;
        }
      }
    }
  if (best_distance > 3) throw Error(ErrorCode::DecodeFailure, "format information unreadable");

  Matrix layout(v, ec, mask);
  std::vector<std::uint8_t> stream(static_cast<std::size_t>(raw_codewords(v)), 0);
  std::size_t i = 0;
  for_each_data_module(layout, [&](int x, int y) {
    if (i < stream.size() * 8) {
      bool dark = grid.at(x, y) != mask_bit(mask, x, y);
      if (dark) stream[i >> 3] |= static_cast<std::uint8_t>(1 << (7 - (i & 7)));
    }
    ++i;
  });

  const int num_blocks = kBlocks[ec_index(ec)][v];
  const int ec_len = kEcPerBlock[ec_index(ec)][v];
  const int raw = raw_codewords(v);
  const int num_short = num_blocks - raw % num_blocks;
  const int short_len = raw / num_blocks;
  const int gap = short_len - ec_len;
  std::vector<std::vector<std::uint8_t>> blocks(num_blocks, std::vector<std::uint8_t>(short_len + 1, 0));
  std::size_t k = 0;
  for (int pos = 0; pos <= short_len; ++pos)
    for (int j = 0; j < num_blocks; ++j)
      if (pos != gap || j >= num_short) blocks[j][pos] = stream[k++];
  for (int j = 0; j < num_short; ++j) blocks[j].erase(blocks[j].begin() + gap);

  std::vector<std::uint8_t> data;
  for (int j = 0; j < num_blocks; ++j) {
    auto& block = blocks[j];
    if (!rs::correct_block(block, ec_len)) throw Error(ErrorCode::DecodeFailure, "too many codeword errors");
    data.insert(data.end(), block.begin(), block.end() - ec_len);
  }

  // Byte-mode segments until the terminator.
  std::size_t pos = 0;
  const std::size_t total = data.size() * 8;
  auto read = [&](int n) {
    if (pos + n > total) throw Error(ErrorCode::DecodeFailure, "truncated bit stream");
    std::uint32_t value = 0;
    for (int b = 0; b < n; ++b, ++pos) value = value << 1 | ((data[pos >> 3] >> (7 - (pos & 7))) & 1);
    return value;
  };
  std::vector<std::uint8_t> out;
  while (total - pos >= 4) {
    const auto mode = read(4);
    if (mode == 0) break;
    if (mode != 0b0100) throw Error(ErrorCode::DecodeFailure, "unsupported segment mode " + std::to_string(mode));
    const auto count = read(v <= 9 ? 8 : 16);
    for (std::uint32_t c = 0; c < count; ++c) out.push_back(static_cast<std::uint8_t>(read(8)));
  }
  return out;
}

}  // namespace r2o::qr
