#include "r2o/reed_solomon.hpp"

#include <algorithm>
#include <array>
#include <utility>
#include <stdexcept>

namespace r2o::rs {
namespace {

struct Tables {
  std::array<std::uint8_t, 512> exp{};
  std::array<int, 256> log{};

  Tables() {
    int x = 1;
    for (int i = 0; i < 255; ++i) {
      exp[i] = static_cast<std::uint8_t>(x);
      log[x] = i;
      x <<= 1;
      if (x & 0x100) x ^= 0x11D;
    }
    for (int i = 255; i < 512; ++i) exp[i] = exp[i - 255];
    log[0] = -1;
  }
};

const Tables& tables() {
  static const Tables t;
  return t;
}

// Polynomials below are stored lowest degree first.
std::uint8_t poly_eval(const std::vector<std::uint8_t>& p, std::uint8_t x) {
  std::uint8_t y = 0;
  for (auto it = p.rbegin(); it != p.rend(); ++it) y = gf_mul(y, x) ^ *it;
  return y;
}

}  // namespace

std::uint8_t gf_mul(std::uint8_t a, std::uint8_t b) noexcept {
  if (a == 0 || b == 0) return 0;
  const auto& t = tables();
  return t.exp[t.log[a] + t.log[b]];
}

std::uint8_t gf_div(std::uint8_t a, std::uint8_t b) {
  if (b == 0) throw std::domain_error("GF(256) division by zero");
  if (a == 0) return 0;
  const auto& t = tables();
  return t.exp[(t.log[a] - t.log[b] + 255) % 255];
}

std::uint8_t gf_pow2(int exponent) noexcept {
  int e = exponent % 255;
  if (e < 0) e += 255;
  return tables().exp[e];
}

std::vector<std::uint8_t> encode_block(std::span<const std::uint8_t> data, int ec_len) {
  if (ec_len < 1 || ec_len > 254) throw std::invalid_argument("ec_len out of range");
  // Generator, highest degree first with the monic term dropped.
  std::vector<std::uint8_t> gen(ec_len, 0);
  gen[ec_len - 1] = 1;
  std::uint8_t root = 1;
  for (int i = 0; i < ec_len; ++i) {
    for (int j = 0; j < ec_len; ++j) {
      gen[j] = gf_mul(gen[j], root);
      if (j + 1 < ec_len) gen[j] ^= gen[j + 1];
    }
    root = gf_mul(root, 2);
  }

  std::vector<std::uint8_t> rem(ec_len, 0);
  for (auto b : data) {
    std::uint8_t factor = b ^ rem.front();
    rem.erase(rem.begin());
    rem.push_back(0);
    for (int j = 0; j < ec_len; ++j) rem[j] ^= gf_mul(gen[j], factor);
  }
  return rem;
}

std::optional<int> correct_block(std::span<std::uint8_t> codeword, int ec_len) {
  const int n = static_cast<int>(codeword.size());
  if (ec_len < 1 || ec_len >= n) throw std::invalid_argument("ec_len out of range");

  // codeword[k] is the coefficient of x^(n-1-k).
  std::vector<std::uint8_t> synd(ec_len);
  bool clean = true;
  for (int j = 0; j < ec_len; ++j) {
    std::uint8_t x = gf_pow2(j), y = 0;
    for (auto c : codeword) y = gf_mul(y, x) ^ c;
    synd[j] = y;
    clean = clean && y == 0;
  }
  if (clean) return 0;

  // Berlekamp-Massey.
  std::vector<std::uint8_t> locator{1}, prev{1};
  int errors = 0, shift = 1;
  std::uint8_t prev_disc = 1;
  for (int step = 0; step < ec_len; ++step) {
    std::uint8_t disc = synd[step];
    for (int i = 1; i <= errors && i < static_cast<int>(locator.size()); ++i)
      disc ^= gf_mul(locator[i], synd[step - i]);
    if (disc == 0) {
      ++shift;
      continue;
    }
    std::uint8_t coef = gf_div(disc, prev_disc);
    std::vector<std::uint8_t> next = locator;
    if (next.size() < prev.size() + shift) next.resize(prev.size() + shift, 0);
    for (std::size_t i = 0; i < prev.size(); ++i) next[i + shift] ^= gf_mul(coef, prev[i]);
    if (2 * errors <= step) {
      prev = locator;
      prev_disc = disc;
      errors = step + 1 - errors;
      shift = 1;
    } else {
      ++shift;
    }
    locator = std::move(next);
  }
  while (locator.size() > 1 && locator.back() == 0) locator.pop_back();
  const int degree = static_cast<int>(locator.size()) - 1;
  if (degree == 0 || 2 * degree > ec_len) return std::nullopt;

  // Error evaluator: S(x) * Lambda(x) mod x^ec_len.
  std::vector<std::uint8_t> evaluator(ec_len, 0);
  for (int i = 0; i < ec_len; ++i)
    for (int j = 0; j <= degree && i + j < ec_len; ++j) evaluator[i + j] ^= gf_mul(synd[i], locator[j]);

  // Formal derivative: odd-degree terms only in characteristic 2.
  std::vector<std::uint8_t> derivative(std::max(degree, 1), 0);
  for (int i = 1; i <= degree; i += 2) derivative[i - 1] = locator[i];

  std::vector<std::pair<int, std::uint8_t>> fixes;
  for (int k = 0; k < n; ++k) {
    const int power = n - 1 - k;
    std::uint8_t x_inv = gf_pow2(-power);
    if (poly_eval(locator, x_inv) != 0) continue;
    std::uint8_t denom = poly_eval(derivative, x_inv);
    if (denom == 0) return std::nullopt;
    std::uint8_t magnitude = gf_mul(gf_pow2(power), gf_div(poly_eval(evaluator, x_inv), denom));
    fixes.emplace_back(k, magnitude);
  }
  if (static_cast<int>(fixes.size()) != degree) return std::nullopt;

  std::vector<std::uint8_t> fixed(codeword.begin(), codeword.end());
  for (auto [k, magnitude] : fixes) fixed[k] ^= magnitude;

  for (int j = 0; j < ec_len; ++j) {
    std::uint8_t x = gf_pow2(j), y = 0;
    for (auto c : fixed) y = gf_mul(y, x) ^ c;
    if (y != 0) return std::nullopt;
  }
  std::copy(fixed.begin(), fixed.end(), codeword.begin());
  return degree;
}

}  // namespace r2o::rs
