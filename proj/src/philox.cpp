#include "lhcoh/philox.hpp"

#include <cmath>
#include <numbers>
#include <stdexcept>

namespace lhcoh {

namespace {

constexpr std::uint64_t kMul0 = 0xD2E7470EE14C6C93ULL;
constexpr std::uint64_t kMul1 = 0xCA5A826395121157ULL;
constexpr std::uint64_t kWeyl0 = 0x9E3779B97F4A7C15ULL;
constexpr std::uint64_t kWeyl1 = 0xBB67AE8584CAA73BULL;

inline void mulhilo(std::uint64_t a, std::uint64_t b, std::uint64_t& hi, std::uint64_t& lo) {
  const unsigned __int128 product = static_cast<unsigned __int128>(a) * b;
  hi = static_cast<std::uint64_t>(product >> 64);
  lo = static_cast<std::uint64_t>(product);
}

inline Philox4x64::Counter round(const Philox4x64::Counter& x, const Philox4x64::Key& k) {
  std::uint64_t hi0, lo0, hi1, lo1;
  mulhilo(kMul0, x[0], hi0, lo0);
  mulhilo(kMul1, x[2], hi1, lo1);
  return {hi1 ^ x[1] ^ k[0], lo1, hi0 ^ x[3] ^ k[1], lo0};
}

} // namespace

Philox4x64::Counter Philox4x64::generate(Counter counter, Key key) {
  counter = round(counter, key);
  for (int r = 1; r < 10; ++r) {
    key[0] += kWeyl0;
    key[1] += kWeyl1;
    counter = round(counter, key);
  }
  return counter;
}

double uniform_open(std::uint64_t bits) {
  return (static_cast<double>(bits >> 12) + 0.5) * 0x1.0p-52;
}

double keyed_normal(std::uint64_t seed, std::uint64_t stream, std::uint64_t index,
                    std::uint64_t purpose) {
  const auto block = Philox4x64::generate({index, purpose, 0, 0}, {seed, stream});
  const double u1 = uniform_open(block[0]);
  const double u2 = uniform_open(block[1]);
  return std::sqrt(-2.0 * std::log(u1)) * std::cos(2.0 * std::numbers::pi * u2);
}

std::uint64_t keyed_index(std::uint64_t seed, std::uint64_t stream, std::uint64_t index,
                          std::uint64_t n, std::uint64_t purpose) {
  if (n == 0)
    throw std::invalid_argument("keyed_index: empty range");
  const auto block = Philox4x64::generate({index, purpose, 0, 0}, {seed, stream});
  return static_cast<std::uint64_t>(
      (static_cast<unsigned __int128>(block[0]) * n) >> 64);
}

} // namespace lhcoh
