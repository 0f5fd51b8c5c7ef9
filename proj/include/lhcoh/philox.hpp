#pragma once

#include <array>
#include <cstdint>

namespace lhcoh {

/// Philox4x64-10 counter-based generator (Salmon et al., SC'11). Output is a
/// pure function of (counter, key), so draws can be addressed directly by
/// (seed, realization, site) without any sequential generator state.
class Philox4x64 {
public:
  using Counter = std::array<std::uint64_t, 4>;
  using Key = std::array<std::uint64_t, 2>;

  static Counter generate(Counter counter, Key key);
};

/// Uniform double in (0, 1) from the top 52 bits; both endpoints are excluded exactly.
double uniform_open(std::uint64_t bits);

/// Standard normal draw addressed by (seed, stream, index, purpose), via
/// Box-Muller on the first two words of one Philox block.
double keyed_normal(std::uint64_t seed, std::uint64_t stream, std::uint64_t index,
                    std::uint64_t purpose = 0);

/// Uniform integer in [0, n) addressed like keyed_normal.
std::uint64_t keyed_index(std::uint64_t seed, std::uint64_t stream, std::uint64_t index,
                          std::uint64_t n, std::uint64_t purpose = 1);

} // namespace lhcoh
