#pragma once

#include <cstdint>
#include <random>

namespace phaselab {

using Engine = std::mt19937_64;

// Named sub-streams of a master seed. Every consumer derives its own engine
// from (master, stream, index) so results never depend on evaluation order.
enum class Stream : std::uint64_t {
  measurements = 1,
  noise = 2,
  trial = 3,
  signal = 4,
  solver = 5,
  width = 6,
  packing = 7,
  pairs = 8,
  directions = 9,
  check = 10,
};

std::uint64_t mix64(std::uint64_t x) noexcept;

std::uint64_t derive_seed(std::uint64_t master, Stream stream,
                          std::uint64_t index = 0) noexcept;

inline std::uint64_t derive_seed(std::uint64_t master, std::uint64_t a,
                                 std::uint64_t b) noexcept {
  return mix64(mix64(master ^ mix64(a + 0x632be59bd9b4e019ULL)) ^ b);
}

Engine make_engine(std::uint64_t master, Stream stream,
                   std::uint64_t index = 0);

}  // namespace phaselab
