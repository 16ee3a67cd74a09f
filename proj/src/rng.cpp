#include "walshflow/rng.hpp"

namespace walshflow {
namespace {

constexpr std::uint32_t kPhiloxW32A = 0x9E3779B9;
constexpr std::uint32_t kPhiloxW32B = 0xBB67AE85;
constexpr std::uint32_t kPhiloxM4x32A = 0xD2511F53;
constexpr std::uint32_t kPhiloxM4x32B = 0xCD9E8D57;

inline void mulhilo(std::uint32_t a, std::uint32_t b, std::uint32_t& lo, std::uint32_t& hi) {
  const std::uint64_t product = static_cast<std::uint64_t>(a) * b;
  lo = static_cast<std::uint32_t>(product);
  hi = static_cast<std::uint32_t>(product >> 32);
}

std::uint64_t mix64(std::uint64_t z) {
  z = (z ^ (z >> 30)) * 0xBF58476D1CE4E5B9ULL;
  z = (z ^ (z >> 27)) * 0x94D049BB133111EBULL;
  return z ^ (z >> 31);
}

}  // namespace

std::array<std::uint32_t, 4> philox4x32(std::array<std::uint32_t, 4> ctr,
                                        std::array<std::uint32_t, 2> key) {
  for (int round = 0; round < 10; ++round) {
    std::uint32_t lo0, hi0, lo1, hi1;
    mulhilo(kPhiloxM4x32A, ctr[0], lo0, hi0);
    mulhilo(kPhiloxM4x32B, ctr[2], lo1, hi1);
    ctr = {hi1 ^ ctr[1] ^ key[0], lo1, hi0 ^ ctr[3] ^ key[1], lo0};
    key[0] += kPhiloxW32A;
    key[1] += kPhiloxW32B;
  }
  return ctr;
}

CounterRng::CounterRng(std::uint64_t seed, std::uint64_t stream_id, StreamPurpose purpose)
    : seed_(seed), stream_(stream_id) {
  const std::uint64_t k = mix64(seed ^ mix64(static_cast<std::uint64_t>(purpose)));
  key_ = {static_cast<std::uint32_t>(k), static_cast<std::uint32_t>(k >> 32)};
}

std::array<std::uint32_t, 4> CounterRng::block(std::uint64_t block_index) const {
  return philox4x32({static_cast<std::uint32_t>(block_index),
                     static_cast<std::uint32_t>(block_index >> 32),
                     static_cast<std::uint32_t>(stream_), static_cast<std::uint32_t>(stream_ >> 32)},
                    key_);
}

std::uint64_t CounterRng::bits64(std::uint64_t index) const {
  const auto b = block(index >> 1);
  const std::size_t half = (index & 1U) * 2;
  return (static_cast<std::uint64_t>(b[half + 1]) << 32) | b[half];
}

double CounterRng::uniform(std::uint64_t index) const {
  return static_cast<double>(bits64(index) >> 11) * 0x1.0p-53;
}

int CounterRng::sign(std::int64_t position) const {
  // Arithmetic shift gives floor division for negative positions.
  const auto block_index = static_cast<std::uint64_t>(position >> 7);
  const auto bit = static_cast<unsigned>(position & 127);
  const auto b = block(block_index);
  return ((b[bit >> 5] >> (bit & 31)) & 1U) ? 1 : -1;
}

}  // namespace walshflow
