#pragma once

#include <array>
#include <cstdint>

namespace walshflow {

// Philox4x32-10 (Salmon et al., SC'11). Pure function of (key, counter).
std::array<std::uint32_t, 4> philox4x32(std::array<std::uint32_t, 4> counter,
                                        std::array<std::uint32_t, 2> key);

// Separates the independent random inputs of one replica.
enum class StreamPurpose : std::uint32_t {
  walk_increments = 1,
  flow_marks = 2,
  excursion_marks = 3,
  block_marks = 4,
  chain_uniforms = 5,
  selection = 6,
  auxiliary = 7,
};

// Counter-based stream keyed by (seed, stream_id, purpose). Every draw is
// addressed by an absolute 64-bit index, so draws never depend on how much
// of the stream was consumed before.
class CounterRng {
 public:
  CounterRng(std::uint64_t seed, std::uint64_t stream_id,
             StreamPurpose purpose = StreamPurpose::walk_increments);

  std::array<std::uint32_t, 4> block(std::uint64_t block_index) const;

  std::uint64_t bits64(std::uint64_t index) const;

  // Uniform on [0, 1) with 53 random bits.
  double uniform(std::uint64_t index) const;

  // Fair +-1 at a signed position; 128 positions share one Philox block.
  int sign(std::int64_t position) const;

  std::uint64_t seed() const { return seed_; }
  std::uint64_t stream_id() const { return stream_; }

 private:
  std::uint64_t seed_;
  std::uint64_t stream_;
  std::array<std::uint32_t, 2> key_;
};

// Sequential cursor over a CounterRng; convenient for Monte Carlo loops.
class RngCursor {
 public:
  explicit RngCursor(CounterRng rng, std::uint64_t start = 0) : rng_(rng), next_(start) {}

  double uniform() { return rng_.uniform(next_++); }
  std::uint64_t bits64() { return rng_.bits64(next_++); }

 private:
  CounterRng rng_;
  std::uint64_t next_;
};

}  // namespace walshflow
