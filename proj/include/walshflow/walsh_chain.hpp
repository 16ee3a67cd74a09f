#pragma once

#include <cstdint>
#include <memory>
#include <optional>
#include <ostream>
#include <vector>

#include "walshflow/rng.hpp"
#include "walshflow/star_graph.hpp"
#include "walshflow/walk.hpp"

namespace walshflow {

struct ChainPath {
  std::vector<LatticePoint> positions;  // indexed by time from 0
  bool truncated = false;               // a trailing partial block was dropped
};

enum class ChainKind {
  q,     // leaves the junction at once, ray i w.p. alpha_i
  lazy,  // holds at the junction w.p. 1/2, else ray i w.p. alpha_i
};

// One step from x driven by a single uniform u in [0, 1).
LatticePoint step_chain_q(const RayParams& params, const LatticePoint& x, double u);
LatticePoint step_chain_lazy(const RayParams& params, const LatticePoint& x, double u);

// `steps` steps from the junction; step k uses uniform k of the
// (seed, stream, chain_uniforms) stream.
ChainPath simulate_chain(const RayParams& params, ChainKind kind, std::int64_t steps, std::uint64_t seed,
                         std::uint64_t stream_id);

// Ray marks addressed by an integer index: either drawn from alpha through a
// counter-based stream (so a mark never depends on how many were read) or
// taken from a fixed list starting at `first_index`.
class RayMarks {
 public:
  static RayMarks random(const RayParams& params, std::uint64_t seed, std::uint64_t stream_id,
                         StreamPurpose purpose);
  static RayMarks fixed(std::vector<int> rays, std::int64_t first_index = 0);

  int operator()(std::int64_t index) const;

 private:
  std::shared_ptr<const RayParams> params_;
  std::optional<CounterRng> rng_;
  std::vector<int> fixed_;
  std::int64_t first_ = 0;
};

enum class BlockCase { i, ii1, ii2, iii };

std::ostream& operator<<(std::ostream& os, BlockCase c);

enum class MarkSource { block, excursion };

// M = ray * |S| on [start, end], the ray being mark `index` of `source`.
struct Segment {
  std::int64_t start = 0;
  std::int64_t end = 0;
  MarkSource source = MarkSource::block;
  std::int64_t index = 0;
  int ray = 0;
};

struct Block {
  std::int64_t l = 0;
  std::int64_t start = 0;  // tau_l
  std::int64_t end = 0;    // tau_{l+1}
  std::int64_t star = 0;   // first zero of S after tau_l
  BlockCase kind = BlockCase::i;
};

struct FlipResult {
  ChainPath path;                     // M on [0, tau_L]
  std::vector<std::int64_t> y_bar;    // over the whole S-bar window
  std::vector<Block> blocks;          // complete blocks only
  std::vector<Excursion> excursions;  // excursions of Y-bar inside complete blocks
  std::vector<Segment> segments;
};

// Builds M block by block from S-bar, a preimage S of S-bar under the
// transform, excursion marks eta (by excursion ordinal) and block marks
// beta (by block number l). Indices are relative to the window starts.
// Throws not_a_preimage if T(S) != S-bar and incomplete_block if S-bar
// never completes its first block; a trailing partial block is dropped.
FlipResult flip_excursions(const RayParams& params, const WalkWindow& s_bar, const WalkWindow& s,
                           const RayMarks& eta, const RayMarks& beta);

// (eta . Y-bar)_n: eta_i * Y-bar_n on the i-th excursion, the junction where
// Y-bar_n = 0. A trailing excursion still open gets the next ordinal.
ChainPath flipped_product_chain(const RayParams& params, const WalkWindow& s_bar, const RayMarks& eta);

// Counts of the moves a path makes.
struct TransitionTally {
  std::int64_t radial_up = 0;    // from radius >= 1
  std::int64_t radial_down = 0;  // from radius >= 1
  std::int64_t hold = 0;         // junction to junction
  std::vector<std::int64_t> exits;  // junction to (ray i, 1), index i - 1
};

TransitionTally tally_transitions(const RayParams& params, const ChainPath& path);

// Ray of the first junction exit at time >= from, if any.
std::optional<int> exit_ray_after(const ChainPath& path, std::int64_t from);

// CSV dump "time,ray,radius".
void write_chain_csv(std::ostream& os, const ChainPath& path);

}  // namespace walshflow
