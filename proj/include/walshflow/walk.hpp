#pragma once

#include <cstdint>
#include <optional>
#include <ostream>
#include <span>
#include <vector>

#include "walshflow/error.hpp"

namespace walshflow {

// Simple random walk on the index window [first, last]. Values are anchored
// at S_first = 0; only differences S_{p,n} = S_n - S_p carry meaning.
// Range minima are answered in O(1) from a sparse table built on construction.
class WalkWindow {
 public:
  // increments[k] is X_{first+k+1} = S_{first+k+1} - S_{first+k}, each +-1.
  WalkWindow(std::int64_t first, std::vector<std::int8_t> increments);

  // From anchored values S_first..S_last (differences must be +-1).
  static WalkWindow from_values(std::int64_t first, std::span<const std::int64_t> values);

  std::int64_t first() const { return first_; }
  std::int64_t last() const { return first_ + static_cast<std::int64_t>(increments_.size()); }
  std::int64_t steps() const { return static_cast<std::int64_t>(increments_.size()); }
  bool contains(std::int64_t k) const { return k >= first() && k <= last(); }

  std::int64_t value(std::int64_t k) const;
  // X_k for k in (first, last].
  int increment(std::int64_t k) const;
  std::int64_t diff(std::int64_t p, std::int64_t n) const { return value(n) - value(p); }

  // min_{h in [p, n]} S_h - S_p.
  std::int64_t window_min(std::int64_t p, std::int64_t n) const;
  // Last h in [p, n] attaining min_{[p, n]} S.
  std::int64_t last_argmin(std::int64_t p, std::int64_t n) const;
  // S^+_{p,n} = S_{p,n} - min_{h in [p, n]} S_{p,h}.
  std::int64_t s_plus(std::int64_t p, std::int64_t n) const;
  // T = inf{q >= p : S_q - S_p = -depth}; nullopt when not reached by last().
  std::optional<std::int64_t> hitting_time(std::int64_t p, std::int64_t depth) const;

  WalkWindow negated() const;

  const std::vector<std::int64_t>& values() const { return values_; }
  const std::vector<std::int8_t>& increments() const { return increments_; }

  friend bool operator==(const WalkWindow& a, const WalkWindow& b) {
    return a.first_ == b.first_ && a.increments_ == b.increments_;
  }

 private:
  void check_range(std::int64_t p, std::int64_t n) const;
  std::size_t argmin_offset(std::size_t lo, std::size_t hi) const;

  std::int64_t first_;
  std::vector<std::int8_t> increments_;
  std::vector<std::int64_t> values_;
  // table_[j][i]: offset of the last minimum of values_ on [i, i + 2^j).
  std::vector<std::vector<std::uint32_t>> table_;
};

// Increments i.i.d. uniform on {-1,+1}; X_k depends only on (seed, stream, k),
// so overlapping windows of the same stream agree.
WalkWindow generate_walk(std::int64_t first, std::int64_t last, std::uint64_t seed,
                         std::uint64_t stream_id);

// Excursion [start, end] of a nonnegative path with global ordinal.
struct Excursion {
  std::int64_t start = 0;
  std::int64_t end = 0;
  std::int64_t ordinal = 0;

  friend bool operator==(const Excursion&, const Excursion&) = default;
};

std::ostream& operator<<(std::ostream& os, const Excursion& e);

// Excursions of y (y[i] is Y at index first + i): [p, q] with p < q,
// Y_p = Y_{p-1} = Y_q = Y_{q+1} = 0 (Y_{first-1} := 0) and no two consecutive
// zeros on [p, q). Excursions still open at the end of y are dropped.
std::vector<Excursion> excursions(std::span<const std::int64_t> y, std::int64_t first = 0);

// CSV dump "index,increment,value"; the first row carries increment 0.
void write_walk_csv(std::ostream& os, const WalkWindow& w);

}  // namespace walshflow
