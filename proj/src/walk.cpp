#include "walshflow/walk.hpp"

#include <bit>

#include "walshflow/rng.hpp"

namespace walshflow {

WalkWindow::WalkWindow(std::int64_t first, std::vector<std::int8_t> increments)
    : first_(first), increments_(std::move(increments)) {
  if (increments_.empty()) throw Error(Errc::empty_window, "walk window needs at least one step");
  values_.resize(increments_.size() + 1);
  values_[0] = 0;
  for (std::size_t i = 0; i < increments_.size(); ++i) {
    if (increments_[i] != 1 && increments_[i] != -1) {
      throw Error(Errc::invalid_params, "walk increments must be +-1");
    }
    values_[i + 1] = values_[i] + increments_[i];
  }

  const std::size_t n = values_.size();
  table_.emplace_back(n);
  for (std::size_t i = 0; i < n; ++i) table_[0][i] = static_cast<std::uint32_t>(i);
  for (std::size_t j = 1; (std::size_t{1} << j) <= n; ++j) {
    const std::size_t half = std::size_t{1} << (j - 1);
    const auto& prev = table_[j - 1];
    std::vector<std::uint32_t> level(n - (std::size_t{1} << j) + 1);
    for (std::size_t i = 0; i < level.size(); ++i) {
      const std::uint32_t a = prev[i];
      const std::uint32_t b = prev[i + half];
      level[i] = values_[b] <= values_[a] ? b : a;
    }
    table_.push_back(std::move(level));
  }
}

WalkWindow WalkWindow::from_values(std::int64_t first, std::span<const std::int64_t> values) {
  if (values.size() < 2) throw Error(Errc::empty_window, "walk window needs at least one step");
  std::vector<std::int8_t> inc(values.size() - 1);
  for (std::size_t i = 0; i + 1 < values.size(); ++i) {
    const std::int64_t d = values[i + 1] - values[i];
    if (d != 1 && d != -1) throw Error(Errc::invalid_params, "walk values must move by +-1");
    inc[i] = static_cast<std::int8_t>(d);
  }
  return WalkWindow(first, std::move(inc));
}

std::int64_t WalkWindow::value(std::int64_t k) const {
  if (!contains(k)) throw Error(Errc::out_of_window, "index outside walk window");
  return values_[static_cast<std::size_t>(k - first_)];
}

int WalkWindow::increment(std::int64_t k) const {
  if (k <= first_ || k > last()) throw Error(Errc::out_of_window, "increment index outside window");
  return increments_[static_cast<std::size_t>(k - first_ - 1)];
}

void WalkWindow::check_range(std::int64_t p, std::int64_t n) const {
  if (!contains(p) || !contains(n) || p > n) {
    throw Error(Errc::out_of_window, "range outside walk window");
  }
}

std::size_t WalkWindow::argmin_offset(std::size_t lo, std::size_t hi) const {
  const auto len = hi - lo + 1;
  const auto j = static_cast<std::size_t>(std::bit_width(len) - 1);
  const std::uint32_t a = table_[j][lo];
  const std::uint32_t b = table_[j][hi + 1 - (std::size_t{1} << j)];
  return values_[b] <= values_[a] ? b : a;
}

std::int64_t WalkWindow::window_min(std::int64_t p, std::int64_t n) const {
  check_range(p, n);
  const auto lo = static_cast<std::size_t>(p - first_);
  const auto hi = static_cast<std::size_t>(n - first_);
  return values_[argmin_offset(lo, hi)] - values_[lo];
}

std::int64_t WalkWindow::last_argmin(std::int64_t p, std::int64_t n) const {
  check_range(p, n);
  return first_ + static_cast<std::int64_t>(
                      argmin_offset(static_cast<std::size_t>(p - first_), static_cast<std::size_t>(n - first_)));
}

std::int64_t WalkWindow::s_plus(std::int64_t p, std::int64_t n) const {
  return diff(p, n) - window_min(p, n);
}

std::optional<std::int64_t> WalkWindow::hitting_time(std::int64_t p, std::int64_t depth) const {
  if (!contains(p)) throw Error(Errc::out_of_window, "hitting time start outside window");
  if (depth < 0) throw Error(Errc::invalid_params, "hitting depth must be nonnegative");
  if (depth == 0) return p;
  if (window_min(p, last()) > -depth) return std::nullopt;
  // Unit steps: the first q with min_{[p,q]} S - S_p <= -depth hits exactly.
  std::int64_t lo = p;
  std::int64_t hi = last();
  while (lo < hi) {
    const std::int64_t mid = lo + (hi - lo) / 2;
    if (window_min(p, mid) <= -depth) {
      hi = mid;
    } else {
      lo = mid + 1;
    }
  }
  return lo;
}

WalkWindow WalkWindow::negated() const {
  std::vector<std::int8_t> inc(increments_.size());
  for (std::size_t i = 0; i < inc.size(); ++i) inc[i] = static_cast<std::int8_t>(-increments_[i]);
  return WalkWindow(first_, std::move(inc));
}

WalkWindow generate_walk(std::int64_t first, std::int64_t last, std::uint64_t seed,
                         std::uint64_t stream_id) {
  if (first >= last) throw Error(Errc::empty_window, "generate_walk needs first < last");
  const CounterRng rng(seed, stream_id, StreamPurpose::walk_increments);
  std::vector<std::int8_t> inc(static_cast<std::size_t>(last - first));
  std::int64_t cached_block = 0;
  std::array<std::uint32_t, 4> block{};
  bool have_block = false;
  for (std::int64_t k = first + 1; k <= last; ++k) {
    const std::int64_t b = k >> 7;
    if (!have_block || b != cached_block) {
      block = rng.block(static_cast<std::uint64_t>(b));
      cached_block = b;
      have_block = true;
    }
    const auto bit = static_cast<unsigned>(k & 127);
    inc[static_cast<std::size_t>(k - first - 1)] = ((block[bit >> 5] >> (bit & 31)) & 1U) ? 1 : -1;
  }
  return WalkWindow(first, std::move(inc));
}

std::ostream& operator<<(std::ostream& os, const Excursion& e) {
  return os << "E" << e.ordinal << "[" << e.start << "," << e.end << "]";
}

std::vector<Excursion> excursions(std::span<const std::int64_t> y, std::int64_t first) {
  for (const auto v : y) {
    if (v < 0) throw Error(Errc::negative_value, "excursions need a nonnegative path");
  }
  std::vector<Excursion> out;
  const auto n = y.size();
  std::int64_t ordinal = 0;
  std::size_t i = 0;
  while (i + 1 < n) {
    const bool prev_zero = (i == 0) || y[i - 1] == 0;
    if (!(prev_zero && y[i] == 0 && y[i + 1] != 0)) {
      ++i;
      continue;
    }
    // Start found at i; the end is the first j > i with Y_j = Y_{j+1} = 0.
    std::size_t j = i + 1;
    while (j + 1 < n && !(y[j] == 0 && y[j + 1] == 0)) ++j;
    if (j + 1 >= n) break;  // still open at the window end
    out.push_back({first + static_cast<std::int64_t>(i), first + static_cast<std::int64_t>(j), ++ordinal});
    i = j + 1;
  }
  return out;
}

void write_walk_csv(std::ostream& os, const WalkWindow& w) {
  os << "index,increment,value\n";
  for (std::int64_t k = w.first(); k <= w.last(); ++k) {
    os << k << "," << (k == w.first() ? 0 : w.increment(k)) << "," << w.value(k) << "\n";
  }
}

}  // namespace walshflow
