#include <cmath>
#include <fstream>
#include <sstream>

#include "doctest.h"
#include "generators.hpp"
#include "oracles.hpp"
#include "walshflow/walk.hpp"

using namespace walshflow;

namespace {

const std::vector<std::int64_t> kExample = {0, 1, 2, 1, 0, -1};

WalkWindow constant(int sign, std::size_t n) { return WalkWindow(0, std::vector<std::int8_t>(n, static_cast<std::int8_t>(sign))); }

}  // namespace

TEST_CASE("window statistics on fixed walks") {
  CHECK(constant(1, 5).window_min(0, 5) == 0);
  CHECK(constant(-1, 5).window_min(0, 5) == -5);
  const auto w = WalkWindow::from_values(0, kExample);
  CHECK(w.s_plus(3, 3) == 0);
  CHECK(w.s_plus(0, 5) == 0);
  CHECK(w.s_plus(0, 2) == 2);
  CHECK(w.hitting_time(0, 0) == 0);
  CHECK(w.hitting_time(0, 1) == 5);
  CHECK(w.hitting_time(2, 3) == 5);
  CHECK_FALSE(constant(1, 10).hitting_time(0, 3).has_value());
  CHECK(w.last_argmin(0, 4) == 4);
  CHECK(w.last_argmin(0, 3) == 0);
  CHECK(w.negated().value(2) == -2);
}

TEST_CASE("window errors") {
  const auto w = WalkWindow::from_values(-2, kExample);
  CHECK(w.first() == -2);
  CHECK(w.last() == 3);
  CHECK(w.diff(-2, 3) == -1);
  CHECK_THROWS_AS(w.window_min(-3, 0), Error);
  CHECK_THROWS_AS(w.window_min(1, 0), Error);
  CHECK_THROWS_AS(w.s_plus(0, 4), Error);
  CHECK_THROWS_AS(w.hitting_time(5, 1), Error);
  CHECK_THROWS_AS(generate_walk(0, 0, 1, 0), Error);
  try {
    generate_walk(3, 3, 1, 0);
  } catch (const Error& e) {
    CHECK(e.code() == Errc::empty_window);
  }
  CHECK_THROWS_AS(WalkWindow(0, {1, 0, -1}), Error);
}

TEST_CASE("window queries agree with linear scans") {
  gen::Rng rng(3);
  std::uniform_int_distribution<std::size_t> len(1, 300);
  for (int i = 0; i < 300; ++i) {
    const auto w = gen::walk(rng, -7, len(rng));
    const auto& v = w.values();
    std::uniform_int_distribution<std::size_t> idx(0, v.size() - 1);
    for (int j = 0; j < 40; ++j) {
      std::size_t p = idx(rng);
      std::size_t n = idx(rng);
      if (p > n) std::swap(p, n);
      const std::int64_t ap = w.first() + static_cast<std::int64_t>(p);
      const std::int64_t an = w.first() + static_cast<std::int64_t>(n);
      const auto m = oracle::scan_min(v, p, n);
      CHECK(w.window_min(ap, an) == m);
      CHECK(w.last_argmin(ap, an) == w.first() + static_cast<std::int64_t>(oracle::scan_last_argmin(v, p, n)));
      const auto sp = w.s_plus(ap, an);
      CHECK(sp >= 0);
      CHECK((sp == 0) == (m == v[n] - v[p]));
      const std::int64_t depth = j % 6;
      const auto hit = oracle::scan_hit(v, p, depth);
      const auto got = w.hitting_time(ap, depth);
      CHECK(got.has_value() == hit.has_value());
      if (hit) CHECK(*got == w.first() + static_cast<std::int64_t>(*hit));
    }
  }
}

TEST_CASE("hitting time is monotone in depth") {
  gen::Rng rng(4);
  for (int i = 0; i < 1000; ++i) {
    const auto w = gen::walk(rng, 0, 200);
    std::uniform_int_distribution<std::int64_t> p(0, 199);
    std::uniform_int_distribution<std::int64_t> d(0, 12);
    const auto start = p(rng);
    auto d1 = d(rng);
    auto d2 = d(rng);
    if (d1 > d2) std::swap(d1, d2);
    const auto t1 = w.hitting_time(start, d1);
    const auto t2 = w.hitting_time(start, d2);
    if (t2) {
      REQUIRE(t1.has_value());
      CHECK(*t1 <= *t2);
    }
  }
}

TEST_CASE("generated walks are reproducible and window independent") {
  const auto a = generate_walk(0, 500, 42, 7);
  const auto b = generate_walk(0, 500, 42, 7);
  CHECK(a == b);
  const auto c = generate_walk(-300, 200, 42, 7);
  for (std::int64_t k = 1; k <= 200; ++k) CHECK(c.increment(k) == a.increment(k));
  CHECK_FALSE(generate_walk(0, 500, 42, 8) == a);
  CHECK_FALSE(generate_walk(0, 500, 43, 7) == a);
}

TEST_CASE("golden walk: seed 1, stream 0, window [0, 8]") {
  std::ostringstream out;
  write_walk_csv(out, generate_walk(0, 8, 1, 0));
  std::ifstream golden(std::string(WALSHFLOW_TEST_DATA) + "/golden/walk_seed1_stream0.csv");
  REQUIRE(golden.good());
  std::stringstream expected;
  expected << golden.rdbuf();
  CHECK(out.str() == expected.str());
}

TEST_CASE("rescaled endpoint is centred") {
  // 10^4 streams at n = 10^4: the mean of S_n / sqrt(n) has sd 0.01.
  double sum = 0.0;
  const int streams = 10000;
  for (int s = 0; s < streams; ++s) {
    const auto w = generate_walk(0, 10000, 99, static_cast<std::uint64_t>(s));
    sum += static_cast<double>(w.value(10000)) / 100.0;
  }
  CHECK(std::abs(sum / streams) <= 0.05);
}

TEST_CASE("excursions: small examples") {
  const std::vector<std::int64_t> y = {0, 1, 0, 0, 1, 2, 1, 0};
  const auto e = excursions(y);
  REQUIRE(e.size() == 1);
  CHECK(e[0] == Excursion{0, 2, 1});
  CHECK(oracle::all_excursions(y) == std::vector<oracle::Interval>{{0, 2}});
  CHECK(excursions(std::vector<std::int64_t>(20, 0)).empty());
  CHECK_THROWS_AS(excursions(std::vector<std::int64_t>{0, 1, -1}), Error);
  // Offsets only shift indices.
  const auto shifted = excursions(y, 10);
  CHECK(shifted[0] == Excursion{10, 12, 1});
}

namespace {

// Paths with steps in {-1, 0, +1}, staying nonnegative, digits from `code`.
std::vector<std::int64_t> lazy_path(std::uint64_t code, std::size_t len) {
  std::vector<std::int64_t> y{0};
  for (std::size_t k = 1; k < len; ++k) {
    const int step = static_cast<int>(code % 3) - 1;
    code /= 3;
    y.push_back(std::max<std::int64_t>(0, y.back() + step));
  }
  return y;
}

void check_against_oracle(const std::vector<std::int64_t>& y) {
  const auto fast = excursions(y);
  const auto slow = oracle::all_excursions(y);
  REQUIRE(fast.size() == slow.size());
  for (std::size_t i = 0; i < fast.size(); ++i) {
    CHECK(fast[i].start == slow[i].start);
    CHECK(fast[i].end == slow[i].end);
    CHECK(fast[i].ordinal == static_cast<std::int64_t>(i + 1));
    if (i > 0) CHECK(fast[i].start > fast[i - 1].end);
    for (auto j = fast[i].start; j < fast[i].end; ++j) {
      CHECK_FALSE((y[static_cast<std::size_t>(j)] == 0 && y[static_cast<std::size_t>(j + 1)] == 0));
    }
  }
}

}  // namespace

TEST_CASE("excursions match the definition on all short paths") {
  std::uint64_t total = 1;
  for (int i = 0; i < 13; ++i) total *= 3;
  for (std::uint64_t code = 0; code < total; ++code) check_against_oracle(lazy_path(code, 14));
}

TEST_CASE("excursions match the definition on random long paths") {
  gen::Rng rng(8);
  for (int i = 0; i < 1000; ++i) {
    std::vector<std::int64_t> y{0};
    std::uniform_int_distribution<int> step(-1, 1);
    for (int k = 1; k < 120; ++k) y.push_back(std::max<std::int64_t>(0, y.back() + step(rng)));
    check_against_oracle(y);
  }
}
