#include <algorithm>
#include <cmath>
#include <sstream>

#include "doctest.h"
#include "generators.hpp"
#include "walshflow/cv_transform.hpp"
#include "walshflow/stats.hpp"
#include "walshflow/walsh_chain.hpp"

using namespace walshflow;

namespace {

RayParams halves() { return RayParams({make_rational(1, 2), make_rational(1, 2)}); }

// S-bar with blocks of kinds (i), (ii1), (iii) and excursions [2,14], [16,18], [19,21].
WalkWindow figure_path() {
  const std::vector<std::int64_t> v = {0, 1, 2, 1, 0, 1, 2, 1, 0, -1, 0, 1, 0, 1, 2, 3, 4, 3, 4, 5, 4, 5, 6, 5};
  return WalkWindow::from_values(0, v);
}

}  // namespace

TEST_CASE("chain q steps") {
  const auto p = halves();
  std::int64_t ray1 = 0;
  const CounterRng rng(1, 0, StreamPurpose::auxiliary);
  const int draws = 100000;
  for (int i = 0; i < draws; ++i) {
    const auto y = step_chain_q(p, junction<std::int64_t>(p), rng.uniform(static_cast<std::uint64_t>(i)));
    CHECK(y.radius == 1);
    ray1 += y.ray == 1;
  }
  CHECK(std::abs(static_cast<double>(ray1) / draws - 0.5) <= 0.005);
  for (int i = 0; i < 1000; ++i) {
    const auto y = step_chain_q(p, LatticePoint{2, 3}, rng.uniform(static_cast<std::uint64_t>(i)));
    CHECK(y.ray == 2);
    CHECK((y.radius == 2 || y.radius == 4));
  }
  // A single ray takes every exit.
  const RayParams one({make_rational(1)});
  for (int i = 0; i < 100; ++i) CHECK(step_chain_q(one, junction<std::int64_t>(one), rng.uniform(i)).ray == 1);
}

TEST_CASE("lazy chain steps") {
  const auto p = gen::three_rays();
  const CounterRng rng(2, 0, StreamPurpose::auxiliary);
  const int draws = 100000;
  std::vector<std::int64_t> counts(4, 0);  // hold, ray 1..3
  for (int i = 0; i < draws; ++i) {
    const auto y = step_chain_lazy(p, junction<std::int64_t>(p), rng.uniform(static_cast<std::uint64_t>(i)));
    ++counts[y.is_junction() ? 0 : static_cast<std::size_t>(y.ray)];
  }
  const std::vector<double> expected = {0.5, 0.25, 1.0 / 6, 1.0 / 12};
  CHECK(chi_square(counts, expected).statistic < chi_square_critical(3, 0.001));
  for (int i = 0; i < 1000; ++i) {
    const double u = rng.uniform(static_cast<std::uint64_t>(draws + i));
    CHECK(step_chain_lazy(p, LatticePoint{1, 4}, u) == step_chain_q(p, LatticePoint{1, 4}, u));
  }
}

TEST_CASE("simulated chains are lattice paths") {
  const auto p = gen::three_rays();
  for (const auto kind : {ChainKind::q, ChainKind::lazy}) {
    const auto path = simulate_chain(p, kind, 5000, 3, 1);
    CHECK(path.positions.size() == 5001);
    const auto t = tally_transitions(p, path);
    if (kind == ChainKind::q) CHECK(t.hold == 0);
    CHECK(simulate_chain(p, kind, 5000, 3, 1).positions == path.positions);
  }
}

TEST_CASE("ray marks") {
  const auto p = gen::three_rays();
  const auto m = RayMarks::random(p, 5, 2, StreamPurpose::excursion_marks);
  CHECK(m(17) == m(17));
  const auto f = RayMarks::fixed({2, 3, 1}, 1);
  CHECK(f(1) == 2);
  CHECK(f(3) == 1);
  CHECK_THROWS_AS(f(0), Error);
  CHECK_THROWS_AS(f(4), Error);
}

TEST_CASE("block cases on a hand-built path") {
  const auto p = gen::three_rays();
  const auto sb = figure_path();
  const auto ex = excursions(reflected_from_max(sb));
  REQUIRE(ex.size() == 3);
  CHECK(ex[0] == Excursion{2, 14, 1});
  CHECK(ex[1] == Excursion{16, 18, 2});
  CHECK(ex[2] == Excursion{19, 21, 3});
  const auto s = cv_inverse(sb, 1);
  const auto eta = RayMarks::fixed({1, 2, 3}, 1);
  const auto beta = RayMarks::fixed({3, 3, 3}, 0);
  const auto r = flip_excursions(p, sb, s, eta, beta);
  REQUIRE(r.blocks.size() == 3);
  CHECK(r.blocks[0].kind == BlockCase::i);
  CHECK(r.blocks[1].kind == BlockCase::ii1);
  CHECK(r.blocks[2].kind == BlockCase::iii);
  CHECK(r.blocks[2].star == 20);
  CHECK(r.path.truncated);
  CHECK(r.path.positions.size() == 23);
  // Excursion marks follow the excursions.
  CHECK(r.path.positions[8].ray == 1);
  CHECK(r.path.positions[17].ray == 2);
  CHECK(r.path.positions[21].ray == 3);
  CHECK(r.path.positions[1].ray == 3);
  std::ostringstream os;
  os << r.blocks[1].kind;
  CHECK(os.str() == "ii1");
}

TEST_CASE("flip errors") {
  const auto p = gen::three_rays();
  const auto eta = RayMarks::random(p, 1, 0, StreamPurpose::excursion_marks);
  const auto beta = RayMarks::random(p, 1, 0, StreamPurpose::block_marks);
  const auto sb = figure_path();
  auto s = cv_inverse(sb, 1);
  auto inc = s.increments();
  inc[5] = static_cast<std::int8_t>(-inc[5]);
  try {
    flip_excursions(p, sb, WalkWindow(0, inc), eta, beta);
    CHECK(false);
  } catch (const Error& e) {
    CHECK(e.code() == Errc::not_a_preimage);
  }
  const WalkWindow down(0, std::vector<std::int8_t>(10, -1));
  try {
    flip_excursions(p, down, cv_inverse(down, 1), eta, beta);
    CHECK(false);
  } catch (const Error& e) {
    CHECK(e.code() == Errc::incomplete_block);
  }
}

TEST_CASE("flipped chain invariants on random paths") {
  const auto p = gen::three_rays();
  std::int64_t counts[4] = {0, 0, 0, 0};
  for (std::uint64_t rep = 0; rep < 2000; ++rep) {
    const auto sb = generate_walk(0, 300, 7, rep);
    const auto s = cv_inverse(sb, rep % 2 ? 1 : -1);
    const auto eta = RayMarks::random(p, 7, rep, StreamPurpose::excursion_marks);
    const auto beta = RayMarks::random(p, 7, rep, StreamPurpose::block_marks);
    FlipResult r;
    try {
      r = flip_excursions(p, sb, s, eta, beta);
    } catch (const Error& e) {
      // Only a walk that never climbs to 2 has no complete block.
      REQUIRE(e.code() == Errc::incomplete_block);
      CHECK(*std::max_element(sb.values().begin(), sb.values().end()) < 2);
      continue;
    }
    const auto& m = r.path.positions;
    for (std::size_t n = 0; n < m.size(); ++n) CHECK(m[n].radius == std::abs(s.values()[n]));
    for (const auto& e : r.excursions) {
      for (auto n = e.start; n <= e.end; ++n) {
        const LatticePoint target = make_point(p, eta(e.ordinal), r.y_bar[static_cast<std::size_t>(n)]);
        CHECK(graph_distance(m[static_cast<std::size_t>(n)], target) <= 2);
      }
    }
    for (const auto& b : r.blocks) ++counts[static_cast<int>(b.kind)];
    CHECK_NOTHROW(tally_transitions(p, r.path));
  }
  for (const auto c : counts) CHECK(c > 0);
}

TEST_CASE("product chain") {
  const auto p = gen::three_rays();
  const auto eta = RayMarks::fixed({1, 2, 3, 1, 2, 3, 1}, 1);
  const WalkWindow up(0, std::vector<std::int8_t>(12, 1));
  for (const auto& x : flipped_product_chain(p, up, eta).positions) CHECK(x.is_junction());
  const auto sb = figure_path();
  const auto y = reflected_from_max(sb);
  const auto chain = flipped_product_chain(p, sb, eta);
  for (std::size_t n = 0; n < y.size(); ++n) CHECK(chain.positions[n].radius == y[n]);
  CHECK(chain.positions[5].ray == 1);
  CHECK(chain.positions[17].ray == 2);
  CHECK(chain.positions[20].ray == 3);
  CHECK(chain.positions[23].ray == 1);  // open trailing excursion
}

TEST_CASE("product chain transitions follow the lazy matrix") {
  const auto p = gen::three_rays();
  TransitionTally total;
  total.exits.assign(3, 0);
  std::vector<std::int64_t> first_exit(3, 0);
  for (std::uint64_t rep = 0; rep < 1000; ++rep) {
    const auto sb = generate_walk(0, 200, 9, rep);
    const auto chain = flipped_product_chain(p, sb, RayMarks::random(p, 9, rep, StreamPurpose::excursion_marks));
    const auto t = tally_transitions(p, chain);
    total.hold += t.hold;
    total.radial_up += t.radial_up;
    total.radial_down += t.radial_down;
    for (int i = 0; i < 3; ++i) total.exits[static_cast<std::size_t>(i)] += t.exits[static_cast<std::size_t>(i)];
    if (const auto ray = exit_ray_after(chain, 0)) ++first_exit[static_cast<std::size_t>(*ray - 1)];
  }
  std::int64_t exits = 0;
  for (const auto e : total.exits) exits += e;
  const std::vector<std::int64_t> hold_exit = {total.hold, exits};
  const std::vector<std::int64_t> up_down = {total.radial_up, total.radial_down};
  const std::vector<double> fair = {0.5, 0.5};
  const std::vector<double> alpha = {0.5, 1.0 / 3, 1.0 / 6};
  const double level = 0.01 / 3;
  CHECK(chi_square(hold_exit, fair).statistic < chi_square_critical(1, level));
  CHECK(chi_square(up_down, fair).statistic < chi_square_critical(1, level));
  // One exit per path: its ray is a single mark, independent of S-bar.
  CHECK(chi_square(first_exit, alpha).statistic < chi_square_critical(2, level));
}

TEST_CASE("chain CSV") {
  ChainPath c;
  c.positions = {{3, 0}, {1, 1}, {1, 2}};
  std::ostringstream os;
  write_chain_csv(os, c);
  CHECK(os.str() == "time,ray,radius\n0,3,0\n1,1,1\n2,1,2\n");
}

TEST_CASE("flipped chain keeps its ray across zeros inside a segment") {
  // One-step exit law is alpha, but consecutive exits repeat a ray more often
  // than sum alpha_i^2, so the flipped chain is not Markov.
  const auto p = gen::three_rays();
  std::int64_t pairs = 0;
  std::int64_t same = 0;
  std::int64_t multi_exit_segments = 0;
  for (std::uint64_t rep = 0; rep < 500; ++rep) {
    const auto s = generate_walk(0, 1000, 13, rep);
    FlipResult f;
    try {
      f = flip_excursions(p, cv_forward(s), s, RayMarks::random(p, 13, rep, StreamPurpose::excursion_marks),
                          RayMarks::random(p, 13, rep, StreamPurpose::block_marks));
    } catch (const Error&) {
      continue;
    }
    const auto& m = f.path.positions;
    for (const auto& sg : f.segments) {
      int exits = 0;
      for (auto t = sg.start; t < sg.end; ++t) {
        const auto i = static_cast<std::size_t>(t);
        if (m[i].is_junction() && !m[i + 1].is_junction()) {
          ++exits;
          CHECK(m[i + 1].ray == sg.ray);
        }
      }
      multi_exit_segments += exits > 1;
    }
    int last = 0;
    for (std::size_t i = 0; i + 1 < m.size(); ++i) {
      if (!m[i].is_junction() || m[i + 1].is_junction()) continue;
      if (last != 0) {
        ++pairs;
        same += m[i + 1].ray == last;
      }
      last = m[i + 1].ray;
    }
  }
  CHECK(multi_exit_segments > 0);
  const double freq = static_cast<double>(same) / static_cast<double>(pairs);
  const double markov = 0.25 + 1.0 / 9 + 1.0 / 36;
  CHECK(freq - markov > 10 * std::sqrt(markov * (1 - markov) / static_cast<double>(pairs)));
}
