#include <map>
#include <random>
#include <sstream>

#include "doctest.h"
#include "generators.hpp"
#include "oracles.hpp"
#include "walshflow/flows.hpp"

using namespace walshflow;

namespace {

LatticePoint lp(const RayParams& p, int ray, std::int64_t radius) { return make_point(p, ray, radius); }

std::vector<LatticePoint> small_points(const RayParams& p, std::int64_t max_radius) {
  std::vector<LatticePoint> out = {junction<std::int64_t>(p)};
  for (int i = 1; i <= p.rays(); ++i)
    for (std::int64_t r = 1; r <= max_radius; ++r) out.push_back(make_point(p, i, r));
  return out;
}

// Law of Psi_{p,n}(x) over every assignment of eta_p..eta_{n-1}, no pruning.
LatticeMeasure literal_law(const RayParams& params, const WalkWindow& walk, std::int64_t p, std::int64_t n,
                           const LatticePoint& x) {
  const auto len = static_cast<std::size_t>(n - p);
  std::vector<int> rays(len, 1);
  std::vector<LatticeMeasure::Atom> atoms;
  while (true) {
    std::vector<int> full(static_cast<std::size_t>(n - walk.first() + 1), 1);
    Rational w(1);
    for (std::size_t k = 0; k < len; ++k) {
      full[static_cast<std::size_t>(p - walk.first()) + k] = rays[k];
      w *= params.alpha(rays[k]);
    }
    const FlowRealization fr{params, walk, RayMarks::fixed(full, walk.first())};
    atoms.emplace_back(psi_compose(fr, p, n, x), w);
    std::size_t k = 0;
    while (k < len && rays[k] == params.rays()) rays[k++] = 1;
    if (k == len) break;
    ++rays[k];
  }
  return LatticeMeasure::from_atoms(params, std::move(atoms));
}

}  // namespace

TEST_CASE("one-step map") {
  const auto p = gen::three_rays();
  const FlowRealization up{p, WalkWindow(0, {1}), RayMarks::fixed({3}, 0)};
  const FlowRealization down{p, WalkWindow(0, {-1}), RayMarks::fixed({3}, 0)};
  CHECK(psi_one_step(up, 0, lp(p, 2, 3)) == lp(p, 2, 4));
  CHECK(psi_one_step(down, 0, junction<std::int64_t>(p)).is_junction());
  CHECK(psi_one_step(up, 0, junction<std::int64_t>(p)) == lp(p, 3, 1));
  CHECK(psi_one_step(down, 0, lp(p, 2, 1)).is_junction());
  CHECK_THROWS_AS(psi_one_step(up, 1, junction<std::int64_t>(p)), Error);
}

TEST_CASE("composition on a short walk") {
  const auto p = gen::three_rays();
  const auto walk = WalkWindow::from_values(0, std::vector<std::int64_t>{0, 1, 2, 1, 0, -1});
  const FlowRealization fr{p, walk, RayMarks::fixed({2, 1, 1, 1, 1, 1}, 0)};
  const std::int64_t radii[] = {0, 1, 2, 1, 0, 0};
  for (std::int64_t k = 0; k <= 5; ++k) {
    const auto y = psi_compose(fr, 0, k, junction<std::int64_t>(p));
    CHECK(y.radius == radii[k]);
    if (y.radius > 0) CHECK(y.ray == 2);
  }
  CHECK(psi_compose(fr, 2, 2, lp(p, 1, 7)) == lp(p, 1, 7));
  const auto x = lp(p, 1, 2);
  CHECK(psi_closed_form(fr, 2, 3, x) == lp(p, 1, 1));

  const auto k3 = kernel_closed_form(p, walk, 0, 3, junction<std::int64_t>(p));
  CHECK(k3 == LatticeMeasure::spread(p, 1));
  const auto k4 = kernel_closed_form(p, walk, 0, 4, junction<std::int64_t>(p));
  CHECK(k4.atoms().size() == 1);
  CHECK(k4 == LatticeMeasure::dirac(p, junction<std::int64_t>(p)));
}

TEST_CASE("closed forms match compositions exhaustively") {
  const auto p = gen::three_rays();
  const std::size_t len = 8;
  const auto points = small_points(p, 3);
  const auto eta = RayMarks::random(p, 11, 0, StreamPurpose::flow_marks);
  for (std::uint64_t mask = 0; mask < (1U << len); ++mask) {
    const auto walk = gen::walk_from_mask(mask, len);
    const FlowRealization fr{p, walk, eta};
    for (std::int64_t a = 0; a <= static_cast<std::int64_t>(len); ++a) {
      for (std::int64_t b = a; b <= static_cast<std::int64_t>(len); ++b) {
        CHECK(psi_compose(fr, a, b, junction<std::int64_t>(p)).radius == walk.s_plus(a, b));
        for (const auto& x : points) {
          const auto psi = psi_compose(fr, a, b, x);
          REQUIRE(psi == psi_closed_form(fr, a, b, x));
          const auto k = kernel_compose(p, walk, a, b, x);
          REQUIRE(k == kernel_closed_form(p, walk, a, b, x));
          for (std::int64_t c = a; c <= b; ++c) {
            REQUIRE(psi_compose(fr, c, b, psi_compose(fr, a, c, x)) == psi);
            REQUIRE(push_forward(p, walk, kernel_closed_form(p, walk, a, c, x), c, b) == k);
          }
        }
      }
    }
  }
}

TEST_CASE("random spot checks on a long walk") {
  const auto p = gen::three_rays();
  gen::Rng rng(5);
  const auto walk = gen::walk(rng, 0, 1000);
  const FlowRealization fr{p, walk, RayMarks::random(p, 5, 0, StreamPurpose::flow_marks)};
  std::uniform_int_distribution<std::int64_t> t(0, 1000);
  for (int i = 0; i < 2000; ++i) {
    std::int64_t a = t(rng), c = t(rng), b = t(rng);
    if (a > c) std::swap(a, c);
    if (c > b) std::swap(c, b);
    if (a > c) std::swap(a, c);
    const auto x = gen::lattice_point(rng, p, 30);
    const auto psi = psi_compose(fr, a, b, x);
    CHECK(psi == psi_closed_form(fr, a, b, x));
    CHECK(psi_compose(fr, c, b, psi_compose(fr, a, c, x)) == psi);
    const auto hit = walk.hitting_time(a, x.radius);
    if (hit && b > *hit) CHECK(psi == psi_compose(fr, a, b, junction<std::int64_t>(p)));
    // Two starts whose minima over the window agree end on the same ray.
    const auto o = junction<std::int64_t>(p);
    if (a < c && c < b && walk.window_min(a, b) + walk.value(a) == walk.window_min(c, b) + walk.value(c) && walk.s_plus(a, b) > 0)
      CHECK(psi_compose(fr, a, b, o).ray == psi_compose(fr, c, b, o).ray);
  }
}

TEST_CASE("kernel mass") {
  const auto p = gen::three_rays();
  const auto walk = WalkWindow::from_values(0, std::vector<std::int64_t>{0, 1, 0, -1, 0, 1, 2});
  LatticeMeasure m = LatticeMeasure::dirac(p, junction<std::int64_t>(p));
  for (std::int64_t k = 0; k < 6; ++k) {
    m = push_forward(p, walk, m, k, k + 1);
    Rational total(0);
    for (const auto& [x, w] : m.atoms()) total += w;
    CHECK(total == Rational(1));
  }
}

TEST_CASE("kernel is the conditional law of the map") {
  const auto p = gen::three_rays();
  const auto points = small_points(p, 2);
  for (std::uint64_t mask = 0; mask < (1U << 7); ++mask) {
    const auto walk = gen::walk_from_mask(mask, 7);
    for (std::int64_t a = 0; a <= 7; a += 2) {
      for (const auto& x : points) {
        const auto law = conditional_law_by_enumeration(p, walk, a, 7, x);
        REQUIRE(law == literal_law(p, walk, a, 7, x));
        CHECK(law == kernel_closed_form(p, walk, a, 7, x));
      }
    }
  }
  gen::Rng rng(3);
  for (int i = 0; i < 20; ++i) {
    const auto walk = gen::walk(rng, 0, 16);
    CHECK(kernel_is_conditional_law(p, walk, 0, 16, junction<std::int64_t>(p)));
    CHECK(kernel_is_conditional_law(p, walk, 0, 16, lp(p, 2, 20)));
  }
  const auto walk = gen::walk(rng, 0, 20);
  try {
    kernel_is_conditional_law(p, walk, 0, 17, junction<std::int64_t>(p));
    CHECK(false);
  } catch (const Error& e) {
    CHECK(e.code() == Errc::window_too_large);
  }
}

TEST_CASE("kernel CSV") {
  const auto p = gen::three_rays();
  std::ostringstream os;
  write_kernel_csv(os, 0, 3, LatticeMeasure::spread(p, 1));
  CHECK(os.str() == "p,n,ray,radius,weight_num,weight_den\n0,3,1,1,1,2\n0,3,2,1,1,3\n0,3,3,1,1,6\n");
}
