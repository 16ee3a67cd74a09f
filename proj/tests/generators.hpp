#pragma once

#include <cstdint>
#include <random>
#include <vector>

#include "walshflow/star_graph.hpp"
#include "walshflow/walk.hpp"

namespace gen {

using Rng = std::mt19937_64;

inline walshflow::RayParams three_rays() {
  using walshflow::make_rational;
  return walshflow::RayParams({make_rational(1, 2), make_rational(1, 3), make_rational(1, 6)});
}

inline walshflow::RayParams random_params(Rng& rng, int max_rays = 4) {
  std::uniform_int_distribution<int> rays(1, max_rays);
  std::uniform_int_distribution<int> w(1, 6);
  const int n = rays(rng);
  std::vector<int> raw(static_cast<std::size_t>(n));
  int total = 0;
  for (auto& r : raw) total += (r = w(rng));
  std::vector<walshflow::Rational> alpha;
  for (const int r : raw) alpha.push_back(walshflow::make_rational(r, total));
  return walshflow::RayParams(std::move(alpha));
}

inline walshflow::GraphPoint graph_point(Rng& rng, const walshflow::RayParams& p, double max_radius) {
  std::uniform_int_distribution<int> ray(1, p.rays());
  std::uniform_real_distribution<double> r(0.0, max_radius);
  std::bernoulli_distribution at_junction(0.1);
  if (at_junction(rng)) return walshflow::junction<double>(p);
  return walshflow::make_point(p, ray(rng), r(rng));
}

inline walshflow::LatticePoint lattice_point(Rng& rng, const walshflow::RayParams& p, std::int64_t max_radius) {
  std::uniform_int_distribution<int> ray(1, p.rays());
  std::uniform_int_distribution<std::int64_t> r(0, max_radius);
  return walshflow::make_point(p, ray(rng), r(rng));
}

// Measure with `atoms` points (possibly merged) and weights k/12.
inline walshflow::GraphMeasure graph_measure(Rng& rng, const walshflow::RayParams& p, int atoms,
                                             double max_radius) {
  std::vector<int> raw(static_cast<std::size_t>(atoms));
  std::uniform_int_distribution<int> w(1, 5);
  int total = 0;
  for (auto& r : raw) total += (r = w(rng));
  std::vector<walshflow::GraphMeasure::Atom> out;
  for (const int r : raw) out.emplace_back(graph_point(rng, p, max_radius), walshflow::make_rational(r, total));
  return walshflow::GraphMeasure::from_atoms(p, std::move(out));
}

inline std::vector<std::int8_t> signs(Rng& rng, std::size_t n) {
  std::bernoulli_distribution up(0.5);
  std::vector<std::int8_t> out(n);
  for (auto& x : out) x = up(rng) ? 1 : -1;
  return out;
}

inline walshflow::WalkWindow walk(Rng& rng, std::int64_t first, std::size_t steps) {
  return walshflow::WalkWindow(first, signs(rng, steps));
}

// The walk whose k-th increment is bit k of `mask` (1 = up).
inline walshflow::WalkWindow walk_from_mask(std::uint64_t mask, std::size_t steps, std::int64_t first = 0) {
  std::vector<std::int8_t> inc(steps);
  for (std::size_t k = 0; k < steps; ++k) inc[k] = ((mask >> k) & 1U) ? 1 : -1;
  return walshflow::WalkWindow(first, std::move(inc));
}

}  // namespace gen
