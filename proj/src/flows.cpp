#include "walshflow/flows.hpp"

#include <map>

namespace walshflow {
namespace {

void check_window(const WalkWindow& w, std::int64_t p, std::int64_t n) {
  if (!w.contains(p) || !w.contains(n) || p > n) throw Error(Errc::out_of_window, "flow window outside the walk");
}

}  // namespace

LatticePoint psi_one_step(const FlowRealization& fr, std::int64_t p, const LatticePoint& x) {
  check_window(fr.walk, p, p + 1);
  const int step = fr.walk.increment(p + 1);
  if (!x.is_junction()) return make_point(fr.params, x.ray, x.radius + step);
  if (step > 0) return {fr.eta(p), 1};
  return x;
}

LatticePoint psi_compose(const FlowRealization& fr, std::int64_t p, std::int64_t n, const LatticePoint& x) {
  check_window(fr.walk, p, n);
  LatticePoint y = make_point(fr.params, x.ray, x.radius);
  for (std::int64_t k = p; k < n; ++k) y = psi_one_step(fr, k, y);
  return y;
}

LatticePoint psi_closed_form(const FlowRealization& fr, std::int64_t p, std::int64_t n, const LatticePoint& x) {
  check_window(fr.walk, p, n);
  const auto hit = fr.walk.hitting_time(p, x.radius);
  if (!hit || n <= *hit) return move_along(fr.params, x, fr.walk.diff(p, n));
  const std::int64_t r = fr.walk.s_plus(p, n);
  if (r == 0) return junction<std::int64_t>(fr.params);
  return {fr.eta(fr.walk.last_argmin(p, n)), r};
}

LatticeMeasure kernel_one_step(const RayParams& params, const WalkWindow& walk, std::int64_t p,
                               const LatticePoint& x) {
  check_window(walk, p, p + 1);
  const int step = walk.increment(p + 1);
  if (!x.is_junction()) return LatticeMeasure::dirac(params, make_point(params, x.ray, x.radius + step));
  return LatticeMeasure::spread(params, step > 0 ? 1 : 0);
}

LatticeMeasure push_forward(const RayParams& params, const WalkWindow& walk, const LatticeMeasure& m,
                            std::int64_t r, std::int64_t q) {
  std::vector<LatticeMeasure::Atom> atoms;
  for (const auto& [y, w] : m.atoms()) {
    const auto k = kernel_closed_form(params, walk, r, q, y);
    for (const auto& [z, v] : k.atoms()) atoms.emplace_back(z, w * v);
  }
  return LatticeMeasure::from_atoms(params, std::move(atoms));
}

LatticeMeasure kernel_compose(const RayParams& params, const WalkWindow& walk, std::int64_t p, std::int64_t n,
                              const LatticePoint& x) {
  check_window(walk, p, n);
  auto m = LatticeMeasure::dirac(params, x);
  for (std::int64_t k = p; k < n; ++k) {
    std::vector<LatticeMeasure::Atom> atoms;
    for (const auto& [y, w] : m.atoms()) {
      const auto step = kernel_one_step(params, walk, k, y);
      for (const auto& [z, v] : step.atoms()) atoms.emplace_back(z, w * v);
    }
    m = LatticeMeasure::from_atoms(params, std::move(atoms));
  }
  return m;
}

LatticeMeasure kernel_closed_form(const RayParams& params, const WalkWindow& walk, std::int64_t p, std::int64_t n,
                                  const LatticePoint& x) {
  check_window(walk, p, n);
  const auto hit = walk.hitting_time(p, x.radius);
  if (!hit || n <= *hit) return LatticeMeasure::dirac(params, move_along(params, x, walk.diff(p, n)));
  return LatticeMeasure::spread(params, walk.s_plus(p, n));
}

LatticeMeasure conditional_law_by_enumeration(const RayParams& params, const WalkWindow& walk, std::int64_t p,
                                              std::int64_t n, const LatticePoint& x) {
  check_window(walk, p, n);
  if (n - p > kMaxEnumerationWindow) {
    throw Error(Errc::window_too_large, "enumeration window of " + std::to_string(n - p) + " steps");
  }
  std::map<LatticePoint, Rational> law;
  // Depth-first over time; only eta_k read at a junction departure branches.
  auto visit = [&](auto&& self, std::int64_t k, const LatticePoint& y, const Rational& w) -> void {
    if (k == n) {
      auto [it, fresh] = law.try_emplace(y, w);
      if (!fresh) it->second += w;
      return;
    }
    const int step = walk.increment(k + 1);
    if (!y.is_junction()) {
      self(self, k + 1, make_point(params, y.ray, y.radius + step), w);
    } else if (step < 0) {
      self(self, k + 1, y, w);
    } else {
      for (int i = 1; i <= params.rays(); ++i) self(self, k + 1, LatticePoint{i, 1}, w * params.alpha(i));
    }
  };
  visit(visit, p, make_point(params, x.ray, x.radius), Rational(1));
  std::vector<LatticeMeasure::Atom> atoms(law.begin(), law.end());
  return LatticeMeasure::from_atoms(params, std::move(atoms));
}

bool kernel_is_conditional_law(const RayParams& params, const WalkWindow& walk, std::int64_t p, std::int64_t n,
                               const LatticePoint& x) {
  return conditional_law_by_enumeration(params, walk, p, n, x) == kernel_closed_form(params, walk, p, n, x);
}

void write_kernel_csv(std::ostream& os, std::int64_t p, std::int64_t n, const LatticeMeasure& m, bool header) {
  if (header) os << "p,n,ray,radius,weight_num,weight_den\n";
  for (const auto& [pt, w] : m.atoms()) {
    os << p << "," << n << "," << pt.ray << "," << pt.radius << "," << numerator(w) << "," << denominator(w) << "\n";
  }
}

}  // namespace walshflow
