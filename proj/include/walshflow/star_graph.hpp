#pragma once

#include <algorithm>
#include <cmath>
#include <cstdint>
#include <ostream>
#include <type_traits>
#include <utility>
#include <vector>

#include "walshflow/error.hpp"
#include "walshflow/rational.hpp"

namespace walshflow {

// Number of rays N and the exit law alpha of the junction.
class RayParams {
 public:
  // Validates N >= 1, every alpha_i > 0 and sum alpha_i == 1 exactly.
  explicit RayParams(std::vector<Rational> alpha);

  int rays() const { return static_cast<int>(alpha_.size()); }
  const std::vector<Rational>& alpha() const { return alpha_; }
  const Rational& alpha(int ray) const { return alpha_.at(static_cast<std::size_t>(ray - 1)); }
  double alpha_value(int ray) const { return alpha_d_.at(static_cast<std::size_t>(ray - 1)); }

  // Inverse-CDF draw of a ray in [1, N] from u in [0, 1).
  int draw_ray(double u) const;

  bool operator==(const RayParams& other) const { return alpha_ == other.alpha_; }

 private:
  std::vector<Rational> alpha_;
  std::vector<double> alpha_d_;
  std::vector<double> cumulative_;
};

// A point h*e_i of the star graph. Radius 0 is the junction, stored with
// ray == N by convention; all radius-0 points compare equal.
template <class Radius>
struct BasicPoint {
  int ray = 1;
  Radius radius{};

  bool is_junction() const { return radius == Radius{}; }

  friend bool operator==(const BasicPoint& a, const BasicPoint& b) {
    if (a.is_junction() || b.is_junction()) return a.is_junction() && b.is_junction();
    return a.ray == b.ray && a.radius == b.radius;
  }

  // Total order on canonical points: junction first, then by (ray, radius).
  friend bool operator<(const BasicPoint& a, const BasicPoint& b) {
    if (a.is_junction()) return !b.is_junction();
    if (b.is_junction()) return false;
    return std::pair(a.ray, a.radius) < std::pair(b.ray, b.radius);
  }
};

using LatticePoint = BasicPoint<std::int64_t>;
using GraphPoint = BasicPoint<double>;

template <class Radius>
std::ostream& operator<<(std::ostream& os, const BasicPoint<Radius>& p) {
  if (p.is_junction()) return os << "(junction)";
  return os << "(ray " << p.ray << ", " << p.radius << ")";
}

template <class Radius>
BasicPoint<Radius> junction(const RayParams& params) {
  return {params.rays(), Radius{}};
}

// Builds a canonical point; throws invalid_params for a bad ray and
// negative_radius for radius < 0.
template <class Radius>
BasicPoint<Radius> make_point(const RayParams& params, int ray, Radius radius) {
  if (ray < 1 || ray > params.rays()) throw Error(Errc::invalid_params, "ray index out of range");
  if (radius < Radius{}) throw Error(Errc::negative_radius, "radius must be nonnegative");
  if (radius == Radius{}) return junction<Radius>(params);
  return {ray, radius};
}

template <class Radius>
double graph_distance(const BasicPoint<Radius>& x, const BasicPoint<Radius>& y) {
  const double hx = static_cast<double>(x.radius);
  const double hy = static_cast<double>(y.radius);
  if (x.is_junction() || y.is_junction() || x.ray != y.ray) return hx + hy;
  return std::abs(hx - hy);
}

// Unit direction e(x); the junction points along ray N.
template <class Radius>
int direction(const RayParams& params, const BasicPoint<Radius>& x) {
  return x.is_junction() ? params.rays() : x.ray;
}

// x + e(x) * delta without crossing the junction.
template <class Radius>
BasicPoint<Radius> move_along(const RayParams& params, const BasicPoint<Radius>& x, Radius delta) {
  const Radius r = x.radius + delta;
  if (r < Radius{}) throw Error(Errc::negative_radius, "move crosses the junction");
  return make_point(params, direction(params, x), r);
}

inline GraphPoint to_graph_point(const LatticePoint& p, double scale) {
  if (p.is_junction()) return {p.ray, 0.0};
  return {p.ray, static_cast<double>(p.radius) * scale};
}

// Finitely supported probability measure with exact weights. Atoms are kept
// sorted by canonical point with pairwise distinct points.
template <class Radius>
class BasicMeasure {
 public:
  using Point = BasicPoint<Radius>;
  using Atom = std::pair<Point, Rational>;

  BasicMeasure() = default;

  // Merges duplicate points (including all radius-0 points) and checks
  // weights > 0 summing to exactly 1.
  static BasicMeasure from_atoms(const RayParams& params, std::vector<Atom> atoms) {
    for (auto& [p, w] : atoms) {
      if (p.is_junction()) p.ray = params.rays();
    }
    std::sort(atoms.begin(), atoms.end(),
              [](const Atom& a, const Atom& b) { return a.first < b.first; });
    BasicMeasure m;
    Rational total(0);
    for (auto& [p, w] : atoms) {
      if (w <= Rational(0)) throw Error(Errc::invalid_params, "measure weights must be positive");
      total += w;
      if (!m.atoms_.empty() && m.atoms_.back().first == p) {
        m.atoms_.back().second += w;
      } else {
        m.atoms_.emplace_back(p, w);
      }
    }
    if (total != Rational(1)) throw Error(Errc::invalid_params, "measure weights must sum to 1");
    return m;
  }

  static BasicMeasure dirac(const RayParams& params, const Point& p) {
    return from_atoms(params, {{p, Rational(1)}});
  }

  // sum_i alpha_i * delta_{radius e_i}; a single junction atom when radius == 0.
  static BasicMeasure spread(const RayParams& params, Radius radius) {
    std::vector<Atom> atoms;
    atoms.reserve(static_cast<std::size_t>(params.rays()));
    for (int i = 1; i <= params.rays(); ++i) {
      atoms.emplace_back(radius == Radius{} ? junction<Radius>(params) : Point{i, radius},
                         params.alpha(i));
    }
    return from_atoms(params, std::move(atoms));
  }

  const std::vector<Atom>& atoms() const { return atoms_; }
  std::size_t size() const { return atoms_.size(); }

  Rational weight_of(const Point& p) const {
    for (const auto& [q, w] : atoms_) {
      if (q == p) return w;
    }
    return Rational(0);
  }

  friend bool operator==(const BasicMeasure& a, const BasicMeasure& b) { return a.atoms_ == b.atoms_; }

 private:
  std::vector<Atom> atoms_;
};

using LatticeMeasure = BasicMeasure<std::int64_t>;
using GraphMeasure = BasicMeasure<double>;

template <class Radius>
std::ostream& operator<<(std::ostream& os, const BasicMeasure<Radius>& m) {
  os << "{";
  bool first = true;
  for (const auto& [p, w] : m.atoms()) {
    os << (first ? "" : ", ") << to_string(w) << "*" << p;
    first = false;
  }
  return os << "}";
}

// Radii multiplied by `scale`; weights unchanged.
GraphMeasure rescale(const RayParams& params, const LatticeMeasure& m, double scale);

// Diffusive scaling r / sqrt(n). Every lattice-to-continuum conversion goes
// through here so grid-time values agree bit for bit.
inline double diffusive(double r, std::int64_t n) { return r / std::sqrt(static_cast<double>(n)); }

inline GraphPoint diffusive(const LatticePoint& p, std::int64_t n) {
  if (p.is_junction()) return {p.ray, 0.0};
  return {p.ray, diffusive(static_cast<double>(p.radius), n)};
}

GraphMeasure diffusive(const RayParams& params, const LatticeMeasure& m, std::int64_t n);

}  // namespace walshflow
