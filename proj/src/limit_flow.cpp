#include "walshflow/limit_flow.hpp"

#include <algorithm>
#include <cmath>
#include <limits>

#include "walshflow/beta.hpp"
#include "walshflow/parallel.hpp"

namespace walshflow {
namespace {

constexpr double kSnap = 1e-9;

double snap(double u) {
  const double r = std::round(u);
  return std::abs(u - r) < kSnap ? r : u;
}

// Kernels here are Diracs or alpha-spreads; two spreads with the same alpha
// are as far apart as two Diracs on one ray at their radii.
double kernel_beta(const GraphMeasure& a, const GraphMeasure& b) {
  if (a.size() == 1 && b.size() == 1) return beta_dirac_pair(a.atoms()[0].first, b.atoms()[0].first);
  if (a.size() > 1 && b.size() > 1) {
    return beta_dirac_pair(GraphPoint{1, a.atoms()[0].first.radius}, GraphPoint{1, b.atoms()[0].first.radius});
  }
  return beta_distance(a, b);
}

}  // namespace

std::int64_t trunc_floor(double u) {
  return u >= 0 ? static_cast<std::int64_t>(std::floor(u)) : -static_cast<std::int64_t>(std::floor(-u));
}

ContinuousPath::ContinuousPath(WalkWindow walk, std::int64_t n) : walk_(std::move(walk)), n_(n) {
  if (n < 1) throw Error(Errc::invalid_params, "scale n must be >= 1");
}

double ContinuousPath::start_time() const { return static_cast<double>(walk_.first()) / static_cast<double>(n_); }
double ContinuousPath::end_time() const { return static_cast<double>(walk_.last()) / static_cast<double>(n_); }

double ContinuousPath::lattice_time(double t) const {
  const double u = snap(t * static_cast<double>(n_));
  if (u < static_cast<double>(walk_.first()) || u > static_cast<double>(walk_.last())) {
    throw Error(Errc::out_of_domain, "time outside the path domain");
  }
  return u;
}

double ContinuousPath::lattice_radius(double r) const { return snap(r * std::sqrt(static_cast<double>(n_))); }

double ContinuousPath::lattice_value(double u) const {
  const auto k = static_cast<std::int64_t>(std::floor(u));
  const double base = static_cast<double>(walk_.value(k));
  if (k == walk_.last()) return base;
  const double frac = u - static_cast<double>(k);
  return frac == 0.0 ? base : base + frac * walk_.increment(k + 1);
}

double ContinuousPath::lattice_increment(double us, double ut) const { return lattice_value(ut) - lattice_value(us); }

double ContinuousPath::lattice_inf(double us, double ut) const {
  const double v0 = lattice_value(us);
  double m = std::min(v0, lattice_value(ut));
  const auto c = static_cast<std::int64_t>(std::ceil(us));
  const auto f = static_cast<std::int64_t>(std::floor(ut));
  if (c <= f) m = std::min(m, static_cast<double>(walk_.value(c) + walk_.window_min(c, f)));
  return m - v0;
}

std::optional<double> ContinuousPath::lattice_hit(double us, double depth) const {
  if (depth <= 0.0) return us;
  const double v0 = lattice_value(us);
  const double level = v0 - depth;
  const auto c = static_cast<std::int64_t>(std::ceil(us));
  auto solve = [&](double u0, double a, double u1, double b) { return u0 + (a - level) * (u1 - u0) / (a - b); };
  if (static_cast<double>(c) != us && static_cast<double>(walk_.value(c)) <= level) {
    return solve(us, v0, static_cast<double>(c), static_cast<double>(walk_.value(c)));
  }
  const auto sc = walk_.value(c);
  if (static_cast<double>(sc + walk_.window_min(c, walk_.last())) > level) return std::nullopt;
  std::int64_t lo = c;
  std::int64_t hi = walk_.last();
  while (lo < hi) {
    const std::int64_t mid = lo + (hi - lo) / 2;
    if (static_cast<double>(sc + walk_.window_min(c, mid)) <= level) {
      hi = mid;
    } else {
      lo = mid + 1;
    }
  }
  if (lo == c) return static_cast<double>(c);
  const double a = static_cast<double>(walk_.value(lo - 1));
  const double b = static_cast<double>(walk_.value(lo));
  if (b == level) return static_cast<double>(lo);
  return solve(static_cast<double>(lo - 1), a, static_cast<double>(lo), b);
}

std::optional<std::int64_t> ContinuousPath::lattice_argmin(double us, double ut) const {
  const auto c = static_cast<std::int64_t>(std::ceil(us));
  const auto f = static_cast<std::int64_t>(std::floor(ut));
  if (c > f) return std::nullopt;
  const std::int64_t k = walk_.last_argmin(c, f);
  const double sk = static_cast<double>(walk_.value(k));
  if (sk <= std::min(lattice_value(us), lattice_value(ut))) return k;
  return std::nullopt;
}

double ContinuousPath::value(double t) const { return diffusive(lattice_value(lattice_time(t)), n_); }

double ContinuousPath::increment(double s, double t) const {
  return diffusive(lattice_increment(lattice_time(s), lattice_time(t)), n_);
}

double ContinuousPath::reflected(double s, double t) const {
  const double us = lattice_time(s);
  const double ut = lattice_time(t);
  return diffusive(lattice_increment(us, ut) - lattice_inf(us, ut), n_);
}

GraphPath::GraphPath(ChainPath chain, std::int64_t n) : chain_(std::move(chain)), n_(n) {
  if (n < 1) throw Error(Errc::invalid_params, "scale n must be >= 1");
  if (chain_.positions.empty()) throw Error(Errc::empty_window, "empty chain path");
}

GraphPoint GraphPath::at(double t) const {
  const double u = snap(t * static_cast<double>(n_));
  const auto last = static_cast<double>(chain_.positions.size() - 1);
  if (u < 0.0 || u > last) throw Error(Errc::out_of_domain, "time outside the chain path");
  const auto k = static_cast<std::size_t>(std::floor(u));
  const auto& a = chain_.positions[k];
  if (static_cast<double>(k) == u) return diffusive(a, n_);
  const auto& b = chain_.positions[k + 1];
  const double frac = u - static_cast<double>(k);
  const double r = static_cast<double>(a.radius) + frac * static_cast<double>(b.radius - a.radius);
  const int ray = a.is_junction() ? b.ray : a.ray;
  return {ray, diffusive(r, n_)};
}

std::optional<double> tau_hit(const ContinuousPath& w, double s, const GraphPoint& x) {
  const auto h = w.lattice_hit(w.lattice_time(s), w.lattice_radius(x.radius));
  if (!h) return std::nullopt;
  return *h / static_cast<double>(w.scale());
}

GraphMeasure wiener_kernel(const ContinuousPath& w, const RayParams& params, double s, double t, const GraphPoint& x) {
  const double us = w.lattice_time(s);
  const double ut = w.lattice_time(t);
  if (ut < us) throw Error(Errc::out_of_domain, "wiener_kernel needs s <= t");
  const double rho = w.lattice_radius(x.radius);
  const auto hit = w.lattice_hit(us, rho);
  const auto n = w.scale();
  if (!hit || ut <= *hit) {
    const double r = std::max(0.0, rho + w.lattice_increment(us, ut));
    return GraphMeasure::dirac(params, make_point(params, direction(params, x), diffusive(r, n)));
  }
  return GraphMeasure::spread(params, diffusive(w.lattice_increment(us, ut) - w.lattice_inf(us, ut), n));
}

LatticePoint lattice_approximation(const GraphPoint& x, std::int64_t n) {
  const auto r = static_cast<std::int64_t>(std::llround(x.radius * std::sqrt(static_cast<double>(n))));
  return {x.ray, r};
}

LatticePoint to_lattice(const GraphPoint& x_n, std::int64_t n) {
  const double v = x_n.radius * std::sqrt(static_cast<double>(n));
  if (std::abs(v - std::round(v)) > kSnap) {
    throw Error(Errc::lattice_mismatch, "sqrt(n) x_n is not a lattice point");
  }
  return {x_n.ray, static_cast<std::int64_t>(std::llround(v))};
}

double resolution_gap(std::int64_t n, std::uint64_t seed, std::uint64_t stream_id) {
  const auto w = generate_walk(0, 4 * n, seed, stream_id);
  double gap = 0.0;
  for (std::int64_t j = 0; j <= 4 * n; ++j) {
    const std::int64_t k = std::min(j / 4, n - 1);
    const double a = static_cast<double>(w.value(4 * k));
    const double b = static_cast<double>(w.value(4 * k + 4));
    const double coarse = a + static_cast<double>(j - 4 * k) / 4.0 * (b - a);
    gap = std::max(gap, std::abs(static_cast<double>(w.value(j)) - coarse));
  }
  return diffusive(gap, 4 * n);
}

ReplicaResult convergence_replica(const ConvergenceSetup& setup, std::int64_t n, std::int64_t replica) {
  const auto& params = setup.params;
  const double nd = static_cast<double>(n);
  const double us = snap(setup.s * nd);
  const double ue = snap((setup.s + setup.horizon) * nd);
  const std::int64_t p = trunc_floor(us);
  const auto lo = static_cast<std::int64_t>(std::floor(us)) - 1;
  const auto hi = static_cast<std::int64_t>(std::ceil(ue)) + 1;
  const auto stream = static_cast<std::uint64_t>(replica);
  const FlowRealization fr{params, generate_walk(lo, hi, setup.seed, stream),
                           RayMarks::random(params, setup.seed, stream, StreamPurpose::flow_marks)};
  const ContinuousPath path(fr.walk, n);
  const auto& x = setup.x;
  const auto xl = lattice_approximation(x, n);
  const LatticePoint x_lat = make_point(params, xl.ray, xl.radius);
  const double rho = path.lattice_radius(x.radius);
  const auto hit = path.lattice_hit(us, rho);

  ReplicaResult res;
  res.n = n;
  res.replica = replica;

  // phi_{s,t}(x) with W := W^(n); rays of the discrete flow after absorption.
  auto phi = [&](double u) -> GraphPoint {
    if (!hit || u <= *hit) {
      const double r = std::max(0.0, rho + path.lattice_increment(us, u));
      return make_point(params, direction(params, x), diffusive(r, n));
    }
    const double r = path.lattice_increment(us, u) - path.lattice_inf(us, u);
    if (r <= 0.0) return junction<double>(params);
    const auto j = path.lattice_argmin(us, u);
    return {fr.eta(j ? *j : p), diffusive(r, n)};
  };

  std::int64_t cached_k = std::numeric_limits<std::int64_t>::min();
  GraphMeasure k_disc;
  GraphPoint psi_disc;
  auto evaluate = [&](std::int64_t k, double u) {
    if (k != cached_k) {
      k_disc = diffusive(params, kernel_closed_form(params, fr.walk, p, k, x_lat), n);
      psi_disc = diffusive(psi_closed_form(fr, p, k, x_lat), n);
      cached_k = k;
    }
    const auto kw = wiener_kernel(path, params, us / nd, u / nd, x);
    res.sup_beta = std::max(res.sup_beta, kernel_beta(k_disc, kw));
    res.sup_distance = std::max(res.sup_distance, graph_distance(psi_disc, phi(u)));
  };

  std::vector<double> breaks{us, ue};
  for (auto k = static_cast<std::int64_t>(std::ceil(us)); static_cast<double>(k) < ue; ++k) {
    if (static_cast<double>(k) > us) breaks.push_back(static_cast<double>(k));
  }
  if (hit && *hit > us && *hit < ue) breaks.push_back(*hit);
  std::sort(breaks.begin(), breaks.end());
  breaks.erase(std::unique(breaks.begin(), breaks.end()), breaks.end());
  for (std::size_t j = 0; j < breaks.size(); ++j) {
    evaluate(trunc_floor(breaks[j]), breaks[j]);
    if (j + 1 == breaks.size()) break;
    const double a = breaks[j];
    const double b = breaks[j + 1];
    const double mid = 0.5 * (a + b);
    const std::int64_t k = trunc_floor(mid);
    evaluate(k, a);
    evaluate(k, mid);
    evaluate(k, b);
  }

  // Grid self-consistency, started on the grid at p with x := x_n.
  const GraphPoint x_n = diffusive(x_lat, n);
  for (std::int64_t k = p; static_cast<double>(k) <= ue; ++k) {
    const auto disc = diffusive(params, kernel_closed_form(params, fr.walk, p, k, x_lat), n);
    const auto cont = wiener_kernel(path, params, static_cast<double>(p) / nd, static_cast<double>(k) / nd, x_n);
    ++res.grid_points;
    if (!(disc == cont)) ++res.grid_mismatches;
  }

  const auto t_disc = fr.walk.hitting_time(p, x_lat.radius);
  if (t_disc && hit) res.tau_gap = std::abs(static_cast<double>(*t_disc) - *hit) / nd;
  return res;
}

ProfileRow quartiles(std::int64_t n, std::vector<double> values) {
  ProfileRow row;
  row.n = n;
  if (values.empty()) {
    row.median = row.q1 = row.q3 = std::numeric_limits<double>::quiet_NaN();
    return row;
  }
  std::sort(values.begin(), values.end());
  auto q = [&](double f) {
    const double pos = f * static_cast<double>(values.size() - 1);
    const auto i = static_cast<std::size_t>(std::floor(pos));
    const double frac = pos - static_cast<double>(i);
    if (i + 1 >= values.size()) return values.back();
    return values[i] + frac * (values[i + 1] - values[i]);
  };
  row.q1 = q(0.25);
  row.median = q(0.5);
  row.q3 = q(0.75);
  return row;
}

ConvergenceTable convergence_profiles(const ConvergenceSetup& setup, const std::vector<std::int64_t>& n_list,
                                      std::int64_t replicas, int workers) {
  ConvergenceTable table;
  for (const auto n : n_list) {
    std::vector<ReplicaResult> rows(static_cast<std::size_t>(replicas));
    parallel_for(replicas, workers,
                 [&](std::int64_t r) { rows[static_cast<std::size_t>(r)] = convergence_replica(setup, n, r); });
    std::vector<double> beta;
    std::vector<double> dist;
    std::vector<double> tau;
    for (const auto& r : rows) {
      beta.push_back(r.sup_beta);
      dist.push_back(r.sup_distance);
      if (r.tau_gap) tau.push_back(*r.tau_gap);
    }
    table.beta_profile.push_back(quartiles(n, beta));
    table.distance_profile.push_back(quartiles(n, dist));
    table.tau_profile.push_back(quartiles(n, tau));
    table.rows.insert(table.rows.end(), rows.begin(), rows.end());
  }
  return table;
}

void write_beta_csv(std::ostream& os, const ConvergenceTable& t) {
  os << "n,replica,sup_beta\n";
  for (const auto& r : t.rows) os << r.n << "," << r.replica << "," << r.sup_beta << "\n";
}

void write_distance_csv(std::ostream& os, const ConvergenceTable& t) {
  os << "n,replica,sup_distance\n";
  for (const auto& r : t.rows) os << r.n << "," << r.replica << "," << r.sup_distance << "\n";
}

nlohmann::json summary_json(const ConvergenceTable& t) {
  auto profile = [](const std::vector<ProfileRow>& rows) {
    auto arr = nlohmann::json::array();
    for (const auto& r : rows) arr.push_back({{"n", r.n}, {"median", r.median}, {"q1", r.q1}, {"q3", r.q3}});
    return arr;
  };
  std::int64_t points = 0;
  std::int64_t mismatches = 0;
  for (const auto& r : t.rows) {
    points += r.grid_points;
    mismatches += r.grid_mismatches;
  }
  return {{"sup_beta", profile(t.beta_profile)},
          {"sup_distance", profile(t.distance_profile)},
          {"tau_gap", profile(t.tau_profile)},
          {"grid_points", points},
          {"grid_mismatches", mismatches},
          {"coupling", "self-consistency: both sides driven by the same rescaled walk"}};
}

}  // namespace walshflow
