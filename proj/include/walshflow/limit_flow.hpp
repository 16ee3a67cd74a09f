#pragma once

#include <cstdint>
#include <optional>
#include <ostream>
#include <vector>

#include "json.hpp"
#include "walshflow/flows.hpp"
#include "walshflow/star_graph.hpp"
#include "walshflow/walk.hpp"
#include "walshflow/walsh_chain.hpp"

namespace walshflow {

// Floor with truncation toward zero for negative arguments.
std::int64_t trunc_floor(double u);

// W(t) = S(nt) / sqrt(n) with S linearly interpolated between integers.
// Internally everything is kept in lattice units (time u = n t, space
// sqrt(n) W) and converted once, so values at grid times are the rescaled
// integers bit for bit. Times within 1e-9 of the grid are snapped onto it.
class ContinuousPath {
 public:
  ContinuousPath(WalkWindow walk, std::int64_t n);

  std::int64_t scale() const { return n_; }
  const WalkWindow& walk() const { return walk_; }
  double start_time() const;
  double end_time() const;

  // n t (snapped); throws out_of_domain outside the walk window.
  double lattice_time(double t) const;
  // sqrt(n) |x| snapped onto the integers when within 1e-9.
  double lattice_radius(double r) const;

  // Lattice-unit quantities between lattice times us <= ut.
  double lattice_value(double u) const;
  double lattice_increment(double us, double ut) const;
  double lattice_inf(double us, double ut) const;  // inf_{v in [us, ut]} S(v) - S(us)
  // First v >= us with S(v) - S(us) = -depth.
  std::optional<double> lattice_hit(double us, double depth) const;
  // Last index k in [ceil(us), floor(ut)] where S_k attains the infimum of
  // S over [us, ut]; empty when only the non-grid ends attain it.
  std::optional<std::int64_t> lattice_argmin(double us, double ut) const;

  double value(double t) const;
  double increment(double s, double t) const;       // W_{s,t}
  double reflected(double s, double t) const;       // W+_{s,t}

 private:
  WalkWindow walk_;
  std::int64_t n_;
};

// Linear interpolation of the path of a chain, then diffusive scaling.
// Consecutive chain points share a ray or one of them is the junction, so
// the interpolation stays on the graph.
class GraphPath {
 public:
  GraphPath(ChainPath chain, std::int64_t n);
  GraphPoint at(double t) const;
  std::int64_t scale() const { return n_; }

 private:
  ChainPath chain_;
  std::int64_t n_;
};

// tau_{s,x} = inf{r >= s : W_{s,r} = -|x|}; empty when not reached.
std::optional<double> tau_hit(const ContinuousPath& w, double s, const GraphPoint& x);

// K^W_{s,t}(x): Dirac at x + e(x) W_{s,t} for t <= tau_{s,x}, the
// alpha-spread at radius W+_{s,t} afterwards.
GraphMeasure wiener_kernel(const ContinuousPath& w, const RayParams& params, double s, double t, const GraphPoint& x);

// Nearest point of the 1/sqrt(n) lattice on the ray of x, in lattice units.
LatticePoint lattice_approximation(const GraphPoint& x, std::int64_t n);

// sqrt(n) x_n as a lattice point; lattice_mismatch when it is not one.
LatticePoint to_lattice(const GraphPoint& x_n, std::int64_t n);

// sup_t |W^(4n) - (its linear interpolation on the 1/n grid)| over [0, 1]
// for the walk of the given stream: the two resolutions of one prefix.
double resolution_gap(std::int64_t n, std::uint64_t seed, std::uint64_t stream_id);

struct ConvergenceSetup {
  RayParams params;
  double s = 0.0;
  double horizon = 1.0;  // T
  GraphPoint x;
  std::uint64_t seed = 1;
};

struct ReplicaResult {
  std::int64_t n = 0;
  std::int64_t replica = 0;
  double sup_beta = 0.0;
  double sup_distance = 0.0;
  // |T_{[ns], sqrt(n) x_n} / n - tau_{s,x}|, when both are reached in the window.
  std::optional<double> tau_gap;
  // Grid times where the rescaled discrete kernel and K^W differ (x := x_n).
  std::int64_t grid_points = 0;
  std::int64_t grid_mismatches = 0;
};

// One replica at scale n: the walk of stream `replica` on the window that
// covers [s, s + T], marks eta from the flow_marks stream. The sup over t
// runs over grid times, the ends of every grid interval (with the discrete
// index of its interior), interval midpoints and the hitting time of x.
ReplicaResult convergence_replica(const ConvergenceSetup& setup, std::int64_t n, std::int64_t replica);

struct ProfileRow {
  std::int64_t n = 0;
  double median = 0.0;
  double q1 = 0.0;
  double q3 = 0.0;
};

struct ConvergenceTable {
  std::vector<ReplicaResult> rows;  // ordered by (n, replica)
  std::vector<ProfileRow> beta_profile;
  std::vector<ProfileRow> distance_profile;
  std::vector<ProfileRow> tau_profile;
};

ConvergenceTable convergence_profiles(const ConvergenceSetup& setup, const std::vector<std::int64_t>& n_list,
                                      std::int64_t replicas, int workers = 1);

// Both CSV views: "n,replica,sup_beta" and "n,replica,sup_distance".
void write_beta_csv(std::ostream& os, const ConvergenceTable& t);
void write_distance_csv(std::ostream& os, const ConvergenceTable& t);
nlohmann::json summary_json(const ConvergenceTable& t);

// Median and quartiles (linear interpolation between order statistics).
ProfileRow quartiles(std::int64_t n, std::vector<double> values);

}  // namespace walshflow
