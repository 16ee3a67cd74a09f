#pragma once

#include <cstdint>
#include <functional>
#include <span>
#include <string>
#include <vector>

#include "json.hpp"
#include "walshflow/star_graph.hpp"
#include "walshflow/walsh_chain.hpp"

namespace walshflow {

// Significance levels with tabulated critical values.
inline constexpr double kLevels[] = {0.01, 0.005, 0.01 / 3, 0.0025, 0.002, 0.001};

// Two-sided sup |F_m - F| over sorted samples; needs at least 100 samples.
double ks_statistic(std::span<const double> sorted, const std::function<double(double)>& cdf);

// Asymptotic one-sample KS critical value c(level) / sqrt(m).
double ks_critical(std::size_t m, double level);

struct ChiSquare {
  double statistic = 0.0;
  int dof = 0;
};

// Pearson goodness of fit; every expected count must be at least 5.
ChiSquare chi_square(std::span<const std::int64_t> observed, std::span<const double> probabilities);

// Upper critical value of chi-square with dof in [1, 12].
double chi_square_critical(int dof, double level);

// P(|Z| <= r) for a standard normal Z.
double half_normal_cdf(double r);

struct TestOutcome {
  std::string name;
  double statistic = 0.0;
  double critical = 0.0;
  double level = 0.0;
  std::int64_t samples = 0;
  bool passed = false;
};

nlohmann::json to_json(const TestOutcome& t);

struct MarginalReport {
  TestOutcome radial;  // KS of |M^n_1| against the half-normal law
  TestOutcome rays;    // chi-square of the ray at time 1 given |M^n_1| > 0
};

// Marginal of the chain at t = 1 after n steps, over `replicas` independent
// runs (stream = replica id). Lattice radii are spread uniformly over their
// cell before the KS test: cells [k-1, k+1) (and [0, 1) at 0) for chain q,
// whose radius has the parity of n, and [k, k+1) for the lazy chain.
MarginalReport walsh_marginal_check(const RayParams& params, ChainKind kind, std::int64_t n, std::int64_t replicas,
                                    std::uint64_t seed, double level, int workers = 1);

}  // namespace walshflow
