#include <algorithm>
#include <cmath>

#include "doctest.h"
#include "walshflow/rng.hpp"
#include "walshflow/stats.hpp"

using namespace walshflow;

TEST_CASE("KS statistic") {
  const CounterRng rng(1, 0, StreamPurpose::auxiliary);
  std::vector<double> u(10000);
  for (std::size_t i = 0; i < u.size(); ++i) u[i] = rng.uniform(i);
  std::sort(u.begin(), u.end());
  const auto uniform_cdf = [](double x) { return std::clamp(x, 0.0, 1.0); };
  CHECK(ks_statistic(u, uniform_cdf) < 1.63 / std::sqrt(10000.0));
  CHECK(ks_critical(10000, 0.01) == doctest::Approx(0.016276));
  const std::vector<double> c(200, 0.5);
  CHECK(ks_statistic(c, uniform_cdf) >= 0.5);
  const std::vector<double> few(99, 0.5);
  try {
    ks_statistic(few, uniform_cdf);
    CHECK(false);
  } catch (const Error& e) {
    CHECK(e.code() == Errc::too_few_samples);
  }
}

TEST_CASE("half-normal CDF") {
  CHECK(half_normal_cdf(0.0) == 0.0);
  CHECK(half_normal_cdf(1.0) == doctest::Approx(0.682689492));
  CHECK(half_normal_cdf(1.959963985) == doctest::Approx(0.95));
}

TEST_CASE("chi-square") {
  const std::vector<std::int64_t> exact = {50, 30, 20};
  const std::vector<double> probs = {0.5, 0.3, 0.2};
  const auto r = chi_square(exact, probs);
  CHECK(r.statistic == 0.0);
  CHECK(r.dof == 2);
  const std::vector<std::int64_t> sparse = {8, 1, 1};
  const std::vector<double> skewed = {0.96, 0.02, 0.02};
  try {
    chi_square(sparse, skewed);
    CHECK(false);
  } catch (const Error& e) {
    CHECK(e.code() == Errc::sparse_cells);
  }
  CHECK(chi_square_critical(1, 0.01) == doctest::Approx(6.635).epsilon(1e-3));
  CHECK(chi_square_critical(2, 0.01) == doctest::Approx(9.210).epsilon(1e-3));
}

TEST_CASE("chi-square false alarm rate") {
  // Multinomial draws from the tested law: p > 0.01 in at least 98 of 100 runs.
  const std::vector<double> probs = {0.5, 1.0 / 3, 1.0 / 6};
  int passed = 0;
  for (std::uint64_t rep = 0; rep < 100; ++rep) {
    const CounterRng rng(2, rep, StreamPurpose::auxiliary);
    std::vector<std::int64_t> counts(3, 0);
    for (std::uint64_t i = 0; i < 100000; ++i) {
      const double u = rng.uniform(i);
      ++counts[u < probs[0] ? 0 : (u < probs[0] + probs[1] ? 1 : 2)];
    }
    passed += chi_square(counts, probs).statistic < chi_square_critical(2, 0.01);
  }
  CHECK(passed >= 98);
}

TEST_CASE("marginal check on two symmetric rays") {
  const RayParams p({make_rational(1, 2), make_rational(1, 2)});
  const auto a = walsh_marginal_check(p, ChainKind::q, 1000, 2000, 4, 0.01);
  CHECK(a.radial.passed);
  CHECK(a.rays.passed);
  CHECK(a.radial.samples == 2000);
  const auto b = walsh_marginal_check(p, ChainKind::q, 1000, 2000, 4, 0.01);
  CHECK(a.radial.statistic == b.radial.statistic);
  CHECK(to_json(a.rays)["passed"] == true);
}
