#include "walshflow/stats.hpp"

#include <algorithm>
#include <array>
#include <cmath>

#include "walshflow/parallel.hpp"

namespace walshflow {
namespace {

std::size_t level_index(double level) {
  for (std::size_t i = 0; i < std::size(kLevels); ++i) {
    if (std::abs(level - kLevels[i]) < 1e-12) return i;
  }
  throw Error(Errc::invalid_params, "no tabulated critical value at level " + std::to_string(level));
}

// Rows: dof 1..12; columns follow kLevels.
constexpr std::array<std::array<double, 6>, 12> kChiSquare = {{
    {6.6349, 7.8794, 8.6154, 9.1406, 9.5495, 10.8276},
    {9.2103, 10.5966, 11.4076, 11.9829, 12.4292, 13.8155},
    {11.3449, 12.8382, 13.7064, 14.3203, 14.7955, 16.2662},
    {13.2767, 14.8603, 15.7771, 16.4239, 16.9238, 18.4668},
    {15.0863, 16.7496, 17.7096, 18.3856, 18.9074, 20.5150},
    {16.8119, 18.5476, 19.5467, 20.2494, 20.7912, 22.4577},
    {18.4753, 20.2777, 21.3131, 22.0404, 22.6007, 24.3219},
    {20.0902, 21.9550, 23.0242, 23.7745, 24.3521, 26.1245},
    {21.6660, 23.5894, 24.6905, 25.4625, 26.0564, 27.8772},
    {23.2093, 25.1882, 26.3196, 27.1122, 27.7216, 29.5883},
    {24.7250, 26.7568, 27.9171, 28.7293, 29.3536, 31.2641},
    {26.2170, 28.2995, 29.4874, 30.3185, 30.9570, 32.9095},
}};

// Kolmogorov distribution upper quantiles.
constexpr std::array<double, 6> kKolmogorov = {1.6276, 1.7308, 1.7884, 1.8282, 1.8585, 1.9495};

}  // namespace

double ks_statistic(std::span<const double> sorted, const std::function<double(double)>& cdf) {
  if (sorted.size() < 100) throw Error(Errc::too_few_samples, "KS needs at least 100 samples");
  if (!std::is_sorted(sorted.begin(), sorted.end())) throw Error(Errc::invalid_params, "KS samples must be sorted");
  const auto m = static_cast<double>(sorted.size());
  double d = 0.0;
  for (std::size_t i = 0; i < sorted.size(); ++i) {
    const double f = cdf(sorted[i]);
    d = std::max({d, static_cast<double>(i + 1) / m - f, f - static_cast<double>(i) / m});
  }
  return d;
}

double ks_critical(std::size_t m, double level) {
  return kKolmogorov[level_index(level)] / std::sqrt(static_cast<double>(m));
}

ChiSquare chi_square(std::span<const std::int64_t> observed, std::span<const double> probabilities) {
  if (observed.size() != probabilities.size() || observed.size() < 2) {
    throw Error(Errc::invalid_params, "chi-square needs matching observed/expected cells");
  }
  std::int64_t total = 0;
  for (const auto o : observed) total += o;
  ChiSquare out;
  out.dof = static_cast<int>(observed.size()) - 1;
  for (std::size_t i = 0; i < observed.size(); ++i) {
    const double expected = probabilities[i] * static_cast<double>(total);
    if (expected < 5.0) throw Error(Errc::sparse_cells, "expected count below 5 in cell " + std::to_string(i));
    const double diff = static_cast<double>(observed[i]) - expected;
    out.statistic += diff * diff / expected;
  }
  return out;
}

double chi_square_critical(int dof, double level) {
  if (dof < 1 || dof > static_cast<int>(kChiSquare.size())) {
    throw Error(Errc::invalid_params, "no tabulated chi-square value for dof " + std::to_string(dof));
  }
  return kChiSquare[static_cast<std::size_t>(dof - 1)][level_index(level)];
}

double half_normal_cdf(double r) { return r <= 0.0 ? 0.0 : std::erf(r / std::sqrt(2.0)); }

nlohmann::json to_json(const TestOutcome& t) {
  return {{"name", t.name},   {"statistic", t.statistic}, {"critical", t.critical},
          {"level", t.level}, {"samples", t.samples},     {"passed", t.passed}};
}

MarginalReport walsh_marginal_check(const RayParams& params, ChainKind kind, std::int64_t n, std::int64_t replicas,
                                    std::uint64_t seed, double level, int workers) {
  if (n < 1 || replicas < 1) throw Error(Errc::invalid_params, "marginal check needs n, replicas >= 1");
  std::vector<LatticePoint> ends(static_cast<std::size_t>(replicas));
  parallel_for(replicas, workers, [&](std::int64_t r) {
    ends[static_cast<std::size_t>(r)] =
        simulate_chain(params, kind, n, seed, static_cast<std::uint64_t>(r)).positions.back();
  });

  std::vector<double> radial;
  radial.reserve(ends.size());
  std::vector<std::int64_t> rays(static_cast<std::size_t>(params.rays()), 0);
  for (std::size_t r = 0; r < ends.size(); ++r) {
    const CounterRng jitter(seed, r, StreamPurpose::auxiliary);
    const double u = jitter.uniform(0);
    const auto k = static_cast<double>(ends[r].radius);
    double cell = 0.0;
    if (kind == ChainKind::lazy) {
      cell = k + u;
    } else {
      cell = k == 0.0 ? u : k - 1.0 + 2.0 * u;
    }
    radial.push_back(diffusive(cell, n));
    if (!ends[r].is_junction()) ++rays[static_cast<std::size_t>(ends[r].ray - 1)];
  }
  std::sort(radial.begin(), radial.end());

  const std::string tag = kind == ChainKind::q ? "chain_q" : "chain_lazy";
  MarginalReport rep;
  rep.radial.name = tag + ".radial_ks";
  rep.radial.statistic = ks_statistic(radial, half_normal_cdf);
  rep.radial.critical = ks_critical(radial.size(), level);
  rep.radial.level = level;
  rep.radial.samples = static_cast<std::int64_t>(radial.size());
  rep.radial.passed = rep.radial.statistic < rep.radial.critical;

  std::vector<double> alpha;
  for (int i = 1; i <= params.rays(); ++i) alpha.push_back(params.alpha_value(i));
  rep.rays.name = tag + ".ray_chi_square";
  rep.rays.level = level;
  for (const auto c : rays) rep.rays.samples += c;
  if (params.rays() == 1) {
    rep.rays.passed = true;
  } else {
    const auto chi = chi_square(rays, alpha);
    rep.rays.statistic = chi.statistic;
    rep.rays.critical = chi_square_critical(chi.dof, level);
    rep.rays.passed = chi.statistic < rep.rays.critical;
  }
  return rep;
}

}  // namespace walshflow
