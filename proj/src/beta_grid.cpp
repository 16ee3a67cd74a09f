#include <algorithm>
#include <cmath>
#include <deque>
#include <limits>
#include <map>
#include <vector>

#include "walshflow/beta.hpp"

namespace walshflow {

double beta_grid_search(const GraphMeasure& p, const GraphMeasure& q, double h, double l_step) {
  std::map<int, std::map<double, double>> rays;
  for (const auto& [pt, w] : p.atoms()) {
    if (!pt.is_junction()) rays[pt.ray][pt.radius] += to_double(w);
  }
  for (const auto& [pt, w] : q.atoms()) {
    if (!pt.is_junction()) rays[pt.ray][pt.radius] -= to_double(w);
  }
  const int half = static_cast<int>(std::lround(1.0 / h));
  const double neg_inf = -std::numeric_limits<double>::infinity();

  auto value_at = [&](double l) {
    const double m = 1.0 - l;
    const int bound = static_cast<int>(std::floor(m / h + 1e-9));
    double total = 0.0;
    for (const auto& [ray, chain] : rays) {
      // dp over g-index j in [-half, half]; start: g = 0 at the junction.
      std::vector<double> dp(2 * half + 1, neg_inf);
      dp[half] = 0.0;
      double prev_r = 0.0;
      for (const auto& [r, mass] : chain) {
        const int w = static_cast<int>(std::floor(l * (r - prev_r) / h + 1e-9));
        std::vector<double> next(2 * half + 1, neg_inf);
        // sliding-window maximum of dp over [j - w, j + w]
        std::deque<int> dq;
        int right = -1;
        for (int j = 0; j <= 2 * half; ++j) {
          while (right < std::min(2 * half, j + w)) {
            ++right;
            while (!dq.empty() && dp[static_cast<std::size_t>(dq.back())] <= dp[static_cast<std::size_t>(right)]) dq.pop_back();
            dq.push_back(right);
          }
          while (dq.front() < j - w) dq.pop_front();
          if (std::abs(j - half) > bound) continue;
          const double best = dp[static_cast<std::size_t>(dq.front())];
          if (best == neg_inf) continue;
          next[static_cast<std::size_t>(j)] = best + mass * (j - half) * h;
        }
        dp = std::move(next);
        prev_r = r;
      }
      total += *std::max_element(dp.begin(), dp.end());
    }
    return total;
  };

  // Coarse scan of L, then the fine grid around the coarse maximiser.
  const int coarse = 10;
  const int steps = static_cast<int>(std::lround(1.0 / l_step));
  double best = 0.0;
  int best_i = 0;
  for (int i = 0; i <= steps; i += coarse) {
    const double v = value_at(i * l_step);
    if (v > best) {
      best = v;
      best_i = i;
    }
  }
  for (int i = std::max(0, best_i - 2 * coarse); i <= std::min(steps, best_i + 2 * coarse); ++i) {
    best = std::max(best, value_at(i * l_step));
  }
  return best;
}

}  // namespace walshflow
