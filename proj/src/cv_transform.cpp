#include "walshflow/cv_transform.hpp"

#include <algorithm>
#include <cstdlib>

namespace walshflow {

std::vector<std::int64_t> tau_from_walk(const WalkWindow& s) {
  const auto& v = s.values();
  const auto n = static_cast<std::int64_t>(v.size()) - 1;
  // Every i with S_{i-1} S_{i+1} < 0 is the next tau after the previous one.
  std::vector<std::int64_t> tau{0};
  for (std::int64_t i = 1; i + 1 <= n; ++i) {
    if (v[static_cast<std::size_t>(i - 1)] * v[static_cast<std::size_t>(i + 1)] < 0) tau.push_back(i);
  }
  return tau;
}

std::vector<std::int64_t> tau_from_image(const WalkWindow& s_bar) {
  const auto& v = s_bar.values();
  std::vector<std::int64_t> tau{0};
  for (std::size_t k = 0; k < v.size(); ++k) {
    if (v[k] == 2 * static_cast<std::int64_t>(tau.size())) tau.push_back(static_cast<std::int64_t>(k));
  }
  return tau;
}

WalkWindow cv_forward(const WalkWindow& s) {
  if (s.steps() < 2) throw Error(Errc::too_short, "cv_forward needs at least two steps");
  const auto& x = s.increments();  // x[j] = X_{j+1}
  const auto tau = tau_from_walk(s);
  const auto n = static_cast<std::size_t>(s.steps());
  std::vector<std::int8_t> out(n - 1);
  std::size_t l = 0;
  for (std::size_t j = 1; j < n; ++j) {
    while (l + 1 < tau.size() && static_cast<std::size_t>(tau[l + 1]) < j) ++l;
    const int sign = (l % 2 == 0) ? -1 : 1;
    out[j - 1] = static_cast<std::int8_t>(sign * x[0] * x[j]);
  }
  return WalkWindow(s.first(), std::move(out));
}

WalkWindow cv_inverse(const WalkWindow& s_bar, int epsilon) {
  if (epsilon != 1 && epsilon != -1) throw Error(Errc::invalid_params, "epsilon must be +-1");
  const auto& xb = s_bar.increments();  // xb[j-1] = X-bar_j
  const auto& v = s_bar.values();
  std::vector<std::int8_t> out(xb.size() + 1);
  out[0] = static_cast<std::int8_t>(epsilon);
  // l = number of tau_l (l >= 1) strictly before j = floor(max_{k < j} S-bar_k / 2).
  std::int64_t running_max = 0;
  for (std::size_t j = 1; j <= xb.size(); ++j) {
    running_max = std::max(running_max, v[j - 1]);
    const std::int64_t l = running_max / 2;
    const int sign = (l % 2 == 0) ? -1 : 1;
    out[j] = static_cast<std::int8_t>(sign * epsilon * xb[j - 1]);
  }
  return WalkWindow(s_bar.first(), std::move(out));
}

std::vector<std::int64_t> reflected_from_max(const WalkWindow& s_bar) {
  const auto& v = s_bar.values();
  std::vector<std::int64_t> y(v.size());
  std::int64_t running_max = v[0];
  for (std::size_t k = 0; k < v.size(); ++k) {
    running_max = std::max(running_max, v[k]);
    y[k] = running_max - v[k];
  }
  return y;
}

std::int64_t cv_invariant_check(const WalkWindow& s) {
  const auto y = reflected_from_max(cv_forward(s));
  const auto& v = s.values();
  std::int64_t worst = 0;
  for (std::size_t k = 0; k < y.size(); ++k) worst = std::max(worst, std::abs(y[k] - std::abs(v[k])));
  return worst;
}

}  // namespace walshflow
