#include "walshflow/beta.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <map>
#include <stdexcept>

namespace walshflow {
namespace detail {

double maximize_from_origin(const std::vector<std::vector<double>>& a, const std::vector<double>& b,
                            const std::vector<double>& c) {
  constexpr double kEps = 1e-12;
  const std::size_t rows = a.size();
  const std::size_t vars = c.size();
  const std::size_t cols = vars + rows + 1;  // structural, slack, rhs

  // Row `rows` is the objective row holding -c (reduced costs).
  std::vector<double> t((rows + 1) * cols, 0.0);
  auto at = [&](std::size_t r, std::size_t col) -> double& { return t[r * cols + col]; };
  std::vector<std::size_t> basis(rows);
  for (std::size_t r = 0; r < rows; ++r) {
    for (std::size_t j = 0; j < vars; ++j) at(r, j) = a[r][j];
    at(r, vars + r) = 1.0;
    at(r, cols - 1) = b[r];
    basis[r] = vars + r;
  }
  for (std::size_t j = 0; j < vars; ++j) at(rows, j) = -c[j];

  for (std::size_t iter = 0; iter < 100000; ++iter) {
    std::size_t enter = cols;
    for (std::size_t j = 0; j + 1 < cols; ++j) {
      if (at(rows, j) < -kEps) {
        enter = j;
        break;
      }
    }
    if (enter == cols) return at(rows, cols - 1);

    std::size_t leave = rows;
    double best = std::numeric_limits<double>::infinity();
    for (std::size_t r = 0; r < rows; ++r) {
      const double coef = at(r, enter);
      if (coef <= kEps) continue;
      const double ratio = at(r, cols - 1) / coef;
      if (leave == rows || ratio < best - kEps) {
        best = ratio;
        leave = r;
      } else if (ratio <= best + kEps && basis[r] < basis[leave]) {
        best = std::min(best, ratio);
        leave = r;
      }
    }
    if (leave == rows) throw std::logic_error("beta LP unbounded");

    const double pivot = at(leave, enter);
    for (std::size_t j = 0; j < cols; ++j) at(leave, j) /= pivot;
    for (std::size_t r = 0; r <= rows; ++r) {
      if (r == leave) continue;
      const double f = at(r, enter);
      if (f == 0.0) continue;
      for (std::size_t j = 0; j < cols; ++j) at(r, j) -= f * at(leave, j);
    }
    basis[leave] = enter;
  }
  throw std::logic_error("beta LP did not terminate");
}

}  // namespace detail

double beta_dirac_pair(const GraphPoint& x, const GraphPoint& y) {
  if (x == y) return 0.0;
  const double a = x.radius;
  const double b = y.radius;
  const double d = graph_distance(x, y);
  auto value = [&](double l) {
    const double m = 1.0 - l;
    return std::min(std::min(m, l * a) + std::min(m, l * b), l * d);
  };
  // Breakpoints of the pieces 2(1-L), (1-L)+Lb, La+(1-L), La+Lb against Ld.
  std::vector<double> candidates = {0.0, 1.0, 1.0 / (1.0 + a), 1.0 / (1.0 + b)};
  for (const auto& [slope, icept] : {std::pair{-2.0, 2.0}, std::pair{b - 1.0, 1.0},
                                     std::pair{a - 1.0, 1.0}, std::pair{a + b, 0.0}}) {
    const double denom = d - slope;
    if (std::abs(denom) > 1e-15) candidates.push_back(icept / denom);
  }
  double best = 0.0;
  for (const double l : candidates) {
    if (l >= 0.0 && l <= 1.0) best = std::max(best, value(l));
  }
  return best;
}

double beta_fast(const GraphMeasure& p, const GraphMeasure& q) {
  if (p.size() == 1 && q.size() == 1) return beta_dirac_pair(p.atoms()[0].first, q.atoms()[0].first);
  return beta_distance(p, q);
}

double beta_distance(const GraphMeasure& p, const GraphMeasure& q, LipschitzPairs pairs) {
  // Signed mass per non-junction support point; the junction carries g = 0.
  std::map<GraphPoint, double> signed_mass;
  for (const auto& [pt, w] : p.atoms()) {
    if (!pt.is_junction()) signed_mass[pt] += to_double(w);
  }
  for (const auto& [pt, w] : q.atoms()) {
    if (!pt.is_junction()) signed_mass[pt] -= to_double(w);
  }
  if (p == q || signed_mass.empty()) return 0.0;

  std::vector<GraphPoint> pts;
  std::vector<double> mass;
  for (const auto& [pt, m] : signed_mass) {
    pts.push_back(pt);
    mass.push_back(m);
  }
  const std::size_t k = pts.size();
  // Variables: g+_z, g-_z (z < k), then L, M.
  const std::size_t vars = 2 * k + 2;
  const std::size_t lip = 2 * k;
  const std::size_t sup = 2 * k + 1;

  std::vector<std::vector<double>> a;
  std::vector<double> b;
  auto add_row = [&](std::vector<double> row, double rhs) {
    a.push_back(std::move(row));
    b.push_back(rhs);
  };
  auto diff_rows = [&](std::size_t z, std::ptrdiff_t w, double dist) {
    // |g_z - g_w| <= L * dist, with w < 0 meaning the junction.
    for (double sgn : {1.0, -1.0}) {
      std::vector<double> row(vars, 0.0);
      row[2 * z] += sgn;
      row[2 * z + 1] -= sgn;
      if (w >= 0) {
        row[2 * static_cast<std::size_t>(w)] -= sgn;
        row[2 * static_cast<std::size_t>(w) + 1] += sgn;
      }
      row[lip] = -dist;
      add_row(std::move(row), 0.0);
    }
  };

  for (std::size_t z = 0; z < k; ++z) {
    for (double sgn : {1.0, -1.0}) {
      std::vector<double> row(vars, 0.0);
      row[2 * z] = sgn;
      row[2 * z + 1] = -sgn;
      row[sup] = -1.0;
      add_row(std::move(row), 0.0);
    }
  }
  if (pairs == LipschitzPairs::all_pairs) {
    for (std::size_t z = 0; z < k; ++z) {
      diff_rows(z, -1, pts[z].radius);
      for (std::size_t w = z + 1; w < k; ++w) {
        diff_rows(z, static_cast<std::ptrdiff_t>(w), graph_distance(pts[z], pts[w]));
      }
    }
  } else {
    // pts is sorted by (ray, radius): link each point to its inner neighbour.
    for (std::size_t z = 0; z < k; ++z) {
      if (z > 0 && pts[z - 1].ray == pts[z].ray) {
        diff_rows(z, static_cast<std::ptrdiff_t>(z - 1), pts[z].radius - pts[z - 1].radius);
      } else {
        diff_rows(z, -1, pts[z].radius);
      }
    }
  }
  {
    std::vector<double> row(vars, 0.0);
    row[lip] = 1.0;
    row[sup] = 1.0;
    add_row(std::move(row), 1.0);
  }

  std::vector<double> c(vars, 0.0);
  for (std::size_t z = 0; z < k; ++z) {
    c[2 * z] = mass[z];
    c[2 * z + 1] = -mass[z];
  }
  return std::max(0.0, detail::maximize_from_origin(a, b, c));
}

}  // namespace walshflow
