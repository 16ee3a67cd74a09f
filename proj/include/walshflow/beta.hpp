#pragma once

#include <vector>

#include "walshflow/star_graph.hpp"

namespace walshflow {

enum class LipschitzPairs {
  tree_adjacent,  // consecutive points on each ray, junction included
  all_pairs,
};

// Bounded-Lipschitz distance
//   beta(P, Q) = sup { |int g dP - int g dQ| : ||g||_inf + Lip(g) <= 1, g(0) = 0 }
// solved exactly as a finite linear program over supp(P) u supp(Q) u {0}
// with budgets L (Lipschitz) and M (sup-norm), L + M <= 1.
double beta_distance(const GraphMeasure& p, const GraphMeasure& q,
                     LipschitzPairs pairs = LipschitzPairs::tree_adjacent);

// beta(delta_x, delta_y) in closed form. With a = |x|, b = |y| the best test
// function gives min(min(M, L a) + min(M, L b), L d(x, y)); the maximum over
// L + M = 1 of this concave piecewise-linear function sits at a breakpoint.
double beta_dirac_pair(const GraphPoint& x, const GraphPoint& y);

// beta_dirac_pair for two single-atom measures, the LP otherwise.
double beta_fast(const GraphMeasure& p, const GraphMeasure& q);

// Independent cross-check of beta_distance by grid search. For each L on a
// grid (M = 1 - L, coarse then fine around the best coarse L; the value is
// concave in L) the rays decouple through g(0) = 0 and each ray is a chain
// solved by dynamic programming over g-values of step h in [-M, M].
// Underestimates by O(h + l_step).
double beta_grid_search(const GraphMeasure& p, const GraphMeasure& q, double h = 1e-3, double l_step = 1e-3);

namespace detail {

// Dense primal simplex for  max c^T x  s.t.  A x <= b, x >= 0  with b >= 0
// (the origin is feasible). Bland's rule; returns the optimal objective.
double maximize_from_origin(const std::vector<std::vector<double>>& a, const std::vector<double>& b,
                            const std::vector<double>& c);

}  // namespace detail
}  // namespace walshflow
