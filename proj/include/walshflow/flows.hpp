#pragma once

#include <cstdint>
#include <ostream>

#include "walshflow/star_graph.hpp"
#include "walshflow/walk.hpp"
#include "walshflow/walsh_chain.hpp"

namespace walshflow {

// Driving data of the discrete flows: the walk S and one ray mark eta_p per
// time index, independent of S.
struct FlowRealization {
  RayParams params;
  WalkWindow walk;
  RayMarks eta;
};

// Psi_{p,p+1}(x): radial move by X_{p+1} off the junction; from the junction
// to eta_p at radius 1 on an up step, otherwise stay.
LatticePoint psi_one_step(const FlowRealization& fr, std::int64_t p, const LatticePoint& x);

// Psi_{p,n} = Psi_{n-1,n} o ... o Psi_{p,p+1}; the identity when p == n.
LatticePoint psi_compose(const FlowRealization& fr, std::int64_t p, std::int64_t n, const LatticePoint& x);

// Radial translation up to T_{p,|x|}; afterwards radius S+_{p,n} on ray
// eta_J, J the last time in [p, n] where S attains its minimum over [p, n].
LatticePoint psi_closed_form(const FlowRealization& fr, std::int64_t p, std::int64_t n, const LatticePoint& x);

// K_{p,p+1}(x): Dirac off the junction, the alpha-spread at radius
// S+_{p,p+1} from the junction.
LatticeMeasure kernel_one_step(const RayParams& params, const WalkWindow& walk, std::int64_t p,
                               const LatticePoint& x);

// sum_y m({y}) K_{r,q}(y), with K_{r,q} taken in closed form.
LatticeMeasure push_forward(const RayParams& params, const WalkWindow& walk, const LatticeMeasure& m,
                            std::int64_t r, std::int64_t q);

// Chain of one-step kernels from p to n, exact weights.
LatticeMeasure kernel_compose(const RayParams& params, const WalkWindow& walk, std::int64_t p, std::int64_t n,
                              const LatticePoint& x);

// Dirac at x + e(x) S_{p,n} up to T_{p,|x|}, the alpha-spread at S+_{p,n} after.
LatticeMeasure kernel_closed_form(const RayParams& params, const WalkWindow& walk, std::int64_t p, std::int64_t n,
                                  const LatticePoint& x);

// Law of Psi_{p,n}(x) given S, by enumerating eta_p..eta_{n-1} with
// product weights. Marks that the trajectory never reads are summed out
// (their weights add to one), so only departures from the junction branch.
// Throws window_too_large when n - p > 16.
LatticeMeasure conditional_law_by_enumeration(const RayParams& params, const WalkWindow& walk, std::int64_t p,
                                              std::int64_t n, const LatticePoint& x);

bool kernel_is_conditional_law(const RayParams& params, const WalkWindow& walk, std::int64_t p, std::int64_t n,
                               const LatticePoint& x);

inline constexpr std::int64_t kMaxEnumerationWindow = 16;

// CSV rows "p,n,ray,radius,weight_num,weight_den" (header when requested).
void write_kernel_csv(std::ostream& os, std::int64_t p, std::int64_t n, const LatticeMeasure& m, bool header = true);

}  // namespace walshflow
