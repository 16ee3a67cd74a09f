#pragma once

#include <cstdint>
#include <vector>

#include "walshflow/walk.hpp"

namespace walshflow {

// Block times of S on [0, n] (indices relative to S.first()): tau_0 = 0 and
// tau_{l+1} = min{i > tau_l : S_{i-1} S_{i+1} < 0}, as far as the window allows.
std::vector<std::int64_t> tau_from_walk(const WalkWindow& s);

// First hitting times of 0, 2, 4, ... by S-bar, relative to S-bar.first().
std::vector<std::int64_t> tau_from_image(const WalkWindow& s_bar);

// S-bar = T(S): X-bar_j = (-1)^{l+1} X_1 X_{j+1} on tau_l < j <= tau_{l+1}.
// The result has one step fewer than S and shares its first index. A block
// left open at the window end keeps its parity.
WalkWindow cv_forward(const WalkWindow& s);

// The member of T^{-1}{S-bar} with X_1 = epsilon; one step longer than S-bar.
WalkWindow cv_inverse(const WalkWindow& s_bar, int epsilon);

// Y-bar_k = max_{j <= k} S-bar_j - S-bar_k for every index of the window.
std::vector<std::int64_t> reflected_from_max(const WalkWindow& s_bar);

// max_k | Y-bar_k - |S_k| | over the indices shared by S and T(S).
std::int64_t cv_invariant_check(const WalkWindow& s);

}  // namespace walshflow
