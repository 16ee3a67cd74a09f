#include "walshflow/checks.hpp"

#include <algorithm>
#include <chrono>
#include <cmath>
#include <cstdio>
#include <map>
#include <sstream>
#include <unordered_map>

#include "walshflow/beta.hpp"
#include "walshflow/cv_transform.hpp"
#include "walshflow/flows.hpp"
#include "walshflow/limit_flow.hpp"
#include "walshflow/parallel.hpp"
#include "walshflow/stats.hpp"
#include "walshflow/svg.hpp"
#include "walshflow/walk.hpp"
#include "walshflow/walsh_chain.hpp"

namespace walshflow {
namespace {

CheckItem zero_count(const std::string& name, std::int64_t count) {
  return {name, static_cast<double>(count), 0.0, "==", count == 0};
}

CheckItem at_most(const std::string& name, double value, double threshold) {
  return {name, value, threshold, "<=", value <= threshold};
}

CheckItem below(const std::string& name, double value, double threshold) {
  return {name, value, threshold, "<", value < threshold};
}

CheckItem from_outcome(const TestOutcome& t) { return {t.name, t.statistic, t.critical, "<", t.passed}; }

std::vector<double> alpha_values(const RayParams& p) {
  std::vector<double> out;
  for (int i = 1; i <= p.rays(); ++i) out.push_back(p.alpha_value(i));
  return out;
}

TestOutcome chi_square_outcome(const std::string& name, const std::vector<std::int64_t>& counts,
                               const std::vector<double>& probs, double level) {
  TestOutcome t;
  t.name = name;
  t.level = level;
  for (const auto c : counts) t.samples += c;
  if (counts.size() < 2) {
    t.passed = true;
    return t;
  }
  const auto chi = chi_square(counts, probs);
  t.statistic = chi.statistic;
  t.critical = chi_square_critical(chi.dof, level);
  t.passed = chi.statistic < t.critical;
  return t;
}

std::vector<LatticePoint> small_points(const RayParams& p, std::int64_t max_radius) {
  std::vector<LatticePoint> out = {junction<std::int64_t>(p)};
  for (int i = 1; i <= p.rays(); ++i) {
    for (std::int64_t r = 1; r <= max_radius; ++r) out.push_back(LatticePoint{i, r});
  }
  return out;
}

WalkWindow walk_from_mask(std::uint64_t mask, std::size_t steps) {
  std::vector<std::int8_t> inc(steps);
  for (std::size_t k = 0; k < steps; ++k) inc[k] = ((mask >> k) & 1U) ? 1 : -1;
  return WalkWindow(0, std::move(inc));
}

Rational mass(const LatticeMeasure& m) {
  Rational total(0);
  for (const auto& [x, w] : m.atoms()) total += w;
  return total;
}

}  // namespace

bool CheckResult::passed() const {
  return within_budget() && std::all_of(items.begin(), items.end(), [](const CheckItem& i) { return i.passed; });
}

// 1. max |Y-bar_n - |S_n|| <= 2 over random walks.
CheckResult check_cv_bound(const Config& c) {
  CheckResult r;
  r.id = 1;
  r.name = "cv_bound";
  r.budget_seconds = 10;
  std::vector<std::int64_t> worst(static_cast<std::size_t>(c.replicas));
  parallel_for(c.replicas, c.workers, [&](std::int64_t i) {
    const auto s = generate_walk(0, c.length, c.seed, static_cast<std::uint64_t>(i));
    worst[static_cast<std::size_t>(i)] = cv_invariant_check(s);
  });
  std::int64_t violations = 0;
  std::int64_t max_gap = 0;
  std::map<std::int64_t, std::int64_t> histogram;
  for (const auto w : worst) {
    violations += w > 2;
    max_gap = std::max(max_gap, w);
    ++histogram[w];
  }
  r.items.push_back(zero_count("walks_with_gap_above_2", violations));
  r.items.push_back(at_most("max_gap", static_cast<double>(max_gap), 2));
  for (const auto& [gap, count] : histogram) r.details["max_gap_histogram"][std::to_string(gap)] = count;
  r.details["walks"] = c.replicas;
  r.details["length"] = c.length;
  return r;
}

// 2. tau recursion against first hits, sign symmetry, roundtrip, preimages.
CheckResult check_cv_structure(const Config& c) {
  CheckResult r;
  r.id = 2;
  r.name = "cv_structure";
  r.budget_seconds = 60;
  struct Counts {
    std::int64_t tau = 0, sign = 0, roundtrip = 0, mirror = 0, blocks = 0;
  };
  std::vector<Counts> per(static_cast<std::size_t>(c.replicas));
  parallel_for(c.replicas, c.workers, [&](std::int64_t i) {
    auto& k = per[static_cast<std::size_t>(i)];
    const auto s = generate_walk(0, c.length, c.seed, static_cast<std::uint64_t>(i));
    const auto s_bar = cv_forward(s);
    const auto tau = tau_from_walk(s);
    k.blocks = static_cast<std::int64_t>(tau.size()) - 1;
    k.tau = tau != tau_from_image(s_bar);
    k.sign = !(cv_forward(s.negated()) == s_bar);
    k.roundtrip = !(cv_inverse(s_bar, s.increment(1)) == s);
    const auto other = cv_inverse(s_bar, -s.increment(1));
    k.mirror = !(other == s.negated()) || !(cv_forward(other) == s_bar);
  });
  Counts total;
  for (const auto& k : per) {
    total.tau += k.tau;
    total.sign += k.sign;
    total.roundtrip += k.roundtrip;
    total.mirror += k.mirror;
    total.blocks += k.blocks;
  }

  // Exhaustive preimages: every image of a walk of `len` steps has exactly
  // the two preimages S and -S, and every walk of len - 1 steps is an image.
  std::int64_t preimage_failures = 0;
  std::int64_t walks_checked = 0;
  const std::size_t max_len = 16;
  for (std::size_t len = 2; len <= max_len; ++len) {
    std::unordered_map<std::uint64_t, std::vector<std::uint64_t>> images;
    const std::uint64_t all = std::uint64_t{1} << len;
    for (std::uint64_t mask = 0; mask < all; ++mask) {
      const auto img = cv_forward(walk_from_mask(mask, len));
      std::uint64_t key = 0;
      const auto& inc = img.increments();
      for (std::size_t j = 0; j < inc.size(); ++j) key |= static_cast<std::uint64_t>(inc[j] > 0) << j;
      images[key].push_back(mask);
      ++walks_checked;
    }
    if (images.size() != all / 2) ++preimage_failures;
    for (const auto& [key, masks] : images) {
      if (masks.size() != 2 || (masks[0] ^ masks[1]) != all - 1) ++preimage_failures;
    }
  }

  r.items.push_back(zero_count("tau_recursion_vs_first_hits", total.tau));
  r.items.push_back(zero_count("image_of_negated_walk", total.sign));
  r.items.push_back(zero_count("inverse_roundtrip", total.roundtrip));
  r.items.push_back(zero_count("second_preimage_is_negation", total.mirror));
  r.items.push_back(zero_count("exhaustive_preimage_pairs", preimage_failures));
  r.details["walks"] = c.replicas;
  r.details["length"] = c.length;
  r.details["realized_blocks"] = total.blocks;
  r.details["exhaustive_lengths"] = {2, max_len};
  r.details["exhaustive_walks"] = walks_checked;
  return r;
}

// 3. Excursion flipping: distance bound, |M| = |S|, proof facts, and the
// law of the flipped chain.
CheckResult check_flip(const Config& c) {
  CheckResult r;
  r.id = 3;
  r.name = "flip_construction";
  r.budget_seconds = 120;
  const auto params = c.params();
  const int rays = params.rays();
  struct Counts {
    bool complete = true;
    std::int64_t bound = 0, modulus = 0, case_errors = 0, fact_a = 0, fact_b = 0, holds = 0, steps = 0;
    std::int64_t up = 0, down = 0, exit_pairs = 0, repeats = 0;
    std::vector<std::int64_t> segment_rays, cases;
    int selected = 0;
    double worst = 0.0;
    std::string error;
  };
  std::vector<Counts> per(static_cast<std::size_t>(c.replicas));
  parallel_for(c.replicas, c.workers, [&](std::int64_t i) {
    auto& k = per[static_cast<std::size_t>(i)];
    k.segment_rays.assign(static_cast<std::size_t>(rays), 0);
    k.cases.assign(4, 0);
    const auto stream = static_cast<std::uint64_t>(i);
    const auto s = generate_walk(0, c.length, c.seed, stream);
    const auto s_bar = cv_forward(s);
    const auto eta = RayMarks::random(params, c.seed, stream, StreamPurpose::excursion_marks);
    const auto beta = RayMarks::random(params, c.seed, stream, StreamPurpose::block_marks);
    // Radial steps over the whole window of every replica: |M| = |S| up to
    // tau_L, and a path cut at tau_L (a zero of S) would force one more down
    // than up per exit.
    const auto& sv = s.values();
    for (std::size_t n = 0; n + 1 < sv.size(); ++n) {
      if (sv[n] == 0) continue;
      (std::abs(sv[n + 1]) > std::abs(sv[n]) ? k.up : k.down) += 1;
    }
    FlipResult f;
    try {
      f = flip_excursions(params, s_bar, s, eta, beta);
    } catch (const Error& e) {
      if (e.code() != Errc::incomplete_block) throw;
      k.complete = false;
      return;
    } catch (const std::logic_error& e) {
      ++k.case_errors;
      k.error = e.what();
      return;
    }
    const auto& m = f.path.positions;
    k.steps = static_cast<std::int64_t>(m.size()) - 1;
    for (std::size_t n = 0; n < m.size(); ++n) k.modulus += m[n].radius != std::abs(sv[n]);
    for (const auto& e : f.excursions) {
      const int ray = eta(e.ordinal);
      for (auto n = e.start; n <= e.end; ++n) {
        const auto idx = static_cast<std::size_t>(n);
        const double d = graph_distance(diffusive(m[idx], 1), GraphPoint{ray, static_cast<double>(f.y_bar[idx])});
        k.worst = std::max(k.worst, d);
        k.bound += d > 2;
      }
    }
    for (const auto& b : f.blocks) ++k.cases[static_cast<std::size_t>(b.kind)];
    // Facts used by the case analysis, on every complete block.
    const auto& sb = s_bar.values();
    for (const auto& b : f.blocks) {
      for (auto q = b.start + 2; q <= b.end; ++q) {
        const bool lhs = sb[static_cast<std::size_t>(q - 1)] == 2 * b.l + 1;
        const bool rhs = sv[static_cast<std::size_t>(q)] == 0;
        k.fact_a += lhs != rhs;
      }
      for (auto q = b.start; q <= b.end && q + 1 <= s.last(); ++q) {
        const bool y0 = f.y_bar[static_cast<std::size_t>(q)] == 0;
        const auto next = std::abs(sv[static_cast<std::size_t>(q + 1)]);
        if (y0 && next > 1) ++k.fact_b;
        if (next == 0 && !y0) ++k.fact_b;
      }
    }
    k.holds = tally_transitions(params, f.path).hold;
    int last_exit = 0;
    for (std::size_t n = 0; n + 1 < m.size(); ++n) {
      if (!m[n].is_junction() || m[n + 1].is_junction()) continue;
      if (last_exit != 0) {
        ++k.exit_pairs;
        k.repeats += m[n + 1].ray == last_exit;
      }
      last_exit = m[n + 1].ray;
    }
    for (const auto& sg : f.segments) ++k.segment_rays[static_cast<std::size_t>(sg.ray - 1)];
    // One exit per path at a time independent of everything else.
    const CounterRng sel(c.seed, stream, StreamPurpose::selection);
    const auto from = static_cast<std::int64_t>(sel.uniform(0) * static_cast<double>(k.steps));
    if (const auto ray = exit_ray_after(f.path, from)) k.selected = *ray;
  });

  std::int64_t bound = 0, modulus = 0, case_errors = 0, fact_a = 0, fact_b = 0, holds = 0, steps = 0, up = 0,
               down = 0, skipped = 0, exit_pairs = 0, repeats = 0;
  double worst = 0.0;
  std::vector<std::int64_t> seg(static_cast<std::size_t>(rays), 0), selected(static_cast<std::size_t>(rays), 0);
  std::vector<std::int64_t> cases(4, 0);
  std::string first_error;
  for (const auto& k : per) {
    if (!k.error.empty() && first_error.empty()) first_error = k.error;
    case_errors += k.case_errors;
    up += k.up;
    down += k.down;
    if (!k.complete) {
      ++skipped;
      continue;
    }
    bound += k.bound;
    modulus += k.modulus;
    fact_a += k.fact_a;
    fact_b += k.fact_b;
    holds += k.holds;
    steps += k.steps;
    exit_pairs += k.exit_pairs;
    repeats += k.repeats;
    worst = std::max(worst, k.worst);
    for (std::size_t i = 0; i < seg.size() && !k.segment_rays.empty(); ++i) seg[i] += k.segment_rays[i];
    for (std::size_t i = 0; i < 4 && !k.cases.empty(); ++i) cases[i] += k.cases[i];
    if (k.selected > 0) ++selected[static_cast<std::size_t>(k.selected - 1)];
  }

  const double level = 0.01 / 3;
  const auto alpha = alpha_values(params);
  r.items.push_back(zero_count("excursion_distance_above_2", bound));
  r.items.push_back(zero_count("modulus_differs_from_abs_walk", modulus));
  r.items.push_back(zero_count("block_case_violations", case_errors));
  r.items.push_back(zero_count("fact_a_violations", fact_a));
  r.items.push_back(zero_count("fact_b_violations", fact_b));
  r.items.push_back(zero_count("holds_at_junction", holds));
  r.items.push_back({"flipped_steps", static_cast<double>(steps), 1e5, ">=", steps >= 100000});
  r.items.push_back(from_outcome(chi_square_outcome("radial_up_down_chi_square", {up, down}, {0.5, 0.5}, level)));
  r.items.push_back(from_outcome(chi_square_outcome("segment_ray_chi_square", seg, alpha, level)));
  r.items.push_back(from_outcome(chi_square_outcome("selected_exit_ray_chi_square", selected, alpha, level)));
  r.details["replicas"] = c.replicas;
  r.details["length"] = c.length;
  r.details["skipped_without_complete_block"] = skipped;
  r.details["flipped_steps"] = steps;
  r.details["max_excursion_distance"] = worst;
  r.details["block_cases"] = {{"i", cases[0]}, {"ii1", cases[1]}, {"ii2", cases[2]}, {"iii", cases[3]}};
  r.details["bonferroni_level"] = level;
  // Not a pass criterion: under a Markov chain with matrix Q consecutive
  // exits share a ray with probability sum alpha_i^2; the construction keeps
  // one ray across every zero of S in [tau*_l, tau_{l+1}].
  double same = 0.0;
  for (const double a : alpha) same += a * a;
  r.details["consecutive_exit_pairs"] = exit_pairs;
  r.details["consecutive_exit_same_ray"] =
      exit_pairs > 0 ? static_cast<double>(repeats) / static_cast<double>(exit_pairs) : 0.0;
  r.details["consecutive_exit_same_ray_if_markov"] = same;
  if (!first_error.empty()) r.details["first_case_error"] = first_error;

  // Sample path of replica 0 for inspection.
  const auto s = generate_walk(0, std::min<std::int64_t>(c.length, 400), c.seed, 0);
  try {
    const auto f = flip_excursions(params, cv_forward(s), s,
                                   RayMarks::random(params, c.seed, 0, StreamPurpose::excursion_marks),
                                   RayMarks::random(params, c.seed, 0, StreamPurpose::block_marks));
    std::ostringstream os;
    write_chain_csv(os, f.path);
    r.artifacts["flip_sample_path.csv"] = os.str();
    if (c.svg) {
      std::vector<Series> series(static_cast<std::size_t>(rays));
      for (int i = 0; i < rays; ++i) series[static_cast<std::size_t>(i)].label = "ray " + std::to_string(i + 1);
      for (std::size_t n = 0; n < f.path.positions.size(); ++n) {
        const auto& x = f.path.positions[n];
        for (int i = 0; i < rays; ++i) {
          const double v = (x.is_junction() || x.ray == i + 1) ? static_cast<double>(x.radius) : std::nan("");
          series[static_cast<std::size_t>(i)].points.emplace_back(static_cast<double>(n), v);
        }
      }
      // Gaps between visits to a ray stay gaps: split polylines at NaN.
      std::vector<Series> pieces;
      for (const auto& sr : series) {
        Series cur{sr.label, {}};
        for (const auto& p : sr.points) {
          if (std::isnan(p.second)) {
            if (!cur.points.empty()) pieces.push_back(cur);
            cur = Series{"", {}};
            continue;
          }
          cur.points.push_back(p);
        }
        if (!cur.points.empty()) pieces.push_back(cur);
      }
      r.artifacts["flip_sample_path.svg"] =
          svg_line_plot({"Flipped chain, replica 0", "n", "radius on the ray", false, false}, pieces);
    }
  } catch (const Error&) {
  }
  return r;
}

// 4. Exact flow identities.
CheckResult check_flow_exactness(const Config& c) {
  CheckResult r;
  r.id = 4;
  r.name = "flow_exactness";
  r.budget_seconds = 60;
  const auto params = c.params();
  const auto o = junction<std::int64_t>(params);
  const auto eta = RayMarks::random(params, c.seed, 0, StreamPurpose::flow_marks);

  struct Counts {
    std::int64_t psi_closed = 0, psi_cocycle = 0, radial = 0, merge = 0, k_closed = 0, k_cocycle = 0, mass = 0;
    std::int64_t cases = 0;
  };
  auto add = [](Counts& a, const Counts& b) {
    a.psi_closed += b.psi_closed;
    a.psi_cocycle += b.psi_cocycle;
    a.radial += b.radial;
    a.merge += b.merge;
    a.k_closed += b.k_closed;
    a.k_cocycle += b.k_cocycle;
    a.mass += b.mass;
    a.cases += b.cases;
  };

  // Every quantity on one (walk, p <= r <= q, x).
  auto check_window = [&](const FlowRealization& fr, std::int64_t p, std::int64_t q, const LatticePoint& x,
                          const std::vector<std::int64_t>& mids, Counts& k) {
    ++k.cases;
    const auto psi = psi_compose(fr, p, q, x);
    k.psi_closed += !(psi == psi_closed_form(fr, p, q, x));
    const auto kern = kernel_closed_form(params, fr.walk, p, q, x);
    const auto comp = kernel_compose(params, fr.walk, p, q, x);
    k.k_closed += !(comp == kern);
    k.mass += mass(comp) != Rational(1);
    if (x.is_junction()) k.radial += psi.radius != fr.walk.s_plus(p, q);
    for (const auto m : mids) {
      k.psi_cocycle += !(psi_compose(fr, m, q, psi_compose(fr, p, m, x)) == psi);
      k.k_cocycle += !(push_forward(params, fr.walk, kernel_closed_form(params, fr.walk, p, m, x), m, q) == kern);
      if (x.is_junction() && p < m && m < q && fr.walk.s_plus(p, q) > 0 &&
          fr.walk.window_min(p, q) + fr.walk.value(p) == fr.walk.window_min(m, q) + fr.walk.value(m)) {
        k.merge += psi.ray != psi_compose(fr, m, q, o).ray;
      }
    }
  };

  // Exhaustive: every walk of 12 steps, every |x| <= 3, every p <= r <= q.
  const std::size_t len = 12;
  const auto points = small_points(params, 3);
  const std::int64_t walks = std::int64_t{1} << len;
  std::vector<Counts> exhaustive(static_cast<std::size_t>(walks));
  parallel_for(walks, c.workers, [&](std::int64_t mask) {
    const FlowRealization fr{params, walk_from_mask(static_cast<std::uint64_t>(mask), len), eta};
    auto& k = exhaustive[static_cast<std::size_t>(mask)];
    std::vector<std::int64_t> mids;
    for (std::int64_t p = 0; p <= static_cast<std::int64_t>(len); ++p) {
      for (std::int64_t q = p; q <= static_cast<std::int64_t>(len); ++q) {
        mids.clear();
        for (std::int64_t m = p; m <= q; ++m) mids.push_back(m);
        for (const auto& x : points) check_window(fr, p, q, x, mids, k);
      }
    }
  });
  Counts ex;
  for (const auto& k : exhaustive) add(ex, k);

  // Random spot checks on long walks.
  std::vector<Counts> spot(static_cast<std::size_t>(c.replicas));
  parallel_for(c.replicas, c.workers, [&](std::int64_t i) {
    const auto stream = static_cast<std::uint64_t>(i);
    const FlowRealization fr{params, generate_walk(0, c.length, c.seed, stream),
                             RayMarks::random(params, c.seed, stream, StreamPurpose::flow_marks)};
    const CounterRng u(c.seed, stream, StreamPurpose::selection);
    const auto len_d = static_cast<double>(c.length + 1);
    std::int64_t t[3];
    for (int j = 0; j < 3; ++j) t[j] = static_cast<std::int64_t>(u.uniform(static_cast<std::uint64_t>(j)) * len_d);
    std::sort(t, t + 3);
    const int ray = 1 + static_cast<int>(u.uniform(3) * params.rays());
    const auto radius = static_cast<std::int64_t>(u.uniform(4) * 31.0);
    const LatticePoint x = radius == 0 ? o : LatticePoint{ray, radius};
    check_window(fr, t[0], t[2], x, {t[1]}, spot[static_cast<std::size_t>(i)]);
    check_window(fr, t[0], t[2], o, {t[1]}, spot[static_cast<std::size_t>(i)]);
  });
  Counts sp;
  for (const auto& k : spot) add(sp, k);

  // Conditional law by enumeration of the marks: every walk of 10 steps
  // from the junction, then random 16-step windows from small points.
  std::int64_t law_mismatch = 0;
  std::int64_t law_cases = 0;
  for (std::uint64_t mask = 0; mask < (1U << 10); ++mask) {
    const auto w = walk_from_mask(mask, 10);
    for (std::int64_t p = 0; p <= 10; ++p) {
      for (std::int64_t q = p; q <= 10; ++q) {
        ++law_cases;
        law_mismatch += !kernel_is_conditional_law(params, w, p, q, o);
      }
    }
  }
  const auto law_points = small_points(params, 2);
  for (std::uint64_t i = 0; i < 200; ++i) {
    const auto w = generate_walk(0, kMaxEnumerationWindow, c.seed, i);
    for (const auto& x : law_points) {
      ++law_cases;
      law_mismatch += !kernel_is_conditional_law(params, w, 0, kMaxEnumerationWindow, x);
    }
  }

  r.items.push_back(zero_count("exhaustive_psi_closed_form", ex.psi_closed));
  r.items.push_back(zero_count("exhaustive_psi_cocycle", ex.psi_cocycle));
  r.items.push_back(zero_count("exhaustive_radial_identity", ex.radial));
  r.items.push_back(zero_count("exhaustive_ray_merge", ex.merge));
  r.items.push_back(zero_count("exhaustive_kernel_closed_form", ex.k_closed));
  r.items.push_back(zero_count("exhaustive_kernel_cocycle", ex.k_cocycle));
  r.items.push_back(zero_count("exhaustive_kernel_mass", ex.mass));
  r.items.push_back(zero_count("random_psi_closed_form", sp.psi_closed));
  r.items.push_back(zero_count("random_psi_cocycle", sp.psi_cocycle));
  r.items.push_back(zero_count("random_radial_identity", sp.radial));
  r.items.push_back(zero_count("random_ray_merge", sp.merge));
  r.items.push_back(zero_count("random_kernel_closed_form", sp.k_closed));
  r.items.push_back(zero_count("random_kernel_cocycle", sp.k_cocycle));
  r.items.push_back(zero_count("conditional_law", law_mismatch));
  r.details["exhaustive_walk_length"] = len;
  r.details["exhaustive_windows"] = ex.cases;
  r.details["random_checks"] = sp.cases;
  r.details["random_walk_length"] = c.length;
  r.details["conditional_law_cases"] = law_cases;

  std::ostringstream os;
  const auto w = WalkWindow::from_values(0, std::vector<std::int64_t>{0, 1, 2, 1, 0, -1});
  for (std::int64_t q = 0; q <= 5; ++q) write_kernel_csv(os, 0, q, kernel_closed_form(params, w, 0, q, o), q == 0);
  r.artifacts["kernel_example.csv"] = os.str();
  return r;
}

// 5. Marginals at t = 1 of both chains against Walsh Brownian motion.
CheckResult check_donsker(const Config& c) {
  CheckResult r;
  r.id = 5;
  r.name = "donsker_marginals";
  r.budget_seconds = 120;
  const auto params = c.params();
  const double level = 0.01 / 4;
  for (const auto kind : {ChainKind::q, ChainKind::lazy}) {
    const auto rep = walsh_marginal_check(params, kind, c.donsker_n, c.replicas, c.seed, level, c.workers);
    r.items.push_back(from_outcome(rep.radial));
    r.items.push_back(from_outcome(rep.rays));
    r.details[kind == ChainKind::q ? "chain_q" : "chain_lazy"] = {to_json(rep.radial), to_json(rep.rays)};
  }
  r.details["n"] = c.donsker_n;
  r.details["replicas"] = c.replicas;
  r.details["bonferroni_level"] = level;
  return r;
}

// 6. LP value of beta against grid search, and the Dirac closed form.
CheckResult check_beta_metric(const Config& c) {
  CheckResult r;
  r.id = 6;
  r.name = "beta_metric";
  r.budget_seconds = 60;
  const auto params = c.params();
  const std::int64_t pairs = 1000;
  std::vector<double> gaps(static_cast<std::size_t>(pairs));
  std::vector<double> values(static_cast<std::size_t>(pairs));
  parallel_for(pairs, c.workers, [&](std::int64_t i) {
    RngCursor u(CounterRng(c.seed, static_cast<std::uint64_t>(i), StreamPurpose::auxiliary));
    auto measure = [&] {
      const int atoms = 1 + static_cast<int>(u.uniform() * 3);
      std::vector<std::int64_t> raw;
      std::vector<GraphPoint> pts;
      std::int64_t total = 0;
      for (int a = 0; a < atoms; ++a) {
        const auto w = 1 + static_cast<std::int64_t>(u.uniform() * 5);
        raw.push_back(w);
        total += w;
        if (u.uniform() < 0.1) {
          pts.push_back(junction<double>(params));
          u.uniform();
          u.uniform();
        } else {
          const int ray = 1 + static_cast<int>(u.uniform() * params.rays());
          pts.push_back(make_point(params, ray, 3.0 * u.uniform()));
        }
      }
      std::vector<GraphMeasure::Atom> out;
      for (std::size_t a = 0; a < pts.size(); ++a) out.emplace_back(pts[a], make_rational(raw[a], total));
      return GraphMeasure::from_atoms(params, std::move(out));
    };
    const auto p = measure();
    const auto q = measure();
    const double lp = beta_distance(p, q);
    values[static_cast<std::size_t>(i)] = lp;
    gaps[static_cast<std::size_t>(i)] = std::abs(lp - beta_grid_search(p, q));
  });
  const double worst_gap = *std::max_element(gaps.begin(), gaps.end());

  double worst_dirac = 0.0;
  auto dirac_rows = nlohmann::json::array();
  const auto o = GraphMeasure::dirac(params, junction<double>(params));
  for (const double a : {0.5, 1.0, 2.0, 5.0}) {
    const double got = beta_distance(GraphMeasure::dirac(params, make_point(params, 1, a)), o);
    const double want = a / (1 + a);
    worst_dirac = std::max(worst_dirac, std::abs(got - want));
    dirac_rows.push_back({{"radius", a}, {"beta", got}, {"expected", want}});
  }
  r.items.push_back(at_most("lp_vs_grid_max_abs_diff", worst_gap, 2e-3));
  r.items.push_back(at_most("dirac_closed_form_max_abs_diff", worst_dirac, 1e-9));
  r.details["pairs"] = pairs;
  r.details["max_beta"] = *std::max_element(values.begin(), values.end());
  r.details["dirac_vs_junction"] = dirac_rows;
  return r;
}

// 7. Convergence profiles of the discrete flows against the limit formulas
// driven by the same rescaled walk.
CheckResult check_convergence(const Config& c) {
  CheckResult r;
  r.id = 7;
  r.name = "convergence_profiles";
  r.budget_seconds = 180;
  const ConvergenceSetup setup{c.params(), c.s, c.T, c.x(), c.seed};
  const auto table = convergence_profiles(setup, c.n_list, c.convergence_replicas, c.workers);

  auto strictly_decreasing = [&](const std::string& name, const std::vector<ProfileRow>& rows) {
    // value: largest ratio of consecutive medians; must stay below 1.
    double worst = 0.0;
    for (std::size_t i = 1; i < rows.size(); ++i) worst = std::max(worst, rows[i].median / rows[i - 1].median);
    if (rows.size() < 2) worst = 0.0;
    return below(name, worst, 1.0);
  };
  std::int64_t mismatches = 0;
  std::int64_t points = 0;
  for (const auto& row : table.rows) {
    mismatches += row.grid_mismatches;
    points += row.grid_points;
  }
  r.items.push_back(strictly_decreasing("sup_distance_median_ratio", table.distance_profile));
  r.items.push_back(strictly_decreasing("sup_beta_median_ratio", table.beta_profile));
  r.items.push_back(zero_count("grid_self_consistency_mismatches", mismatches));

  // Two resolutions of one prefix: W^(4n) against its 1/n interpolation.
  std::vector<ProfileRow> gap_profile;
  for (const auto n : c.n_list) {
    std::vector<double> v(static_cast<std::size_t>(c.convergence_replicas));
    parallel_for(c.convergence_replicas, c.workers, [&](std::int64_t i) {
      v[static_cast<std::size_t>(i)] = resolution_gap(n, c.seed, static_cast<std::uint64_t>(i));
    });
    gap_profile.push_back(quartiles(n, v));
  }

  r.details = summary_json(table);
  auto gaps = nlohmann::json::array();
  for (const auto& g : gap_profile) gaps.push_back({{"n", g.n}, {"median", g.median}, {"q1", g.q1}, {"q3", g.q3}});
  r.details["resolution_gap"] = gaps;
  r.details["replicas"] = c.convergence_replicas;
  r.details["grid_points"] = points;

  std::ostringstream beta_csv, dist_csv;
  write_beta_csv(beta_csv, table);
  write_distance_csv(dist_csv, table);
  r.artifacts["convergence_beta.csv"] = beta_csv.str();
  r.artifacts["convergence_distance.csv"] = dist_csv.str();
  if (c.svg) {
    auto series = [](const std::string& label, const std::vector<ProfileRow>& rows) {
      Series s{label, {}};
      for (const auto& row : rows) s.points.emplace_back(static_cast<double>(row.n), row.median);
      return s;
    };
    r.artifacts["convergence_profiles.svg"] =
        svg_line_plot({"Median sup over t, " + std::to_string(c.convergence_replicas) + " replicas", "n",
                       "median", true, true},
                      {series("sup distance", table.distance_profile), series("sup beta", table.beta_profile),
                       series("tau gap", table.tau_profile), series("resolution gap", gap_profile)});
  }
  return r;
}

CheckResult run_check(int id, const Config& c) {
  const auto t0 = std::chrono::steady_clock::now();
  CheckResult r;
  switch (id) {
    case 1: r = check_cv_bound(c); break;
    case 2: r = check_cv_structure(c); break;
    case 3: r = check_flip(c); break;
    case 4: r = check_flow_exactness(c); break;
    case 5: r = check_donsker(c); break;
    case 6: r = check_beta_metric(c); break;
    case 7: r = check_convergence(c); break;
    default: throw Error(Errc::invalid_params, "no criterion " + std::to_string(id));
  }
  r.seconds = std::chrono::duration<double>(std::chrono::steady_clock::now() - t0).count();
  return r;
}

nlohmann::json to_json(const CheckResult& r) {
  auto items = nlohmann::json::array();
  bool ok = true;
  for (const auto& i : r.items) {
    ok = ok && i.passed;
    items.push_back({{"name", i.name},
                     {"status", i.passed ? "pass" : "fail"},
                     {"value", i.value},
                     {"relation", i.relation},
                     {"threshold", i.threshold}});
  }
  return {{"id", r.id},
          {"name", r.name},
          {"status", ok ? "pass" : "fail"},
          {"runtime_budget_seconds", r.budget_seconds},
          {"items", items},
          {"details", r.details}};
}

std::string summary_line(const CheckResult& r) {
  std::string failed;
  for (const auto& i : r.items) {
    if (!i.passed) failed += (failed.empty() ? "" : ", ") + i.name;
  }
  if (!r.within_budget()) failed += (failed.empty() ? "" : ", ") + std::string("runtime");
  char buf[64];
  std::snprintf(buf, sizeof buf, " (%.1f s of %.0f s)", r.seconds, r.budget_seconds);
  return std::string(r.passed() ? "[PASS] " : "[FAIL] ") + std::to_string(r.id) + " " + r.name + buf +
         (failed.empty() ? "" : " failed: " + failed);
}

}  // namespace walshflow
