#include "walshflow/walsh_chain.hpp"

#include <cstdlib>
#include <stdexcept>

#include "walshflow/cv_transform.hpp"

namespace walshflow {

LatticePoint step_chain_q(const RayParams& params, const LatticePoint& x, double u) {
  if (x.is_junction()) return {params.draw_ray(u), 1};
  return make_point(params, x.ray, x.radius + (u < 0.5 ? -1 : 1));
}

LatticePoint step_chain_lazy(const RayParams& params, const LatticePoint& x, double u) {
  if (x.is_junction()) {
    if (u < 0.5) return x;
    return {params.draw_ray(2.0 * (u - 0.5)), 1};
  }
  return make_point(params, x.ray, x.radius + (u < 0.5 ? -1 : 1));
}

ChainPath simulate_chain(const RayParams& params, ChainKind kind, std::int64_t steps, std::uint64_t seed,
                         std::uint64_t stream_id) {
  if (steps < 0) throw Error(Errc::invalid_params, "negative step count");
  const CounterRng rng(seed, stream_id, StreamPurpose::chain_uniforms);
  ChainPath path;
  path.positions.reserve(static_cast<std::size_t>(steps) + 1);
  path.positions.push_back(junction<std::int64_t>(params));
  for (std::int64_t k = 0; k < steps; ++k) {
    const double u = rng.uniform(static_cast<std::uint64_t>(k));
    const auto& x = path.positions.back();
    path.positions.push_back(kind == ChainKind::q ? step_chain_q(params, x, u) : step_chain_lazy(params, x, u));
  }
  return path;
}

RayMarks RayMarks::random(const RayParams& params, std::uint64_t seed, std::uint64_t stream_id,
                          StreamPurpose purpose) {
  RayMarks m;
  m.params_ = std::make_shared<const RayParams>(params);
  m.rng_.emplace(seed, stream_id, purpose);
  return m;
}

RayMarks RayMarks::fixed(std::vector<int> rays, std::int64_t first_index) {
  RayMarks m;
  m.fixed_ = std::move(rays);
  m.first_ = first_index;
  return m;
}

int RayMarks::operator()(std::int64_t index) const {
  if (rng_) return params_->draw_ray(rng_->uniform(static_cast<std::uint64_t>(index)));
  const std::int64_t k = index - first_;
  if (k < 0 || k >= static_cast<std::int64_t>(fixed_.size())) {
    throw Error(Errc::out_of_window, "no mark at index " + std::to_string(index));
  }
  return fixed_[static_cast<std::size_t>(k)];
}

std::ostream& operator<<(std::ostream& os, BlockCase c) {
  switch (c) {
    case BlockCase::i: return os << "i";
    case BlockCase::ii1: return os << "ii1";
    case BlockCase::ii2: return os << "ii2";
    case BlockCase::iii: return os << "iii";
  }
  return os;
}

namespace {

void require(bool ok, const char* what) {
  if (!ok) throw std::logic_error(std::string("flip_excursions: ") + what);
}

}  // namespace

FlipResult flip_excursions(const RayParams& params, const WalkWindow& s_bar, const WalkWindow& s,
                           const RayMarks& eta, const RayMarks& beta) {
  if (s.steps() != s_bar.steps() + 1 || cv_forward(s).increments() != s_bar.increments()) {
    throw Error(Errc::not_a_preimage, "S is not mapped to S-bar by the transform");
  }
  const auto tau = tau_from_image(s_bar);
  if (tau.size() < 2) throw Error(Errc::incomplete_block, "window ends inside the first block");

  FlipResult out;
  out.y_bar = reflected_from_max(s_bar);
  const auto all = excursions(out.y_bar, 0);
  const auto& sv = s.values();
  auto abs_s = [&](std::int64_t k) { return std::abs(sv[static_cast<std::size_t>(k)]); };
  auto first_zero_after = [&](std::int64_t from) {
    for (std::int64_t k = from + 1; k < static_cast<std::int64_t>(sv.size()); ++k) {
      if (sv[static_cast<std::size_t>(k)] == 0) return k;
    }
    return std::int64_t{-1};
  };

  std::size_t next = 0;
  for (std::size_t l = 0; l + 1 < tau.size(); ++l) {
    Block b;
    b.l = static_cast<std::int64_t>(l);
    b.start = tau[l];
    b.end = tau[l + 1];
    require(sv[static_cast<std::size_t>(b.start)] == 0 && sv[static_cast<std::size_t>(b.end)] == 0,
            "S does not vanish at the block ends");
    std::vector<Excursion> inside;
    while (next < all.size() && all[next].end <= b.end) {
      require(all[next].start >= b.start, "excursion straddles a block boundary");
      inside.push_back(all[next]);
      ++next;
    }
    b.star = first_zero_after(b.start);
    const auto bl = static_cast<std::int64_t>(l);
    auto seg = [&](std::int64_t from, std::int64_t to, MarkSource src, std::int64_t idx) {
      const int ray = src == MarkSource::block ? beta(idx) : eta(idx);
      out.segments.push_back({from, to, src, idx, ray});
    };
    if (inside.empty()) {
      b.kind = BlockCase::i;
      require(b.end == b.start + 2, "case (i) block longer than two steps");
      seg(b.start, b.end, MarkSource::block, bl);
    } else if (inside.size() == 1) {
      const auto& e = inside[0];
      if (e.end == b.end - 2) {
        b.kind = BlockCase::ii1;
        require(b.star == b.end, "case (ii1): S vanishes inside the block");
        seg(b.start, b.end, MarkSource::excursion, e.ordinal);
      } else if (e.end == b.end - 1) {
        b.kind = BlockCase::ii2;
        require(b.star == e.start + 1 && b.star == b.start + 2, "case (ii2): unexpected first zero");
        seg(b.start, b.star - 1, MarkSource::block, bl);
        seg(b.star, b.end, MarkSource::excursion, e.ordinal);
      } else {
        require(false, "single excursion ends away from the block end");
      }
    } else {
      require(inside.size() == 2, "more than two excursions in a block");
      b.kind = BlockCase::iii;
      require(b.star == inside[1].start + 1, "case (iii): unexpected first zero");
      seg(b.start, b.star - 1, MarkSource::excursion, inside[0].ordinal);
      seg(b.star, b.end, MarkSource::excursion, inside[1].ordinal);
    }
    out.excursions.insert(out.excursions.end(), inside.begin(), inside.end());
    out.blocks.push_back(b);
  }

  const std::int64_t last = tau.back();
  out.path.truncated = last < s_bar.steps();
  out.path.positions.assign(static_cast<std::size_t>(last) + 1, junction<std::int64_t>(params));
  for (const auto& sg : out.segments) {
    for (std::int64_t n = sg.start; n <= sg.end; ++n) {
      out.path.positions[static_cast<std::size_t>(n)] = make_point(params, sg.ray, abs_s(n));
    }
  }
  return out;
}

ChainPath flipped_product_chain(const RayParams& params, const WalkWindow& s_bar, const RayMarks& eta) {
  const auto y = reflected_from_max(s_bar);
  ChainPath path;
  path.positions.reserve(y.size());
  std::int64_t ordinal = 0;
  int ray = params.rays();
  for (std::size_t n = 0; n < y.size(); ++n) {
    const bool prev_zero = n == 0 || y[n - 1] == 0;
    if (prev_zero && y[n] == 0 && n + 1 < y.size() && y[n + 1] != 0) ray = eta(++ordinal);
    path.positions.push_back(make_point(params, ray, y[n]));
  }
  return path;
}

TransitionTally tally_transitions(const RayParams& params, const ChainPath& path) {
  TransitionTally t;
  t.exits.assign(static_cast<std::size_t>(params.rays()), 0);
  for (std::size_t n = 0; n + 1 < path.positions.size(); ++n) {
    const auto& a = path.positions[n];
    const auto& b = path.positions[n + 1];
    if (a.is_junction()) {
      if (b.is_junction()) {
        ++t.hold;
      } else {
        if (b.radius != 1) throw std::logic_error("chain jumps away from the junction");
        ++t.exits[static_cast<std::size_t>(b.ray - 1)];
      }
    } else if (graph_distance(a, b) == 1 && (b.is_junction() || b.ray == a.ray)) {
      (b.radius > a.radius ? t.radial_up : t.radial_down)++;
    } else {
      throw std::logic_error("chain path moves by more than one lattice step");
    }
  }
  return t;
}

std::optional<int> exit_ray_after(const ChainPath& path, std::int64_t from) {
  for (auto n = static_cast<std::size_t>(std::max<std::int64_t>(0, from)); n + 1 < path.positions.size(); ++n) {
    if (path.positions[n].is_junction() && !path.positions[n + 1].is_junction()) return path.positions[n + 1].ray;
  }
  return std::nullopt;
}

void write_chain_csv(std::ostream& os, const ChainPath& path) {
  os << "time,ray,radius\n";
  for (std::size_t n = 0; n < path.positions.size(); ++n) {
    os << n << "," << path.positions[n].ray << "," << path.positions[n].radius << "\n";
  }
}

}  // namespace walshflow
