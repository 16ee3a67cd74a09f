#include "walshflow/star_graph.hpp"

#include <charconv>
#include <sstream>

namespace walshflow {

std::string_view to_string(Errc code) {
  switch (code) {
    case Errc::invalid_params: return "InvalidParams";
    case Errc::negative_radius: return "NegativeRadius";
    case Errc::empty_window: return "EmptyWindow";
    case Errc::out_of_window: return "OutOfWindow";
    case Errc::negative_value: return "NegativeValue";
    case Errc::too_short: return "TooShort";
    case Errc::not_a_preimage: return "NotAPreimage";
    case Errc::incomplete_block: return "IncompleteBlock";
    case Errc::window_too_large: return "WindowTooLarge";
    case Errc::lattice_mismatch: return "LatticeMismatch";
    case Errc::out_of_domain: return "OutOfDomain";
    case Errc::too_few_samples: return "TooFewSamples";
    case Errc::sparse_cells: return "SparseCells";
    case Errc::config_error: return "ConfigError";
  }
  return "Unknown";
}

namespace {

std::string_view trim(std::string_view s) {
  while (!s.empty() && (s.front() == ' ' || s.front() == '\t')) s.remove_prefix(1);
  while (!s.empty() && (s.back() == ' ' || s.back() == '\t')) s.remove_suffix(1);
  return s;
}

std::int64_t parse_int(std::string_view s, std::string_view whole) {
  s = trim(s);
  if (!s.empty() && s.front() == '+') s.remove_prefix(1);
  std::int64_t v = 0;
  const auto [ptr, ec] = std::from_chars(s.data(), s.data() + s.size(), v);
  if (s.empty() || ec != std::errc{} || ptr != s.data() + s.size()) {
    throw Error(Errc::config_error, "malformed rational '" + std::string(whole) + "'");
  }
  return v;
}

}  // namespace

Rational parse_rational(std::string_view text) {
  const auto slash = text.find('/');
  if (slash == std::string_view::npos) return make_rational(parse_int(text, text));
  const std::int64_t den = parse_int(text.substr(slash + 1), text);
  if (den == 0) throw Error(Errc::config_error, "zero denominator in '" + std::string(text) + "'");
  return make_rational(parse_int(text.substr(0, slash), text), den);
}

std::string to_string(const Rational& r) {
  std::ostringstream os;
  os << numerator(r);
  if (denominator(r) != 1) os << "/" << denominator(r);
  return os.str();
}

RayParams::RayParams(std::vector<Rational> alpha) : alpha_(std::move(alpha)) {
  if (alpha_.empty()) throw Error(Errc::invalid_params, "alpha: need at least one ray");
  Rational total(0);
  for (const auto& a : alpha_) {
    if (a <= Rational(0)) throw Error(Errc::invalid_params, "alpha: every weight must be > 0");
    total += a;
  }
  if (total != Rational(1)) {
    throw Error(Errc::invalid_params, "alpha: weights sum to " + to_string(total) + ", not 1");
  }
  double acc = 0.0;
  for (const auto& a : alpha_) {
    alpha_d_.push_back(to_double(a));
    acc += alpha_d_.back();
    cumulative_.push_back(acc);
  }
  cumulative_.back() = 1.0;
}

int RayParams::draw_ray(double u) const {
  for (std::size_t i = 0; i < cumulative_.size(); ++i) {
    if (u < cumulative_[i]) return static_cast<int>(i) + 1;
  }
  return rays();
}

GraphMeasure rescale(const RayParams& params, const LatticeMeasure& m, double scale) {
  std::vector<GraphMeasure::Atom> atoms;
  atoms.reserve(m.size());
  for (const auto& [p, w] : m.atoms()) atoms.emplace_back(to_graph_point(p, scale), w);
  return GraphMeasure::from_atoms(params, std::move(atoms));
}

GraphMeasure diffusive(const RayParams& params, const LatticeMeasure& m, std::int64_t n) {
  std::vector<GraphMeasure::Atom> atoms;
  atoms.reserve(m.size());
  for (const auto& [p, w] : m.atoms()) atoms.emplace_back(diffusive(p, n), w);
  return GraphMeasure::from_atoms(params, std::move(atoms));
}

}  // namespace walshflow
