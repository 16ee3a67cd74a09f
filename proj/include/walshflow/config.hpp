#pragma once

#include <cstdint>
#include <istream>
#include <optional>
#include <string>
#include <vector>

#include "json.hpp"
#include "walshflow/rational.hpp"
#include "walshflow/star_graph.hpp"

namespace walshflow {

// Flat "key = value" run configuration; '#' starts a comment. Lists are
// comma separated, alpha entries are "num/den".
struct Config {
  int N = 3;
  std::vector<Rational> alpha = {make_rational(1, 2), make_rational(1, 3), make_rational(1, 6)};
  std::uint64_t seed = 20240601;
  std::int64_t replicas = 10000;
  std::int64_t length = 1000;
  std::vector<std::int64_t> n_list = {100, 1000, 10000};
  double T = 1.0;
  double s = 0.0;
  int x_ray = 1;
  double x_radius = 0.5;
  std::string output_dir = "walshflow_out";
  int workers = 1;
  std::int64_t donsker_n = 10000;
  std::int64_t convergence_replicas = 200;
  bool svg = true;
  // Increments (+1/-1) of a fixed walk for cv-check; replaces the random walks.
  std::optional<std::vector<int>> walk;

  RayParams params() const { return RayParams(alpha); }
  GraphPoint x() const { return GraphPoint{x_ray, x_radius}; }
};

// Throws Error(config_error) naming the offending key.
Config parse_config(std::istream& in);
Config load_config(const std::string& path);

nlohmann::json to_json(const Config& c);

}  // namespace walshflow
