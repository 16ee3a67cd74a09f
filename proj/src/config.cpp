#include "walshflow/config.hpp"

#include <algorithm>
#include <charconv>
#include <fstream>
#include <set>
#include <sstream>

#include "walshflow/error.hpp"

namespace walshflow {
namespace {

std::string trim(std::string_view s) {
  const auto b = s.find_first_not_of(" \t\r");
  if (b == std::string_view::npos) return {};
  const auto e = s.find_last_not_of(" \t\r");
  return std::string(s.substr(b, e - b + 1));
}

[[noreturn]] void fail(const std::string& key, const std::string& why) {
  throw Error(Errc::config_error, "field '" + key + "': " + why);
}

template <class Int>
Int parse_int(const std::string& key, const std::string& text) {
  Int v{};
  const auto [ptr, ec] = std::from_chars(text.data(), text.data() + text.size(), v);
  if (ec != std::errc{} || ptr != text.data() + text.size()) fail(key, "expected an integer, got '" + text + "'");
  return v;
}

double parse_real(const std::string& key, const std::string& text) {
  try {
    std::size_t used = 0;
    const double v = std::stod(text, &used);
    if (used != text.size()) throw std::invalid_argument(text);
    return v;
  } catch (const std::exception&) {
    fail(key, "expected a number, got '" + text + "'");
  }
}

std::vector<std::string> split_list(const std::string& text) {
  std::vector<std::string> out;
  std::stringstream ss(text);
  std::string item;
  while (std::getline(ss, item, ',')) out.push_back(trim(item));
  return out;
}

}  // namespace

Config parse_config(std::istream& in) {
  Config c;
  std::set<std::string> seen;
  std::string line;
  bool n_given = false;
  while (std::getline(in, line)) {
    if (const auto hash = line.find('#'); hash != std::string::npos) line.resize(hash);
    line = trim(line);
    if (line.empty()) continue;
    const auto eq = line.find('=');
    if (eq == std::string::npos) fail(line, "expected 'key = value'");
    const std::string key = trim(std::string_view(line).substr(0, eq));
    const std::string value = trim(std::string_view(line).substr(eq + 1));
    if (!seen.insert(key).second) fail(key, "given twice");
    if (value.empty()) fail(key, "empty value");

    if (key == "N") {
      c.N = parse_int<int>(key, value);
      n_given = true;
    } else if (key == "alpha") {
      c.alpha.clear();
      for (const auto& item : split_list(value)) {
        try {
          c.alpha.push_back(parse_rational(item));
        } catch (const std::exception&) {
          fail(key, "bad rational '" + item + "'");
        }
      }
    } else if (key == "seed") {
      c.seed = parse_int<std::uint64_t>(key, value);
    } else if (key == "replicas") {
      c.replicas = parse_int<std::int64_t>(key, value);
    } else if (key == "length") {
      c.length = parse_int<std::int64_t>(key, value);
    } else if (key == "n_list") {
      c.n_list.clear();
      for (const auto& item : split_list(value)) c.n_list.push_back(parse_int<std::int64_t>(key, item));
    } else if (key == "T") {
      c.T = parse_real(key, value);
    } else if (key == "s") {
      c.s = parse_real(key, value);
    } else if (key == "x_ray") {
      c.x_ray = parse_int<int>(key, value);
    } else if (key == "x_radius") {
      c.x_radius = parse_real(key, value);
    } else if (key == "output_dir") {
      c.output_dir = value;
    } else if (key == "workers") {
      c.workers = parse_int<int>(key, value);
    } else if (key == "donsker_n") {
      c.donsker_n = parse_int<std::int64_t>(key, value);
    } else if (key == "convergence_replicas") {
      c.convergence_replicas = parse_int<std::int64_t>(key, value);
    } else if (key == "svg") {
      if (value != "true" && value != "false") fail(key, "expected true or false");
      c.svg = value == "true";
    } else if (key == "walk") {
      std::vector<int> inc;
      for (const auto& item : split_list(value)) {
        const int v = parse_int<int>(key, item);
        if (v != 1 && v != -1) fail(key, "increments must be +1 or -1");
        inc.push_back(v);
      }
      c.walk = std::move(inc);
    } else {
      fail(key, "unknown key");
    }
  }

  if (!n_given) c.N = static_cast<int>(c.alpha.size());
  if (c.N < 1) fail("N", "need at least one ray");
  if (static_cast<int>(c.alpha.size()) != c.N) fail("alpha", "expected N = " + std::to_string(c.N) + " entries");
  Rational total(0);
  for (const auto& a : c.alpha) {
    if (a <= Rational(0)) fail("alpha", "entries must be positive");
    total += a;
  }
  if (total != Rational(1)) fail("alpha", "entries sum to " + to_string(total) + ", not 1");
  if (c.replicas < 1) fail("replicas", "must be >= 1");
  if (c.length < 2) fail("length", "must be >= 2");
  if (c.n_list.empty()) fail("n_list", "must not be empty");
  for (const auto n : c.n_list) {
    if (n < 1) fail("n_list", "entries must be >= 1");
  }
  if (!(c.T > 0.0)) fail("T", "must be positive");
  if (c.s < 0.0) fail("s", "must be >= 0");
  if (c.x_ray < 1 || c.x_ray > c.N) fail("x_ray", "must be in [1, N]");
  if (c.x_radius < 0.0) fail("x_radius", "must be >= 0");
  if (c.workers < 1) fail("workers", "must be >= 1");
  if (c.donsker_n < 1) fail("donsker_n", "must be >= 1");
  if (c.convergence_replicas < 1) fail("convergence_replicas", "must be >= 1");
  if (c.walk && c.walk->size() < 2) fail("walk", "needs at least two increments");
  return c;
}

Config load_config(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw Error(Errc::config_error, "cannot open config file '" + path + "'");
  return parse_config(in);
}

nlohmann::json to_json(const Config& c) {
  auto alpha = nlohmann::json::array();
  for (const auto& a : c.alpha) alpha.push_back(to_string(a));
  nlohmann::json j = {{"N", c.N},
                      {"alpha", alpha},
                      {"seed", c.seed},
                      {"replicas", c.replicas},
                      {"length", c.length},
                      {"n_list", c.n_list},
                      {"T", c.T},
                      {"s", c.s},
                      {"x_ray", c.x_ray},
                      {"x_radius", c.x_radius},
                      {"output_dir", c.output_dir},
                      {"workers", c.workers},
                      {"donsker_n", c.donsker_n},
                      {"convergence_replicas", c.convergence_replicas},
                      {"svg", c.svg}};
  if (c.walk) j["walk"] = *c.walk;
  return j;
}

}  // namespace walshflow
