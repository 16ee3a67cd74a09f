// Batch driver: runs the checks for one subcommand, writes CSV/JSON/SVG
// artifacts and a manifest into output_dir, exits nonzero on any failure.
#include <openssl/evp.h>

#include <cstdio>
#include <filesystem>
#include <fstream>
#include <iostream>
#include <sstream>
#include <string>
#include <vector>

#include "CLI11.hpp"
#include "json.hpp"
#include "walshflow/checks.hpp"
#include "walshflow/config.hpp"
#include "walshflow/cv_transform.hpp"
#include "walshflow/error.hpp"
#include "walshflow/walk.hpp"

namespace fs = std::filesystem;
using namespace walshflow;

namespace {

// git hash-object: SHA-1 of "blob <size>\0" followed by the bytes.
std::string git_blob_sha1(const std::string& bytes) {
  const std::string header = "blob " + std::to_string(bytes.size()) + std::string(1, '\0');
  EVP_MD_CTX* ctx = EVP_MD_CTX_new();
  EVP_DigestInit_ex(ctx, EVP_sha1(), nullptr);
  EVP_DigestUpdate(ctx, header.data(), header.size());
  EVP_DigestUpdate(ctx, bytes.data(), bytes.size());
  unsigned char digest[EVP_MAX_MD_SIZE];
  unsigned int len = 0;
  EVP_DigestFinal_ex(ctx, digest, &len);
  EVP_MD_CTX_free(ctx);
  std::string hex;
  char buf[3];
  for (unsigned int i = 0; i < len; ++i) {
    std::snprintf(buf, sizeof buf, "%02x", digest[i]);
    hex += buf;
  }
  return hex;
}

std::string read_file(const std::string& path) {
  std::ifstream in(path, std::ios::binary);
  std::ostringstream os;
  os << in.rdbuf();
  return os.str();
}

void write_file(const fs::path& path, const std::string& content) {
  std::ofstream out(path, std::ios::binary);
  if (!out) throw Error(Errc::config_error, "cannot write '" + path.string() + "'");
  out << content;
}

std::string walk_csv(const WalkWindow& w) {
  std::ostringstream os;
  write_walk_csv(os, w);
  return os.str();
}

// cv-check on the walk given in the config instead of random walks.
CheckResult check_fixed_walk(const Config& c) {
  std::vector<std::int8_t> inc(c.walk->begin(), c.walk->end());
  const WalkWindow s(0, std::move(inc));
  const auto s_bar = cv_forward(s);
  CheckResult r;
  r.id = 1;
  r.name = "cv_fixed_walk";
  r.budget_seconds = 10;
  const auto gap = cv_invariant_check(s);
  const auto sign = !(cv_forward(s.negated()) == s_bar);
  const auto roundtrip = !(cv_inverse(s_bar, s.increment(1)) == s);
  const auto tau = tau_from_walk(s) != tau_from_image(s_bar);
  r.items.push_back({"max_gap", static_cast<double>(gap), 2.0, "<=", gap <= 2});
  r.items.push_back({"image_of_negated_walk", static_cast<double>(sign), 0.0, "==", !sign});
  r.items.push_back({"inverse_roundtrip", static_cast<double>(roundtrip), 0.0, "==", !roundtrip});
  r.items.push_back({"tau_recursion_vs_first_hits", static_cast<double>(tau), 0.0, "==", !tau});
  r.details["tau"] = tau_from_walk(s);
  r.details["y_bar"] = reflected_from_max(s_bar);
  r.artifacts["cv_walk.csv"] = walk_csv(s);
  r.artifacts["cv_image.csv"] = walk_csv(s_bar);
  return r;
}

std::vector<int> criteria_for(const std::string& sub) {
  if (sub == "cv-check") return {1, 2};
  if (sub == "chain-donsker") return {5};
  if (sub == "flip-check") return {3};
  if (sub == "flow-check") return {4};
  if (sub == "convergence") return {6, 7};
  return {1, 2, 3, 4, 5, 6, 7};
}

int run(const std::string& sub, const std::string& config_path, const std::string& output_override) {
  Config c = config_path.empty() ? Config{} : load_config(config_path);
  if (!output_override.empty()) c.output_dir = output_override;
  const std::string input = config_path.empty() ? to_json(c).dump() : read_file(config_path);

  std::vector<CheckResult> results;
  if (sub == "cv-check" && c.walk) {
    results.push_back(check_fixed_walk(c));
  } else {
    for (const int id : criteria_for(sub)) {
      std::cout << "running criterion " << id << "..." << std::endl;
      results.push_back(run_check(id, c));
    }
    if (sub == "cv-check") {
      const auto s = generate_walk(0, c.length, c.seed, 0);
      results.front().artifacts["cv_walk.csv"] = walk_csv(s);
      results.front().artifacts["cv_image.csv"] = walk_csv(cv_forward(s));
    }
  }

  const fs::path dir(c.output_dir);
  fs::create_directories(dir);
  auto checks = nlohmann::json::array();
  auto criteria = nlohmann::json::array();
  bool ok = true;
  for (const auto& r : results) {
    std::cout << summary_line(r) << std::endl;
    ok = ok && r.passed();
    for (const auto& i : r.items) {
      checks.push_back({{"name", std::to_string(r.id) + "." + r.name + "." + i.name},
                        {"status", i.passed ? "pass" : "fail"},
                        {"value", i.value},
                        {"threshold", i.threshold}});
    }
    const auto j = to_json(r);
    criteria.push_back(j);
    write_file(dir / ("criterion_" + std::to_string(r.id) + "_" + r.name + ".json"), j.dump(2) + "\n");
    for (const auto& [name, content] : r.artifacts) write_file(dir / name, content);
  }
  const nlohmann::json manifest = {{"subcommand", sub},
                                   {"config", to_json(c)},
                                   {"seed", c.seed},
                                   {"version", WALSHFLOW_VERSION},
                                   {"input", config_path.empty() ? "defaults" : fs::path(config_path).filename().string()},
                                   {"input_hash", git_blob_sha1(input)},
                                   {"checks", checks}};
  write_file(dir / "manifest.json", manifest.dump(2) + "\n");
  std::cout << (ok ? "all checks passed" : "some checks failed") << "; artifacts in " << dir.string() << std::endl;
  return ok ? 0 : 1;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"Random walk approximation of Walsh Brownian motion and its flows"};
  app.require_subcommand(1);
  std::string config_path;
  std::string output_dir;
  app.add_option("-c,--config", config_path, "key = value configuration file")->check(CLI::ExistingFile);
  app.add_option("-o,--output-dir", output_dir, "overrides output_dir from the configuration");
  const std::vector<std::pair<std::string, std::string>> subs = {
      {"cv-check", "transform invariants over random walks (or the configured walk)"},
      {"chain-donsker", "marginals at t = 1 of chain Q and the lazy chain"},
      {"flip-check", "excursion flipping: bounds, proof facts, exit laws"},
      {"flow-check", "exact flow identities: cocycles, closed forms, conditional law"},
      {"convergence", "beta metric checks and convergence profiles"},
      {"all", "every acceptance criterion"}};
  for (const auto& [name, help] : subs) app.add_subcommand(name, help);
  CLI11_PARSE(app, argc, argv);

  try {
    return run(app.get_subcommands().front()->get_name(), config_path, output_dir);
  } catch (const Error& e) {
    std::cerr << "error: " << e.what() << std::endl;
    return 2;
  } catch (const std::exception& e) {
    std::cerr << "error: " << e.what() << std::endl;
    return 2;
  }
}
