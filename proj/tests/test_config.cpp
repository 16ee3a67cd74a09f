#include <sstream>
#include <string>

#include "doctest.h"
#include "walshflow/config.hpp"
#include "walshflow/error.hpp"

using namespace walshflow;

namespace {

Config parse(const std::string& text) {
  std::istringstream in(text);
  return parse_config(in);
}

std::string failure(const std::string& text) {
  try {
    parse(text);
  } catch (const Error& e) {
    return e.what();
  }
  return "";
}

}  // namespace

TEST_CASE("config defaults and overrides") {
  const auto d = parse("# nothing set\n");
  CHECK(d.N == 3);
  CHECK(d.seed == 20240601u);
  CHECK(d.n_list.size() == 3);

  const auto c = parse("alpha = 1/4, 3/4\nseed = 7\nn_list = 10, 40\nwalk = 1, -1, 1\n");
  CHECK(c.N == 2);
  CHECK(c.alpha[1] == make_rational(3, 4));
  CHECK(c.seed == 7u);
  CHECK(c.n_list == std::vector<std::int64_t>{10, 40});
  REQUIRE(c.walk);
  CHECK(c.walk->size() == 3);
}

TEST_CASE("config errors name the field") {
  CHECK(failure("alpha = 1/2, 1/2, 1/3\n").find("'alpha'") != std::string::npos);
  CHECK(failure("alpha = 1/2, x\n").find("'alpha'") != std::string::npos);
  CHECK(failure("replicas = -3\n").find("'replicas'") != std::string::npos);
  CHECK(failure("bogus = 1\n").find("'bogus'") != std::string::npos);
  CHECK(failure("seed = 1\nseed = 2\n").find("'seed'") != std::string::npos);
  CHECK(failure("walk = 1, 2\n").find("'walk'") != std::string::npos);
}
