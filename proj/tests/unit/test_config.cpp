#include <doctest.h>

#include "ofront/config.hpp"
#include "ofront/error.hpp"

using namespace ofront;

TEST_CASE("config round trip") {
  ExperimentConfig c;
  c.sh = 2;
  c.sv = 5;
  c.a = 0.4;
  c.literal_sign = true;
  c.model = "dmc";
  c.taus = {10.0, 1.0 / 3.0};
  c.ak_perturb = {2.0, 1e-3};
  c.out = "some/dir";
  c.seed = 123456789012345ULL;
  const ExperimentConfig back = parse_config(serialize_config(c));
  CHECK(serialize_config(back) == serialize_config(c));
  CHECK(back.taus[1] == 1.0 / 3.0);
  CHECK(back.seed == c.seed);
}

TEST_CASE("config parsing") {
  const ExperimentConfig c = parse_config("# comment\n sh = 3 \nsv=2  # trailing\n\ngreens_times = 1, 2.5\n");
  CHECK(c.sh == 3);
  CHECK(c.sv == 2);
  CHECK(c.greens_times == std::vector<double>{1.0, 2.5});
  CHECK(c.a == 0.45);
  CHECK_THROWS_AS(parse_config("nope = 1\n"), Error);
  CHECK_THROWS_AS(parse_config("sh = two\n"), Error);
  CHECK_THROWS_AS(parse_config("sh 2\n"), Error);
  CHECK_THROWS_AS(parse_config("literal_sign = maybe\n"), Error);
}

TEST_CASE("config checks") {
  ExperimentConfig c;
  CHECK_NOTHROW(check_config(c));
  c.tol_mass = 0.0;
  CHECK_THROWS_AS(check_config(c), Error);
  c = {};
  c.model = "heat";
  CHECK_THROWS_AS(check_config(c), Error);
  c = {};
  c.ak_perturb = {1.0};
  CHECK_THROWS_AS(check_config(c), Error);
}
