#include <doctest.h>

#include <filesystem>
#include <fstream>

#include "support.hpp"

using namespace testing;

TEST_CASE("csv round trip") {
  auto g = make_grid(3, 10.0, 50);
  auto u = RadialProfile::sample(g, [](double r) { return std::exp(-r) / 3.0; });
  const auto path = std::filesystem::temp_directory_path() / "choquard_roundtrip.csv";
  write_profile_csv(path, u);
  const auto s = read_profile_csv(path);
  REQUIRE(s.r.size() == u.size());
  for (std::size_t i = 0; i < u.size(); ++i) {
    REQUIRE(s.r[i] == g->node(i));
    REQUIRE(s.value[i] == u[i]);
  }
  std::filesystem::remove(path);
}

TEST_CASE("csv errors carry line numbers") {
  auto line_of = [](std::string_view text) -> std::size_t {
    try {
      parse_profile_csv(text);
    } catch (const InputError& e) {
      return e.line();
    }
    return 0;
  };
  CHECK(line_of("x,y\n0,1\n") == 1);
  CHECK(line_of("r,value\n0,1\n1,2\n1,3\n2,4\n") == 4);
  CHECK(line_of("r,value\n0,1\n1\n") == 3);
  CHECK(line_of("r,value\n0,1\n1,2\n2,3\n") != 0);  // too few samples
  CHECK(line_of("r,value\n0,1\n1,2\n2,3\n3,4\n") == 0);
  CHECK_THROWS_AS(read_profile_csv("/nonexistent.csv"), InputError);
}

TEST_CASE("format_double round trips") {
  for (double x : {0.1, 1.0 / 3.0, 1e-300, 6.02214076e23, -2.5})
    CHECK(std::stod(format_double(x)) == x);
}
