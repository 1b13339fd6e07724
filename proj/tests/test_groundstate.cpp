#include <doctest.h>

#include <filesystem>
#include <fstream>

#include "support.hpp"

using namespace testing;

TEST_CASE("init profiles") {
  auto g = make_grid(3, 20.0, 400);
  auto gauss = init_profile(InitKind::gaussian, g);
  CHECK(gauss[0] == doctest::Approx(std::exp(-g->node(0) * g->node(0))));
  CHECK(gauss[0] > 0.9999);
  auto ex = init_profile(InitKind::exponential, g);
  CHECK(ex.positive());
  CHECK(ex.monotone());
  CHECK_THROWS_AS(init_profile(InitKind::file, g, "/nonexistent/profile.csv"), InputError);

  const auto path = std::filesystem::temp_directory_path() / "choquard_bad_profile.csv";
  std::ofstream(path) << "r,value\n0.1,1.0\n0.2,oops\n";
  try {
    init_profile(InitKind::file, g, path);
    FAIL("expected InputError");
  } catch (const InputError& e) {
    CHECK(e.line() == 3);
  }
  std::filesystem::remove(path);
  CHECK(parse_init_kind("exponential") == InitKind::exponential);
  CHECK_THROWS(parse_init_kind("sinc"));
}

TEST_CASE("solver config validation") {
  SolverConfig c;
  CHECK_NOTHROW(c.validate());
  c.tol_residual = 0;
  CHECK_THROWS_AS(c.validate(), InvalidArgument);
  c = {};
  c.max_iter = 0;
  CHECK_THROWS_AS(c.validate(), InvalidArgument);
  c = {};
  c.damping = 1.5;
  CHECK_THROWS_AS(c.validate(), InvalidArgument);
}

TEST_CASE("nonexistence gate") {
  auto g = make_grid(3, 20.0, 100);
  for (double p : {5.0, 5.0 / 3.0, 6.0, 1.5}) {
    const ProblemParams pp(3, 2, p);
    auto kern = assemble_kernel(g, pp);
    CHECK_THROWS_AS(solve_groundstate(pp, kern, SolverConfig{}), NonexistenceError);
  }
}

TEST_CASE("physical groundstate") {
  const auto& s = solved(3, 2.0, 2.0, 30.0, 1500);
  const ProblemParams pp(3, 2, 2);
  const auto& res = s.result;
  REQUIRE(res.converged);
  CHECK(res.profile.monotone());
  for (std::size_t k = 2; k < res.s_history.size(); ++k)
    REQUIRE(res.s_history[k] <= res.s_history[k - 1] * (1 + 1e-12));
  const auto& v = res.values;
  CHECK(rel(v.energy, 0.25 * (v.kinetic + v.mass)) < 1e-10);

  const auto rep = verify_groundstate(res, s.kernel, pp);
  CHECK(rep.all_pass());
  CHECK(rep.positive());
  CHECK(rep.monotone());
  CHECK(std::abs(rep.pohozaev_residual) <= 1e-3);
  CHECK(std::abs(rep.nehari_residual) <= 1e-8);

  // groundstate minimizes S over a probe set
  std::mt19937_64 gen(17);
  for (int t = 0; t < 20; ++t) {
    auto probe = nehari_project(RadialProfile::sample(s.grid, random_profile(gen)), s.kernel, pp);
    REQUIRE(v.quotient_s <= evaluate(probe.profile, s.kernel, pp).quotient_s);
  }
}

TEST_CASE("inits agree on S") {
  const auto& a = solved(3, 2.0, 2.0, 30.0, 1500);
  const auto& b = solved(3, 2.0, 2.0, 30.0, 1500, Spacing::uniform, InitKind::exponential);
  REQUIRE(b.result.converged);
  CHECK(rel(a.result.values.quotient_s, b.result.values.quotient_s) < 1e-6);
}

TEST_CASE("tail insensitivity under r_max x 1.5") {
  const auto& a = solved(3, 2.0, 2.0, 30.0, 1500);
  const auto& b = solved(3, 2.0, 2.0, 45.0, 2250);
  REQUIRE(b.result.converged);
  CHECK(rel(a.result.values.quotient_s, b.result.values.quotient_s) < 1e-6);
}

TEST_CASE("one iteration step preserves positivity") {
  const ProblemParams pp(3, 2, 2);
  const auto& s = solved(3, 2.0, 2.0, 30.0, 1500);
  auto u = RadialProfile::sample(s.grid, [](double r) { return r < 3 ? 1.0 : 0.0; });
  SolverConfig one;
  one.max_iter = 1;
  const auto res = solve_groundstate(pp, s.kernel, one, u);
  CHECK_FALSE(res.converged);
  for (double x : res.profile.values()) REQUIRE(x >= 0.0);
}

TEST_CASE("perturbed and zero profiles fail the certificate") {
  const ProblemParams pp(3, 2, 2);
  const auto& s = solved(3, 2.0, 2.0, 30.0, 1500);
  auto u = s.result.profile;
  for (std::size_t i = 0; i < u.size(); ++i) u.mutable_values()[i] *= 1 + 0.01 * std::sin(s.grid->node(i));
  const auto rep = verify_groundstate(u, s.kernel, pp);
  CHECK(std::abs(rep.pohozaev_residual) > 1e-3);
  CHECK_FALSE(rep.all_pass());
  auto zero = RadialProfile::sample(s.grid, [](double) { return 0.0; });
  CHECK_THROWS_AS(verify_groundstate(zero, s.kernel, pp), DegenerateInput);
}

TEST_CASE("superlinear and sublinear solves converge") {
  // the p = 3 state is more peaked; its PDE residual needs the finer grid
  for (auto [p, n] : {std::pair{2.5, std::size_t{1500}}, {3.0, std::size_t{3000}}}) {
    const auto& s = solved(3, 2.0, p, 30.0, n);
    CHECK(s.result.converged);
    CHECK(verify_groundstate(s.result, s.kernel, ProblemParams(3, 2, p)).all_pass());
  }
  const auto& sub = solved(3, 2.0, 1.8, 120.0, 1500, Spacing::graded);
  CHECK(sub.result.converged);
  CHECK(verify_groundstate(sub.result, sub.kernel, ProblemParams(3, 2, 1.8)).nehari_ok());
}

TEST_CASE("verification JSON") {
  const auto& s = solved(3, 2.0, 2.0, 30.0, 1500);
  auto j = to_json(verify_groundstate(s.result, s.kernel, ProblemParams(3, 2, 2)));
  for (const char* key : {"nehari_residual", "pohozaev_residual", "integral_identity_residual",
                          "pde_residual", "farfield_ratio", "positivity", "monotonicity"}) {
    REQUIRE(j.contains(key));
    CHECK(j[key]["pass"] == true);
  }
  CHECK(j["all_pass"] == true);
}
