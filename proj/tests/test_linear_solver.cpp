#include <doctest.h>

#include "support.hpp"

using namespace testing;

namespace {

RadialProfile constant(const GridPtr& g, double c) {
  return RadialProfile::sample(g, [c](double) { return c; });
}

double yukawa_error(std::size_t n) {
  auto g = make_annulus_grid(3, 1.0, 20.0, n);
  RadialBVP b{constant(g, 1.0), constant(g, 0.0), InnerCondition::dirichlet, std::exp(-1.0),
              std::exp(-20.0) / 20.0};
  auto v = solve_bvp(b);
  double e = 0;
  for (std::size_t i = 0; i < n; ++i) {
    const double r = g->node(i);
    e = std::max(e, rel(v[i], std::exp(-r) / r));
  }
  return e;
}

}  // namespace

TEST_CASE("e^{-r}/r solves the homogeneous problem") {
  CHECK(yukawa_error(2000) < 1e-4);
  CHECK(yukawa_error(8000) < 1e-5);
  const double e1 = yukawa_error(500), e2 = yukawa_error(1000);
  CHECK(e1 / e2 >= 3.5);
}

TEST_CASE("trivial data gives the zero solution") {
  auto g = make_grid(3, 10.0, 300);
  auto v = solve_bvp({constant(g, 1.0), constant(g, 0.0)});
  for (double x : v.values()) REQUIRE(x == 0.0);
}

TEST_CASE("maximum and comparison principles") {
  std::mt19937_64 gen(13);
  std::uniform_real_distribution<double> u(0.0, 1.0);
  for (Spacing s : {Spacing::uniform, Spacing::graded}) {
    auto g = make_grid(3, 15.0, 400, s);
    std::vector<double> f1(g->size()), f2(g->size()), w(g->size());
    for (std::size_t i = 0; i < g->size(); ++i) {
      f1[i] = u(gen);
      f2[i] = f1[i] + u(gen);
      w[i] = 0.5 + u(gen);
    }
    RadialProfile pot(g, w);
    auto v1 = solve_bvp({pot, RadialProfile(g, f1), InnerCondition::neumann, 0.0, 0.2});
    auto v2 = solve_bvp({pot, RadialProfile(g, f2), InnerCondition::neumann, 0.0, 0.2});
    for (std::size_t i = 0; i < g->size(); ++i) {
      REQUIRE(v1[i] >= 0.0);
      REQUIRE(v1[i] <= v2[i]);
    }
  }
}

TEST_CASE("discrete operator is self-adjoint in the weighted inner product") {
  auto g = make_grid(3, 10.0, 500, Spacing::graded);
  auto pot = RadialProfile::sample(g, [](double r) { return 1.0 + 1.0 / (1.0 + r); });
  RadialBVP b{pot, constant(g, 0.0)};
  const std::size_t n = g->size();
  std::vector<double> x(n), y(n);
  for (std::size_t i = 0; i < n; ++i) {
    const double r = g->node(i);
    x[i] = std::exp(-r) * std::cos(r);
    y[i] = 1.0 / (1.0 + r * r);
  }
  x[n - 1] = y[n - 1] = 0.0;  // Dirichlet node
  const auto lx = apply_operator(b, x), ly = apply_operator(b, y);
  double a = 0, c = 0, scale = 0;
  for (std::size_t i = 0; i + 1 < n; ++i) {
    a += g->weight(i) * lx[i] * y[i];
    c += g->weight(i) * x[i] * ly[i];
    scale += g->weight(i) * std::abs(lx[i] * y[i]);
  }
  CHECK(std::abs(a - c) <= 1e-12 * scale);
}

TEST_CASE("coercivity is required") {
  auto g = make_grid(3, 10.0, 100);
  CHECK_THROWS_AS(solve_bvp({constant(g, 0.0), constant(g, 1.0)}), InvalidArgument);
  CHECK_THROWS_AS(solve_bvp({constant(g, -1.0), constant(g, 1.0)}), InvalidArgument);
}

TEST_CASE("power right-hand side plateau") {
  for (auto [lambda, beta] : {std::pair{1.0, 2.0}, {4.0, 3.0}}) {
    const auto a = power_rhs_check(lambda, beta, make_annulus_grid(3, 1.0, 30.0, 3000));
    const auto b = power_rhs_check(lambda, beta, make_annulus_grid(3, 1.0, 60.0, 6000));
    CHECK(a.deviation <= 2e-2);
    CHECK(b.deviation <= 2e-2);
    // O(1/r^2) correction: doubling r_max at least halves the deviation
    CHECK(a.deviation / b.deviation >= 2.0);
    CHECK(a.deviation == doctest::Approx(a.predicted_correction).epsilon(0.1));
  }
  auto g = make_annulus_grid(3, 1.0, 30.0, 1000);
  CHECK_THROWS_AS(power_rhs_check(1.0, 0.0, g), InvalidArgument);
  CHECK_THROWS_AS(power_rhs_check(0.0, 2.0, g), InvalidArgument);
  CHECK_THROWS_AS(power_rhs_check(1.0, 2.0, make_annulus_grid(3, 1.0, 20.0, 1000)), InvalidArgument);
  CHECK_THROWS_AS(power_rhs_check(1.0, 2.0, make_grid(3, 30.0, 1000)), InvalidArgument);
}
