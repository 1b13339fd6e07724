#include <doctest.h>

#include "support.hpp"

using namespace testing;

TEST_CASE("E-ray maximum matches the closed form on 50 random profiles") {
  const ProblemParams pp(3, 2, 2);
  auto g = make_grid(3, 30.0, 1200);
  auto kern = assemble_kernel(g, pp);
  std::mt19937_64 gen(5);
  for (int t = 0; t < 50; ++t) {
    auto u = RadialProfile::sample(g, random_profile(gen));
    const auto rep = dilation_scan(u, kern, pp, ScanKind::e_ray);
    REQUIRE(rep.regime == "maximum");
    REQUIRE(rep.relative_gap <= 1e-6);
    const auto v = evaluate(u, kern, pp);
    REQUIRE(rel(rep.closed_form_value, 0.25 * v.quotient_s * v.quotient_s) < 1e-12);
  }
}

TEST_CASE("S-dilate minimum") {
  for (double p : {1.8, 2.0, 2.5, 3.5}) {
    const ProblemParams pp(3, 2, p);
    auto g = make_grid(3, 20.0, 800);
    auto kern = assemble_kernel(g, pp);
    auto u = RadialProfile::sample(g, [](double r) { return std::exp(-r * r) + 0.5 * std::exp(-r); });
    const auto rep = dilation_scan(u, kern, pp, ScanKind::s_dilate);
    CHECK(rep.regime == "minimum");
    CHECK(rep.relative_gap <= 1e-6);
    CHECK(rep.t_star.has_value());
  }
}

TEST_CASE("E0 mass dilation regimes") {
  auto g = make_grid(3, 20.0, 800);
  auto u = RadialProfile::sample(g, [](double r) { return std::exp(-r * r); });

  const ProblemParams sub(3, 2, 2);  // 1/p > 3/7
  auto ks = assemble_kernel(g, sub);
  auto r1 = dilation_scan(u, ks, sub, ScanKind::e0_mass_dilate);
  CHECK(r1.regime == "minimum");
  CHECK(r1.relative_gap <= 1e-6);
  CHECK_FALSE(r1.diverges);
  CHECK_THROWS_AS(dilation_scan(u, ks, sub, ScanKind::e0_mass_dilate, Extremum::maximum), RegimeError);

  const ProblemParams crit(3, 2, 7.0 / 3.0);
  auto kc = assemble_kernel(g, crit);
  CHECK(mass_dilation_exponent(crit) == doctest::Approx(2.0));
  auto r2 = dilation_scan(u, kc, crit, ScanKind::e0_mass_dilate);
  CHECK(r2.regime == "scale-invariant");
  CHECK(r2.relative_gap <= 1e-4);
  REQUIRE(r2.resampled_gap.has_value());
  CHECK(*r2.resampled_gap <= 1e-2);
  CHECK_THROWS_AS(dilation_scan(u, kc, crit, ScanKind::e0_mass_dilate, Extremum::minimum),
                  RegimeError);

  const ProblemParams sup(3, 2, 3);
  auto kp = assemble_kernel(g, sup);
  auto gf = make_grid(3, 20.0, 2000);
  auto kf = assemble_kernel(gf, sup);
  auto big = RadialProfile::sample(gf, [](double r) { return 3 * std::exp(-r * r); });
  auto r3 = dilation_scan(u, kp, sup, ScanKind::e0_mass_dilate);
  CHECK(r3.diverges);
  CHECK(r3.regime == "maximum-with-divergent-infimum");
  CHECK_THROWS_AS(dilation_scan(u, kp, sup, ScanKind::e0_mass_dilate, Extremum::minimum), RegimeError);
  // E0(t^{3/2} u_t) at t = 10 lies below t = 1 and still decreases
  auto e0 = [&](double t) { return evaluate(dilate(big, t, true), kf, sup).energy0; };
  CHECK(e0(10.0) < e0(1.0));
  CHECK(e0(12.0) < e0(10.0));
}

TEST_CASE("scan report JSON") {
  ScanReport r;
  r.which = ScanKind::s_dilate;
  r.regime = "minimum";
  auto j = to_json(r);
  CHECK(j["which"] == "S-dilate");
  CHECK(j["t_star"].is_null());
  CHECK(j.contains("relative_gap"));
  CHECK(parse_scan_kind("e0-mass-dilate") == ScanKind::e0_mass_dilate);
  CHECK_THROWS(parse_scan_kind("nope"));
}

TEST_CASE("golden section") {
  const double t = golden_section_min([](double x) { return std::pow(std::log(x / 3.0), 2); }, 1e-3, 1e3);
  CHECK(t == doctest::Approx(3.0).epsilon(1e-8));
  // optimum outside the initial bracket
  const double far = golden_section_min([](double x) { return std::pow(std::log(x / 1e5), 2); }, 1e-3, 1e3);
  CHECK(far == doctest::Approx(1e5).epsilon(1e-6));
}
