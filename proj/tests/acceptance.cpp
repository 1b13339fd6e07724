// Acceptance run: one PASS/FAIL line per criterion, tolerances fixed below.
#include <chrono>
#include <cstdio>
#include <string>

#include "support.hpp"

using namespace testing;

namespace {

namespace tol {
constexpr double nehari = 1e-8;
constexpr double pohozaev = 1e-3;
constexpr double mass_energy = 1e-3;
constexpr double runtime_s = 60.0;
constexpr double e_ray = 1e-6;
constexpr double scale_invariance = 1e-4;
constexpr double resampling = 2e-3;  // interpolated dilations
constexpr double kernel_l2 = 1e-4;
constexpr double ball = 1e-4;
constexpr double ball_exclusion = 0.05;  // |r - 1| skipped around the interface
constexpr double farfield_band = 1e-2;
constexpr double superlinear_drift = 0.05;
constexpr double log_derivative = 2e-2;
constexpr double exponent = 5e-2;
constexpr double sublinear_plateau = 0.10;
constexpr double sublinear_farfield = 0.05;
constexpr double power_plateau = 2e-2;
constexpr double power_halving = 2.0;
constexpr double pairing = 1e-12;
constexpr double init_agreement = 1e-6;
constexpr double second_order = 3.5;
}  // namespace tol

int failures = 0;

void report(int id, bool ok, const char* what, const std::string& detail) {
  std::printf("criterion %d [%s] %s: %s\n", id, ok ? "PASS" : "FAIL", what, detail.c_str());
  std::fflush(stdout);
  if (!ok) ++failures;
}

template <class... A>
std::string fmt(const char* f, A... a) {
  char buf[512];
  std::snprintf(buf, sizeof buf, f, a...);
  return buf;
}

double seconds_since(std::chrono::steady_clock::time_point t0) {
  return std::chrono::duration<double>(std::chrono::steady_clock::now() - t0).count();
}

struct Case {
  GridPtr grid;
  KernelMatrix kernel;
  GroundstateResult result;
  double seconds;
};

Case solve_case(const ProblemParams& pp, double r_max, std::size_t n, Spacing s,
                InitKind init = InitKind::gaussian) {
  const auto t0 = std::chrono::steady_clock::now();
  auto grid = make_grid(pp.dim(), r_max, n, s);
  auto kernel = assemble_kernel(grid, pp, 1);
  SolverConfig cfg;
  cfg.init = init;
  auto result = solve_groundstate(pp, kernel, cfg);
  return {grid, std::move(kernel), std::move(result), seconds_since(t0)};
}

}  // namespace

int main() {
  const ProblemParams phys(3, 2, 2);

  // 1
  const Case base = solve_case(phys, 30.0, 3000, Spacing::uniform);
  const auto ver = verify_groundstate(base.result, base.kernel, phys);
  {
    const auto& v = base.result.values;
    const double me = std::abs(v.mass / (3 * v.energy) - 1);
    const bool ok = base.result.converged && std::abs(ver.nehari_residual) <= tol::nehari &&
                    std::abs(ver.pohozaev_residual) <= tol::pohozaev && me <= tol::mass_energy &&
                    base.seconds <= tol::runtime_s;
    report(1, ok, "physical-case certification",
           fmt("converged=%d iterations=%d nehari=%.2e pohozaev=%.2e |M/3E-1|=%.2e time=%.1fs",
               base.result.converged, base.result.iterations, ver.nehari_residual,
               ver.pohozaev_residual, me, base.seconds));
  }

  // 2
  {
    std::mt19937_64 gen(2024);
    double worst = 0;
    for (int k = 0; k < 50; ++k) {
      auto u = RadialProfile::sample(base.grid, random_profile(gen));
      worst = std::max(worst, dilation_scan(u, base.kernel, phys, ScanKind::e_ray).relative_gap);
    }
    const ProblemParams crit(3, 2, 7.0 / 3.0), sup(3, 2, 3);
    // the gaussian probe lives on r < 6; a finer grid keeps the O(h^2) error of K
    // below the tolerance for the contracted dilations (t = 2)
    auto fine = make_grid(3, 10.0, 4000);
    auto kc = assemble_kernel(fine, crit, 1);
    auto kp = assemble_kernel(fine, sup, 1);
    auto probe = RadialProfile::sample(fine, [](double r) { return std::exp(-r * r); });
    const auto inv = dilation_scan(probe, kc, crit, ScanKind::e0_mass_dilate);
    const auto div = dilation_scan(probe, kp, sup, ScanKind::e0_mass_dilate);
    const double resampled = inv.resampled_gap.value_or(1.0);
    // the law on exactly sampled dilations t^{3/2} e^{-t^2 r^2}
    const double e0 = evaluate(probe, kc, crit).energy0;
    double sampled = 0;
    for (double t : {0.5, 0.75, 1.5, 2.0}) {
      auto ut = RadialProfile::sample(fine, [t](double r) { return std::pow(t, 1.5) * std::exp(-t * t * r * r); });
      sampled = std::max(sampled, rel(evaluate(ut, kc, crit).energy0 / (t * t), e0));
    }
    const bool ok = worst <= tol::e_ray && inv.regime == "scale-invariant" &&
                    inv.relative_gap <= tol::scale_invariance && sampled <= tol::scale_invariance &&
                    resampled <= tol::resampling && div.diverges;
    report(2, ok, "scaling-identity audit",
           fmt("max E-ray gap=%.2e over 50 profiles; p=7/3 %s: algebraic gap=%.2e, sampled dilations "
               "%.2e, interpolated dilations %.2e; p=3 diverges=%d",
               worst, inv.regime.c_str(), inv.relative_gap, sampled, resampled, div.diverges));
  }

  // 3
  {
    auto gate = [&](double p) {
      const ProblemParams pp(3, 2, p);
      if (pp.admissible()) return false;
      try {
        solve_groundstate(pp, base.kernel, SolverConfig{});
      } catch (const NonexistenceError&) {
        return true;
      }
      return false;
    };
    const bool lib = gate(5.0) && gate(5.0 / 3.0);
    // the CLI maps the same gate to exit 2; covered by the cli_exit_* tests
    report(3, lib, "nonexistence gate", fmt("p=5 rejected=%d, p=5/3 rejected=%d", gate(5.0), gate(5.0 / 3.0)));
  }

  // 4
  {
    std::mt19937_64 gen(4);
    double worst = 0;
    for (int k = 0; k < 20; ++k) {
      const RandomProfile f = random_profile(gen);
      auto out = riesz_convolve(base.kernel, RadialProfile::sample(base.grid, f), 1.0);
      double num = 0, den = 0;
      for (std::size_t i = 0; i < base.grid->size(); i += 5) {
        const double ex = newton_oracle(f, base.grid->node(i), 30.0);
        num += base.grid->weight(i) * (out[i] - ex) * (out[i] - ex);
        den += base.grid->weight(i) * ex * ex;
      }
      worst = std::max(worst, std::sqrt(num / den));
    }
    auto g = make_grid(3, 3.0, 1000);
    auto k = assemble_kernel(g, phys, 1);
    auto out = k.apply(ball_indicator(g).values());
    double ball = 0;
    for (std::size_t i = 0; i < g->size(); ++i) {
      const double r = g->node(i);
      if (std::abs(r - 1) < tol::ball_exclusion) continue;
      ball = std::max(ball, rel(out[i], r <= 1 ? 0.5 - r * r / 6 : 1 / (3 * r)));
    }
    report(4, worst <= tol::kernel_l2 && ball <= tol::ball, "Riesz kernel oracle",
           fmt("max weighted-L2 error=%.2e over 20 profiles; ball potential max error=%.2e", worst, ball));
  }

  // 5
  {
    const auto& u = base.result.profile;
    const double p = phys.p();
    const double mass = integrate(u, p);
    auto conv = riesz_convolve(base.kernel, u, p);
    auto d = farfield_deviation(conv, mass, phys);
    const double lead = phys.riesz_constant() * mass;
    const double lo = ver.farfield_window_lo, hi = ver.farfield_window_hi;
    double band = 0;
    // envelope 1/(1+r) + 1/(1+r^{N(p-1)}); constant fitted on [2, 6], checked on [6, hi]
    auto env = [&](double r) { return 1 / (1 + r) + 1 / (1 + std::pow(r, 3 * (p - 1))); };
    double c_fit = 0, c_rest = 0;
    for (std::size_t i = 0; i < u.size(); ++i) {
      const double r = u.grid().node(i);
      if (r >= lo && r <= hi)
        band = std::max(band, std::abs(std::pow(r, 3 - phys.alpha()) * conv[i] / lead - 1));
      const double ratio = d[i] / (lead * env(r));
      if (r >= 2 && r < 6) c_fit = std::max(c_fit, ratio);
      if (r >= 6 && r <= hi) c_rest = std::max(c_rest, ratio);
    }
    const bool ok = band <= tol::farfield_band && c_rest <= c_fit;
    report(5, ok, "far-field law",
           fmt("max |ratio-1| on [%.0f, %.0f] = %.2e; envelope constant fitted %.2e, tail needs %.2e",
               lo, hi, band, c_fit, c_rest));
  }

  // 6
  {
    const ProblemParams sup(3, 2, 2.5), sub(3, 2, 1.8);
    const Case cs = solve_case(sup, 30.0, 3000, Spacing::uniform);
    const auto dsup = decay_limit(cs.result.profile, sup);

    const auto& v = base.result.values;
    const double nu = v.mass / (4 * M_PI);
    const auto ld = linear_log_derivative_check(base.result.profile, phys, nu);
    const auto fit = fit_tail_exponent(base.result.profile, phys, nu);
    const double predicted = -(1 - 3 * v.energy / (8 * M_PI));
    const double exp_err = rel(-fit.exponent, predicted);

    const Case cl = solve_case(sub, 240.0, 3000, Spacing::graded);
    const auto dsub = decay_limit(cl.result.profile, sub);
    const double limit = *dsub.predicted_limit;
    const double sub_err = std::abs(dsub.plateau / limit - 1);
    auto conv = riesz_convolve(cl.kernel, cl.result.profile, sub.p());
    double ff = 0;
    for (std::size_t i = 0; i < cl.grid->size(); ++i) {
      const double r = cl.grid->node(i);
      if (r < dsub.window_lo || r > dsub.window_hi) continue;
      ff = std::max(ff, std::abs(r * conv[i] / dsub.plateau - 1));
    }
    const bool ok = cs.result.converged && cl.result.converged && dsup.drift <= tol::superlinear_drift &&
                    ld.max_relative_deviation <= tol::log_derivative && exp_err <= tol::exponent &&
                    sub_err <= tol::sublinear_plateau && ff <= tol::sublinear_farfield;
    report(6, ok, "decay regimes",
           fmt("p=2.5 drift=%.2e; p=2 log-derivative=%.2e, power %.4f vs %.4f (%.2e); "
               "p=1.8 plateau/limit-1=%.2e, far-field agreement=%.2e",
               dsup.drift, ld.max_relative_deviation, -fit.exponent, predicted, exp_err, sub_err, ff));
  }

  // 7
  {
    bool ok = true;
    std::string detail;
    for (auto [lambda, beta] : {std::pair{1.0, 2.0}, {4.0, 3.0}}) {
      const auto a = power_rhs_check(lambda, beta, make_annulus_grid(3, 1.0, 30.0, 3000));
      const auto b = power_rhs_check(lambda, beta, make_annulus_grid(3, 1.0, 60.0, 6000));
      const double ratio = a.deviation / b.deviation;
      ok = ok && a.deviation <= tol::power_plateau && b.deviation <= tol::power_plateau &&
           ratio >= tol::power_halving;
      detail += fmt("(%g,%g) dev %.2e -> %.2e ratio %.2f; ", lambda, beta, a.deviation, b.deviation, ratio);
    }
    report(7, ok, "linear power right-hand side", detail);
  }

  // 8
  {
    const auto rep = run_pairing_campaign(500, 1, 1, tol::pairing);
    const bool ok = rep.trials == 500 && rep.min_gain >= -tol::pairing && rep.anomalies == 0 &&
                    rep.failures.empty();
    report(8, ok, "polarization campaign",
           fmt("500 trials, min gain=%.2e, zero-gain=%zu, anomalous=%zu", rep.min_gain,
               rep.equality_count, rep.anomalies));
  }

  // 9
  {
    SolverConfig cfg;
    cfg.init = InitKind::exponential;
    const auto alt = solve_groundstate(phys, base.kernel, cfg);
    const double agree = rel(alt.values.quotient_s, base.result.values.quotient_s);
    const Case coarse = solve_case(phys, 30.0, 1500, Spacing::uniform);
    const Case fine = solve_case(phys, 30.0, 6000, Spacing::uniform);
    const double e1 = pde_residual(coarse.result.profile, coarse.kernel, phys);
    const double e2 = ver.pde_residual;
    const double e3 = pde_residual(fine.result.profile, fine.kernel, phys);
    const bool ok = alt.converged && agree <= tol::init_agreement && e1 / e2 >= tol::second_order &&
                    e2 / e3 >= tol::second_order;
    report(9, ok, "solver robustness",
           fmt("S gap gaussian/exponential=%.2e; PDE residual %.2e, %.2e, %.2e (ratios %.2f, %.2f)", agree,
               e1, e2, e3, e1 / e2, e2 / e3));
  }

  std::printf("%s: %d criteria failed\n", failures ? "FAIL" : "PASS", failures);
  return failures ? 1 : 0;
}
