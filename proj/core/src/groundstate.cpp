#include "choquard/groundstate.hpp"

#include <algorithm>
#include <array>
#include <cctype>
#include <cmath>

#include "choquard/errors.hpp"
#include "choquard/linear_solver.hpp"
#include "choquard/profile_io.hpp"
#include "finite_difference.hpp"

namespace choquard {

std::string_view to_string(InitKind kind) {
  switch (kind) {
    case InitKind::gaussian:
      return "gaussian";
    case InitKind::exponential:
      return "exponential";
    case InitKind::file:
      return "file";
  }
  return "?";
}

InitKind parse_init_kind(std::string_view name) {
  std::string low(name);
  std::transform(low.begin(), low.end(), low.begin(),
                 [](unsigned char c) { return static_cast<char>(std::tolower(c)); });
  if (low == "gaussian") return InitKind::gaussian;
  if (low == "exponential") return InitKind::exponential;
  if (low == "file") return InitKind::file;
  throw InvalidArgument("unknown init kind '" + std::string(name) + "'");
}

void SolverConfig::validate() const {
  if (max_iter < 1) throw InvalidArgument("max_iter must be at least 1");
  if (!(tol_residual > 0.0)) throw InvalidArgument("tol_residual must be positive");
  if (!(damping > 0.0 && damping <= 1.0)) throw InvalidArgument("damping must lie in (0, 1]");
  if (!(min_damping > 0.0 && min_damping <= damping))
    throw InvalidArgument("min_damping must lie in (0, damping]");
  if (init == InitKind::file && init_file.empty())
    throw InvalidArgument("init = file needs a profile path");
}

RadialProfile init_profile(InitKind kind, const GridPtr& grid, const std::filesystem::path& file) {
  switch (kind) {
    case InitKind::gaussian:
      return RadialProfile::sample(grid, [](double r) { return std::exp(-r * r); });
    case InitKind::exponential:
      return RadialProfile::sample(grid, [](double r) { return std::exp(-r); });
    case InitKind::file: {
      const auto s = read_profile_csv(file);
      return interpolate(s.r, s.value, grid);
    }
  }
  throw InvalidArgument("unknown init kind");
}

void require_admissible(const ProblemParams& params) {
  if (!params.admissible()) throw NonexistenceError(params.admissibility_reason());
}

namespace {

double weighted_l2(const RadialGrid& g, std::span<const double> v) {
  double s = 0.0;
  for (std::size_t i = 0; i < v.size(); ++i) s += g.weight(i) * v[i] * v[i];
  return std::sqrt(s);
}

std::vector<double> nonlinearity(const RadialProfile& u, const KernelMatrix& kernel, double p) {
  std::vector<double> g(u.size());
  for (std::size_t i = 0; i < g.size(); ++i) g[i] = std::pow(std::abs(u[i]), p);
  auto f = kernel.apply(g);
  for (std::size_t i = 0; i < f.size(); ++i) {
    const double a = std::abs(u[i]);
    f[i] *= a > 0.0 ? std::copysign(std::pow(a, p - 1.0), u[i]) : 0.0;
  }
  return f;
}

}  // namespace

GroundstateResult solve_groundstate(const ProblemParams& params, const KernelMatrix& kernel,
                                    const SolverConfig& config) {
  config.validate();
  return solve_groundstate(params, kernel, config,
                           init_profile(config.init, kernel.grid_ptr(), config.init_file));
}

GroundstateResult solve_groundstate(const ProblemParams& params, const KernelMatrix& kernel,
                                    const SolverConfig& config, const RadialProfile& initial) {
  require_admissible(params);
  config.validate();
  if (kernel.dim() != params.dim() || kernel.alpha() != params.alpha())
    throw InvalidArgument("kernel was assembled for different (N, alpha)");
  if (initial.grid().hash() != kernel.grid().hash())
    throw InvalidArgument("initial profile and kernel live on different grids");
  const GridPtr& grid = kernel.grid_ptr();
  const RadialGrid& g = *grid;
  const double p = params.p();

  RadialProfile u = nehari_project(initial, kernel, params).profile;
  GroundstateResult res{u, evaluate(u, kernel, params), {}, 0, false, config.damping};
  res.s_history.push_back(res.values.quotient_s);
  const RadialProfile ones = RadialProfile::sample(grid, [](double) { return 1.0; });

  double theta = config.damping;
  for (int k = 1; k <= config.max_iter; ++k) {
    RadialBVP bvp{ones, RadialProfile(grid, nonlinearity(u, kernel, p))};
    const RadialProfile w = solve_bvp(bvp);
    const double s_old = res.s_history.back();

    for (;;) {
      std::vector<double> cand(u.size());
      for (std::size_t i = 0; i < cand.size(); ++i) cand[i] = (1.0 - theta) * u[i] + theta * w[i];
      const RadialProfile c(grid, std::move(cand));
      const FunctionalValues cv = evaluate(c, kernel, params);
      const double s_new = cv.quotient_s;
      if (k > 1 && s_new > s_old * (1.0 + config.s_slack)) {
        theta *= 0.5;
        if (theta < config.min_damping)
          throw StagnationError("S increased from " + format_double(s_old) + " to " +
                                format_double(s_new) + " at iteration " + std::to_string(k) +
                                " even with damping " + format_double(2.0 * theta) +
                                "; try a smaller --damping or a finer grid");
        continue;
      }
      const double t = std::pow((cv.kinetic + cv.mass) / cv.nonlocal, 1.0 / (2.0 * p - 2.0));
      RadialProfile next = c.scaled(t);
      std::vector<double> diff(u.size());
      for (std::size_t i = 0; i < diff.size(); ++i) diff[i] = next[i] - u[i];
      res.fixed_point_residual = weighted_l2(g, diff) / weighted_l2(g, next.values());
      res.nehari_update_residual = std::abs(nehari_residual(cv));
      res.s_change = std::abs(s_new - s_old) / s_old;
      u = std::move(next);
      res.s_history.push_back(s_new);
      break;
    }
    res.iterations = k;
    res.damping = theta;
    if (res.nehari_update_residual <= config.tol_residual &&
        res.s_change <= config.tol_residual && res.fixed_point_residual <= config.tol_residual) {
      res.converged = true;
      break;
    }
  }
  res.profile = u;
  res.values = evaluate(u, kernel, params);
  return res;
}


double pde_residual(const RadialProfile& profile, const KernelMatrix& kernel,
                    const ProblemParams& params) {
  const auto& g = profile.grid();
  const std::size_t n = g.size();
  if (n < 5) throw InvalidArgument("pde_residual needs at least 5 nodes");
  const auto f = nonlinearity(profile, kernel, params.p());
  const double dm1 = g.dim() - 1.0;
  double num = 0.0;
  double den = 0.0;
  for (std::size_t i = 2; i + 2 < n; ++i) {
    const std::array<double, 5> x{g.node(i - 2), g.node(i - 1), g.node(i), g.node(i + 1),
                                  g.node(i + 2)};
    const auto c = detail::fd_weights(x[2], x);
    double d1 = 0.0;
    double d2 = 0.0;
    for (int k = 0; k < 5; ++k) {
      d1 += c[1][k] * profile[i - 2 + k];
      d2 += c[2][k] * profile[i - 2 + k];
    }
    const double lap = d2 + dm1 / x[2] * d1;
    const double r = -lap + profile[i] - f[i];
    num += g.weight(i) * r * r;
    den += g.weight(i) * profile[i] * profile[i];
  }
  if (!(den > 0.0)) throw DegenerateInput("pde residual of the zero profile");
  return std::sqrt(num / den);
}

bool VerificationReport::all_pass() const {
  return nehari_ok() && pohozaev_ok() && integral_identity_ok() && positive() && monotone() &&
         farfield_ok() && pde_ok();
}

VerificationReport verify_groundstate(const RadialProfile& profile, const KernelMatrix& kernel,
                                      const ProblemParams& params, Thresholds thresholds) {
  if (profile.is_zero()) throw DegenerateInput("cannot verify the zero profile");
  const FunctionalValues v = evaluate(profile, kernel, params);
  VerificationReport rep;
  rep.thresholds = thresholds;
  rep.nehari_residual = nehari_residual(v);
  rep.pohozaev_residual = pohozaev_residual(v, params);
  rep.integral_identity_residual = integral_identity_residual(v, params);

  const auto vals = profile.values();
  // The last node carries the homogeneous Dirichlet condition.
  rep.min_value = *std::min_element(vals.begin(), vals.end() - 1);
  double jump = 0.0;
  for (std::size_t i = 0; i + 1 < vals.size(); ++i) jump = std::max(jump, vals[i + 1] - vals[i]);
  rep.max_upward_jump = jump / profile.max_abs();

  const auto& g = profile.grid();
  const double total = integrate(profile, params.p());
  const RadialProfile conv = riesz_convolve(kernel, profile, params.p());
  const double c = params.riesz_constant();
  const double decay = params.dim() - params.alpha();
  rep.farfield_window_lo = 0.5 * g.r_max();
  rep.farfield_window_hi = 0.8 * g.r_max();
  for (std::size_t i = 0; i < g.size(); ++i) {
    const double r = g.node(i);
    if (r < rep.farfield_window_lo || r > rep.farfield_window_hi) continue;
    const double ratio = std::pow(r, decay) * conv[i] / (c * total);
    rep.farfield_deviation = std::max(rep.farfield_deviation, std::abs(ratio - 1.0));
  }
  rep.pde_residual = pde_residual(profile, kernel, params);
  return rep;
}

VerificationReport verify_groundstate(const GroundstateResult& result, const KernelMatrix& kernel,
                                      const ProblemParams& params, Thresholds thresholds) {
  return verify_groundstate(result.profile, kernel, params, thresholds);
}

nlohmann::json to_json(const FunctionalValues& v) {
  return {{"kinetic", v.kinetic},   {"mass", v.mass},         {"nonlocal", v.nonlocal},
          {"energy", v.energy},     {"energy0", v.energy0},   {"quotient_s", v.quotient_s},
          {"quotient_w", v.quotient_w}};
}

nlohmann::json to_json(const VerificationReport& r) {
  auto item = [](double value, double threshold, bool pass) {
    return nlohmann::json{{"value", value}, {"threshold", threshold}, {"pass", pass}};
  };
  const auto& t = r.thresholds;
  nlohmann::json j;
  j["nehari_residual"] = item(r.nehari_residual, t.nehari, r.nehari_ok());
  j["pohozaev_residual"] = item(r.pohozaev_residual, t.pohozaev, r.pohozaev_ok());
  j["integral_identity_residual"] =
      item(r.integral_identity_residual, t.integral_identity, r.integral_identity_ok());
  j["positivity"] = {{"min_value", r.min_value}, {"pass", r.positive()}};
  j["monotonicity"] = item(r.max_upward_jump, t.monotone_jump, r.monotone());
  j["farfield_ratio"] = item(r.farfield_deviation, t.farfield, r.farfield_ok());
  j["farfield_ratio"]["window"] = {r.farfield_window_lo, r.farfield_window_hi};
  j["pde_residual"] = item(r.pde_residual, t.pde, r.pde_ok());
  j["all_pass"] = r.all_pass();
  return j;
}

}  // namespace choquard
