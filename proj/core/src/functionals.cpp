#include "choquard/functionals.hpp"

#include <cmath>

#include "choquard/errors.hpp"

namespace choquard {

FunctionalValues complete_values(double kinetic, double mass, double nonlocal,
                                 const ProblemParams& params) {
  if (!(nonlocal > 0.0)) throw DegenerateInput("nonlocal term vanishes: zero profile?");
  const double n = params.dim();
  const double a = params.alpha();
  const double p = params.p();
  FunctionalValues v;
  v.kinetic = kinetic;
  v.mass = mass;
  v.nonlocal = nonlocal;
  v.energy = 0.5 * (kinetic + mass) - nonlocal / (2.0 * p);
  v.energy0 = 0.5 * kinetic - nonlocal / (2.0 * p);
  const double root = std::pow(nonlocal, 1.0 / p);
  v.quotient_s = (kinetic + mass) / root;
  const double ek = 0.5 * n - (n + a) / (2.0 * p);
  const double em = (n + a) / (2.0 * p) - 0.5 * (n - 2.0);
  v.quotient_w = std::pow(kinetic, ek) * std::pow(mass, em) / root;
  return v;
}

double nonlocal_energy(const RadialProfile& profile, const KernelMatrix& kernel, double p) {
  const auto& grid = profile.grid();
  if (grid.size() != kernel.size()) throw InvalidArgument("profile and kernel sizes differ");
  std::vector<double> g(profile.size());
  for (std::size_t i = 0; i < g.size(); ++i) g[i] = std::pow(std::abs(profile[i]), p);
  const auto kg = kernel.apply(g);
  double acc = 0.0;
  for (std::size_t i = 0; i < g.size(); ++i) acc += grid.weight(i) * kg[i] * g[i];
  return grid.sphere_area() * acc;
}

FunctionalValues evaluate(const RadialProfile& profile, const KernelMatrix& kernel,
                          const ProblemParams& params) {
  if (profile.is_zero()) throw DegenerateInput("cannot evaluate functionals of the zero profile");
  return complete_values(grad_norm_sq(profile), integrate(profile, 2.0),
                         nonlocal_energy(profile, kernel, params.p()), params);
}

NehariProjection nehari_project(const RadialProfile& profile, const KernelMatrix& kernel,
                                const ProblemParams& params) {
  if (profile.is_zero()) throw DegenerateInput("cannot project the zero profile");
  const double km = grad_norm_sq(profile) + integrate(profile, 2.0);
  const double d = nonlocal_energy(profile, kernel, params.p());
  if (!(d > 0.0)) throw DegenerateInput("nonlocal term vanishes");
  const double t = std::pow(km / d, 1.0 / (2.0 * params.p() - 2.0));
  return {t, profile.scaled(t)};
}

double nehari_residual(const FunctionalValues& v) {
  const double scale = v.kinetic + v.mass + v.nonlocal;
  return scale > 0.0 ? (v.kinetic + v.mass - v.nonlocal) / scale : 0.0;
}

double pohozaev_residual(const FunctionalValues& v, const ProblemParams& params) {
  const double n = params.dim();
  const double scale = v.kinetic + v.mass + v.nonlocal;
  if (!(scale > 0.0)) return 0.0;
  const double lhs = 0.5 * (n - 2.0) * v.kinetic + 0.5 * n * v.mass;
  const double rhs = (n + params.alpha()) / (2.0 * params.p()) * v.nonlocal;
  return (lhs - rhs) / scale;
}

double mass_energy_ratio(const ProblemParams& params) {
  return (params.alpha() + 2.0) / (params.p() - 1.0) - (params.dim() - 2.0);
}

double integral_identity_residual(const FunctionalValues& v, const ProblemParams& params) {
  if (!(v.mass > 0.0)) throw DegenerateInput("integral identity is indeterminate for M = 0");
  return (v.mass - mass_energy_ratio(params) * v.energy) / v.mass;
}

namespace {

FunctionalValues values_or_zero(const RadialProfile& profile, const KernelMatrix& kernel,
                                const ProblemParams& params) {
  if (profile.is_zero()) return {};
  return evaluate(profile, kernel, params);
}

}  // namespace

double nehari_residual(const RadialProfile& profile, const KernelMatrix& kernel,
                       const ProblemParams& params) {
  return nehari_residual(values_or_zero(profile, kernel, params));
}

double pohozaev_residual(const RadialProfile& profile, const KernelMatrix& kernel,
                         const ProblemParams& params) {
  return pohozaev_residual(values_or_zero(profile, kernel, params), params);
}

double integral_identity_residual(const RadialProfile& profile, const KernelMatrix& kernel,
                                  const ProblemParams& params) {
  if (profile.is_zero()) throw DegenerateInput("integral identity is indeterminate for u = 0");
  return integral_identity_residual(evaluate(profile, kernel, params), params);
}

}  // namespace choquard
