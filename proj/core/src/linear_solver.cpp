#include "choquard/linear_solver.hpp"

#include <cmath>
#include <string>

#include "choquard/errors.hpp"

namespace choquard {

namespace {

struct Tridiagonal {
  std::vector<double> lower, diag, upper, rhs;
};

void validate(const RadialBVP& pb) {
  const auto& g = pb.potential.grid();
  if (pb.rhs.grid().size() != g.size() || pb.rhs.grid().hash() != g.hash())
    throw InvalidArgument("potential and rhs live on different grids");
  for (std::size_t i = 0; i < g.size(); ++i) {
    if (!(pb.potential[i] > 0.0))
      throw InvalidArgument("potential must be positive, W(" + std::to_string(g.node(i)) +
                            ") = " + std::to_string(pb.potential[i]));
    if (!std::isfinite(pb.rhs[i])) throw InvalidArgument("rhs must be finite");
  }
}

Tridiagonal assemble(const RadialBVP& pb) {
  const auto& g = pb.potential.grid();
  const std::size_t n = g.size();
  const auto c = g.conductances();
  Tridiagonal t{std::vector<double>(n, 0.0), std::vector<double>(n, 0.0),
                std::vector<double>(n, 0.0), std::vector<double>(n, 0.0)};
  for (std::size_t i = 0; i < n; ++i) {
    const double w = g.weight(i);
    const double left = i > 0 ? c[i - 1] : 0.0;
    const double right = i + 1 < n ? c[i] : 0.0;
    t.lower[i] = -left;
    t.upper[i] = -right;
    t.diag[i] = left + right + w * pb.potential[i];
    t.rhs[i] = w * pb.rhs[i];
  }
  if (pb.inner == InnerCondition::dirichlet) {
    t.diag[0] = 1.0;
    t.upper[0] = 0.0;
    t.rhs[0] = pb.g_inner;
  }
  t.diag[n - 1] = 1.0;
  t.lower[n - 1] = 0.0;
  t.rhs[n - 1] = pb.g_out;
  return t;
}

}  // namespace

RadialProfile solve_bvp(const RadialBVP& pb) {
  validate(pb);
  Tridiagonal t = assemble(pb);
  const std::size_t n = t.diag.size();
  // Diagonally dominant M-matrix: no pivoting, all multipliers nonnegative,
  // so nonnegative data stays nonnegative.
  for (std::size_t i = 1; i < n; ++i) {
    if (t.diag[i - 1] == 0.0) throw InternalError("singular tridiagonal pivot");
    const double m = t.lower[i] / t.diag[i - 1];
    t.diag[i] -= m * t.upper[i - 1];
    t.rhs[i] -= m * t.rhs[i - 1];
  }
  std::vector<double> v(n);
  if (t.diag[n - 1] == 0.0) throw InternalError("singular tridiagonal pivot");
  v[n - 1] = t.rhs[n - 1] / t.diag[n - 1];
  for (std::size_t i = n - 1; i-- > 0;) v[i] = (t.rhs[i] - t.upper[i] * v[i + 1]) / t.diag[i];
  return RadialProfile(pb.potential.grid_ptr(), std::move(v));
}

std::vector<double> apply_operator(const RadialBVP& pb, std::span<const double> v) {
  validate(pb);
  const Tridiagonal t = assemble(pb);
  const auto& g = pb.potential.grid();
  const std::size_t n = t.diag.size();
  if (v.size() != n) throw InvalidArgument("apply_operator: size mismatch");
  std::vector<double> out(n);
  for (std::size_t i = 0; i < n; ++i) {
    double acc = t.diag[i] * v[i];
    if (i > 0) acc += t.lower[i] * v[i - 1];
    if (i + 1 < n) acc += t.upper[i] * v[i + 1];
    const bool boundary = i == n - 1 || (i == 0 && pb.inner == InnerCondition::dirichlet);
    out[i] = boundary ? acc : acc / g.weight(i);
  }
  return out;
}

PowerRhsReport power_rhs_check(double lambda, double beta, const GridPtr& grid) {
  if (!(lambda > 0.0)) throw InvalidArgument("power_rhs_check needs lambda > 0");
  if (!(beta > 0.0)) throw InvalidArgument("power_rhs_check needs beta > 0");
  if (!grid || grid->is_ball())
    throw InvalidArgument("power_rhs_check needs an annulus grid (rho, r_max)");
  if (grid->r_max() < 30.0) throw InvalidArgument("power_rhs_check needs r_max >= 30");
  const double rmax = grid->r_max();
  auto leading = [&](double r) { return 1.0 / (lambda * std::pow(r, beta)); };
  RadialBVP pb{RadialProfile::sample(grid, [&](double) { return lambda; }),
               RadialProfile::sample(grid, [&](double r) { return std::pow(r, -beta); }),
               InnerCondition::dirichlet, leading(grid->node(0)), leading(rmax)};
  const RadialProfile v = solve_bvp(pb);
  PowerRhsReport rep{lambda, beta, 0.6 * rmax, 0.9 * rmax, 0.0, 0.0};
  for (std::size_t i = 0; i < v.size(); ++i) {
    const double r = grid->node(i);
    if (r < rep.r_lo || r > rep.r_hi) continue;
    rep.deviation = std::max(rep.deviation, std::abs(lambda * v[i] * std::pow(r, beta) - 1.0));
  }
  rep.predicted_correction =
      std::abs(beta * (beta + 2.0 - grid->dim())) / (lambda * rep.r_lo * rep.r_lo);
  return rep;
}

}  // namespace choquard
