#pragma once

#include <optional>

#include "choquard/grid.hpp"

namespace choquard {

enum class InnerCondition { neumann, dirichlet };

/// -v'' - (N-1)/r v' + W v = f on the grid, discretized in conservative form
///   -[F_{i+1/2}(v_{i+1}-v_i) - F_{i-1/2}(v_i-v_{i-1})] + w_i W_i v_i = w_i f_i
/// with the grid's conductances F and cell measures w. The last node carries
/// v = g_out; the first either zero flux (v'(r_0) = 0) or v = g_inner.
struct RadialBVP {
  RadialProfile potential;
  RadialProfile rhs;
  InnerCondition inner = InnerCondition::neumann;
  double g_inner = 0.0;
  double g_out = 0.0;
};

/// Thomas elimination of the tridiagonal system. Requires W > 0 on the grid
/// (InvalidArgument otherwise); a vanishing pivot raises InternalError.
RadialProfile solve_bvp(const RadialBVP& problem);

/// Applies the discrete operator row by row: (L v)_i = [flux terms]/w_i + W_i v_i,
/// boundary rows returning v itself. Used for self-adjointness checks.
std::vector<double> apply_operator(const RadialBVP& problem, std::span<const double> v);

struct PowerRhsReport {
  double lambda;
  double beta;
  double r_lo;
  double r_hi;
  /// max over the window of |lambda v(r) r^beta - 1|
  double deviation;
  /// leading correction beta(beta + 2 - N)/(lambda r^2) at r_lo
  double predicted_correction;
};

/// Solves -Laplace v + lambda v = r^{-beta} on the annulus grid with Dirichlet
/// data 1/(lambda r^beta) at both ends; window [0.6, 0.9] r_max. Needs
/// lambda > 0, beta > 0, r_max >= 30 and an annulus grid.
PowerRhsReport power_rhs_check(double lambda, double beta, const GridPtr& grid);

}  // namespace choquard
