#pragma once

#include <filesystem>
#include <string>
#include <vector>

#include <nlohmann/json.hpp>

#include "choquard/functionals.hpp"
#include "choquard/grid.hpp"
#include "choquard/params.hpp"
#include "choquard/riesz.hpp"

namespace choquard {

enum class InitKind { gaussian, exponential, file };

std::string_view to_string(InitKind kind);
InitKind parse_init_kind(std::string_view name);

struct SolverConfig {
  int max_iter = 500;
  double tol_residual = 1e-8;
  /// Initial damping theta in (0, 1]; halved on an S increase down to min_damping.
  double damping = 1.0;
  double min_damping = 1.0 / 16.0;
  /// Allowed relative increase of S between iterations.
  double s_slack = 1e-12;
  InitKind init = InitKind::gaussian;
  std::filesystem::path init_file;

  void validate() const;
};

struct GroundstateResult {
  RadialProfile profile;
  FunctionalValues values;
  std::vector<double> s_history;
  int iterations = 0;
  bool converged = false;
  double damping = 1.0;
  /// Final values of the three stopping quantities.
  double nehari_update_residual = 0.0;
  double s_change = 0.0;
  double fixed_point_residual = 0.0;
};

/// gaussian: e^{-r^2}; exponential: e^{-r}; file: CSV resampled onto the grid.
RadialProfile init_profile(InitKind kind, const GridPtr& grid,
                           const std::filesystem::path& file = {});

/// Throws NonexistenceError unless params are admissible.
void require_admissible(const ProblemParams& params);

/// Solve-and-rescale iteration
///   u <- P( (1 - theta) u + theta (-Laplace + 1)^{-1} [(I_alpha * u^p) u^{p-1}] ),
/// P the Nehari projection. Stops once the Nehari residual of the unprojected
/// update, |dS|/S and the relative L^2 step all fall below tol_residual.
/// An S increase past s_slack halves theta; below min_damping it raises
/// StagnationError. Hitting max_iter returns converged = false.
GroundstateResult solve_groundstate(const ProblemParams& params, const KernelMatrix& kernel,
                                    const SolverConfig& config);
GroundstateResult solve_groundstate(const ProblemParams& params, const KernelMatrix& kernel,
                                    const SolverConfig& config, const RadialProfile& initial);

struct Thresholds {
  double nehari = 1e-8;
  double pohozaev = 1e-3;
  double integral_identity = 1e-3;
  double monotone_jump = 1e-10;  // relative to max value
  double farfield = 1e-2;
  double pde = 1e-3;
};

struct VerificationReport {
  double nehari_residual = 0.0;
  double pohozaev_residual = 0.0;
  double integral_identity_residual = 0.0;
  /// min over all nodes but the Dirichlet node at r_max
  double min_value = 0.0;
  /// largest v_{i+1} - v_i over max |v|
  double max_upward_jump = 0.0;
  /// max over the tail window of |r^{N-alpha}(I_alpha * u^p)(r) / (c int u^p) - 1|
  double farfield_deviation = 0.0;
  double farfield_window_lo = 0.0;
  double farfield_window_hi = 0.0;
  double pde_residual = 0.0;
  Thresholds thresholds;

  bool nehari_ok() const { return std::abs(nehari_residual) <= thresholds.nehari; }
  bool pohozaev_ok() const { return std::abs(pohozaev_residual) <= thresholds.pohozaev; }
  bool integral_identity_ok() const {
    return std::abs(integral_identity_residual) <= thresholds.integral_identity;
  }
  bool positive() const { return min_value > 0.0; }
  bool monotone() const { return max_upward_jump <= thresholds.monotone_jump; }
  bool farfield_ok() const { return farfield_deviation <= thresholds.farfield; }
  bool pde_ok() const { return pde_residual <= thresholds.pde; }
  bool all_pass() const;
};

/// Throws DegenerateInput for the zero profile.
VerificationReport verify_groundstate(const RadialProfile& profile, const KernelMatrix& kernel,
                                      const ProblemParams& params, Thresholds thresholds = {});
VerificationReport verify_groundstate(const GroundstateResult& result, const KernelMatrix& kernel,
                                      const ProblemParams& params, Thresholds thresholds = {});

/// Weighted L^2 norm of -Laplace u + u - (I_alpha * u^p) u^{p-1} over the
/// interior nodes, using a fourth-order five-point Laplacian, relative to
/// the weighted L^2 norm of u on the same nodes.
double pde_residual(const RadialProfile& profile, const KernelMatrix& kernel,
                    const ProblemParams& params);

nlohmann::json to_json(const FunctionalValues& values);
nlohmann::json to_json(const VerificationReport& report);

}  // namespace choquard
