#pragma once

#include "choquard/grid.hpp"
#include "choquard/params.hpp"
#include "choquard/riesz.hpp"

namespace choquard {

/// K = int |grad u|^2, M = int u^2, D = int (I_alpha * |u|^p)|u|^p and the
/// functionals built from them.
struct FunctionalValues {
  double kinetic = 0.0;
  double mass = 0.0;
  double nonlocal = 0.0;
  double energy = 0.0;      // (K + M)/2 - D/(2p)
  double energy0 = 0.0;     // K/2 - D/(2p)
  double quotient_s = 0.0;  // (K + M) / D^{1/p}
  double quotient_w = 0.0;  // K^{N/2-(N+a)/(2p)} M^{(N+a)/(2p)-(N-2)/2} / D^{1/p}
};

/// Fills E, E0, S, W from (K, M, D). Throws DegenerateInput when D <= 0.
FunctionalValues complete_values(double kinetic, double mass, double nonlocal,
                                 const ProblemParams& params);

/// D alone; one kernel application.
double nonlocal_energy(const RadialProfile& profile, const KernelMatrix& kernel, double p);

/// Throws DegenerateInput for the zero profile.
FunctionalValues evaluate(const RadialProfile& profile, const KernelMatrix& kernel,
                          const ProblemParams& params);

struct NehariProjection {
  double t;
  RadialProfile profile;
};

/// t = ((K+M)/D)^{1/(2p-2)}; t u lies on the Nehari manifold.
NehariProjection nehari_project(const RadialProfile& profile, const KernelMatrix& kernel,
                                const ProblemParams& params);

/// Relative residuals; the zero profile gives 0 for the first two.
double nehari_residual(const FunctionalValues& v);
double pohozaev_residual(const FunctionalValues& v, const ProblemParams& params);
/// (M - ((alpha+2)/(p-1) - (N-2)) E) / M; DegenerateInput if M = 0.
double integral_identity_residual(const FunctionalValues& v, const ProblemParams& params);

double nehari_residual(const RadialProfile& profile, const KernelMatrix& kernel,
                       const ProblemParams& params);
double pohozaev_residual(const RadialProfile& profile, const KernelMatrix& kernel,
                         const ProblemParams& params);
double integral_identity_residual(const RadialProfile& profile, const KernelMatrix& kernel,
                                  const ProblemParams& params);

/// (alpha+2)/(p-1) - (N-2): the predicted ratio M/E at a groundstate.
double mass_energy_ratio(const ProblemParams& params);

}  // namespace choquard
