#pragma once

namespace choquard {

/// c_{N,alpha} = Gamma((N-alpha)/2) / (Gamma(alpha/2) pi^{N/2} 2^alpha).
/// Throws InvalidArgument unless 0 < alpha < N.
double riesz_constant(int dim, double alpha);

/// |S^{N-1}| = 2 pi^{N/2} / Gamma(N/2); equals 2 for N = 1.
double sphere_area(int dim);

/// The exponent triple (N, alpha, p) of
///   -Laplace u + u = (I_alpha * |u|^p) |u|^{p-2} u   in R^N.
class ProblemParams {
 public:
  ProblemParams(int dim, double alpha, double p);

  int dim() const noexcept { return dim_; }
  double alpha() const noexcept { return alpha_; }
  double p() const noexcept { return p_; }
  double riesz_constant() const noexcept { return riesz_constant_; }

  /// (N-2)/(N+alpha) < 1/p < N/(N+alpha): groundstates exist exactly here.
  bool admissible() const noexcept;

  /// Human-readable account of why the triple is (in)admissible.
  const char* admissibility_reason() const noexcept;

 private:
  int dim_;
  double alpha_;
  double p_;
  double riesz_constant_;
};

}  // namespace choquard
