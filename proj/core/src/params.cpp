#include "choquard/params.hpp"

#include <cmath>
#include <numbers>
#include <string>

#include "choquard/errors.hpp"

namespace choquard {

double riesz_constant(int dim, double alpha) {
  if (dim < 1) throw InvalidArgument("dimension must be positive");
  if (!(alpha > 0.0 && alpha < dim))
    throw InvalidArgument("alpha must lie in (0, N), got " + std::to_string(alpha));
  const double n = dim;
  return std::tgamma((n - alpha) / 2.0) /
         (std::tgamma(alpha / 2.0) * std::pow(std::numbers::pi, n / 2.0) * std::exp2(alpha));
}

double sphere_area(int dim) {
  if (dim < 1) throw InvalidArgument("dimension must be positive");
  const double n = dim;
  return 2.0 * std::pow(std::numbers::pi, n / 2.0) / std::tgamma(n / 2.0);
}

ProblemParams::ProblemParams(int dim, double alpha, double p)
    : dim_(dim), alpha_(alpha), p_(p), riesz_constant_(choquard::riesz_constant(dim, alpha)) {
  if (!(p > 1.0) || !std::isfinite(p)) throw InvalidArgument("p must be a finite real > 1");
}

namespace {
// p typed as a decimal (5/3 -> 1.6666666666666667) must still land on the
// closed endpoint, so the open range is shrunk by a few ulps.
constexpr double kEndpointTol = 1e-12;
}  // namespace

bool ProblemParams::admissible() const noexcept {
  const double inv_p = 1.0 / p_;
  const double n = dim_;
  return (n - 2.0) / (n + alpha_) + kEndpointTol < inv_p &&
         inv_p < n / (n + alpha_) - kEndpointTol;
}

const char* ProblemParams::admissibility_reason() const noexcept {
  const double inv_p = 1.0 / p_;
  const double n = dim_;
  if (inv_p >= n / (n + alpha_) - kEndpointTol)
    return "1/p >= N/(N+alpha): by the Pohozaev identity every regular solution vanishes";
  if (inv_p <= (n - 2.0) / (n + alpha_) + kEndpointTol)
    return "1/p <= (N-2)/(N+alpha): by the Pohozaev identity every regular solution vanishes";
  return "(N-2)/(N+alpha) < 1/p < N/(N+alpha): groundstates exist";
}

}  // namespace choquard
