#pragma once

#include <optional>
#include <span>
#include <string_view>
#include <vector>

#include <nlohmann/json.hpp>

#include "choquard/grid.hpp"
#include "choquard/params.hpp"

namespace choquard {

enum class DecayRegime { superlinear, linear, sublinear };
enum class NuSource { mass, energy };

std::string_view to_string(DecayRegime regime);
/// p > 2, p = 2, p < 2.
DecayRegime decay_regime(double p);

/// nu = (c M)^{1/(N-alpha)} or (c (alpha + 4 - N) E)^{1/(N-alpha)}.
/// RegimeError unless p = 2; the energy form also needs alpha > N - 4.
double nu_parameter(const ProblemParams& params, double mass, double energy,
                    NuSource source = NuSource::mass);

/// int_nu^r sqrt(1 - (nu/s)^{N-alpha}) ds, relative tolerance 1e-10.
/// InvalidArgument for r < nu or nu <= 0.
double agmon_integral(double nu, const ProblemParams& params, double r);

struct Plateau {
  double median = 0.0;
  /// max |T - median| / median over the window
  double drift = 0.0;
  std::size_t samples = 0;
};

/// Median and drift of values with r in [lo, hi].
Plateau measure_plateau(std::span<const double> r, std::span<const double> values, double lo,
                        double hi);

struct DecayOptions {
  double window_lo = 0.5;  // fractions of r_max
  double window_hi = 0.8;
  double max_drift = 0.25;
  /// Sublinear regime only: bound on |Laplace u / u| over the window, the
  /// relative size of the derivative terms dropped by the algebraic limit.
  double max_derivative_share = 1e-2;
  /// p = 2: overrides nu (e.g. the energy form); default is the mass form.
  std::optional<double> nu;
};

struct DecayReport {
  DecayRegime regime = DecayRegime::superlinear;
  std::optional<double> nu;
  double plateau = 0.0;
  double drift = 0.0;
  double window_lo = 0.0;
  double window_hi = 0.0;
  /// c int u^p in the sublinear regime; empty means "finite-positive".
  std::optional<double> predicted_limit;
  /// sublinear: max |Laplace u / u| over the window
  std::optional<double> derivative_share;
  std::vector<double> trace_r;
  std::vector<double> trace_value;
};

/// Transformed tail over the window:
///   p > 2: u r^{(N-1)/2} e^r
///   p = 2: u r^{(N-1)/2} exp(agmon_integral(nu, r)), nu from M (or E)
///   p < 2: u^{2-p} r^{N-alpha}, compared with c_{N,alpha} int u^p
/// UnreliableTail when the window leaves the grid, holds fewer than 8 nodes,
/// u is not positive there, the drift exceeds max_drift or, for p < 2, the
/// derivative terms exceed max_derivative_share.
DecayReport decay_limit(const RadialProfile& profile, const ProblemParams& params,
                        const DecayOptions& options = {});

nlohmann::json to_json(const DecayReport& report);

/// d ln u / dr by five-point finite differences at interior nodes.
std::vector<double> log_derivative(const RadialProfile& profile);

struct LogDerivativeCheck {
  /// max over the window of |(-d ln u/dr - (N-1)/(2r)) / sqrt(1 - (nu/r)^{N-alpha}) - 1|
  double max_relative_deviation = 0.0;
  double window_lo = 0.0;
  double window_hi = 0.0;
};

/// p = 2 local decay rate against sqrt(1 - (nu/r)^{N-alpha}).
LogDerivativeCheck linear_log_derivative_check(const RadialProfile& profile,
                                               const ProblemParams& params, double nu,
                                               double lo_frac = 0.5, double hi_frac = 0.8);

struct ExponentFit {
  /// ln(u e^r) ~ -exponent ln r + c0 + c1 / r
  double exponent = 0.0;
  double c0 = 0.0;
  double c1 = 0.0;
  /// (N-1)/2 - nu/2 for alpha = N-1, (N-1)/2 for alpha < N-1
  double predicted = 0.0;
};

/// Least-squares fit of the polynomial power multiplying e^{-r} (p = 2).
/// RegimeError for p != 2 or alpha > N - 1, where the correction is not a power law.
ExponentFit fit_tail_exponent(const RadialProfile& profile, const ProblemParams& params, double nu,
                              double lo_frac = 0.5, double hi_frac = 0.8);

}  // namespace choquard
