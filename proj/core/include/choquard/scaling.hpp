#pragma once

#include <functional>
#include <optional>
#include <string>
#include <string_view>

#include <nlohmann/json.hpp>

#include "choquard/functionals.hpp"

namespace choquard {

/// The three dilation families:
///   e_ray           t -> E(t u)
///   s_dilate        t -> S(u_t),            u_t(x) = u(t x)
///   e0_mass_dilate  t -> E0(t^{N/2} u_t)    (mass preserving)
enum class ScanKind { e_ray, s_dilate, e0_mass_dilate };
enum class Extremum { minimum, maximum };

std::string_view to_string(ScanKind kind);
/// Accepts "E-ray", "S-dilate", "E0-mass-dilate" (case-insensitive).
ScanKind parse_scan_kind(std::string_view name);

struct ScanReport {
  ScanKind which = ScanKind::e_ray;
  /// "maximum", "minimum", "scale-invariant" or "maximum-with-divergent-infimum".
  std::string regime;
  std::optional<double> t_star;
  double numeric_value = 0.0;
  double closed_form_value = 0.0;
  double relative_gap = 0.0;
  /// inf_t E0(t^{N/2} u_t) = -inf
  bool diverges = false;
  /// E0 family only: the same law checked on genuinely resampled dilations
  /// for t in [1/2, 2] (interpolation-limited).
  std::optional<double> resampled_gap;
};

nlohmann::json to_json(const ScanReport& report);

/// Golden-section search for a minimum of f over log t in [log lo, log hi];
/// the bracket widens by decades (up to [1e-12, 1e12]) while the optimum sits
/// on its edge. Returns t.
double golden_section_min(const std::function<double(double)>& f, double lo, double hi,
                          double log_tol = 1e-10);

/// Optimizes the chosen family over t and compares with the closed form.
/// E-ray re-evaluates E(t u) through the kernel; the dilation families use
/// the exact scaling of (K, M, D). `request` asks for a specific extremum
/// and raises RegimeError when it does not exist for (N, alpha, p).
ScanReport dilation_scan(const RadialProfile& profile, const KernelMatrix& kernel,
                         const ProblemParams& params, ScanKind which,
                         std::optional<Extremum> request = std::nullopt);

/// gamma = N(p-1) - alpha, the exponent of D under mass-preserving dilation.
double mass_dilation_exponent(const ProblemParams& params);

}  // namespace choquard
