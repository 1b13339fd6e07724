#include "choquard/scaling.hpp"

#include <algorithm>
#include <cctype>
#include <cmath>
#include <limits>

#include "choquard/errors.hpp"

namespace choquard {

namespace {

constexpr double kInvPhi = 0.6180339887498949;  // (sqrt 5 - 1)/2
// 1/p = N/(N+alpha+2) decided up to rounding of p.
constexpr double kCriticalTol = 1e-12;

double rel_gap(double a, double b) {
  const double scale = std::max(std::abs(a), std::abs(b));
  return scale > 0.0 ? std::abs(a - b) / scale : 0.0;
}

double golden_once(const std::function<double(double)>& f, double a, double b, double tol) {
  double c = b - kInvPhi * (b - a);
  double d = a + kInvPhi * (b - a);
  double fc = f(std::exp(c));
  double fd = f(std::exp(d));
  while (b - a > tol) {
    if (fc <= fd) {
      b = d;
      d = c;
      fd = fc;
      c = b - kInvPhi * (b - a);
      fc = f(std::exp(c));
    } else {
      a = c;
      c = d;
      fc = fd;
      d = a + kInvPhi * (b - a);
      fd = f(std::exp(d));
    }
  }
  return 0.5 * (a + b);
}

}  // namespace

std::string_view to_string(ScanKind kind) {
  switch (kind) {
    case ScanKind::e_ray:
      return "E-ray";
    case ScanKind::s_dilate:
      return "S-dilate";
    case ScanKind::e0_mass_dilate:
      return "E0-mass-dilate";
  }
  return "?";
}

ScanKind parse_scan_kind(std::string_view name) {
  std::string low(name);
  std::transform(low.begin(), low.end(), low.begin(),
                 [](unsigned char ch) { return static_cast<char>(std::tolower(ch)); });
  if (low == "e-ray") return ScanKind::e_ray;
  if (low == "s-dilate") return ScanKind::s_dilate;
  if (low == "e0-mass-dilate") return ScanKind::e0_mass_dilate;
  throw InvalidArgument("unknown scan kind '" + std::string(name) + "'");
}

nlohmann::json to_json(const ScanReport& r) {
  nlohmann::json j;
  j["which"] = to_string(r.which);
  j["regime"] = r.regime;
  j["t_star"] = r.t_star ? nlohmann::json(*r.t_star) : nlohmann::json(nullptr);
  j["numeric_value"] = r.numeric_value;
  j["closed_form_value"] = r.closed_form_value;
  j["relative_gap"] = r.relative_gap;
  j["diverges"] = r.diverges;
  if (r.resampled_gap) j["resampled_gap"] = *r.resampled_gap;
  return j;
}

double golden_section_min(const std::function<double(double)>& f, double lo, double hi,
                          double log_tol) {
  if (!(lo > 0.0) || !(hi > lo)) throw InvalidArgument("golden section needs 0 < lo < hi");
  double a = std::log(lo);
  double b = std::log(hi);
  const double amin = std::log(1e-12);
  const double bmax = std::log(1e12);
  for (;;) {
    const double x = golden_once(f, a, b, log_tol);
    const bool at_lo = x - a < 10.0 * log_tol && a > amin;
    const bool at_hi = b - x < 10.0 * log_tol && b < bmax;
    if (!at_lo && !at_hi) return std::exp(x);
    if (at_lo) a = std::max(amin, a - std::log(10.0));
    if (at_hi) b = std::min(bmax, b + std::log(10.0));
  }
}

double mass_dilation_exponent(const ProblemParams& params) {
  return params.dim() * (params.p() - 1.0) - params.alpha();
}

ScanReport dilation_scan(const RadialProfile& profile, const KernelMatrix& kernel,
                         const ProblemParams& params, ScanKind which,
                         std::optional<Extremum> request) {
  const FunctionalValues base = evaluate(profile, kernel, params);
  const double n = params.dim();
  const double al = params.alpha();
  const double p = params.p();
  const double kin = base.kinetic;
  const double mass = base.mass;
  const double d = base.nonlocal;
  ScanReport rep;
  rep.which = which;

  switch (which) {
    case ScanKind::e_ray: {
      if (request == Extremum::minimum)
        throw RegimeError("t -> E(t u) has no minimum: it tends to -inf as t -> inf");
      auto neg_e = [&](double t) { return -evaluate(profile.scaled(t), kernel, params).energy; };
      const double t = golden_section_min(neg_e, 1e-3, 1e3);
      rep.regime = "maximum";
      rep.t_star = t;
      rep.numeric_value = -neg_e(t);
      rep.closed_form_value = (0.5 - 0.5 / p) * std::pow(base.quotient_s, p / (p - 1.0));
      break;
    }
    case ScanKind::s_dilate: {
      if (request == Extremum::maximum)
        throw RegimeError("t -> S(u_t) is unbounded above");
      const double a = (n + al) / p;
      if (!(a - (n - 2.0) > 0.0 && n - a > 0.0))
        throw RegimeError(
            "inf_t S(u_t) is not attained outside (N-2)/(N+alpha) < 1/p < N/(N+alpha)");
      const double root = std::pow(d, 1.0 / p);
      auto s_of = [&](double t) {
        return std::pow(t, a) * (std::pow(t, 2.0 - n) * kin + std::pow(t, -n) * mass) / root;
      };
      const double t = golden_section_min(s_of, 1e-3, 1e3);
      rep.regime = "minimum";
      rep.t_star = t;
      rep.numeric_value = s_of(t);
      rep.closed_form_value = 2.0 / (a - (n - 2.0)) *
                              std::pow((a - (n - 2.0)) / (n - a), 0.5 * (n - a)) *
                              base.quotient_w;
      break;
    }
    case ScanKind::e0_mass_dilate: {
      const double gamma = mass_dilation_exponent(params);
      auto e0_of = [&](double t) {
        return 0.5 * t * t * kin - std::pow(t, gamma) * d / (2.0 * p);
      };
      // W / M^{(N+alpha)/(2p) - (N-2)/2} appears in both closed forms.
      const double em = (n + al) / (2.0 * p) - 0.5 * (n - 2.0);
      const double wm = base.quotient_w / std::pow(mass, em);
      if (std::abs(gamma - 2.0) <= kCriticalTol) {
        if (request)
          throw RegimeError(
              "1/p = N/(N+alpha+2): E0(t^{N/2}u_t) = t^2 E0(u) has no interior extremum");
        rep.regime = "scale-invariant";
        rep.numeric_value = base.energy0;
        rep.closed_form_value = base.energy0;
        double gap = 0.0;
        for (int k = -30; k <= 30; ++k) {
          const double t = std::pow(10.0, 0.1 * k);
          gap = std::max(gap, rel_gap(e0_of(t) / (t * t), base.energy0));
        }
        rep.relative_gap = gap;
        double rgap = 0.0;
        for (double t : {0.5, 0.75, 1.5, 2.0}) {
          const auto dil = dilate(profile, t, true);
          const double e0 = evaluate(dil, kernel, params).energy0;
          rgap = std::max(rgap, rel_gap(e0 / (t * t), base.energy0));
        }
        rep.resampled_gap = rgap;
        return rep;
      }
      const double scale = (2.0 * p / gamma);
      const double shape = std::pow(scale, 2.0 / (gamma - 2.0)) *
                           std::pow(wm, 2.0 * p / (gamma - 2.0));
      if (gamma < 2.0) {
        if (request == Extremum::maximum)
          throw RegimeError(
              "1/p > N/(N+alpha+2): sup_t E0(t^{N/2}u_t) = +inf, only the infimum is attained");
        const double t = golden_section_min(e0_of, 1e-3, 1e3);
        rep.regime = "minimum";
        rep.t_star = t;
        rep.numeric_value = e0_of(t);
        rep.closed_form_value = -(1.0 / gamma - 0.5) * shape;
      } else {
        if (request == Extremum::minimum)
          throw RegimeError(
              "1/p < N/(N+alpha+2): inf_t E0(t^{N/2}u_t) = -inf, no minimum exists");
        const double t = golden_section_min([&](double s) { return -e0_of(s); }, 1e-3, 1e3);
        rep.regime = "maximum-with-divergent-infimum";
        rep.diverges = e0_of(1e3) < e0_of(1e2) && e0_of(1e2) < e0_of(10.0);
        rep.t_star = t;
        rep.numeric_value = e0_of(t);
        rep.closed_form_value = (0.5 - 1.0 / gamma) * shape;
      }
      break;
    }
  }
  rep.relative_gap = rel_gap(rep.numeric_value, rep.closed_form_value);
  return rep;
}

}  // namespace choquard
