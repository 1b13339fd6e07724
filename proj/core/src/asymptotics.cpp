#include "choquard/asymptotics.hpp"

#include <algorithm>
#include <cmath>
#include <string>

#include <Eigen/Dense>
#include <boost/math/quadrature/gauss_kronrod.hpp>

#include "choquard/errors.hpp"
#include "finite_difference.hpp"

namespace choquard {

namespace {

constexpr double kLinearTol = 1e-12;

bool is_linear(double p) { return std::abs(p - 2.0) <= kLinearTol; }

std::string fmt(double x) { return std::to_string(x); }

struct Window {
  std::size_t first = 0;
  std::size_t last = 0;  // exclusive
  double lo = 0.0;
  double hi = 0.0;
};

Window tail_window(const RadialGrid& g, double lo_frac, double hi_frac, std::size_t min_nodes) {
  if (!(lo_frac > 0.0 && lo_frac < hi_frac && hi_frac <= 1.0))
    throw UnreliableTail("tail window [" + fmt(lo_frac) + ", " + fmt(hi_frac) +
                         "] r_max lies outside the grid");
  Window w;
  w.lo = lo_frac * g.r_max();
  w.hi = hi_frac * g.r_max();
  const auto r = g.nodes();
  // Interior nodes only, so five-point stencils fit.
  w.first = std::max<std::size_t>(2, std::lower_bound(r.begin(), r.end(), w.lo) - r.begin());
  w.last = std::min<std::size_t>(g.size() - 2,
                                 std::upper_bound(r.begin(), r.end(), w.hi) - r.begin());
  if (w.last <= w.first || w.last - w.first < min_nodes)
    throw UnreliableTail("tail window [" + fmt(w.lo) + ", " + fmt(w.hi) + "] holds fewer than " +
                         std::to_string(min_nodes) + " grid nodes; refine or raise r_max");
  return w;
}

// First and second derivative of v at node i (2 <= i < n-2).
std::pair<double, double> derivatives(const RadialGrid& g, std::span<const double> v,
                                      std::size_t i) {
  const std::array<double, 5> x{g.node(i - 2), g.node(i - 1), g.node(i), g.node(i + 1),
                                g.node(i + 2)};
  const auto c = detail::fd_weights(x[2], x);
  double d1 = 0.0;
  double d2 = 0.0;
  for (int k = 0; k < 5; ++k) {
    d1 += c[1][k] * v[i - 2 + k];
    d2 += c[2][k] * v[i - 2 + k];
  }
  return {d1, d2};
}

}  // namespace

std::string_view to_string(DecayRegime regime) {
  switch (regime) {
    case DecayRegime::superlinear:
      return "superlinear";
    case DecayRegime::linear:
      return "linear";
    case DecayRegime::sublinear:
      return "sublinear";
  }
  return "?";
}

DecayRegime decay_regime(double p) {
  if (is_linear(p)) return DecayRegime::linear;
  return p > 2.0 ? DecayRegime::superlinear : DecayRegime::sublinear;
}

double nu_parameter(const ProblemParams& params, double mass, double energy, NuSource source) {
  if (!is_linear(params.p()))
    throw RegimeError("nu is defined only for p = 2, got p = " + fmt(params.p()));
  const double n = params.dim();
  const double a = params.alpha();
  const double c = params.riesz_constant();
  double base = 0.0;
  if (source == NuSource::mass) {
    base = c * mass;
  } else {
    if (!(a > n - 4.0)) throw RegimeError("energy form of nu needs alpha > N - 4");
    base = c * (a + 4.0 - n) * energy;
  }
  if (base < 0.0) throw InvalidArgument("nu needs a nonnegative mass or energy");
  return std::pow(base, 1.0 / (n - a));
}

double agmon_integral(double nu, const ProblemParams& params, double r) {
  if (!(nu > 0.0)) throw InvalidArgument("agmon_integral needs nu > 0");
  if (!(r >= nu)) throw InvalidArgument("agmon_integral needs r >= nu");
  if (r == nu) return 0.0;
  const double k = params.dim() - params.alpha();
  // s = nu + sigma^2 removes the square-root zero at s = nu.
  auto f = [&](double sigma) {
    const double s = nu + sigma * sigma;
    const double q = -std::expm1(k * std::log1p(-(sigma * sigma) / s));  // 1 - (nu/s)^k
    return 2.0 * sigma * std::sqrt(std::max(0.0, q));
  };
  double err = 0.0;
  return boost::math::quadrature::gauss_kronrod<double, 31>::integrate(
      f, 0.0, std::sqrt(r - nu), 30, 1e-10, &err);
}

Plateau measure_plateau(std::span<const double> r, std::span<const double> values, double lo,
                        double hi) {
  if (r.size() != values.size()) throw InvalidArgument("plateau: size mismatch");
  std::vector<double> t;
  for (std::size_t i = 0; i < r.size(); ++i)
    if (r[i] >= lo && r[i] <= hi) t.push_back(values[i]);
  Plateau p;
  p.samples = t.size();
  if (t.empty()) return p;
  std::vector<double> sorted(t);
  const std::size_t mid = sorted.size() / 2;
  std::nth_element(sorted.begin(), sorted.begin() + mid, sorted.end());
  double med = sorted[mid];
  if (sorted.size() % 2 == 0) {
    const double below = *std::max_element(sorted.begin(), sorted.begin() + mid);
    med = 0.5 * (med + below);
  }
  p.median = med;
  for (double x : t) p.drift = std::max(p.drift, std::abs(x - med));
  p.drift = med != 0.0 ? p.drift / std::abs(med) : INFINITY;
  return p;
}

DecayReport decay_limit(const RadialProfile& profile, const ProblemParams& params,
                        const DecayOptions& options) {
  const auto& g = profile.grid();
  const Window w = tail_window(g, options.window_lo, options.window_hi, 8);
  const double n = params.dim();
  const double a = params.alpha();
  const double p = params.p();

  DecayReport rep;
  rep.regime = decay_regime(p);
  rep.window_lo = w.lo;
  rep.window_hi = w.hi;
  for (std::size_t i = w.first; i < w.last; ++i)
    if (!(profile[i] > 0.0))
      throw UnreliableTail("profile is not positive at r = " + fmt(g.node(i)) +
                           " inside the tail window; raise r_max or refine");

  auto push = [&](std::size_t i, double v) {
    rep.trace_r.push_back(g.node(i));
    rep.trace_value.push_back(v);
  };
  switch (rep.regime) {
    case DecayRegime::superlinear:
      for (std::size_t i = w.first; i < w.last; ++i) {
        const double r = g.node(i);
        push(i, profile[i] * std::pow(r, 0.5 * (n - 1.0)) * std::exp(r));
      }
      break;
    case DecayRegime::linear: {
      const double nu_used =
          options.nu ? *options.nu
                     : nu_parameter(params, integrate(profile, 2.0), 0.0, NuSource::mass);
      rep.nu = nu_used;
      if (!(w.lo > nu_used))
        throw UnreliableTail("tail window starts at " + fmt(w.lo) + " inside nu = " +
                             fmt(nu_used) + "; raise r_max");
      // Accumulate the Agmon integral node to node.
      double acc = agmon_integral(nu_used, params, g.node(w.first));
      for (std::size_t i = w.first; i < w.last; ++i) {
        if (i > w.first) {
          const double r0 = g.node(i - 1);
          const double r1 = g.node(i);
          const double k = n - a;
          double err = 0.0;
          acc += boost::math::quadrature::gauss_kronrod<double, 15>::integrate(
              [&](double s) { return std::sqrt(1.0 - std::pow(nu_used / s, k)); }, r0, r1, 0,
              1e-12, &err);
        }
        const double r = g.node(i);
        push(i, profile[i] * std::pow(r, 0.5 * (n - 1.0)) * std::exp(acc));
      }
      break;
    }
    case DecayRegime::sublinear: {
      rep.predicted_limit = params.riesz_constant() * integrate(profile, p);
      double share = 0.0;
      const auto v = profile.values();
      for (std::size_t i = w.first; i < w.last; ++i) {
        const double r = g.node(i);
        push(i, std::pow(profile[i], 2.0 - p) * std::pow(r, n - a));
        const auto [d1, d2] = derivatives(g, v, i);
        share = std::max(share, std::abs((d2 + (n - 1.0) / r * d1) / profile[i]));
      }
      rep.derivative_share = share;
      break;
    }
  }
  const Plateau pl = measure_plateau(rep.trace_r, rep.trace_value, w.lo, w.hi);
  rep.plateau = pl.median;
  rep.drift = pl.drift;
  if (!(rep.drift <= options.max_drift))
    throw UnreliableTail("plateau drifts by " + fmt(100.0 * rep.drift) + "% over [" + fmt(w.lo) +
                         ", " + fmt(w.hi) + "]; raise r_max");
  if (rep.derivative_share && !(*rep.derivative_share <= options.max_derivative_share))
    throw UnreliableTail("derivative terms are " + fmt(100.0 * *rep.derivative_share) +
                         "% of u over [" + fmt(w.lo) + ", " + fmt(w.hi) +
                         "]: the tail is not yet algebraic; raise r_max");
  return rep;
}

nlohmann::json to_json(const DecayReport& r) {
  nlohmann::json j;
  j["regime"] = to_string(r.regime);
  j["nu"] = r.nu ? nlohmann::json(*r.nu) : nlohmann::json(nullptr);
  j["plateau"] = r.plateau;
  j["plateau_drift"] = r.drift;
  j["window"] = {r.window_lo, r.window_hi};
  j["predicted_limit"] =
      r.predicted_limit ? nlohmann::json(*r.predicted_limit) : nlohmann::json("finite-positive");
  if (r.derivative_share) j["derivative_share"] = *r.derivative_share;
  return j;
}

std::vector<double> log_derivative(const RadialProfile& profile) {
  const auto& g = profile.grid();
  std::vector<double> out(g.size(), NAN);
  std::vector<double> lg(g.size());
  for (std::size_t i = 0; i < g.size(); ++i)
    lg[i] = profile[i] > 0.0 ? std::log(profile[i]) : NAN;
  for (std::size_t i = 2; i + 2 < g.size(); ++i) out[i] = derivatives(g, lg, i).first;
  return out;
}

LogDerivativeCheck linear_log_derivative_check(const RadialProfile& profile,
                                               const ProblemParams& params, double nu,
                                               double lo_frac, double hi_frac) {
  if (!is_linear(params.p())) throw RegimeError("log-derivative law holds for p = 2 only");
  const auto& g = profile.grid();
  const Window w = tail_window(g, lo_frac, hi_frac, 8);
  const auto d = log_derivative(profile);
  const double n = params.dim();
  const double k = n - params.alpha();
  LogDerivativeCheck out{0.0, w.lo, w.hi};
  for (std::size_t i = w.first; i < w.last; ++i) {
    const double r = g.node(i);
    const double rate = -d[i] - 0.5 * (n - 1.0) / r;
    const double law = std::sqrt(1.0 - std::pow(nu / r, k));
    const double dev = std::abs(rate / law - 1.0);
    out.max_relative_deviation = std::max(out.max_relative_deviation, std::isnan(dev) ? INFINITY : dev);
  }
  return out;
}

ExponentFit fit_tail_exponent(const RadialProfile& profile, const ProblemParams& params, double nu,
                              double lo_frac, double hi_frac) {
  if (!is_linear(params.p())) throw RegimeError("tail exponent fit applies to p = 2 only");
  const double n = params.dim();
  const double a = params.alpha();
  if (a > n - 1.0 + 1e-12)
    throw RegimeError("for alpha > N - 1 the correction to e^{-r} is not a power of r");
  const auto& g = profile.grid();
  const Window w = tail_window(g, lo_frac, hi_frac, 8);
  const Eigen::Index m = static_cast<Eigen::Index>(w.last - w.first);
  Eigen::MatrixXd A(m, 3);
  Eigen::VectorXd b(m);
  for (Eigen::Index row = 0; row < m; ++row) {
    const std::size_t i = w.first + static_cast<std::size_t>(row);
    const double r = g.node(i);
    if (!(profile[i] > 0.0)) throw UnreliableTail("profile not positive in the fit window");
    A(row, 0) = -std::log(r);
    A(row, 1) = 1.0;
    A(row, 2) = 1.0 / r;
    b(row) = std::log(profile[i]) + r;
  }
  const Eigen::Vector3d x = A.colPivHouseholderQr().solve(b);
  ExponentFit fit;
  fit.exponent = x(0);
  fit.c0 = x(1);
  fit.c1 = x(2);
  fit.predicted = 0.5 * (n - 1.0) - (std::abs(a - (n - 1.0)) <= 1e-12 ? 0.5 * nu : 0.0);
  return fit;
}

}  // namespace choquard
