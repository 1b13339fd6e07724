#pragma once

#include <cmath>
#include <cstdint>
#include <functional>
#include <random>
#include <vector>

#include <boost/math/quadrature/gauss_kronrod.hpp>

#include "choquard/choquard.hpp"

namespace testing {

using namespace choquard;

inline double rel(double a, double b) { return std::abs(a - b) / std::abs(b); }

inline double quad(const std::function<double(double)>& f, double a, double b) {
  return boost::math::quadrature::gauss_kronrod<double, 61>::integrate(f, a, b, 15, 1e-13);
}

// Newtonian potential for N = 3, alpha = 2: (I_2 * g)(r) = int s^2 g(s) / max(r, s) ds.
inline double newton_oracle(const std::function<double(double)>& g, double r, double cutoff) {
  const double inner = r > 0 ? quad([&](double s) { return s * s * g(s); }, 0.0, r) / r : 0.0;
  return inner + quad([&](double s) { return s * g(s); }, r, std::max(r, cutoff));
}

// a e^{-b r^2} + c e^{-d r}, all parameters positive.
struct RandomProfile {
  double a, b, c, d;
  double operator()(double r) const { return a * std::exp(-b * r * r) + c * std::exp(-d * r); }
};

inline RandomProfile random_profile(std::mt19937_64& gen) {
  std::uniform_real_distribution<double> amp(0.2, 2.0), rate(0.5, 2.0);
  return {amp(gen), rate(gen), amp(gen), rate(gen) + 0.5};
}

// Indicator of B_1 as cell-volume fractions, so the sampled mass is exact.
inline RadialProfile ball_indicator(const GridPtr& g) {
  const std::size_t n = g->size();
  const int dim = g->dim();
  std::vector<double> v(n);
  for (std::size_t i = 0; i < n; ++i) {
    const double lo = i ? 0.5 * (g->node(i - 1) + g->node(i)) : 0.0;
    const double hi = i + 1 < n ? 0.5 * (g->node(i) + g->node(i + 1)) : g->node(i);
    const double a = std::pow(lo, dim), b = std::pow(hi, dim);
    v[i] = (std::pow(std::clamp(1.0, lo, hi), dim) - a) / (b - a);
  }
  return RadialProfile(g, std::move(v));
}

// One groundstate per (N, alpha, p, r_max, n) for the whole test binary.
struct Solved {
  GridPtr grid;
  KernelMatrix kernel;
  GroundstateResult result;
};

const Solved& solved(int dim, double alpha, double p, double r_max, std::size_t n,
                     Spacing spacing = Spacing::uniform, InitKind init = InitKind::gaussian);

}  // namespace testing
