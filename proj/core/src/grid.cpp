#include "choquard/grid.hpp"

#include <algorithm>
#include <bit>
#include <cmath>
#include <string>

// pchip.hpp in Boost 1.74 calls isnan unqualified; fpclassify supplies boost::math::isnan.
#include <boost/math/special_functions/fpclassify.hpp>
#include <boost/math/interpolators/pchip.hpp>

#include "choquard/errors.hpp"
#include "choquard/params.hpp"

namespace choquard {

namespace {

// Gregory end corrections of the trapezoid rule, exact for cubics.
constexpr double kGregory[4] = {17.0 / 48.0, 59.0 / 48.0, 43.0 / 48.0, 49.0 / 48.0};

std::vector<double> uniform_nodes(double a, double b, std::size_t n) {
  std::vector<double> r(n);
  const double h = (b - a) / static_cast<double>(n - 1);
  for (std::size_t i = 0; i < n; ++i) r[i] = a + h * static_cast<double>(i);
  r.back() = b;
  return r;
}

std::vector<double> graded_nodes(double a, double b, std::size_t n) {
  // Spacing grows linearly with r past the core length scale.
  constexpr double core = 2.0;
  const double k = std::log1p((b - a) / core);
  const double denom = std::expm1(k);
  std::vector<double> r(n);
  for (std::size_t i = 0; i < n; ++i) {
    const double xi = static_cast<double>(i) / static_cast<double>(n - 1);
    r[i] = a + (b - a) * std::expm1(k * xi) / denom;
  }
  r.back() = b;
  return r;
}

// Coefficients c_i with sum_i c_i f(r_i) ~ int_{r_0}^{r_{n-1}} f.
std::vector<double> line_coefficients(const std::vector<double>& r, Spacing spacing) {
  const std::size_t n = r.size();
  std::vector<double> c(n, 0.0);
  if (spacing == Spacing::uniform) {
    const double h = (r.back() - r.front()) / static_cast<double>(n - 1);
    std::fill(c.begin(), c.end(), h);
    for (std::size_t k = 0; k < 4; ++k) {
      c[k] = kGregory[k] * h;
      c[n - 1 - k] = kGregory[k] * h;
    }
  } else {
    for (std::size_t i = 0; i + 1 < n; ++i) {
      const double half = 0.5 * (r[i + 1] - r[i]);
      c[i] += half;
      c[i + 1] += half;
    }
  }
  return c;
}

GridPtr build(int dim, double inner, std::vector<double> r, Spacing spacing) {
  auto c = line_coefficients(r, spacing);
  std::vector<double> w(r.size());
  for (std::size_t i = 0; i < r.size(); ++i) w[i] = c[i] * std::pow(r[i], dim - 1);
  // Ball grids: the cell [0, r_0] with v extended as the constant v(r_0).
  if (inner == 0.0) w[0] += std::pow(r[0], dim) / dim;
  return std::make_shared<const RadialGrid>(dim, inner, std::move(r), std::move(w), spacing);
}

void check_common(int dim, double r_max, std::size_t n) {
  if (dim < 1) throw InvalidArgument("dimension must be positive");
  if (!(r_max > 0.0) || !std::isfinite(r_max))
    throw InvalidArgument("r_max must be positive, got " + std::to_string(r_max));
  if (n < 16) throw InvalidArgument("grid needs at least 16 nodes, got " + std::to_string(n));
}

}  // namespace

RadialGrid::RadialGrid(int dim, double inner_radius, std::vector<double> nodes,
                       std::vector<double> weights, Spacing spacing)
    : dim_(dim),
      inner_radius_(inner_radius),
      nodes_(std::move(nodes)),
      weights_(std::move(weights)),
      spacing_(spacing),
      sphere_area_(choquard::sphere_area(dim)) {
  if (nodes_.size() < 3 || nodes_.size() != weights_.size())
    throw InvalidArgument("grid needs matching nodes and weights, at least 3");
  if (!(nodes_.front() > 0.0)) throw InvalidArgument("first node must be positive");
  for (std::size_t i = 1; i < nodes_.size(); ++i)
    if (!(nodes_[i] > nodes_[i - 1])) throw InvalidArgument("nodes must be strictly increasing");
  for (double w : weights_)
    if (!(w >= 0.0)) throw InvalidArgument("weights must be nonnegative");
  conductances_.resize(nodes_.size() - 1);
  double volume = 0.0;
  for (std::size_t i = 0; i + 1 < nodes_.size(); ++i) {
    const double mid = 0.5 * (nodes_[i] + nodes_[i + 1]);
    const double gap = nodes_[i + 1] - nodes_[i];
    volume += weights_[i];
    // On a ball the face area r^{N-1} is traded for N V / r with V the
    // discrete volume enclosed by the face; the flux of r^2 then balances
    // the cell measure exactly and the first cells keep O(h^2) consistency.
    conductances_[i] = is_ball() ? dim_ * volume / (mid * gap) : std::pow(mid, dim_ - 1) / gap;
  }
}

std::uint64_t RadialGrid::hash() const noexcept {
  std::uint64_t h = 1469598103934665603ull;
  auto mix = [&h](std::uint64_t x) {
    for (int b = 0; b < 8; ++b) {
      h ^= (x >> (8 * b)) & 0xffu;
      h *= 1099511628211ull;
    }
  };
  mix(static_cast<std::uint64_t>(dim_));
  mix(std::bit_cast<std::uint64_t>(inner_radius_));
  for (double r : nodes_) mix(std::bit_cast<std::uint64_t>(r));
  for (double w : weights_) mix(std::bit_cast<std::uint64_t>(w));
  return h;
}

GridPtr make_grid(int dim, double r_max, std::size_t n, Spacing spacing) {
  check_common(dim, r_max, n);
  const double r0 = r_max / (10.0 * static_cast<double>(n));
  auto r = spacing == Spacing::uniform ? uniform_nodes(r0, r_max, n) : graded_nodes(r0, r_max, n);
  return build(dim, 0.0, std::move(r), spacing);
}

GridPtr make_annulus_grid(int dim, double r_inner, double r_max, std::size_t n, Spacing spacing) {
  check_common(dim, r_max, n);
  if (!(r_inner > 0.0) || !(r_inner < r_max))
    throw InvalidArgument("annulus needs 0 < r_inner < r_max");
  auto r = spacing == Spacing::uniform ? uniform_nodes(r_inner, r_max, n)
                                       : graded_nodes(r_inner, r_max, n);
  return build(dim, r_inner, std::move(r), spacing);
}

RadialProfile::RadialProfile(GridPtr grid, std::vector<double> values)
    : grid_(std::move(grid)), values_(std::move(values)) {
  if (!grid_) throw InvalidArgument("profile needs a grid");
  if (values_.size() != grid_->size()) throw InvalidArgument("profile size does not match grid");
  for (double v : values_)
    if (!std::isfinite(v)) throw InvalidArgument("profile values must be finite");
}

bool RadialProfile::positive() const noexcept {
  return std::all_of(values_.begin(), values_.end(), [](double v) { return v > 0.0; });
}

bool RadialProfile::monotone() const noexcept {
  return std::adjacent_find(values_.begin(), values_.end(), std::less<>{}) == values_.end();
}

bool RadialProfile::is_zero() const noexcept {
  return std::all_of(values_.begin(), values_.end(), [](double v) { return v == 0.0; });
}

double RadialProfile::max_abs() const noexcept {
  double m = 0.0;
  for (double v : values_) m = std::max(m, std::abs(v));
  return m;
}

RadialProfile RadialProfile::scaled(double factor) const {
  std::vector<double> v(values_);
  for (double& x : v) x *= factor;
  return RadialProfile(grid_, std::move(v));
}

double integrate(const RadialProfile& profile, double q) {
  const auto& g = profile.grid();
  const auto v = profile.values();
  const bool integral_power = q == std::floor(q);
  double sum = 0.0;
  for (std::size_t i = 0; i < v.size(); ++i) {
    if (v[i] < 0.0 && !integral_power)
      throw DomainError("fractional power of a negative sample at r = " +
                        std::to_string(g.node(i)));
    const double a = std::abs(v[i]);
    sum += g.weight(i) * (q == 2.0 ? a * a : (q == 1.0 ? a : std::pow(a, q)));
  }
  return g.sphere_area() * sum;
}

double grad_norm_sq(const RadialProfile& profile) {
  const auto& g = profile.grid();
  const auto v = profile.values();
  const auto c = g.conductances();
  double sum = 0.0;
  for (std::size_t i = 0; i + 1 < v.size(); ++i) {
    const double d = v[i + 1] - v[i];
    sum += c[i] * d * d;
  }
  return g.sphere_area() * sum;
}

RadialProfile interpolate(std::span<const double> r, std::span<const double> v, GridPtr grid) {
  if (r.size() != v.size() || r.size() < 4)
    throw InvalidArgument("interpolation needs at least 4 matching samples");
  for (std::size_t i = 1; i < r.size(); ++i)
    if (!(r[i] > r[i - 1])) throw InvalidArgument("interpolation abscissas must increase");
  boost::math::interpolators::pchip<std::vector<double>> spline(
      std::vector<double>(r.begin(), r.end()), std::vector<double>(v.begin(), v.end()), 0.0);
  std::vector<double> out(grid->size());
  const double lo = r.front();
  const double hi = r.back();
  for (std::size_t i = 0; i < out.size(); ++i) {
    const double x = grid->node(i);
    if (x > hi)
      out[i] = 0.0;
    else if (x <= lo)
      out[i] = v.front();
    else
      out[i] = spline(x);
  }
  return RadialProfile(std::move(grid), std::move(out));
}

RadialProfile dilate(const RadialProfile& profile, double t, bool mass_preserving) {
  if (!(t > 0.0) || !std::isfinite(t))
    throw InvalidArgument("dilation factor must be positive, got " + std::to_string(t));
  const auto& g = profile.grid();
  if (t == 1.0) return profile;
  std::vector<double> scaled_r(g.size());
  for (std::size_t i = 0; i < g.size(); ++i) scaled_r[i] = g.node(i) / t;
  // u(t r_i) = interpolant through (r_j / t, v_j) evaluated at r_i.
  auto out = interpolate(scaled_r, profile.values(), profile.grid_ptr());
  if (mass_preserving) {
    const double f = std::pow(t, 0.5 * g.dim());
    for (double& x : out.mutable_values()) x *= f;
  }
  return out;
}

}  // namespace choquard
