#pragma once

#include <cstddef>
#include <cstdint>
#include <memory>
#include <span>
#include <vector>

namespace choquard {

enum class Spacing { uniform, graded };

/// One-dimensional radial discretization of functions u(x) = v(|x|) on the
/// ball B_{r_max} (inner_radius == 0) or on the annulus inner_radius <= |x| <= r_max.
///
/// The weights integrate f(r) r^{N-1} dr over the whole radial interval and
/// double as the cell measures of the finite-difference operator. Face
/// conductances C_{i+1/2} = F_{i+1/2} / (r_{i+1} - r_i) define the discrete
/// Dirichlet form shared by grad_norm_sq and the linear solver; annuli use
/// F = r_{i+1/2}^{N-1}, balls F = N (w_0 + ... + w_i) / r_{i+1/2}, which
/// equals the face area up to O(h^2) and is exact for v = r^2.
class RadialGrid {
 public:
  RadialGrid(int dim, double inner_radius, std::vector<double> nodes, std::vector<double> weights,
             Spacing spacing);

  int dim() const noexcept { return dim_; }
  std::size_t size() const noexcept { return nodes_.size(); }
  double r_max() const noexcept { return nodes_.back(); }
  /// 0 for ball grids; the annulus inner radius otherwise.
  double inner_radius() const noexcept { return inner_radius_; }
  bool is_ball() const noexcept { return inner_radius_ == 0.0; }
  Spacing spacing() const noexcept { return spacing_; }
  /// omega_{N-1}
  double sphere_area() const noexcept { return sphere_area_; }

  std::span<const double> nodes() const noexcept { return nodes_; }
  std::span<const double> weights() const noexcept { return weights_; }
  std::span<const double> conductances() const noexcept { return conductances_; }
  double node(std::size_t i) const { return nodes_[i]; }
  double weight(std::size_t i) const { return weights_[i]; }

  /// FNV-1a over dim, nodes and weights; keys the kernel cache.
  std::uint64_t hash() const noexcept;

 private:
  int dim_;
  double inner_radius_;
  std::vector<double> nodes_;
  std::vector<double> weights_;
  std::vector<double> conductances_;
  Spacing spacing_;
  double sphere_area_;
};

using GridPtr = std::shared_ptr<const RadialGrid>;

/// Ball grid with r_0 = r_max / (10 n) > 0. Uniform grids use the
/// Gregory-corrected trapezoid rule (exact for cubics), graded grids the
/// trapezoid rule on r_i = r_0 + (r_max - r_0)(e^{k xi_i} - 1)/(e^k - 1).
/// Throws InvalidArgument for r_max <= 0, n < 16 or dim < 1.
GridPtr make_grid(int dim, double r_max, std::size_t n, Spacing spacing = Spacing::uniform);

/// Grid on [r_inner, r_max] with r_inner > 0; no origin cell.
GridPtr make_annulus_grid(int dim, double r_inner, double r_max, std::size_t n,
                          Spacing spacing = Spacing::uniform);

/// Samples v(r_i) of a radial function on a grid.
class RadialProfile {
 public:
  RadialProfile(GridPtr grid, std::vector<double> values);

  /// Samples f(r_i).
  template <class F>
  static RadialProfile sample(GridPtr grid, F&& f) {
    std::vector<double> v(grid->size());
    for (std::size_t i = 0; i < v.size(); ++i) v[i] = f(grid->node(i));
    return RadialProfile(std::move(grid), std::move(v));
  }

  const RadialGrid& grid() const noexcept { return *grid_; }
  const GridPtr& grid_ptr() const noexcept { return grid_; }
  std::span<const double> values() const noexcept { return values_; }
  std::vector<double>& mutable_values() noexcept { return values_; }
  double operator[](std::size_t i) const { return values_[i]; }
  std::size_t size() const noexcept { return values_.size(); }

  /// All samples strictly positive.
  bool positive() const noexcept;
  /// Samples nonincreasing in i.
  bool monotone() const noexcept;
  bool is_zero() const noexcept;
  double max_abs() const noexcept;

  RadialProfile scaled(double factor) const;

 private:
  GridPtr grid_;
  std::vector<double> values_;
};

/// omega_{N-1} sum_i w_i |v_i|^q, approximating the integral of |u|^q over R^N.
/// Throws DomainError when q is fractional and some sample is negative.
double integrate(const RadialProfile& profile, double q);

/// Discrete Dirichlet energy of u over R^N: omega_{N-1} sum_i C_{i+1/2} (v_{i+1}-v_i)^2.
double grad_norm_sq(const RadialProfile& profile);

/// u_t(x) = u(t x), or t^{N/2} u(t x) when mass_preserving; resampled on the
/// same grid by monotone cubic interpolation, zero beyond r_max.
RadialProfile dilate(const RadialProfile& profile, double t, bool mass_preserving = false);

/// Monotone cubic interpolation of (r, v) samples onto `grid`; constant
/// (even extension) below the first abscissa, zero past the last.
RadialProfile interpolate(std::span<const double> r, std::span<const double> v, GridPtr grid);

}  // namespace choquard
