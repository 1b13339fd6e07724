#pragma once

#include <cstddef>
#include <filesystem>
#include <span>
#include <vector>

#include "choquard/grid.hpp"
#include "choquard/params.hpp"

namespace choquard {

/// Sphere average of the Riesz kernel,
///   A(r, s) = omega_{N-2} int_0^pi (r^2 + s^2 - 2 r s cos t)^{(alpha-N)/2} sin^{N-2} t dt,
/// so that (I_alpha * g)(r) = c_{N,alpha} int_0^inf A(r, s) g(s) s^{N-1} ds.
/// Closed forms for N = 1 and N = 3, adaptive quadrature otherwise.
/// Returns +inf on the diagonal when alpha <= 1 (N = 3) or wherever the
/// kernel is not integrable across r = s.
double angular_kernel(double r, double s, int dim, double alpha);
inline double angular_kernel(double r, double s, const ProblemParams& params) {
  return angular_kernel(r, s, params.dim(), params.alpha());
}

/// The theta-integral evaluated by adaptive Gauss-Kronrod for any N >= 2
/// (r != s). Used for N not in {1, 3}; exposed to cross-check the closed forms.
double angular_kernel_quadrature(double r, double s, int dim, double alpha);

/// int_{B_R} |x - y|^{alpha - N} dy for |x| = r <= R (no c_{N,alpha} factor).
double ball_potential(double r, double big_r, int dim, double alpha);

/// Dense Nystrom discretization of g -> I_alpha * g on a radial grid:
/// (K g)_i approximates (I_alpha * g)(r_i). Off-diagonal entries are
/// c A(r_i, r_j) w_j; the diagonal absorbs the singular part,
///   K_ii = c (B_i - sum_{j != i} A(r_i, r_j) w_j),  B_i = ball_potential(r_i, r_max),
/// so (K g)_i = c [sum_{j != i} A_ij w_j (g_j - g_i) + B_i g_i].
/// Every entry is nonnegative and w_i K_ij is symmetric.
class KernelMatrix {
 public:
  KernelMatrix(GridPtr grid, int dim, double alpha, std::vector<double> entries);

  std::size_t size() const noexcept { return n_; }
  int dim() const noexcept { return dim_; }
  double alpha() const noexcept { return alpha_; }
  const RadialGrid& grid() const noexcept { return *grid_; }
  const GridPtr& grid_ptr() const noexcept { return grid_; }
  double operator()(std::size_t i, std::size_t j) const { return entries_[i * n_ + j]; }
  std::span<const double> entries() const noexcept { return entries_; }

  /// out = K g
  void apply(std::span<const double> g, std::span<double> out) const;
  std::vector<double> apply(std::span<const double> g) const;

 private:
  GridPtr grid_;
  int dim_;
  double alpha_;
  std::size_t n_;
  std::vector<double> entries_;
};

/// Assembles the kernel; rows are distributed over `threads` workers
/// (0 = hardware concurrency). The result is bitwise independent of `threads`.
KernelMatrix assemble_kernel(GridPtr grid, const ProblemParams& params, unsigned threads = 0);

/// Samples of I_alpha * |u|^p on the grid.
RadialProfile riesz_convolve(const KernelMatrix& kernel, const RadialProfile& profile, double p);

/// d(r) = |conv(r) - I_alpha(r) total_mass| r^{N-alpha}.
RadialProfile farfield_deviation(const RadialProfile& conv, double total_mass,
                                 const ProblemParams& params);

/// Binary cache: 32-byte header (8-byte magic "CHQKERN1", uint64 n,
/// uint64 N, float64 alpha) followed by n*n little-endian float64, row-major.
void save_kernel(const KernelMatrix& kernel, const std::filesystem::path& path);
/// Throws InputError when the file is missing, truncated, or keyed to a
/// different (n, N, alpha).
KernelMatrix load_kernel(const std::filesystem::path& path, GridPtr grid,
                         const ProblemParams& params);
/// <dir>/kernel_N<N>_a<alpha>_<grid hash>.bin
std::filesystem::path kernel_cache_path(const std::filesystem::path& dir, const RadialGrid& grid,
                                        const ProblemParams& params);
/// Loads from the cache directory when a matching file exists, otherwise
/// assembles and writes it.
KernelMatrix cached_kernel(const std::filesystem::path& dir, GridPtr grid,
                           const ProblemParams& params, unsigned threads = 0);

}  // namespace choquard
