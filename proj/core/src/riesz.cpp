#include "choquard/riesz.hpp"

#include <algorithm>
#include <bit>
#include <cmath>
#include <cstdint>
#include <cstring>
#include <fstream>
#include <limits>
#include <numbers>
#include <sstream>
#include <thread>

#include <boost/math/quadrature/gauss_kronrod.hpp>

#include "choquard/errors.hpp"

namespace choquard {

namespace {

using boost::math::quadrature::gauss_kronrod;
constexpr double kInf = std::numeric_limits<double>::infinity();
constexpr double kPi = std::numbers::pi;

template <class F>
double gk(F&& f, double a, double b, double tol = 1e-11) {
  if (!(b > a)) return 0.0;
  double err = 0.0;
  return gauss_kronrod<double, 31>::integrate(f, a, b, 25, tol, &err);
}

// N = 3: 2 pi [(r+s)^e - |r-s|^e] / (e r s) with e = alpha - 1.
double kernel_3d(double r, double s, double alpha) {
  const double a = std::max(r, s);
  const double b = std::min(r, s);
  const double t = b / a;
  const double e = alpha - 1.0;
  const double up = std::log1p(t);
  const double down = std::log1p(-t);
  double ratio;
  if (e == 0.0) {
    ratio = up - down;
  } else {
    if (t == 1.0 && e < 0.0) return kInf;
    ratio = (std::expm1(e * up) - std::expm1(e * down)) / e;
  }
  if (!std::isfinite(ratio)) return kInf;
  return 2.0 * kPi * std::pow(a, alpha - 3.0) * ratio / t;
}

double kernel_1d(double r, double s, double alpha) {
  const double d = std::abs(r - s);
  if (d == 0.0 && alpha <= 1.0) return kInf;
  return std::pow(d, alpha - 1.0) + std::pow(r + s, alpha - 1.0);
}

double lower_sphere_area(int dim) {
  // omega_{N-2}, with omega_0 = 2.
  return dim == 2 ? 2.0 : sphere_area(dim - 1);
}

void check_kernel_args(double r, double s, int dim, double alpha) {
  if (dim < 1) throw InvalidArgument("dimension must be positive");
  if (!(alpha > 0.0 && alpha < dim)) throw InvalidArgument("alpha must lie in (0, N)");
  if (!(r > 0.0) || !(s > 0.0)) throw InvalidArgument("kernel radii must be positive");
}

}  // namespace

double angular_kernel_quadrature(double r, double s, int dim, double alpha) {
  check_kernel_args(r, s, dim, alpha);
  if (dim < 2) throw InvalidArgument("theta quadrature needs N >= 2");
  const double gap = (r - s) * (r - s);
  const double rs4 = 4.0 * r * s;
  const double expo = 0.5 * (alpha - dim);
  if (gap == 0.0 && alpha <= 1.0) return kInf;
  auto f = [&](double theta) {
    const double sh = std::sin(0.5 * theta);
    const double base = gap + rs4 * sh * sh;
    return std::pow(base, expo) * std::pow(std::sin(theta), dim - 2);
  };
  // The integrand peaks in a layer of width |r-s|/sqrt(rs) at theta = 0;
  // theta = phi^2 on that layer tames the endpoint for small alpha.
  double layer = 8.0 * std::sqrt(gap / (r * s)) + 1e-300;
  if (layer > 0.5 * kPi) layer = kPi;
  const double head = gk([&](double phi) { return 2.0 * phi * f(phi * phi); }, 0.0,
                         std::sqrt(layer));
  if (layer == kPi) return lower_sphere_area(dim) * head;
  // Boost's tolerance is relative to the piece; tie the tail's to the head
  // or a negligible tail drives the adaptive tree to full depth.
  double rough = 0.0;
  const double guess = std::abs(gauss_kronrod<double, 31>::integrate(f, layer, kPi, 0, 0.0, &rough));
  const double tail = gk(f, layer, kPi, 1e-11 * std::max(1.0, head / std::max(guess, 1e-300)));
  return lower_sphere_area(dim) * (head + tail);
}

double angular_kernel(double r, double s, int dim, double alpha) {
  check_kernel_args(r, s, dim, alpha);
  switch (dim) {
    case 1:
      return kernel_1d(r, s, alpha);
    case 3:
      return kernel_3d(r, s, alpha);
    default:
      return angular_kernel_quadrature(r, s, dim, alpha);
  }
}

double ball_potential(double r, double big_r, int dim, double alpha) {
  if (!(alpha > 0.0 && alpha < dim)) throw InvalidArgument("alpha must lie in (0, N)");
  if (!(r >= 0.0) || !(r <= big_r * (1.0 + 1e-14)))
    throw InvalidArgument("ball_potential needs 0 <= r <= R");
  r = std::min(r, big_r);
  if (dim == 1) return (std::pow(big_r - r, alpha) + std::pow(big_r + r, alpha)) / alpha;
  // Polar coordinates centred at x: the ray in direction phi leaves B_R
  // after rho(phi) = sqrt(R^2 - r^2 sin^2 phi) - r cos phi.
  const double diff = (big_r - r) * (big_r + r);
  auto rho = [&](double phi) {
    const double c = std::cos(phi);
    const double root = std::sqrt(std::max(0.0, diff + r * r * c * c));
    return c >= 0.0 ? diff / (root + r * c) : root - r * c;
  };
  auto f = [&](double phi) { return std::pow(rho(phi), alpha) * std::pow(std::sin(phi), dim - 2); };
  const double half = 0.5 * kPi;
  const double total = diff == 0.0 ? gk(f, half, kPi, 1e-13) : gk(f, 0.0, half, 1e-13) + gk(f, half, kPi, 1e-13);
  return lower_sphere_area(dim) * total / alpha;
}

KernelMatrix::KernelMatrix(GridPtr grid, int dim, double alpha, std::vector<double> entries)
    : grid_(std::move(grid)), dim_(dim), alpha_(alpha), n_(grid_ ? grid_->size() : 0),
      entries_(std::move(entries)) {
  if (!grid_) throw InvalidArgument("kernel needs a grid");
  if (entries_.size() != n_ * n_) throw InvalidArgument("kernel entries do not match grid");
  if (grid_->dim() != dim_) throw InvalidArgument("kernel dimension does not match grid");
}

void KernelMatrix::apply(std::span<const double> g, std::span<double> out) const {
  if (g.size() != n_ || out.size() != n_) throw InvalidArgument("kernel apply: size mismatch");
  for (std::size_t i = 0; i < n_; ++i) {
    const double* row = entries_.data() + i * n_;
    double acc = 0.0;
    for (std::size_t j = 0; j < n_; ++j) acc += row[j] * g[j];
    out[i] = acc;
  }
}

std::vector<double> KernelMatrix::apply(std::span<const double> g) const {
  std::vector<double> out(n_);
  apply(g, out);
  return out;
}

KernelMatrix assemble_kernel(GridPtr grid, const ProblemParams& params, unsigned threads) {
  if (!grid) throw InvalidArgument("kernel needs a grid");
  if (grid->dim() != params.dim()) throw InvalidArgument("grid and params disagree on N");
  if (!grid->is_ball()) throw InvalidArgument("kernel assembly needs a ball grid");
  const std::size_t n = grid->size();
  const int dim = params.dim();
  const double alpha = params.alpha();
  const double c = params.riesz_constant();
  const auto r = grid->nodes();
  const auto w = grid->weights();
  const double big_r = grid->r_max();

  std::vector<double> entries;
  try {
    entries.assign(n * n, 0.0);
  } catch (const std::bad_alloc&) {
    throw ResourceError("cannot allocate a " + std::to_string(n) + "x" + std::to_string(n) +
                " kernel matrix");
  }

  auto fill_row = [&](std::size_t i) {
    double* row = entries.data() + i * n;
    double off = 0.0;
    for (std::size_t j = 0; j < n; ++j) {
      if (j == i) continue;
      // Canonical argument order keeps A(r_i, r_j) == A(r_j, r_i) bitwise.
      const double a = i < j ? angular_kernel(r[i], r[j], dim, alpha)
                             : angular_kernel(r[j], r[i], dim, alpha);
      off += a * w[j];
      row[j] = c * a * w[j];
    }
    row[i] = std::max(0.0, c * (ball_potential(r[i], big_r, dim, alpha) - off));
  };

  unsigned workers = threads ? threads : std::max(1u, std::thread::hardware_concurrency());
  workers = static_cast<unsigned>(std::min<std::size_t>(workers, n));
  if (workers <= 1) {
    for (std::size_t i = 0; i < n; ++i) fill_row(i);
  } else {
    std::vector<std::jthread> pool;
    pool.reserve(workers);
    for (unsigned t = 0; t < workers; ++t)
      pool.emplace_back([&, t] {
        for (std::size_t i = t; i < n; i += workers) fill_row(i);
      });
  }
  return KernelMatrix(std::move(grid), dim, alpha, std::move(entries));
}

RadialProfile riesz_convolve(const KernelMatrix& kernel, const RadialProfile& profile, double p) {
  if (profile.grid_ptr() != kernel.grid_ptr() && profile.grid().hash() != kernel.grid().hash())
    throw InvalidArgument("profile and kernel live on different grids");
  std::vector<double> g(profile.size());
  for (std::size_t i = 0; i < g.size(); ++i) g[i] = std::pow(std::abs(profile[i]), p);
  return RadialProfile(profile.grid_ptr(), kernel.apply(g));
}

RadialProfile farfield_deviation(const RadialProfile& conv, double total_mass,
                                 const ProblemParams& params) {
  const double c = params.riesz_constant();
  const double decay = params.dim() - params.alpha();
  std::vector<double> d(conv.size());
  for (std::size_t i = 0; i < d.size(); ++i) {
    const double r = conv.grid().node(i);
    const double scale = std::pow(r, decay);
    d[i] = std::abs(conv[i] * scale - c * total_mass);
  }
  return RadialProfile(conv.grid_ptr(), std::move(d));
}

// ---------------------------------------------------------------------------
// Binary cache

namespace {

constexpr char kMagic[8] = {'C', 'H', 'Q', 'K', 'E', 'R', 'N', '1'};

template <class T>
void put_le(std::ostream& os, T value) {
  auto bits = std::bit_cast<std::array<unsigned char, sizeof(T)>>(value);
  if constexpr (std::endian::native == std::endian::big) std::reverse(bits.begin(), bits.end());
  os.write(reinterpret_cast<const char*>(bits.data()), sizeof(T));
}

template <class T>
T get_le(std::istream& is) {
  std::array<unsigned char, sizeof(T)> bits{};
  if (!is.read(reinterpret_cast<char*>(bits.data()), sizeof(T)))
    throw InputError("kernel cache truncated", 0);
  if constexpr (std::endian::native == std::endian::big) std::reverse(bits.begin(), bits.end());
  return std::bit_cast<T>(bits);
}

}  // namespace

void save_kernel(const KernelMatrix& kernel, const std::filesystem::path& path) {
  const auto tmp = std::filesystem::path(path).concat(".tmp");
  {
    std::ofstream os(tmp, std::ios::binary | std::ios::trunc);
    if (!os) throw Error("cannot open " + tmp.string() + " for writing");
    os.write(kMagic, sizeof kMagic);
    put_le<std::uint64_t>(os, kernel.size());
    put_le<std::uint64_t>(os, static_cast<std::uint64_t>(kernel.dim()));
    put_le<double>(os, kernel.alpha());
    if constexpr (std::endian::native == std::endian::little) {
      os.write(reinterpret_cast<const char*>(kernel.entries().data()),
               static_cast<std::streamsize>(kernel.entries().size() * sizeof(double)));
    } else {
      for (double v : kernel.entries()) put_le<double>(os, v);
    }
    if (!os) throw Error("failed writing " + tmp.string());
  }
  std::filesystem::rename(tmp, path);
}

KernelMatrix load_kernel(const std::filesystem::path& path, GridPtr grid,
                         const ProblemParams& params) {
  std::ifstream is(path, std::ios::binary);
  if (!is) throw InputError("cannot open kernel cache " + path.string(), 0);
  char magic[8];
  if (!is.read(magic, sizeof magic) || std::memcmp(magic, kMagic, sizeof magic) != 0)
    throw InputError("bad kernel cache magic in " + path.string(), 0);
  const auto n = get_le<std::uint64_t>(is);
  const auto dim = get_le<std::uint64_t>(is);
  const auto alpha = get_le<double>(is);
  if (n != grid->size() || dim != static_cast<std::uint64_t>(params.dim()) ||
      alpha != params.alpha())
    throw InputError("kernel cache " + path.string() + " is keyed to a different problem", 0);
  std::vector<double> entries(n * n);
  if constexpr (std::endian::native == std::endian::little) {
    if (!is.read(reinterpret_cast<char*>(entries.data()),
                 static_cast<std::streamsize>(entries.size() * sizeof(double))))
      throw InputError("kernel cache truncated", 0);
  } else {
    for (double& v : entries) v = get_le<double>(is);
  }
  return KernelMatrix(std::move(grid), params.dim(), params.alpha(), std::move(entries));
}

std::filesystem::path kernel_cache_path(const std::filesystem::path& dir, const RadialGrid& grid,
                                        const ProblemParams& params) {
  std::ostringstream name;
  name << "kernel_N" << params.dim() << "_a" << std::hexfloat << params.alpha() << "_"
       << std::hex << grid.hash() << ".bin";
  return dir / name.str();
}

KernelMatrix cached_kernel(const std::filesystem::path& dir, GridPtr grid,
                           const ProblemParams& params, unsigned threads) {
  const auto path = kernel_cache_path(dir, *grid, params);
  if (std::filesystem::exists(path)) {
    try {
      return load_kernel(path, grid, params);
    } catch (const InputError&) {
      // stale or foreign file: rebuild below
    }
  }
  auto kernel = assemble_kernel(grid, params, threads);
  std::filesystem::create_directories(dir);
  save_kernel(kernel, path);
  return kernel;
}

}  // namespace choquard
