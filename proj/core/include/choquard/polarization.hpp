#pragma once

#include <cstdint>
#include <optional>
#include <string>
#include <vector>

#include <nlohmann/json.hpp>

namespace choquard {

using Point = std::vector<double>;

/// H = { x : a . x <= b } with |a| = 1.
class HalfSpace {
 public:
  /// InvalidArgument unless |normal| = 1 within 1e-12.
  HalfSpace(Point normal, double offset);
  /// Normalizes the normal first.
  static HalfSpace from_direction(Point direction, double offset);

  const Point& normal() const noexcept { return normal_; }
  double offset() const noexcept { return offset_; }
  std::size_t dim() const noexcept { return normal_.size(); }
  /// signed distance a . x - b
  double side(const Point& x) const;
  bool contains(const Point& x, double tol = 1e-12) const { return side(x) <= tol; }

 private:
  Point normal_;
  double offset_;
};

/// x - 2 (a . x - b) a
Point reflect(const Point& x, const HalfSpace& h);

struct DiscreteField {
  std::vector<Point> points;
  std::vector<double> values;

  std::size_t size() const noexcept { return points.size(); }
  /// InvalidArgument on ragged points, size mismatch or negative values.
  void validate() const;
};

/// mirror[i] = index of sigma_H(points[i]) (within tol); PairingError naming
/// the first point without a mirror.
std::vector<std::size_t> mirror_map(const DiscreteField& field, const HalfSpace& h,
                                    double tol = 1e-9);

/// u^H(x) = max(u(x), u(sigma x)) on H, min off H.
DiscreteField polarize(const DiscreteField& field, const HalfSpace& h);

/// u(sigma_H x) at every point.
DiscreteField compose_reflection(const DiscreteField& field, const HalfSpace& h);

/// sum over ordered pairs x != y of u(x) u(y) |x - y|^{alpha - d}.
/// InvalidArgument for alpha outside (0, d), fewer than 2 points, or
/// coincident distinct points.
double riesz_pairing(const DiscreteField& field, double alpha);

enum class PairingCase { strict, equal_u, equal_reflected, equal_both, anomalous };
std::string_view to_string(PairingCase c);

struct PairingCheck {
  /// pairing(u^H) - pairing(u), summed term by term
  double gain = 0.0;
  double pairing = 0.0;
  bool zero_gain = false;
  bool equals_u = false;
  bool equals_reflected = false;
  /// anomalous: zero gain with u^H outside {u, u o sigma_H}
  PairingCase kind = PairingCase::strict;
};

/// Zero gain means |gain| <= zero_tol * max(1, pairing).
PairingCheck pairing_inequality_check(const DiscreteField& field, const HalfSpace& h, double alpha,
                                      double zero_tol = 1e-12);

/// Lattice-compatible half-spaces containing x0: normals +-e_i or
/// (+-e_i +- e_j)/sqrt 2, offsets on the half-lattice steps of `spacing`
/// within `max_steps` of x0.
std::vector<HalfSpace> lattice_half_spaces(const Point& x0, double spacing, std::size_t count,
                                           std::uint64_t seed, int max_steps = 4);

/// Adds every missing mirror image under h with value 0 (zero extension).
DiscreteField complete_mirrors(const DiscreteField& field, const HalfSpace& h, double tol = 1e-9);

struct SymmetryReport {
  std::size_t sampled = 0;
  std::size_t fixed = 0;
  /// indices into the sampled list where u^H != u
  std::vector<std::size_t> failures;
  bool inconclusive() const noexcept { return sampled == 0; }
  bool all_fixed() const noexcept { return sampled > 0 && failures.empty(); }
};

/// Checks u^H = u for each half-space (each must contain x0); missing
/// mirror points are filled with zeros.
SymmetryReport symmetry_fixed_point_check(const DiscreteField& field, const Point& x0,
                                          const std::vector<HalfSpace>& half_spaces);
/// Samples `sample_count` lattice half-spaces through or near x0.
SymmetryReport symmetry_fixed_point_check(const DiscreteField& field, const Point& x0,
                                          double spacing, std::size_t sample_count,
                                          std::uint64_t seed);

enum class TrialKind { generic, polarized, reflected, symmetric };
std::string_view to_string(TrialKind kind);

struct TrialResult {
  std::uint64_t seed = 0;
  TrialKind kind = TrialKind::generic;
  int dim = 2;
  double alpha = 1.0;
  std::size_t points = 0;
  PairingCheck check;
};

/// One randomized trial: random unit normal and offset, random points in
/// R^d with their mirrors, kind chosen by seed.
TrialResult run_pairing_trial(std::uint64_t seed);

struct CampaignReport {
  std::size_t trials = 0;
  std::uint64_t base_seed = 0;
  double min_gain = 0.0;
  std::size_t equality_count = 0;
  std::size_t anomalies = 0;
  /// seeds of trials with gain < -tol or an anomalous equality case
  std::vector<std::uint64_t> failures;
  std::vector<TrialResult> results;
};

/// Trials use seeds base_seed + k; results do not depend on `jobs`.
CampaignReport run_pairing_campaign(std::size_t trials, std::uint64_t base_seed, unsigned jobs = 1,
                                    double negative_tol = 1e-12);

nlohmann::json to_json(const CampaignReport& report, bool include_trials = false);

}  // namespace choquard
