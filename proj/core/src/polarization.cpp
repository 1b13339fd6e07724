#include "choquard/polarization.hpp"

#include <algorithm>
#include <cmath>
#include <random>
#include <sstream>
#include <thread>

#include "choquard/errors.hpp"

namespace choquard {

namespace {

double dot(const Point& a, const Point& b) {
  double s = 0.0;
  for (std::size_t k = 0; k < a.size(); ++k) s += a[k] * b[k];
  return s;
}

double distance(const Point& a, const Point& b) {
  double s = 0.0;
  for (std::size_t k = 0; k < a.size(); ++k) s += (a[k] - b[k]) * (a[k] - b[k]);
  return std::sqrt(s);
}

std::string describe(const Point& x) {
  std::ostringstream os;
  os.precision(17);
  os << '(';
  for (std::size_t k = 0; k < x.size(); ++k) os << (k ? ", " : "") << x[k];
  os << ')';
  return os.str();
}

void check_dims(const DiscreteField& f, const HalfSpace& h) {
  f.validate();
  if (!f.points.empty() && f.points.front().size() != h.dim())
    throw InvalidArgument("half-space and field dimensions differ");
}

}  // namespace

HalfSpace::HalfSpace(Point normal, double offset) : normal_(std::move(normal)), offset_(offset) {
  if (normal_.empty()) throw InvalidArgument("half-space normal is empty");
  const double len = std::sqrt(dot(normal_, normal_));
  if (std::abs(len - 1.0) > 1e-12) throw InvalidArgument("half-space normal must be a unit vector");
  if (!std::isfinite(offset_)) throw InvalidArgument("half-space offset must be finite");
}

HalfSpace HalfSpace::from_direction(Point direction, double offset) {
  const double len = std::sqrt(dot(direction, direction));
  if (!(len > 0.0)) throw InvalidArgument("half-space direction must be nonzero");
  for (double& x : direction) x /= len;
  return HalfSpace(std::move(direction), offset);
}

double HalfSpace::side(const Point& x) const {
  if (x.size() != normal_.size()) throw InvalidArgument("point and half-space dimensions differ");
  return dot(normal_, x) - offset_;
}

Point reflect(const Point& x, const HalfSpace& h) {
  const double s = 2.0 * h.side(x);
  Point y(x);
  for (std::size_t k = 0; k < y.size(); ++k) y[k] -= s * h.normal()[k];
  return y;
}

void DiscreteField::validate() const {
  if (points.size() != values.size()) throw InvalidArgument("points and values differ in length");
  for (const auto& p : points)
    if (p.size() != points.front().size()) throw InvalidArgument("ragged point dimensions");
  for (double v : values)
    if (!(v >= 0.0) || !std::isfinite(v)) throw InvalidArgument("field values must be >= 0");
}

std::vector<std::size_t> mirror_map(const DiscreteField& f, const HalfSpace& h, double tol) {
  check_dims(f, h);
  const std::size_t n = f.size();
  std::vector<std::size_t> m(n, n);
  for (std::size_t i = 0; i < n; ++i) {
    if (m[i] != n) continue;
    const Point y = reflect(f.points[i], h);
    for (std::size_t j = i; j < n; ++j) {
      if (distance(y, f.points[j]) <= tol) {
        m[i] = j;
        m[j] = i;
        break;
      }
    }
    if (m[i] == n)
      throw PairingError("point " + describe(f.points[i]) + " has no mirror image " +
                         describe(y) + " in the field");
  }
  return m;
}

DiscreteField polarize(const DiscreteField& f, const HalfSpace& h) {
  const auto m = mirror_map(f, h);
  DiscreteField out = f;
  for (std::size_t i = 0; i < f.size(); ++i) {
    const double a = f.values[i];
    const double b = f.values[m[i]];
    out.values[i] = h.contains(f.points[i]) ? std::max(a, b) : std::min(a, b);
  }
  return out;
}

DiscreteField compose_reflection(const DiscreteField& f, const HalfSpace& h) {
  const auto m = mirror_map(f, h);
  DiscreteField out = f;
  for (std::size_t i = 0; i < f.size(); ++i) out.values[i] = f.values[m[i]];
  return out;
}

double riesz_pairing(const DiscreteField& f, double alpha) {
  f.validate();
  if (f.size() < 2) throw InvalidArgument("riesz_pairing needs at least 2 points");
  const double d = static_cast<double>(f.points.front().size());
  if (!(alpha > 0.0 && alpha < d)) throw InvalidArgument("alpha must lie in (0, d)");
  double s = 0.0;
  for (std::size_t i = 0; i < f.size(); ++i) {
    for (std::size_t j = i + 1; j < f.size(); ++j) {
      const double r = distance(f.points[i], f.points[j]);
      if (!(r > 0.0))
        throw InvalidArgument("coincident points " + describe(f.points[i]) + " at indices " +
                              std::to_string(i) + ", " + std::to_string(j));
      s += f.values[i] * f.values[j] * std::pow(r, alpha - d);
    }
  }
  return 2.0 * s;
}

std::string_view to_string(PairingCase c) {
  switch (c) {
    case PairingCase::strict:
      return "strict";
    case PairingCase::equal_u:
      return "equal_u";
    case PairingCase::equal_reflected:
      return "equal_reflected";
    case PairingCase::equal_both:
      return "equal_both";
    case PairingCase::anomalous:
      return "anomalous";
  }
  return "?";
}

PairingCheck pairing_inequality_check(const DiscreteField& f, const HalfSpace& h, double alpha,
                                      double zero_tol) {
  const DiscreteField pol = polarize(f, h);
  const DiscreteField refl = compose_reflection(f, h);
  PairingCheck c;
  c.pairing = riesz_pairing(f, alpha);
  c.gain = riesz_pairing(pol, alpha) - c.pairing;
  c.zero_gain = std::abs(c.gain) <= zero_tol * std::max(1.0, c.pairing);
  c.equals_u = pol.values == f.values;
  c.equals_reflected = pol.values == refl.values;
  if (!c.zero_gain)
    c.kind = PairingCase::strict;
  else if (c.equals_u && c.equals_reflected)
    c.kind = PairingCase::equal_both;
  else if (c.equals_u)
    c.kind = PairingCase::equal_u;
  else if (c.equals_reflected)
    c.kind = PairingCase::equal_reflected;
  else
    c.kind = PairingCase::anomalous;
  return c;
}

std::vector<HalfSpace> lattice_half_spaces(const Point& x0, double spacing, std::size_t count,
                                           std::uint64_t seed, int max_steps) {
  if (!(spacing > 0.0)) throw InvalidArgument("lattice spacing must be positive");
  const std::size_t d = x0.size();
  if (d < 1) throw InvalidArgument("x0 must have a dimension");
  std::vector<Point> normals;
  for (std::size_t i = 0; i < d; ++i)
    for (double s : {1.0, -1.0}) {
      Point a(d, 0.0);
      a[i] = s;
      normals.push_back(a);
    }
  const double inv = 1.0 / std::sqrt(2.0);
  for (std::size_t i = 0; i < d; ++i)
    for (std::size_t j = i + 1; j < d; ++j)
      for (double si : {1.0, -1.0})
        for (double sj : {1.0, -1.0}) {
          Point a(d, 0.0);
          a[i] = si * inv;
          a[j] = sj * inv;
          normals.push_back(a);
        }
  std::mt19937_64 rng(seed);
  std::uniform_int_distribution<std::size_t> pick(0, normals.size() - 1);
  std::uniform_int_distribution<int> step(0, std::max(0, max_steps));
  std::vector<HalfSpace> out;
  out.reserve(count);
  for (std::size_t k = 0; k < count; ++k) {
    const Point& a = normals[pick(rng)];
    const bool axis = std::count(a.begin(), a.end(), 0.0) == static_cast<long>(d - 1);
    // Offsets keeping h Z^d invariant: (h/2) Z for axes, (h/sqrt 2) Z for diagonals.
    const double delta = axis ? 0.5 * spacing : spacing * inv;
    const double first = std::ceil(dot(a, x0) / delta - 1e-9) * delta;
    out.emplace_back(a, first + step(rng) * delta);
  }
  return out;
}

DiscreteField complete_mirrors(const DiscreteField& f, const HalfSpace& h, double tol) {
  check_dims(f, h);
  DiscreteField out = f;
  for (std::size_t i = 0; i < f.size(); ++i) {
    const Point y = reflect(f.points[i], h);
    bool found = false;
    for (const auto& q : out.points)
      if (distance(y, q) <= tol) {
        found = true;
        break;
      }
    if (!found) {
      out.points.push_back(y);
      out.values.push_back(0.0);
    }
  }
  return out;
}

SymmetryReport symmetry_fixed_point_check(const DiscreteField& field, const Point& x0,
                                          const std::vector<HalfSpace>& half_spaces) {
  field.validate();
  SymmetryReport rep;
  double scale = 0.0;
  for (double v : field.values) scale = std::max(scale, v);
  for (std::size_t k = 0; k < half_spaces.size(); ++k) {
    const HalfSpace& h = half_spaces[k];
    if (!h.contains(x0, 1e-9)) throw InvalidArgument("sampled half-space does not contain x0");
    const DiscreteField full = complete_mirrors(field, h);
    const DiscreteField pol = polarize(full, h);
    ++rep.sampled;
    bool same = true;
    // Pairs equidistant from x0 carry equal values up to rounding.
    for (std::size_t i = 0; i < full.size() && same; ++i)
      same = std::abs(pol.values[i] - full.values[i]) <= 1e-12 * scale;
    if (same)
      ++rep.fixed;
    else
      rep.failures.push_back(k);
  }
  return rep;
}

SymmetryReport symmetry_fixed_point_check(const DiscreteField& field, const Point& x0,
                                          double spacing, std::size_t sample_count,
                                          std::uint64_t seed) {
  return symmetry_fixed_point_check(field, x0, lattice_half_spaces(x0, spacing, sample_count, seed));
}

std::string_view to_string(TrialKind kind) {
  switch (kind) {
    case TrialKind::generic:
      return "generic";
    case TrialKind::polarized:
      return "polarized";
    case TrialKind::reflected:
      return "reflected";
    case TrialKind::symmetric:
      return "symmetric";
  }
  return "?";
}

TrialResult run_pairing_trial(std::uint64_t seed) {
  std::mt19937_64 rng(seed);
  std::uniform_real_distribution<double> unit(0.0, 1.0);
  std::normal_distribution<double> gauss(0.0, 1.0);
  TrialResult t;
  t.seed = seed;
  t.kind = static_cast<TrialKind>(seed % 4);
  t.dim = unit(rng) < 0.5 ? 2 : 3;
  t.alpha = 0.05 * t.dim + 0.9 * t.dim * unit(rng);
  const std::size_t base = 4 + static_cast<std::size_t>(unit(rng) * 28.0);

  Point dir(t.dim);
  for (double& x : dir) x = gauss(rng);
  const HalfSpace h = HalfSpace::from_direction(dir, 2.0 * unit(rng) - 1.0);

  DiscreteField f;
  for (std::size_t k = 0; k < base; ++k) {
    Point x(t.dim);
    for (double& c : x) c = 1.5 * gauss(rng);
    const Point y = reflect(x, h);
    const double a = unit(rng);
    // Occasional ties and zeros exercise the degenerate pairs.
    const double u = unit(rng);
    const double b = u < 0.1 ? a : (u < 0.2 ? 0.0 : unit(rng));
    f.points.push_back(x);
    f.values.push_back(a);
    f.points.push_back(y);
    f.values.push_back(t.kind == TrialKind::symmetric ? a : b);
  }
  if (t.kind == TrialKind::polarized) f = polarize(f, h);
  if (t.kind == TrialKind::reflected) f = compose_reflection(polarize(f, h), h);
  t.points = f.size();
  t.check = pairing_inequality_check(f, h, t.alpha);
  return t;
}

CampaignReport run_pairing_campaign(std::size_t trials, std::uint64_t base_seed, unsigned jobs,
                                    double negative_tol) {
  CampaignReport rep;
  rep.trials = trials;
  rep.base_seed = base_seed;
  rep.results.resize(trials);
  const unsigned workers = std::max(1u, std::min<unsigned>(jobs, static_cast<unsigned>(trials)));
  auto work = [&](unsigned w) {
    for (std::size_t k = w; k < trials; k += workers) rep.results[k] = run_pairing_trial(base_seed + k);
  };
  if (workers == 1) {
    work(0);
  } else {
    std::vector<std::jthread> pool;
    for (unsigned w = 0; w < workers; ++w) pool.emplace_back(work, w);
  }
  rep.min_gain = INFINITY;
  for (const auto& t : rep.results) {
    const double rel = t.check.gain / std::max(1.0, t.check.pairing);
    rep.min_gain = std::min(rep.min_gain, rel);
    if (t.check.zero_gain) ++rep.equality_count;
    if (t.check.kind == PairingCase::anomalous) ++rep.anomalies;
    if (rel < -negative_tol || t.check.kind == PairingCase::anomalous)
      rep.failures.push_back(t.seed);
  }
  if (trials == 0) rep.min_gain = 0.0;
  return rep;
}

nlohmann::json to_json(const CampaignReport& r, bool include_trials) {
  nlohmann::json j;
  j["trials"] = r.trials;
  j["base_seed"] = r.base_seed;
  j["min_gain"] = r.min_gain;
  j["gain_normalization"] = "gain / max(1, pairing)";
  j["equality_count"] = r.equality_count;
  j["anomalies"] = r.anomalies;
  j["failures"] = r.failures;
  if (include_trials) {
    auto& arr = j["results"] = nlohmann::json::array();
    for (const auto& t : r.results)
      arr.push_back({{"seed", t.seed},
                     {"kind", to_string(t.kind)},
                     {"dim", t.dim},
                     {"alpha", t.alpha},
                     {"points", t.points},
                     {"gain", t.check.gain},
                     {"pairing", t.check.pairing},
                     {"case", to_string(t.check.kind)}});
  }
  return j;
}

}  // namespace choquard
