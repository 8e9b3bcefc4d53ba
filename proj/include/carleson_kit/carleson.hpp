#pragma once

// Carleson norms over dyadic squares, the kernel test constant and the H^2
// embedding constant for atomic and polyline measures. Arc lengths and masses are
// Euclidean; carleson_norm returns sup mu(S(I)) / |I| with |I| in radians.

#include <Eigen/Dense>
#include <cmath>
#include <unordered_map>
#include <vector>

#include "carleson_kit/core.hpp"
#include "carleson_kit/disk.hpp"

namespace carleson_kit {

struct Atom {
  cplx point;
  double mass;
};

class DiscreteMeasure {
 public:
  DiscreteMeasure() = default;
  explicit DiscreteMeasure(std::vector<Atom> atoms) : atoms_(std::move(atoms)) {
    for (const auto& a : atoms_) {
      if (!(a.mass > 0.0) || !std::isfinite(a.mass)) throw DomainError("DiscreteMeasure: masses must be positive and finite");
      if (std::abs(a.point) > 1.0 + 1e-12) throw DomainError("DiscreteMeasure: atoms must lie in the closed disk");
    }
  }

  /// sum (1 - |lambda|^2) delta_lambda.
  static DiscreteMeasure sequence_measure(const std::vector<cplx>& points) {
    std::vector<Atom> atoms;
    for (cplx p : points) {
      require_interior(p, "sequence_measure");
      atoms.push_back({p, 1.0 - std::norm(p)});
    }
    return DiscreteMeasure(std::move(atoms));
  }

  const std::vector<Atom>& atoms() const { return atoms_; }
  bool empty() const { return atoms_.empty(); }
  double total_mass() const {
    double s = 0.0;
    for (const auto& a : atoms_) s += a.mass;
    return s;
  }

 private:
  std::vector<Atom> atoms_;
};

struct Segment {
  cplx a;
  cplx b;
  double length() const { return std::abs(b - a); }
};

/// Arc length on a union of polylines.
class CurveMeasure {
 public:
  CurveMeasure() = default;
  explicit CurveMeasure(std::vector<Segment> segments) : segments_(std::move(segments)) { validate(); }

  static CurveMeasure polyline(const std::vector<cplx>& pts, bool closed = false) {
    std::vector<Segment> segs;
    for (std::size_t i = 0; i + 1 < pts.size(); ++i) segs.push_back({pts[i], pts[i + 1]});
    if (closed && pts.size() > 2) segs.push_back({pts.back(), pts.front()});
    return CurveMeasure(std::move(segs));
  }

  const std::vector<Segment>& segments() const { return segments_; }
  double total_length() const {
    double s = 0.0;
    for (const auto& seg : segments_) s += seg.length();
    return s;
  }

 private:
  void validate() const {
    for (const auto& s : segments_)
      if (!(std::abs(s.a) < 1.0) || !(std::abs(s.b) < 1.0)) throw DomainError("CurveMeasure: vertices must be interior");
  }
  std::vector<Segment> segments_;
};

namespace detail {

struct Interval {
  double lo;
  double hi;
};

inline double cross(cplx u, cplx v) { return u.real() * v.imag() - u.imag() * v.real(); }

// Restricts [lo, hi] to {t : c0 + c1 t >= 0}.
inline void clip_linear(double c0, double c1, Interval& iv) {
  if (std::abs(c1) < 1e-300) {
    if (c0 < 0.0) iv.hi = iv.lo - 1.0;
    return;
  }
  double t = -c0 / c1;
  if (c1 > 0.0) iv.lo = std::max(iv.lo, t);
  else iv.hi = std::min(iv.hi, t);
}

/// Length of the part of a segment inside S(I): |z| >= r0 and arg z in the arc.
inline double segment_in_square(const Segment& s, const CarlesonSquare& sq) {
  double len = s.length();
  if (len == 0.0) return 0.0;
  cplx d = s.b - s.a;
  Interval iv{0.0, 1.0};
  if (!sq.base.is_full()) {
    if (sq.base.length > kPi + 1e-12) {
      // Arcs longer than a half circle only occur at depth 0 (full circle) in the
      // dyadic setting; treat them as the complement of a convex sector.
      throw DomainError("segment_in_square: arc longer than pi");
    }
    cplx u1 = std::polar(1.0, sq.base.start());
    cplx u2 = std::polar(1.0, sq.base.start() + sq.base.length);
    clip_linear(cross(u1, s.a), cross(u1, d), iv);
    clip_linear(cross(s.a, u2), cross(d, u2), iv);
  }
  if (iv.hi <= iv.lo) return 0.0;
  double r0 = sq.inner_radius();
  double covered = iv.hi - iv.lo;
  if (r0 > 0.0) {
    // |a + t d|^2 < r0^2 on an open t-interval (the excluded part).
    double qa = std::norm(d);
    double qb = 2.0 * (std::conj(s.a) * d).real();
    double qc = std::norm(s.a) - r0 * r0;
    double disc = qb * qb - 4.0 * qa * qc;
    if (disc > 0.0) {
      double sq_disc = std::sqrt(disc);
      double t1 = (-qb - sq_disc) / (2.0 * qa);
      double t2 = (-qb + sq_disc) / (2.0 * qa);
      double lo = std::max(iv.lo, t1);
      double hi = std::min(iv.hi, t2);
      if (hi > lo) covered -= hi - lo;
    }
  }
  return std::max(0.0, covered) * len;
}

/// Dyadic arcs of a given depth met by the angular sweep of a segment.
inline std::vector<DyadicArc> arcs_under_segment(const Segment& s, int depth) {
  std::vector<DyadicArc> out;
  std::uint64_t n = std::uint64_t{1} << depth;
  if (depth == 0) return {{0, 0}};
  if (std::abs(s.a) < 1e-300 || std::abs(s.b) < 1e-300) {
    for (std::uint64_t k = 0; k < n; ++k) out.push_back({depth, k});
    return out;
  }
  double t0 = angle_of(s.a);
  double sweep = std::arg(s.b / s.a);
  double start = sweep >= 0.0 ? t0 : wrap_angle(t0 + sweep);
  double width = std::abs(sweep);
  auto first = DyadicArc::containing(start, depth).index;
  auto last_abs = static_cast<std::uint64_t>(std::floor((start + width) / kTwoPi * static_cast<double>(n)));
  std::uint64_t count = std::min<std::uint64_t>(n, last_abs - first + 1);
  for (std::uint64_t c = 0; c < count; ++c) out.push_back({depth, (first + c) % n});
  return out;
}

}  // namespace detail

/// Mass of S(I) for every dyadic arc of depth <= depth touched by the measure.
inline std::vector<std::unordered_map<std::uint64_t, double>> dyadic_square_masses(const DiscreteMeasure& mu, int depth) {
  std::vector<std::unordered_map<std::uint64_t, double>> mass(static_cast<std::size_t>(depth) + 1);
  for (const auto& a : mu.atoms()) {
    double r = std::abs(a.point);
    if (r >= 1.0) continue;  // S(I) is open at the circle
    double theta = angle_of(a.point);
    for (int j = 0; j <= depth; ++j) {
      if (r < 1.0 - std::ldexp(1.0, -j)) break;
      mass[static_cast<std::size_t>(j)][DyadicArc::containing(theta, j).index] += a.mass;
    }
  }
  return mass;
}

inline std::vector<std::unordered_map<std::uint64_t, double>> dyadic_square_masses(const CurveMeasure& mu, int depth) {
  std::vector<std::unordered_map<std::uint64_t, double>> mass(static_cast<std::size_t>(depth) + 1);
  for (const auto& s : mu.segments()) {
    double rmax = std::max(std::abs(s.a), std::abs(s.b));
    for (int j = 0; j <= depth; ++j) {
      if (rmax < 1.0 - std::ldexp(1.0, -j)) break;
      for (const auto& arc : detail::arcs_under_segment(s, j)) {
        double l = detail::segment_in_square(s, CarlesonSquare{arc.arc(), false});
        if (l > 0.0) mass[static_cast<std::size_t>(j)][arc.index] += l;
      }
    }
  }
  return mass;
}

struct CarlesonNormResult {
  double norm = 0.0;
  DyadicArc argmax{0, 0};
};

template <class Measure>
CarlesonNormResult carleson_norm_detail(const Measure& mu, int depth) {
  if (depth < 0) throw DomainError("carleson_norm: depth must be >= 0");
  auto mass = dyadic_square_masses(mu, depth);
  CarlesonNormResult best;
  for (int j = 0; j <= depth; ++j) {
    double len = kTwoPi / std::ldexp(1.0, j);
    // Deterministic argmax: scan keys in sorted order.
    std::vector<std::pair<std::uint64_t, double>> entries(mass[static_cast<std::size_t>(j)].begin(),
                                                          mass[static_cast<std::size_t>(j)].end());
    std::sort(entries.begin(), entries.end());
    for (const auto& [k, m] : entries) {
      if (m / len > best.norm) best = {m / len, {j, k}};
    }
  }
  return best;
}

/// sup over dyadic arcs I of depth <= depth of mu(S(I)) / |I|.
inline double carleson_norm(const DiscreteMeasure& mu, int depth) { return carleson_norm_detail(mu, depth).norm; }
inline double carleson_norm(const CurveMeasure& mu, int depth) { return carleson_norm_detail(mu, depth).norm; }

/// max over lambda in the grid of sum mass |k_lambda(atom)|^2.
inline double kernel_test_constant(const DiscreteMeasure& mu, const std::vector<cplx>& lambda_grid) {
  std::vector<double> vals(lambda_grid.size(), 0.0);
  parallel_for(lambda_grid.size(), [&](std::size_t i) {
    cplx l = lambda_grid[i];
    require_interior(l, "kernel_test_constant");
    double s = 0.0;
    double w = 1.0 - std::norm(l);
    for (const auto& a : mu.atoms()) s += a.mass * w / std::norm(1.0 - std::conj(l) * a.point);
    vals[i] = s;
  });
  double best = 0.0;
  for (double v : vals) best = std::max(best, v);
  return best;
}

/// Kernel test over the quasi-uniform disk grid of the given depth plus the interior atoms.
inline double kernel_test_constant(const DiscreteMeasure& mu, int grid_depth = 10) {
  auto grid = disk_grid(grid_depth);
  for (const auto& a : mu.atoms())
    if (std::abs(a.point) < 1.0) grid.push_back(a.point);
  return kernel_test_constant(mu, grid);
}

/// Largest eigenvalue of f -> int |f|^2 dmu on polynomials of degree <= test_degree.
inline double embedding_constant_empirical(const DiscreteMeasure& mu, int test_degree) {
  if (test_degree < 0) throw DomainError("embedding_constant_empirical: degree must be >= 0");
  const auto& atoms = mu.atoms();
  if (atoms.empty()) return 0.0;
  auto n = static_cast<Eigen::Index>(atoms.size());
  Eigen::Index d = test_degree + 1;
  if (n <= d) {
    // lambda_max(V* M V) = lambda_max(M^1/2 V V* M^1/2), with (V V*)_ij = sum_k (z_i conj z_j)^k.
    Eigen::MatrixXcd g(n, n);
    for (Eigen::Index i = 0; i < n; ++i)
      for (Eigen::Index j = 0; j < n; ++j) {
        cplx q = atoms[static_cast<std::size_t>(i)].point * std::conj(atoms[static_cast<std::size_t>(j)].point);
        cplx s(0.0, 0.0), p(1.0, 0.0);
        for (Eigen::Index k = 0; k < d; ++k) {
          s += p;
          p *= q;
        }
        g(i, j) = std::sqrt(atoms[static_cast<std::size_t>(i)].mass * atoms[static_cast<std::size_t>(j)].mass) * s;
      }
    Eigen::SelfAdjointEigenSolver<Eigen::MatrixXcd> es(g, Eigen::EigenvaluesOnly);
    return std::max(0.0, es.eigenvalues().maxCoeff());
  }
  Eigen::MatrixXcd a = Eigen::MatrixXcd::Zero(d, d);
  for (const auto& at : atoms) {
    Eigen::VectorXcd v(d);
    cplx p(1.0, 0.0);
    for (Eigen::Index k = 0; k < d; ++k) {
      v(k) = std::conj(p);
      p *= at.point;
    }
    a += at.mass * v * v.adjoint();
  }
  Eigen::SelfAdjointEigenSolver<Eigen::MatrixXcd> es(a, Eigen::EigenvaluesOnly);
  return std::max(0.0, es.eigenvalues().maxCoeff());
}

/// Limit of embedding_constant_empirical as the degree grows (interior atoms only):
/// lambda_max of the weighted Szego kernel matrix sqrt(m_i m_j) / (1 - z_i conj z_j).
inline double embedding_constant_limit(const DiscreteMeasure& mu) {
  const auto& atoms = mu.atoms();
  if (atoms.empty()) return 0.0;
  auto n = static_cast<Eigen::Index>(atoms.size());
  Eigen::MatrixXcd g(n, n);
  for (Eigen::Index i = 0; i < n; ++i) {
    require_interior(atoms[static_cast<std::size_t>(i)].point, "embedding_constant_limit");
    for (Eigen::Index j = 0; j < n; ++j) {
      const auto& ai = atoms[static_cast<std::size_t>(i)];
      const auto& aj = atoms[static_cast<std::size_t>(j)];
      g(i, j) = std::sqrt(ai.mass * aj.mass) / (1.0 - ai.point * std::conj(aj.point));
    }
  }
  Eigen::SelfAdjointEigenSolver<Eigen::MatrixXcd> es(g, Eigen::EigenvaluesOnly);
  return std::max(0.0, es.eigenvalues().maxCoeff());
}

}  // namespace carleson_kit
