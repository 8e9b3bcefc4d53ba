#pragma once

// Geometric and kernel primitives of the unit disk.
//
// Units: arc lengths are Euclidean (radians). The "normalized" length of an arc is
// length / 2pi, and Carleson squares use the normalized length as radial depth.

#include <cmath>
#include <cstdint>
#include <vector>

#include "carleson_kit/core.hpp"

namespace carleson_kit {

/// A point of the closed unit disk. Interior points satisfy |value| < 1; the boundary
/// flag admits |value| = 1 for boundary sampling.
class DiskPoint {
 public:
  static DiskPoint interior(cplx z) {
    if (!(std::abs(z) < 1.0)) throw DomainError("DiskPoint: |z| must be < 1 for an interior point");
    return DiskPoint(z, false);
  }
  static DiskPoint boundary(cplx z) {
    if (std::abs(std::abs(z) - 1.0) > 1e-12) throw DomainError("DiskPoint: boundary point must have |z| = 1");
    return DiskPoint(z / std::abs(z), true);
  }

  cplx value() const { return value_; }
  bool on_boundary() const { return boundary_; }

 private:
  DiskPoint(cplx z, bool b) : value_(z), boundary_(b) {}
  cplx value_;
  bool boundary_;
};

inline void require_interior(cplx z, const char* what) {
  if (!(std::abs(z) < 1.0)) throw DomainError(std::string(what) + ": point must lie in the open unit disk");
}

/// b_lambda(z) = (|lambda|/lambda)(lambda - z)/(1 - conj(lambda) z), with b_0(z) = z.
inline cplx blaschke_factor(cplx lambda, cplx z) {
  require_interior(lambda, "blaschke_factor");
  if (lambda == cplx(0.0, 0.0)) return z;
  double r = std::abs(lambda);
  return (r / lambda) * (lambda - z) / (1.0 - std::conj(lambda) * z);
}

/// |b_lambda(mu)| without the unimodular prefactor (no domain checks; hot loops).
inline double pseudo_hyperbolic_unchecked(cplx lambda, cplx mu) {
  return std::abs(lambda - mu) / std::abs(1.0 - std::conj(lambda) * mu);
}

struct Metrics {
  double pseudo_hyperbolic;
  double hyperbolic;
};

inline Metrics metrics(cplx lambda, cplx mu) {
  require_interior(lambda, "metrics");
  require_interior(mu, "metrics");
  double p = pseudo_hyperbolic_unchecked(lambda, mu);
  return {p, std::atanh(p)};
}

inline double pseudo_hyperbolic(cplx lambda, cplx mu) { return metrics(lambda, mu).pseudo_hyperbolic; }
inline double hyperbolic_distance(cplx lambda, cplx mu) { return metrics(lambda, mu).hyperbolic; }

/// Normalized reproducing kernel k_lambda(z) = (1-|lambda|^2)^{1/2} / (1 - conj(lambda) z).
inline cplx kernel(cplx lambda, cplx z) {
  require_interior(lambda, "kernel");
  return std::sqrt(1.0 - std::norm(lambda)) / (1.0 - std::conj(lambda) * z);
}

/// <k_mu, k_lambda> in H^2.
inline cplx kernel_inner(cplx lambda, cplx mu) {
  require_interior(lambda, "kernel_inner");
  require_interior(mu, "kernel_inner");
  return std::sqrt(1.0 - std::norm(mu)) * std::sqrt(1.0 - std::norm(lambda)) / (1.0 - std::conj(mu) * lambda);
}

/// An arc of the unit circle, stored by center angle and Euclidean length.
struct Arc {
  double center_angle = 0.0;
  double length = kTwoPi;

  static Arc from_start(double start, double length) { return Arc{wrap_angle(start + 0.5 * length), length}; }

  double normalized_length() const { return length / kTwoPi; }
  double start() const { return wrap_angle(center_angle - 0.5 * length); }
  bool is_full() const { return length >= kTwoPi; }

  bool contains_angle(double theta) const {
    if (is_full()) return true;
    double d = wrap_angle(theta - start());
    return d < length;
  }

  /// Arc with the same center and k times the length (capped at the full circle).
  Arc scaled(double k) const { return Arc{center_angle, std::min(kTwoPi, k * length)}; }

  void validate() const {
    if (!(length > 0.0) || length > kTwoPi * (1.0 + 1e-15)) throw DomainError("Arc: length must lie in (0, 2pi]");
  }
};

/// Carleson square over an arc: S(I) (open at |z| = 1) or Q(I) (closed disk).
struct CarlesonSquare {
  Arc base;
  bool closed = false;

  double inner_radius() const { return 1.0 - base.normalized_length(); }

  bool contains(cplx z) const {
    double r = std::abs(z);
    if (closed ? r > 1.0 : r >= 1.0) return false;
    if (r < inner_radius()) return false;
    if (base.is_full()) return true;
    if (r == 0.0) return inner_radius() <= 0.0 && base.contains_angle(0.0);
    return base.contains_angle(angle_of(z));
  }
};

inline bool square_membership(const CarlesonSquare& sq, cplx z) { return sq.contains(z); }

/// Dyadic arc [2pi k / 2^j, 2pi (k+1) / 2^j).
struct DyadicArc {
  int depth = 0;
  std::uint64_t index = 0;

  double length() const { return kTwoPi / std::ldexp(1.0, depth); }
  double normalized_length() const { return 1.0 / std::ldexp(1.0, depth); }
  double start() const { return length() * static_cast<double>(index); }
  double end() const { return length() * static_cast<double>(index + 1); }
  Arc arc() const { return Arc::from_start(start(), length()); }

  DyadicArc parent() const { return {depth - 1, index / 2}; }
  DyadicArc child(int which) const { return {depth + 1, 2 * index + static_cast<std::uint64_t>(which)}; }

  static DyadicArc containing(double theta, int depth) {
    double n = std::ldexp(1.0, depth);
    auto k = static_cast<std::uint64_t>(std::floor(wrap_angle(theta) / kTwoPi * n));
    auto cap = static_cast<std::uint64_t>(n) - 1;
    return {depth, std::min(k, cap)};
  }

  std::uint64_t key() const { return (static_cast<std::uint64_t>(depth) << 58) | index; }

  friend bool operator==(const DyadicArc& a, const DyadicArc& b) { return a.depth == b.depth && a.index == b.index; }
};

/// All dyadic arcs of depths 0..max_depth.
class DyadicGrid {
 public:
  explicit DyadicGrid(int max_depth) : max_depth_(max_depth) {
    if (max_depth < 0 || max_depth > 40) throw DomainError("DyadicGrid: depth must lie in [0, 40]");
  }

  int max_depth() const { return max_depth_; }

  std::vector<DyadicArc> arcs_at(int depth) const {
    std::vector<DyadicArc> out;
    auto n = std::uint64_t{1} << depth;
    out.reserve(n);
    for (std::uint64_t k = 0; k < n; ++k) out.push_back({depth, k});
    return out;
  }

  std::vector<DyadicArc> arcs() const {
    std::vector<DyadicArc> out;
    for (int j = 0; j <= max_depth_; ++j) {
      auto level = arcs_at(j);
      out.insert(out.end(), level.begin(), level.end());
    }
    return out;
  }

 private:
  int max_depth_;
};

struct EuclideanDisk {
  cplx center;
  double radius;
  bool contains(cplx z) const { return std::abs(z - center) < radius; }
};

/// The set {|b_a(z)| < gamma} as a Euclidean disk.
inline EuclideanDisk pseudo_hyperbolic_disk(cplx a, double gamma) {
  require_interior(a, "pseudo_hyperbolic_disk");
  if (!(gamma > 0.0 && gamma < 1.0)) throw DomainError("pseudo_hyperbolic_disk: gamma must lie in (0,1)");
  double a2 = std::norm(a);
  double g2 = gamma * gamma;
  double denom = 1.0 - g2 * a2;
  return {a * (1.0 - g2) / denom, gamma * (1.0 - a2) / denom};
}

/// Index m of the layer D_m = {1 - 2^-m <= |z| < 1 - 2^-(m+1)} containing z.
inline int layer_index(cplx z) {
  require_interior(z, "layer_index");
  double r = std::abs(z);
  int m = 0;
  while (r >= 1.0 - std::ldexp(1.0, -(m + 1))) ++m;
  return m;
}

/// Hyperbolically quasi-uniform sampling of the disk: the origin plus, for each layer
/// m <= depth, 2^(m+3) equally spaced angles on the mid-radius of D_m.
inline std::vector<cplx> disk_grid(int depth, int angle_shift = 3) {
  std::vector<cplx> pts{cplx(0.0, 0.0)};
  for (int m = 0; m <= depth; ++m) {
    double r = 1.0 - 0.75 * std::ldexp(1.0, -m);
    int count = 1 << (m + angle_shift);
    double offset = (m % 2 == 0) ? 0.0 : 0.5;
    for (int k = 0; k < count; ++k) pts.push_back(std::polar(r, kTwoPi * (k + offset) / count));
  }
  return pts;
}

}  // namespace carleson_kit
