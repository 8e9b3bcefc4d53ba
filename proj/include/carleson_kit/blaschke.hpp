#pragma once

#include <algorithm>
#include <cmath>
#include <numeric>
#include <vector>

#include "carleson_kit/carleson.hpp"
#include "carleson_kit/core.hpp"
#include "carleson_kit/disk.hpp"

namespace carleson_kit {

namespace detail {

inline void require_distinct(const std::vector<cplx>& pts, const char* what) {
  std::vector<std::size_t> order(pts.size());
  std::iota(order.begin(), order.end(), 0);
  std::sort(order.begin(), order.end(), [&](std::size_t i, std::size_t j) {
    return pts[i].real() != pts[j].real() ? pts[i].real() < pts[j].real() : pts[i].imag() < pts[j].imag();
  });
  for (std::size_t i = 1; i < order.size(); ++i)
    if (pts[order[i]] == pts[order[i - 1]]) throw DomainError(std::string(what) + ": repeated point");
}

}  // namespace detail

/// Finite Blaschke product with simple zeros.
class BlaschkeProduct {
 public:
  BlaschkeProduct() = default;
  explicit BlaschkeProduct(std::vector<cplx> zeros) : zeros_(std::move(zeros)) {
    for (cplx z : zeros_) require_interior(z, "BlaschkeProduct");
    detail::require_distinct(zeros_, "BlaschkeProduct");
  }

  const std::vector<cplx>& zeros() const { return zeros_; }
  std::size_t degree() const { return zeros_.size(); }

  cplx operator()(cplx z) const {
    if (std::abs(z) > 1.0 + 1e-12) throw DomainError("BlaschkeProduct: |z| must be <= 1");
    cplx p(1.0, 0.0);
    for (cplx a : zeros_) p *= blaschke_factor(a, z);
    return p;
  }
  cplx evaluate(cplx z) const { return (*this)(z); }

  double log_abs(cplx z) const {
    double s = 0.0;
    for (cplx a : zeros_) s += std::log(pseudo_hyperbolic_unchecked(a, z));
    return s;
  }

 private:
  std::vector<cplx> zeros_;
};

struct InterpolationReport {
  double delta = 1.0;
  double alpha = 1.0;
  double carleson_norm_of_sequence_measure = 0.0;
};

/// Depth at which the dyadic Carleson norm of sum (1-|l|^2) delta_l has seen every atom.
inline int sequence_norm_depth(const std::vector<cplx>& sigma) {
  int depth = 0;
  for (cplx l : sigma) depth = std::max(depth, layer_index(l) + 2);
  return std::min(depth, 40);
}

inline InterpolationReport interpolation_constants(const std::vector<cplx>& sigma) {
  for (cplx l : sigma) require_interior(l, "interpolation_constants");
  detail::require_distinct(sigma, "interpolation_constants");
  InterpolationReport rep;
  for (std::size_t i = 0; i < sigma.size(); ++i) {
    double prod = 1.0;
    for (std::size_t j = 0; j < sigma.size(); ++j) {
      if (i == j) continue;
      double p = pseudo_hyperbolic_unchecked(sigma[j], sigma[i]);
      prod *= p;
      if (j > i) rep.alpha = std::min(rep.alpha, p);
    }
    rep.delta = std::min(rep.delta, prod);
  }
  rep.carleson_norm_of_sequence_measure =
      carleson_norm(DiscreteMeasure::sequence_measure(sigma), sequence_norm_depth(sigma));
  return rep;
}

/// (prod_{mu != lambda} |b_mu(lambda)|)^{-1}.
inline double projection_norm_formula(const std::vector<cplx>& sigma, cplx lambda) {
  auto it = std::find(sigma.begin(), sigma.end(), lambda);
  if (it == sigma.end()) throw DomainError("projection_norm_formula: lambda is not in sigma");
  double prod = 1.0;
  for (cplx mu : sigma)
    if (mu != lambda) prod *= pseudo_hyperbolic(mu, lambda);
  return 1.0 / prod;
}

/// Greedy alpha-net on the vertices of a curve, visiting layers D_0, D_1, ... in order
/// (ties broken by vertex order). A vertex becomes a center when no chosen center is
/// pseudo-hyperbolically closer than alpha.
inline std::vector<cplx> place_net_on_curve(const std::vector<cplx>& vertices, double alpha) {
  if (vertices.empty()) throw DomainError("place_net_on_curve: empty polyline");
  if (!(alpha > 0.0 && alpha < 0.1)) throw DomainError("place_net_on_curve: alpha must lie in (0, 0.1)");
  std::vector<int> layer(vertices.size());
  for (std::size_t i = 0; i < vertices.size(); ++i) layer[i] = layer_index(vertices[i]);
  std::vector<std::size_t> order(vertices.size());
  std::iota(order.begin(), order.end(), 0);
  std::stable_sort(order.begin(), order.end(), [&](std::size_t a, std::size_t b) { return layer[a] < layer[b]; });
  std::vector<cplx> centers;
  for (std::size_t i : order) {
    cplx z = vertices[i];
    bool covered = false;
    for (cplx c : centers) {
      if (pseudo_hyperbolic_unchecked(c, z) < alpha) {
        covered = true;
        break;
      }
    }
    if (!covered) centers.push_back(z);
  }
  return centers;
}

struct NetCheck {
  bool separated = true;
  bool dense = true;
  double min_separation = 1.0;
  double max_cover_distance = 0.0;
};

inline NetCheck check_net(const std::vector<cplx>& vertices, const std::vector<cplx>& centers, double alpha) {
  NetCheck out;
  for (std::size_t i = 0; i < centers.size(); ++i)
    for (std::size_t j = i + 1; j < centers.size(); ++j)
      out.min_separation = std::min(out.min_separation, pseudo_hyperbolic_unchecked(centers[i], centers[j]));
  out.separated = out.min_separation > alpha;
  for (cplx z : vertices) {
    double best = 1.0;
    for (cplx c : centers) best = std::min(best, pseudo_hyperbolic_unchecked(c, z));
    out.max_cover_distance = std::max(out.max_cover_distance, best);
  }
  out.dense = out.max_cover_distance < alpha;
  return out;
}

}  // namespace carleson_kit
