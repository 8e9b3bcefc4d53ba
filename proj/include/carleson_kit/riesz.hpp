#pragma once

// Finite systems of subspaces given by orthonormal frames. Every diagnostic is
// computed from the block Gram matrix G = F* F, F = [F_1 ... F_n].

#include <Eigen/Dense>
#include <optional>
#include <random>
#include <string>
#include <vector>

#include "carleson_kit/core.hpp"
#include "carleson_kit/disk.hpp"

namespace carleson_kit {

class SubspaceSystem {
 public:
  SubspaceSystem() = default;

  /// Frames must be orthonormal; their union must be linearly independent.
  SubspaceSystem(std::vector<Eigen::MatrixXcd> frames, std::vector<std::string> labels = {})
      : frames_(std::move(frames)), labels_(std::move(labels)) {
    if (frames_.empty()) throw DomainError("SubspaceSystem: no subspaces");
    ambient_ = frames_.front().rows();
    for (const auto& f : frames_) {
      if (f.rows() != ambient_) throw DomainError("SubspaceSystem: frames must share the ambient dimension");
      if (f.cols() == 0) throw DomainError("SubspaceSystem: empty subspace");
      Eigen::MatrixXcd id = Eigen::MatrixXcd::Identity(f.cols(), f.cols());
      if ((f.adjoint() * f - id).norm() > 1e-10) throw DomainError("SubspaceSystem: frame is not orthonormal");
    }
    if (labels_.empty())
      for (std::size_t i = 0; i < frames_.size(); ++i) labels_.push_back(std::to_string(i));
    if (labels_.size() != frames_.size()) throw DomainError("SubspaceSystem: label count mismatch");
    offsets_.push_back(0);
    for (const auto& f : frames_) offsets_.push_back(offsets_.back() + f.cols());
    Eigen::MatrixXcd all = joint_frame();
    gram_ = all.adjoint() * all;
    if (all.cols() > all.rows()) throw LinearDependenceError("SubspaceSystem: more directions than ambient dimension");
    Eigen::SelfAdjointEigenSolver<Eigen::MatrixXcd> es(gram_, Eigen::EigenvaluesOnly);
    if (std::sqrt(std::max(0.0, es.eigenvalues().minCoeff())) <= 1e-10)
      throw LinearDependenceError("SubspaceSystem: subspaces are linearly dependent");
  }

  /// Orthonormalizes arbitrary spanning columns of each subspace.
  static SubspaceSystem from_spanning(const std::vector<Eigen::MatrixXcd>& spans, std::vector<std::string> labels = {}) {
    std::vector<Eigen::MatrixXcd> frames;
    for (const auto& s : spans) frames.push_back(orthonormalize(s));
    return SubspaceSystem(std::move(frames), std::move(labels));
  }

  /// One-dimensional subspaces spanned by normalized kernels at distinct points. The
  /// ambient coordinates come from the Cholesky factor of the kernel Gram matrix.
  static SubspaceSystem kernels(const std::vector<cplx>& points) {
    return kernel_blocks(std::vector<std::vector<cplx>>(1, points), true);
  }

  /// Subspaces spanned by kernel groups (K_B for B with zeros at each group). With
  /// `singletons` every point becomes its own one-dimensional subspace.
  static SubspaceSystem kernel_blocks(const std::vector<std::vector<cplx>>& groups, bool singletons = false) {
    std::vector<cplx> pts;
    std::vector<std::size_t> sizes;
    for (const auto& g : groups) {
      pts.insert(pts.end(), g.begin(), g.end());
      sizes.push_back(g.size());
    }
    auto n = static_cast<Eigen::Index>(pts.size());
    Eigen::MatrixXcd g(n, n);
    for (Eigen::Index i = 0; i < n; ++i)
      for (Eigen::Index j = 0; j < n; ++j)
        g(i, j) = kernel_inner(pts[static_cast<std::size_t>(i)], pts[static_cast<std::size_t>(j)]);
    // g(i,j) = <k_j, k_i>; with F = L* we get (F* F)_{ij} = (L L*)_{ij} = g(i,j) = <f_j, f_i>.
    Eigen::LLT<Eigen::MatrixXcd> llt(g);
    if (llt.info() != Eigen::Success) throw LinearDependenceError("kernel system: Gram matrix is not positive definite");
    Eigen::MatrixXcd f = llt.matrixL().adjoint();
    std::vector<Eigen::MatrixXcd> spans;
    Eigen::Index col = 0;
    if (singletons) {
      for (Eigen::Index i = 0; i < n; ++i) spans.push_back(f.col(i));
    } else {
      for (std::size_t s : sizes) {
        spans.push_back(f.middleCols(col, static_cast<Eigen::Index>(s)));
        col += static_cast<Eigen::Index>(s);
      }
    }
    return from_spanning(spans);
  }

  static Eigen::MatrixXcd orthonormalize(const Eigen::MatrixXcd& s) {
    Eigen::HouseholderQR<Eigen::MatrixXcd> qr(s);
    Eigen::MatrixXcd q = qr.householderQ() * Eigen::MatrixXcd::Identity(s.rows(), s.cols());
    Eigen::MatrixXcd r = qr.matrixQR().topRows(s.cols()).triangularView<Eigen::Upper>();
    for (Eigen::Index i = 0; i < s.cols(); ++i)
      if (std::abs(r(i, i)) <= 1e-12 * std::max(1.0, s.norm()))
        throw LinearDependenceError("orthonormalize: spanning vectors are dependent");
    return q;
  }

  std::size_t size() const { return frames_.size(); }
  Eigen::Index ambient_dimension() const { return ambient_; }
  const std::vector<Eigen::MatrixXcd>& frames() const { return frames_; }
  const std::vector<std::string>& labels() const { return labels_; }
  const Eigen::MatrixXcd& gram() const { return gram_; }
  Eigen::Index offset(std::size_t n) const { return offsets_[n]; }
  Eigen::Index block_size(std::size_t n) const { return offsets_[n + 1] - offsets_[n]; }
  Eigen::Index total_dimension() const { return offsets_.back(); }

  Eigen::MatrixXcd joint_frame() const {
    Eigen::MatrixXcd all(ambient_, total_cols());
    Eigen::Index c = 0;
    for (const auto& f : frames_) {
      all.middleCols(c, f.cols()) = f;
      c += f.cols();
    }
    return all;
  }

  SubspaceSystem subsystem(const std::vector<std::size_t>& idx) const {
    std::vector<Eigen::MatrixXcd> fr;
    std::vector<std::string> lb;
    for (std::size_t i : idx) {
      fr.push_back(frames_.at(i));
      lb.push_back(labels_.at(i));
    }
    return SubspaceSystem(std::move(fr), std::move(lb));
  }

 private:
  Eigen::Index total_cols() const {
    Eigen::Index c = 0;
    for (const auto& f : frames_) c += f.cols();
    return c;
  }

  std::vector<Eigen::MatrixXcd> frames_;
  std::vector<std::string> labels_;
  std::vector<Eigen::Index> offsets_;
  Eigen::Index ambient_ = 0;
  Eigen::MatrixXcd gram_;
};

namespace detail {

inline std::vector<Eigen::Index> block_indices(const SubspaceSystem& sys, const std::vector<std::size_t>& blocks) {
  std::vector<Eigen::Index> idx;
  for (std::size_t b : blocks)
    for (Eigen::Index k = 0; k < sys.block_size(b); ++k) idx.push_back(sys.offset(b) + k);
  return idx;
}

inline Eigen::MatrixXcd submatrix(const Eigen::MatrixXcd& g, const std::vector<Eigen::Index>& r, const std::vector<Eigen::Index>& c) {
  Eigen::MatrixXcd out(static_cast<Eigen::Index>(r.size()), static_cast<Eigen::Index>(c.size()));
  for (std::size_t i = 0; i < r.size(); ++i)
    for (std::size_t j = 0; j < c.size(); ++j) out(static_cast<Eigen::Index>(i), static_cast<Eigen::Index>(j)) = g(r[i], c[j]);
  return out;
}

/// G_ss - G_so G_oo^{-1} G_os: the Gram of the parts of the sigma-frames orthogonal to the rest.
inline Eigen::MatrixXcd schur_complement(const SubspaceSystem& sys, const std::vector<std::size_t>& sigma) {
  std::vector<bool> in(sys.size(), false);
  for (std::size_t s : sigma) in.at(s) = true;
  std::vector<std::size_t> rest;
  for (std::size_t i = 0; i < sys.size(); ++i)
    if (!in[i]) rest.push_back(i);
  auto si = block_indices(sys, sigma);
  auto oi = block_indices(sys, rest);
  Eigen::MatrixXcd gss = submatrix(sys.gram(), si, si);
  if (oi.empty()) return gss;
  Eigen::MatrixXcd gso = submatrix(sys.gram(), si, oi);
  Eigen::MatrixXcd goo = submatrix(sys.gram(), oi, oi);
  Eigen::MatrixXcd s = gss - gso * goo.ldlt().solve(gso.adjoint());
  return 0.5 * (s + s.adjoint());
}

inline Eigen::VectorXd hermitian_eigenvalues(const Eigen::MatrixXcd& m) {
  Eigen::SelfAdjointEigenSolver<Eigen::MatrixXcd> es(m, Eigen::EigenvaluesOnly);
  return es.eigenvalues();
}

}  // namespace detail

/// sqrt(lambda_max(G) / lambda_min(G)) = ||R|| ||R^{-1}||.
inline double orthogonalizer_condition(const SubspaceSystem& sys) {
  auto ev = detail::hermitian_eigenvalues(sys.gram());
  if (ev.minCoeff() <= 1e-20) throw LinearDependenceError("orthogonalizer_condition: singular Gram matrix");
  return std::sqrt(ev.maxCoeff() / ev.minCoeff());
}

/// delta_n = smallest singular value of (I - Pi_n) F_n, for every n.
inline std::vector<double> uniform_minimality_per_subspace(const SubspaceSystem& sys) {
  std::vector<double> out(sys.size(), 1.0);
  if (sys.size() == 1) return out;
  for (std::size_t n = 0; n < sys.size(); ++n) {
    double m = detail::hermitian_eigenvalues(detail::schur_complement(sys, {n})).minCoeff();
    if (m <= 1e-20) throw LinearDependenceError("uniform_minimality: subspace lies in the span of the others");
    out[n] = std::min(1.0, std::sqrt(m));
  }
  return out;
}

inline double uniform_minimality(const SubspaceSystem& sys) {
  auto v = uniform_minimality_per_subspace(sys);
  return *std::min_element(v.begin(), v.end());
}

/// Norm of the skew projection onto span{E_k : k in sigma} along the others.
inline double skew_projection_norm(const SubspaceSystem& sys, const std::vector<std::size_t>& sigma) {
  if (sigma.empty() || sigma.size() >= sys.size()) throw DomainError("skew_projection_norm: sigma must be a nonempty proper subset");
  std::vector<bool> seen(sys.size(), false);
  for (std::size_t s : sigma) {
    if (s >= sys.size() || seen[s]) throw DomainError("skew_projection_norm: invalid index set");
    seen[s] = true;
  }
  auto si = detail::block_indices(sys, sigma);
  Eigen::MatrixXcd gss = detail::submatrix(sys.gram(), si, si);
  Eigen::MatrixXcd s = detail::schur_complement(sys, sigma);
  // ||P||^2 = max c* G_ss c / c* S c.
  Eigen::GeneralizedSelfAdjointEigenSolver<Eigen::MatrixXcd> ges(gss, s, Eigen::EigenvaluesOnly);
  return std::sqrt(ges.eigenvalues().maxCoeff());
}

/// Frames of the dual system E'_n = Range (P^n)*, i.e. orthonormalized F G^{-1} restricted to block n.
inline SubspaceSystem dual_system(const SubspaceSystem& sys) {
  Eigen::MatrixXcd f = sys.joint_frame();
  Eigen::MatrixXcd d = f * sys.gram().ldlt().solve(Eigen::MatrixXcd::Identity(sys.gram().rows(), sys.gram().cols()));
  std::vector<Eigen::MatrixXcd> spans;
  for (std::size_t n = 0; n < sys.size(); ++n) spans.push_back(d.middleCols(sys.offset(n), sys.block_size(n)));
  return SubspaceSystem::from_spanning(spans, sys.labels());
}

/// Smallest C with sum_n ||P_{E_n} f||^2 <= C ||f||^2: lambda_max(sum F_n F_n*) = lambda_max(G).
inline double embedding_norm(const SubspaceSystem& sys) { return detail::hermitian_eigenvalues(sys.gram()).maxCoeff(); }

struct CriticalSubset {
  std::vector<std::size_t> indices;
  int iterations = 0;
  double constant = 1.0;
};

/// Shrinks the index set while the uniform-minimality constant stays below delta, removing
/// the first index (in order) whose removal keeps it below delta. Returns nothing when the
/// whole system already has constant >= delta.
inline std::optional<CriticalSubset> extract_critical_subset(const SubspaceSystem& sys, double delta) {
  if (!(delta > 0.0 && delta < 1.0)) throw DomainError("extract_critical_subset: delta must lie in (0,1)");
  if (uniform_minimality(sys) >= delta) return std::nullopt;
  CriticalSubset out;
  for (std::size_t i = 0; i < sys.size(); ++i) out.indices.push_back(i);
  out.constant = uniform_minimality(sys);
  bool shrunk = true;
  while (shrunk) {
    shrunk = false;
    ++out.iterations;
    if (out.indices.size() <= 1) break;
    for (std::size_t k = 0; k < out.indices.size(); ++k) {
      auto trial = out.indices;
      trial.erase(trial.begin() + static_cast<std::ptrdiff_t>(k));
      double c = uniform_minimality(sys.subsystem(trial));
      if (c < delta) {
        out.indices = std::move(trial);
        out.constant = c;
        shrunk = true;
        break;
      }
    }
  }
  return out;
}

struct TensorBoundReport {
  double lambda_min = 0.0;  // ||R||^{-2}
  double lambda_max = 0.0;  // ||R^{-1}||^2
  int trials = 0;
  int violations = 0;
  double worst_lower_slack = 0.0;
  double worst_upper_slack = 0.0;
};

/// Checks lambda_min sum ||f_l||^2 <= ||sum k_l f_l||^2 <= lambda_max sum ||f_l||^2 for random
/// vector coefficients f_l in C^e_dim, with lambda_min/max from the scalar kernel Gram.
inline TensorBoundReport tensor_bound_check(const std::vector<cplx>& sigma, int e_dim, int trials, std::uint64_t seed,
                                            int support_size = -1) {
  if (e_dim < 1) throw DomainError("tensor_bound_check: dim E must be >= 1");
  auto n = static_cast<Eigen::Index>(sigma.size());
  Eigen::MatrixXcd g(n, n);
  for (Eigen::Index i = 0; i < n; ++i)
    for (Eigen::Index j = 0; j < n; ++j)
      g(i, j) = kernel_inner(sigma[static_cast<std::size_t>(i)], sigma[static_cast<std::size_t>(j)]);
  auto ev = detail::hermitian_eigenvalues(g);
  TensorBoundReport rep;
  rep.lambda_min = ev.minCoeff();
  rep.lambda_max = ev.maxCoeff();
  rep.trials = trials;
  std::mt19937_64 rng(seed);
  std::normal_distribution<double> normal;
  for (int t = 0; t < trials; ++t) {
    Eigen::MatrixXcd f = Eigen::MatrixXcd::Zero(n, e_dim);
    Eigen::Index active = support_size < 0 ? n : std::min<Eigen::Index>(n, support_size);
    for (Eigen::Index i = 0; i < active; ++i)
      for (int k = 0; k < e_dim; ++k) f(i, k) = cplx(normal(rng), normal(rng));
    double sum = f.squaredNorm();
    // ||sum_l k_l f_l||^2 = sum_{l,m} <k_l, k_m> <f_l, f_m>.
    double mid = std::real((f.adjoint() * g * f).trace());
    double lo = rep.lambda_min * sum - mid;
    double hi = mid - rep.lambda_max * sum;
    rep.worst_lower_slack = std::max(rep.worst_lower_slack, lo / std::max(1.0, sum));
    rep.worst_upper_slack = std::max(rep.worst_upper_slack, hi / std::max(1.0, sum));
    if (lo > 1e-10 * std::max(1.0, sum) || hi > 1e-10 * std::max(1.0, sum)) ++rep.violations;
  }
  return rep;
}

}  // namespace carleson_kit
