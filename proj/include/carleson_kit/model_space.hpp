#pragma once

// Model spaces K_theta for finite Blaschke products and the two-component
// subspaces M/K of H^2(E) + L^2(E_*) given by a triple (Theta, Delta, P).
//
// Vector-valued grid functions are stored as Eigen matrices of shape (dim, N):
// column j holds the value at xi_j = exp(2 pi i j / N).

#include <Eigen/Dense>
#include <cmath>
#include <utility>
#include <vector>

#include "carleson_kit/blaschke.hpp"
#include "carleson_kit/core.hpp"
#include "carleson_kit/hardy.hpp"
#include "carleson_kit/matrix_function.hpp"

namespace carleson_kit {

using VectorGrid = Eigen::MatrixXcd;

inline BoundaryGrid row_grid(const VectorGrid& v, Eigen::Index row) {
  std::vector<cplx> vals(static_cast<std::size_t>(v.cols()));
  for (Eigen::Index j = 0; j < v.cols(); ++j) vals[static_cast<std::size_t>(j)] = v(row, j);
  return BoundaryGrid(std::move(vals));
}

inline VectorGrid riesz_project(const VectorGrid& v, RieszSign sign) {
  VectorGrid out(v.rows(), v.cols());
  for (Eigen::Index r = 0; r < v.rows(); ++r) {
    auto p = riesz_project(row_grid(v, r), sign);
    for (Eigen::Index j = 0; j < v.cols(); ++j) out(r, j) = p[static_cast<std::size_t>(j)];
  }
  return out;
}

/// L^2(m) norm of a vector grid.
inline double grid_norm(const VectorGrid& v) {
  return v.cols() == 0 ? 0.0 : std::sqrt(v.squaredNorm() / static_cast<double>(v.cols()));
}

inline cplx grid_inner(const VectorGrid& a, const VectorGrid& b) {
  if (a.rows() != b.rows() || a.cols() != b.cols()) throw DomainError("grid_inner: shape mismatch");
  cplx s(0.0, 0.0);
  for (Eigen::Index j = 0; j < a.cols(); ++j) s += b.col(j).dot(a.col(j));
  return a.cols() == 0 ? s : s / static_cast<double>(a.cols());
}

inline bool grid_is_analytic(const VectorGrid& v, double tol = 1e-10) {
  for (Eigen::Index r = 0; r < v.rows(); ++r)
    if (!row_grid(v, r).is_analytic(tol)) return false;
  return true;
}

/// Samples a vector-valued function z -> Eigen::VectorXcd of length dim.
template <class F>
VectorGrid sample_vector(Eigen::Index dim, std::size_t n, F&& f) {
  VectorGrid out(dim, static_cast<Eigen::Index>(n));
  for (std::size_t j = 0; j < n; ++j) out.col(static_cast<Eigen::Index>(j)) = f(std::polar(1.0, kTwoPi * j / n));
  return out;
}

/// P_theta f = f - theta P_+(conj(theta) f).
inline BoundaryGrid project_model(const BlaschkeProduct& theta, const BoundaryGrid& f) {
  if (!f.is_analytic(1e-10)) throw DomainError("project_model: input must be analytic");
  auto th = BoundaryGrid::sample(f.size(), [&](cplx xi) { return theta(xi); });
  return f - th * riesz_project(th.conj() * f, RieszSign::plus);
}

/// Kernel basis of K_theta for theta with simple zeros sigma.
struct ModelSubspace {
  std::vector<cplx> zeros;
  Eigen::MatrixXcd gram;  // G_ij = <k_{zeros j}, k_{zeros i}>

  explicit ModelSubspace(std::vector<cplx> sigma) : zeros(std::move(sigma)) {
    detail::require_distinct(zeros, "ModelSubspace");
    auto n = static_cast<Eigen::Index>(zeros.size());
    gram.resize(n, n);
    for (Eigen::Index i = 0; i < n; ++i)
      for (Eigen::Index j = 0; j < n; ++j)
        gram(i, j) = kernel_inner(zeros[static_cast<std::size_t>(i)], zeros[static_cast<std::size_t>(j)]);
  }

  std::size_t dim() const { return zeros.size(); }

  /// ||P_theta k_lambda||^2 = v* G^{-1} v with v_i = <k_lambda, k_{zeros i}>.
  double kernel_projection_norm2(cplx lambda) const {
    if (zeros.empty()) return 0.0;
    Eigen::VectorXcd v(static_cast<Eigen::Index>(zeros.size()));
    for (std::size_t i = 0; i < zeros.size(); ++i) v(static_cast<Eigen::Index>(i)) = kernel_inner(zeros[i], lambda);
    Eigen::LDLT<Eigen::MatrixXcd> ldlt(gram);
    return std::real(v.dot(ldlt.solve(v)));
  }
};

/// Triple (Theta, Delta, P) sampled on a common grid of N points.
/// Theta: d x d1, Delta(xi): d_* x d1, P(xi): d_* x d_*.
class ModelTriple {
 public:
  ModelTriple(MatrixFunction theta, std::vector<Eigen::MatrixXcd> delta, std::vector<Eigen::MatrixXcd> p, int d_star)
      : theta_(std::move(theta)), delta_(std::move(delta)), p_(std::move(p)), d_star_(d_star) {
    validate();
  }

  /// Completes Theta (boundary norm < 1 or isometric) to a triple with
  /// Delta = [ (I - Theta*Theta)^{1/2} ; 0 ] and P the projection onto the remaining
  /// coordinates of E_* (so rank P + rank Delta = d_* wherever Delta has full rank).
  static ModelTriple complete(const MatrixFunction& theta, std::size_t n, int d_star) {
    int d1 = theta.cols();
    if (d_star < d1) throw DomainError("ModelTriple::complete: need dim E_* >= dim E_1");
    std::vector<Eigen::MatrixXcd> delta(n), p(n);
    for (std::size_t j = 0; j < n; ++j) {
      Eigen::MatrixXcd t = theta(std::polar(1.0, kTwoPi * j / n));
      Eigen::MatrixXcd defect = Eigen::MatrixXcd::Identity(d1, d1) - t.adjoint() * t;
      Eigen::SelfAdjointEigenSolver<Eigen::MatrixXcd> es(defect);
      Eigen::VectorXd ev = es.eigenvalues().cwiseMax(0.0).cwiseSqrt();
      Eigen::MatrixXcd root = es.eigenvectors() * ev.asDiagonal() * es.eigenvectors().adjoint();
      delta[j] = Eigen::MatrixXcd::Zero(d_star, d1);
      delta[j].topRows(d1) = root;
      p[j] = Eigen::MatrixXcd::Zero(d_star, d_star);
      for (int k = d1; k < d_star; ++k) p[j](k, k) = 1.0;
    }
    return ModelTriple(theta, std::move(delta), std::move(p), d_star);
  }

  const MatrixFunction& theta() const { return theta_; }
  const std::vector<Eigen::MatrixXcd>& delta() const { return delta_; }
  const std::vector<Eigen::MatrixXcd>& p() const { return p_; }
  int d() const { return theta_.rows(); }
  int d1() const { return theta_.cols(); }
  int d_star() const { return d_star_; }
  std::size_t grid_size() const { return delta_.size(); }

  Eigen::MatrixXcd theta_at(std::size_t j) const { return theta_(std::polar(1.0, kTwoPi * j / grid_size())); }

  void validate(double tol = 1e-8) const {
    std::size_t n = delta_.size();
    if (!is_power_of_two(n) || p_.size() != n) throw DomainError("ModelTriple: grids must share a power-of-two size");
    for (std::size_t j = 0; j < n; ++j) {
      const auto& dl = delta_[j];
      const auto& pr = p_[j];
      if (dl.rows() != d_star_ || dl.cols() != d1() || pr.rows() != d_star_ || pr.cols() != d_star_)
        throw DomainError("ModelTriple: inconsistent dimensions");
      Eigen::MatrixXcd t = theta_at(j);
      Eigen::MatrixXcd id = Eigen::MatrixXcd::Identity(d1(), d1());
      if ((t.adjoint() * t + dl.adjoint() * dl - id).norm() > tol)
        throw DomainError("ModelTriple: Theta*Theta + Delta*Delta != I");
      if ((pr * pr - pr).norm() > tol || (pr - pr.adjoint()).norm() > tol)
        throw DomainError("ModelTriple: P is not an orthogonal projection");
      if ((pr * dl).norm() > tol) throw DomainError("ModelTriple: Range Delta not orthogonal to Range P");
    }
  }

 private:
  MatrixFunction theta_;
  std::vector<Eigen::MatrixXcd> delta_;
  std::vector<Eigen::MatrixXcd> p_;
  int d_star_;
};

struct TwoComponent {
  VectorGrid first;   // H^2(E) part, d x N
  VectorGrid second;  // L^2(E_*) part, d_* x N
};

/// P_M(f, g) = (Theta; Delta) P_+(Theta* f + Delta* g) + (0; P g).
inline TwoComponent two_component_project(const ModelTriple& t, const VectorGrid& f, const VectorGrid& g) {
  auto n = static_cast<Eigen::Index>(t.grid_size());
  if (f.rows() != t.d() || f.cols() != n || g.rows() != t.d_star() || g.cols() != n)
    throw DomainError("two_component_project: dimension mismatch");
  VectorGrid inner(t.d1(), n);
  std::vector<Eigen::MatrixXcd> th(static_cast<std::size_t>(n));
  for (Eigen::Index j = 0; j < n; ++j) {
    th[static_cast<std::size_t>(j)] = t.theta_at(static_cast<std::size_t>(j));
    inner.col(j) = th[static_cast<std::size_t>(j)].adjoint() * f.col(j) + t.delta()[static_cast<std::size_t>(j)].adjoint() * g.col(j);
  }
  VectorGrid h = riesz_project(inner, RieszSign::plus);
  TwoComponent out{VectorGrid(t.d(), n), VectorGrid(t.d_star(), n)};
  for (Eigen::Index j = 0; j < n; ++j) {
    out.first.col(j) = th[static_cast<std::size_t>(j)] * h.col(j);
    out.second.col(j) = t.delta()[static_cast<std::size_t>(j)] * h.col(j) + t.p()[static_cast<std::size_t>(j)] * g.col(j);
  }
  return out;
}

/// Projection onto K = complement of M.
inline TwoComponent k_project(const ModelTriple& t, const VectorGrid& f, const VectorGrid& g) {
  auto m = two_component_project(t, f, g);
  return {f - m.first, g - m.second};
}

inline double two_component_norm(const TwoComponent& x) {
  return std::sqrt(grid_norm(x.first) * grid_norm(x.first) + grid_norm(x.second) * grid_norm(x.second));
}

/// dist{(f, 0), K} = ||P_+ Theta* f||.
inline double distance_to_K_analytic(const ModelTriple& t, const VectorGrid& f) {
  auto n = static_cast<Eigen::Index>(t.grid_size());
  if (f.rows() != t.d() || f.cols() != n) throw DomainError("distance_to_K: dimension mismatch");
  VectorGrid inner(t.d1(), n);
  for (Eigen::Index j = 0; j < n; ++j) inner.col(j) = t.theta_at(static_cast<std::size_t>(j)).adjoint() * f.col(j);
  return grid_norm(riesz_project(inner, RieszSign::plus));
}

/// dist{(k_lambda e, 0), K} = ||Theta(lambda)* e||.
inline double distance_to_K_kernel(const ModelTriple& t, cplx lambda, const Eigen::VectorXcd& e) {
  require_interior(lambda, "distance_to_K");
  if (e.size() != t.d()) throw DomainError("distance_to_K: dimension mismatch");
  return (t.theta()(lambda).adjoint() * e).norm();
}

/// dist{(0, f), K} = (||P f||^2 + ||P_+ Delta* f||^2)^{1/2}.
inline double distance_to_K_coanalytic(const ModelTriple& t, const VectorGrid& f) {
  auto n = static_cast<Eigen::Index>(t.grid_size());
  if (f.rows() != t.d_star() || f.cols() != n) throw DomainError("distance_to_K: dimension mismatch");
  VectorGrid pf(t.d_star(), n), df(t.d1(), n);
  for (Eigen::Index j = 0; j < n; ++j) {
    pf.col(j) = t.p()[static_cast<std::size_t>(j)] * f.col(j);
    df.col(j) = t.delta()[static_cast<std::size_t>(j)].adjoint() * f.col(j);
  }
  double a = grid_norm(pf);
  double b = grid_norm(riesz_project(df, RieszSign::plus));
  return std::sqrt(a * a + b * b);
}

/// det Theta(z); non-square: 0 if dim E_1 < dim E, 1 if dim E_1 > dim E.
inline cplx det_theta(const MatrixFunction& theta, cplx z) {
  if (theta.cols() < theta.rows()) return 0.0;
  if (theta.cols() > theta.rows()) return 1.0;
  if (theta.rows() == 0) return 1.0;
  return theta(z).determinant();
}

struct CoveringCount {
  int count = 0;
  cplx where{0.0, 0.0};
};

/// max over z of #{n : |det Theta_n(z)| < eps^d}, d = dim E.
inline CoveringCount covering_count(const std::vector<MatrixFunction>& family, double eps, const std::vector<cplx>& z_grid) {
  if (!(eps > 0.0 && eps < 1.0)) throw DomainError("covering_count: eps must lie in (0,1)");
  CoveringCount best;
  if (family.empty()) return best;
  int d = family.front().rows();
  double thr = std::pow(eps, d);
  for (cplx z : z_grid) {
    int c = 0;
    for (const auto& th : family) {
      if (th.rows() != d) throw DomainError("covering_count: members must share dim E");
      if (std::abs(det_theta(th, z)) < thr) ++c;
    }
    if (c > best.count) best = {c, z};
  }
  return best;
}

inline int numeric_rank(const Eigen::MatrixXcd& m, double tol = 1e-8) {
  if (m.size() == 0) return 0;
  Eigen::JacobiSVD<Eigen::MatrixXcd> svd(m);
  const auto& s = svd.singularValues();
  double thr = tol * std::max(1.0, s.size() ? s(0) : 0.0);
  int r = 0;
  for (Eigen::Index i = 0; i < s.size(); ++i)
    if (s(i) > thr) ++r;
  return r;
}

struct SupportCover {
  int max_sigma_multiplicity = 0;
  int max_tau_multiplicity = 0;
};

/// sigma_k = {||Delta_k|| > 1e-8}, tau_k = {rank P_k + rank Delta_k < d_*}; max multiplicities.
inline SupportCover support_cover_count(const std::vector<ModelTriple>& family) {
  SupportCover out;
  if (family.empty()) return out;
  std::size_t n = family.front().grid_size();
  for (const auto& t : family)
    if (t.grid_size() != n) throw DomainError("support_cover_count: triples must share a grid");
  for (std::size_t j = 0; j < n; ++j) {
    int s = 0, tau = 0;
    for (const auto& t : family) {
      const auto& dl = t.delta()[j];
      double dn = dl.size() ? Eigen::JacobiSVD<Eigen::MatrixXcd>(dl).singularValues()(0) : 0.0;
      if (dn > 1e-8) ++s;
      if (numeric_rank(t.p()[j]) + numeric_rank(dl) < t.d_star()) ++tau;
    }
    out.max_sigma_multiplicity = std::max(out.max_sigma_multiplicity, s);
    out.max_tau_multiplicity = std::max(out.max_tau_multiplicity, tau);
  }
  return out;
}

}  // namespace carleson_kit
