#pragma once

#include <Eigen/Dense>
#include <vector>

#include "carleson_kit/core.hpp"
#include "carleson_kit/disk.hpp"

namespace carleson_kit {

/// Analytic scalar p(z) * prod_k b_{zeros[k]}(z): a polynomial times a finite Blaschke product.
struct ScalarFunction {
  std::vector<cplx> poly{cplx(1.0, 0.0)};
  std::vector<cplx> zeros;

  static ScalarFunction constant(cplx c) { return {{c}, {}}; }
  static ScalarFunction polynomial(std::vector<cplx> coeffs) { return {std::move(coeffs), {}}; }
  static ScalarFunction blaschke(std::vector<cplx> zs) {
    for (cplx z : zs) require_interior(z, "ScalarFunction::blaschke");
    return {{cplx(1.0, 0.0)}, std::move(zs)};
  }

  cplx operator()(cplx z) const {
    cplx p(0.0, 0.0);
    for (auto it = poly.rbegin(); it != poly.rend(); ++it) p = p * z + *it;
    for (cplx a : zeros) p *= blaschke_factor(a, z);
    return p;
  }

  bool is_zero() const {
    return zeros.empty() && std::all_of(poly.begin(), poly.end(), [](cplx c) { return c == cplx(0.0, 0.0); });
  }
};

/// A rows x cols matrix of ScalarFunction entries; rows = dim E, cols = dim E_1.
class MatrixFunction {
 public:
  MatrixFunction() = default;
  MatrixFunction(int rows, int cols)
      : rows_(rows), cols_(cols), entries_(static_cast<std::size_t>(rows) * cols, ScalarFunction::constant(0.0)) {}

  static MatrixFunction scalar(ScalarFunction f) {
    MatrixFunction m(1, 1);
    m.at(0, 0) = std::move(f);
    return m;
  }

  static MatrixFunction diagonal(const std::vector<ScalarFunction>& diag) {
    int d = static_cast<int>(diag.size());
    MatrixFunction m(d, d);
    for (int i = 0; i < d; ++i) m.at(i, i) = diag[i];
    return m;
  }

  int rows() const { return rows_; }
  int cols() const { return cols_; }
  bool is_square() const { return rows_ == cols_; }

  ScalarFunction& at(int i, int j) { return entries_[static_cast<std::size_t>(i) * cols_ + j]; }
  const ScalarFunction& at(int i, int j) const { return entries_[static_cast<std::size_t>(i) * cols_ + j]; }

  Eigen::MatrixXcd operator()(cplx z) const {
    Eigen::MatrixXcd m(rows_, cols_);
    for (int i = 0; i < rows_; ++i)
      for (int j = 0; j < cols_; ++j) m(i, j) = at(i, j)(z);
    return m;
  }

  std::vector<Eigen::MatrixXcd> sample(std::size_t n) const {
    std::vector<Eigen::MatrixXcd> out(n);
    for (std::size_t j = 0; j < n; ++j) out[j] = (*this)(std::polar(1.0, kTwoPi * j / n));
    return out;
  }

  /// Largest singular value over n boundary samples.
  double max_boundary_norm(std::size_t n) const {
    double best = 0.0;
    if (rows_ == 0 || cols_ == 0) return 0.0;
    for (std::size_t j = 0; j < n; ++j) {
      Eigen::JacobiSVD<Eigen::MatrixXcd> svd((*this)(std::polar(1.0, kTwoPi * j / n)));
      best = std::max(best, svd.singularValues()(0));
    }
    return best;
  }

  bool is_boundary_contractive(std::size_t n = 1024) const { return max_boundary_norm(n) <= 1.0 + 1e-8; }

 private:
  int rows_ = 0;
  int cols_ = 0;
  std::vector<ScalarFunction> entries_;
};

}  // namespace carleson_kit
