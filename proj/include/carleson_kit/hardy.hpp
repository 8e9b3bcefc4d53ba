#pragma once

// Discrete Hardy-space machinery on a uniform boundary grid of 2^m samples at the
// angles 2 pi j / 2^m. Fourier coefficients are normalized so that
// f(xi_j) = sum_k c_k xi_j^k with k in [-N/2, N/2).

#include <Eigen/Dense>
#include <unsupported/Eigen/FFT>
#include <cmath>
#include <functional>
#include <limits>
#include <vector>

#include "carleson_kit/core.hpp"
#include "carleson_kit/disk.hpp"
#include "carleson_kit/matrix_function.hpp"

namespace carleson_kit {

namespace detail {

inline std::vector<cplx> fft_forward(const std::vector<cplx>& in) {
  Eigen::FFT<double> fft;
  std::vector<cplx> out;
  fft.fwd(out, in);
  return out;
}

// Unscaled synthesis: out_j = sum_k in_k e^{2 pi i jk/N}.
inline std::vector<cplx> fft_synthesis(const std::vector<cplx>& in) {
  Eigen::FFT<double> fft;
  fft.SetFlag(Eigen::FFT<double>::Unscaled);
  std::vector<cplx> out;
  fft.inv(out, in);
  return out;
}

// Frequency held by raw DFT slot p of an N-point transform.
inline long frequency_of(std::size_t p, std::size_t n) {
  return p < n / 2 ? static_cast<long>(p) : static_cast<long>(p) - static_cast<long>(n);
}

}  // namespace detail

class BoundaryGrid {
 public:
  BoundaryGrid() = default;
  explicit BoundaryGrid(std::vector<cplx> values) : values_(std::move(values)) {
    if (!is_power_of_two(values_.size()) || values_.size() < 2)
      throw DomainError("BoundaryGrid: size must be a power of two >= 2");
  }

  template <class F>
  static BoundaryGrid sample(std::size_t n, F&& f) {
    std::vector<cplx> v(n);
    for (std::size_t j = 0; j < n; ++j) v[j] = cplx(f(std::polar(1.0, kTwoPi * static_cast<double>(j) / n)));
    return BoundaryGrid(std::move(v));
  }

  /// Builds a grid from centered coefficients (slot p holds frequency p - N/2).
  static BoundaryGrid from_fourier(const std::vector<cplx>& centered) {
    std::size_t n = centered.size();
    std::vector<cplx> raw(n);
    for (std::size_t p = 0; p < n; ++p) {
      long k = static_cast<long>(p) - static_cast<long>(n / 2);
      raw[static_cast<std::size_t>((k + static_cast<long>(n)) % static_cast<long>(n))] = centered[p];
    }
    return BoundaryGrid(detail::fft_synthesis(raw));
  }

  std::size_t size() const { return values_.size(); }
  const std::vector<cplx>& values() const { return values_; }
  std::vector<cplx>& values() { return values_; }
  cplx operator[](std::size_t j) const { return values_[j]; }
  cplx& operator[](std::size_t j) { return values_[j]; }
  double angle(std::size_t j) const { return kTwoPi * static_cast<double>(j) / static_cast<double>(size()); }
  cplx point(std::size_t j) const { return std::polar(1.0, angle(j)); }

  /// Coefficients in raw DFT order (slot p holds frequency detail::frequency_of(p, N)).
  std::vector<cplx> fourier_raw() const {
    auto c = detail::fft_forward(values_);
    double inv = 1.0 / static_cast<double>(size());
    for (auto& x : c) x *= inv;
    return c;
  }

  /// Centered view: slot p holds frequency p - N/2.
  std::vector<cplx> fourier() const {
    auto raw = fourier_raw();
    std::size_t n = size();
    std::vector<cplx> centered(n);
    for (std::size_t p = 0; p < n; ++p) centered[(static_cast<std::size_t>(detail::frequency_of(p, n) + static_cast<long>(n / 2)))] = raw[p];
    return centered;
  }

  /// L^2(m) inner product <f, g> with m normalized Lebesgue measure.
  cplx inner(const BoundaryGrid& g) const {
    check_same(g);
    cplx s(0.0, 0.0);
    for (std::size_t j = 0; j < size(); ++j) s += values_[j] * std::conj(g.values_[j]);
    return s / static_cast<double>(size());
  }
  double norm_squared() const {
    double s = 0.0;
    for (cplx v : values_) s += std::norm(v);
    return s / static_cast<double>(size());
  }
  double norm() const { return std::sqrt(norm_squared()); }

  /// Largest modulus among coefficients of negative frequency.
  double max_negative_coefficient() const {
    auto raw = fourier_raw();
    double m = 0.0;
    for (std::size_t p = size() / 2; p < size(); ++p) m = std::max(m, std::abs(raw[p]));
    return m;
  }

  bool is_analytic(double tol = 1e-10) const { return max_negative_coefficient() <= tol * std::max(1.0, norm()); }

  BoundaryGrid conj() const {
    BoundaryGrid out = *this;
    for (auto& v : out.values_) v = std::conj(v);
    return out;
  }

  friend BoundaryGrid operator*(const BoundaryGrid& a, const BoundaryGrid& b) {
    a.check_same(b);
    BoundaryGrid out = a;
    for (std::size_t j = 0; j < a.size(); ++j) out.values_[j] *= b.values_[j];
    return out;
  }
  friend BoundaryGrid operator+(const BoundaryGrid& a, const BoundaryGrid& b) {
    a.check_same(b);
    BoundaryGrid out = a;
    for (std::size_t j = 0; j < a.size(); ++j) out.values_[j] += b.values_[j];
    return out;
  }
  friend BoundaryGrid operator-(const BoundaryGrid& a, const BoundaryGrid& b) {
    a.check_same(b);
    BoundaryGrid out = a;
    for (std::size_t j = 0; j < a.size(); ++j) out.values_[j] -= b.values_[j];
    return out;
  }
  friend BoundaryGrid operator*(cplx s, const BoundaryGrid& a) {
    BoundaryGrid out = a;
    for (auto& v : out.values_) v *= s;
    return out;
  }

 private:
  void check_same(const BoundaryGrid& g) const {
    if (g.size() != size()) throw DomainError("BoundaryGrid: size mismatch");
  }
  std::vector<cplx> values_;
};

enum class RieszSign { plus, minus };

/// P_+ keeps frequencies >= 0, P_- keeps frequencies < 0.
inline BoundaryGrid riesz_project(const BoundaryGrid& f, RieszSign sign) {
  auto raw = f.fourier_raw();
  std::size_t n = f.size();
  for (std::size_t p = 0; p < n; ++p) {
    bool nonneg = p < n / 2;
    if ((sign == RieszSign::plus) != nonneg) raw[p] = 0.0;
  }
  return BoundaryGrid(detail::fft_synthesis(raw));
}

struct PoissonValue {
  double value;
  bool resolution_warning;
};

/// Harmonic extension of a real grid function to lambda, evaluated from the grid's
/// trigonometric interpolant (sum_k c_k r^|k| e^{ik theta}).
inline PoissonValue poisson_extend(const BoundaryGrid& f, cplx lambda) {
  require_interior(lambda, "poisson_extend");
  double scale = 0.0;
  for (cplx v : f.values()) scale = std::max(scale, std::abs(v));
  for (cplx v : f.values())
    if (std::abs(v.imag()) > 1e-12 * std::max(1.0, scale)) throw DomainError("poisson_extend: grid must be real-valued");
  auto raw = f.fourier_raw();
  std::size_t n = f.size();
  cplx power(1.0, 0.0);
  double value = raw[0].real();
  for (std::size_t k = 1; k < n / 2; ++k) {
    power *= lambda;
    // c_{-k} = conj(c_k) for real data, so the pair contributes 2 Re(c_k lambda^k).
    value += 2.0 * (raw[k] * power).real();
  }
  power *= lambda;
  value += raw[n / 2].real() * power.real();
  bool warn = (1.0 - std::abs(lambda)) < 4.0 / static_cast<double>(n);
  return {value, warn};
}

/// Analytic function given by its Taylor coefficients (index >= 0 only).
class HardyFunction {
 public:
  HardyFunction() = default;
  explicit HardyFunction(std::vector<cplx> coeffs) : coeffs_(std::move(coeffs)) {}

  static HardyFunction monomial(int k, cplx c = 1.0) {
    std::vector<cplx> v(static_cast<std::size_t>(k) + 1, cplx(0.0, 0.0));
    v.back() = c;
    return HardyFunction(std::move(v));
  }

  /// Analytic part of a grid; throws unless negative coefficients are below tol.
  static HardyFunction from_grid(const BoundaryGrid& g, double tol = 1e-10) {
    if (!g.is_analytic(tol)) throw DomainError("HardyFunction: grid has non-negligible negative Fourier coefficients");
    auto raw = g.fourier_raw();
    raw.resize(g.size() / 2);
    return HardyFunction(std::move(raw));
  }

  const std::vector<cplx>& coefficients() const { return coeffs_; }
  int degree() const { return static_cast<int>(coeffs_.size()) - 1; }

  cplx operator()(cplx z) const {
    cplx p(0.0, 0.0);
    for (auto it = coeffs_.rbegin(); it != coeffs_.rend(); ++it) p = p * z + *it;
    return p;
  }

  /// Samples on an n-point grid (coefficients beyond n alias onto the grid).
  BoundaryGrid boundary(std::size_t n) const {
    std::vector<cplx> raw(n, cplx(0.0, 0.0));
    for (std::size_t k = 0; k < coeffs_.size(); ++k) raw[k % n] += coeffs_[k];
    return BoundaryGrid(detail::fft_synthesis(raw));
  }

  double norm_squared() const {
    double s = 0.0;
    for (cplx c : coeffs_) s += std::norm(c);
    return s;
  }

  /// Harmonic extension of |F|^2 to lambda (exact for polynomials).
  double abs2_harmonic(cplx lambda) const {
    double s = norm_squared();
    std::size_t n = coeffs_.size();
    cplx power(1.0, 0.0);
    for (std::size_t shift = 1; shift < n; ++shift) {
      power *= lambda;
      cplx acc(0.0, 0.0);
      for (std::size_t k = 0; k + shift < n; ++k) acc += coeffs_[k + shift] * std::conj(coeffs_[k]);
      s += 2.0 * (acc * power).real();
    }
    return s;
  }

 private:
  std::vector<cplx> coeffs_;
};

/// Outer function h = exp(g) with g the Herglotz transform of a grid log-modulus.
/// On the grid Re g = log u exactly, so |h| = u at every sample, and h(0) = exp(mean log u) > 0.
class OuterFunction {
 public:
  explicit OuterFunction(const std::vector<double>& log_modulus) {
    std::size_t n = log_modulus.size();
    if (!is_power_of_two(n) || n < 2) throw DomainError("OuterFunction: grid size must be a power of two");
    std::vector<cplx> in(log_modulus.begin(), log_modulus.end());
    auto raw = detail::fft_forward(in);
    exponent_.assign(n / 2 + 1, cplx(0.0, 0.0));
    double inv = 1.0 / static_cast<double>(n);
    exponent_[0] = cplx(raw[0].real() * inv, 0.0);
    for (std::size_t k = 1; k < n / 2; ++k) exponent_[k] = 2.0 * raw[k] * inv;
    exponent_[n / 2] = cplx(raw[n / 2].real() * inv, 0.0);
    size_ = n;
  }

  std::size_t grid_size() const { return size_; }

  /// g(z) = c_0 + 2 sum_{0<k<N/2} c_k z^k + c_{N/2} z^{N/2}.
  cplx exponent(cplx z) const {
    cplx p(0.0, 0.0);
    for (auto it = exponent_.rbegin(); it != exponent_.rend(); ++it) p = p * z + *it;
    return p;
  }
  cplx operator()(cplx z) const { return std::exp(exponent(z)); }
  double log_abs(cplx z) const { return exponent(z).real(); }

  std::vector<cplx> boundary_values() const {
    std::vector<cplx> raw(size_, cplx(0.0, 0.0));
    for (std::size_t k = 0; k < exponent_.size(); ++k) raw[k % size_] += exponent_[k];
    auto g = detail::fft_synthesis(raw);
    for (auto& v : g) v = std::exp(v);
    return g;
  }

  /// Taylor coefficients of the degree N-1 polynomial interpolating h on the grid.
  HardyFunction hardy() const {
    auto vals = boundary_values();
    auto c = detail::fft_forward(vals);
    double inv = 1.0 / static_cast<double>(size_);
    for (auto& x : c) x *= inv;
    return HardyFunction(std::move(c));
  }

 private:
  std::vector<cplx> exponent_;
  std::size_t size_ = 0;
};

/// Outer function with boundary modulus u (> 0 at every sample). The Herglotz
/// construction always yields h(0) > 0; `normalize_positive_at_0` is kept for callers
/// that want to state the normalization explicitly.
inline OuterFunction outer_from_modulus(const BoundaryGrid& u, bool normalize_positive_at_0 = true) {
  (void)normalize_positive_at_0;
  double top = 0.0;
  for (cplx v : u.values()) top = std::max(top, std::abs(v));
  // Samples at roundoff level of the largest one are zeros of the modulus.
  double floor = 4.0 * std::numeric_limits<double>::epsilon() * top;
  std::vector<double> logs(u.size());
  for (std::size_t j = 0; j < u.size(); ++j) {
    cplx v = u[j];
    if (std::abs(v.imag()) > 1e-12 * std::max(1.0, std::abs(v.real())) || !(v.real() > floor) || !std::isfinite(v.real()))
      throw DomainError("outer_from_modulus: modulus must be real and positive at every sample");
    logs[j] = std::log(v.real());
  }
  return OuterFunction(logs);
}

inline OuterFunction outer_from_log_modulus(const std::vector<double>& log_u) { return OuterFunction(log_u); }

/// sum_n (|F_n|^2(lambda) - |F_n(lambda)|^2).
inline double garsia_sum(const std::vector<HardyFunction>& family, cplx lambda) {
  require_interior(lambda, "garsia_sum");
  double s = 0.0;
  for (const auto& f : family) s += f.abs2_harmonic(lambda) - std::norm(f(lambda));
  return s;
}

inline double garsia_sum(const std::vector<BoundaryGrid>& family, cplx lambda) {
  std::vector<HardyFunction> fs;
  fs.reserve(family.size());
  for (const auto& g : family) fs.push_back(HardyFunction::from_grid(g));
  return garsia_sum(fs, lambda);
}

/// Vector form: sum_n (||F_n^* e||^2(lambda) - ||F_n(lambda)^* e||^2), harmonic extension
/// computed on an n-point boundary grid.
inline double garsia_sum(const std::vector<MatrixFunction>& family, cplx lambda, const Eigen::VectorXcd& e,
                         std::size_t grid = 4096) {
  require_interior(lambda, "garsia_sum");
  if (std::abs(e.norm() - 1.0) > 1e-10) throw DomainError("garsia_sum: e must be a unit vector");
  double s = 0.0;
  for (const auto& f : family) {
    if (f.rows() != e.size()) throw DomainError("garsia_sum: dimension mismatch");
    BoundaryGrid sq = BoundaryGrid::sample(grid, [&](cplx xi) { return (f(xi).adjoint() * e).squaredNorm(); });
    s += poisson_extend(sq, lambda).value - (f(lambda).adjoint() * e).squaredNorm();
  }
  return s;
}

/// Largest eigenvalue of sum_n H*_{conj F_n} H_{conj F_n} on polynomials of degree <= ambient_degree.
inline double hankel_embedding_constant(const std::vector<HardyFunction>& family, int ambient_degree) {
  if (ambient_degree < 0) throw DomainError("hankel_embedding_constant: degree must be >= 0");
  int cols = ambient_degree + 1;
  Eigen::MatrixXcd gram = Eigen::MatrixXcd::Zero(cols, cols);
  for (const auto& f : family) {
    const auto& a = f.coefficients();
    int deg = f.degree();
    if (deg < 1) continue;
    // (conj F f)^ at index -m equals sum_k conj(a_{k+m}) f_k.
    Eigen::MatrixXcd h = Eigen::MatrixXcd::Zero(deg, cols);
    for (int m = 1; m <= deg; ++m)
      for (int k = 0; k < cols && k + m <= deg; ++k) h(m - 1, k) = std::conj(a[static_cast<std::size_t>(k + m)]);
    gram += h.adjoint() * h;
  }
  Eigen::SelfAdjointEigenSolver<Eigen::MatrixXcd> es(gram, Eigen::EigenvaluesOnly);
  return std::max(0.0, es.eigenvalues().maxCoeff());
}

/// sup of garsia_sum over the quasi-uniform disk grid.
inline double garsia_sup(const std::vector<HardyFunction>& family, int depth = 10) {
  double best = 0.0;
  for (cplx lambda : disk_grid(depth)) best = std::max(best, garsia_sum(family, lambda));
  return best;
}

}  // namespace carleson_kit
