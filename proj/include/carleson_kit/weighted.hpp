#pragma once

// The system {z^n} in L^2(w): integrability of log w and 1/w, the A2 constant over dyadic
// arcs, boundedness of w and 1/w, and the norm of the coefficient functional f -> f^(0).

#include <Eigen/Dense>
#include <algorithm>
#include <cmath>
#include <functional>
#include <optional>
#include <string>
#include <vector>

#include "carleson_kit/core.hpp"
#include "carleson_kit/hardy.hpp"

namespace carleson_kit {

/// Nonnegative weight on the circle as a function of the angle t in [0, 2pi).
class Weight {
 public:
  Weight(std::function<double(double)> fn, std::string tag = {}) : fn_(std::move(fn)), tag_(std::move(tag)) {}

  /// Piecewise constant on equal cells; refinement cannot see beyond the samples.
  static Weight from_samples(std::vector<double> samples) {
    if (samples.empty()) throw DomainError("Weight: no samples");
    for (double s : samples)
      if (!(s >= 0.0) || !std::isfinite(s)) throw DomainError("Weight: samples must be finite and >= 0");
    auto n = samples.size();
    Weight w([s = std::move(samples), n](double t) {
      auto j = static_cast<std::size_t>(std::floor(wrap_angle(t) / kTwoPi * static_cast<double>(n)));
      return s[std::min(j, n - 1)];
    });
    w.resolution_ = n;
    return w;
  }

  static Weight constant(double c) { return Weight([c](double) { return c; }); }
  /// |1 - e^{it}|^a.
  static Weight power_of_distance(double a) {
    return Weight([a](double t) { return std::pow(std::abs(2.0 * std::sin(0.5 * t)), a); });
  }

  double operator()(double t) const { return fn_(t); }
  const std::string& tag() const { return tag_; }
  std::optional<std::size_t> resolution() const { return resolution_; }

 private:
  std::function<double(double)> fn_;
  std::string tag_;
  std::optional<std::size_t> resolution_;
};

struct IntegralEstimate {
  double value = 0.0;
  bool converged = true;
  std::vector<double> history;  // midpoint sums at doubling resolutions
};

/// Normalized integral of g(w(t)) by midpoint sums, doubling from 2^min_log to 2^max_log cells.
/// Divergent when the last two increments fail to shrink (ratio >= 0.9) and are not negligible.
inline IntegralEstimate refine_integral(const Weight& w, const std::function<double(double)>& g, int min_log = 8,
                                        int max_log = 18) {
  IntegralEstimate out;
  int top = max_log;
  if (auto r = w.resolution()) {
    int l = 0;
    while ((std::size_t{1} << l) < *r) ++l;
    top = std::max(min_log, std::min(max_log, l + 2));
  }
  for (int l = min_log; l <= top; ++l) {
    std::size_t n = std::size_t{1} << l;
    double s = 0.0;
    for (std::size_t j = 0; j < n; ++j) s += g(w(kTwoPi * (static_cast<double>(j) + 0.5) / static_cast<double>(n)));
    out.history.push_back(s / static_cast<double>(n));
  }
  out.value = out.history.back();
  if (!std::isfinite(out.value)) {
    out.converged = false;
    return out;
  }
  std::size_t h = out.history.size();
  if (h >= 3) {
    double d1 = std::abs(out.history[h - 2] - out.history[h - 3]);
    double d2 = std::abs(out.history[h - 1] - out.history[h - 2]);
    double scale = 1e-9 * std::max(1.0, std::abs(out.value));
    if (d2 > scale && d1 > scale && d2 >= 0.9 * d1) out.converged = false;
  }
  return out;
}

struct A2Estimate {
  double constant = 1.0;
  bool stable = true;
  std::vector<double> history;  // at increasing dyadic depths
};

/// sup over dyadic arcs of (avg w)(avg 1/w) on a 2^(depth+4)-cell midpoint grid.
inline double a2_at_depth(const Weight& w, int depth) {
  std::size_t cells = std::size_t{1} << (depth + 4);
  std::vector<double> pw(cells + 1, 0.0), pinv(cells + 1, 0.0);
  for (std::size_t j = 0; j < cells; ++j) {
    double v = w(kTwoPi * (static_cast<double>(j) + 0.5) / static_cast<double>(cells));
    pw[j + 1] = pw[j] + v;
    pinv[j + 1] = pinv[j] + 1.0 / v;
  }
  double best = 0.0;
  for (int d = 0; d <= depth; ++d) {
    std::size_t width = cells >> d;
    for (std::size_t k = 0; k < (std::size_t{1} << d); ++k) {
      double a = (pw[(k + 1) * width] - pw[k * width]) / static_cast<double>(width);
      double b = (pinv[(k + 1) * width] - pinv[k * width]) / static_cast<double>(width);
      best = std::max(best, a * b);
    }
  }
  return best;
}

inline A2Estimate a2_constant(const Weight& w, int min_depth = 6, int max_depth = 12) {
  A2Estimate out;
  for (int d = min_depth; d <= max_depth; d += 2) out.history.push_back(a2_at_depth(w, d));
  out.constant = out.history.back();
  std::size_t h = out.history.size();
  if (!std::isfinite(out.constant)) out.stable = false;
  else if (h >= 2 && out.history[h - 1] > out.history[h - 2] * 1.02) out.stable = false;
  return out;
}

struct SupEstimate {
  double value = 0.0;
  bool bounded = true;
};

inline SupEstimate refined_sup(const Weight& w, const std::function<double(double)>& g, int lo_log = 12, int hi_log = 16) {
  auto sup_at = [&](int l) {
    std::size_t n = std::size_t{1} << l;
    double s = 0.0;
    for (std::size_t j = 0; j < n; ++j) s = std::max(s, g(w(kTwoPi * (static_cast<double>(j) + 0.5) / static_cast<double>(n))));
    return s;
  };
  double a = sup_at(lo_log), b = sup_at(hi_log);
  return {b, std::isfinite(b) && b <= a * 1.01};
}

struct WeightClassification {
  int level = 0;  // 0 when w vanishes identically
  double integral_w = 0.0;
  bool w_integrable = true;
  double integral_log_w = 0.0;
  bool log_integrable = true;
  double integral_inv_w = 0.0;
  bool inv_integrable = true;
  double a2 = 0.0;
  bool a2_finite = true;
  double sup_w = 0.0;
  double sup_inv_w = 0.0;
  bool bounded = true;
  bool inv_bounded = true;
};

inline WeightClassification classify_weight(const Weight& w, int depth = 12) {
  WeightClassification c;
  auto iw = refine_integral(w, [](double v) { return v; });
  c.integral_w = iw.value;
  c.w_integrable = iw.converged;
  if (!(c.integral_w > 0.0) || !c.w_integrable) return c;
  c.level = 1;
  auto il = refine_integral(w, [](double v) { return std::abs(std::log(v)); });
  auto ilv = refine_integral(w, [](double v) { return std::log(v); });
  c.integral_log_w = ilv.value;
  c.log_integrable = il.converged && std::isfinite(ilv.value);
  auto ii = refine_integral(w, [](double v) { return 1.0 / v; });
  c.integral_inv_w = ii.value;
  c.inv_integrable = ii.converged;
  auto a2 = a2_constant(w, std::max(2, depth - 6), depth);
  c.a2 = a2.constant;
  c.a2_finite = a2.stable;
  auto sw = refined_sup(w, [](double v) { return v; });
  auto si = refined_sup(w, [](double v) { return 1.0 / v; });
  c.sup_w = sw.value;
  c.sup_inv_w = si.value;
  c.bounded = sw.bounded;
  c.inv_bounded = si.bounded;
  if (!c.log_integrable) return c;
  c.level = 2;
  if (!c.inv_integrable) return c;
  c.level = 3;
  if (!c.a2_finite) return c;
  c.level = 4;
  if (c.bounded && c.inv_bounded) c.level = 5;
  return c;
}

struct P0Check {
  double lhs = 0.0;  // squared norm of f -> f^(0) 1 on trigonometric polynomials of degree <= n
  double rhs = 0.0;  // int w * int 1/w
  bool inv_integrable = true;
  int section = 0;
};

/// ||P^0||^2 on the section = (int w) (T^{-1})_{00}, T the Toeplitz matrix of w's Fourier coefficients.
inline P0Check p0_norm_check(const Weight& w, int section) {
  if (section < 0) throw DomainError("p0_norm_check: section must be >= 0");
  P0Check out;
  out.section = section;
  auto iw = refine_integral(w, [](double v) { return v; });
  auto ii = refine_integral(w, [](double v) { return 1.0 / v; });
  out.inv_integrable = ii.converged;
  out.rhs = iw.value * ii.value;
  std::size_t m = 16;
  while (m < static_cast<std::size_t>(16 * (2 * section + 1))) m *= 2;
  BoundaryGrid g = BoundaryGrid::sample(m, [&](cplx z) { return cplx(w(angle_of(z)), 0.0); });
  auto c = g.fourier_raw();
  auto coeff = [&](long k) { return c[static_cast<std::size_t>((k % static_cast<long>(m) + static_cast<long>(m)) % static_cast<long>(m))]; };
  Eigen::Index size = 2 * section + 1;
  Eigen::MatrixXcd t(size, size);
  for (Eigen::Index i = 0; i < size; ++i)
    for (Eigen::Index j = 0; j < size; ++j) t(i, j) = coeff(static_cast<long>(i - j));
  Eigen::VectorXcd e = Eigen::VectorXcd::Zero(size);
  e(section) = 1.0;
  Eigen::LLT<Eigen::MatrixXcd> llt(t);
  if (llt.info() != Eigen::Success) throw DomainError("p0_norm_check: Toeplitz matrix is not positive definite");
  Eigen::VectorXcd x = llt.solve(e);
  out.lhs = coeff(0).real() * x(section).real();
  return out;
}

}  // namespace carleson_kit
