#pragma once

// Point systems on Carleson contours of det Theta_n, their epsilon-net splitting,
// and the condition sums that compare det Theta_n with the constructed Blaschke products.

#include <Eigen/Dense>
#include <algorithm>
#include <cmath>
#include <optional>
#include <random>
#include <vector>

#include "carleson_kit/blaschke.hpp"
#include "carleson_kit/contour.hpp"
#include "carleson_kit/core.hpp"
#include "carleson_kit/hardy.hpp"
#include "carleson_kit/matrix_function.hpp"
#include "carleson_kit/model_space.hpp"
#include "carleson_kit/riesz.hpp"

namespace carleson_kit {

namespace detail {

inline cplx poly_eval(const std::vector<cplx>& c, cplx z) {
  cplx p(0.0, 0.0);
  for (auto it = c.rbegin(); it != c.rend(); ++it) p = p * z + *it;
  return p;
}

inline cplx poly_derivative_eval(const std::vector<cplx>& c, cplx z) {
  cplx p(0.0, 0.0);
  for (std::size_t k = c.size(); k-- > 1;) p = p * z + static_cast<double>(k) * c[k];
  return p;
}

/// Roots of sum c_k z^k (companion eigenvalues, then Newton polish).
inline std::vector<cplx> poly_roots(std::vector<cplx> c) {
  double top = 0.0;
  for (cplx x : c) top = std::max(top, std::abs(x));
  if (top == 0.0) throw DomainError("poly_roots: zero polynomial");
  while (!c.empty() && std::abs(c.back()) <= 1e-13 * top) c.pop_back();
  std::size_t lead_zeros = 0;
  while (lead_zeros < c.size() && std::abs(c[lead_zeros]) <= 1e-15 * top) ++lead_zeros;
  std::vector<cplx> out(lead_zeros, cplx(0.0, 0.0));
  std::vector<cplx> q(c.begin() + static_cast<std::ptrdiff_t>(lead_zeros), c.end());
  auto n = static_cast<Eigen::Index>(q.size()) - 1;
  if (n <= 0) return out;
  Eigen::MatrixXcd comp = Eigen::MatrixXcd::Zero(n, n);
  for (Eigen::Index i = 1; i < n; ++i) comp(i, i - 1) = 1.0;
  for (Eigen::Index i = 0; i < n; ++i) comp(i, n - 1) = -q[static_cast<std::size_t>(i)] / q.back();
  Eigen::ComplexEigenSolver<Eigen::MatrixXcd> es(comp, false);
  for (Eigen::Index i = 0; i < n; ++i) {
    cplx z = es.eigenvalues()(i);
    for (int it = 0; it < 8; ++it) {
      cplx d = poly_derivative_eval(q, z);
      if (std::abs(d) < 1e-300) break;
      cplx step = poly_eval(q, z) / d;
      z -= step;
      if (std::abs(step) < 1e-16 * std::max(1.0, std::abs(z))) break;
    }
    out.push_back(z);
  }
  return out;
}

}  // namespace detail

/// det Theta as zeros in D plus a piecewise-constant boundary log-modulus on `cells` equal arcs.
inline ContractiveFunction determinant_function(const MatrixFunction& theta, std::size_t cells = 1024) {
  if (!theta.is_square() || theta.rows() == 0) throw DomainError("determinant_function: Theta must be square");
  int d = theta.rows();
  std::vector<cplx> all_zeros;
  int degree = 0;
  for (int i = 0; i < d; ++i) {
    int row_max = 0;
    for (int j = 0; j < d; ++j) {
      const auto& e = theta.at(i, j);
      row_max = std::max(row_max, static_cast<int>(e.poly.size()) - 1);
      all_zeros.insert(all_zeros.end(), e.zeros.begin(), e.zeros.end());
    }
    degree += row_max;
  }
  degree += static_cast<int>(all_zeros.size());
  std::size_t n = 4;
  while (n < static_cast<std::size_t>(2 * degree + 2)) n *= 2;
  // Q = det * prod (1 - conj(a) z) is a polynomial of degree <= `degree`.
  std::vector<cplx> samples(n);
  for (std::size_t k = 0; k < n; ++k) {
    cplx z = std::polar(1.0, kTwoPi * static_cast<double>(k) / static_cast<double>(n));
    cplx q = theta(z).determinant();
    for (cplx a : all_zeros) q *= 1.0 - std::conj(a) * z;
    samples[k] = q;
  }
  auto coeffs = detail::fft_forward(samples);
  for (auto& c : coeffs) c /= static_cast<double>(n);
  coeffs.resize(static_cast<std::size_t>(degree) + 1);
  double top = 0.0;
  for (cplx c : coeffs) top = std::max(top, std::abs(c));
  if (top < 1e-14) throw DomainError("determinant_function: det Theta vanishes identically");
  std::vector<cplx> zeros;
  for (cplx r : degree > 0 ? detail::poly_roots(coeffs) : std::vector<cplx>{})
    if (std::abs(r) < 1.0 - 1e-12) zeros.push_back(r);
  std::vector<double> logs(cells);
  for (std::size_t j = 0; j < cells; ++j) {
    cplx xi = std::polar(1.0, kTwoPi * (static_cast<double>(j) + 0.5) / static_cast<double>(cells));
    double a = std::abs(theta(xi).determinant());
    double l = a > 0.0 ? std::log(a) : -700.0;
    if (l > 1e-8) throw DomainError("determinant_function: Theta is not contractive on the boundary");
    logs[j] = std::abs(l) < 1e-12 ? 0.0 : std::max(std::min(l, 0.0), -700.0);
  }
  return ContractiveFunction(std::move(zeros), {}, std::move(logs));
}

/// Unit vector e minimizing ||Theta(lambda)^* e||, phase-normalized so its largest entry is real positive.
inline Eigen::VectorXcd minimizing_direction(const Eigen::MatrixXcd& t) {
  Eigen::JacobiSVD<Eigen::MatrixXcd> svd(t, Eigen::ComputeFullU);
  Eigen::VectorXcd e = svd.matrixU().col(svd.matrixU().cols() - 1);
  Eigen::Index k = 0;
  e.cwiseAbs().maxCoeff(&k);
  e *= std::conj(e(k)) / std::abs(e(k));
  return e;
}

struct PointSystemEntry {
  std::vector<std::vector<cplx>> contour;
  ContourReport contour_report;
  Region region;
  std::vector<cplx> sigma;
  std::vector<Eigen::VectorXcd> directions;  // e_lambda
  std::vector<double> residuals;             // ||Theta_n(lambda)^* e_lambda||
  NetCheck net;
  double max_blaschke_on_contour = 0.0;      // max |B_n| over contour vertices
  std::vector<std::vector<std::size_t>> parts;  // indices into sigma per net vector
};

struct PointSystem {
  int d = 0;
  double eps = 0.0;
  double alpha = 0.0;
  double log_eps_prime = 0.0;  // log eps', where eps'^d is the inner threshold of every contour
  std::vector<PointSystemEntry> entries;
  std::vector<Eigen::VectorXcd> net_vectors;

  std::vector<std::vector<cplx>> blaschke_zero_sets() const {
    std::vector<std::vector<cplx>> out;
    for (const auto& e : entries) out.push_back(e.sigma);
    return out;
  }
  /// Zero sets of B_n^k; empty sets stand for B_n^k = 1.
  std::vector<std::vector<std::vector<cplx>>> split_zero_sets() const {
    std::vector<std::vector<std::vector<cplx>>> out;
    for (const auto& e : entries) {
      std::vector<std::vector<cplx>> per;
      for (const auto& part : e.parts) {
        std::vector<cplx> z;
        for (std::size_t i : part) z.push_back(e.sigma[i]);
        per.push_back(std::move(z));
      }
      out.push_back(std::move(per));
    }
    return out;
  }
};

inline std::vector<cplx> polyline_vertices(const std::vector<std::vector<cplx>>& polylines) {
  std::vector<cplx> v;
  for (const auto& p : polylines) v.insert(v.end(), p.begin(), p.end());
  return v;
}

inline PointSystem build_contour_nets(const std::vector<MatrixFunction>& family, double eps, double alpha,
                                      const ContourConstants& constants = {}, const ContourOptions& options = {}) {
  if (!(eps > 0.0 && eps < 1.0)) throw DomainError("build_contour_nets: eps must lie in (0,1)");
  if (!(alpha > 0.0 && alpha < 0.1)) throw DomainError("build_contour_nets: alpha must lie in (0, 0.1)");
  PointSystem ps;
  ps.eps = eps;
  ps.alpha = alpha;
  if (family.empty()) return ps;
  ps.d = family.front().rows();
  double threshold = std::pow(eps, ps.d);
  ps.log_eps_prime = constants.log_eps_prime(threshold) / ps.d;
  ps.entries.resize(family.size());
  for (const auto& th : family)
    if (!th.is_square() || th.rows() != ps.d) throw DomainError("build_contour_nets: members must be square of one size");
  parallel_for(family.size(), [&](std::size_t n) {
    auto& entry = ps.entries[n];
    ContractiveFunction phi = determinant_function(family[n]);
    auto res = bourgain_contour(phi, threshold, constants, options);
    entry.contour = res.polylines;
    entry.contour_report = res.report;
    entry.region = std::move(res.region);
    auto verts = polyline_vertices(entry.contour);
    if (verts.empty()) return;
    entry.sigma = place_net_on_curve(verts, alpha);
    entry.net = check_net(verts, entry.sigma, alpha);
    BlaschkeProduct b(entry.sigma);
    for (cplx v : verts) entry.max_blaschke_on_contour = std::max(entry.max_blaschke_on_contour, std::abs(b(v)));
    for (cplx l : entry.sigma) {
      Eigen::MatrixXcd t = family[n](l);
      Eigen::VectorXcd e = minimizing_direction(t);
      entry.residuals.push_back((t.adjoint() * e).norm());
      entry.directions.push_back(std::move(e));
    }
  });
  return ps;
}

struct EpsilonNet {
  std::vector<Eigen::VectorXcd> vectors;
  double certified_radius = 0.0;  // max probe distance to the net
  int probes = 0;
};

inline Eigen::VectorXcd random_unit_vector(int d, std::mt19937_64& rng) {
  std::normal_distribution<double> g(0.0, 1.0);
  Eigen::VectorXcd v(d);
  for (int i = 0; i < d; ++i) v(i) = cplx(g(rng), g(rng));
  return v / v.norm();
}

inline double distance_to_net(const std::vector<Eigen::VectorXcd>& net, const Eigen::VectorXcd& v) {
  double best = std::numeric_limits<double>::infinity();
  for (const auto& e : net) best = std::min(best, (e - v).norm());
  return best;
}

/// Max distance from `probes` random unit vectors to the net.
inline double certify_epsilon_net(const std::vector<Eigen::VectorXcd>& net, int d, int probes, std::uint64_t seed) {
  std::mt19937_64 rng(seed);
  double worst = 0.0;
  for (int i = 0; i < probes; ++i) worst = std::max(worst, distance_to_net(net, random_unit_vector(d, rng)));
  return worst;
}

/// Greedy farthest-point net of the unit sphere of C^d (real dimension 2d-1), certified by probing.
inline EpsilonNet build_epsilon_net(int d, double eps, std::uint64_t seed, int probes = 10000) {
  if (d < 1) throw DomainError("build_epsilon_net: dimension must be positive");
  if (!(eps > 0.0 && eps < 2.0)) throw DomainError("build_epsilon_net: eps must lie in (0,2)");
  std::mt19937_64 rng(seed);
  int pool_size = 4 * probes;
  std::vector<Eigen::VectorXcd> pool;
  for (int i = 0; i < pool_size; ++i) pool.push_back(random_unit_vector(d, rng));
  EpsilonNet net;
  std::vector<double> dist(pool.size(), std::numeric_limits<double>::infinity());
  std::size_t next = 0;
  for (;;) {
    const Eigen::VectorXcd added = pool[next];
    net.vectors.push_back(added);
    double far = 0.0;
    for (std::size_t i = 0; i < pool.size(); ++i) {
      dist[i] = std::min(dist[i], (pool[i] - added).norm());
      if (dist[i] > far) {
        far = dist[i];
        next = i;
      }
    }
    if (far < 0.8 * eps) break;
  }
  net.probes = probes;
  net.certified_radius = certify_epsilon_net(net.vectors, d, probes, seed ^ 0x9e3779b97f4a7c15ULL);
  if (!(net.certified_radius <= eps)) throw NetValidityError("build_epsilon_net: probing found a gap in the net");
  return net;
}

/// Assigns each lambda to the nearest net vector; requires ||e_lambda - e^k|| < eps.
inline PointSystem epsilon_net_split(PointSystem ps, const std::vector<Eigen::VectorXcd>& net, double eps) {
  if (net.empty()) throw NetValidityError("epsilon_net_split: empty net");
  ps.net_vectors = net;
  for (auto& entry : ps.entries) {
    entry.parts.assign(net.size(), {});
    for (std::size_t i = 0; i < entry.sigma.size(); ++i) {
      const auto& e = entry.directions[i];
      std::size_t best = 0;
      double bd = std::numeric_limits<double>::infinity();
      for (std::size_t k = 0; k < net.size(); ++k) {
        if (net[k].size() != e.size()) throw DomainError("epsilon_net_split: net vectors have the wrong dimension");
        double dd = (net[k] - e).norm();
        if (dd < bd) {
          bd = dd;
          best = k;
        }
      }
      if (!(bd < eps)) throw NetValidityError("epsilon_net_split: a direction is not within eps of the net");
      entry.parts[best].push_back(i);
    }
  }
  return ps;
}

struct SplitCheck {
  bool partition_ok = true;         // parts cover sigma exactly once
  bool near_net_ok = true;          // ||e_lambda - e^k|| < eps
  bool two_eps_ok = true;           // ||Theta_n(lambda)^* e^k|| <= residual + eps < 2 eps
  double worst_two_eps_ratio = 0.0;  // max ||Theta^* e^k|| / (2 eps)
};

inline SplitCheck check_split(const PointSystem& ps, const std::vector<MatrixFunction>& family) {
  SplitCheck out;
  for (std::size_t n = 0; n < ps.entries.size(); ++n) {
    const auto& entry = ps.entries[n];
    std::vector<int> seen(entry.sigma.size(), 0);
    for (std::size_t k = 0; k < entry.parts.size(); ++k) {
      for (std::size_t i : entry.parts[k]) {
        ++seen[i];
        double gap = (entry.directions[i] - ps.net_vectors[k]).norm();
        if (!(gap < ps.eps)) out.near_net_ok = false;
        double v = (family[n](entry.sigma[i]).adjoint() * ps.net_vectors[k]).norm();
        out.worst_two_eps_ratio = std::max(out.worst_two_eps_ratio, v / (2.0 * ps.eps));
        if (!(v <= entry.residuals[i] + gap + 1e-12 && v < 2.0 * ps.eps)) out.two_eps_ok = false;
      }
    }
    for (int s : seen)
      if (s != 1) out.partition_ok = false;
  }
  return out;
}

struct ConditionSumsInput {
  std::vector<std::vector<cplx>> blaschke;               // zero sets of B_n
  std::vector<std::vector<std::vector<cplx>>> split;     // zero sets of B_n^k
  std::vector<MatrixFunction> thetas;
};

struct ConditionSumsReport {
  std::optional<double> sup_blaschke;  // sup sum (1 - |B_n|^2)
  cplx argmax_blaschke{0.0, 0.0};
  std::optional<double> sup_scalar;    // sup sum (1 - |theta_n|^2), 1x1 members
  std::optional<double> sup_vector;    // sup over grid and unit e of sum (1 - ||Theta_n^* e||^2)
  std::optional<double> sup_det;       // sup sum (1 - |det Theta_n|^2)
  std::optional<double> delta_prime;  // inf min_n (|theta_n| + prod_{k != n} |theta_k|)
  std::optional<double> split_sum_of_sups;  // sum_k sup_lambda sum_n (1 - |B_n^k|^2)
  bool det_dominates_vector = true;
  bool split_dominates = true;
  double worst_chain_gap = 0.0;  // max of (vector sum - det sum), should be <= 1e-8
};

inline double blaschke_abs(const std::vector<cplx>& zeros, cplx z) {
  double p = 1.0;
  for (cplx a : zeros) p *= pseudo_hyperbolic_unchecked(a, z);
  return p;
}

inline ConditionSumsReport condition_sums(const ConditionSumsInput& in, const std::vector<cplx>& lambda_grid,
                                          const std::vector<Eigen::VectorXcd>& e_grid) {
  ConditionSumsReport rep;
  if (!in.blaschke.empty()) {
    double best = -1.0;
    for (cplx l : lambda_grid) {
      double s = 0.0;
      for (const auto& z : in.blaschke) s += 1.0 - std::pow(blaschke_abs(z, l), 2);
      if (s > best) {
        best = s;
        rep.argmax_blaschke = l;
      }
    }
    rep.sup_blaschke = best;
  }
  if (!in.split.empty()) {
    std::size_t parts = 0;
    for (const auto& p : in.split) parts = std::max(parts, p.size());
    std::vector<double> sup_k(parts, 0.0);
    for (cplx l : lambda_grid) {
      double total = 0.0, split_total = 0.0;
      for (std::size_t n = 0; n < in.split.size(); ++n) {
        std::vector<cplx> all;
        for (const auto& z : in.split[n]) all.insert(all.end(), z.begin(), z.end());
        total += 1.0 - std::pow(blaschke_abs(all, l), 2);
      }
      for (std::size_t k = 0; k < parts; ++k) {
        double s = 0.0;
        for (const auto& p : in.split)
          if (k < p.size()) s += 1.0 - std::pow(blaschke_abs(p[k], l), 2);
        sup_k[k] = std::max(sup_k[k], s);
        split_total += s;
      }
      if (total > split_total + 1e-12) rep.split_dominates = false;
    }
    double s = 0.0;
    for (double v : sup_k) s += v;
    rep.split_sum_of_sups = s;
    if (rep.sup_blaschke && *rep.sup_blaschke > s + 1e-12) rep.split_dominates = false;
  }
  if (!in.thetas.empty()) {
    bool scalar = std::all_of(in.thetas.begin(), in.thetas.end(), [](const MatrixFunction& t) { return t.rows() == 1 && t.cols() == 1; });
    double sup_det = 0.0, sup_vec = 0.0, sup_scalar = 0.0;
    double dprime = std::numeric_limits<double>::infinity();
    for (cplx l : lambda_grid) {
      std::vector<Eigen::MatrixXcd> vals;
      double det_sum = 0.0;
      for (const auto& t : in.thetas) {
        vals.push_back(t(l));
        det_sum += 1.0 - std::norm(det_theta(t, l));
      }
      sup_det = std::max(sup_det, det_sum);
      for (const auto& e : e_grid) {
        double vs = 0.0;
        for (const auto& v : vals) {
          if (v.rows() != e.size()) throw DomainError("condition_sums: e has the wrong dimension");
          vs += e.squaredNorm() - (v.adjoint() * e).squaredNorm();
        }
        vs /= e.squaredNorm();
        sup_vec = std::max(sup_vec, vs);
        rep.worst_chain_gap = std::max(rep.worst_chain_gap, vs - det_sum);
        if (vs > det_sum + 1e-8) rep.det_dominates_vector = false;
      }
      if (scalar) {
        double s = 0.0;
        std::vector<double> mods;
        for (const auto& v : vals) {
          mods.push_back(std::abs(v(0, 0)));
          s += 1.0 - mods.back() * mods.back();
        }
        sup_scalar = std::max(sup_scalar, s);
        for (std::size_t n = 0; n < mods.size(); ++n) {
          double prod = 1.0;
          for (std::size_t k = 0; k < mods.size(); ++k)
            if (k != n) prod *= mods[k];
          dprime = std::min(dprime, mods[n] + prod);
        }
      }
    }
    rep.sup_det = sup_det;
    if (!e_grid.empty()) rep.sup_vector = sup_vec;
    if (scalar) {
      rep.sup_scalar = sup_scalar;
      rep.delta_prime = dprime;
    }
  }
  return rep;
}

/// Smallest integer N with alpha^N < eps'^d, computed with log eps'.
inline long n_power(int d, double alpha, double log_eps_prime) {
  double bound = static_cast<double>(d) * log_eps_prime / std::log(alpha);
  return static_cast<long>(std::floor(bound)) + 1;
}

/// 1 - prod a_i <= sum (1 - a_i) for a_i in [0, 1].
inline bool product_inequality_holds(const std::vector<double>& a, double tol = 1e-12) {
  double prod = 1.0, sum = 0.0;
  for (double x : a) {
    prod *= x;
    sum += 1.0 - x;
  }
  return 1.0 - prod <= sum + tol;
}

struct OuterChainReport {
  long n_power = 0;
  int d = 0;
  int d_star = 0;
  double log_eps_prime = 0.0;
  int boundary_multiplicity = 0;  // max #{n : |det Theta_n(xi)| < 1} over the boundary grid
  bool multiplicity_ok = true;
  bool algebra_ok = true;
  double worst_outer_sum = 0.0;   // max_z sum (1 - |h_n(z)|^2)
  double outer_bound = 0.0;       // 2 d_* log(1/eps')
  bool outer_ok = true;
  double worst_assembled_margin = std::numeric_limits<double>::infinity();  // min of rhs - lhs
  bool assembled_ok = true;
  int covering_count = 0;         // max #{n : z in O_n}
  int premise_violations = 0;     // z outside O_n with |h_n||B_n|^N > |det Theta_n|
};

/// Bound chain with outer comparison functions |h_n| = max(|det Theta_n|, eps'^d).
inline OuterChainReport outer_chain_check(const std::vector<MatrixFunction>& thetas, const std::vector<std::vector<cplx>>& blaschke,
                                       double log_eps_prime, long n_pow, int d_star, const std::vector<cplx>& z_grid,
                                       const std::vector<const Region*>& regions = {}, std::size_t boundary_grid = 4096) {
  if (thetas.size() != blaschke.size()) throw DomainError("outer_chain_check: family sizes differ");
  if (n_pow < 1) throw DomainError("outer_chain_check: N must be >= 1");
  OuterChainReport rep;
  rep.n_power = n_pow;
  rep.d_star = d_star;
  rep.log_eps_prime = log_eps_prime;
  rep.d = thetas.empty() ? 0 : thetas.front().rows();
  double floor = static_cast<double>(rep.d) * log_eps_prime;
  std::vector<OuterFunction> outers;
  std::vector<int> mult(boundary_grid, 0);
  for (const auto& t : thetas) {
    std::vector<double> logs(boundary_grid);
    for (std::size_t j = 0; j < boundary_grid; ++j) {
      cplx xi = std::polar(1.0, kTwoPi * static_cast<double>(j) / static_cast<double>(boundary_grid));
      double a = std::abs(det_theta(t, xi));
      double l = a > 0.0 ? std::log(a) : -std::numeric_limits<double>::infinity();
      if (l < -1e-10) ++mult[j];
      logs[j] = std::min(0.0, std::max(l, floor));
    }
    outers.emplace_back(logs);
  }
  for (int m : mult) rep.boundary_multiplicity = std::max(rep.boundary_multiplicity, m);
  rep.multiplicity_ok = rep.boundary_multiplicity <= d_star;
  rep.outer_bound = 2.0 * d_star * (-log_eps_prime);
  for (cplx z : z_grid) {
    double det_sum = 0.0, outer_sum = 0.0, b_sum = 0.0;
    int covered = 0;
    for (std::size_t n = 0; n < thetas.size(); ++n) {
      double det_abs = std::abs(det_theta(thetas[n], z));
      double log_h = std::min(0.0, outers[n].log_abs(z));
      double h2 = std::exp(2.0 * log_h);
      double b = blaschke_abs(blaschke[n], z);
      double log_bn = b > 0.0 ? static_cast<double>(n_pow) * std::log(b) : -std::numeric_limits<double>::infinity();
      double b2n = std::exp(2.0 * log_bn);
      det_sum += 1.0 - det_abs * det_abs;
      outer_sum += -std::expm1(2.0 * log_h);
      b_sum += 1.0 - b * b;
      if (!product_inequality_holds({h2, b2n}) || !(-std::expm1(2.0 * log_bn) <= static_cast<double>(n_pow) * (1.0 - b * b) + 1e-12))
        rep.algebra_ok = false;
      bool inside = n < regions.size() && regions[n] != nullptr && regions[n]->contains(z);
      if (inside) ++covered;
      if (n < regions.size() && regions[n] != nullptr && !inside && log_h + log_bn > std::log(det_abs) + 1e-9)
        ++rep.premise_violations;
    }
    rep.covering_count = std::max(rep.covering_count, covered);
    rep.worst_outer_sum = std::max(rep.worst_outer_sum, outer_sum);
    if (outer_sum > rep.outer_bound + 1e-6) rep.outer_ok = false;
    double rhs = outer_sum + static_cast<double>(n_pow) * b_sum + rep.d;
    rep.worst_assembled_margin = std::min(rep.worst_assembled_margin, rhs - det_sum);
    if (det_sum > rhs + 1e-9) rep.assembled_ok = false;
  }
  return rep;
}

/// Empirical CV(delta): max orthogonalizer condition over random kernel systems whose
/// uniform minimality constant prod |b_mu(lambda)| is at least delta.
inline double estimate_cv(double delta, int trials, std::uint64_t seed, int max_points = 8) {
  if (!(delta > 0.0 && delta <= 1.0)) throw DomainError("estimate_cv: delta must lie in (0,1]");
  std::mt19937_64 rng(seed);
  std::uniform_real_distribution<double> u(0.0, 1.0);
  double worst = 1.0;
  int done = 0, attempts = 0;
  while (done < trials && attempts < 200 * trials) {
    ++attempts;
    int n = 2 + static_cast<int>(u(rng) * (max_points - 1));
    std::vector<cplx> pts;
    for (int i = 0; i < n; ++i) pts.push_back(std::polar(0.95 * std::sqrt(u(rng)), kTwoPi * u(rng)));
    if (interpolation_constants(pts).delta < delta) continue;
    worst = std::max(worst, orthogonalizer_condition(SubspaceSystem::kernels(pts)));
    ++done;
  }
  return worst;
}

struct EpsilonChoice {
  double c_alpha = 1.0;  // measured max orthogonalizer condition of the kernel systems of sigma_n
  double cv = 1.0;
  double delta = 1.0;
  double lhs = 0.0;      // eps C(alpha) CV(delta/2)
  double rhs = 0.0;      // delta / 10
  bool ok = false;
};

inline EpsilonChoice validate_epsilon_choice(const PointSystem& ps, double cv_half_delta, double delta) {
  EpsilonChoice out;
  out.cv = cv_half_delta;
  out.delta = delta;
  for (const auto& e : ps.entries)
    if (e.sigma.size() >= 1) out.c_alpha = std::max(out.c_alpha, orthogonalizer_condition(SubspaceSystem::kernels(e.sigma)));
  out.lhs = ps.eps * out.c_alpha * cv_half_delta;
  out.rhs = delta / 10.0;
  out.ok = out.lhs < out.rhs;
  return out;
}

}  // namespace carleson_kit
