#pragma once

// Carleson contours for bounded analytic functions |phi| <= 1 given by
//   phi = (Blaschke product over zeros) * exp(-sum_k m_k (xi_k + z)/(xi_k - z)) * outer,
// where the outer factor has a piecewise-constant boundary log-modulus on equal cells.
// Measures on the circle are in units of normalized Lebesgue measure m, and arc lengths
// compared against them are normalized (|J| / 2pi).

#include <algorithm>
#include <cmath>
#include <limits>
#include <map>
#include <optional>
#include <random>
#include <unordered_map>
#include <vector>

#include "carleson_kit/carleson.hpp"
#include "carleson_kit/core.hpp"
#include "carleson_kit/disk.hpp"

namespace carleson_kit {

struct SingularAtom {
  double angle;
  double mass;
};

/// Harmonic measure at z of the arc [t1, t2] (t2 - t1 < 2pi).
inline double arc_harmonic_measure(cplx z, double t1, double t2) {
  cplx a = std::polar(1.0, t1) - z;
  cplx b = std::polar(1.0, t2) - z;
  double ang = std::arg(b / a);
  if (ang < 0.0) ang += kTwoPi;
  return ang / kPi - (t2 - t1) / kTwoPi;
}

inline double poisson_kernel(cplx z, cplx xi) { return (1.0 - std::norm(z)) / std::norm(1.0 - std::conj(xi) * z); }

class ContractiveFunction {
 public:
  ContractiveFunction() = default;
  ContractiveFunction(std::vector<cplx> zeros, std::vector<SingularAtom> singular = {}, std::vector<double> log_modulus_cells = {})
      : zeros_(std::move(zeros)), singular_(std::move(singular)), cells_(std::move(log_modulus_cells)) {
    for (cplx z : zeros_) require_interior(z, "ContractiveFunction");
    for (const auto& s : singular_)
      if (!(s.mass >= 0.0)) throw DomainError("ContractiveFunction: singular masses must be >= 0");
    for (double l : cells_) {
      if (!std::isfinite(l)) throw DomainError("ContractiveFunction: boundary modulus must be positive");
      if (l > 1e-8) throw DomainError("ContractiveFunction: boundary modulus exceeds 1");
    }
    for (double& l : cells_) l = std::min(l, 0.0);
  }

  static ContractiveFunction blaschke(std::vector<cplx> zeros) { return ContractiveFunction(std::move(zeros)); }

  const std::vector<cplx>& zeros() const { return zeros_; }
  const std::vector<SingularAtom>& singular() const { return singular_; }
  const std::vector<double>& log_modulus_cells() const { return cells_; }

  double cell_start(std::size_t j) const { return kTwoPi * static_cast<double>(j) / static_cast<double>(cells_.size()); }
  double cell_width() const { return kTwoPi / static_cast<double>(cells_.size()); }

  /// log|phi(z)| minus the Blaschke part: a nonpositive harmonic function.
  double nonblaschke_log_abs(cplx z) const {
    double u = 0.0;
    for (const auto& s : singular_) u -= s.mass * poisson_kernel(z, std::polar(1.0, s.angle));
    for (std::size_t j = 0; j < cells_.size(); ++j)
      if (cells_[j] != 0.0) u += cells_[j] * arc_harmonic_measure(z, cell_start(j), cell_start(j) + cell_width());
    return std::min(u, 0.0);
  }

  double log_abs(cplx z) const {
    double s = nonblaschke_log_abs(z);
    for (cplx a : zeros_) s += std::log(pseudo_hyperbolic_unchecked(a, z));
    return s;
  }

  double min_pseudo_distance_to_zeros(cplx z) const {
    double best = 1.0;
    for (cplx a : zeros_) best = std::min(best, pseudo_hyperbolic_unchecked(a, z));
    return best;
  }

  /// sup of log|phi| over all z with |b_c(z)| <= rho (Schwarz-Pick per factor, Harnack on the rest).
  double log_abs_upper_bound(cplx c, double rho) const {
    double s = 0.0;
    for (cplx a : zeros_) {
      double d = pseudo_hyperbolic_unchecked(a, c);
      s += std::log(std::min(1.0, (d + rho) / (1.0 + d * rho)));
    }
    return s + nonblaschke_log_abs(c) * (1.0 - rho) / (1.0 + rho);
  }

 private:
  std::vector<cplx> zeros_;
  std::vector<SingularAtom> singular_;
  std::vector<double> cells_;
};

struct ZeroAtom {
  cplx point;
  double weight;
};

/// nu = mu + (1/2) sum (1 - |lambda_n|^2) delta_{lambda_n}.
struct RepresentingMeasure {
  std::vector<ZeroAtom> zero_atoms;
  std::vector<SingularAtom> singular_atoms;
  std::vector<double> ac_density;  // -log|phi| per equal boundary cell

  double cell_width() const { return kTwoPi / static_cast<double>(ac_density.size()); }

  double total_mass() const {
    double s = 0.0;
    for (const auto& a : zero_atoms) s += a.weight;
    for (const auto& a : singular_atoms) s += a.mass;
    for (double d : ac_density) s += d / static_cast<double>(ac_density.size());
    return s;
  }

  bool has_atoms_in(const CarlesonSquare& q) const {
    for (const auto& a : zero_atoms)
      if (q.contains(a.point)) return true;
    for (const auto& a : singular_atoms)
      if (a.mass > 0.0 && q.base.contains_angle(a.angle)) return true;
    return false;
  }

  /// nu(Q(J)) for the closed square over J.
  double mass_of_square(const Arc& j) const {
    CarlesonSquare q{j, true};
    double s = 0.0;
    for (const auto& a : zero_atoms)
      if (q.contains(a.point)) s += a.weight;
    for (const auto& a : singular_atoms)
      if (j.contains_angle(a.angle)) s += a.mass;
    if (!ac_density.empty()) {
      double w = cell_width();
      for (std::size_t c = 0; c < ac_density.size(); ++c) {
        if (ac_density[c] == 0.0) continue;
        s += ac_density[c] * overlap(j, w * static_cast<double>(c), w) / kTwoPi;
      }
    }
    return s;
  }

  double density_sup_on(const Arc& j) const {
    double best = 0.0;
    if (ac_density.empty()) return best;
    double w = cell_width();
    for (std::size_t c = 0; c < ac_density.size(); ++c)
      if (overlap(j, w * static_cast<double>(c), w) > 0.0) best = std::max(best, ac_density[c]);
    return best;
  }

  /// Euclidean length of J intersected with [start, start + width].
  static double overlap(const Arc& j, double start, double width) {
    if (j.is_full()) return width;
    double js = j.start();
    double total = 0.0;
    for (int shift = -1; shift <= 1; ++shift) {
      double a = js + shift * kTwoPi;
      double lo = std::max(a, start);
      double hi = std::min(a + j.length, start + width);
      if (hi > lo) total += hi - lo;
    }
    return total;
  }
};

inline RepresentingMeasure representing_measure(const ContractiveFunction& phi) {
  RepresentingMeasure nu;
  for (cplx z : phi.zeros()) nu.zero_atoms.push_back({z, 0.5 * (1.0 - std::norm(z))});
  nu.singular_atoms = phi.singular();
  for (double l : phi.log_modulus_cells()) nu.ac_density.push_back(-l);
  return nu;
}

/// int (1 - |z|^2) / |1 - conj(xi) z|^2 dnu(xi).
inline double poisson_potential(const RepresentingMeasure& nu, cplx z) {
  require_interior(z, "poisson_potential");
  double s = 0.0;
  for (const auto& a : nu.zero_atoms) s += a.weight * poisson_kernel(z, a.point);
  for (const auto& a : nu.singular_atoms) s += a.mass * poisson_kernel(z, std::polar(1.0, a.angle));
  if (!nu.ac_density.empty()) {
    double w = nu.cell_width();
    for (std::size_t c = 0; c < nu.ac_density.size(); ++c)
      if (nu.ac_density[c] != 0.0)
        s += nu.ac_density[c] * arc_harmonic_measure(z, w * static_cast<double>(c), w * static_cast<double>(c + 1));
  }
  return s;
}

namespace detail {

/// Closed arcs [a.start, a.start + a.length] and the same for b meet.
inline bool arcs_meet(const Arc& a, const Arc& b) {
  if (a.is_full() || b.is_full()) return true;
  double d = wrap_angle(b.start() - a.start());
  if (d <= a.length + 1e-15) return true;
  double e = wrap_angle(a.start() - b.start());
  return e <= b.length + 1e-15;
}

inline bool arc_inside(const Arc& inner, const Arc& outer) {
  if (outer.is_full()) return true;
  if (inner.is_full()) return false;
  double d = wrap_angle(inner.start() - outer.start());
  if (d > kTwoPi - 1e-12 * kTwoPi) d -= kTwoPi;  // starts equal up to rounding
  if (d < -1e-12 * kTwoPi || d > outer.length) return false;
  return d + inner.length <= outer.length * (1.0 + 1e-15);
}

}  // namespace detail

struct BadIntervalSelection {
  std::vector<DyadicArc> selected;  // maximal bad dyadic arcs J_k (pairwise disjoint)
  std::vector<Arc> components;      // I_k: components of (union 5 J_k) within 5I
  double selected_length = 0.0;     // sum |J_k| (Euclidean)
  double component_length = 0.0;   // sum |I_k| (Euclidean)
  bool truncated = false;
};

/// Maximal dyadic subarcs J of 5I with nu(Q(J)) > M |J|_norm, and the components of their 5J dilates.
inline BadIntervalSelection select_bad_intervals(const RepresentingMeasure& nu, const Arc& base, double m, int depth_floor) {
  if (!(m > 0.0)) throw DomainError("select_bad_intervals: M must be positive");
  base.validate();
  Arc five = base.scaled(5.0);
  BadIntervalSelection out;
  int j0 = 0;
  while (j0 < depth_floor && kTwoPi / std::ldexp(1.0, j0) > five.length * (1.0 + 1e-15)) ++j0;
  std::vector<DyadicArc> stack;
  std::uint64_t count = std::uint64_t{1} << j0;
  for (std::uint64_t k = count; k-- > 0;) {
    DyadicArc a{j0, k};
    if (detail::arcs_meet(a.arc(), five)) stack.push_back(a);
  }
  while (!stack.empty()) {
    DyadicArc a = stack.back();
    stack.pop_back();
    Arc arc = a.arc();
    bool inside = detail::arc_inside(arc, five);
    if (inside) {
      if (nu.mass_of_square(arc) > m * arc.normalized_length()) {
        out.selected.push_back(a);
        continue;
      }
      // Nothing below can be heavy: no atoms and density at most M.
      if (!nu.has_atoms_in(CarlesonSquare{arc, true}) && nu.density_sup_on(arc) <= m) continue;
    }
    if (a.depth >= depth_floor) {
      if (inside) out.truncated = true;
      continue;
    }
    for (int c = 1; c >= 0; --c) {
      DyadicArc ch = a.child(c);
      if (detail::arcs_meet(ch.arc(), five)) stack.push_back(ch);
    }
  }
  std::sort(out.selected.begin(), out.selected.end(), [](const DyadicArc& x, const DyadicArc& y) {
    return x.start() != y.start() ? x.start() < y.start() : x.depth < y.depth;
  });
  // Components of the union of 5 J_k, intersected with 5I, on the unwrapped coordinate t in [0, |5I|].
  double origin = five.is_full() ? 0.0 : five.start();
  double span = five.length;
  std::vector<std::pair<double, double>> pieces;
  for (const auto& j : out.selected) {
    out.selected_length += j.length();
    Arc d = j.arc().scaled(5.0);
    if (d.is_full()) {
      pieces.push_back({0.0, span});
      continue;
    }
    double s = wrap_angle(d.start() - origin);
    for (int shift = -1; shift <= 1; ++shift) {
      double lo = std::max(0.0, s + shift * kTwoPi);
      double hi = std::min(span, s + shift * kTwoPi + d.length);
      if (hi > lo) pieces.push_back({lo, hi});
    }
  }
  std::sort(pieces.begin(), pieces.end());
  std::vector<std::pair<double, double>> merged;
  for (const auto& p : pieces) {
    if (!merged.empty() && p.first <= merged.back().second) merged.back().second = std::max(merged.back().second, p.second);
    else merged.push_back(p);
  }
  if (five.is_full() && merged.size() > 1 && merged.front().first <= 0.0 && merged.back().second >= kTwoPi) {
    merged.front().first = merged.back().first - kTwoPi;
    merged.pop_back();
  }
  for (const auto& p : merged) {
    double len = std::min(kTwoPi, p.second - p.first);
    out.components.push_back(Arc::from_start(origin + p.first, len));
    out.component_length += len;
  }
  return out;
}

struct ContourConstants {
  double c1 = 8.0;
  double c2 = 8.0;
  double c3 = 8.0;

  double m(double eps) const { return 100.0 * c1 * std::log(1.0 / eps); }
  double gamma(double eps) const {
    double l = std::log(1.0 / eps);
    return std::min(eps, 1.0 / (2.0 * c3 * (m(eps) + l)));
  }
  /// log eps' = -C2 log(1/gamma) (M + log(1/eps)); eps' itself underflows for default constants.
  double log_eps_prime(double eps) const {
    double l = std::log(1.0 / eps);
    return -c2 * std::log(1.0 / gamma(eps)) * (m(eps) + l);
  }
};

struct ContourOptions {
  int depth_floor = 20;
  int initial_cells = 4;
  int refine_levels = 6;
  int max_generations = 16;
  double resolution = 1.0 / 4096.0;
};

/// Local region O(I) over a witness arc I in D(J).
struct LocalRegion {
  DyadicArc arc;
  std::vector<Arc> bad;              // I_k
  std::vector<std::size_t> zero_ids;  // zeros in Q(2I)
  double bad_length = 0.0;            // sum |I_k|
  double selected_length = 0.0;       // sum |J_k|
  bool bad_truncated = false;
};

struct GenerationInterval {
  Arc arc;
  std::unordered_map<std::uint64_t, std::size_t> witnesses;  // dyadic key -> index into Region::locals
  std::vector<DyadicArc> truncated;
  int undetermined_boxes = 0;
};

struct WitnessStats {
  long boxes = 0;
  long cells = 0;
  int undetermined = 0;
};

/// Decides whether the top Whitney box of a dyadic arc contains a point with log|phi| >= log_eps.
/// A box is declared witness-free only when certified by upper bounds on every cell.
inline bool top_box_has_witness(const ContractiveFunction& phi, const DyadicArc& a, double log_eps, const ContourOptions& opt,
                                WitnessStats& stats) {
  ++stats.boxes;
  double r0 = a.depth == 0 ? 0.0 : 1.0 - std::ldexp(1.0, -a.depth);
  double r1 = 1.0 - std::ldexp(1.0, -(a.depth + 1));
  double t0 = a.start();
  double t1 = a.end();
  struct Cell {
    double r0, r1, t0, t1;
    int level;
  };
  std::vector<Cell> stack;
  int n = opt.initial_cells;
  for (int i = n - 1; i >= 0; --i)
    for (int k = n - 1; k >= 0; --k)
      stack.push_back({r0 + (r1 - r0) * i / n, r0 + (r1 - r0) * (i + 1) / n, t0 + (t1 - t0) * k / n, t0 + (t1 - t0) * (k + 1) / n, 0});
  while (!stack.empty()) {
    Cell c = stack.back();
    stack.pop_back();
    ++stats.cells;
    double rm = 0.5 * (c.r0 + c.r1);
    double tm = 0.5 * (c.t0 + c.t1);
    cplx center = std::polar(rm, tm);
    if (phi.log_abs(center) >= log_eps) return true;
    double half = std::sqrt(0.25 * (c.r1 - c.r0) * (c.r1 - c.r0) + 0.25 * (c.r1 * (c.t1 - c.t0)) * (c.r1 * (c.t1 - c.t0)));
    double rho = half / (1.0 - c.r1 * c.r1);
    if (rho < 1.0 && phi.log_abs_upper_bound(center, rho) < log_eps) continue;
    if (c.level >= opt.refine_levels) {
      ++stats.undetermined;
      return true;
    }
    double rmid = rm, tmid = tm;
    for (int i = 1; i >= 0; --i)
      for (int k = 1; k >= 0; --k)
        stack.push_back({i ? rmid : c.r0, i ? c.r1 : rmid, k ? tmid : c.t0, k ? c.t1 : tmid, c.level + 1});
  }
  return false;
}

struct ContourReport {
  double eps = 0.0;
  double gamma = 0.0;
  double m = 0.0;
  double log_eps_prime = 0.0;
  int generations = 0;
  std::vector<int> intervals_per_generation;
  std::vector<int> witnesses_per_generation;
  double worst_child_mass_ratio = 0.0;  // max over I of sum|I_k| / |I|
  double worst_bad_length_ratio = 0.0;    // max of sum|I_k| / (C1 log(1/eps) M^-1 |I|)
  bool child_mass_bound_ok = true;
  bool truncated = false;
  int undetermined_boxes = 0;
  long witness_boxes_examined = 0;
  long witness_cells_examined = 0;
};

struct EuclideanCircle {
  cplx center;
  double radius;
};

class Region {
 public:
  std::vector<std::vector<GenerationInterval>> generations;
  std::vector<LocalRegion> locals;
  std::vector<cplx> zeros;
  std::vector<EuclideanDisk> disks;  // per zero, {|b_zero| < gamma}
  double gamma = 0.0;
  int depth_floor = 20;

  bool empty() const {
    for (const auto& g : generations)
      for (const auto& j : g)
        if (complement_nonempty(j)) return false;
    for (const auto& l : locals)
      if (!l.zero_ids.empty()) return false;
    return true;
  }

  bool contains(cplx z) const {
    if (!(std::abs(z) < 1.0)) return false;
    double r = std::abs(z);
    double theta = angle_of(z);
    for (const auto& gen : generations) {
      for (const auto& j : gen) {
        if (!CarlesonSquare{j.arc, true}.contains(z)) continue;
        const LocalRegion* local = nullptr;
        for (int d = 0; d <= depth_floor; ++d) {
          if (r < 1.0 - std::ldexp(1.0, -d)) break;
          auto it = j.witnesses.find(DyadicArc::containing(theta, d).key());
          if (it != j.witnesses.end()) {
            local = &locals[it->second];
            break;
          }
        }
        if (local == nullptr) return true;
        if (in_local(*local, z)) return true;
      }
    }
    return false;
  }

  bool in_local(const LocalRegion& l, cplx z) const {
    for (const auto& b : l.bad)
      if (CarlesonSquare{b, true}.contains(z)) return false;
    for (std::size_t id : l.zero_ids)
      if (disks[id].contains(z)) return true;
    return false;
  }

  /// Copy whose zero disks are scaled by a factor in pseudo-hyperbolic radius (negative controls).
  Region with_gamma(double g) const {
    Region out = *this;
    out.gamma = g;
    for (std::size_t i = 0; i < zeros.size(); ++i) out.disks[i] = pseudo_hyperbolic_disk(zeros[i], g);
    return out;
  }

 private:
  static bool complement_nonempty(const GenerationInterval& j) {
    // The complement of the witness squares inside Q(J) is empty only if a witness
    // arc covers J entirely.
    if (j.witnesses.empty()) return true;
    for (const auto& [key, idx] : j.witnesses) {
      (void)idx;
      int depth = static_cast<int>(key >> 58);
      std::uint64_t index = key & ((std::uint64_t{1} << 58) - 1);
      if (detail::arc_inside(j.arc, DyadicArc{depth, index}.arc()) &&
          DyadicArc{depth, index}.normalized_length() >= j.arc.normalized_length())
        return false;
    }
    return true;
  }
};

namespace detail {

inline std::vector<DyadicArc> cover_arcs(const Arc& j) {
  if (j.is_full()) return {{0, 0}};
  int l = 0;
  while (l < 58 && kTwoPi / std::ldexp(1.0, l + 1) >= j.length) ++l;
  std::vector<DyadicArc> out;
  std::uint64_t n = std::uint64_t{1} << l;
  auto first = DyadicArc::containing(j.start(), l).index;
  for (std::uint64_t c = 0; c < n; ++c) {
    DyadicArc a{l, (first + n - 1 + c) % n};
    if (arcs_meet(a.arc(), j)) out.push_back(a);
    if (c > 4) break;
  }
  return out;
}

}  // namespace detail

struct ContourResult {
  Region region;
  std::vector<std::vector<cplx>> polylines;
  double log_eps_prime = 0.0;
  ContourReport report;

  CurveMeasure curve() const {
    std::vector<Segment> segs;
    for (const auto& p : polylines)
      for (std::size_t i = 0; i + 1 < p.size(); ++i) segs.push_back({p[i], p[i + 1]});
    return CurveMeasure(std::move(segs));
  }
};

std::vector<std::vector<cplx>> extract_boundary(const Region& region, double resolution);

/// Generations of intervals, witness sets D(J), bad intervals and local regions.
inline ContourResult bourgain_contour(const ContractiveFunction& phi, double eps, const ContourConstants& k = {},
                                      const ContourOptions& opt = {}) {
  if (!(eps > 0.0 && eps < 1.0)) throw DomainError("bourgain_contour: eps must lie in (0,1)");
  ContourResult res;
  auto& rep = res.report;
  rep.eps = eps;
  rep.m = k.m(eps);
  rep.gamma = k.gamma(eps);
  rep.log_eps_prime = k.log_eps_prime(eps);
  res.log_eps_prime = rep.log_eps_prime;
  Region& region = res.region;
  region.zeros = phi.zeros();
  region.gamma = rep.gamma;
  region.depth_floor = opt.depth_floor;
  for (cplx z : region.zeros) region.disks.push_back(pseudo_hyperbolic_disk(z, rep.gamma));
  RepresentingMeasure nu = representing_measure(phi);
  double log_eps = std::log(eps);
  double bad_length_factor = k.c1 * std::log(1.0 / eps) / rep.m;
  WitnessStats stats;

  std::vector<Arc> current{Arc{0.0, kTwoPi}};
  for (int s = 0; s < opt.max_generations && !current.empty(); ++s) {
    std::vector<GenerationInterval> gen;
    std::vector<Arc> next;
    int witnesses = 0;
    for (const Arc& j : current) {
      GenerationInterval gi;
      gi.arc = j;
      std::vector<DyadicArc> stack = detail::cover_arcs(j);
      std::reverse(stack.begin(), stack.end());
      int before = stats.undetermined;
      while (!stack.empty()) {
        DyadicArc a = stack.back();
        stack.pop_back();
        if (top_box_has_witness(phi, a, log_eps, opt, stats)) {
          LocalRegion local;
          local.arc = a;
          auto sel = select_bad_intervals(nu, a.arc(), rep.m, opt.depth_floor);
          local.bad = sel.components;
          local.bad_length = sel.component_length;
          local.selected_length = sel.selected_length;
          local.bad_truncated = sel.truncated;
          CarlesonSquare q2{a.arc().scaled(2.0), true};
          for (std::size_t i = 0; i < region.zeros.size(); ++i)
            if (q2.contains(region.zeros[i])) local.zero_ids.push_back(i);
          double ratio = local.bad_length / a.length();
          rep.worst_child_mass_ratio = std::max(rep.worst_child_mass_ratio, ratio);
          rep.worst_bad_length_ratio = std::max(rep.worst_bad_length_ratio, ratio / bad_length_factor);
          if (local.bad_length > a.length() / 100.0) rep.child_mass_bound_ok = false;
          if (sel.truncated) rep.truncated = true;
          for (const auto& b : local.bad) next.push_back(b);
          gi.witnesses[a.key()] = region.locals.size();
          region.locals.push_back(std::move(local));
          ++witnesses;
          continue;
        }
        if (a.depth >= opt.depth_floor) {
          gi.truncated.push_back(a);
          rep.truncated = true;
          continue;
        }
        for (int c = 1; c >= 0; --c) {
          DyadicArc ch = a.child(c);
          if (detail::arcs_meet(ch.arc(), j)) stack.push_back(ch);
        }
      }
      gi.undetermined_boxes = stats.undetermined - before;
      gen.push_back(std::move(gi));
    }
    rep.intervals_per_generation.push_back(static_cast<int>(gen.size()));
    rep.witnesses_per_generation.push_back(witnesses);
    region.generations.push_back(std::move(gen));
    current = std::move(next);
  }
  if (!current.empty()) rep.truncated = true;
  rep.generations = static_cast<int>(region.generations.size());
  rep.undetermined_boxes = stats.undetermined;
  rep.witness_boxes_examined = stats.boxes;
  rep.witness_cells_examined = stats.cells;
  res.polylines = extract_boundary(region, opt.resolution);
  return res;
}

namespace detail {

struct RadialPiece {
  double angle;
  double r0, r1;
};
struct ArcPiece {
  double radius;
  double t0, t1;  // unwrapped, t1 - t0 <= 2pi
};

inline void add_square_edges(const Arc& a, std::vector<RadialPiece>& radial, std::vector<ArcPiece>& arcs) {
  double r0 = std::max(0.0, 1.0 - a.normalized_length());
  if (!a.is_full()) {
    radial.push_back({wrap_angle(a.start()), r0, 1.0});
    radial.push_back({wrap_angle(a.start() + a.length), r0, 1.0});
  }
  if (r0 > 0.0) {
    double s = a.is_full() ? 0.0 : wrap_angle(a.start());
    arcs.push_back({r0, s, s + std::min(a.length, kTwoPi)});
  }
}

template <class T, class Key, class Lo, class Hi, class Make>
std::vector<T> merge_by(std::vector<T> v, Key key, Lo lo, Hi hi, Make make) {
  std::sort(v.begin(), v.end(), [&](const T& a, const T& b) { return key(a) != key(b) ? key(a) < key(b) : lo(a) < lo(b); });
  std::vector<T> out;
  for (const auto& x : v) {
    if (!out.empty() && key(out.back()) == key(x) && lo(x) <= hi(out.back())) {
      out.back() = make(key(x), lo(out.back()), std::max(hi(out.back()), hi(x)));
    } else {
      out.push_back(x);
    }
  }
  return out;
}

inline std::vector<double> circle_circle(cplx c1, double r1, cplx c2, double r2) {
  // Angles on circle 1 of its intersections with circle 2.
  double d = std::abs(c2 - c1);
  if (d == 0.0 || d > r1 + r2 || d < std::abs(r1 - r2)) return {};
  double a = (r1 * r1 - r2 * r2 + d * d) / (2.0 * d);
  double h2 = r1 * r1 - a * a;
  if (h2 < 0.0) h2 = 0.0;
  double base = std::arg(c2 - c1);
  double off = std::atan2(std::sqrt(h2), a);
  return {wrap_angle(base + off), wrap_angle(base - off)};
}

inline bool angle_in(double t, double t0, double t1) {
  double d = wrap_angle(t - t0);
  return d <= t1 - t0;
}

}  // namespace detail

/// Boundary of the region inside the open disk. Candidate curves are the radial sides
/// and top arcs of every square used and the zero circles; they are split at all mutual
/// intersections and a sub-piece is kept when the region membership differs across it.
inline std::vector<std::vector<cplx>> extract_boundary(const Region& region, double resolution) {
  using namespace detail;
  std::vector<RadialPiece> radial;
  std::vector<ArcPiece> arcs;
  std::vector<EuclideanCircle> circles;
  std::vector<bool> circle_used(region.zeros.size(), false);
  for (const auto& gen : region.generations)
    for (const auto& j : gen) {
      add_square_edges(j.arc, radial, arcs);
      for (const auto& [key, idx] : j.witnesses) {
        const auto& l = region.locals[idx];
        add_square_edges(l.arc.arc(), radial, arcs);
        for (const auto& b : l.bad) add_square_edges(b, radial, arcs);
        for (std::size_t id : l.zero_ids) circle_used[id] = true;
        (void)key;
      }
    }
  for (std::size_t i = 0; i < region.zeros.size(); ++i)
    if (circle_used[i]) circles.push_back({region.disks[i].center, region.disks[i].radius});
  // Deterministic order regardless of hash-map iteration.
  radial = merge_by(
      radial, [](const RadialPiece& p) { return p.angle; }, [](const RadialPiece& p) { return p.r0; },
      [](const RadialPiece& p) { return p.r1; }, [](double k, double lo, double hi) { return RadialPiece{k, lo, hi}; });
  arcs = merge_by(
      arcs, [](const ArcPiece& p) { return p.radius; }, [](const ArcPiece& p) { return p.t0; },
      [](const ArcPiece& p) { return p.t1; }, [](double k, double lo, double hi) { return ArcPiece{k, lo, std::min(hi, lo + kTwoPi)}; });
  std::sort(circles.begin(), circles.end(), [](const EuclideanCircle& a, const EuclideanCircle& b) {
    return a.center.real() != b.center.real() ? a.center.real() < b.center.real() : a.center.imag() < b.center.imag();
  });

  std::vector<std::vector<double>> rad_bp(radial.size()), arc_bp(arcs.size()), circ_bp(circles.size());
  for (std::size_t i = 0; i < radial.size(); ++i) {
    const auto& rp = radial[i];
    cplx u = std::polar(1.0, rp.angle);
    for (std::size_t k = 0; k < arcs.size(); ++k) {
      const auto& ap = arcs[k];
      if (ap.radius >= rp.r0 && ap.radius <= rp.r1 && angle_in(rp.angle, ap.t0, ap.t1)) {
        rad_bp[i].push_back(ap.radius);
        arc_bp[k].push_back(wrap_angle(rp.angle - ap.t0) + ap.t0);
      }
    }
    for (std::size_t k = 0; k < circles.size(); ++k) {
      const auto& c = circles[k];
      double b = (std::conj(u) * c.center).real();
      double disc = b * b - (std::norm(c.center) - c.radius * c.radius);
      if (disc < 0.0) continue;
      for (double t : {b - std::sqrt(disc), b + std::sqrt(disc)}) {
        if (t < rp.r0 || t > rp.r1) continue;
        rad_bp[i].push_back(t);
        circ_bp[k].push_back(angle_of(t * u - c.center));
      }
    }
  }
  for (std::size_t i = 0; i < arcs.size(); ++i) {
    const auto& ap = arcs[i];
    for (std::size_t k = 0; k < circles.size(); ++k) {
      const auto& c = circles[k];
      for (double t : circle_circle(0.0, ap.radius, c.center, c.radius)) {
        if (!angle_in(t, ap.t0, ap.t1)) continue;
        arc_bp[i].push_back(wrap_angle(t - ap.t0) + ap.t0);
        circ_bp[k].push_back(angle_of(std::polar(ap.radius, t) - c.center));
      }
    }
  }
  for (std::size_t i = 0; i < circles.size(); ++i)
    for (std::size_t k = i + 1; k < circles.size(); ++k) {
      const auto& a = circles[i];
      const auto& b = circles[k];
      if (std::abs(a.center - b.center) > a.radius + b.radius) continue;
      for (double t : circle_circle(a.center, a.radius, b.center, b.radius)) {
        circ_bp[i].push_back(t);
        cplx p = a.center + std::polar(a.radius, t);
        circ_bp[k].push_back(angle_of(p - b.center));
      }
    }

  std::vector<std::vector<cplx>> out;
  const double rmax = 1.0 - 1e-12;
  auto crosses = [&](cplx m, cplx normal, double eta) {
    return region.contains(m + eta * normal) != region.contains(m - eta * normal);
  };
  for (std::size_t i = 0; i < radial.size(); ++i) {
    const auto& rp = radial[i];
    cplx u = std::polar(1.0, rp.angle);
    cplx normal = u * cplx(0.0, 1.0);
    auto bp = rad_bp[i];
    bp.push_back(rp.r0);
    bp.push_back(std::min(rp.r1, rmax));
    std::sort(bp.begin(), bp.end());
    for (std::size_t k = 0; k + 1 < bp.size(); ++k) {
      double a = bp[k], b = std::min(bp[k + 1], rmax);
      if (b - a <= 1e-15) continue;
      double mid = 0.5 * (a + b);
      double eta = 1e-7 * std::max(1e-12, std::min(b - a, 1.0 - mid));
      if (crosses(mid * u, normal, eta)) out.push_back({a * u, b * u});
    }
  }
  auto discretize = [&](cplx center, double radius, double t0, double t1) {
    double step = 2.0 * std::acos(1.0 - std::min(resolution, 0.5));
    int n = std::max(2, static_cast<int>(std::ceil((t1 - t0) / step)));
    std::vector<cplx> pts;
    for (int s = 0; s <= n; ++s) pts.push_back(center + std::polar(radius, t0 + (t1 - t0) * s / n));
    return pts;
  };
  for (std::size_t i = 0; i < arcs.size(); ++i) {
    const auto& ap = arcs[i];
    auto bp = arc_bp[i];
    bp.push_back(ap.t0);
    bp.push_back(ap.t1);
    std::sort(bp.begin(), bp.end());
    for (std::size_t k = 0; k + 1 < bp.size(); ++k) {
      double a = bp[k], b = bp[k + 1];
      if (b - a <= 1e-15) continue;
      double mid = 0.5 * (a + b);
      cplx m = std::polar(ap.radius, mid);
      double eta = 1e-7 * std::max(1e-12, std::min(ap.radius * (b - a), 1.0 - ap.radius));
      if (crosses(m, std::polar(1.0, mid), eta)) out.push_back(discretize(0.0, ap.radius, a, b));
    }
  }
  for (std::size_t i = 0; i < circles.size(); ++i) {
    const auto& c = circles[i];
    auto bp = circ_bp[i];
    std::sort(bp.begin(), bp.end());
    if (bp.empty()) bp.push_back(0.0);
    bp.push_back(bp.front() + kTwoPi);
    for (std::size_t k = 0; k + 1 < bp.size(); ++k) {
      double a = bp[k], b = bp[k + 1];
      if (b - a <= 1e-15) continue;
      double mid = 0.5 * (a + b);
      cplx dir = std::polar(1.0, mid);
      double eta = 1e-6 * c.radius * std::min(1.0, b - a);
      if (crosses(c.center + c.radius * dir, dir, eta)) out.push_back(discretize(c.center, c.radius, a, b));
    }
  }
  return out;
}

struct VerifyReport {
  int samples = 0;
  int upper_violations = 0;  // z in O with |phi(z)| > eps
  int lower_violations = 0;  // |phi(z)| < eps' with z outside O
  int points_in_region = 0;
  double contour_length = 0.0;
  double contour_carleson_norm = 0.0;
  double carleson_bound = 10.0;
  bool sandwich_ok = true;
  bool norm_ok = true;
};

/// Checks {|phi| < eps'} subset O subset {|phi| <= eps} on interior samples (random layer-uniform
/// points, the zeros, and probes around every zero disk), and the dyadic Carleson norm of the contour.
inline VerifyReport verify_region(const ContractiveFunction& phi, const Region& region,
                                  const std::vector<std::vector<cplx>>& polylines, double eps, double log_eps_prime,
                                  int samples, int depth, std::uint64_t seed) {
  VerifyReport rep;
  std::vector<cplx> pts;
  for (cplx z : phi.zeros()) pts.push_back(z);
  const double factors[] = {0.5, 0.9, 0.99, 1.01, 1.1, 1.5, 1.9, 2.5};
  for (const auto& d : region.disks) {
    for (double f : factors)
      for (int k = 0; k < 4; ++k) {
        cplx p = d.center + std::polar(d.radius * f, kTwoPi * (k + 0.125 * f) / 4.0);
        if (std::abs(p) < 1.0) pts.push_back(p);
      }
  }
  std::mt19937_64 rng(seed);
  std::uniform_real_distribution<double> unif(0.0, 1.0);
  while (static_cast<int>(pts.size()) < samples) {
    // Layer m with probability ~ 2^-m/2 weighting, uniform inside the layer.
    int m = 0;
    while (m < 16 && unif(rng) < 0.5) ++m;
    double lo = m == 0 ? 0.0 : 1.0 - std::ldexp(1.0, -m);
    double hi = 1.0 - std::ldexp(1.0, -(m + 1));
    pts.push_back(std::polar(lo + (hi - lo) * unif(rng), kTwoPi * unif(rng)));
  }
  double log_eps = std::log(eps);
  for (cplx z : pts) {
    bool in = region.contains(z);
    double l = phi.log_abs(z);
    if (in) ++rep.points_in_region;
    if (in && l > log_eps + 1e-12) ++rep.upper_violations;
    if (!in && l < log_eps_prime) ++rep.lower_violations;
  }
  rep.samples = static_cast<int>(pts.size());
  std::vector<Segment> segs;
  for (const auto& p : polylines)
    for (std::size_t i = 0; i + 1 < p.size(); ++i) segs.push_back({p[i], p[i + 1]});
  CurveMeasure curve(std::move(segs));
  rep.contour_length = curve.total_length();
  rep.contour_carleson_norm = carleson_norm(curve, depth);
  rep.sandwich_ok = rep.upper_violations == 0 && rep.lower_violations == 0;
  rep.norm_ok = rep.contour_carleson_norm <= rep.carleson_bound;
  return rep;
}

}  // namespace carleson_kit
