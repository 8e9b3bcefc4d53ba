#include <gtest/gtest.h>

#include <random>

#include "carleson_kit/contour.hpp"

using namespace carleson_kit;

namespace {

bool components_disjoint(const std::vector<Arc>& c) {
  for (std::size_t i = 0; i < c.size(); ++i)
    for (std::size_t j = i + 1; j < c.size(); ++j) {
      // touching endpoints are allowed
      Arc a = c[i], b = c[j];
      a.length *= 1.0 - 1e-9;
      b.length *= 1.0 - 1e-9;
      if (detail::arcs_meet(a, b)) return false;
    }
  return true;
}

}  // namespace

// ---- representing measure and potential ----

TEST(Potential, RepresentingMeasureOfSingleZero) {
  auto nu = representing_measure(ContractiveFunction::blaschke({cplx(0.5)}));
  ASSERT_EQ(nu.zero_atoms.size(), 1u);
  EXPECT_DOUBLE_EQ(nu.zero_atoms[0].weight, 0.375);
  EXPECT_TRUE(nu.singular_atoms.empty());
  EXPECT_TRUE(nu.ac_density.empty());
}

TEST(Potential, ConstantFunction) {
  const double c = 0.3;
  ContractiveFunction phi({}, {}, std::vector<double>(16, std::log(c)));
  auto nu = representing_measure(phi);
  for (double d : nu.ac_density) EXPECT_NEAR(d, std::log(1.0 / c), 1e-15);
  for (cplx z : {cplx(0.0), cplx(0.5, 0.2), cplx(-0.1, -0.9)}) {
    EXPECT_NEAR(poisson_potential(nu, z), std::log(1.0 / c), 1e-9);
    EXPECT_NEAR(phi.log_abs(z), std::log(c), 1e-9);
  }
}

TEST(Potential, TotalMassAtOrigin) {
  std::vector<double> cells(32);
  for (std::size_t i = 0; i < cells.size(); ++i) cells[i] = -0.1 * static_cast<double>(i % 5);
  ContractiveFunction phi({cplx(0.3, 0.4), cplx(-0.7)}, {{1.0, 0.2}}, cells);
  auto nu = representing_measure(phi);
  EXPECT_NEAR(poisson_potential(nu, 0.0), nu.total_mass(), 1e-12);
}

TEST(Potential, SingleZeroAtOrigin) {
  for (double l : {0.3, 0.7, 0.95}) {
    auto nu = representing_measure(ContractiveFunction::blaschke({cplx(l)}));
    double pot = poisson_potential(nu, 0.0);
    EXPECT_NEAR(pot, 0.5 * (1.0 - l * l), 1e-15);
    EXPECT_LE(pot, -std::log(l));
  }
}

TEST(Potential, TwoSidedBoundAtSeparatedPoints) {
  std::mt19937_64 rng(17);
  std::uniform_real_distribution<double> u(0, 1);
  const double eps = 0.1;
  int tested = 0;
  while (tested < 1000) {
    std::vector<cplx> zeros;
    for (int i = 0; i < 4; ++i) zeros.push_back(std::polar(0.95 * std::sqrt(u(rng)), kTwoPi * u(rng)));
    ContractiveFunction phi(zeros, {{kTwoPi * u(rng), 0.3 * u(rng)}}, std::vector<double>(16, -0.2 * u(rng)));
    auto nu = representing_measure(phi);
    cplx z = std::polar(0.99 * std::sqrt(u(rng)), kTwoPi * u(rng));
    if (phi.min_pseudo_distance_to_zeros(z) < eps) continue;
    ++tested;
    double pot = poisson_potential(nu, z);
    double ml = -phi.log_abs(z);
    EXPECT_LE(pot, ml + 1e-8);
    EXPECT_LE(ml, 2.0 * std::log(1.0 / eps) * pot + 1e-8);
  }
}

// With a single zero and |b(z)| = eps exactly, -log|phi| equals log(1/eps) while the potential is
// (1 - eps^2)/2, so the factor 2 log(1/eps) is short by 1/(1 - eps^2). The sharp factor is
// 2 log(1/eps)/(1 - eps^2).
TEST(Potential, UpperConstantIsSharpOnlyWithCorrection) {
  const double eps = 0.1;
  const cplx zero(0.5, 0.0);
  ContractiveFunction phi({zero});
  auto nu = representing_measure(phi);
  // b_zero(z) = -eps  <=>  z = (zero + eps) / (1 + zero eps) for real zero
  cplx z = (zero + eps) / (1.0 + std::conj(zero) * eps);
  ASSERT_NEAR(phi.min_pseudo_distance_to_zeros(z), eps, 1e-14);
  double pot = poisson_potential(nu, z);
  double ml = -phi.log_abs(z);
  EXPECT_NEAR(ml, std::log(1.0 / eps), 1e-12);
  EXPECT_NEAR(pot, 0.5 * (1.0 - eps * eps), 1e-12);
  EXPECT_GT(ml, 2.0 * std::log(1.0 / eps) * pot);
  double sharp = 2.0 * std::log(1.0 / eps) / (1.0 - eps * eps);
  EXPECT_NEAR(ml, sharp * pot, 1e-12);

  std::mt19937_64 rng(3);
  std::uniform_real_distribution<double> u(0, 1);
  for (int t = 0; t < 2000; ++t) {
    std::vector<cplx> zeros;
    for (int i = 0; i < 3; ++i) zeros.push_back(std::polar(0.9 * std::sqrt(u(rng)), kTwoPi * u(rng)));
    ContractiveFunction f(zeros, {{kTwoPi * u(rng), 0.2 * u(rng)}});
    // a point at pseudo-distance exactly eps from the first zero
    cplx b = std::polar(eps, kTwoPi * u(rng));
    cplx w = (zeros[0] - b) / (1.0 - std::conj(zeros[0]) * b);
    if (f.min_pseudo_distance_to_zeros(w) < eps - 1e-12) continue;
    EXPECT_LE(-f.log_abs(w), sharp * poisson_potential(representing_measure(f), w) + 1e-9);
  }
}

// ---- bad intervals ----

TEST(BadIntervals, EmptyMeasure) {
  RepresentingMeasure nu;
  auto sel = select_bad_intervals(nu, DyadicArc{3, 1}.arc(), 1.0, 20);
  EXPECT_TRUE(sel.selected.empty());
  EXPECT_TRUE(sel.components.empty());
  EXPECT_THROW(select_bad_intervals(nu, DyadicArc{3, 1}.arc(), 0.0, 20), DomainError);
}

TEST(BadIntervals, HeavyAtomThreshold) {
  DyadicArc base{2, 1};
  double theta = base.start() + 0.3 * base.length();
  double r = 1.0 - std::ldexp(1.0, -8);
  auto nu = representing_measure(ContractiveFunction::blaschke({std::polar(r, theta)}));
  // weight (1 - r^2)/2 is just under 2^-8, so nu(Q(J))/|J| peaks below 1 at depth 8
  EXPECT_TRUE(select_bad_intervals(nu, base.arc(), 10.0, 20).selected.empty());
  auto sel = select_bad_intervals(nu, base.arc(), 1e-3, 20);
  ASSERT_EQ(sel.components.size(), 1u);
  EXPECT_TRUE(sel.components[0].contains_angle(theta));
  EXPECT_LE(sel.component_length, 25.0 * sel.selected_length * (1.0 + 1e-12));
}

TEST(BadIntervals, ComponentsDisjointInsideFiveI) {
  std::mt19937_64 rng(21);
  std::uniform_real_distribution<double> u(0, 1);
  for (int t = 0; t < 20; ++t) {
    std::vector<cplx> zeros;
    for (int i = 0; i < 30; ++i) zeros.push_back(std::polar(1.0 - std::pow(10.0, -1.0 - 3.0 * u(rng)), kTwoPi * u(rng)));
    auto nu = representing_measure(ContractiveFunction::blaschke(zeros));
    Arc base = DyadicArc{3, static_cast<std::uint64_t>(t % 8)}.arc();
    auto sel = select_bad_intervals(nu, base, 0.05, 20);
    EXPECT_TRUE(components_disjoint(sel.components));
    for (const auto& c : sel.components) EXPECT_TRUE(detail::arc_inside(c, base.scaled(5.0)));
    for (std::size_t i = 0; i < sel.selected.size(); ++i)
      for (std::size_t j = i + 1; j < sel.selected.size(); ++j) {
        Arc a = sel.selected[i].arc(), b = sel.selected[j].arc();
        a.length *= 1.0 - 1e-9;
        b.length *= 1.0 - 1e-9;
        EXPECT_FALSE(detail::arcs_meet(a, b));
      }
    EXPECT_LE(sel.component_length, 25.0 * sel.selected_length * (1.0 + 1e-12));
  }
}

// ---- contour ----

TEST(Contour, OuterBoundedBelowGivesEmptyRegion) {
  ContractiveFunction phi({}, {}, std::vector<double>(8, std::log(0.5)));
  auto res = bourgain_contour(phi, 0.1);
  EXPECT_TRUE(res.region.empty());
  EXPECT_TRUE(res.polylines.empty());
  auto v = verify_region(phi, res.region, res.polylines, 0.1, res.log_eps_prime, 2000, 8, 1);
  EXPECT_TRUE(v.sandwich_ok);
  EXPECT_EQ(v.contour_carleson_norm, 0.0);
}

TEST(Contour, IdentityFunction) {
  ContractiveFunction phi = ContractiveFunction::blaschke({cplx(0.0)});
  auto res = bourgain_contour(phi, 0.1);
  EXPECT_FALSE(res.region.empty());
  EXPECT_TRUE(res.region.contains(0.0));
  EXPECT_TRUE(res.region.contains(cplx(0.0, 0.5 * res.region.gamma)));
  EXPECT_FALSE(res.region.contains(0.11));
  EXPECT_FALSE(res.polylines.empty());
  for (const auto& p : res.polylines)
    for (cplx z : p) EXPECT_LE(std::abs(z), 0.1 + 1e-9);
  auto v = verify_region(phi, res.region, res.polylines, 0.1, res.log_eps_prime, 10000, 10, 2);
  EXPECT_TRUE(v.sandwich_ok);
  EXPECT_TRUE(v.norm_ok);
  EXPECT_LE(v.contour_carleson_norm, 10.0);
}

TEST(Contour, SingularAtomSandwich) {
  ContractiveFunction phi({cplx(0.6, 0.3), cplx(-0.2, -0.85)}, {{0.5, 0.05}});
  const double eps = 0.1;
  auto res = bourgain_contour(phi, eps);
  EXPECT_GE(res.report.generations, 1);
  EXPECT_TRUE(res.report.child_mass_bound_ok);
  auto v = verify_region(phi, res.region, res.polylines, eps, res.log_eps_prime, 10000, 10, 3);
  EXPECT_EQ(v.upper_violations, 0);
  EXPECT_EQ(v.lower_violations, 0);
  EXPECT_TRUE(v.norm_ok);
}

TEST(Contour, EnlargedDisksAreDetected) {
  ContractiveFunction phi = ContractiveFunction::blaschke({cplx(0.0), cplx(0.5, 0.5)});
  const double eps = 0.1;
  auto res = bourgain_contour(phi, eps);
  auto bad = res.region.with_gamma(std::min(0.99, 2.0 * eps / 0.9 + 0.3));
  auto v = verify_region(phi, bad, res.polylines, eps, res.log_eps_prime, 5000, 8, 4);
  EXPECT_GT(v.upper_violations, 0);
  EXPECT_FALSE(v.sandwich_ok);
}

TEST(Contour, RejectsBadInput) {
  EXPECT_THROW(ContractiveFunction({}, {}, {0.5}), DomainError);
  EXPECT_THROW(ContractiveFunction({}, {{0.0, -1.0}}), DomainError);
  EXPECT_THROW(bourgain_contour(ContractiveFunction::blaschke({cplx(0.2)}), 1.0), DomainError);
}

TEST(Contour, DeterministicAcrossRuns) {
  ContractiveFunction phi = ContractiveFunction::blaschke({cplx(0.3, 0.2), cplx(-0.5, 0.6), cplx(0.9, 0.0)});
  auto a = bourgain_contour(phi, 0.05);
  auto b = bourgain_contour(phi, 0.05);
  ASSERT_EQ(a.polylines.size(), b.polylines.size());
  for (std::size_t i = 0; i < a.polylines.size(); ++i) EXPECT_EQ(a.polylines[i], b.polylines[i]);
}
