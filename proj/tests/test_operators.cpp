#include <gtest/gtest.h>

#include <random>

#include "carleson_kit/construction.hpp"
#include "carleson_kit/riesz.hpp"
#include "carleson_kit/weighted.hpp"

using namespace carleson_kit;

namespace {

Eigen::MatrixXcd column(std::initializer_list<cplx> v) {
  Eigen::MatrixXcd m(static_cast<Eigen::Index>(v.size()), 1);
  Eigen::Index i = 0;
  for (cplx x : v) m(i++, 0) = x;
  return m;
}

// Unit vectors u = e0, v = 0.6 e0 + 0.8 e1 in C^3.
SubspaceSystem two_vectors() { return SubspaceSystem::from_spanning({column({1, 0, 0}), column({0.6, 0.8, 0})}); }

SubspaceSystem orthogonal(int n) {
  std::vector<Eigen::MatrixXcd> spans;
  for (int i = 0; i < n; ++i) spans.push_back(Eigen::MatrixXcd::Identity(n, n).col(i));
  return SubspaceSystem::from_spanning(spans);
}

Eigen::MatrixXcd random_matrix(std::mt19937_64& rng, Eigen::Index r, Eigen::Index c) {
  std::normal_distribution<double> n;
  Eigen::MatrixXcd m(r, c);
  for (Eigen::Index i = 0; i < r; ++i)
    for (Eigen::Index j = 0; j < c; ++j) m(i, j) = cplx(n(rng), n(rng));
  return m;
}

}  // namespace

// ---- subspace systems ----

TEST(Riesz, OrthogonalSystem) {
  auto sys = orthogonal(4);
  EXPECT_NEAR(orthogonalizer_condition(sys), 1.0, 1e-12);
  EXPECT_NEAR(uniform_minimality(sys), 1.0, 1e-12);
  EXPECT_NEAR(embedding_norm(sys), 1.0, 1e-12);
  EXPECT_NEAR(skew_projection_norm(sys, {0, 2}), 1.0, 1e-12);
  auto dual = dual_system(sys);
  for (std::size_t n = 0; n < sys.size(); ++n)
    EXPECT_NEAR(std::abs((dual.frames()[n].adjoint() * sys.frames()[n])(0, 0)), 1.0, 1e-12);
  EXPECT_FALSE(extract_critical_subset(sys, 0.5).has_value());
}

TEST(Riesz, TwoVectors) {
  auto sys = two_vectors();
  EXPECT_NEAR(orthogonalizer_condition(sys), 2.0, 1e-12);
  EXPECT_NEAR(uniform_minimality(sys), 0.8, 1e-12);
  EXPECT_NEAR(skew_projection_norm(sys, {1}), 1.25, 1e-12);
  // dual vector of u is orthogonal to v
  auto dual = dual_system(sys);
  Eigen::VectorXcd u_dual = dual.frames()[0].col(0);
  Eigen::VectorXcd expect(3);
  expect << 0.8, -0.6, 0.0;
  EXPECT_NEAR(std::abs(u_dual.dot(expect)), 1.0, 1e-12);
}

TEST(Riesz, SingleSubspace) {
  auto sys = SubspaceSystem::from_spanning({column({1, 2, 3})});
  EXPECT_EQ(uniform_minimality(sys), 1.0);
}

TEST(Riesz, KernelPair) {
  auto sys = SubspaceSystem::kernels({0.0, 0.5});
  double a = std::sqrt(0.75);
  EXPECT_NEAR(orthogonalizer_condition(sys), std::sqrt((1.0 + a) / (1.0 - a)), 1e-10);
  EXPECT_NEAR(skew_projection_norm(sys, {0}), 2.0, 1e-10);
  EXPECT_NEAR(uniform_minimality(sys), 0.5, 1e-10);
}

TEST(Riesz, ProjectionIdentityAgainstFormula) {
  std::mt19937_64 rng(5);
  std::uniform_real_distribution<double> u(0, 1);
  for (int t = 0; t < 20; ++t) {
    std::vector<cplx> pts;
    while (pts.size() < 6) {
      cplx z = std::polar(0.9 * std::sqrt(u(rng)), kTwoPi * u(rng));
      bool ok = true;
      for (cplx w : pts) ok = ok && pseudo_hyperbolic(z, w) > 0.2;
      if (ok) pts.push_back(z);
    }
    auto sys = SubspaceSystem::kernels(pts);
    for (std::size_t i = 0; i < pts.size(); ++i)
      EXPECT_NEAR(skew_projection_norm(sys, {i}) / projection_norm_formula(pts, pts[i]), 1.0, 1e-8);
  }
}

TEST(Riesz, DualMinimality) {
  std::mt19937_64 rng(6);
  for (int t = 0; t < 10; ++t) {
    std::vector<Eigen::MatrixXcd> spans;
    for (int k = 0; k < 4; ++k) spans.push_back(random_matrix(rng, 10, 2));
    auto sys = SubspaceSystem::from_spanning(spans);
    EXPECT_GT(uniform_minimality(sys), 0.0);
    EXPECT_GT(uniform_minimality(dual_system(sys)), 0.0);
  }
}

TEST(Riesz, RepeatedSubspaceIsRejectedAndNearRepeatIsNearM) {
  // a literally repeated subspace violates linear independence
  EXPECT_THROW(SubspaceSystem::from_spanning({column({1, 0, 0, 0}), column({1, 0, 0, 0})}), LinearDependenceError);
  const int m = 3;
  std::vector<Eigen::MatrixXcd> spans;
  for (int k = 0; k < m; ++k) {
    Eigen::MatrixXcd v = Eigen::MatrixXcd::Zero(m + 1, 1);
    v(0, 0) = 1.0;
    v(k + 1, 0) = 1e-4;
    spans.push_back(v);
  }
  EXPECT_NEAR(embedding_norm(SubspaceSystem::from_spanning(spans)), m, 1e-6);
}

TEST(Riesz, EmbeddingDominatesSampledSums) {
  std::mt19937_64 rng(8);
  std::vector<Eigen::MatrixXcd> spans;
  for (int k = 0; k < 4; ++k) spans.push_back(random_matrix(rng, 9, 2));
  auto sys = SubspaceSystem::from_spanning(spans);
  double c = embedding_norm(sys);
  for (int t = 0; t < 200; ++t) {
    std::size_t n = static_cast<std::size_t>(t) % sys.size();
    Eigen::VectorXcd f = sys.frames()[n] * random_matrix(rng, sys.frames()[n].cols(), 1);
    f.normalize();
    double s = 0.0;
    for (std::size_t k = 0; k < sys.size(); ++k) s += (sys.frames()[k].adjoint() * f).squaredNorm();
    EXPECT_LE(s, c + 1e-12);
  }
}

TEST(Riesz, CriticalSubsetFindsParallelPair) {
  std::vector<Eigen::MatrixXcd> spans;
  for (int i = 0; i < 4; ++i) spans.push_back(Eigen::MatrixXcd::Identity(6, 6).col(i));
  Eigen::MatrixXcd near = Eigen::MatrixXcd::Identity(6, 6).col(1) + 0.05 * Eigen::MatrixXcd::Identity(6, 6).col(5);
  spans.push_back(near);
  auto sys = SubspaceSystem::from_spanning(spans);
  auto crit = extract_critical_subset(sys, 0.5);
  ASSERT_TRUE(crit.has_value());
  EXPECT_EQ(crit->indices, (std::vector<std::size_t>{1, 4}));
  EXPECT_LT(uniform_minimality(sys.subsystem(crit->indices)), 0.5);
  for (std::size_t k = 0; k < crit->indices.size(); ++k) {
    auto rest = crit->indices;
    rest.erase(rest.begin() + static_cast<std::ptrdiff_t>(k));
    EXPECT_GE(uniform_minimality(sys.subsystem(rest)), 0.5);
  }
  EXPECT_LE(crit->iterations, static_cast<int>(sys.size()));
}

TEST(Riesz, TensorBounds) {
  auto single = tensor_bound_check({cplx(0.3, 0.1)}, 2, 20, 1);
  EXPECT_NEAR(single.lambda_min, 1.0, 1e-14);
  EXPECT_NEAR(single.lambda_max, 1.0, 1e-14);
  EXPECT_EQ(tensor_bound_check({0.0, 0.5}, 3, 100, 2).violations, 0);
  auto one = tensor_bound_check({0.0, 0.5, cplx(0, 0.7)}, 2, 50, 3, 1);
  EXPECT_EQ(one.violations, 0);
}

// ---- weights ----

TEST(Weighted, Hierarchy) {
  auto one = classify_weight(Weight::constant(1.0));
  EXPECT_EQ(one.level, 5);
  EXPECT_NEAR(one.a2, 1.0, 1e-12);
  EXPECT_EQ(classify_weight(Weight::power_of_distance(1.0)).level, 2);
  EXPECT_EQ(classify_weight(Weight::power_of_distance(0.5)).level, 4);
  EXPECT_EQ(classify_weight(Weight::constant(3.0)).level, 5);
  auto zero = classify_weight(Weight::constant(0.0));
  EXPECT_EQ(zero.level, 0);
}

TEST(Weighted, LevelsAreMonotone) {
  for (double a : {-0.5, -0.25, 0.25, 0.5, 0.9, 1.0, 1.5}) {
    auto c = classify_weight(Weight::power_of_distance(a));
    if (c.level >= 2) EXPECT_TRUE(c.log_integrable);
    if (c.level >= 3) EXPECT_TRUE(c.inv_integrable);
    if (c.level >= 4) EXPECT_TRUE(c.a2_finite);
    if (c.level >= 1) EXPECT_GE(c.a2, 1.0 - 1e-12);
  }
}

TEST(Weighted, P0Identity) {
  auto one = p0_norm_check(Weight::constant(1.0), 8);
  EXPECT_NEAR(one.lhs, 1.0, 1e-12);
  EXPECT_NEAR(one.rhs, 1.0, 1e-12);
  auto c = p0_norm_check(Weight::constant(4.0), 8);
  EXPECT_NEAR(c.lhs, 1.0, 1e-12);
  EXPECT_NEAR(c.rhs, 1.0, 1e-12);
  Weight w([](double t) { return 2.0 + std::cos(t); });
  double prev = 0.0;
  for (int n : {0, 2, 8, 32}) {
    auto p = p0_norm_check(w, n);
    EXPECT_LE(p.lhs, p.rhs + 1e-8);
    EXPECT_GE(p.lhs, prev - 1e-12);
    prev = p.lhs;
  }
  EXPECT_NEAR(p0_norm_check(w, 32).rhs, 2.0 / std::sqrt(3.0), 1e-10);
}

// ---- construction pieces ----

TEST(Construction, DeterminantFunction) {
  MatrixFunction t(1, 1);
  t.at(0, 0) = ScalarFunction::polynomial({0.0, 0.0, 0.5, 0.25});  // z^2 (0.5 + 0.25 z)
  auto phi = determinant_function(t, 256);
  ASSERT_EQ(phi.zeros().size(), 2u);
  for (cplx z : phi.zeros()) EXPECT_LT(std::abs(z), 1e-6);
  cplx p(0.3, -0.2);
  EXPECT_NEAR(phi.log_abs(p), std::log(std::abs(p * p * (0.5 + 0.25 * p))), 1e-3);
}

TEST(Construction, MinimizingDirection) {
  Eigen::MatrixXcd m(2, 2);
  m << 0.01, 0.0, 0.0, 1.0;
  auto e = minimizing_direction(m);
  EXPECT_NEAR(std::abs(e(0)), 1.0, 1e-12);
  EXPECT_NEAR(e(0).imag(), 0.0, 1e-14);
  EXPECT_GT(e(0).real(), 0.0);
}

TEST(Construction, ScalarFamilyNets) {
  std::vector<MatrixFunction> fam;
  for (cplx l : {cplx(0.3, 0.1), cplx(-0.5, 0.4), cplx(0.1, -0.7)}) fam.push_back(MatrixFunction::scalar(ScalarFunction::blaschke({l})));
  auto ps = build_contour_nets(fam, 0.1, 0.05);
  ASSERT_EQ(ps.entries.size(), 3u);
  for (std::size_t n = 0; n < 3; ++n) {
    const auto& e = ps.entries[n];
    EXPECT_FALSE(e.sigma.empty());
    EXPECT_TRUE(e.net.separated);
    EXPECT_TRUE(e.net.dense);
    EXPECT_LT(e.max_blaschke_on_contour, 0.05);
    for (std::size_t i = 0; i < e.sigma.size(); ++i) {
      EXPECT_LT(e.residuals[i], 0.1);
      EXPECT_NEAR(std::abs(e.directions[i](0)), 1.0, 1e-12);
    }
  }
}

TEST(Construction, NoContourWhenDeterminantLarge) {
  auto ps = build_contour_nets({MatrixFunction::scalar(ScalarFunction::constant(0.9))}, 0.1, 0.05);
  ASSERT_EQ(ps.entries.size(), 1u);
  EXPECT_TRUE(ps.entries[0].contour.empty());
  EXPECT_TRUE(ps.entries[0].sigma.empty());
}

TEST(Construction, DiagonalDirection) {
  cplx mu(0.3, 0.2);
  auto fam = std::vector<MatrixFunction>{MatrixFunction::diagonal({ScalarFunction::blaschke({mu}), ScalarFunction::constant(1.0)})};
  auto ps = build_contour_nets(fam, 0.1, 0.05);
  ASSERT_FALSE(ps.entries[0].sigma.empty());
  for (const auto& e : ps.entries[0].directions) EXPECT_NEAR(std::abs(e(0)), 1.0, 1e-8);
}

TEST(Construction, EpsilonNetSplit) {
  std::vector<MatrixFunction> fam{MatrixFunction::scalar(ScalarFunction::blaschke({cplx(0.2)}))};
  auto ps = build_contour_nets(fam, 0.1, 0.05);
  Eigen::VectorXcd one = Eigen::VectorXcd::Ones(1);
  auto split = epsilon_net_split(ps, {one}, 0.1);
  ASSERT_EQ(split.entries[0].parts.size(), 1u);
  EXPECT_EQ(split.entries[0].parts[0].size(), split.entries[0].sigma.size());
  EXPECT_TRUE(check_split(split, fam).partition_ok);

  cplx a(0.3, 0.1), b(-0.2, 0.5);
  std::vector<MatrixFunction> two{MatrixFunction::diagonal({ScalarFunction::blaschke({a}), ScalarFunction::blaschke({b})})};
  auto p2 = build_contour_nets(two, 0.1, 0.05);
  auto s2 = epsilon_net_split(p2, {Eigen::VectorXcd::Unit(2, 0), Eigen::VectorXcd::Unit(2, 1)}, 0.1);
  const auto& e = s2.entries[0];
  for (std::size_t k = 0; k < 2; ++k)
    for (std::size_t i : e.parts[k]) EXPECT_NEAR(std::abs(e.directions[i](static_cast<Eigen::Index>(k))), 1.0, 1e-8);
  auto chk = check_split(s2, two);
  EXPECT_TRUE(chk.partition_ok && chk.near_net_ok && chk.two_eps_ok);
}

TEST(Construction, EpsilonNetIsCertified) {
  auto net = build_epsilon_net(2, 0.5, 3, 2000);
  EXPECT_LT(net.certified_radius, 0.5);
  std::mt19937_64 rng(4);
  for (int i = 0; i < 200; ++i) EXPECT_LT(distance_to_net(net.vectors, random_unit_vector(2, rng)), 0.5);
}

TEST(Construction, ConditionSums) {
  ConditionSumsInput one;
  one.blaschke = {{0.0}};
  auto grid = disk_grid(5);
  grid.push_back(0.0);
  auto r = condition_sums(one, grid, {Eigen::VectorXcd::Ones(1)});
  EXPECT_NEAR(*r.sup_blaschke, 1.0, 1e-14);
  EXPECT_EQ(r.argmax_blaschke, cplx(0.0));

  ConditionSumsInput iso;
  for (cplx l : {cplx(0.3), cplx(-0.4, 0.4)}) {
    auto s = ScalarFunction::blaschke({l});
    iso.thetas.push_back(MatrixFunction::diagonal({s, s}));
  }
  ConditionSumsInput scal;
  for (cplx l : {cplx(0.3), cplx(-0.4, 0.4)}) scal.thetas.push_back(MatrixFunction::scalar(ScalarFunction::blaschke({l})));
  std::mt19937_64 rng(9);
  auto a = condition_sums(iso, grid, {random_unit_vector(2, rng)});
  auto b = condition_sums(scal, grid, {Eigen::VectorXcd::Ones(1)});
  EXPECT_NEAR(*a.sup_vector, *b.sup_scalar, 1e-12);

  ConditionSumsInput same;
  for (int i = 0; i < 2; ++i) same.thetas.push_back(MatrixFunction::scalar(ScalarFunction::blaschke({cplx(0.3)})));
  auto s = condition_sums(same, {cplx(0.3), cplx(0.1)}, {Eigen::VectorXcd::Ones(1)});
  EXPECT_NEAR(*s.delta_prime, 0.0, 1e-14);
}

TEST(Construction, ProductInequality) {
  EXPECT_TRUE(product_inequality_holds({0.9, 0.8}));
  EXPECT_NEAR(1.0 - 0.9 * 0.8, 0.28, 1e-15);
  std::mt19937_64 rng(10);
  std::uniform_real_distribution<double> u(0, 1);
  for (int t = 0; t < 1000; ++t) {
    std::vector<double> a(1 + t % 7);
    for (double& x : a) x = u(rng);
    EXPECT_TRUE(product_inequality_holds(a));
  }
}

TEST(Construction, OuterChainScalar) {
  auto grid = disk_grid(5);
  std::vector<MatrixFunction> inner{MatrixFunction::scalar(ScalarFunction::blaschke({cplx(0.4)}))};
  auto ps = build_contour_nets(inner, 0.1, 0.05);
  std::vector<const Region*> regions{&ps.entries[0].region};
  long npow = n_power(1, 0.05, ps.log_eps_prime);
  EXPECT_LT(npow * std::log(0.05), ps.log_eps_prime);
  auto rep = outer_chain_check(inner, ps.blaschke_zero_sets(), ps.log_eps_prime, npow, 1, grid, regions);
  EXPECT_NEAR(rep.worst_outer_sum, 0.0, 1e-12);  // |det| = 1 on the circle, so h = 1
  EXPECT_TRUE(rep.algebra_ok);
  EXPECT_TRUE(rep.outer_ok);
  EXPECT_TRUE(rep.assembled_ok);
  EXPECT_EQ(rep.premise_violations, 0);
}

TEST(Construction, CvEstimateAtLeastOne) {
  double cv = estimate_cv(0.25, 50, 3);
  EXPECT_GE(cv, 1.0);
  EXPECT_TRUE(std::isfinite(cv));
}
