// Acceptance suite: one PASS/FAIL line per criterion, exit status = number of failures.
// Usage: acceptance [--only N] [--cli path/to/carleson_kit]

#include <chrono>
#include <cstdio>
#include <cstdlib>
#include <filesystem>
#include <fstream>
#include <functional>
#include <random>
#include <sstream>
#include <string>
#include <vector>

#include <unistd.h>

#include "carleson_kit/blaschke.hpp"
#include "carleson_kit/carleson.hpp"
#include "carleson_kit/construction.hpp"
#include "carleson_kit/contour.hpp"
#include "carleson_kit/model_space.hpp"
#include "carleson_kit/riesz.hpp"
#include "carleson_kit/weighted.hpp"

using namespace carleson_kit;

namespace {

struct Outcome {
  bool pass = true;
  std::string detail;
};

using Rng = std::mt19937_64;

double uniform(Rng& rng, double a = 0.0, double b = 1.0) { return std::uniform_real_distribution<double>(a, b)(rng); }

int uniform_int(Rng& rng, int a, int b) { return std::uniform_int_distribution<int>(a, b)(rng); }

// Area-uniform point in |z| < r.
cplx disk_point(Rng& rng, double r) { return std::polar(r * std::sqrt(uniform(rng)), kTwoPi * uniform(rng)); }

std::vector<cplx> separated_points(Rng& rng, int n, double r, double sep) {
  std::vector<cplx> pts;
  while (static_cast<int>(pts.size()) < n) {
    cplx z = disk_point(rng, r);
    bool ok = true;
    for (cplx w : pts) ok = ok && pseudo_hyperbolic_unchecked(z, w) >= sep;
    if (ok) pts.push_back(z);
  }
  return pts;
}

std::string fmt(const char* f, double a) {
  char buf[96];
  std::snprintf(buf, sizeof buf, f, a);
  return buf;
}

std::string fmt(const char* f, double a, double b) {
  char buf[128];
  std::snprintf(buf, sizeof buf, f, a, b);
  return buf;
}

std::string fmt(const char* f, double a, double b, double c) {
  char buf[160];
  std::snprintf(buf, sizeof buf, f, a, b, c);
  return buf;
}

Outcome projection_norms() {
  Rng rng(101);
  double worst = 0.0;
  for (int t = 0; t < 100; ++t) {
    auto pts = separated_points(rng, uniform_int(rng, 2, 8), 0.95, 0.2);
    auto sys = SubspaceSystem::kernels(pts);
    for (std::size_t i = 0; i < pts.size(); ++i) {
      double gram = skew_projection_norm(sys, {i});
      double formula = projection_norm_formula(pts, pts[i]);
      worst = std::max(worst, std::abs(gram - formula) / formula);
    }
  }
  return {worst <= 1e-8, fmt("worst relative error %.3g", worst)};
}

Outcome kernel_model() {
  Rng rng(202);
  double worst = 0.0;
  const std::size_t n = 4096;
  for (int t = 0; t < 100; ++t) {
    BlaschkeProduct theta(separated_points(rng, uniform_int(rng, 1, 20), 0.9, 1e-3));
    cplx lambda = disk_point(rng, 0.9);
    auto k = BoundaryGrid::sample(n, [&](cplx xi) { return kernel(lambda, xi); });
    double lhs = project_model(theta, k).norm_squared();
    double rhs = 1.0 - std::norm(theta(lambda));
    worst = std::max(worst, std::abs(lhs - rhs));
  }
  return {worst <= 1e-8, fmt("worst |lhs - rhs| %.3g", worst)};
}

Outcome embedding_necessity() {
  Rng rng(303);
  double worst = -1e300;
  auto grid = disk_grid(6);
  for (int t = 0; t < 20; ++t) {
    int members = uniform_int(rng, 2, 6);
    std::vector<std::vector<cplx>> zeros;
    std::vector<ModelSubspace> models;
    for (int m = 0; m < members; ++m) {
      zeros.push_back(separated_points(rng, uniform_int(rng, 1, 4), 0.9, 1e-2));
      models.emplace_back(zeros.back());
    }
    double bound = embedding_norm(SubspaceSystem::kernel_blocks(zeros));
    for (cplx lambda : grid) {
      double sum = 0.0, direct = 0.0;
      for (std::size_t m = 0; m < zeros.size(); ++m) {
        sum += 1.0 - std::norm(BlaschkeProduct(zeros[m])(lambda));
        direct += models[m].kernel_projection_norm2(lambda);
      }
      if (std::abs(sum - direct) > 1e-8) return {false, fmt("kernel projection mismatch %.3g", std::abs(sum - direct))};
      worst = std::max(worst, sum - bound);
    }
  }
  return {worst <= 1e-8, fmt("max (sum - embedding norm) %.3g", worst)};
}

Outcome carleson_comparability() {
  Rng rng(404);
  double worst = 1.0;
  for (int t = 0; t < 100; ++t) {
    int atoms = uniform_int(rng, 1, 100);
    std::vector<Atom> a;
    for (int i = 0; i < atoms; ++i) a.push_back({disk_point(rng, 0.98), uniform(rng, 0.0, 0.05)});
    DiscreteMeasure mu(a);
    double k = kTwoPi * carleson_norm(mu, 10);
    double kernel = kernel_test_constant(mu, 8);
    double emb = embedding_constant_empirical(mu, 64);
    for (auto [x, y] : {std::pair{k, kernel}, std::pair{k, emb}, std::pair{kernel, emb}})
      if (x > 0.0 && y > 0.0) worst = std::max(worst, std::max(x / y, y / x));
  }
  return {worst <= 100.0, fmt("worst pairwise ratio %.3f (bound 100)", worst)};
}

Outcome contour_construction() {
  Rng rng(505);
  const double eps_values[] = {0.1, 0.05, 0.01};
  int sandwich = 0, mass_fail = 0, norm_fail = 0, ratio_fail = 0;
  double worst_norm = 0.0, worst_ratio = 1.0, slowest = 0.0;
  for (int p = 0; p < 50; ++p) {
    int deg = uniform_int(rng, 1, 50);
    std::vector<cplx> z;
    for (int i = 0; i < deg; ++i) z.push_back(disk_point(rng, 0.999));
    ContractiveFunction phi(z);
    auto t0 = std::chrono::steady_clock::now();
    double lo = 1e300, hi = 0.0;
    for (double eps : eps_values) {
      auto res = bourgain_contour(phi, eps);
      auto v = verify_region(phi, res.region, res.polylines, eps, res.log_eps_prime, 10000, 12, 1000 + p);
      sandwich += v.upper_violations + v.lower_violations;
      if (!res.report.child_mass_bound_ok) ++mass_fail;
      if (!v.norm_ok) ++norm_fail;
      worst_norm = std::max(worst_norm, v.contour_carleson_norm);
      lo = std::min(lo, v.contour_carleson_norm);
      hi = std::max(hi, v.contour_carleson_norm);
    }
    double ratio = lo > 0.0 ? hi / lo : (hi > 0.0 ? INFINITY : 1.0);
    worst_ratio = std::max(worst_ratio, ratio);
    if (ratio > 2.0) ++ratio_fail;
    slowest = std::max(slowest, std::chrono::duration<double>(std::chrono::steady_clock::now() - t0).count());
  }
  bool ok = sandwich == 0 && mass_fail == 0 && norm_fail == 0 && ratio_fail == 0 && slowest < 30.0;
  std::ostringstream os;
  os << "sandwich violations " << sandwich << ", child-mass failures " << mass_fail << ", norm > 10: " << norm_fail
     << fmt(" (max %.3g)", worst_norm) << ", products with eps-ratio > 2: " << ratio_fail << "/50"
     << fmt(" (worst %.6g)", worst_ratio) << fmt(", slowest product %.2fs", slowest);
  return {ok, os.str()};
}

Outcome potential_bounds() {
  Rng rng(606);
  const double eps = 0.1;
  double worst_lower = -1e300, worst_upper = -1e300;
  for (int f = 0; f < 20; ++f) {
    std::vector<cplx> zeros;
    for (int i = uniform_int(rng, 1, 10); i > 0; --i) zeros.push_back(disk_point(rng, 0.95));
    std::vector<SingularAtom> atoms;
    for (int i = uniform_int(rng, 0, 2); i > 0; --i) atoms.push_back({kTwoPi * uniform(rng), uniform(rng, 0.0, 0.5)});
    std::vector<double> cells(64);
    for (double& c : cells) c = -uniform(rng, 0.0, 1.0);
    ContractiveFunction phi(zeros, atoms, cells);
    auto nu = representing_measure(phi);
    int taken = 0;
    while (taken < 1000) {
      cplx z = disk_point(rng, 0.999);
      if (phi.min_pseudo_distance_to_zeros(z) < eps) continue;
      ++taken;
      double pot = poisson_potential(nu, z);
      double minus_log = -phi.log_abs(z);
      worst_lower = std::max(worst_lower, pot - minus_log);
      worst_upper = std::max(worst_upper, minus_log - 2.0 * std::log(1.0 / eps) * pot);
    }
  }
  return {worst_lower <= 1e-8 && worst_upper <= 1e-8,
          fmt("max (potential + log|phi|) %.3g, max (-log|phi| - 2 log(1/eps) potential) %.3g", worst_lower, worst_upper)};
}

std::vector<MatrixFunction> random_scalar_family(Rng& rng, int members, int max_deg) {
  std::vector<MatrixFunction> fam;
  for (int m = 0; m < members; ++m)
    fam.push_back(MatrixFunction::scalar(ScalarFunction::blaschke(separated_points(rng, uniform_int(rng, 1, max_deg), 0.9, 0.05))));
  return fam;
}

Outcome contour_nets() {
  Rng rng(707);
  int entries = 0, bad = 0;
  double worst_b = 0.0;
  const double alpha = 0.05;
  for (int t = 0; t < 6; ++t) {
    std::vector<MatrixFunction> fam;
    if (t % 3 == 2) {
      for (int m = 0; m < 2; ++m) {
        auto a = ScalarFunction::blaschke(separated_points(rng, 2, 0.8, 0.1));
        auto b = ScalarFunction::blaschke(separated_points(rng, 1, 0.8, 0.1));
        fam.push_back(MatrixFunction::diagonal({a, b}));
      }
    } else {
      fam = random_scalar_family(rng, 3, 4);
    }
    auto ps = build_contour_nets(fam, 0.1, alpha);
    for (const auto& e : ps.entries) {
      if (e.sigma.empty()) continue;
      ++entries;
      if (!e.net.separated || !e.net.dense || !(e.max_blaschke_on_contour < alpha)) ++bad;
      worst_b = std::max(worst_b, e.max_blaschke_on_contour);
    }
  }
  return {bad == 0 && entries > 0,
          std::to_string(entries) + " nets, " + std::to_string(bad) + " failing" + fmt(", max |B_n| on contour %.3g (alpha 0.05)", worst_b)};
}

Outcome tensor_bounds() {
  Rng rng(808);
  int violations = 0, trials = 0;
  for (int s = 0; s < 20; ++s) {
    auto sigma = separated_points(rng, uniform_int(rng, 2, 10), 0.9, 0.1);
    auto rep = tensor_bound_check(sigma, uniform_int(rng, 1, 4), 50, 9000 + s);
    violations += rep.violations;
    trials += rep.trials;
  }
  return {violations == 0 && trials >= 1000, std::to_string(violations) + " violations in " + std::to_string(trials) + " draws"};
}

Outcome critical_subsets() {
  Rng rng(909);
  std::normal_distribution<double> normal;
  const double delta = 0.5;
  int failures = 0, extracted = 0, max_iter = 0;
  for (int s = 0; s < 50; ++s) {
    int ambient = 16;
    int count = uniform_int(rng, 3, 6);
    std::vector<Eigen::MatrixXcd> spans;
    for (int i = 0; i < count; ++i) {
      Eigen::MatrixXcd m(ambient, uniform_int(rng, 1, 2));
      for (Eigen::Index r = 0; r < m.rows(); ++r)
        for (Eigen::Index c = 0; c < m.cols(); ++c) m(r, c) = cplx(normal(rng), normal(rng));
      spans.push_back(m);
    }
    // planted pair: a vector and a tiny perturbation of it
    Eigen::VectorXcd v(ambient), w(ambient);
    for (int r = 0; r < ambient; ++r) {
      v(r) = cplx(normal(rng), normal(rng));
      w(r) = v(r) + 0.05 * cplx(normal(rng), normal(rng));
    }
    spans.insert(spans.begin() + uniform_int(rng, 0, count), Eigen::MatrixXcd(v));
    spans.insert(spans.begin() + uniform_int(rng, 0, count + 1), Eigen::MatrixXcd(w));
    auto sys = SubspaceSystem::from_spanning(spans);
    auto crit = extract_critical_subset(sys, delta);
    if (!crit) {
      ++failures;
      continue;
    }
    ++extracted;
    max_iter = std::max(max_iter, crit->iterations);
    if (crit->iterations > static_cast<int>(sys.size())) ++failures;
    if (!(uniform_minimality(sys.subsystem(crit->indices)) < delta)) ++failures;
    for (std::size_t k = 0; k < crit->indices.size(); ++k) {
      auto rest = crit->indices;
      rest.erase(rest.begin() + static_cast<std::ptrdiff_t>(k));
      if (!rest.empty() && uniform_minimality(sys.subsystem(rest)) < delta) ++failures;
    }
  }
  return {failures == 0, std::to_string(extracted) + "/50 extracted, " + std::to_string(failures) +
                             " post-condition failures, max iterations " + std::to_string(max_iter)};
}

Outcome outer_chain() {
  Rng rng(1010);
  int algebra_fail = 0;
  for (int t = 0; t < 10000; ++t) {
    std::vector<double> a(static_cast<std::size_t>(uniform_int(rng, 1, 12)));
    for (double& x : a) x = uniform(rng);
    if (!product_inequality_holds(a, 1e-12)) ++algebra_fail;
  }
  double worst_outer = 0.0, worst_margin = 1e300;
  bool ok = algebra_fail == 0;
  auto grid = disk_grid(5);
  for (int f = 0; f < 3; ++f) {
    std::vector<MatrixFunction> fam;
    if (f == 2) {
      fam.push_back(MatrixFunction::diagonal({ScalarFunction::blaschke({cplx(0.3, 0.1)}), ScalarFunction::constant(1.0)}));
      fam.push_back(MatrixFunction::diagonal({ScalarFunction::constant(1.0), ScalarFunction::blaschke({cplx(-0.4, 0.2)})}));
    } else {
      fam = random_scalar_family(rng, 3, 3);
    }
    auto ps = build_contour_nets(fam, 0.1, 0.05);
    long npow = n_power(ps.d, 0.05, ps.log_eps_prime);
    std::vector<const Region*> regions;
    for (const auto& e : ps.entries) regions.push_back(&e.region);
    auto rep = outer_chain_check(fam, ps.blaschke_zero_sets(), ps.log_eps_prime, npow, ps.d, grid, regions);
    ok = ok && rep.algebra_ok && rep.outer_ok && rep.assembled_ok && rep.premise_violations == 0;
    worst_outer = std::max(worst_outer, rep.worst_outer_sum / rep.outer_bound);
    worst_margin = std::min(worst_margin, rep.worst_assembled_margin);
  }
  return {ok, std::to_string(algebra_fail) + " algebra failures in 10^4 tuples" +
                  fmt(", outer sum / bound %.3g, min assembled margin %.3g", worst_outer, worst_margin)};
}

Outcome weight_hierarchy() {
  int l1 = classify_weight(Weight::constant(1.0)).level;
  int l2 = classify_weight(Weight::power_of_distance(1.0)).level;
  int l3 = classify_weight(Weight::power_of_distance(0.5)).level;
  auto p = p0_norm_check(Weight([](double t) { return 2.0 + std::cos(t); }), 1024);
  double target = 2.0 / std::sqrt(3.0);
  bool ok = l1 == 5 && l2 == 2 && l3 == 4 && std::abs(p.lhs - target) <= 1e-4 && p.lhs <= p.rhs + 1e-8;
  std::ostringstream os;
  os << "levels " << l1 << "/" << l2 << "/" << l3 << " (want 5/2/4)" << fmt(", p0 lhs %.10f rhs %.10f target %.10f", p.lhs, p.rhs, target);
  return {ok, os.str()};
}

std::string slurp(const std::filesystem::path& p) {
  std::ifstream f(p, std::ios::binary);
  std::ostringstream os;
  os << f.rdbuf();
  return os.str();
}

Outcome determinism(const std::string& cli) {
  if (cli.empty() || !std::filesystem::exists(cli)) return {false, "CLI binary not found"};
  auto dir = std::filesystem::temp_directory_path() / ("carleson_kit_det_" + std::to_string(::getpid()));
  std::filesystem::create_directories(dir);
  struct Case {
    std::string name, input, flags;
  };
  std::vector<Case> cases = {
      {"weight", R"({"formula": "cosine", "coefficients": [2, 1]})", "--section 32"},
      {"sequence", R"({"points": [[0.5,0],[-0.3,0.6],[0,-0.7]]})", ""},
      {"contour", R"({"zeros": [[0.2,0.1],[-0.5,0.4],[0.7,-0.6]]})", "--epsilon 0.05 --seed 11"},
      {"construct", R"({"thetas": [{"entries": [[{"zeros": [[0.3,0]]}]]}, {"entries": [[{"zeros": [[-0.5,0.2]]}]]}]})",
       "--epsilon 0.1 --alpha 0.05 --seed 5"},
  };
  int mismatches = 0;
  for (const auto& c : cases) {
    auto in = dir / (c.name + ".json");
    std::ofstream(in) << c.input;
    std::string reports[2];
    for (int r = 0; r < 2; ++r) {
      auto out = dir / (c.name + "_" + std::to_string(r) + ".out.json");
      std::string cmd = "\"" + cli + "\" " + c.name + " --input \"" + in.string() + "\" --out \"" + out.string() + "\" " + c.flags;
      int rc = std::system(cmd.c_str());
      if (rc != 0) ++mismatches;
      reports[r] = slurp(out);
    }
    if (reports[0].empty() || reports[0] != reports[1]) ++mismatches;
  }
  std::filesystem::remove_all(dir);
  return {mismatches == 0, std::to_string(cases.size()) + " commands run twice, " + std::to_string(mismatches) + " mismatches"};
}

}  // namespace

int main(int argc, char** argv) {
  std::setvbuf(stdout, nullptr, _IONBF, 0);
  int only = 0;
  std::string cli;
#ifdef CARLESON_KIT_CLI
  cli = CARLESON_KIT_CLI;
#endif
  for (int i = 1; i + 1 < argc; i += 2) {
    std::string a = argv[i];
    if (a == "--only") only = std::atoi(argv[i + 1]);
    else if (a == "--cli") cli = argv[i + 1];
  }
  struct Criterion {
    int id;
    const char* name;
    double budget;  // seconds
    std::function<Outcome()> run;
  };
  std::vector<Criterion> all = {
      {1, "projection-norm identity", 5, projection_norms},
      {2, "kernel-model identity", 10, kernel_model},
      {3, "embedding necessity at kernels", 30, embedding_necessity},
      {4, "Carleson constant comparability", 60, carleson_comparability},
      {5, "Carleson contour", 50 * 30, contour_construction},
      {6, "potential two-sided bounds", 10, potential_bounds},
      {7, "contour nets", 10, contour_nets},
      {8, "tensor bounds", 5, tensor_bounds},
      {9, "critical subset extraction", 10, critical_subsets},
      {10, "outer-function chain", 60, outer_chain},
      {11, "weighted hierarchy", 10, weight_hierarchy},
      {12, "CLI determinism", 5, [&] { return determinism(cli); }},
  };
  int failures = 0;
  for (const auto& c : all) {
    if (only && c.id != only) continue;
    auto t0 = std::chrono::steady_clock::now();
    Outcome o;
    try {
      o = c.run();
    } catch (const std::exception& e) {
      o = {false, std::string("exception: ") + e.what()};
    }
    double secs = std::chrono::duration<double>(std::chrono::steady_clock::now() - t0).count();
    bool in_time = secs < c.budget;
    bool pass = o.pass && in_time;
    if (!pass) ++failures;
    std::printf("[%s] %2d %s: %s; %.2fs (budget %.0fs)\n", pass ? "PASS" : "FAIL", c.id, c.name, o.detail.c_str(), secs, c.budget);
  }
  return failures;
}
