#pragma once

// Batch front end: JSON inputs, JSON reports, SVG figures. Complex numbers are [re, im].

#include <json.hpp>

#include <cstdio>
#include <filesystem>
#include <fstream>
#include <optional>
#include <sstream>
#include <string>
#include <vector>

#include "carleson_kit/blaschke.hpp"
#include "carleson_kit/carleson.hpp"
#include "carleson_kit/construction.hpp"
#include "carleson_kit/contour.hpp"
#include "carleson_kit/riesz.hpp"
#include "carleson_kit/svg.hpp"
#include "carleson_kit/weighted.hpp"

namespace carleson_kit::cli {

using json = nlohmann::json;

class InputError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

struct RunConfig {
  std::string command;
  std::string input;
  std::optional<double> epsilon;
  std::optional<double> alpha;
  std::optional<int> depth;
  std::uint64_t seed = 1;
  std::string out;
  std::string svg;
  ContourConstants constants;
  std::optional<double> cv;
  std::optional<double> net_epsilon;
  std::optional<double> delta;
  std::optional<int> section;
  std::optional<int> samples;
};

inline const std::vector<std::string>& commands() {
  static const std::vector<std::string> c{"sequence", "carleson", "contour", "embedding", "system", "construct", "weight"};
  return c;
}

// ---- JSON conversion ----

inline cplx to_cplx(const json& j) {
  if (j.is_number()) return {j.get<double>(), 0.0};
  if (!j.is_array() || j.size() != 2 || !j[0].is_number() || !j[1].is_number())
    throw InputError("expected a complex number [re, im], got " + j.dump());
  return {j[0].get<double>(), j[1].get<double>()};
}

inline json from_cplx(cplx z) { return json::array({z.real(), z.imag()}); }

inline std::vector<cplx> to_points(const json& j, const char* what) {
  if (!j.is_array()) throw InputError(std::string(what) + ": expected an array of [re, im]");
  std::vector<cplx> out;
  for (const auto& v : j) out.push_back(to_cplx(v));
  return out;
}

inline json from_points(const std::vector<cplx>& pts) {
  json a = json::array();
  for (cplx z : pts) a.push_back(from_cplx(z));
  return a;
}

inline Eigen::MatrixXcd to_matrix(const json& j) {
  if (!j.is_array() || j.empty() || !j[0].is_array()) throw InputError("expected a matrix as a list of rows");
  auto rows = static_cast<Eigen::Index>(j.size());
  auto cols = static_cast<Eigen::Index>(j[0].size());
  Eigen::MatrixXcd m(rows, cols);
  for (Eigen::Index r = 0; r < rows; ++r) {
    if (static_cast<Eigen::Index>(j[static_cast<std::size_t>(r)].size()) != cols) throw InputError("matrix rows differ in length");
    for (Eigen::Index c = 0; c < cols; ++c) m(r, c) = to_cplx(j[static_cast<std::size_t>(r)][static_cast<std::size_t>(c)]);
  }
  return m;
}

inline json from_vector(const Eigen::VectorXcd& v) {
  json a = json::array();
  for (Eigen::Index i = 0; i < v.size(); ++i) a.push_back(from_cplx(v(i)));
  return a;
}

/// {"poly": [c0, c1, ...], "zeros": [...]}; a bare number or [re, im] is a constant.
inline ScalarFunction to_scalar(const json& j) {
  if (j.is_number() || (j.is_array() && j.size() == 2 && j[0].is_number())) return ScalarFunction::constant(to_cplx(j));
  if (!j.is_object()) throw InputError("expected a scalar function object");
  ScalarFunction f;
  if (j.contains("poly")) f.poly = to_points(j.at("poly"), "poly");
  if (j.contains("zeros")) {
    f.zeros = to_points(j.at("zeros"), "zeros");
    for (cplx z : f.zeros) require_interior(z, "scalar function zero");
  }
  if (f.poly.empty()) f.poly = {cplx(0.0, 0.0)};
  return f;
}

/// {"entries": [[scalar, ...], ...]}.
inline MatrixFunction to_matrix_function(const json& j) {
  const json& e = j.is_object() ? j.at("entries") : j;
  if (!e.is_array() || e.empty() || !e[0].is_array()) throw InputError("matrix function: expected entries as rows");
  int rows = static_cast<int>(e.size());
  int cols = static_cast<int>(e[0].size());
  MatrixFunction m(rows, cols);
  for (int r = 0; r < rows; ++r) {
    if (static_cast<int>(e[static_cast<std::size_t>(r)].size()) != cols) throw InputError("matrix function rows differ in length");
    for (int c = 0; c < cols; ++c) m.at(r, c) = to_scalar(e[static_cast<std::size_t>(r)][static_cast<std::size_t>(c)]);
  }
  return m;
}

inline ContractiveFunction to_contractive(const json& j) {
  std::vector<cplx> zeros;
  std::vector<SingularAtom> singular;
  std::vector<double> logs;
  if (j.contains("zeros")) zeros = to_points(j.at("zeros"), "zeros");
  if (j.contains("singular"))
    for (const auto& s : j.at("singular")) singular.push_back({s.at("angle").get<double>(), s.at("mass").get<double>()});
  if (j.contains("modulus")) {
    for (const auto& v : j.at("modulus")) {
      double m = v.get<double>();
      if (!(m > 0.0)) throw DomainError("contour: boundary modulus must be positive");
      logs.push_back(std::log(m));
    }
  }
  return ContractiveFunction(std::move(zeros), std::move(singular), std::move(logs));
}

inline Weight to_weight(const json& j) {
  if (j.contains("samples")) return Weight::from_samples(j.at("samples").get<std::vector<double>>());
  std::string f = j.value("formula", "");
  if (f == "constant") return Weight::constant(j.at("value").get<double>());
  if (f == "power") return Weight::power_of_distance(j.at("exponent").get<double>());
  if (f == "cosine") {
    // w(t) = a_0 + sum_k a_k cos(k t)
    auto a = j.at("coefficients").get<std::vector<double>>();
    return Weight([a](double t) {
      double s = 0.0;
      for (std::size_t k = 0; k < a.size(); ++k) s += a[k] * std::cos(static_cast<double>(k) * t);
      return s;
    });
  }
  throw InputError("weight: expected \"samples\" or a formula (constant, power, cosine)");
}

// ---- reports ----

class Report {
 public:
  explicit Report(std::string command) { doc_["command"] = std::move(command); }

  json& inputs() { return doc_["inputs"]; }
  json& constants() { return doc_["constants"]; }
  json& results() { return doc_["results"]; }

  void check(const std::string& name, bool pass, std::optional<double> value = {}, std::optional<double> bound = {}) {
    json c{{"name", name}, {"pass", pass}};
    if (value) c["value"] = *value;
    if (bound) c["bound"] = *bound;
    checks_.push_back(std::move(c));
    if (!pass) ok_ = false;
  }

  bool ok() const { return ok_; }

  json finish() {
    doc_["checks"] = checks_;
    doc_["status"] = ok_ ? "pass" : "fail";
    if (!doc_.contains("inputs")) doc_["inputs"] = json::object();
    if (!doc_.contains("constants")) doc_["constants"] = json::object();
    if (!doc_.contains("results")) doc_["results"] = json::object();
    return doc_;
  }

 private:
  json doc_ = json::object();
  json checks_ = json::array();
  bool ok_ = true;
};

inline json constants_json(const ContourConstants& k) { return {{"C1", k.c1}, {"C2", k.c2}, {"C3", k.c3}}; }

inline double rel_err(double a, double b) { return std::abs(a - b) / std::max(1e-300, std::abs(b)); }

// ---- commands ----

inline void run_sequence(const json& in, const RunConfig& cfg, Report& rep) {
  auto pts = to_points(in.at("points"), "points");
  if (pts.empty()) throw InputError("sequence: no points");
  int depth = cfg.depth.value_or(sequence_norm_depth(pts));
  rep.inputs() = {{"points", from_points(pts)}, {"depth", depth}};
  auto ic = interpolation_constants(pts);
  auto& r = rep.results();
  r["delta"] = ic.delta;
  r["alpha"] = ic.alpha;
  r["carleson_norm_of_sequence_measure"] = carleson_norm(DiscreteMeasure::sequence_measure(pts), depth);
  if (pts.size() < 2) return;
  auto sys = SubspaceSystem::kernels(pts);
  r["orthogonalizer_condition"] = orthogonalizer_condition(sys);
  r["uniform_minimality"] = uniform_minimality(sys);
  r["embedding_norm"] = embedding_norm(sys);
  json norms = json::array();
  double worst = 0.0;
  for (std::size_t i = 0; i < pts.size(); ++i) {
    double gram = skew_projection_norm(sys, {i});
    double formula = projection_norm_formula(pts, pts[i]);
    worst = std::max(worst, rel_err(gram, formula));
    norms.push_back({{"point", from_cplx(pts[i])}, {"gram", gram}, {"formula", formula}});
  }
  r["projection_norms"] = norms;
  rep.check("projection_norm_identity", worst <= 1e-8, worst, 1e-8);
  double um = uniform_minimality(sys);
  rep.check("uniform_minimality_equals_delta", rel_err(um, ic.delta) <= 1e-8, rel_err(um, ic.delta), 1e-8);
}

inline void run_carleson(const json& in, const RunConfig& cfg, Report& rep) {
  int depth = cfg.depth.value_or(10);
  auto& r = rep.results();
  if (in.contains("polyline")) {
    auto pts = to_points(in.at("polyline"), "polyline");
    bool closed = in.value("closed", false);
    auto curve = CurveMeasure::polyline(pts, closed);
    rep.inputs() = {{"polyline", from_points(pts)}, {"closed", closed}, {"depth", depth}};
    auto res = carleson_norm_detail(curve, depth);
    r["kind"] = "curve";
    r["total_length"] = curve.total_length();
    r["carleson_norm"] = res.norm;
    r["argmax"] = {{"depth", res.argmax.depth}, {"index", res.argmax.index}};
    rep.check("norm_finite", std::isfinite(res.norm), res.norm);
    return;
  }
  if (!in.contains("atoms")) throw InputError("carleson: expected \"atoms\" or \"polyline\"");
  std::vector<Atom> atoms;
  json echo = json::array();
  for (const auto& a : in.at("atoms")) {
    atoms.push_back({to_cplx(a.at("point")), a.at("mass").get<double>()});
    echo.push_back({{"point", from_cplx(atoms.back().point)}, {"mass", atoms.back().mass}});
  }
  DiscreteMeasure mu(atoms);
  int degree = cfg.samples.value_or(64);
  rep.inputs() = {{"atoms", echo}, {"depth", depth}, {"test_degree", degree}};
  auto res = carleson_norm_detail(mu, depth);
  double k = res.norm;
  double kernel = kernel_test_constant(mu, depth);
  double emb = embedding_constant_empirical(mu, degree);
  bool interior = std::all_of(atoms.begin(), atoms.end(), [](const Atom& a) { return std::abs(a.point) < 1.0; });
  r["kind"] = "atoms";
  r["total_mass"] = mu.total_mass();
  r["carleson_norm"] = k;
  r["carleson_norm_normalized"] = kTwoPi * k;
  r["argmax"] = {{"depth", res.argmax.depth}, {"index", res.argmax.index}};
  r["kernel_test_constant"] = kernel;
  r["embedding_constant"] = emb;
  if (interior) r["embedding_constant_limit"] = embedding_constant_limit(mu);
  double a = kTwoPi * k;
  double worst = 1.0;
  for (auto [x, y] : {std::pair{a, kernel}, std::pair{a, emb}, std::pair{kernel, emb}})
    if (x > 0.0 && y > 0.0) worst = std::max(worst, std::max(x / y, y / x));
  r["worst_pairwise_ratio"] = worst;
  rep.check("constants_comparable", worst <= 100.0, worst, 100.0);
}

inline void run_contour(const json& in, const RunConfig& cfg, Report& rep) {
  auto phi = to_contractive(in);
  double eps = cfg.epsilon.value_or(0.1);
  int depth = cfg.depth.value_or(12);
  int samples = cfg.samples.value_or(10000);
  rep.inputs() = in;
  rep.inputs()["epsilon"] = eps;
  rep.inputs()["depth"] = depth;
  rep.inputs()["samples"] = samples;
  rep.inputs()["seed"] = cfg.seed;
  rep.constants() = constants_json(cfg.constants);
  auto res = bourgain_contour(phi, eps, cfg.constants);
  auto v = verify_region(phi, res.region, res.polylines, eps, res.log_eps_prime, samples, depth, cfg.seed);
  const auto& cr = res.report;
  rep.constants()["M"] = cr.m;
  rep.constants()["gamma"] = cr.gamma;
  rep.constants()["log_eps_prime"] = cr.log_eps_prime;
  auto& r = rep.results();
  r["generations"] = cr.generations;
  r["intervals_per_generation"] = cr.intervals_per_generation;
  r["witnesses_per_generation"] = cr.witnesses_per_generation;
  r["worst_child_mass_ratio"] = cr.worst_child_mass_ratio;
  r["truncated"] = cr.truncated;
  r["undetermined_boxes"] = cr.undetermined_boxes;
  r["contour_pieces"] = res.polylines.size();
  r["contour_length"] = v.contour_length;
  r["contour_carleson_norm"] = v.contour_carleson_norm;
  r["samples"] = v.samples;
  r["samples_in_region"] = v.points_in_region;
  r["upper_violations"] = v.upper_violations;
  r["lower_violations"] = v.lower_violations;
  rep.check("sandwich", v.sandwich_ok, static_cast<double>(v.upper_violations + v.lower_violations), 0.0);
  rep.check("contour_carleson_norm", v.norm_ok, v.contour_carleson_norm, v.carleson_bound);
  rep.check("child_mass_bound", cr.child_mass_bound_ok, cr.worst_child_mass_ratio, 0.01);
  if (!cfg.svg.empty()) {
    std::ofstream f(cfg.svg);
    if (!f) throw InputError("cannot write " + cfg.svg);
    f << contour_svg(res.region, res.polylines);
    r["svg"] = std::filesystem::path(cfg.svg).filename().string();
  }
}

inline std::vector<Eigen::VectorXcd> probe_directions(int d, int count, std::uint64_t seed) {
  std::vector<Eigen::VectorXcd> out;
  for (int i = 0; i < d; ++i) out.push_back(Eigen::VectorXcd::Unit(d, i));
  std::mt19937_64 rng(seed);
  for (int i = 0; i < count; ++i) out.push_back(random_unit_vector(d, rng));
  return out;
}

inline json sums_json(const ConditionSumsReport& s) {
  json j = json::object();
  auto put = [&](const char* k, const std::optional<double>& v) {
    if (v) j[k] = *v;
  };
  put("sup_blaschke", s.sup_blaschke);
  put("sup_scalar", s.sup_scalar);
  put("sup_vector", s.sup_vector);
  put("sup_det", s.sup_det);
  put("delta_prime", s.delta_prime);
  put("split_sum_of_sups", s.split_sum_of_sups);
  if (s.sup_blaschke) j["argmax_blaschke"] = from_cplx(s.argmax_blaschke);
  j["worst_chain_gap"] = s.worst_chain_gap;
  return j;
}

inline void run_embedding(const json& in, const RunConfig& cfg, Report& rep) {
  ConditionSumsInput csi;
  if (in.contains("thetas"))
    for (const auto& t : in.at("thetas")) csi.thetas.push_back(to_matrix_function(t));
  if (in.contains("blaschke"))
    for (const auto& b : in.at("blaschke")) csi.blaschke.push_back(to_points(b, "blaschke"));
  if (in.contains("split"))
    for (const auto& n : in.at("split")) {
      std::vector<std::vector<cplx>> parts;
      for (const auto& k : n) parts.push_back(to_points(k, "split"));
      csi.split.push_back(std::move(parts));
    }
  if (csi.thetas.empty() && csi.blaschke.empty() && csi.split.empty()) throw InputError("embedding: nothing to evaluate");
  int depth = cfg.depth.value_or(6);
  rep.inputs() = in;
  rep.inputs()["depth"] = depth;
  rep.inputs()["seed"] = cfg.seed;
  int d = csi.thetas.empty() ? 1 : csi.thetas.front().rows();
  auto grid = disk_grid(depth);
  auto dirs = probe_directions(d, 16, cfg.seed);
  auto s = condition_sums(csi, grid, dirs);
  rep.results() = sums_json(s);
  if (!csi.blaschke.empty()) {
    try {
      auto sys = SubspaceSystem::kernel_blocks(csi.blaschke);
      rep.results()["kernel_system_embedding_norm"] = embedding_norm(sys);
      rep.results()["kernel_system_uniform_minimality"] = uniform_minimality(sys);
    } catch (const LinearDependenceError&) {
      rep.results()["kernel_system_embedding_norm"] = nullptr;
    }
  }
  if (!csi.thetas.empty()) rep.check("det_sum_dominates_vector_sum", s.det_dominates_vector, s.worst_chain_gap, 1e-8);
  if (!csi.split.empty()) rep.check("split_sums_dominate", s.split_dominates);
}

inline void run_system(const json& in, const RunConfig& cfg, Report& rep) {
  std::vector<Eigen::MatrixXcd> spans;
  for (const auto& f : in.at("frames")) spans.push_back(to_matrix(f));
  std::vector<std::string> labels;
  if (in.contains("labels")) labels = in.at("labels").get<std::vector<std::string>>();
  rep.inputs() = in;
  auto sys = SubspaceSystem::from_spanning(spans, labels);
  auto& r = rep.results();
  auto per = uniform_minimality_per_subspace(sys);
  double delta = *std::min_element(per.begin(), per.end());
  r["uniform_minimality"] = delta;
  r["uniform_minimality_per_subspace"] = per;
  r["orthogonalizer_condition"] = orthogonalizer_condition(sys);
  r["embedding_norm"] = embedding_norm(sys);
  auto dual = dual_system(sys);
  r["dual_uniform_minimality"] = uniform_minimality(dual);
  r["dual_embedding_norm"] = embedding_norm(dual);
  double worst = 0.0;
  if (sys.size() >= 2)
    for (std::size_t n = 0; n < sys.size(); ++n) worst = std::max(worst, rel_err(skew_projection_norm(sys, {n}), 1.0 / per[n]));
  r["worst_projection_identity_error"] = worst;
  rep.check("projection_norm_is_inverse_minimality", worst <= 1e-8, worst, 1e-8);
  rep.check("minimality_in_unit_interval", delta > 0.0 && delta <= 1.0 + 1e-12, delta);
  if (cfg.delta) {
    auto crit = extract_critical_subset(sys, *cfg.delta);
    if (crit) {
      json idx = json::array();
      for (auto i : crit->indices) idx.push_back(sys.labels()[i]);
      r["critical_subset"] = {{"labels", idx}, {"iterations", crit->iterations}, {"constant", crit->constant}};
      rep.check("critical_subset_below_delta", crit->constant < *cfg.delta, crit->constant, *cfg.delta);
      rep.check("critical_subset_iterations", crit->iterations <= static_cast<int>(sys.size()),
                static_cast<double>(crit->iterations), static_cast<double>(sys.size()));
    } else {
      r["critical_subset"] = nullptr;
    }
  }
}

inline void run_construct(const json& in, const RunConfig& cfg, Report& rep) {
  std::vector<MatrixFunction> thetas;
  for (const auto& t : in.at("thetas")) thetas.push_back(to_matrix_function(t));
  if (thetas.empty()) throw InputError("construct: no thetas");
  double eps = cfg.epsilon.value_or(0.1);
  double alpha = cfg.alpha.value_or(0.05);
  int depth = cfg.depth.value_or(6);
  double net_eps = cfg.net_epsilon.value_or(eps);
  int d_star = in.value("d_star", thetas.front().rows());
  rep.inputs() = in;
  rep.inputs()["epsilon"] = eps;
  rep.inputs()["alpha"] = alpha;
  rep.inputs()["depth"] = depth;
  rep.inputs()["net_epsilon"] = net_eps;
  rep.inputs()["seed"] = cfg.seed;
  rep.constants() = constants_json(cfg.constants);
  auto ps = build_contour_nets(thetas, eps, alpha, cfg.constants);
  auto net = build_epsilon_net(ps.d, net_eps, cfg.seed);
  ps = epsilon_net_split(std::move(ps), net.vectors, net_eps);
  ps.eps = net_eps;
  auto split = check_split(ps, thetas);
  auto& r = rep.results();
  rep.constants()["log_eps_prime"] = ps.log_eps_prime;
  r["net_size"] = net.vectors.size();
  r["net_certified_radius"] = net.certified_radius;
  json entries = json::array();
  bool nets_ok = true, small_ok = true, residual_ok = true;
  for (const auto& e : ps.entries) {
    double worst_res = 0.0;
    for (double x : e.residuals) worst_res = std::max(worst_res, x);
    json parts = json::array();
    for (const auto& p : e.parts) parts.push_back(p.size());
    entries.push_back({{"sigma", from_points(e.sigma)},
                       {"contour_pieces", e.contour.size()},
                       {"min_separation", e.net.min_separation},
                       {"max_cover_distance", e.net.max_cover_distance},
                       {"max_blaschke_on_contour", e.max_blaschke_on_contour},
                       {"max_residual", worst_res},
                       {"part_sizes", parts},
                       {"truncated", e.contour_report.truncated}});
    if (!e.sigma.empty()) {
      nets_ok = nets_ok && e.net.separated && e.net.dense;
      small_ok = small_ok && e.max_blaschke_on_contour < alpha;
      residual_ok = residual_ok && worst_res < eps;
    }
  }
  r["entries"] = entries;
  rep.check("nets_separated_and_dense", nets_ok);
  rep.check("blaschke_small_on_contours", small_ok, std::nullopt, alpha);
  rep.check("directions_nearly_annihilated", residual_ok, std::nullopt, eps);
  rep.check("split_is_partition", split.partition_ok);
  rep.check("split_near_net", split.near_net_ok);
  rep.check("split_two_eps", split.two_eps_ok, split.worst_two_eps_ratio, 1.0);
  auto grid = disk_grid(depth);
  ConditionSumsInput csi{ps.blaschke_zero_sets(), ps.split_zero_sets(), thetas};
  auto sums = condition_sums(csi, grid, probe_directions(ps.d, 16, cfg.seed));
  r["condition_sums"] = sums_json(sums);
  rep.check("det_sum_dominates_vector_sum", sums.det_dominates_vector, sums.worst_chain_gap, 1e-8);
  rep.check("split_sums_dominate", sums.split_dominates);
  long npow = n_power(ps.d, alpha, ps.log_eps_prime);
  std::vector<const Region*> regions;
  for (const auto& e : ps.entries) regions.push_back(&e.region);
  auto lem = outer_chain_check(thetas, ps.blaschke_zero_sets(), ps.log_eps_prime, npow, d_star, grid, regions);
  r["outer_chain"] = {{"N", lem.n_power},
                {"boundary_multiplicity", lem.boundary_multiplicity},
                {"worst_outer_sum", lem.worst_outer_sum},
                {"outer_bound", lem.outer_bound},
                {"worst_assembled_margin", lem.worst_assembled_margin},
                {"covering_count", lem.covering_count},
                {"premise_violations", lem.premise_violations}};
  rep.check("boundary_multiplicity", lem.multiplicity_ok, static_cast<double>(lem.boundary_multiplicity), static_cast<double>(d_star));
  rep.check("product_inequality", lem.algebra_ok);
  rep.check("outer_sum_bound", lem.outer_ok, lem.worst_outer_sum, lem.outer_bound);
  rep.check("assembled_bound", lem.assembled_ok, lem.worst_assembled_margin, 0.0);
  rep.check("covering_count", lem.covering_count <= ps.d, static_cast<double>(lem.covering_count), static_cast<double>(ps.d));
  rep.check("outer_premise", lem.premise_violations == 0, static_cast<double>(lem.premise_violations), 0.0);
  double cv_delta = cfg.delta.value_or(0.5);
  double cv = cfg.cv ? *cfg.cv : estimate_cv(cv_delta / 2.0, 200, cfg.seed);
  auto choice = validate_epsilon_choice(ps, cv, cv_delta);
  rep.constants()["CV"] = cv;
  rep.constants()["CV_source"] = cfg.cv ? "configured" : "estimated";
  r["epsilon_choice"] = {{"c_alpha", choice.c_alpha}, {"lhs", choice.lhs}, {"rhs", choice.rhs}, {"holds", choice.ok},
                         {"delta", cv_delta}};
}

inline void run_weight(const json& in, const RunConfig& cfg, Report& rep) {
  auto w = to_weight(in);
  int depth = cfg.depth.value_or(12);
  int section = cfg.section.value_or(64);
  rep.inputs() = in;
  rep.inputs()["depth"] = depth;
  rep.inputs()["section"] = section;
  auto c = classify_weight(w, depth);
  auto& r = rep.results();
  r["level"] = c.level;
  r["integral_w"] = c.integral_w;
  r["integral_log_w"] = c.integral_log_w;
  r["log_integrable"] = c.log_integrable;
  r["integral_inv_w"] = c.integral_inv_w;
  r["inv_integrable"] = c.inv_integrable;
  r["a2_constant"] = c.a2;
  r["a2_stable"] = c.a2_finite;
  r["sup_w"] = c.sup_w;
  r["sup_inv_w"] = c.sup_inv_w;
  if (c.level >= 1) rep.check("a2_at_least_one", c.a2 >= 1.0 - 1e-12, c.a2, 1.0);
  if (c.level >= 3) {
    auto p = p0_norm_check(w, section);
    r["p0"] = {{"lhs", p.lhs}, {"rhs", p.rhs}, {"section", p.section}};
    rep.check("p0_section_below_limit", p.lhs <= p.rhs + 1e-8, p.lhs, p.rhs);
  }
}

/// Reads the input document, runs the command and returns {report, exit status}.
inline std::pair<json, int> execute(const RunConfig& cfg) {
  Report rep(cfg.command);
  json in;
  try {
    if (cfg.input.empty()) throw InputError("missing --input");
    std::ifstream f(cfg.input);
    if (!f) throw InputError("cannot read " + cfg.input);
    try {
      in = json::parse(f);
    } catch (const json::parse_error& e) {
      throw InputError(std::string("parse error in ") + cfg.input + ": " + e.what());
    }
    if (!in.is_object()) throw InputError("input must be a JSON object");
    if (cfg.command == "sequence") run_sequence(in, cfg, rep);
    else if (cfg.command == "carleson") run_carleson(in, cfg, rep);
    else if (cfg.command == "contour") run_contour(in, cfg, rep);
    else if (cfg.command == "embedding") run_embedding(in, cfg, rep);
    else if (cfg.command == "system") run_system(in, cfg, rep);
    else if (cfg.command == "construct") run_construct(in, cfg, rep);
    else if (cfg.command == "weight") run_weight(in, cfg, rep);
    else throw InputError("unknown command " + cfg.command);
  } catch (const InputError& e) {
    return {json{{"command", cfg.command}, {"status", "input_error"}, {"error", e.what()}}, 2};
  } catch (const json::exception& e) {
    return {json{{"command", cfg.command}, {"status", "input_error"}, {"error", e.what()}}, 2};
  } catch (const DomainError& e) {
    return {json{{"command", cfg.command}, {"status", "input_error"}, {"error", e.what()}}, 2};
  } catch (const LinearDependenceError& e) {
    return {json{{"command", cfg.command}, {"status", "input_error"}, {"error", e.what()}}, 2};
  } catch (const NetValidityError& e) {
    rep.check("epsilon_net_valid", false);
    rep.results()["error"] = e.what();
  }
  bool ok = rep.ok();
  return {rep.finish(), ok ? 0 : 1};
}

/// Writes via a temporary file and rename.
inline void write_atomically(const std::string& path, const std::string& text) {
  std::string tmp = path + ".tmp";
  {
    std::ofstream f(tmp, std::ios::binary);
    if (!f) throw InputError("cannot write " + path);
    f << text;
  }
  std::filesystem::rename(tmp, path);
}

inline void apply_config_file(const std::string& path, RunConfig& cfg) {
  std::ifstream f(path);
  if (!f) throw InputError("cannot read config " + path);
  json c;
  try {
    c = json::parse(f);
  } catch (const json::parse_error& e) {
    throw InputError(std::string("parse error in ") + path + ": " + e.what());
  }
  if (c.contains("command")) cfg.command = c["command"].get<std::string>();
  // relative paths are taken from the config file's directory
  auto resolve = [&](const std::string& v) {
    std::filesystem::path q(v);
    return q.is_absolute() ? v : (std::filesystem::path(path).parent_path() / q).string();
  };
  if (c.contains("input")) cfg.input = resolve(c["input"].get<std::string>());
  if (c.contains("epsilon")) cfg.epsilon = c["epsilon"].get<double>();
  if (c.contains("alpha")) cfg.alpha = c["alpha"].get<double>();
  if (c.contains("depth")) cfg.depth = c["depth"].get<int>();
  if (c.contains("seed")) cfg.seed = c["seed"].get<std::uint64_t>();
  if (c.contains("out")) cfg.out = resolve(c["out"].get<std::string>());
  if (c.contains("svg")) cfg.svg = resolve(c["svg"].get<std::string>());
  if (c.contains("net_epsilon")) cfg.net_epsilon = c["net_epsilon"].get<double>();
  if (c.contains("delta")) cfg.delta = c["delta"].get<double>();
  if (c.contains("section")) cfg.section = c["section"].get<int>();
  if (c.contains("samples")) cfg.samples = c["samples"].get<int>();
  if (c.contains("constants")) {
    const auto& k = c["constants"];
    cfg.constants.c1 = k.value("C1", cfg.constants.c1);
    cfg.constants.c2 = k.value("C2", cfg.constants.c2);
    cfg.constants.c3 = k.value("C3", cfg.constants.c3);
    if (k.contains("CV")) cfg.cv = k["CV"].get<double>();
  }
}

inline void validate_config(const RunConfig& cfg) {
  if (std::find(commands().begin(), commands().end(), cfg.command) == commands().end())
    throw InputError("unknown command '" + cfg.command + "'");
  if (cfg.epsilon && !(*cfg.epsilon > 0.0 && *cfg.epsilon < 1.0)) throw InputError("--epsilon must lie in (0,1)");
  if (cfg.alpha && !(*cfg.alpha > 0.0 && *cfg.alpha < 0.1)) throw InputError("--alpha must lie in (0,0.1)");
  if (cfg.depth && (*cfg.depth < 0 || *cfg.depth > 24)) throw InputError("--depth must lie in [0,24]");
  if (cfg.net_epsilon && !(*cfg.net_epsilon > 0.0 && *cfg.net_epsilon < 2.0)) throw InputError("net_epsilon must lie in (0,2)");
  if (cfg.delta && !(*cfg.delta > 0.0 && *cfg.delta < 1.0)) throw InputError("delta must lie in (0,1)");
  if (cfg.samples && *cfg.samples < 1) throw InputError("samples must be positive");
  if (!(cfg.constants.c1 > 0.0 && cfg.constants.c2 > 0.0 && cfg.constants.c3 > 0.0))
    throw InputError("constants C1, C2, C3 must be positive");
  if (cfg.cv && !(*cfg.cv >= 1.0)) throw InputError("CV must be >= 1");
}

}  // namespace carleson_kit::cli
