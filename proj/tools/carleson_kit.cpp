#include <CLI11.hpp>

#include <iostream>
#include <map>

#include "carleson_kit/cli.hpp"

namespace ck = carleson_kit::cli;

int main(int argc, char** argv) {
  CLI::App app{"carleson_kit: Hardy-space diagnostics and contour construction"};
  app.require_subcommand(0, 1);

  std::string config_path;
  app.add_option("--config", config_path, "JSON run configuration");

  struct Flags {
    std::string input, out, svg;
    std::optional<double> epsilon, alpha, net_epsilon, delta, cv;
    std::optional<int> depth, section, samples;
    std::optional<std::uint64_t> seed;
  };
  Flags fl;
  const std::map<std::string, std::string> about{
      {"sequence", "interpolation constants and Gram diagnostics of a point set"},
      {"carleson", "Carleson norms of a measure (atoms or polyline)"},
      {"contour", "contour construction for a contractive function, verification, SVG"},
      {"embedding", "condition sums and embedding norms"},
      {"system", "Riesz-basis diagnostics for a system of subspaces"},
      {"construct", "contour nets, splitting and bound chain for a family of inner matrix functions"},
      {"weight", "classification of a weight and the P0 norm check"},
  };
  for (const auto& name : ck::commands()) {
    auto* sub = app.add_subcommand(name, about.at(name));
    sub->add_option("--input", fl.input, "input JSON document");
    sub->add_option("--epsilon", fl.epsilon, "smallness level eps in (0,1)");
    sub->add_option("--alpha", fl.alpha, "Blaschke smallness on contours, in (0,0.1)");
    sub->add_option("--depth", fl.depth, "dyadic depth");
    sub->add_option("--seed", fl.seed, "RNG seed");
    sub->add_option("--out", fl.out, "report path (stdout when omitted)");
    sub->add_option("--svg", fl.svg, "SVG output path (contour)");
    sub->add_option("--net-epsilon", fl.net_epsilon, "epsilon-net radius for splitting (construct)");
    sub->add_option("--delta", fl.delta, "uniform minimality threshold");
    sub->add_option("--cv", fl.cv, "interpolation-to-Riesz constant (construct; estimated when omitted)");
    sub->add_option("--section", fl.section, "Fourier section size (weight)");
    sub->add_option("--samples", fl.samples, "sample count");
  }

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    int rc = app.exit(e);
    return rc == 0 ? 0 : 2;
  }

  ck::RunConfig cfg;
  try {
    if (!config_path.empty()) ck::apply_config_file(config_path, cfg);
    auto subs = app.get_subcommands();
    if (!subs.empty()) cfg.command = subs.front()->get_name();
    if (!fl.input.empty()) cfg.input = fl.input;
    if (!fl.out.empty()) cfg.out = fl.out;
    if (!fl.svg.empty()) cfg.svg = fl.svg;
    if (fl.epsilon) cfg.epsilon = fl.epsilon;
    if (fl.alpha) cfg.alpha = fl.alpha;
    if (fl.net_epsilon) cfg.net_epsilon = fl.net_epsilon;
    if (fl.delta) cfg.delta = fl.delta;
    if (fl.cv) cfg.cv = fl.cv;
    if (fl.depth) cfg.depth = fl.depth;
    if (fl.section) cfg.section = fl.section;
    if (fl.samples) cfg.samples = fl.samples;
    if (fl.seed) cfg.seed = *fl.seed;
    ck::validate_config(cfg);
  } catch (const std::exception& e) {
    std::cerr << "error: " << e.what() << '\n';
    return 2;
  }

  auto [report, status] = ck::execute(cfg);
  std::string text = report.dump(2) + "\n";
  if (status == 2) std::cerr << "error: " << report.value("error", std::string{}) << '\n';
  if (cfg.out.empty()) {
    std::cout << text;
  } else {
    try {
      ck::write_atomically(cfg.out, text);
    } catch (const std::exception& e) {
      std::cerr << "error: " << e.what() << '\n';
      return 2;
    }
  }
  return status;
}
