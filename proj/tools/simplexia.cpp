// simplexia: experiment harness for best asymmetric affine approximation of |x|^2 on simplices.
#include <cstdio>
#include <fstream>
#include <iostream>
#include <string>
#include <vector>

#include <CLI11.hpp>

#include "simplexia/experiments.hpp"

namespace {

using namespace simplexia;

double parse_number(const std::string& s) {
  if (s == "inf" || s == "infinity" || s == "Infinity" || s == "∞") return kInf;
  std::size_t used = 0;
  const double x = std::stod(s, &used);
  if (used != s.size()) throw std::invalid_argument("not a number: " + s);
  return x;
}

std::vector<double> parse_numbers(const std::vector<std::string>& items) {
  std::vector<double> out;
  for (const auto& s : items) out.push_back(parse_number(s));
  return out;
}

std::vector<std::pair<double, double>> parse_weights(const std::vector<std::string>& items) {
  std::vector<std::pair<double, double>> out;
  for (const auto& s : items) {
    const auto colon = s.find(':');
    if (colon == std::string::npos) throw std::invalid_argument("alpha-beta entries look like 1:3, got " + s);
    out.emplace_back(parse_number(s.substr(0, colon)), parse_number(s.substr(colon + 1)));
  }
  return out;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"Best asymmetric L_p affine approximation of |x|^2 on simplices: experiments"};
  app.set_config("--config", "", "TOML/INI file with the same keys as the long flags; flags win");
  app.require_subcommand(1, 1);

  ExperimentConfig cfg;
  std::vector<std::string> p_items, w_items, ladder_items, diam_items;
  std::string format = "json", simplex_path;
  bool no_runtime = false;

  app.add_option("--d", cfg.d, "dimension")->capture_default_str();
  app.add_option("--p", p_items, "comma-separated p values (inf allowed)")->delimiter(',');
  app.add_option("--alpha-beta", w_items, "comma-separated alpha:beta pairs, e.g. 1:1,1:3,inf:1")->delimiter(',');
  app.add_option("--samples", cfg.samples, "random simplices per case")->capture_default_str();
  app.add_option("--seed", cfg.seed, "base seed")->capture_default_str();
  app.add_option("--tol", cfg.comparison_tol, "comparison tolerance")->capture_default_str();
  app.add_option("--quad-tol", cfg.quad_tol, "quadrature tolerance")->capture_default_str();
  app.add_option("--solver-tol", cfg.solver_tol, "solver first-order tolerance")->capture_default_str();
  app.add_option("--out", cfg.out_path, "output file (default: stdout)");
  app.add_option("--format", format, "json or csv")->check(CLI::IsMember({"json", "csv"}))->capture_default_str();
  app.add_option("--simplex", simplex_path, "simplex JSON file {\"dim\":d,\"vertices\":[[...]]}");
  app.add_option("--perturbed", cfg.perturbed, "verify-theorem: perturbed-regular samples")->capture_default_str();
  app.add_option("--jitter", cfg.jitter, "verify-theorem: vertex jitter of perturbed samples")->capture_default_str();
  app.add_flag("--include-regular", cfg.include_regular, "verify-theorem: add the regular simplex as a sample");
  app.add_option("--ladder", ladder_items, "limits: weight ladder")->delimiter(',');
  app.add_option("--gap-tol", cfg.limit_gap_tol, "limits: relative gap required at the last rung")->capture_default_str();
  app.add_option("--diameters", diam_items, "lower-bound: sliver diameters")->delimiter(',');
  app.add_option("--min-slope", cfg.min_slope, "lower-bound: required log-log slope")->capture_default_str();
  app.add_option("--iterations", cfg.iterations, "symmetrize: iterate this many steps (0: one step)")->capture_default_str();
  app.add_flag("--report", cfg.full_report, "symmetrize: include every intermediate matrix");
  app.add_flag("--no-runtime", no_runtime, "omit timing fields from JSON");

  const std::vector<std::string> commands{"sigma", "verify-theorem", "limits", "lower-bound", "symmetrize"};
  for (const auto& name : commands) app.add_subcommand(name)->fallthrough();
  app.fallthrough();

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    return app.exit(e) == 0 ? 0 : 2;
  }

  ExperimentReport report;
  try {
    if (!p_items.empty()) cfg.p_list = parse_numbers(p_items);
    if (!w_items.empty()) cfg.weights = parse_weights(w_items);
    if (!ladder_items.empty()) cfg.ladder = parse_numbers(ladder_items);
    if (!diam_items.empty()) cfg.diameters = parse_numbers(diam_items);
    if (!simplex_path.empty()) cfg.simplex_path = simplex_path;
    cfg.format = format == "csv" ? OutputFormat::Csv : OutputFormat::Json;
    cfg.include_runtime = !no_runtime;

    const std::string cmd = app.get_subcommands().front()->get_name();
    if (cmd == "sigma") report = cmd_sigma(cfg);
    else if (cmd == "verify-theorem") report = cmd_verify_theorem(cfg);
    else if (cmd == "limits") report = cmd_limits(cfg);
    else if (cmd == "lower-bound") report = cmd_lower_bound(cfg);
    else report = cmd_symmetrize(cfg);
  } catch (const std::exception& e) {
    std::cerr << "simplexia: " << e.what() << '\n';
    return 2;
  }

  const std::string text =
      cfg.format == OutputFormat::Csv ? report.to_csv() : report.to_json(cfg.include_runtime).dump(2) + "\n";
  if (cfg.out_path.empty()) {
    std::cout << text;
  } else {
    std::ofstream out(cfg.out_path);
    if (!out) {
      std::cerr << "simplexia: cannot write " << cfg.out_path << '\n';
      return 2;
    }
    out << text;
  }
  std::cerr << report.command << ": " << report.records.size() << " records, " << report.violations
            << " violations, " << report.unresolved_flags << " flagged\n";
  return report.passed() ? 0 : 1;
}
