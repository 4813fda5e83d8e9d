#include "simplexia/experiments.hpp"

#include <algorithm>
#include <chrono>
#include <cmath>
#include <cstdio>
#include <random>
#include <sstream>
#include <stdexcept>

#include "simplexia/parallel.hpp"
#include "simplexia/symmetrization.hpp"

namespace simplexia {

namespace {

using Clock = std::chrono::steady_clock;

double elapsed_ms(Clock::time_point t0) {
  return std::chrono::duration<double, std::milli>(Clock::now() - t0).count();
}

std::string format_number(double x) {
  if (std::isinf(x)) return x > 0 ? "inf" : "-inf";
  char buf[32];
  std::snprintf(buf, sizeof buf, "%.17g", x);
  return buf;
}

Json tolerances_json(const ExperimentConfig& cfg) {
  return Json{{"quadrature", cfg.quad_tol}, {"solver", cfg.solver_tol}, {"comparison", cfg.comparison_tol}};
}

struct Evaluated {
  ApproxResult result;
  double sigma = 0.0;
  double ms = 0.0;
};

Evaluated evaluate(const Simplex& s, const AsymParams& params, const SolverOptions& opts) {
  const auto t0 = Clock::now();
  Evaluated e;
  e.result = best_error(s, params, opts);
  e.sigma = sigma_from_error(s, e.result.error, params.p);
  e.ms = elapsed_ms(t0);
  return e;
}

CaseRecord make_record(const std::string& role, int d, const AsymParams& params, std::uint64_t seed,
                       const Evaluated& e) {
  CaseRecord r;
  r.role = role;
  r.d = d;
  r.params = params;
  r.seed = seed;
  r.sigma = e.sigma;
  r.flags = e.result.flags;
  r.evaluator = to_string(e.result.evaluator);
  r.runtime_ms = e.ms;
  return r;
}

Json check(const std::string& name, bool passed, double value, double threshold) {
  return Json{{"name", name}, {"passed", passed}, {"value", number_to_json(value)},
              {"threshold", number_to_json(threshold)}};
}

// Regular-simplex baselines, one per parameter set.
std::vector<Evaluated> regular_baselines(const ExperimentConfig& cfg, const std::vector<AsymParams>& grid) {
  const Simplex regular = regular_unit_simplex(cfg.d);
  const SolverOptions opts = cfg.solver_options();
  std::vector<Evaluated> out(grid.size());
  parallel_for(grid.size(), [&](std::size_t k) { out[k] = evaluate(regular, grid[k], opts); });
  return out;
}

ExperimentReport start_report(const std::string& command, const ExperimentConfig& cfg) {
  cfg.validate();
  ExperimentReport rep;
  rep.command = command;
  rep.config = config_to_json(cfg);
  return rep;
}

void finish_report(ExperimentReport& rep, Clock::time_point t0) {
  long flagged = 0, violations = 0;
  double lo = kInf, hi = -kInf;
  for (const auto& r : rep.records) {
    if (!r.flags.empty()) ++flagged;
    if (r.violation) ++violations;
    lo = std::min(lo, r.margin);
    hi = std::max(hi, r.margin);
  }
  if (rep.summary.contains("checks"))
    for (const auto& c : rep.summary["checks"])
      if (!c["passed"].get<bool>()) ++violations;
  rep.violations = violations;
  rep.unresolved_flags = flagged;
  rep.summary["records"] = rep.records.size();
  rep.summary["min_margin"] = rep.records.empty() ? Json(nullptr) : number_to_json(lo);
  rep.summary["max_margin"] = rep.records.empty() ? Json(nullptr) : number_to_json(hi);
  rep.summary["violations"] = violations;
  rep.summary["flagged_records"] = flagged;
  rep.summary["passed"] = rep.passed();
  rep.runtime_s = elapsed_ms(t0) / 1000.0;
}

std::vector<Simplex> input_simplices(const ExperimentConfig& cfg, std::vector<std::uint64_t>& seeds) {
  std::vector<Simplex> out;
  if (cfg.simplex_path) {
    out.push_back(read_simplex_file(*cfg.simplex_path));
    seeds.push_back(0);
    return out;
  }
  for (int i = 0; i < cfg.samples; ++i) {
    seeds.push_back(sample_seed(cfg.seed, cfg.d, static_cast<std::uint64_t>(i)));
    out.push_back(random_unit_simplex(cfg.d, seeds.back()));
  }
  return out;
}

}  // namespace

void ExperimentConfig::validate() const {
  if (d < 1 || d > 8) throw std::invalid_argument("d must lie in [1, 8]");
  if (samples < 1) throw std::invalid_argument("samples must be at least 1");
  if (!(quad_tol > 0.0) || !(solver_tol > 0.0) || !(comparison_tol > 0.0))
    throw std::invalid_argument("tolerances must be positive");
  if (p_list.empty()) throw std::invalid_argument("p list is empty");
  if (weights.empty()) throw std::invalid_argument("alpha-beta list is empty");
  for (const auto& params : param_grid()) params.validate();
  if (perturbed < 0) throw std::invalid_argument("perturbed must be non-negative");
  if (!(jitter > 0.0)) throw std::invalid_argument("jitter must be positive");
  if (ladder.empty()) throw std::invalid_argument("ladder is empty");
  for (double w : ladder)
    if (!(w > 0.0) || std::isinf(w)) throw std::invalid_argument("ladder weights must be positive and finite");
  if (diameters.size() < 2) throw std::invalid_argument("lower-bound needs at least two diameters");
  if (iterations < 0) throw std::invalid_argument("iterations must be non-negative");
}

SolverOptions ExperimentConfig::solver_options() const {
  SolverOptions o;
  o.quad_tol = quad_tol;
  o.solver_tol = solver_tol;
  return o;
}

std::vector<AsymParams> ExperimentConfig::param_grid() const {
  std::vector<AsymParams> out;
  for (double p : p_list)
    for (const auto& [a, b] : weights) out.push_back(AsymParams{p, a, b});
  return out;
}

Json config_to_json(const ExperimentConfig& cfg) {
  Json p = Json::array();
  for (double x : cfg.p_list) p.push_back(number_to_json(x));
  Json w = Json::array();
  for (const auto& [a, b] : cfg.weights) w.push_back(Json::array({number_to_json(a), number_to_json(b)}));
  Json out{{"d", cfg.d},
           {"p", p},
           {"alpha_beta", w},
           {"samples", cfg.samples},
           {"seed", cfg.seed},
           {"tolerances", tolerances_json(cfg)}};
  if (cfg.simplex_path) out["simplex"] = *cfg.simplex_path;
  return out;
}

std::uint64_t sample_seed(std::uint64_t base, int d, std::uint64_t index) {
  // splitmix64 finalizer over (base, d, index)
  std::uint64_t z = base * 0x9E3779B97F4A7C15ULL + static_cast<std::uint64_t>(d) * 0xBF58476D1CE4E5B9ULL + index;
  z = (z ^ (z >> 30)) * 0xBF58476D1CE4E5B9ULL;
  z = (z ^ (z >> 27)) * 0x94D049BB133111EBULL;
  return z ^ (z >> 31);
}

Simplex perturbed_regular(int d, double jitter, std::uint64_t seed) {
  std::mt19937_64 rng(seed);
  std::uniform_real_distribution<double> u(-jitter, jitter);
  Matrix v = regular_unit_simplex(d).vertices();
  for (Eigen::Index i = 0; i < v.rows(); ++i)
    for (Eigen::Index j = 0; j < v.cols(); ++j) v(i, j) += u(rng);
  return normalized(Simplex(v));
}

double sliver_height(int d, double L) {
  if (d == 1) return 0.0;
  return std::pow(std::tgamma(d + 1.0) / L, 1.0 / (d - 1));
}

Simplex sliver(int d, double L) {
  if (d < 2) throw std::invalid_argument("sliver needs d >= 2");
  const double eta = sliver_height(d, L);
  Matrix v = Matrix::Zero(d + 1, d);
  v(0, 0) = -0.5 * L;
  v(1, 0) = 0.5 * L;
  for (int j = 1; j < d; ++j) v(j + 1, j) = eta;
  Simplex s(v);
  if (diameter(s) > L * (1.0 + 1e-12))
    throw std::invalid_argument("sliver: L = " + format_number(L) + " is too small for the base to be the diameter");
  return s;
}

double loglog_slope(const std::vector<double>& x, const std::vector<double>& y) {
  if (x.size() != y.size() || x.size() < 2) throw std::invalid_argument("loglog_slope needs two or more points");
  const auto n = static_cast<double>(x.size());
  double sx = 0, sy = 0, sxx = 0, sxy = 0;
  for (std::size_t i = 0; i < x.size(); ++i) {
    const double lx = std::log(x[i]), ly = std::log(y[i]);
    sx += lx;
    sy += ly;
    sxx += lx * lx;
    sxy += lx * ly;
  }
  return (n * sxy - sx * sy) / (n * sxx - sx * sx);
}

Json ExperimentReport::to_json(bool include_runtime) const {
  Json recs = Json::array();
  for (const auto& r : records) {
    Json j{{"role", r.role},
           {"d", r.d},
           {"p", number_to_json(r.params.p)},
           {"alpha", number_to_json(r.params.alpha)},
           {"beta", number_to_json(r.params.beta)},
           {"seed", r.seed},
           {"sigma", number_to_json(r.sigma)},
           {"sigma_regular", number_to_json(r.sigma_regular)},
           {"margin", number_to_json(r.margin)},
           {"violation", r.violation},
           {"flags", r.flags},
           {"evaluator", r.evaluator},
           {"tolerances", config.at("tolerances")}};
    for (const auto& [k, v] : r.extra.items()) j[k] = v;
    if (include_runtime) j["runtime_ms"] = r.runtime_ms;
    recs.push_back(std::move(j));
  }
  Json out{{"command", command}, {"config", config}, {"summary", summary}, {"records", recs}};
  if (include_runtime) out["runtime_s"] = runtime_s;
  return out;
}

std::string ExperimentReport::to_csv() const {
  std::ostringstream os;
  os << "d,p,alpha,beta,seed,sigma,sigma_regular,margin,flags\n";
  for (const auto& r : records) {
    std::string flags;
    for (const auto& f : r.flags) flags += (flags.empty() ? "" : ";") + f;
    os << r.d << ',' << format_number(r.params.p) << ',' << format_number(r.params.alpha) << ','
       << format_number(r.params.beta) << ',' << r.seed << ',' << format_number(r.sigma) << ','
       << format_number(r.sigma_regular) << ',' << format_number(r.margin) << ',' << flags << '\n';
  }
  return os.str();
}

ExperimentReport cmd_sigma(const ExperimentConfig& cfg_in) {
  const auto t0 = Clock::now();
  ExperimentConfig cfg = cfg_in;
  std::vector<std::uint64_t> seeds;
  if (cfg.simplex_path) cfg.d = read_simplex_file(*cfg.simplex_path).dim();
  ExperimentReport rep = start_report("sigma", cfg);
  const std::vector<Simplex> inputs = input_simplices(cfg, seeds);
  const std::vector<AsymParams> grid = cfg.param_grid();
  const std::vector<Evaluated> base = regular_baselines(cfg, grid);
  const SolverOptions opts = cfg.solver_options();

  const std::size_t n = inputs.size() * grid.size();
  std::vector<CaseRecord> recs(n);
  parallel_for(n, [&](std::size_t t) {
    const std::size_t i = t / grid.size(), k = t % grid.size();
    const Simplex unit = normalized(inputs[i]);
    const Evaluated e = evaluate(unit, grid[k], opts);
    CaseRecord r = make_record("sigma", cfg.d, grid[k], seeds[i], e);
    r.sigma_regular = base[k].sigma;
    r.margin = e.sigma / base[k].sigma - 1.0;
    r.violation = r.margin < -cfg.comparison_tol;
    r.extra["approx"] = to_json(e.result);
    r.extra["volume"] = volume(inputs[i]);
    r.extra["sigma_unnormalized"] = number_to_json(sigma(inputs[i], grid[k], opts));
    if (cfg.simplex_path || r.violation) r.extra["simplex"] = to_json(inputs[i]);
    recs[t] = std::move(r);
  });
  rep.records = std::move(recs);

  Json baselines = Json::array();
  for (std::size_t k = 0; k < grid.size(); ++k)
    baselines.push_back(Json{{"params", to_json(grid[k])}, {"sigma_regular", base[k].sigma},
                             {"approx", to_json(base[k].result)}});
  rep.summary["regular"] = baselines;
  finish_report(rep, t0);
  return rep;
}

ExperimentReport cmd_verify_theorem(const ExperimentConfig& cfg) {
  const auto t0 = Clock::now();
  ExperimentReport rep = start_report("verify-theorem", cfg);
  const std::vector<AsymParams> grid = cfg.param_grid();
  const std::vector<Evaluated> base = regular_baselines(cfg, grid);
  const SolverOptions opts = cfg.solver_options();

  struct Sample {
    std::string role;
    std::uint64_t seed;
    Simplex simplex;
  };
  std::vector<Sample> samples;
  if (cfg.include_regular) samples.push_back({"regular", 0, regular_unit_simplex(cfg.d)});
  for (int i = 0; i < cfg.samples; ++i) {
    const std::uint64_t s = sample_seed(cfg.seed, cfg.d, static_cast<std::uint64_t>(i));
    samples.push_back({"random", s, random_unit_simplex(cfg.d, s)});
  }
  for (int i = 0; i < cfg.perturbed; ++i) {
    const std::uint64_t s = sample_seed(cfg.seed ^ 0x5045525455524245ULL, cfg.d, static_cast<std::uint64_t>(i));
    samples.push_back({"perturbed", s, perturbed_regular(cfg.d, cfg.jitter, s)});
  }

  const std::size_t n = samples.size() * grid.size();
  std::vector<CaseRecord> recs(n);
  parallel_for(n, [&](std::size_t t) {
    const std::size_t i = t / grid.size(), k = t % grid.size();
    const Sample& smp = samples[i];
    const Evaluated e = evaluate(smp.simplex, grid[k], opts);
    CaseRecord r = make_record(smp.role, cfg.d, grid[k], smp.seed, e);
    r.sigma_regular = base[k].sigma;
    r.margin = e.sigma / base[k].sigma - 1.0;
    if (smp.role == "perturbed") {
      r.violation = !(e.sigma > base[k].sigma + cfg.strict_margin);
      r.extra["excess"] = e.sigma - base[k].sigma;
    } else {
      r.violation = e.sigma < base[k].sigma * (1.0 - cfg.comparison_tol);
    }
    if (r.violation || !r.flags.empty()) r.extra["simplex"] = to_json(smp.simplex);
    recs[t] = std::move(r);
  });
  rep.records = std::move(recs);

  Json per_params = Json::array();
  for (std::size_t k = 0; k < grid.size(); ++k) {
    double lo = kInf, hi = -kInf;
    long count = 0, bad = 0;
    for (const auto& r : rep.records) {
      if (r.params.p != grid[k].p || r.params.alpha != grid[k].alpha || r.params.beta != grid[k].beta) continue;
      lo = std::min(lo, r.margin);
      hi = std::max(hi, r.margin);
      ++count;
      if (r.violation) ++bad;
    }
    per_params.push_back(Json{{"params", to_json(grid[k])},
                              {"sigma_regular", base[k].sigma},
                              {"regular_evaluator", to_string(base[k].result.evaluator)},
                              {"cases", count},
                              {"violations", bad},
                              {"min_margin", number_to_json(lo)},
                              {"max_margin", number_to_json(hi)}});
  }
  rep.summary["by_params"] = per_params;
  finish_report(rep, t0);
  return rep;
}

ExperimentReport cmd_limits(const ExperimentConfig& cfg) {
  const auto t0 = Clock::now();
  ExperimentReport rep = start_report("limits", cfg);
  const Simplex T = regular_unit_simplex(cfg.d);
  const SolverOptions opts = cfg.solver_options();

  struct Task {
    std::size_t p_index;
    bool beta_side;
    std::size_t rung;
  };
  std::vector<Task> tasks;
  for (std::size_t pi = 0; pi < cfg.p_list.size(); ++pi)
    for (bool side : {true, false})
      for (std::size_t k = 0; k < cfg.ladder.size(); ++k) tasks.push_back({pi, side, k});

  std::vector<ApproxResult> below(cfg.p_list.size()), above(cfg.p_list.size());
  parallel_for(2 * cfg.p_list.size(), [&](std::size_t t) {
    const std::size_t pi = t / 2;
    if (t % 2 == 0)
      below[pi] = best_onesided(T, cfg.p_list[pi], Side::Below, opts);
    else
      above[pi] = best_onesided(T, cfg.p_list[pi], Side::Above, opts);
  });

  std::vector<Evaluated> results(tasks.size());
  parallel_for(tasks.size(), [&](std::size_t t) {
    const Task& task = tasks[t];
    const double w = cfg.ladder[task.rung];
    const double p = cfg.p_list[task.p_index];
    results[t] = evaluate(T, task.beta_side ? AsymParams{p, 1.0, w} : AsymParams{p, w, 1.0}, opts);
  });

  Json checks = Json::array();
  Json per_p = Json::array();
  for (std::size_t t = 0; t < tasks.size(); ++t) {
    const Task& task = tasks[t];
    const double w = cfg.ladder[task.rung];
    const double p = cfg.p_list[task.p_index];
    const double constrained = (task.beta_side ? below : above)[task.p_index].error;
    const AsymParams params = task.beta_side ? AsymParams{p, 1.0, w} : AsymParams{p, w, 1.0};
    CaseRecord r = make_record(task.beta_side ? "beta-ladder" : "alpha-ladder", cfg.d, params, 0, results[t]);
    r.sigma_regular = constrained;
    r.margin = (constrained - results[t].result.error) / constrained;
    r.extra["error"] = results[t].result.error;
    r.extra["constrained_error"] = constrained;
    r.extra["constrained_side"] = to_string(task.beta_side ? Side::Below : Side::Above);
    // Bounded above by the one-sided value up to solver accuracy.
    r.violation = results[t].result.error > constrained * (1.0 + cfg.solver_tol);
    rep.records.push_back(std::move(r));
  }

  const std::size_t L = cfg.ladder.size();
  for (std::size_t pi = 0; pi < cfg.p_list.size(); ++pi) {
    for (bool side : {true, false}) {
      const std::size_t off = (pi * 2 + (side ? 0 : 1)) * L;
      const std::string tag = std::string(side ? "beta" : "alpha") + "-ladder p=" + format_number(cfg.p_list[pi]);
      bool monotone_error = true, monotone_gap = true;
      for (std::size_t k = 1; k < L; ++k) {
        const auto& prev = rep.records[off + k - 1];
        const auto& cur = rep.records[off + k];
        const double e0 = prev.extra["error"].get<double>(), e1 = cur.extra["error"].get<double>();
        if (cfg.ladder[k] > cfg.ladder[k - 1]) {
          if (e1 < e0 * (1.0 - cfg.solver_tol)) monotone_error = false;
          if (!(cur.margin < prev.margin)) monotone_gap = false;
        }
      }
      const double final_gap = rep.records[off + L - 1].margin;
      checks.push_back(check(tag + ": error nondecreasing", monotone_error, 0.0, cfg.solver_tol));
      checks.push_back(check(tag + ": gap decreasing", monotone_gap, final_gap, 0.0));
      if (side) checks.push_back(check(tag + ": final gap", final_gap < cfg.limit_gap_tol, final_gap, cfg.limit_gap_tol));
    }
    const double p = cfg.p_list[pi];
    const double interp = eval_error(T, vertex_interpolant(T), AsymParams{p, 1.0, 1.0}, cfg.quad_tol);
    const double rel = std::abs(above[pi].error - interp) / interp;
    per_p.push_back(Json{{"p", number_to_json(p)},
                         {"below_constrained", to_json(below[pi])},
                         {"above_constrained", to_json(above[pi])},
                         {"interpolant_error", interp},
                         {"above_vs_interpolant_rel", rel},
                         {"above_equals_interpolant", rel <= cfg.comparison_tol},
                         // E+ constrains u <= f and E- constrains u >= f; the interpolant lies above Q.
                         {"interpolant_matches", rel <= cfg.comparison_tol ? "E-" : "neither"}});
    for (const auto* r : {&below[pi], &above[pi]})
      if (!r->flags.empty()) ++rep.unresolved_flags;
  }
  rep.summary["one_sided"] = per_p;
  rep.summary["sign_convention"] = "E+ : u <= f (from below), E- : u >= f (from above)";
  rep.summary["checks"] = checks;
  const long extra_flags = rep.unresolved_flags;
  finish_report(rep, t0);
  rep.unresolved_flags += extra_flags;
  rep.summary["flagged_records"] = rep.unresolved_flags;
  rep.summary["passed"] = rep.passed();
  return rep;
}

ExperimentReport cmd_lower_bound(const ExperimentConfig& cfg) {
  const auto t0 = Clock::now();
  ExperimentReport rep = start_report("lower-bound", cfg);
  if (cfg.d < 2) throw std::invalid_argument("lower-bound needs d >= 2");
  const std::vector<AsymParams> grid = cfg.param_grid();
  const std::vector<Evaluated> base = regular_baselines(cfg, grid);
  const SolverOptions opts = cfg.solver_options();
  const std::size_t nd = cfg.diameters.size();

  std::vector<Simplex> family;
  for (double L : cfg.diameters) family.push_back(sliver(cfg.d, L));

  std::vector<CaseRecord> recs(grid.size() * nd);
  parallel_for(recs.size(), [&](std::size_t t) {
    const std::size_t k = t / nd, i = t % nd;
    const Evaluated e = evaluate(family[i], grid[k], opts);
    CaseRecord r = make_record("sliver", cfg.d, grid[k], 0, e);
    const double diam = diameter(family[i]);
    r.sigma_regular = base[k].sigma;
    r.margin = e.sigma / (diam * diam);
    r.extra["L"] = cfg.diameters[i];
    r.extra["height"] = sliver_height(cfg.d, cfg.diameters[i]);
    r.extra["diameter"] = diam;
    r.extra["volume"] = volume(family[i]);
    r.extra["sigma_over_diam2"] = r.margin;
    recs[t] = std::move(r);
  });
  rep.records = std::move(recs);

  Json checks = Json::array();
  Json fits = Json::array();
  for (std::size_t k = 0; k < grid.size(); ++k) {
    std::vector<double> xs, ys;
    double constant = kInf;
    bool nondecreasing = true;
    for (std::size_t i = 0; i < nd; ++i) {
      const auto& r = rep.records[k * nd + i];
      xs.push_back(r.extra["diameter"].get<double>());
      ys.push_back(r.sigma);
      constant = std::min(constant, r.margin);
      if (i > 0 && xs[i] > xs[i - 1] && ys[i] < ys[i - 1] * (1.0 - cfg.comparison_tol)) nondecreasing = false;
    }
    const double slope = loglog_slope(xs, ys);
    const std::string tag = "p=" + format_number(grid[k].p) + " alpha=" + format_number(grid[k].alpha) +
                            " beta=" + format_number(grid[k].beta);
    checks.push_back(check(tag + ": slope", slope >= cfg.min_slope, slope, cfg.min_slope));
    checks.push_back(check(tag + ": constant positive", constant > 0.0, constant, 0.0));
    checks.push_back(check(tag + ": sigma nondecreasing in diameter", nondecreasing, 0.0, cfg.comparison_tol));
    fits.push_back(Json{{"params", to_json(grid[k])}, {"slope", slope}, {"constant", constant}});
  }
  rep.summary["family"] = Json{{"construction", "(+-L/2, 0, ...) and eta e_j, j = 2..d, eta = (d!/L)^(1/(d-1))"},
                               {"diameters", cfg.diameters}};
  rep.summary["fits"] = fits;
  rep.summary["checks"] = checks;
  finish_report(rep, t0);
  return rep;
}

ExperimentReport cmd_symmetrize(const ExperimentConfig& cfg_in) {
  const auto t0 = Clock::now();
  ExperimentConfig cfg = cfg_in;
  if (cfg.simplex_path) cfg.d = read_simplex_file(*cfg.simplex_path).dim();
  ExperimentReport rep = start_report("symmetrize", cfg);
  std::vector<std::uint64_t> seeds;
  std::vector<Simplex> inputs = input_simplices(cfg, seeds);
  for (auto& s : inputs) s = normalized(s);
  const std::vector<AsymParams> grid = cfg.param_grid();
  const std::vector<Evaluated> base = regular_baselines(cfg, grid);
  const SolverOptions opts = cfg.solver_options();

  std::vector<SymmetrizationReport> steps;
  for (const auto& s : inputs) steps.push_back(symmetrize_step(s));

  std::vector<CaseRecord> recs(inputs.size() * grid.size());
  parallel_for(recs.size(), [&](std::size_t t) {
    const std::size_t i = t / grid.size(), k = t % grid.size();
    const Evaluated e = evaluate(inputs[i], grid[k], opts);
    const Evaluated star = evaluate(steps[i].T_star, grid[k], opts);
    CaseRecord r = make_record("symmetrize", cfg.d, grid[k], seeds[i], e);
    for (const auto& f : star.result.flags)
      if (std::find(r.flags.begin(), r.flags.end(), f) == r.flags.end()) r.flags.push_back(f);
    r.sigma_regular = base[k].sigma;
    r.margin = e.sigma - steps[i].factor * star.sigma;
    r.violation = r.margin < -cfg.comparison_tol;
    r.extra["sigma_star"] = star.sigma;
    r.extra["factor"] = steps[i].factor;
    r.extra["pair"] = {steps[i].pair.first, steps[i].pair.second};
    r.runtime_ms += star.ms;
    recs[t] = std::move(r);
  });
  rep.records = std::move(recs);

  Json checks = Json::array();
  Json samples = Json::array();
  for (std::size_t i = 0; i < inputs.size(); ++i) {
    const SymmetrizationReport& st = steps[i];
    const std::string tag = "sample " + std::to_string(i);
    const double det_err = std::max({std::abs(st.det_S - 1.0), std::abs(st.det_Shat - 1.0), std::abs(st.det_F - 1.0)});
    const double vol_err = std::max({std::abs(volume(st.T_tilde) - 1.0), std::abs(volume(st.T_hat) - 1.0),
                                     std::abs(volume(st.T_star) - 1.0)});
    checks.push_back(check(tag + ": determinants", det_err <= 1e-12, det_err, 1e-12));
    checks.push_back(check(tag + ": determinant lemma", st.determinant_lemma_residual <= 1e-10,
                           st.determinant_lemma_residual, 1e-10));
    checks.push_back(check(tag + ": cholesky", st.cholesky_residual <= 1e-10, st.cholesky_residual, 1e-10));
    checks.push_back(check(tag + ": volumes", vol_err <= 1e-12, vol_err, 1e-12));
    if (!st.symmetric) checks.push_back(check(tag + ": strict gain", st.factor > 1.0 + 1e-12, st.factor, 1.0 + 1e-12));
    Json j = cfg.full_report ? to_json(st)
                             : Json{{"pair", {st.pair.first, st.pair.second}},
                                    {"factor", st.factor},
                                    {"symmetric", st.symmetric},
                                    {"D", vector_to_json(st.D)},
                                    {"T_star", simplexia::to_json(st.T_star)}};
    j["seed"] = seeds[i];
    j["input"] = simplexia::to_json(inputs[i]);
    j["pair_gains"] = Json::array();
    for (const auto& [pr, g] : pair_gains(inputs[i])) j["pair_gains"].push_back(Json{{"pair", {pr.first, pr.second}}, {"D", g}});

    if (cfg.iterations > 0) {
      Json runs = Json::array();
      for (const auto& params : grid) {
        const auto seq = symmetrize_iterate(inputs[i], cfg.iterations, cfg.stop_tol, params, opts);
        Json iters = Json::array();
        bool nonincreasing = true;
        for (std::size_t k = 0; k < seq.size(); ++k) {
          iters.push_back(Json{{"sigma", seq[k].sigma},
                               {"factor", seq[k].factor},
                               {"distance_to_regular", seq[k].distance_to_regular},
                               {"flags", seq[k].flags}});
          if (k > 0 && seq[k].sigma > seq[k - 1].sigma * (1.0 + cfg.comparison_tol)) nonincreasing = false;
          if (!seq[k].flags.empty()) ++rep.unresolved_flags;
        }
        const std::string ptag = tag + " p=" + format_number(params.p) + " alpha=" + format_number(params.alpha) +
                                 " beta=" + format_number(params.beta);
        checks.push_back(check(ptag + ": iterate sigma nonincreasing", nonincreasing, seq.back().sigma, seq.front().sigma));
        runs.push_back(Json{{"params", to_json(params)}, {"iterates", iters}});
      }
      j["iterations"] = runs;
    }
    samples.push_back(std::move(j));
  }
  rep.summary["samples"] = samples;
  rep.summary["checks"] = checks;
  const long extra_flags = rep.unresolved_flags;
  finish_report(rep, t0);
  rep.unresolved_flags += extra_flags;
  rep.summary["flagged_records"] = rep.unresolved_flags;
  rep.summary["passed"] = rep.passed();
  return rep;
}

}  // namespace simplexia
