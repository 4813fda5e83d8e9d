// Acceptance suite: one PASS/FAIL line per criterion, nonzero exit on any failure.
#include <chrono>
#include <cmath>
#include <cstdio>
#include <cstdlib>
#include <string>
#include <vector>

#include "oracles.hpp"
#include "simplexia/experiments.hpp"
#include "simplexia/parallel.hpp"
#include "simplexia/symmetrization.hpp"

using namespace simplexia;

namespace {

using Clock = std::chrono::steady_clock;

double seconds_since(Clock::time_point t0) { return std::chrono::duration<double>(Clock::now() - t0).count(); }

int failures = 0;

void report(const char* id, bool ok, const std::string& detail) {
  if (!ok) ++failures;
  std::printf("%s %s  %s\n", id, ok ? "PASS" : "FAIL", detail.c_str());
  std::fflush(stdout);
}

std::string fmt(const char* f, auto... args) {
  char buf[512];
  std::snprintf(buf, sizeof buf, f, args...);
  return buf;
}

Simplex unit_interval() {
  Matrix v(2, 1);
  v << 0, 1;
  return Simplex(v);
}

void a1() {
  const double minimax = oracle::grid_minimax_interval();
  const double ls = oracle::normal_equations_interval();
  bool ok = std::abs(minimax - 0.125) < 1e-6 && std::abs(ls - 1.0 / (6.0 * std::sqrt(5.0))) < 1e-12;
  double worst_time = 0.0, worst_err = 0.0;
  SolverOptions numeric;
  numeric.evaluator = EvaluatorChoice::Quadrature;
  for (const auto& [params, expected, opts] :
       {std::tuple{AsymParams{kInf, 1.0, 1.0}, minimax, SolverOptions{}},
        std::tuple{AsymParams{2.0, 1.0, 1.0}, ls, SolverOptions{}}, std::tuple{AsymParams{2.0, 1.0, 1.0}, ls, numeric}}) {
    const auto t0 = Clock::now();
    const ApproxResult r = best_approx(unit_interval(), params, opts);
    const double t = seconds_since(t0);
    worst_time = std::max(worst_time, t);
    worst_err = std::max(worst_err, std::abs(r.error - expected));
    ok = ok && std::abs(r.error - expected) <= 1e-6 && t < 1.0 && r.flags.empty();
  }
  report("A1", ok, fmt("interval oracles 1/8 and 1/(6 sqrt 5): max abs err %.2e, slowest solve %.3f s", worst_err,
                       worst_time));
}

void a2() {
  const auto t0 = Clock::now();
  double worst = 0.0;
  for (int i = 0; i < 50; ++i) {
    const int d = i < 25 ? 2 : 3;
    const Simplex s = random_unit_simplex(d, sample_seed(2, d, i));
    std::mt19937_64 rng(1000 + i);
    std::normal_distribution<double> g(0.0, 0.5);
    AffineFunction u = vertex_interpolant(s);
    for (int k = 0; k < d; ++k) u.a(k) += g(rng);
    u.c += g(rng) - 0.3 * std::abs(u.c);
    const double q = eval_error(s, u, {2.0, 1.0, 1.0});
    const double m = eval_error_p2_moments(s, u);
    worst = std::max(worst, std::abs(q - m) / m);
  }
  const double t = seconds_since(t0);
  report("A2", worst <= 1e-8 && t < 30.0, fmt("50 pairs, max rel diff %.2e, %.2f s", worst, t));
}

void a3() {
  const auto t0 = Clock::now();
  long cases = 0, bad = 0, flagged = 0;
  double min_margin = kInf;
  for (int d : {2, 3}) {
    ExperimentConfig cfg;
    cfg.d = d;
    cfg.p_list = {1.0, 2.0, kInf};
    cfg.weights = {{1.0, 1.0}, {1.0, 3.0}, {3.0, 1.0}, {1.0, kInf}, {kInf, 1.0}};
    cfg.samples = 100;
    const ExperimentReport rep = cmd_verify_theorem(cfg);
    for (const auto& r : rep.records) {
      ++cases;
      if (r.sigma < r.sigma_regular * (1.0 - 1e-6)) ++bad;
      if (!r.flags.empty()) ++flagged;
      min_margin = std::min(min_margin, r.margin);
    }
  }
  const double t = seconds_since(t0);
  report("A3", bad == 0 && flagged == 0 && cases == 3000 && t < 900.0,
         fmt("%ld cases, %ld violations, %ld flagged, min relative margin %.3e, %.1f s", cases, bad, flagged,
             min_margin, t));
}

void a4() {
  const auto t0 = Clock::now();
  struct Task {
    int d;
    int index;
    AsymParams params;
  };
  std::vector<Task> tasks;
  std::vector<AsymParams> low, high{{2.0, 1.0, 1.0}, {kInf, 1.0, 1.0}, {kInf, 1.0, 3.0}};
  for (double p : {1.0, 2.0, kInf})
    for (auto [a, b] : {std::pair{1.0, 1.0}, std::pair{1.0, 3.0}}) low.push_back({p, a, b});
  std::vector<std::vector<SymmetrizationReport>> steps(5);
  double det_err = 0.0, lemma = 0.0;
  long not_strict = 0;
  for (int d : {2, 3, 4}) {
    for (int i = 0; i < 25; ++i) {
      steps[d].push_back(symmetrize_step(random_unit_simplex(d, sample_seed(4, d, i))));
      const auto& st = steps[d].back();
      det_err = std::max({det_err, std::abs(st.det_S - 1.0), std::abs(st.det_Shat - 1.0), std::abs(st.det_F - 1.0)});
      Vector oracle_D(st.y.size());
      double acc = 1.0;
      for (Eigen::Index k = 0; k < st.y.size(); ++k) oracle_D(k) = acc += st.y(k) * st.y(k);
      for (Eigen::Index k = 0; k < st.D.size(); ++k) lemma = std::max(lemma, std::abs(st.D(k) - oracle_D(k)) / oracle_D(k));
      if (!st.symmetric && !(st.D(st.D.size() - 1) > 1.0)) ++not_strict;
      for (const auto& params : d == 4 ? high : low) tasks.push_back({d, i, params});
    }
  }
  std::vector<double> margins(tasks.size());
  std::vector<int> flags(tasks.size(), 0);
  parallel_for(tasks.size(), [&](std::size_t t) {
    const Task& task = tasks[t];
    const SymmetrizationReport& st = steps[task.d][task.index];
    const Simplex s = random_unit_simplex(task.d, sample_seed(4, task.d, task.index));
    const ApproxResult before = best_error(s, task.params);
    const ApproxResult after = best_error(st.T_star, task.params);
    margins[t] = sigma_from_error(s, before.error, task.params.p) -
                 st.factor * sigma_from_error(st.T_star, after.error, task.params.p);
    flags[t] = static_cast<int>(before.flags.size() + after.flags.size());
  });
  double worst = kInf;
  long bad = 0, flagged = 0;
  for (std::size_t t = 0; t < tasks.size(); ++t) {
    worst = std::min(worst, margins[t]);
    if (margins[t] < -1e-6) ++bad;
    if (flags[t]) ++flagged;
  }
  const bool ok = bad == 0 && flagged == 0 && not_strict == 0 && det_err <= 1e-12 && lemma <= 1e-10;
  report("A4", ok,
         fmt("75 simplices, %zu sigma audits (d=4: p=2 1:1, p=inf 1:1 and 1:3), min margin %.3e, %ld flagged, "
             "max det err %.1e, lemma %.1e, %.1f s",
             tasks.size(), worst, flagged, det_err, lemma, seconds_since(t0)));
}

void a5() {
  bool ok = true;
  double worst = 0.0;
  int below_matches = 0;
  for (int d : {1, 2})
    for (double p : {1.0, 2.0, kInf}) {
      const Simplex reg = regular_unit_simplex(d);
      const ApproxResult above = best_onesided(reg, p, Side::Above);
      const double interp = eval_error(reg, vertex_interpolant(reg), {p, 1.0, 1.0});
      const double below = best_onesided(reg, p, Side::Below).error;
      worst = std::max(worst, std::abs(above.error - interp));
      ok = ok && std::abs(above.error - interp) <= 1e-6 && above.flags.empty();
      if (std::abs(below - interp) <= 1e-6) ++below_matches;
    }
  report("A5", ok, fmt("from-above optimum equals the interpolant error (max abs diff %.2e); it matches E- "
                       "(u >= f); E+ (u <= f) also matches in %d of 6 cases",
                       worst, below_matches));
}

void a6() {
  ExperimentConfig cfg;
  cfg.d = 2;
  cfg.p_list = {2.0};
  const ExperimentReport rep = cmd_limits(cfg);
  std::vector<double> gaps;
  for (const auto& r : rep.records)
    if (r.role == "beta-ladder") gaps.push_back(r.margin);
  bool ok = gaps.size() == 5 && rep.unresolved_flags == 0;
  for (std::size_t k = 1; ok && k < gaps.size(); ++k) ok = gaps[k] < gaps[k - 1];
  ok = ok && gaps.back() < 1e-4;
  std::string ladder;
  for (double g : gaps) ladder += fmt(" %.3e", g);
  report("A6", ok, "beta ladder 1..1e6 relative gaps:" + ladder);
}

void a7() {
  bool ok = true;
  std::string detail;
  for (double p : {1.0, kInf}) {
    ExperimentConfig cfg;
    cfg.d = 2;
    cfg.p_list = {p};
    cfg.weights = {{1.0, 1.0}};
    const ExperimentReport rep = cmd_lower_bound(cfg);
    std::vector<double> x, y;
    double constant = kInf;
    for (const auto& r : rep.records) {
      x.push_back(diameter(sliver(2, r.extra["L"].get<double>())));
      y.push_back(r.sigma);
      constant = std::min(constant, r.sigma / (x.back() * x.back()));
      ok = ok && r.flags.empty();
    }
    const double slope = loglog_slope(x, y);
    ok = ok && slope >= 1.9 && constant > 0.0;
    detail += fmt(" p=%s slope %.3f, min sigma/diam^2 %.3e;", std::isinf(p) ? "inf" : "1", slope, constant);
  }
  report("A7", ok, "slivers diam 2..32:" + detail);
}

void a8() {
  const AsymParams params{2.0, 1.0, 1.0};
  const double s0 = sigma(regular_unit_simplex(2), params);
  double least = kInf;
  for (int i = 0; i < 20; ++i) {
    const Simplex t = perturbed_regular(2, 1e-2, sample_seed(8, 2, i));
    least = std::min(least, sigma(t, params) - s0);
  }
  report("A8", least > 1e-8, fmt("20 perturbed triangles, min sigma - sigma0 = %.3e", least));
}

void a9() {
  const auto t0 = Clock::now();
  const int status = std::system(SIMPLEXIA_PROPERTIES " > /dev/null 2>&1");
  const bool ok = WIFEXITED(status) && WEXITSTATUS(status) == 0;
  report("A9", ok,
         fmt("property suites (convexity, motions, scaling, gradient, exactness) over 3 seeds, %.1f s",
             seconds_since(t0)));
}

}  // namespace

int main() {
  a1();
  a2();
  a3();
  a4();
  a5();
  a6();
  a7();
  a8();
  a9();
  std::printf("%d of 9 criteria failed\n", failures);
  return failures == 0 ? 0 : 1;
}
