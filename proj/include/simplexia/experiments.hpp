#pragma once

#include <cstdint>
#include <optional>
#include <string>
#include <utility>
#include <vector>

#include "simplexia/asym_approx.hpp"
#include "simplexia/serialization.hpp"
#include "simplexia/simplex.hpp"

namespace simplexia {

enum class OutputFormat { Json, Csv };

struct ExperimentConfig {
  int d = 2;
  std::vector<double> p_list{1.0, 2.0, kInf};
  std::vector<std::pair<double, double>> weights{{1.0, 1.0}, {1.0, 3.0}, {3.0, 1.0}};
  int samples = 100;
  std::uint64_t seed = 1;
  double quad_tol = 1e-9;
  double solver_tol = 1e-7;
  double comparison_tol = 1e-6;
  std::string out_path;  // empty: stdout
  OutputFormat format = OutputFormat::Json;
  std::optional<std::string> simplex_path;

  // verify-theorem
  int perturbed = 0;         // perturbed-regular samples added to the random ones
  double jitter = 1e-2;
  double strict_margin = 1e-8;
  bool include_regular = false;
  // limits
  std::vector<double> ladder{1.0, 10.0, 1e2, 1e4, 1e6};
  double limit_gap_tol = 1e-4;
  // lower-bound
  std::vector<double> diameters{2.0, 4.0, 8.0, 16.0, 32.0};
  double min_slope = 1.9;
  // symmetrize
  int iterations = 0;  // 0: a single step
  double stop_tol = 1e-12;
  bool full_report = false;

  bool include_runtime = true;

  /// Throws std::invalid_argument when a field is out of range.
  void validate() const;
  [[nodiscard]] SolverOptions solver_options() const;
  [[nodiscard]] std::vector<AsymParams> param_grid() const;
};

/// One row of the fixed CSV layout d,p,alpha,beta,seed,sigma,sigma_regular,margin,flags.
/// What `sigma_regular` and `margin` hold depends on the command (see `role`).
struct CaseRecord {
  std::string role;
  int d = 0;
  AsymParams params;
  std::uint64_t seed = 0;
  double sigma = 0.0;
  double sigma_regular = 0.0;
  double margin = 0.0;
  std::vector<std::string> flags;
  std::string evaluator;
  bool violation = false;
  double runtime_ms = 0.0;
  Json extra = Json::object();
};

struct ExperimentReport {
  std::string command;
  Json config;
  std::vector<CaseRecord> records;
  Json summary = Json::object();
  long violations = 0;
  long unresolved_flags = 0;
  double runtime_s = 0.0;

  [[nodiscard]] bool passed() const { return violations == 0 && unresolved_flags == 0; }
  [[nodiscard]] Json to_json(bool include_runtime = true) const;
  [[nodiscard]] std::string to_csv() const;
};

[[nodiscard]] Json config_to_json(const ExperimentConfig& cfg);

/// Seed of sample `index`, so any case can be regenerated with random_unit_simplex(d, seed).
[[nodiscard]] std::uint64_t sample_seed(std::uint64_t base, int d, std::uint64_t index);

/// Unit-volume regular simplex with every coordinate moved by U(-jitter, jitter), renormalized.
[[nodiscard]] Simplex perturbed_regular(int d, double jitter, std::uint64_t seed);

/// Unit-volume sliver in R^d of diameter L: (+-L/2, 0, ...) and eta e_j for j = 2..d with
/// eta = (d!/L)^{1/(d-1)}. Requires L large enough that the base is the longest edge.
[[nodiscard]] Simplex sliver(int d, double L);
[[nodiscard]] double sliver_height(int d, double L);

[[nodiscard]] ExperimentReport cmd_sigma(const ExperimentConfig& cfg);
[[nodiscard]] ExperimentReport cmd_verify_theorem(const ExperimentConfig& cfg);
[[nodiscard]] ExperimentReport cmd_limits(const ExperimentConfig& cfg);
[[nodiscard]] ExperimentReport cmd_lower_bound(const ExperimentConfig& cfg);
[[nodiscard]] ExperimentReport cmd_symmetrize(const ExperimentConfig& cfg);

/// Least-squares slope of log y against log x.
[[nodiscard]] double loglog_slope(const std::vector<double>& x, const std::vector<double>& y);

}  // namespace simplexia
