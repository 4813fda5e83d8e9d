#pragma once

#include <functional>
#include <vector>

#include "simplexia/asym_params.hpp"
#include "simplexia/simplex.hpp"

namespace simplexia {

/// Rule on the reference simplex in barycentric form; weights sum to one, so the
/// integral over s is volume(s) * sum_i w_i f(x_i).
struct QuadratureRule {
  int dim = 0;
  int degree = 0;
  Matrix nodes;     // n x (dim+1) barycentric coordinates
  Vector weights;   // n
};

/// Grundmann-Moller rule of degree 2s+1. Contains negative weights for s >= 1.
[[nodiscard]] QuadratureRule grundmann_moller(int dim, int s);

[[nodiscard]] double apply_rule(const QuadratureRule& rule, const Simplex& s,
                                const std::function<double(const Vector&)>& f);

struct IntegralEstimate {
  double value = 0.0;
  double error_estimate = 0.0;
  long cells_used = 1;
  bool budget_exhausted = false;
};

/// int_s prod_j lambda_j^{a_j} = d! |s| prod a_j! / (d + sum a_j)!.
[[nodiscard]] double integrate_barycentric_monomial(const Simplex& s, const std::vector<int>& exponents);

/// int_s prod_m l_m(x), where row m of `forms` holds the values of the affine
/// function l_m at the d+1 vertices.
[[nodiscard]] double integrate_affine_product(const Simplex& s, const Matrix& forms);

/// int_s prod_i x_i^{e_i} (Cartesian exponents).
[[nodiscard]] double integrate_monomial(const Simplex& s, const std::vector<int>& exponents);

inline constexpr long kDefaultCellBudget = 200000;

/// Longest-edge bisection driven by the gap between the degree-7 and degree-5 rules.
/// Meant for smooth integrands: a kink that misses every rule node in a cell goes unseen.
[[nodiscard]] IntegralEstimate integrate_adaptive(const std::function<double(const Vector&)>& f,
                                                  const Simplex& s, double tol,
                                                  long max_cells = kDefaultCellBudget);

/// int_s (alpha e_+ + beta e_-)^p with e(x) = |x - center|^2 - rho, finite p.
/// Computed by the radial face recursion; the error estimate compares two Gauss orders.
[[nodiscard]] IntegralEstimate integrate_asym_power(const Vector& center, double rho,
                                                    const AsymParams& params, const Simplex& s,
                                                    double tol);

/// Same integral by cell classification against the sphere: cells inside or outside
/// use a fixed rule, cells cut by the sphere are bisected. Slow; kept as an
/// independent reference.
[[nodiscard]] IntegralEstimate integrate_asym_power_cells(const Vector& center, double rho,
                                                          const AsymParams& params, const Simplex& s,
                                                          double tol, long max_cells = kDefaultCellBudget);

}  // namespace simplexia
