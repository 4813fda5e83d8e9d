#pragma once

#include <string>
#include <vector>

#include "simplexia/asym_params.hpp"
#include "simplexia/simplex.hpp"

namespace simplexia {

/// u(x) = a . x + c
struct AffineFunction {
  Vector a;
  double c = 0.0;

  [[nodiscard]] double operator()(const Vector& x) const { return a.dot(x) + c; }
};

enum class EvaluatorKind { ClosedForm, Quadrature, MinimaxExact };

[[nodiscard]] std::string to_string(EvaluatorKind kind);

struct ApproxResult {
  double error = 0.0;
  AffineFunction minimizer;
  long evaluations = 0;
  double gradient_norm_at_exit = 0.0;
  EvaluatorKind evaluator = EvaluatorKind::Quadrature;
  std::vector<std::string> flags;
};

/// Q(x) - u(x) = |x - center|^2 - level.
struct ErrorDecomposition {
  Vector center;
  double level = 0.0;
};

[[nodiscard]] ErrorDecomposition error_decomposition(const AffineFunction& u);
[[nodiscard]] AffineFunction affine_from_decomposition(const Vector& center, double level);

enum class EvaluatorChoice {
  Auto,        // exact where available, radial quadrature otherwise
  Quadrature,  // always run the numerical descent (for cross-checks)
};

struct SolverOptions {
  double quad_tol = 1e-9;
  double solver_tol = 1e-7;
  int max_iterations = 100;
  EvaluatorChoice evaluator = EvaluatorChoice::Auto;
  /// Run the descent from both start points and keep the better result.
  bool multistart = true;
};

/// ||alpha (Q-u)_+ + beta (Q-u)_-||_{L_p(s)}. Weights must be finite; p may be infinite.
[[nodiscard]] double eval_error(const Simplex& s, const AffineFunction& u, const AsymParams& params,
                                double tol = 1e-9);

/// weight * ||Q - u||_{L_2(s)} from exact barycentric moments of (Q-u)^2.
[[nodiscard]] double eval_error_p2_moments(const Simplex& s, const AffineFunction& u, double weight = 1.0);

/// Error and its gradient with respect to (a, c), for finite p and weights.
struct ErrorGradient {
  double error = 0.0;
  Vector grad_a;
  double grad_c = 0.0;
};
[[nodiscard]] ErrorGradient error_gradient(const Simplex& s, const AffineFunction& u, const AsymParams& params);

[[nodiscard]] AffineFunction vertex_interpolant(const Simplex& s);
/// Tangent plane of Q at `point`: u(x) = 2 point . x - |point|^2.
[[nodiscard]] AffineFunction tangent_plane(const Vector& point);

/// Least-squares fit (p = 2, alpha = beta = 1) from the normal equations with exact moments.
[[nodiscard]] ApproxResult closed_form_p2(const Simplex& s);

/// Best (alpha, beta)-approximation with finite weights.
[[nodiscard]] ApproxResult best_approx(const Simplex& s, const AsymParams& params, const SolverOptions& opts = {});

enum class Side {
  Above,  // u >= Q on s; optimum is the vertex interpolant
  Below,  // u <= Q on s; tangent-type approximation
};

[[nodiscard]] std::string to_string(Side side);

/// Best approximation of Q under the constraint u >= Q (Above) or u <= Q (Below), in plain L_p.
[[nodiscard]] ApproxResult best_onesided(const Simplex& s, double p, Side side, const SolverOptions& opts = {});

/// Best error for any admissible params: an infinite weight selects the one-sided problem,
/// scaled by the remaining finite weight.
[[nodiscard]] ApproxResult best_error(const Simplex& s, const AsymParams& params, const SolverOptions& opts = {});

/// best_error / |s|^{1 + 1/p}.
[[nodiscard]] double sigma(const Simplex& s, const AsymParams& params, const SolverOptions& opts = {});
[[nodiscard]] double sigma_from_error(const Simplex& s, double error, double p);

}  // namespace simplexia
