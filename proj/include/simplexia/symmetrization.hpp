#pragma once

#include <optional>
#include <utility>
#include <vector>

#include "simplexia/asym_approx.hpp"
#include "simplexia/simplex.hpp"

namespace simplexia {

/// Pairs with |y|^2 below this are treated as mirror-symmetric.
inline constexpr double kSymmetryTolerance = 1e-14;

/// Row vector y with y A = b (A upper triangular).
[[nodiscard]] Vector compute_y(const CanonicalFrame& frame);

/// D_k = det(I_k + y_{1..k} y_{1..k}^t) for k = 1..d-1, by direct determinant.
[[nodiscard]] Vector gram_determinants(const Vector& y);

struct CholeskyFactors {
  Matrix U;        // upper triangular, U^t U = I + y^t y
  Vector qdiag;    // diagonal of U
  Matrix ubar;     // qdiag^{-1} U, unit upper triangular
  double residual = 0.0;  // max |U^t U - R|
};

/// Throws std::runtime_error if the factor loses positivity or its diagonal departs
/// from sqrt(D_j / D_{j-1}).
[[nodiscard]] CholeskyFactors cholesky_R(const Vector& y);

/// Vertices (w1, w2, t~^1, ..., t~^{d-1}); t~^j = (0, column j of M).
[[nodiscard]] Simplex build_T_tilde(const CanonicalFrame& frame, const Matrix& M);

struct Transforms {
  Matrix S;     // maps T~ onto the frame simplex
  Matrix Shat;  // maps T~ onto its mirror image (first coordinate of t^j negated)
  Matrix F;     // diagonal, det 1
};

[[nodiscard]] Transforms build_transforms(const Matrix& ubar, const Vector& h, const Vector& D);

struct SymmetrizationReport {
  std::pair<int, int> pair{0, 1};
  CanonicalFrame frame;
  Vector y;
  Vector D;
  Matrix U;
  Vector qdiag;
  Matrix ubar;
  Matrix M;
  Vector h;
  Matrix S, Shat, F;
  Simplex T_tilde, T_hat, T_star;
  double factor = 1.0;
  /// Every pair had |y|^2 below kSymmetryTolerance; T_star is the frame simplex itself.
  bool symmetric = false;

  double cholesky_residual = 0.0;
  double det_S = 1.0, det_Shat = 1.0, det_F = 1.0;
  double determinant_lemma_residual = 0.0;  // max_k |D_k - (1 + sum_{j<=k} y_j^2)| / D_k
};

/// 1 + |y|^2 for the given pair, the quantity the pair policy maximizes.
[[nodiscard]] double pair_gain(const Simplex& s, std::pair<int, int> pair);

/// All pairs (i < j) in index order with their gains.
[[nodiscard]] std::vector<std::pair<std::pair<int, int>, double>> pair_gains(const Simplex& s);

/// One symmetrization step. Without an explicit pair, uses the pair with the largest
/// D_{d-1} (first in index order on ties). Input is rescaled to unit volume first.
[[nodiscard]] SymmetrizationReport symmetrize_step(const Simplex& s,
                                                   std::optional<std::pair<int, int>> pair = std::nullopt);

struct IterateRecord {
  Simplex simplex;
  double factor = 1.0;  // factor of the step that produced the next iterate (1 for the last)
  double sigma = 0.0;
  double distance_to_regular = 0.0;
  std::vector<std::string> flags;
};

/// Applies symmetrize_step until factor - 1 < stop_tol or max_iters steps were taken.
/// The first record is the (normalized) input.
[[nodiscard]] std::vector<IterateRecord> symmetrize_iterate(const Simplex& s, int max_iters, double stop_tol,
                                                            const AsymParams& params,
                                                            const SolverOptions& opts = {});

}  // namespace simplexia
