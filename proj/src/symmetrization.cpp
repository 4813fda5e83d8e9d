#include "simplexia/symmetrization.hpp"

#include <cmath>
#include <stdexcept>
#include <string>

#include <Eigen/Cholesky>
#include <Eigen/LU>

namespace simplexia {

Vector compute_y(const CanonicalFrame& frame) {
  const Matrix& A = frame.A;
  for (Eigen::Index j = 0; j < A.rows(); ++j)
    if (A(j, j) == 0.0) throw std::invalid_argument("compute_y: singular A");
  // y A = b  <=>  A^t y^t = b^t, lower-triangular solve.
  return A.transpose().triangularView<Eigen::Lower>().solve(frame.b);
}

Vector gram_determinants(const Vector& y) {
  const Eigen::Index n = y.size();
  Vector D(n);
  for (Eigen::Index k = 1; k <= n; ++k) {
    const Vector head = y.head(k);
    const Matrix G = Matrix::Identity(k, k) + head * head.transpose();
    D(k - 1) = G.partialPivLu().determinant();
  }
  return D;
}

CholeskyFactors cholesky_R(const Vector& y) {
  const Eigen::Index n = y.size();
  const Matrix R = Matrix::Identity(n, n) + y * y.transpose();
  const Eigen::LLT<Matrix> llt(R);
  if (llt.info() != Eigen::Success) throw std::runtime_error("cholesky_R: factorization lost positivity");
  CholeskyFactors out;
  out.U = llt.matrixU();
  out.qdiag = out.U.diagonal();
  for (Eigen::Index j = 0; j < n; ++j)
    if (!(out.qdiag(j) > 0.0)) throw std::runtime_error("cholesky_R: non-positive pivot at " + std::to_string(j));
  out.ubar = out.qdiag.cwiseInverse().asDiagonal() * out.U;
  out.residual = n > 0 ? (out.U.transpose() * out.U - R).cwiseAbs().maxCoeff() : 0.0;

  const Vector D = gram_determinants(y);
  double prev = 1.0;
  for (Eigen::Index j = 0; j < n; ++j) {
    const double expected = std::sqrt(D(j) / prev);
    if (std::abs(out.qdiag(j) - expected) > 1e-10 * expected)
      throw std::runtime_error("cholesky_R: pivot " + std::to_string(j) + " departs from sqrt(D_j/D_{j-1}), residual " +
                               std::to_string(out.residual));
    prev = D(j);
  }
  return out;
}

Simplex build_T_tilde(const CanonicalFrame& frame, const Matrix& M) {
  const int d = static_cast<int>(M.rows()) + 1;
  Matrix v = Matrix::Zero(d + 1, d);
  v(0, 0) = -frame.delta;
  v(1, 0) = frame.delta;
  for (int j = 0; j < d - 1; ++j) v.block(2 + j, 1, 1, d - 1) = M.col(j).transpose();
  return Simplex(v);
}

Transforms build_transforms(const Matrix& ubar, const Vector& h, const Vector& D) {
  const Eigen::Index n = ubar.rows();
  const int d = static_cast<int>(n) + 1;
  const Matrix ubar_inv = ubar.triangularView<Eigen::Upper>().solve(Matrix::Identity(n, n));
  Transforms t;
  t.S = Matrix::Identity(d, d);
  t.S.block(0, 1, 1, n) = h.transpose();
  t.S.block(1, 1, n, n) = ubar_inv;
  t.Shat = t.S;
  t.Shat.block(0, 1, 1, n) = -h.transpose();

  const double top = n > 0 ? D(n - 1) : 1.0;
  const double scale = std::pow(top, 1.0 / (2.0 * d));
  t.F = Matrix::Zero(d, d);
  t.F(0, 0) = scale;
  double prev = 1.0;
  for (Eigen::Index j = 0; j < n; ++j) {
    t.F(j + 1, j + 1) = scale * std::sqrt(prev / D(j));
    prev = D(j);
  }
  return t;
}

double pair_gain(const Simplex& s, std::pair<int, int> pair) {
  if (s.dim() < 2) return 1.0;
  return 1.0 + compute_y(canonicalize(s, pair)).squaredNorm();
}

std::vector<std::pair<std::pair<int, int>, double>> pair_gains(const Simplex& s) {
  std::vector<std::pair<std::pair<int, int>, double>> out;
  for (int i = 0; i <= s.dim(); ++i)
    for (int j = i + 1; j <= s.dim(); ++j) out.push_back({{i, j}, pair_gain(s, {i, j})});
  return out;
}

SymmetrizationReport symmetrize_step(const Simplex& input, std::optional<std::pair<int, int>> requested) {
  const Simplex s = std::abs(volume(input) - 1.0) > 1e-12 ? normalized(input) : input;
  const int d = s.dim();

  bool all_symmetric = true;
  std::pair<int, int> pair = requested.value_or(std::pair{0, 1});
  if (requested) {
    all_symmetric = pair_gain(s, pair) - 1.0 < kSymmetryTolerance;
  } else {
    double best = -1.0;
    for (const auto& [candidate, gain] : pair_gains(s)) {
      if (gain - 1.0 >= kSymmetryTolerance) all_symmetric = false;
      if (gain > best) {
        best = gain;
        pair = candidate;
      }
    }
  }

  const CanonicalFrame frame = canonicalize(s, pair);
  const Vector y = d >= 2 ? compute_y(frame) : Vector();
  const Vector D = gram_determinants(y);
  const CholeskyFactors chol = cholesky_R(y);
  const Matrix M = chol.ubar * frame.A;
  // h = b M^{-1}: M^t h^t = b^t.
  const Vector h = d >= 2 ? Vector(M.transpose().triangularView<Eigen::Lower>().solve(frame.b)) : Vector();
  const Transforms tr = build_transforms(chol.ubar, h, D);
  const Simplex tilde = build_T_tilde(frame, M);
  const Simplex hat = tilde.transformed(tr.Shat, Vector::Zero(d));
  const double top = D.size() > 0 ? D(D.size() - 1) : 1.0;
  const Simplex star = all_symmetric ? frame.frame_simplex()
                                     : tilde.transformed(tr.F.diagonal().cwiseInverse().asDiagonal(), Vector::Zero(d));

  double lemma = 0.0, partial = 1.0;
  for (Eigen::Index k = 0; k < D.size(); ++k) {
    partial += y(k) * y(k);
    lemma = std::max(lemma, std::abs(D(k) - partial) / D(k));
  }

  return SymmetrizationReport{
      .pair = pair,
      .frame = frame,
      .y = y,
      .D = D,
      .U = chol.U,
      .qdiag = chol.qdiag,
      .ubar = chol.ubar,
      .M = M,
      .h = h,
      .S = tr.S,
      .Shat = tr.Shat,
      .F = tr.F,
      .T_tilde = tilde,
      .T_hat = hat,
      .T_star = star,
      .factor = all_symmetric ? 1.0 : std::pow(top, 1.0 / d),
      .symmetric = all_symmetric,
      .cholesky_residual = chol.residual,
      .det_S = tr.S.determinant(),
      .det_Shat = tr.Shat.determinant(),
      .det_F = tr.F.determinant(),
      .determinant_lemma_residual = lemma,
  };
}

std::vector<IterateRecord> symmetrize_iterate(const Simplex& input, int max_iters, double stop_tol,
                                              const AsymParams& params, const SolverOptions& opts) {
  const Simplex regular = regular_unit_simplex(input.dim());
  auto record = [&](const Simplex& s) {
    const ApproxResult r = best_error(s, params, opts);
    return IterateRecord{s, 1.0, sigma_from_error(s, r.error, params.p), shape_distance(s, regular), r.flags};
  };

  std::vector<IterateRecord> out;
  out.push_back(record(normalized(input)));
  for (int it = 0; it < max_iters; ++it) {
    const SymmetrizationReport rep = symmetrize_step(out.back().simplex);
    if (rep.symmetric || rep.factor - 1.0 < stop_tol) break;
    out.back().factor = rep.factor;
    out.push_back(record(rep.T_star));
  }
  return out;
}

}  // namespace simplexia
