#include "simplexia/simplex.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <random>
#include <string>

namespace simplexia {

namespace {

double factorial(int n) {
  double f = 1.0;
  for (int k = 2; k <= n; ++k) f *= k;
  return f;
}

double raw_signed_volume(const Matrix& v) {
  const auto d = v.cols();
  Matrix e(d, d);
  for (Eigen::Index j = 0; j < d; ++j) e.col(j) = (v.row(j + 1) - v.row(0)).transpose();
  return e.determinant() / factorial(static_cast<int>(d));
}

double raw_diameter(const Matrix& v) {
  double best = 0.0;
  for (Eigen::Index i = 0; i < v.rows(); ++i)
    for (Eigen::Index j = i + 1; j < v.rows(); ++j) best = std::max(best, (v.row(i) - v.row(j)).squaredNorm());
  return std::sqrt(best);
}

std::vector<int> mask_indices(unsigned mask, int n) {
  std::vector<int> idx;
  for (int i = 0; i < n; ++i)
    if (mask & (1u << i)) idx.push_back(i);
  return idx;
}

// Least-squares projection of x onto the affine hull of the listed vertices.
// Returns barycentric weights over `idx`.
Vector affine_hull_weights(const Matrix& v, const std::vector<int>& idx, const Vector& x) {
  const int m = static_cast<int>(idx.size()) - 1;
  Vector w(idx.size());
  if (m == 0) {
    w(0) = 1.0;
    return w;
  }
  const Vector t0 = v.row(idx[0]).transpose();
  Matrix e(v.cols(), m);
  for (int k = 0; k < m; ++k) e.col(k) = v.row(idx[k + 1]).transpose() - t0;
  const Vector mu = (e.transpose() * e).ldlt().solve(e.transpose() * (x - t0));
  w(0) = 1.0 - mu.sum();
  w.tail(m) = mu;
  return w;
}

}  // namespace

Simplex::Simplex(Matrix vertices) : vertices_(std::move(vertices)) {
  const auto d = vertices_.cols();
  if (d < 1) throw std::invalid_argument("simplex dimension must be >= 1");
  if (vertices_.rows() != d + 1)
    throw std::invalid_argument("simplex in R^" + std::to_string(d) + " needs " + std::to_string(d + 1) +
                                " vertices, got " + std::to_string(vertices_.rows()));
  if (!vertices_.allFinite()) throw std::invalid_argument("simplex vertices must be finite");
  const double diam = raw_diameter(vertices_);
  const double vol = std::abs(raw_signed_volume(vertices_));
  if (!(diam > 0.0) || !(vol > 1e-14 * std::pow(diam, static_cast<double>(d))))
    throw DegenerateSimplexError("degenerate simplex: volume " + std::to_string(vol) + " at diameter " +
                                 std::to_string(diam));
}

Vector Simplex::centroid() const { return vertices_.colwise().mean().transpose(); }

Matrix Simplex::edge_matrix() const {
  const int d = dim();
  Matrix e(d, d);
  for (int j = 0; j < d; ++j) e.col(j) = (vertices_.row(j + 1) - vertices_.row(0)).transpose();
  return e;
}

Simplex Simplex::transformed(const Matrix& linear, const Vector& shift) const {
  Matrix out = vertices_ * linear.transpose();
  out.rowwise() += shift.transpose();
  return Simplex(std::move(out));
}

Simplex Simplex::translated(const Vector& shift) const {
  Matrix out = vertices_;
  out.rowwise() += shift.transpose();
  return Simplex(std::move(out));
}

Simplex Simplex::scaled(double factor) const {
  const Eigen::RowVectorXd g = vertices_.colwise().mean();
  Matrix out = (vertices_.rowwise() - g) * factor;
  out.rowwise() += g;
  return Simplex(std::move(out));
}

double signed_volume(const Simplex& s) { return raw_signed_volume(s.vertices()); }

double volume(const Simplex& s) { return std::abs(signed_volume(s)); }

double diameter(const Simplex& s) { return raw_diameter(s.vertices()); }

std::vector<double> edge_lengths(const Simplex& s) {
  std::vector<double> out;
  const Matrix& v = s.vertices();
  for (Eigen::Index i = 0; i < v.rows(); ++i)
    for (Eigen::Index j = i + 1; j < v.rows(); ++j) out.push_back((v.row(i) - v.row(j)).norm());
  return out;
}

Simplex normalized(const Simplex& s) { return s.scaled(std::pow(volume(s), -1.0 / s.dim())); }

Simplex regular_unit_simplex(int d) {
  if (d < 1) throw std::invalid_argument("regular simplex needs d >= 1");
  // Standard basis of R^{d+1} expressed in the Helmert basis of the sum-zero plane.
  Matrix v = Matrix::Zero(d + 1, d);
  for (int k = 1; k <= d; ++k) {
    const double norm = std::sqrt(static_cast<double>(k) * (k + 1));
    for (int j = 0; j < k; ++j) v(j, k - 1) = 1.0 / norm;
    v(k, k - 1) = -static_cast<double>(k) / norm;
  }
  const Eigen::RowVectorXd g = v.colwise().mean();
  v.rowwise() -= g;
  const double vol = std::abs(raw_signed_volume(v));
  v *= std::pow(vol, -1.0 / d);
  return Simplex(std::move(v));
}

Simplex random_unit_simplex(int d, std::uint64_t seed) {
  if (d < 1) throw std::invalid_argument("random simplex needs d >= 1");
  std::mt19937_64 rng(seed);
  std::normal_distribution<double> gauss(0.0, 1.0);
  for (;;) {
    Matrix v(d + 1, d);
    for (Eigen::Index i = 0; i < v.rows(); ++i)
      for (Eigen::Index j = 0; j < v.cols(); ++j) v(i, j) = gauss(rng);
    double sum_sq = 0.0;
    int n_edges = 0;
    for (Eigen::Index i = 0; i < v.rows(); ++i)
      for (Eigen::Index j = i + 1; j < v.rows(); ++j, ++n_edges) sum_sq += (v.row(i) - v.row(j)).squaredNorm();
    const double rms = std::sqrt(sum_sq / n_edges);
    const double vol = std::abs(raw_signed_volume(v));
    if (vol < 1e-6 * std::pow(rms, d)) continue;
    const Eigen::RowVectorXd g = v.colwise().mean();
    v = ((v.rowwise() - g) * std::pow(vol, -1.0 / d)).rowwise() + g;
    return Simplex(std::move(v));
  }
}

Vector barycentric(const Simplex& s, const Vector& x) {
  const int d = s.dim();
  const Vector mu = s.edge_matrix().partialPivLu().solve(x - s.vertex(0));
  Vector w(d + 1);
  w(0) = 1.0 - mu.sum();
  w.tail(d) = mu;
  return w;
}

Vector closest_point(const Simplex& s, const Vector& x) {
  const Matrix& v = s.vertices();
  const int n = s.vertex_count();
  const Vector bary = barycentric(s, x);
  if (bary.minCoeff() >= 0.0) return x;
  // The projection lies in the relative interior of exactly one face; enumerate them.
  Vector best = s.vertex(0);
  double best_d2 = std::numeric_limits<double>::infinity();
  const double eps = 1e-13;
  for (unsigned mask = 1; mask < (1u << n) - 1; ++mask) {
    const auto idx = mask_indices(mask, n);
    const Vector w = affine_hull_weights(v, idx, x);
    if (w.minCoeff() < -eps) continue;
    Vector p = Vector::Zero(s.dim());
    for (std::size_t k = 0; k < idx.size(); ++k) p += std::max(w(k), 0.0) * v.row(idx[k]).transpose();
    p /= std::max(w.cwiseMax(0.0).sum(), 1e-300);
    const double d2 = (p - x).squaredNorm();
    if (d2 < best_d2) {
      best_d2 = d2;
      best = p;
    }
  }
  return best;
}

double squared_distance(const Simplex& s, const Vector& x) { return (closest_point(s, x) - x).squaredNorm(); }

Ball circumsphere(const Simplex& s) {
  const Matrix e = s.edge_matrix();
  const Matrix gram = e.transpose() * e;
  const Vector mu = gram.ldlt().solve(0.5 * gram.diagonal());
  Ball ball;
  ball.center = s.vertex(0) + e * mu;
  ball.radius_sq = (ball.center - s.vertex(0)).squaredNorm();
  return ball;
}

Ball min_enclosing_ball(const Simplex& s) {
  const Matrix& v = s.vertices();
  const int n = s.vertex_count();
  const double scale = diameter(s);
  Ball best;
  best.radius_sq = std::numeric_limits<double>::infinity();
  for (unsigned mask = 1; mask < (1u << n); ++mask) {
    const auto idx = mask_indices(mask, n);
    if (idx.size() < 2) continue;
    const int m = static_cast<int>(idx.size()) - 1;
    const Vector t0 = v.row(idx[0]).transpose();
    Matrix e(s.dim(), m);
    for (int k = 0; k < m; ++k) e.col(k) = v.row(idx[k + 1]).transpose() - t0;
    const Matrix gram = e.transpose() * e;
    const Vector mu = gram.ldlt().solve(0.5 * gram.diagonal());
    if (mu.minCoeff() < -1e-12 || mu.sum() > 1.0 + 1e-12) continue;
    const Vector c = t0 + e * mu;
    const double r2 = (c - t0).squaredNorm();
    if (r2 >= best.radius_sq) continue;
    bool encloses = true;
    for (int i = 0; i < n && encloses; ++i)
      encloses = (v.row(i).transpose() - c).squaredNorm() <= r2 * (1.0 + 1e-12) + 1e-28 * scale * scale;
    if (encloses) {
      best.center = c;
      best.radius_sq = r2;
    }
  }
  return best;
}

Simplex CanonicalFrame::frame_simplex() const {
  const int d = static_cast<int>(b.size()) + 1;
  Matrix v = Matrix::Zero(d + 1, d);
  v(0, 0) = -delta;
  v(1, 0) = delta;
  for (int j = 0; j < d - 1; ++j) {
    v(j + 2, 0) = b(j);
    for (int k = 0; k <= j; ++k) v(j + 2, k + 1) = A(k, j);
  }
  return Simplex(std::move(v));
}

CanonicalFrame canonicalize(const Simplex& s, std::pair<int, int> pair) {
  const int d = s.dim();
  const auto [i1, i2] = pair;
  if (i1 == i2 || i1 < 0 || i2 < 0 || i1 > d || i2 > d)
    throw std::invalid_argument("canonicalize needs two distinct vertex indices in [0, d]");

  CanonicalFrame frame;
  frame.pair = pair;
  for (int k = 0; k <= d; ++k)
    if (k != i1 && k != i2) frame.others.push_back(k);

  const Vector w1 = s.vertex(i1);
  const Vector w2 = s.vertex(i2);
  const Vector mid = 0.5 * (w1 + w2);
  Matrix m(d, d);
  m.col(0) = w2 - w1;
  for (int j = 0; j < d - 1; ++j) m.col(j + 1) = s.vertex(frame.others[j]) - mid;

  Eigen::HouseholderQR<Matrix> qr(m);
  Matrix q = qr.householderQ();
  Matrix r = qr.matrixQR().triangularView<Eigen::Upper>();
  const double scale = m.colwise().norm().maxCoeff();
  for (int k = 0; k < d; ++k) {
    if (std::abs(r(k, k)) <= 1e-13 * scale) throw DegenerateSimplexError("canonicalize: numerically degenerate simplex");
    if (r(k, k) < 0.0) {
      r.row(k) *= -1.0;
      q.col(k) *= -1.0;
    }
  }

  frame.delta = 0.5 * r(0, 0);
  frame.b = r.block(0, 1, 1, d - 1).transpose();
  frame.A = r.block(1, 1, d - 1, d - 1);
  frame.motion.rotation = q.transpose();
  frame.motion.origin = mid;
  return frame;
}

double shape_distance(const Simplex& s, const Simplex& t) {
  if (s.dim() != t.dim()) throw std::invalid_argument("shape_distance: dimension mismatch");
  auto a = edge_lengths(normalized(s));
  auto b = edge_lengths(normalized(t));
  std::sort(a.begin(), a.end());
  std::sort(b.begin(), b.end());
  double sum = 0.0;
  for (std::size_t k = 0; k < a.size(); ++k) sum += (a[k] - b[k]) * (a[k] - b[k]);
  return std::sqrt(sum);
}

}  // namespace simplexia
