#pragma once

#include <cstdint>
#include <stdexcept>
#include <utility>
#include <vector>

#include <Eigen/Dense>

namespace simplexia {

using Vector = Eigen::VectorXd;
using Matrix = Eigen::MatrixXd;

/// Thrown when a simplex (or a derived frame) has numerically zero volume.
class DegenerateSimplexError : public std::runtime_error {
public:
  using std::runtime_error::runtime_error;
};

/// A non-degenerate d-simplex in R^d, stored as d+1 vertex rows.
///
/// Construction rejects wrong shapes, non-finite coordinates and simplices whose
/// volume is below 1e-14 * diam^d.
class Simplex {
public:
  explicit Simplex(Matrix vertices);

  [[nodiscard]] int dim() const noexcept { return static_cast<int>(vertices_.cols()); }
  [[nodiscard]] int vertex_count() const noexcept { return static_cast<int>(vertices_.rows()); }
  [[nodiscard]] const Matrix& vertices() const noexcept { return vertices_; }
  [[nodiscard]] Vector vertex(int i) const { return vertices_.row(i).transpose(); }
  [[nodiscard]] Vector centroid() const;

  /// d x d matrix whose column j is t_{j+1} - t_0.
  [[nodiscard]] Matrix edge_matrix() const;

  /// Image under x -> linear * x + shift.
  [[nodiscard]] Simplex transformed(const Matrix& linear, const Vector& shift) const;
  [[nodiscard]] Simplex translated(const Vector& shift) const;
  /// Homothety with ratio `factor` about the centroid.
  [[nodiscard]] Simplex scaled(double factor) const;

private:
  Matrix vertices_;
};

[[nodiscard]] double signed_volume(const Simplex& s);
[[nodiscard]] double volume(const Simplex& s);
[[nodiscard]] double diameter(const Simplex& s);
[[nodiscard]] std::vector<double> edge_lengths(const Simplex& s);

/// Rescaled about the centroid to unit volume.
[[nodiscard]] Simplex normalized(const Simplex& s);

[[nodiscard]] Simplex regular_unit_simplex(int d);

/// Gaussian vertices, redrawn while volume < 1e-6 * rms_edge^d, then scaled about the
/// centroid to unit volume. Deterministic per (d, seed).
[[nodiscard]] Simplex random_unit_simplex(int d, std::uint64_t seed);

/// Barycentric coordinates of x (sum to one).
[[nodiscard]] Vector barycentric(const Simplex& s, const Vector& x);

/// Euclidean projection of x onto the closed simplex.
[[nodiscard]] Vector closest_point(const Simplex& s, const Vector& x);
[[nodiscard]] double squared_distance(const Simplex& s, const Vector& x);

struct Ball {
  Vector center;
  double radius_sq = 0.0;
};

[[nodiscard]] Ball circumsphere(const Simplex& s);
/// Smallest ball containing all vertices (exact, by face enumeration).
[[nodiscard]] Ball min_enclosing_ball(const Simplex& s);

/// Orthogonal map y = rotation * (x - origin); rotation may include a reflection.
struct RigidMotion {
  Matrix rotation;
  Vector origin;

  [[nodiscard]] Vector apply(const Vector& x) const { return rotation * (x - origin); }
  [[nodiscard]] Vector inverse(const Vector& y) const { return rotation.transpose() * y + origin; }
};

/// Coordinates with the vertex pair at (-delta,0,...,0), (delta,0,...,0) and the other
/// vertices t^1..t^{d-1} (ascending original index) in upper-triangular position:
/// t^j = (b_j, A(0,j-1), ..., A(j-1,j-1), 0, ..., 0).
struct CanonicalFrame {
  std::pair<int, int> pair;
  std::vector<int> others;
  double delta = 0.0;
  Vector b;
  Matrix A;
  RigidMotion motion;

  /// Frame simplex with vertex order (w1, w2, t^1, ..., t^{d-1}).
  [[nodiscard]] Simplex frame_simplex() const;
};

/// Diagonal of A is made strictly positive, which fixes the reflection ambiguity.
[[nodiscard]] CanonicalFrame canonicalize(const Simplex& s, std::pair<int, int> pair);

/// Euclidean distance between the sorted edge-length vectors of the unit-volume
/// rescalings of s and t. Invariant under motions and relabeling; zero for congruent
/// shapes but not a true metric on shape space.
[[nodiscard]] double shape_distance(const Simplex& s, const Simplex& t);

}  // namespace simplexia
