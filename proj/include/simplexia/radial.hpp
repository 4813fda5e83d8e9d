#pragma once

#include <memory>
#include <vector>

#include "simplexia/simplex.hpp"

namespace simplexia {

/// Piecewise power kernel k(t) = pos * t^q for t > 0, neg * (-t)^q for t < 0.
///
/// The integrand of the asymmetric L_p error is k(|x - x0|^2 - rho) with
/// (pos, neg, q) = (alpha^p, beta^p, p); its rho-derivative is of the same family.
struct RadialKernel {
  double pos = 1.0;
  double neg = 1.0;
  double power = 1.0;

  [[nodiscard]] double operator()(double t) const;
  [[nodiscard]] bool integer_power() const;

  /// int_0^R k(r^2 - rho) r^{dim-1} dr.
  [[nodiscard]] double radial_antiderivative(int dim, double rho, double R) const;
};

/// Face hierarchy of a simplex: every facet is stored in its own orthonormal frame,
/// recursively down to points. Depends only on the vertices, so it is built once and
/// reused for every center and level.
class FaceTree {
public:
  /// `vertices` is (k+1) x k.
  explicit FaceTree(const Matrix& vertices);

  struct Facet {
    Vector normal;    // outward unit normal
    double offset;    // normal . y for y on the facet
    Vector origin;    // a facet vertex
    Matrix basis;     // k x (k-1), orthonormal columns spanning the facet plane
    std::unique_ptr<FaceTree> child;  // null when k == 1
  };

  [[nodiscard]] int dim() const noexcept { return dim_; }
  [[nodiscard]] double scale() const noexcept { return scale_; }
  [[nodiscard]] const std::vector<Facet>& facets() const noexcept { return facets_; }

private:
  int dim_;
  double scale_;
  std::vector<Facet> facets_;
};

/// Integrals of radial kernels over a fixed simplex, computed by repeated use of the
/// divergence theorem: a radial integrand over a k-face becomes a sum over its
/// (k-1)-faces of a radial integrand in one dimension less, ending in 1D integrals
/// done with Gauss-Legendre panels split at the sphere and graded toward the foot
/// of each perpendicular.
///
/// For integer powers the kernel is split into a polynomial over the whole simplex
/// (integrated exactly) and a remainder supported on one side of the sphere. The cone
/// sums then cancel only over thin regions, which keeps the relative accuracy when
/// the center lies far outside the simplex.
class RadialIntegrator {
public:
  explicit RadialIntegrator(const Simplex& s, int gauss_order = 12);

  [[nodiscard]] int dim() const noexcept { return tree_.dim(); }

  /// int_T k(|x - center|^2 - rho) dx.
  [[nodiscard]] double integrate(const RadialKernel& k, const Vector& center, double rho) const;

  /// sum_F n_F int_F k(|y - center|^2 - rho) dS over the facets F of T, n_F outward.
  /// This is the boundary flux whose negative is the center-gradient of integrate().
  [[nodiscard]] Vector facet_flux(const RadialKernel& k, const Vector& center, double rho) const;

  /// Number of 1D Gauss panels used by the last call on this thread.
  [[nodiscard]] static long last_panel_count();

private:
  FaceTree tree_;
  int gauss_order_;
  Simplex region_;
  std::vector<Simplex> facet_regions_;  // each facet in its own frame (d >= 2)
};

}  // namespace simplexia
