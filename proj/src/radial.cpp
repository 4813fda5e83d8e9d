#include "simplexia/radial.hpp"

#include <algorithm>
#include <array>
#include <cmath>
#include <numbers>

#include <Eigen/Eigenvalues>

#include <boost/math/special_functions/beta.hpp>

#include "simplexia/quadrature.hpp"

namespace simplexia {

namespace {

thread_local long g_panel_count = 0;

struct GaussTable {
  std::vector<double> nodes;    // on [-1, 1]
  std::vector<double> weights;
};

GaussTable build_gauss(int n) {
  GaussTable t;
  t.nodes.resize(n);
  t.weights.resize(n);
  for (int i = 0; i < n; ++i) {
    double x = std::cos(std::numbers::pi * (i + 0.75) / (n + 0.5));
    double dp = 0.0;
    for (int it = 0; it < 100; ++it) {
      double p0 = 1.0, p1 = x;
      for (int k = 2; k <= n; ++k) {
        const double p2 = ((2.0 * k - 1.0) * x * p1 - (k - 1.0) * p0) / k;
        p0 = p1;
        p1 = p2;
      }
      dp = n * (x * p1 - p0) / (x * x - 1.0);
      const double dx = p1 / dp;
      x -= dx;
      if (std::abs(dx) < 1e-16) break;
    }
    double p0 = 1.0, p1 = x;
    for (int k = 2; k <= n; ++k) {
      const double p2 = ((2.0 * k - 1.0) * x * p1 - (k - 1.0) * p0) / k;
      p0 = p1;
      p1 = p2;
    }
    dp = n * (x * p1 - p0) / (x * x - 1.0);
    t.nodes[i] = x;
    t.weights[i] = 2.0 / ((1.0 - x * x) * dp * dp);
  }
  return t;
}

const GaussTable& gauss_table(int n) {
  static const std::vector<GaussTable> tables = [] {
    std::vector<GaussTable> out;
    for (int k = 0; k <= 40; ++k) out.push_back(k == 0 ? GaussTable{} : build_gauss(k));
    return out;
  }();
  if (n < 1 || n > 40) throw std::invalid_argument("gauss order must lie in [1, 40]");
  return tables[n];
}

double ipow(double x, int n) {
  double r = 1.0;
  for (int k = 0; k < n; ++k) r *= x;
  return r;
}

double binom(int n, int k) {
  double r = 1.0;
  for (int j = 1; j <= k; ++j) r = r * (n - k + j) / j;
  return r;
}

// int_0^R (sign * (r^2 - rho))^q r^{dim-1} dr for integer q, expanded as a polynomial.
// sign = +1 gives the outside branch (r^2 - rho)^q, sign = -1 the inside branch.
double poly_branch(int q, int dim, double rho, double R, int sign) {
  double sum = 0.0;
  const double r2 = R * R;
  double rpow = ipow(R, dim);
  for (int j = 0; j <= q; ++j) {
    // (sign*(r^2 - rho))^q = sum_j C(q,j) (sign r^2)^j (-sign rho)^(q-j)
    const double coef = binom(q, j) * ipow(sign, j) * ipow(-sign * rho, q - j);
    sum += coef * rpow / (2 * j + dim);
    rpow *= r2;
  }
  return sum;
}

// int_{r0}^{R} (r^2 - rho)^q r^{dim-1} dr for rho > 0, r0 = sqrt(rho), integer q. In u = r - r0
// the integrand u^q (u + 2 r0)^q (u + r0)^{dim-1} has non-negative coefficients, so nothing
// cancels when R is close to r0.
double poly_outer(int q, int dim, double rho, double R) {
  const double r0 = std::sqrt(rho);
  const double u = R - r0;
  if (u <= 0.0) return 0.0;
  std::vector<double> c(q + dim, 0.0);
  for (int i = 0; i <= q; ++i)
    for (int j = 0; j < dim; ++j)
      c[i + j] += binom(q, i) * ipow(2.0 * r0, q - i) * binom(dim - 1, j) * ipow(r0, dim - 1 - j);
  double sum = 0.0;
  double upow = ipow(u, q + 1);
  for (std::size_t n = 0; n < c.size(); ++n) {
    sum += c[n] * upow / (q + 1 + static_cast<double>(n));
    upow *= u;
  }
  return sum;
}

struct JacobiTable {
  double q = -1.0;
  std::vector<double> nodes;    // on [0, 1], weight w^q
  std::vector<double> weights;
};

// Golub-Welsch for the weight (1+x)^q on [-1, 1], mapped to w^q on [0, 1].
JacobiTable build_jacobi(double q, int n) {
  Eigen::MatrixXd J = Eigen::MatrixXd::Zero(n, n);
  const double a = 0.0, b = q;
  for (int k = 0; k < n; ++k) {
    const double s = 2.0 * k + a + b;
    J(k, k) = (b * b - a * a) / (s * (s + 2.0));
    if (k + 1 < n) {
      const double m = k + 1.0;
      const double t = 2.0 * m + a + b;
      const double beta = 4.0 * m * (m + a) * (m + b) * (m + a + b) / (t * t * (t + 1.0) * (t - 1.0));
      J(k, k + 1) = J(k + 1, k) = std::sqrt(beta);
    }
  }
  Eigen::SelfAdjointEigenSolver<Eigen::MatrixXd> eig(J);
  const double mu0 = std::pow(2.0, a + b + 1.0) * std::tgamma(a + 1.0) * std::tgamma(b + 1.0) / std::tgamma(a + b + 2.0);
  JacobiTable t;
  t.q = q;
  for (int i = 0; i < n; ++i) {
    const double v0 = eig.eigenvectors()(0, i);
    t.nodes.push_back(0.5 * (1.0 + eig.eigenvalues()(i)));
    t.weights.push_back(mu0 * v0 * v0 * std::pow(0.5, q + 1.0));
  }
  return t;
}

const JacobiTable& jacobi_table(double q) {
  thread_local std::vector<JacobiTable> cache;
  for (const auto& t : cache)
    if (t.q == q) return t;
  if (cache.size() > 16) cache.erase(cache.begin());
  cache.push_back(build_jacobi(q, 20));
  return cache.back();
}

template <class F>
double gauss_panel(const GaussTable& gl, double a, double b, F f) {
  const double half = 0.5 * (b - a), mid = 0.5 * (a + b);
  double acc = 0.0;
  for (std::size_t g = 0; g < gl.nodes.size(); ++g) acc += gl.weights[g] * f(mid + half * gl.nodes[g]);
  return half * acc;
}

// int_{r0}^{R} (r^2 - rho)^q r^{dim-1} dr for real q, with r0 = sqrt(max(rho, 0)).
double outer_branch_real(double q, int dim, double rho, double R) {
  const GaussTable& gl = gauss_table(20);
  const double m = 0.5 * dim - 1.0;
  if (rho > 0.0) {
    // t = r^2 - rho: 1/2 int_0^T t^q (t + rho)^m dt. Jacobi panel at t = 0, geometric panels after.
    const double T = R * R - rho;
    if (T <= 0.0) return 0.0;
    const double t1 = std::min(T, rho);
    const JacobiTable& gj = jacobi_table(q);
    double acc = 0.0;
    for (std::size_t g = 0; g < gj.nodes.size(); ++g) acc += gj.weights[g] * std::pow(t1 * gj.nodes[g] + rho, m);
    double total = std::pow(t1, q + 1.0) * acc;
    auto f = [&](double t) { return std::pow(t, q) * std::pow(t + rho, m); };
    for (double a = t1; a < T; a *= 4.0) total += gauss_panel(gl, a, std::min(4.0 * a, T), f);
    return 0.5 * total;
  }
  if (rho == 0.0) return std::pow(R, 2.0 * q + dim) / (2.0 * q + dim);
  const double a2 = -rho;
  auto f = [&](double r) { return std::pow(r * r + a2, q) * std::pow(r, dim - 1); };
  const double r1 = std::min(R, std::sqrt(a2));
  double total = gauss_panel(gl, 0.0, r1, f);
  for (double a = r1; a < R; a *= 4.0) total += gauss_panel(gl, a, std::min(4.0 * a, R), f);
  return total;
}

struct Chain {
  const RadialKernel& kernel;
  int top;
  double rho;
  const GaussTable& gl;
  bool smooth;
  std::array<double, 16> h2{};

  [[nodiscard]] double kink2(int k) const {
    double v = rho;
    for (int j = k; j < top; ++j) v -= h2[j];
    return v;
  }

  double phi(int k, double S) const {
    if (S <= 0.0) return 0.0;
    if (k == top) return kernel.radial_antiderivative(top, rho, S);

    const double hk2 = h2[k];
    const double hk = std::sqrt(hk2);
    std::array<double, 96> pts{};
    int n = 0;
    pts[n++] = 0.0;
    for (double x = hk; x < S && n < 40; x *= 4.0) pts[n++] = x;
    const double kk = kink2(k);
    if (kk > 0.0) {
      const double s_star = std::sqrt(kk);
      if (s_star < S) pts[n++] = s_star;
      if (!smooth) {
        for (int m = 1; m <= 12; ++m) {
          const double off = s_star * std::pow(4.0, -m);
          if (s_star - off > 0.0 && s_star - off < S) pts[n++] = s_star - off;
          if (s_star + off < S) pts[n++] = s_star + off;
        }
      }
    }
    pts[n++] = S;
    std::sort(pts.begin(), pts.begin() + n);

    auto integrand = [&](double s) {
      const double R2 = hk2 + s * s;
      const double R = std::sqrt(R2);
      return phi(k + 1, R) / ipow(R, k + 1) * ipow(s, k - 1);
    };

    double total = 0.0;
    for (int i = 0; i + 1 < n; ++i) {
      const double a = pts[i], b = pts[i + 1];
      if (!(b > a * (1.0 + 1e-15))) continue;
      const double half = 0.5 * (b - a), mid = 0.5 * (a + b);
      double acc = 0.0;
      for (std::size_t g = 0; g < gl.nodes.size(); ++g) acc += gl.weights[g] * integrand(mid + half * gl.nodes[g]);
      total += half * acc;
      ++g_panel_count;
    }
    return total;
  }
};

double eval_tree(const FaceTree& tree, const Vector& c, Chain& chain) {
  const int k = tree.dim();
  const double tiny = 1e-14 * tree.scale();
  double sum = 0.0;
  for (const auto& facet : tree.facets()) {
    const double h = facet.offset - facet.normal.dot(c);
    if (k == 1) {
      if (h != 0.0) sum += (h > 0.0 ? 1.0 : -1.0) * chain.phi(1, std::abs(h));
      continue;
    }
    if (std::abs(h) <= tiny) continue;
    chain.h2[k - 1] = h * h;
    const Vector cf = facet.basis.transpose() * (c - facet.origin);
    sum += h * eval_tree(*facet.child, cf, chain);
  }
  return sum;
}

const QuadratureRule& exact_rule(int dim, int q) {
  thread_local std::vector<std::pair<std::pair<int, int>, QuadratureRule>> cache;
  for (const auto& [key, rule] : cache)
    if (key.first == dim && key.second == q) return rule;
  cache.emplace_back(std::pair{dim, q}, grundmann_moller(dim, q));
  return cache.back().second;
}

double chain_integral(const FaceTree& tree, const RadialKernel& k, const Vector& c, double rho, int order) {
  Chain chain{k, tree.dim(), rho, gauss_table(order), k.integer_power()};
  return eval_tree(tree, c, chain);
}

// int_region k(|x - c|^2 - rho). With e = |x-c|^2 - rho and integer q,
//   k(e) = pos e^q + (neg - pos (-1)^q) (-e)^q [e < 0]
//        = neg (-e)^q + (pos - neg (-1)^q) e^q [e > 0];
// the polynomial term is exact, the indicator term goes through the chain.
double split_integral(const FaceTree& tree, const Simplex& region, const RadialKernel& k, const Vector& c,
                      double rho, int order) {
  if (!k.integer_power()) return chain_integral(tree, k, c, rho, order);
  const int q = static_cast<int>(std::lround(k.power));
  const Matrix& v = region.vertices();
  const double maxd2 = (v.rowwise() - c.transpose()).rowwise().squaredNorm().maxCoeff();
  const QuadratureRule& rule = exact_rule(region.dim(), q);
  const Matrix x = rule.nodes * v;
  double m = 0.0;
  for (Eigen::Index i = 0; i < x.rows(); ++i) m += rule.weights(i) * ipow((x.row(i) - c.transpose()).squaredNorm() - rho, q);
  m *= volume(region);
  const double sign = (q % 2 == 0) ? 1.0 : -1.0;
  if (rho >= maxd2) return k.neg * sign * m;
  if (rho <= 0.0 || rho <= squared_distance(region, c)) return k.pos * m;
  if (rho <= maxd2 - rho)
    return k.pos * m + chain_integral(tree, RadialKernel{0.0, k.neg - k.pos * sign, k.power}, c, rho, order);
  return k.neg * sign * m + chain_integral(tree, RadialKernel{k.pos - k.neg * sign, 0.0, k.power}, c, rho, order);
}

}  // namespace

double RadialKernel::operator()(double t) const {
  if (t > 0.0) return pos * std::pow(t, power);
  if (t < 0.0) return neg * std::pow(-t, power);
  return 0.0;
}

bool RadialKernel::integer_power() const { return power >= 0.0 && std::abs(power - std::round(power)) < 1e-12; }

double RadialKernel::radial_antiderivative(int dim, double rho, double R) const {
  if (R <= 0.0) return 0.0;
  if (integer_power()) {
    const int q = static_cast<int>(std::lround(power));
    if (rho <= 0.0) return pos * poly_branch(q, dim, rho, R, +1);
    const double r0 = std::sqrt(rho);
    if (R <= r0) return neg != 0.0 ? neg * poly_branch(q, dim, rho, R, -1) : 0.0;
    return (neg != 0.0 ? neg * poly_branch(q, dim, rho, r0, -1) : 0.0) +
           (pos != 0.0 ? pos * poly_outer(q, dim, rho, R) : 0.0);
  }
  const double half_dim = 0.5 * dim;
  if (rho <= 0.0) return pos * outer_branch_real(power, dim, rho, R);
  const double r0 = std::sqrt(rho);
  // inside: 1/2 rho^{q + dim/2} B(R^2/rho; dim/2, q+1)
  const double x = std::min(1.0, R * R / rho);
  const double inner =
      0.5 * std::pow(rho, power + half_dim) * boost::math::beta(half_dim, power + 1.0, x);
  if (R <= r0) return neg * inner;
  return neg * inner + pos * outer_branch_real(power, dim, rho, R);
}

FaceTree::FaceTree(const Matrix& v) : dim_(static_cast<int>(v.cols())), scale_(0.0) {
  const int k = dim_;
  for (Eigen::Index i = 0; i < v.rows(); ++i)
    for (Eigen::Index j = i + 1; j < v.rows(); ++j) scale_ = std::max(scale_, (v.row(i) - v.row(j)).norm());

  for (int omit = 0; omit <= k; ++omit) {
    Facet f;
    if (k == 1) {
      const int keep = 1 - omit;
      const double dir = v(keep, 0) > v(omit, 0) ? 1.0 : -1.0;
      f.normal = Vector::Constant(1, dir);
      f.origin = Vector::Constant(1, v(keep, 0));
      f.offset = dir * v(keep, 0);
      facets_.push_back(std::move(f));
      continue;
    }
    std::vector<int> idx;
    for (int j = 0; j <= k; ++j)
      if (j != omit) idx.push_back(j);
    f.origin = v.row(idx[0]).transpose();
    Matrix e(k, k - 1);
    for (int j = 0; j < k - 1; ++j) e.col(j) = v.row(idx[j + 1]).transpose() - f.origin;
    Eigen::HouseholderQR<Matrix> qr(e);
    f.basis = qr.householderQ() * Matrix::Identity(k, k - 1);
    const Vector to_apex = v.row(omit).transpose() - f.origin;
    Vector perp = to_apex - f.basis * (f.basis.transpose() * to_apex);
    f.normal = -perp.normalized();
    f.offset = f.normal.dot(f.origin);
    Matrix local(k, k - 1);
    for (int j = 0; j < k; ++j) local.row(j) = (f.basis.transpose() * (v.row(idx[j]).transpose() - f.origin)).transpose();
    f.child = std::make_unique<FaceTree>(local);
    facets_.push_back(std::move(f));
  }
}

RadialIntegrator::RadialIntegrator(const Simplex& s, int gauss_order)
    : tree_(s.vertices()), gauss_order_(gauss_order), region_(s) {
  if (s.dim() > 15) throw std::invalid_argument("RadialIntegrator supports d <= 15");
  const int d = s.dim();
  if (d < 2) return;
  const Matrix& v = s.vertices();
  for (int omit = 0; omit <= d; ++omit) {
    const auto& f = tree_.facets()[omit];
    Matrix local(d, d - 1);
    int r = 0;
    for (int j = 0; j <= d; ++j)
      if (j != omit) local.row(r++) = (f.basis.transpose() * (v.row(j).transpose() - f.origin)).transpose();
    facet_regions_.emplace_back(local);
  }
}

double RadialIntegrator::integrate(const RadialKernel& k, const Vector& center, double rho) const {
  g_panel_count = 0;
  return split_integral(tree_, region_, k, center, rho, gauss_order_);
}

Vector RadialIntegrator::facet_flux(const RadialKernel& k, const Vector& center, double rho) const {
  g_panel_count = 0;
  const int d = tree_.dim();
  Vector flux = Vector::Zero(d);
  for (std::size_t i = 0; i < tree_.facets().size(); ++i) {
    const auto& facet = tree_.facets()[i];
    const double h = facet.offset - facet.normal.dot(center);
    double value = 0.0;
    if (d == 1) {
      value = k(h * h - rho);
    } else {
      const Vector cf = facet.basis.transpose() * (center - facet.origin);
      value = split_integral(*facet.child, facet_regions_[i], k, cf, rho - h * h, gauss_order_);
    }
    flux += value * facet.normal;
  }
  return flux;
}

long RadialIntegrator::last_panel_count() { return g_panel_count; }

}  // namespace simplexia
