#include "simplexia/asym_approx.hpp"

#include <algorithm>
#include <cmath>
#include <functional>
#include <limits>
#include <optional>
#include <stdexcept>

#include <boost/math/tools/roots.hpp>

#include "simplexia/quadrature.hpp"
#include "simplexia/radial.hpp"

namespace simplexia {

namespace {

double factorial(int n) {
  double r = 1.0;
  for (int k = 2; k <= n; ++k) r *= k;
  return r;
}

// Centroid at the origin, unit diameter. Errors scale by L^{2+d/p} between frames.
struct LocalFrame {
  Simplex local;
  Vector g;
  double L;
};

LocalFrame make_frame(const Simplex& s) {
  const Vector g = s.centroid();
  const double L = diameter(s);
  Matrix v = (s.vertices().rowwise() - g.transpose()) / L;
  return {Simplex(std::move(v)), g, L};
}

AffineFunction to_local(const LocalFrame& f, const AffineFunction& u) {
  AffineFunction w;
  w.a = (u.a - 2.0 * f.g) / f.L;
  w.c = (u.c + f.L * w.a.dot(f.g) + f.g.squaredNorm()) / (f.L * f.L);
  return w;
}

AffineFunction to_global(const LocalFrame& f, const AffineFunction& w) {
  AffineFunction u;
  u.a = f.L * w.a + 2.0 * f.g;
  u.c = f.L * f.L * w.c - f.L * w.a.dot(f.g) - f.g.squaredNorm();
  return u;
}

double error_scale(const LocalFrame& f, double p) {
  const int d = f.local.dim();
  return std::isinf(p) ? f.L * f.L : std::pow(f.L, 2.0 + d / p);
}

double max_vertex_dist2(const Simplex& s, const Vector& x) {
  return (s.vertices().rowwise() - x.transpose()).rowwise().squaredNorm().maxCoeff();
}

// K(x0, rho) = int k(|x - x0|^2 - rho) on a fixed simplex, with its gradient in (x0, rho).
class RadialObjective {
public:
  RadialObjective(const Simplex& s, double p, double pos, double neg)
      : simplex_(s), integrator_(s), kernel_{pos, neg, p}, derivative_{p * pos, -p * neg, p - 1.0} {}

  double value(const Vector& x0, double rho) const {
    ++evaluations_;
    return integrator_.integrate(kernel_, x0, rho);
  }

  // d/dx0 and d/drho.
  void gradient(const Vector& x0, double rho, Vector& g_center, double& g_level) const {
    ++evaluations_;
    g_center = -integrator_.facet_flux(kernel_, x0, rho);
    g_level = -integrator_.integrate(derivative_, x0, rho);
  }

  double level_derivative(const Vector& x0, double rho) const {
    ++evaluations_;
    return -integrator_.integrate(derivative_, x0, rho);
  }

  // Step lengths for finite differences, small against the part of the simplex on the
  // minority side of the sphere so stiff weights do not swamp the difference.
  void fd_steps(const Vector& x0, double rho, double& h_center, double& h_level) const {
    const double inner = rho - squared_distance(simplex_, x0);
    const double outer = max_vertex_dist2(simplex_, x0) - rho;
    double m = 1.0;
    if (inner > 0.0 && outer > 0.0) m = std::min({1.0, inner, outer});
    h_level = 1e-4 * std::max(m, 1e-12);
    h_center = h_level / (1.0 + x0.norm());
  }

  // Minimizing level for a fixed center; the level derivative is monotone.
  double best_level(const Vector& x0) const {
    double lo = squared_distance(simplex_, x0);
    double hi = max_vertex_dist2(simplex_, x0);
    auto f = [&](double r) { return level_derivative(x0, r); };
    double flo = f(lo), fhi = f(hi);
    if (!(flo < 0.0) || !(fhi > 0.0)) return 0.5 * (lo + hi);
    boost::uintmax_t iters = 80;
    auto [a, b] = boost::math::tools::toms748_solve(f, lo, hi, flo, fhi,
                                                    boost::math::tools::eps_tolerance<double>(45), iters);
    return 0.5 * (a + b);
  }

  [[nodiscard]] long evaluations() const { return evaluations_; }
  [[nodiscard]] const Simplex& simplex() const { return simplex_; }

private:
  const Simplex& simplex_;
  RadialIntegrator integrator_;
  RadialKernel kernel_;
  RadialKernel derivative_;
  mutable long evaluations_ = 0;
};

struct NewtonOutcome {
  Vector z;
  double f = 0.0;
  Vector g;
  int iterations = 0;
  bool stalled = false;
  /// g' H^{-1} g / (2 f) over the free variables: predicted relative excess of f.
  double predicted_gap = 0.0;
};

using ValueFn = std::function<double(const Vector&)>;
using GradFn = std::function<Vector(const Vector&)>;
using HessFn = std::function<Matrix(const Vector&, const Vector&)>;

// Damped Newton with Armijo backtracking and Levenberg shifts. With `lower`, variables
// are kept above the bounds and the ones pinned by a positive gradient are frozen.
NewtonOutcome newton_minimize(Vector z, const ValueFn& value, const GradFn& grad, const HessFn& hess,
                              const std::optional<Vector>& lower, double max_step, int max_iter) {
  NewtonOutcome out;
  out.f = value(z);
  out.g = grad(z);
  const Eigen::Index n = z.size();
  auto free_set = [&](const Vector& at, const Vector& g) {
    std::vector<Eigen::Index> free;
    for (Eigen::Index i = 0; i < n; ++i)
      if (!lower || at(i) > (*lower)(i) || g(i) < 0.0) free.push_back(i);
    return free;
  };
  Matrix H;
  for (int it = 0; it < max_iter; ++it) {
    const std::vector<Eigen::Index> free = free_set(z, out.g);
    if (free.empty()) break;
    const auto nf = static_cast<Eigen::Index>(free.size());
    Vector gf(nf);
    for (Eigen::Index i = 0; i < nf; ++i) gf(i) = out.g(free[i]);
    if (gf.squaredNorm() == 0.0) break;

    H = hess(z, out.g);
    Matrix Hf(nf, nf);
    for (Eigen::Index i = 0; i < nf; ++i)
      for (Eigen::Index j = 0; j < nf; ++j) Hf(i, j) = H(free[i], free[j]);
    const double hscale = std::max(Hf.diagonal().cwiseAbs().maxCoeff(), 1e-300);
    const Vector dscale = Hf.diagonal().cwiseAbs().cwiseMax(1e-12 * hscale) / hscale;

    double mu = 0.0;
    bool accepted = false;
    double decrement = 0.0;
    Vector z_new;
    double f_new = out.f;
    for (int attempt = 0; attempt < 14 && !accepted; ++attempt) {
      const Matrix M = Hf + Matrix(mu * dscale.asDiagonal());
      Eigen::LDLT<Matrix> ldlt(M);
      Vector step = ldlt.solve(-gf);
      const bool ok = ldlt.info() == Eigen::Success && step.allFinite() && gf.dot(step) < 0.0 &&
                      (mu > 0.0 || ldlt.isPositive());
      if (!ok) {
        mu = mu == 0.0 ? 1e-8 * hscale : 10.0 * mu;
        continue;
      }
      if (step.norm() > max_step) step *= max_step / step.norm();
      decrement = -gf.dot(step);
      for (double t = 1.0; t > 1e-6; t *= 0.5) {
        z_new = z;
        for (Eigen::Index i = 0; i < nf; ++i) z_new(free[i]) += t * step(i);
        if (lower) z_new = z_new.cwiseMax(*lower);
        f_new = value(z_new);
        const double actual = out.f - f_new;
        if (actual >= 1e-4 * t * decrement || (actual >= 0.0 && t * decrement <= 1e-13 * std::abs(out.f))) {
          accepted = true;
          break;
        }
      }
      if (!accepted) mu = mu == 0.0 ? 1e-6 * hscale : 10.0 * mu;
    }
    if (!accepted) {
      out.stalled = true;
      break;
    }
    const bool progressed = f_new < out.f;
    z = z_new;
    out.f = f_new;
    out.g = grad(z);
    out.iterations = it + 1;
    if (!progressed || decrement <= 1e-14 * std::abs(out.f)) break;
  }
  out.z = z;
  const std::vector<Eigen::Index> free = free_set(z, out.g);
  if (!free.empty() && H.size() > 0 && out.f > 0.0) {
    const auto nf = static_cast<Eigen::Index>(free.size());
    Vector gf(nf);
    Matrix Hf(nf, nf);
    for (Eigen::Index i = 0; i < nf; ++i) {
      gf(i) = out.g(free[i]);
      for (Eigen::Index j = 0; j < nf; ++j) Hf(i, j) = H(free[i], free[j]);
    }
    const Eigen::LDLT<Matrix> ldlt(Hf);
    const double quad = gf.dot(ldlt.solve(gf));
    out.predicted_gap = ldlt.info() == Eigen::Success && ldlt.isPositive() && std::isfinite(quad) && quad >= 0.0
                            ? quad / (2.0 * out.f)
                            : gf.norm() / out.f;
  }
  return out;
}

bool lex_less(const Vector& x, const Vector& y) {
  for (Eigen::Index i = 0; i < x.size(); ++i)
    if (x(i) != y(i)) return x(i) < y(i);
  return false;
}

// Pick the better of several outcomes; ties go to the lexicographically smaller point.
const NewtonOutcome& best_of(const std::vector<NewtonOutcome>& runs) {
  std::size_t best = 0;
  for (std::size_t k = 1; k < runs.size(); ++k) {
    const double a = runs[k].f, b = runs[best].f;
    if (a < b * (1.0 - 1e-14) || (std::abs(a - b) <= 1e-14 * std::abs(b) && lex_less(runs[k].z, runs[best].z))) best = k;
  }
  return runs[best];
}

// Newton in z = (a, c); the Hessian is differenced in (x0, rho) and pulled back.
struct TwoSidedProblem {
  const RadialObjective& obj;
  int d;

  static void split(const Vector& z, int d, Vector& x0, double& rho) {
    const Vector a = z.head(d);
    x0 = 0.5 * a;
    rho = z(d) + 0.25 * a.squaredNorm();
  }

  double value(const Vector& z) const {
    Vector x0;
    double rho;
    split(z, d, x0, rho);
    return obj.value(x0, rho);
  }

  Vector grad_w(const Vector& x0, double rho) const {
    Vector gc;
    double gl;
    obj.gradient(x0, rho, gc, gl);
    Vector g(d + 1);
    g.head(d) = gc;
    g(d) = gl;
    return g;
  }

  Vector grad(const Vector& z) const {
    Vector x0;
    double rho;
    split(z, d, x0, rho);
    const Vector gw = grad_w(x0, rho);
    Vector g(d + 1);
    g.head(d) = 0.5 * gw.head(d) + 0.5 * z.head(d) * gw(d);
    g(d) = gw(d);
    return g;
  }

  // Central differences of the gradient in z along the principal axes of the simplex,
  // each scaled to move e by about the same amount everywhere on it.
  Matrix hess(const Vector& z, const Vector& /*g*/) const {
    Vector x0;
    double rho;
    split(z, d, x0, rho);
    double hc, hl;
    obj.fd_steps(x0, rho, hc, hl);
    const Matrix HV = [&] {
      Matrix cols(d + 1, d + 1);
      for (int k = 0; k <= d; ++k) {
        const Vector v = hl * axes.col(k);
        cols.col(k) = (grad(z + v) - grad(z - v)) / (2.0 * hl);
      }
      return cols;
    }();
    const Matrix H = HV * axes_inv;
    return 0.5 * (H + H.transpose());
  }

  Matrix axes, axes_inv;

  TwoSidedProblem(const RadialObjective& o, int dim) : obj(o), d(dim), axes(Matrix::Zero(dim + 1, dim + 1)) {
    const Matrix& v = o.simplex().vertices();
    const Matrix centered = v.rowwise() - v.colwise().mean();
    const Eigen::SelfAdjointEigenSolver<Matrix> eig(centered.transpose() * centered / static_cast<double>(dim + 1));
    const double top = std::max(eig.eigenvalues().maxCoeff(), 1e-300);
    for (int k = 0; k < dim; ++k) {
      const double extent = std::sqrt(std::max(eig.eigenvalues()(k), 1e-24 * top));
      axes.col(k).head(dim) = eig.eigenvectors().col(k) / extent;
      axes(dim, k) = -eig.eigenvectors().col(k).dot(v.colwise().mean()) / extent;
    }
    axes(dim, dim) = 1.0;
    axes_inv = axes.inverse();
  }
};

Vector pack(const AffineFunction& u) {
  Vector z(u.a.size() + 1);
  z.head(u.a.size()) = u.a;
  z(u.a.size()) = u.c;
  return z;
}

AffineFunction unpack(const Vector& z) {
  const auto d = z.size() - 1;
  return {z.head(d), z(d)};
}

void add_flag(std::vector<std::string>& flags, const std::string& f) {
  if (std::find(flags.begin(), flags.end(), f) == flags.end()) flags.push_back(f);
}

// Objective for (alpha, beta) with the larger weight scaled out: E = w * K^{1/p}.
struct WeightSplit {
  double w, pos, neg;
};

WeightSplit split_weights(const AsymParams& params) {
  const double w = std::max(params.alpha, params.beta);
  return {w, std::pow(params.alpha / w, params.p), std::pow(params.beta / w, params.p)};
}

ApproxResult minimax_two_sided(const Simplex& s, const AsymParams& params) {
  const Ball ball = min_enclosing_ball(s);
  const double a = params.alpha, b = params.beta;
  ApproxResult r;
  r.error = a * b / (a + b) * ball.radius_sq;
  r.minimizer = affine_from_decomposition(ball.center, a / (a + b) * ball.radius_sq);
  r.evaluator = EvaluatorKind::MinimaxExact;
  r.evaluations = 1;
  return r;
}

ApproxResult descent_two_sided(const Simplex& s, const AsymParams& params, const SolverOptions& opts) {
  const LocalFrame frame = make_frame(s);
  const int d = s.dim();
  const auto ws = split_weights(params);
  const RadialObjective obj(frame.local, params.p, ws.pos, ws.neg);
  const TwoSidedProblem prob{obj, d};

  std::vector<Vector> starts;
  {
    const Ball cs = circumsphere(frame.local);
    const AffineFunction interp = affine_from_decomposition(cs.center, obj.best_level(cs.center));
    const Vector centroid = Vector::Zero(d);
    const AffineFunction tangent = affine_from_decomposition(centroid, obj.best_level(centroid));
    starts.push_back(pack(tangent));
    starts.push_back(pack(interp));
  }
  if (!opts.multistart) {
    const double f0 = prob.value(starts[0]), f1 = prob.value(starts[1]);
    if (f1 < f0) std::swap(starts[0], starts[1]);
    starts.resize(1);
  }

  std::vector<NewtonOutcome> runs;
  for (const auto& z0 : starts)
    runs.push_back(newton_minimize(
        z0, [&](const Vector& z) { return prob.value(z); }, [&](const Vector& z) { return prob.grad(z); },
        [&](const Vector& z, const Vector& g) { return prob.hess(z, g); }, std::nullopt, 1.0, opts.max_iterations));
  const NewtonOutcome& best = best_of(runs);

  ApproxResult r;
  r.evaluator = EvaluatorKind::Quadrature;
  r.error = ws.w * std::pow(std::max(best.f, 0.0), 1.0 / params.p) * error_scale(frame, params.p);
  r.minimizer = to_global(frame, unpack(best.z));
  r.evaluations = obj.evaluations();
  r.gradient_norm_at_exit = best.predicted_gap / params.p;
  if (r.gradient_norm_at_exit > opts.solver_tol) add_flag(r.flags, "not_converged");
  return r;
}

ApproxResult onesided_above(const Simplex& s, double p, const SolverOptions& opts) {
  const LocalFrame frame = make_frame(s);
  const int d = s.dim();
  const Simplex& t = frame.local;
  const RadialObjective obj(t, p, 1.0, 1.0);
  const TwoSidedProblem zprob{obj, d};

  // u(t_j) = Q(t_j) + s_j with slacks s_j >= 0.
  Matrix V(d + 1, d + 1);
  V.leftCols(d) = t.vertices();
  V.col(d).setOnes();
  const Eigen::PartialPivLU<Matrix> lu(V);
  const Vector q = t.vertices().rowwise().squaredNorm();
  auto z_of = [&](const Vector& sl) { return Vector(lu.solve(q + sl)); };
  const Matrix Vinv = lu.inverse();

  // Start: tangent plane at the centroid, lifted until it clears every vertex.
  const double lift = q.maxCoeff();
  const Vector s0 = (Vector::Constant(d + 1, lift) - q).unaryExpr([&](double x) { return x <= 1e-14 * lift ? 0.0 : x; });

  auto value = [&](const Vector& sl) { return zprob.value(z_of(sl)); };
  auto grad = [&](const Vector& sl) { return Vector(Vinv.transpose() * zprob.grad(z_of(sl))); };
  auto hess = [&](const Vector& sl, const Vector& g) {
    const Vector z = z_of(sl);
    return Matrix(Vinv.transpose() * zprob.hess(z, g) * Vinv);
  };
  const NewtonOutcome out = newton_minimize(s0, value, grad, hess, Vector::Zero(d + 1), 1.0, opts.max_iterations);

  ApproxResult r;
  r.evaluator = EvaluatorKind::Quadrature;
  r.error = std::pow(std::max(out.f, 0.0), 1.0 / p) * error_scale(frame, p);
  r.minimizer = to_global(frame, unpack(z_of(out.z)));
  r.evaluations = obj.evaluations();
  r.gradient_norm_at_exit = out.predicted_gap / p;
  if (r.gradient_norm_at_exit > opts.solver_tol) add_flag(r.flags, "not_converged");
  return r;
}

ApproxResult onesided_below(const Simplex& s, double p, const SolverOptions& opts) {
  const LocalFrame frame = make_frame(s);
  const int d = s.dim();
  const Simplex& t = frame.local;
  const RadialObjective obj(t, p, 1.0, 1.0);

  // The constraint rho <= dist^2(x0, T) is active at the optimum, which leaves x0 free.
  auto value = [&](const Vector& x0) { return obj.value(x0, squared_distance(t, x0)); };
  auto grad = [&](const Vector& x0) {
    const Vector proj = closest_point(t, x0);
    Vector gc;
    double gl;
    obj.gradient(x0, (x0 - proj).squaredNorm(), gc, gl);
    return Vector(gc + 2.0 * gl * (x0 - proj));
  };
  auto hess = [&](const Vector& x0, const Vector&) {
    const double h = 1e-6;
    Matrix H(d, d);
    for (int k = 0; k < d; ++k) {
      Vector xp = x0, xm = x0;
      xp(k) += h;
      xm(k) -= h;
      H.col(k) = (grad(xp) - grad(xm)) / (2.0 * h);
    }
    return Matrix(0.5 * (H + H.transpose()));
  };

  std::vector<Vector> starts{Vector::Zero(d), circumsphere(t).center};
  if (!opts.multistart) starts.resize(1);
  std::vector<NewtonOutcome> runs;
  for (const auto& x0 : starts) runs.push_back(newton_minimize(x0, value, grad, hess, std::nullopt, 1.0, opts.max_iterations));
  const NewtonOutcome& best = best_of(runs);

  ApproxResult r;
  r.evaluator = EvaluatorKind::Quadrature;
  r.error = std::pow(std::max(best.f, 0.0), 1.0 / p) * error_scale(frame, p);
  r.minimizer = to_global(frame, affine_from_decomposition(best.z, squared_distance(t, best.z)));
  r.evaluations = obj.evaluations();
  r.gradient_norm_at_exit = best.predicted_gap / p;
  if (r.gradient_norm_at_exit > opts.solver_tol) add_flag(r.flags, "not_converged");
  return r;
}

}  // namespace

std::string to_string(EvaluatorKind kind) {
  switch (kind) {
    case EvaluatorKind::ClosedForm: return "closed-form";
    case EvaluatorKind::Quadrature: return "quadrature";
    case EvaluatorKind::MinimaxExact: return "minimax-exact";
  }
  return "unknown";
}

std::string to_string(Side side) { return side == Side::Above ? "above" : "below"; }

ErrorDecomposition error_decomposition(const AffineFunction& u) {
  return {0.5 * u.a, u.c + 0.25 * u.a.squaredNorm()};
}

AffineFunction affine_from_decomposition(const Vector& center, double level) {
  return {2.0 * center, level - center.squaredNorm()};
}

AffineFunction vertex_interpolant(const Simplex& s) {
  const int d = s.dim();
  Matrix m(d + 1, d + 1);
  m.leftCols(d) = s.vertices();
  m.col(d).setOnes();
  const Vector q = s.vertices().rowwise().squaredNorm();
  const Eigen::FullPivLU<Matrix> lu(m);
  Vector ac = lu.solve(q);
  ac += lu.solve(q - m * ac);  // one refinement step
  AffineFunction u;
  u.a = ac.head(d);
  u.c = ac(d);
  return u;
}

AffineFunction tangent_plane(const Vector& point) { return affine_from_decomposition(point, 0.0); }

double eval_error(const Simplex& s, const AffineFunction& u, const AsymParams& params, double /*tol*/) {
  params.validate();
  if (params.one_sided()) throw std::invalid_argument("eval_error: weights must be finite");
  if (u.a.size() != s.dim()) throw std::invalid_argument("eval_error: dimension mismatch");
  const LocalFrame frame = make_frame(s);
  const auto [x0, rho] = error_decomposition(to_local(frame, u));
  if (params.p_infinite()) {
    const double sup_pos = std::max(0.0, max_vertex_dist2(frame.local, x0) - rho);
    const double sup_neg = std::max(0.0, rho - squared_distance(frame.local, x0));
    return std::max(params.alpha * sup_pos, params.beta * sup_neg) * error_scale(frame, params.p);
  }
  const auto ws = split_weights(params);
  const RadialIntegrator ri(frame.local);
  const double K = ri.integrate(RadialKernel{ws.pos, ws.neg, params.p}, x0, rho);
  return ws.w * std::pow(std::max(K, 0.0), 1.0 / params.p) * error_scale(frame, params.p);
}

double eval_error_p2_moments(const Simplex& s, const AffineFunction& u, double weight) {
  if (u.a.size() != s.dim()) throw std::invalid_argument("eval_error_p2_moments: dimension mismatch");
  const LocalFrame frame = make_frame(s);
  const auto [x0, rho] = error_decomposition(to_local(frame, u));
  const Simplex& t = frame.local;
  const int d = t.dim(), n = d + 1;
  auto e = [&](const Vector& x) { return (x - x0).squaredNorm() - rho; };
  // Quadratic form in barycentric coordinates from values at vertices and edge midpoints.
  Matrix E(n, n);
  for (int i = 0; i < n; ++i) E(i, i) = e(t.vertex(i));
  for (int i = 0; i < n; ++i)
    for (int j = i + 1; j < n; ++j) E(i, j) = E(j, i) = 2.0 * e(0.5 * (t.vertex(i) + t.vertex(j))) - 0.5 * (E(i, i) + E(j, j));
  const double base = factorial(d) * volume(t) / factorial(d + 4);
  std::vector<int> cnt(n, 0);
  double sum = 0.0;
  for (int i = 0; i < n; ++i)
    for (int j = 0; j < n; ++j)
      for (int k = 0; k < n; ++k)
        for (int l = 0; l < n; ++l) {
          std::fill(cnt.begin(), cnt.end(), 0);
          ++cnt[i];
          ++cnt[j];
          ++cnt[k];
          ++cnt[l];
          double f = 1.0;
          for (int c : cnt) f *= factorial(c);
          sum += E(i, j) * E(k, l) * f;
        }
  return weight * std::sqrt(std::max(sum * base, 0.0)) * error_scale(frame, 2.0);
}

ErrorGradient error_gradient(const Simplex& s, const AffineFunction& u, const AsymParams& params) {
  params.validate();
  if (params.one_sided() || params.p_infinite())
    throw std::invalid_argument("error_gradient: needs finite p and finite weights");
  const LocalFrame frame = make_frame(s);
  const int d = s.dim();
  const auto ws = split_weights(params);
  const RadialObjective obj(frame.local, params.p, ws.pos, ws.neg);
  const TwoSidedProblem prob{obj, d};
  const Vector z = pack(to_local(frame, u));
  const double K = prob.value(z);
  const Vector gz = prob.grad(z);
  const double scale = ws.w * error_scale(frame, params.p);
  const double El = std::pow(K, 1.0 / params.p);
  const Vector dE = El / (params.p * K) * gz;  // local-frame gradient of K^{1/p}
  const double L = frame.L;
  ErrorGradient out;
  out.error = scale * El;
  out.grad_a = scale * (dE.head(d) / L + dE(d) * frame.g / (L * L));
  out.grad_c = scale * dE(d) / (L * L);
  return out;
}

ApproxResult closed_form_p2(const Simplex& s) {
  const LocalFrame frame = make_frame(s);
  const Simplex& t = frame.local;
  const int d = t.dim(), n = d + 1;
  // Affine forms as vertex values: coordinates y_0..y_{d-1}, then the constant 1.
  Matrix forms(n, n);
  for (int i = 0; i < d; ++i) forms.row(i) = t.vertices().col(i).transpose();
  forms.row(d).setOnes();
  Matrix G(n, n);
  Vector rhs = Vector::Zero(n);
  for (int i = 0; i < n; ++i)
    for (int j = i; j < n; ++j) {
      Matrix f2(2, n);
      f2.row(0) = forms.row(i);
      f2.row(1) = forms.row(j);
      G(i, j) = G(j, i) = integrate_affine_product(t, f2);
    }
  for (int i = 0; i < n; ++i)
    for (int k = 0; k < d; ++k) {
      Matrix f3(3, n);
      f3.row(0) = forms.row(k);
      f3.row(1) = forms.row(k);
      f3.row(2) = forms.row(i);
      rhs(i) += integrate_affine_product(t, f3);
    }
  const Eigen::LDLT<Matrix> ldlt(G);
  if (ldlt.info() != Eigen::Success || !ldlt.isPositive()) throw DegenerateSimplexError("closed_form_p2: singular moment matrix");
  const Vector z = ldlt.solve(rhs);
  ApproxResult r;
  r.minimizer = to_global(frame, unpack(z));
  r.error = eval_error_p2_moments(s, r.minimizer);
  r.evaluator = EvaluatorKind::ClosedForm;
  r.evaluations = 1;
  return r;
}

ApproxResult best_approx(const Simplex& s, const AsymParams& params, const SolverOptions& opts) {
  params.validate();
  if (params.one_sided()) throw std::invalid_argument("best_approx: weights must be finite; use best_onesided");
  if (params.p_infinite()) return minimax_two_sided(s, params);
  if (opts.evaluator == EvaluatorChoice::Auto && params.p == 2.0 && params.symmetric()) {
    ApproxResult r = closed_form_p2(s);
    r.error *= params.alpha;
    return r;
  }
  return descent_two_sided(s, params, opts);
}

ApproxResult best_onesided(const Simplex& s, double p, Side side, const SolverOptions& opts) {
  if (!(p >= 1.0)) throw std::invalid_argument("best_onesided: p must lie in [1, inf]");
  if (std::isinf(p)) {
    // Both one-sided sup errors equal the squared radius of the smallest enclosing ball.
    const Ball ball = min_enclosing_ball(s);
    ApproxResult r;
    r.error = ball.radius_sq;
    r.minimizer = affine_from_decomposition(ball.center, side == Side::Above ? ball.radius_sq : 0.0);
    r.evaluator = EvaluatorKind::MinimaxExact;
    r.evaluations = 1;
    return r;
  }
  return side == Side::Above ? onesided_above(s, p, opts) : onesided_below(s, p, opts);
}

ApproxResult best_error(const Simplex& s, const AsymParams& params, const SolverOptions& opts) {
  params.validate();
  if (std::isinf(params.alpha)) {
    ApproxResult r = best_onesided(s, params.p, Side::Above, opts);
    r.error *= params.beta;
    return r;
  }
  if (std::isinf(params.beta)) {
    ApproxResult r = best_onesided(s, params.p, Side::Below, opts);
    r.error *= params.alpha;
    return r;
  }
  return best_approx(s, params, opts);
}

double sigma_from_error(const Simplex& s, double error, double p) {
  const double expo = std::isinf(p) ? 1.0 : 1.0 + 1.0 / p;
  return error / std::pow(volume(s), expo);
}

double sigma(const Simplex& s, const AsymParams& params, const SolverOptions& opts) {
  return sigma_from_error(s, best_error(s, params, opts).error, params.p);
}

}  // namespace simplexia
