#include "simplexia/quadrature.hpp"

#include <algorithm>
#include <cmath>
#include <queue>
#include <stdexcept>

#include "simplexia/radial.hpp"

namespace simplexia {

namespace {

double factorial(int n) {
  double r = 1.0;
  for (int k = 2; k <= n; ++k) r *= k;
  return r;
}

void compositions(int total, int parts, std::vector<int>& cur, std::vector<std::vector<int>>& out) {
  if (static_cast<int>(cur.size()) == parts - 1) {
    cur.push_back(total);
    out.push_back(cur);
    cur.pop_back();
    return;
  }
  for (int k = total; k >= 0; --k) {
    cur.push_back(k);
    compositions(total - k, parts, cur, out);
    cur.pop_back();
  }
}

double cell_volume(const Matrix& v) {
  const int d = static_cast<int>(v.cols());
  Matrix e(d, d);
  for (int j = 0; j < d; ++j) e.col(j) = (v.row(j + 1) - v.row(0)).transpose();
  return std::abs(e.determinant()) / factorial(d);
}

double rule_on_cell(const QuadratureRule& rule, const Matrix& v, double vol,
                    const std::function<double(const Vector&)>& f) {
  double acc = 0.0;
  for (Eigen::Index i = 0; i < rule.nodes.rows(); ++i) {
    const Vector x = v.transpose() * rule.nodes.row(i).transpose();
    acc += rule.weights(i) * f(x);
  }
  return vol * acc;
}

std::pair<Matrix, Matrix> bisect_longest(const Matrix& v) {
  int bi = 0, bj = 1;
  double best = -1.0;
  for (Eigen::Index i = 0; i < v.rows(); ++i)
    for (Eigen::Index j = i + 1; j < v.rows(); ++j) {
      const double len = (v.row(i) - v.row(j)).squaredNorm();
      if (len > best * (1.0 + 1e-12)) {
        best = len;
        bi = static_cast<int>(i);
        bj = static_cast<int>(j);
      }
    }
  const Eigen::RowVectorXd mid = 0.5 * (v.row(bi) + v.row(bj));
  Matrix a = v, b = v;
  a.row(bj) = mid;
  b.row(bi) = mid;
  return {a, b};
}

struct Cell {
  Matrix v;
  double vol;
  double value;
  double error;
  long id;
};

struct CellOrder {
  bool operator()(const Cell& x, const Cell& y) const {
    if (x.error != y.error) return x.error < y.error;
    return x.id > y.id;
  }
};

// Generic refinement loop. `eval` fills value/error for a cell and may mark it final.
template <class Eval>
IntegralEstimate refine(const Simplex& s, double tol, long max_cells, Eval eval) {
  std::priority_queue<Cell, std::vector<Cell>, CellOrder> queue;
  long next_id = 0;
  double value = 0.0, error = 0.0;
  auto push = [&](Matrix v) {
    Cell c{std::move(v), 0.0, 0.0, 0.0, next_id++};
    c.vol = cell_volume(c.v);
    eval(c);
    value += c.value;
    error += c.error;
    queue.push(std::move(c));
  };
  push(s.vertices());
  long cells = 1;
  while (error > tol && cells < max_cells) {
    Cell top = queue.top();
    if (top.error <= 0.0) break;
    queue.pop();
    value -= top.value;
    error -= top.error;
    auto [a, b] = bisect_longest(top.v);
    push(std::move(a));
    push(std::move(b));
    ++cells;
  }
  // Resum in a fixed order so the result does not carry the drift of the running sums.
  std::vector<Cell> leaves;
  leaves.reserve(queue.size());
  while (!queue.empty()) {
    leaves.push_back(queue.top());
    queue.pop();
  }
  std::sort(leaves.begin(), leaves.end(), [](const Cell& x, const Cell& y) { return x.id < y.id; });
  IntegralEstimate est;
  est.value = 0.0;
  est.error_estimate = 0.0;
  for (const auto& c : leaves) {
    est.value += c.value;
    est.error_estimate += c.error;
  }
  est.cells_used = cells;
  est.budget_exhausted = est.error_estimate > tol;
  return est;
}

const QuadratureRule& cached_rule(int dim, int s) {
  thread_local std::vector<std::vector<QuadratureRule>> cache;
  if (static_cast<int>(cache.size()) <= dim) cache.resize(dim + 1);
  auto& row = cache[dim];
  if (static_cast<int>(row.size()) <= s) {
    for (int k = static_cast<int>(row.size()); k <= s; ++k) row.push_back(grundmann_moller(dim, k));
  }
  return row[s];
}

}  // namespace

QuadratureRule grundmann_moller(int dim, int s) {
  if (dim < 1 || s < 0) throw std::invalid_argument("grundmann_moller: need dim >= 1 and s >= 0");
  QuadratureRule rule;
  rule.dim = dim;
  rule.degree = 2 * s + 1;
  const int D = 2 * s + 1;
  std::vector<std::vector<double>> nodes;
  std::vector<double> weights;
  for (int i = 0; i <= s; ++i) {
    const double denom = D + dim - 2 * i;
    const double w = ((i % 2) ? -1.0 : 1.0) * std::pow(2.0, -2 * s) * std::pow(denom, D) /
                     (factorial(i) * factorial(D + dim - i)) * factorial(dim);
    std::vector<std::vector<int>> betas;
    std::vector<int> cur;
    compositions(s - i, dim + 1, cur, betas);
    for (const auto& beta : betas) {
      std::vector<double> node(dim + 1);
      for (int j = 0; j <= dim; ++j) node[j] = (2.0 * beta[j] + 1.0) / denom;
      nodes.push_back(std::move(node));
      weights.push_back(w);
    }
  }
  rule.nodes.resize(static_cast<Eigen::Index>(nodes.size()), dim + 1);
  rule.weights.resize(static_cast<Eigen::Index>(nodes.size()));
  for (std::size_t i = 0; i < nodes.size(); ++i) {
    for (int j = 0; j <= dim; ++j) rule.nodes(static_cast<Eigen::Index>(i), j) = nodes[i][j];
    rule.weights(static_cast<Eigen::Index>(i)) = weights[i];
  }
  return rule;
}

double apply_rule(const QuadratureRule& rule, const Simplex& s, const std::function<double(const Vector&)>& f) {
  if (rule.dim != s.dim()) throw std::invalid_argument("apply_rule: dimension mismatch");
  return rule_on_cell(rule, s.vertices(), volume(s), f);
}

double integrate_barycentric_monomial(const Simplex& s, const std::vector<int>& exponents) {
  const int d = s.dim();
  if (static_cast<int>(exponents.size()) != d + 1)
    throw std::invalid_argument("integrate_barycentric_monomial: need d+1 exponents");
  int total = 0;
  double num = 1.0;
  for (int a : exponents) {
    if (a < 0) throw std::invalid_argument("integrate_barycentric_monomial: negative exponent");
    total += a;
    num *= factorial(a);
  }
  return factorial(d) * volume(s) * num / factorial(d + total);
}

double integrate_affine_product(const Simplex& s, const Matrix& forms) {
  const int d = s.dim();
  const int m = static_cast<int>(forms.rows());
  if (forms.cols() != d + 1) throw std::invalid_argument("integrate_affine_product: forms need d+1 columns");
  // Sum over index sequences j_1..j_m of prod l_{k,j_k} * prod_j n_j!, where n_j counts j.
  std::vector<int> counts(d + 1, 0);
  double total = 0.0;
  std::function<void(int, double, double)> walk = [&](int k, double prod, double fact) {
    if (k == m) {
      total += prod * fact;
      return;
    }
    for (int j = 0; j <= d; ++j) {
      const double l = forms(k, j);
      if (l == 0.0) continue;
      ++counts[j];
      walk(k + 1, prod * l, fact * counts[j]);
      --counts[j];
    }
  };
  walk(0, 1.0, 1.0);
  return factorial(d) * volume(s) / factorial(d + m) * total;
}

double integrate_monomial(const Simplex& s, const std::vector<int>& exponents) {
  const int d = s.dim();
  if (static_cast<int>(exponents.size()) != d) throw std::invalid_argument("integrate_monomial: need d exponents");
  int m = 0;
  for (int e : exponents) {
    if (e < 0) throw std::invalid_argument("integrate_monomial: negative exponent");
    m += e;
  }
  Matrix forms(m, d + 1);
  int row = 0;
  for (int i = 0; i < d; ++i)
    for (int k = 0; k < exponents[i]; ++k) forms.row(row++) = s.vertices().col(i).transpose();
  return integrate_affine_product(s, forms);
}

IntegralEstimate integrate_adaptive(const std::function<double(const Vector&)>& f, const Simplex& s, double tol,
                                    long max_cells) {
  if (!(tol > 0.0)) throw std::invalid_argument("integrate_adaptive: tol must be positive");
  const auto& hi = cached_rule(s.dim(), 3);
  const auto& lo = cached_rule(s.dim(), 2);
  return refine(s, tol, max_cells, [&](Cell& c) {
    c.value = rule_on_cell(hi, c.v, c.vol, f);
    c.error = std::abs(c.value - rule_on_cell(lo, c.v, c.vol, f));
  });
}

IntegralEstimate integrate_asym_power(const Vector& center, double rho, const AsymParams& params, const Simplex& s,
                                      double tol) {
  params.validate();
  if (params.p_infinite() || params.one_sided())
    throw std::invalid_argument("integrate_asym_power: needs finite p and finite weights");
  const RadialKernel kernel{std::pow(params.alpha, params.p), std::pow(params.beta, params.p), params.p};
  const RadialIntegrator fine(s, 16), coarse(s, 12);
  IntegralEstimate est;
  est.value = fine.integrate(kernel, center, rho);
  est.error_estimate = std::abs(est.value - coarse.integrate(kernel, center, rho));
  est.cells_used = RadialIntegrator::last_panel_count();
  est.budget_exhausted = est.error_estimate > tol;
  return est;
}

IntegralEstimate integrate_asym_power_cells(const Vector& center, double rho, const AsymParams& params,
                                            const Simplex& s, double tol, long max_cells) {
  params.validate();
  if (params.p_infinite() || params.one_sided())
    throw std::invalid_argument("integrate_asym_power_cells: needs finite p and finite weights");
  const double p = params.p, alpha = params.alpha, beta = params.beta;
  auto f = [&](const Vector& x) {
    const double e = (x - center).squaredNorm() - rho;
    return e >= 0.0 ? std::pow(alpha * e, p) : std::pow(-beta * e, p);
  };
  const bool integer_p = std::abs(p - std::round(p)) < 1e-12;
  // For integer p a rule of degree >= 2p is exact on cells the sphere does not cut.
  const int exact_s = integer_p ? std::max(3, static_cast<int>(std::ceil((2.0 * p - 1.0) / 2.0))) : 3;
  const auto& hi = cached_rule(s.dim(), exact_s);
  const auto& lo = cached_rule(s.dim(), 2);
  const auto& mid = cached_rule(s.dim(), 3);
  return refine(s, tol, max_cells, [&](Cell& c) {
    double dmax = 0.0;
    for (Eigen::Index i = 0; i < c.v.rows(); ++i) dmax = std::max(dmax, (c.v.row(i).transpose() - center).squaredNorm());
    bool straddles = false;
    if (rho > 0.0 && dmax > rho) {
      Matrix vv = c.v;
      const Simplex cell_simplex(vv);
      straddles = squared_distance(cell_simplex, center) < rho;
    }
    c.value = rule_on_cell(hi, c.v, c.vol, f);
    if (!straddles && integer_p) {
      c.error = 0.0;
    } else {
      c.error = std::abs(rule_on_cell(mid, c.v, c.vol, f) - rule_on_cell(lo, c.v, c.vol, f));
      if (&hi != &mid) c.error = std::max(c.error, std::abs(c.value - rule_on_cell(mid, c.v, c.vol, f)));
    }
    if (straddles) {
      // Rule nodes can all miss the kink, so the two rules may agree on a cut cell.
      // Bound the error by the spread of the integrand over the cell instead.
      double fmin = f(c.v.row(0).transpose()), fmax = fmin;
      for (Eigen::Index i = 1; i < c.v.rows(); ++i) {
        const double fi = f(c.v.row(i).transpose());
        fmin = std::min(fmin, fi);
        fmax = std::max(fmax, fi);
      }
      fmin = std::min(fmin, 0.0);
      c.error = std::max(c.error, c.vol * (fmax - fmin));
    }
  });
}

}  // namespace simplexia
