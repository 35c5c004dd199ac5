#include "ftz/quadrature.hpp"

#include <cmath>
#include <numbers>
#include <stdexcept>

#include <Eigen/Eigenvalues>

namespace ftz {

namespace {

// Normalized Hermite functions psi_k(x) = p_k(x) e^{-x^2/2}, k < n. Returns
// psi_n and psi_{n-1}, and accumulates sum_{k<n} psi_k^2.
struct HermiteEval {
  double psi_n, psi_nm1, sum_sq;
};

HermiteEval hermite_functions(int n, double x) {
  double prev = 0.0;
  double cur = std::pow(std::numbers::pi, -0.25) * std::exp(-0.5 * x * x);
  double sum = 0.0;
  for (int k = 0; k < n; ++k) {
    sum += cur * cur;
    const double next = std::sqrt(2.0 / (k + 1)) * x * cur - std::sqrt(double(k) / (k + 1)) * prev;
    prev = cur;
    cur = next;
  }
  return {cur, prev, sum};
}

}  // namespace

HermiteRule gauss_hermite(int order) {
  if (order < 1) throw std::invalid_argument("Gauss-Hermite order must be positive");
  if (order > 700) throw std::invalid_argument("Gauss-Hermite order above 700 is not supported");
  Eigen::MatrixXd jac = Eigen::MatrixXd::Zero(order, order);
  for (int k = 1; k < order; ++k) jac(k - 1, k) = jac(k, k - 1) = std::sqrt(0.5 * k);
  Eigen::SelfAdjointEigenSolver<Eigen::MatrixXd> es(jac, Eigen::EigenvaluesOnly);

  HermiteRule rule;
  rule.nodes = es.eigenvalues();
  rule.weights.resize(order);
  rule.log_weights.resize(order);
  for (int i = 0; i < order; ++i) {
    double x = rule.nodes(i);
    // polish the eigenvalue; p_n' = sqrt(2n) p_{n-1}
    for (int it = 0; it < 3; ++it) {
      const HermiteEval h = hermite_functions(order, x);
      if (h.psi_nm1 == 0.0) break;
      x -= h.psi_n / (std::sqrt(2.0 * order) * h.psi_nm1);
    }
    rule.nodes(i) = x;
    // Christoffel number: w = 1 / sum p_k^2 = e^{-x^2} / sum psi_k^2
    const double s = hermite_functions(order, x).sum_sq;
    rule.log_weights(i) = -x * x - std::log(s);
    rule.weights(i) = std::exp(rule.log_weights(i));
  }
  // symmetrize against roundoff
  for (int i = 0; i < order / 2; ++i) {
    const int j = order - 1 - i;
    const double x = 0.5 * (rule.nodes(j) - rule.nodes(i));
    const double lw = 0.5 * (rule.log_weights(i) + rule.log_weights(j));
    rule.nodes(i) = -x;
    rule.nodes(j) = x;
    rule.log_weights(i) = rule.log_weights(j) = lw;
    rule.weights(i) = rule.weights(j) = std::exp(lw);
  }
  if (order & 1) rule.nodes(order / 2) = 0.0;
  return rule;
}

int QuadratureSpec::resolved_order(int dimension) const {
  const int q = order > 0 ? order : std::max(80, 2 * dimension + 10);
  if (q < 2 * dimension)
    throw std::invalid_argument("quadrature order must be at least twice the basis dimension");
  return q;
}

PlaneRule plane_rule(const QuadratureSpec& quad, double alpha, int dimension) {
  if (!(alpha > 0.0)) throw std::invalid_argument("alpha must be positive");
  PlaneRule r;
  if (quad.scheme == QuadratureSpec::Scheme::gauss_hermite) {
    const HermiteRule h = gauss_hermite(quad.resolved_order(dimension));
    const double scale = 1.0 / std::sqrt(alpha);
    r.re = h.nodes * scale;
    r.im = r.re;
    // x = u/sqrt(alpha) turns (alpha/pi) dv into (1/pi) du dv
    const double shift = -0.5 * std::log(std::numbers::pi);
    r.log_w_re = h.log_weights.array() + shift;
    r.log_w_im = r.log_w_re;
    return r;
  }
  if (!quad.grid) throw std::invalid_argument("grid quadrature needs a grid");
  const Grid& g = *quad.grid;
  const int m = g.points();
  r.re.resize(m);
  r.log_w_re.resize(m);
  const double h = g.spacing();
  for (int i = 0; i < m; ++i) {
    const double x = g.coordinate(i);
    r.re(i) = x;
    r.log_w_re(i) = std::log(h) - alpha * x * x + 0.5 * std::log(alpha / std::numbers::pi);
  }
  r.im = r.re;
  r.log_w_im = r.log_w_re;
  return r;
}

}  // namespace ftz
