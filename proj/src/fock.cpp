#include "ftz/fock.hpp"

#include <cmath>
#include <limits>
#include <numbers>
#include <stdexcept>
#include <string>

#include <unsupported/Eigen/MatrixFunctions>

#include "ftz/parallel.hpp"

namespace ftz {

namespace {

constexpr double kPi = std::numbers::pi;

void require_finite(cplx z, const char* what) {
  if (!std::isfinite(z.real()) || !std::isfinite(z.imag()))
    throw std::invalid_argument(std::string(what) + ": non-finite point");
}

// log of sqrt(alpha^m / m!)
double log_basis_norm(double alpha, int m) {
  return 0.5 * (m * std::log(alpha) - std::lgamma(m + 1.0));
}

// Assembles sum_n w_n g(z_n) e_k(z_n) conj(e_j(z_n)) from a tensor rule and a
// matrix of symbol values vals(a, b) = g(re_a + i im_b).
Eigen::MatrixXcd assemble(const PlaneRule& rule, const Eigen::MatrixXcd& vals, const FockBasis& basis) {
  const int n = basis.dimension();
  const double alpha = basis.alpha();
  const Eigen::Index na = rule.re.size(), nb = rule.im.size();

  // log |B(node, k)| maximised over k tells which nodes matter at all
  struct Node {
    cplx z;
    double log_w;
    cplx g;
  };
  std::vector<Node> nodes;
  nodes.reserve(static_cast<std::size_t>(na * nb));
  double best = -std::numeric_limits<double>::infinity();
  std::vector<double> peak;
  peak.reserve(nodes.capacity());
  for (Eigen::Index b = 0; b < nb; ++b) {
    for (Eigen::Index a = 0; a < na; ++a) {
      const cplx z(rule.re(a), rule.im(b));
      const double lw = rule.log_w_re(a) + rule.log_w_im(b);
      const double lr = std::log(std::abs(z));
      double top = -std::numeric_limits<double>::infinity();
      for (int k = 0; k < n; ++k) {
        const double v = lw + 2.0 * (log_basis_norm(alpha, k) + (k > 0 ? k * lr : 0.0));
        top = std::max(top, v);
      }
      nodes.push_back({z, lw, vals(a, b)});
      peak.push_back(top);
      best = std::max(best, top);
    }
  }
  std::vector<Node> kept;
  for (std::size_t i = 0; i < nodes.size(); ++i)
    if (peak[i] > best - 74.0 && nodes[i].g != 0.0) kept.push_back(nodes[i]);  // 1e-32 relative

  Eigen::MatrixXcd bmat(static_cast<Eigen::Index>(kept.size()), n);
  Eigen::VectorXcd gv(static_cast<Eigen::Index>(kept.size()));
  parallel_for(static_cast<int>(kept.size()), [&](int r) {
    const Node& nd = kept[r];
    const double lr = std::log(std::abs(nd.z));
    const double ph = std::arg(nd.z);
    for (int k = 0; k < n; ++k) {
      if (nd.z == 0.0) {
        bmat(r, k) = k == 0 ? std::exp(0.5 * nd.log_w) : 0.0;
        continue;
      }
      const double lm = 0.5 * nd.log_w + log_basis_norm(alpha, k) + k * lr;
      bmat(r, k) = std::polar(std::exp(lm), k * ph);
    }
    gv(r) = nd.g;
  });
  // T = B^H diag(g) B
  Eigen::MatrixXcd t = bmat.adjoint() * (gv.asDiagonal() * bmat);
  if (!t.allFinite()) throw std::invalid_argument("toeplitz assembly produced non-finite entries");
  return t;
}

double lfact(int n) { return std::lgamma(n + 1.0); }

// Toeplitz matrix of e^{-c|w|^2} b_lambda with s = alpha + c and
// X = pi^2 |lambda|^2 / s. For j >= k the entry is
//   (alpha/s)^{1 + (j+k)/2} e^{-X/2} l_k^{(j-k)}(X) e^{i (j-k) arg a},  a = i pi conj(lambda),
// with l_k^{(b)}(X) = sqrt(k!/(k+b)!) X^{b/2} e^{-X/2} L_k^{(b)}(X), bounded by 1
// and generated by its three-term recurrence in k. The plain moment sum
// cancels catastrophically once X is a few units.
Eigen::MatrixXcd modulated_gaussian_matrix(int n, double alpha, double s, const cplx& lambda) {
  const double x = kPi * kPi * std::norm(lambda) / s;
  const cplx a = cplx(0.0, kPi) * std::conj(lambda);
  const double pa = std::arg(a), pb = std::arg(cplx(0.0, kPi) * lambda);
  const double lr = std::log(alpha / s);
  Eigen::MatrixXcd t = Eigen::MatrixXcd::Zero(n, n);
  parallel_for(n, [&](int beta) {
    // l_0^{(beta)} e^{-X/2}
    double prev = 0.0, cur;
    if (x == 0.0)
      cur = beta == 0 ? 1.0 : 0.0;
    else
      cur = std::exp(0.5 * beta * std::log(x) - x - 0.5 * lfact(beta));
    for (int k = 0; k + beta < n; ++k) {
      const int j = k + beta;
      const double mag = std::exp((1.0 + 0.5 * (j + k)) * lr) * cur;
      t(j, k) = std::polar(mag, beta * pa);
      if (beta > 0) t(k, j) = std::polar(mag, beta * pb);
      const double next = ((2.0 * k + 1.0 + beta - x) * cur - std::sqrt(double(k) * (k + beta)) * prev) /
                          std::sqrt((k + 1.0) * (k + 1.0 + beta));
      prev = cur;
      cur = next;
    }
  });
  return t;
}

}  // namespace

FockBasis::FockBasis(double alpha, int dimension) : alpha_(alpha), dimension_(dimension) {
  if (!(alpha > 0.0) || !std::isfinite(alpha)) throw std::invalid_argument("alpha must be positive");
  if (dimension < 1) throw std::invalid_argument("basis dimension must be at least 1");
}

OperatorMatrix::OperatorMatrix(FockBasis basis, Eigen::MatrixXcd entries)
    : basis_(basis), entries_(std::move(entries)) {
  if (entries_.rows() != basis_.dimension() || entries_.cols() != basis_.dimension())
    throw std::invalid_argument("operator matrix size does not match the basis");
  if (!entries_.allFinite()) throw std::invalid_argument("operator matrix entries must be finite");
}

OperatorMatrix OperatorMatrix::identity(const FockBasis& basis) {
  return OperatorMatrix(basis, Eigen::MatrixXcd::Identity(basis.dimension(), basis.dimension()));
}

OperatorMatrix OperatorMatrix::zero(const FockBasis& basis) {
  return OperatorMatrix(basis, Eigen::MatrixXcd::Zero(basis.dimension(), basis.dimension()));
}

OperatorMatrix OperatorMatrix::leading_block(int n) const {
  if (n < 1 || n > dimension()) throw std::invalid_argument("leading block size out of range");
  return OperatorMatrix(FockBasis(basis_.alpha(), n), entries_.topLeftCorner(n, n));
}

void OperatorMatrix::require_same_basis(const OperatorMatrix& other) const {
  if (!(basis_ == other.basis_)) throw std::invalid_argument("operator matrices live on different bases");
}

OperatorMatrix& OperatorMatrix::operator+=(const OperatorMatrix& other) {
  require_same_basis(other);
  entries_ += other.entries_;
  return *this;
}

OperatorMatrix& OperatorMatrix::operator-=(const OperatorMatrix& other) {
  require_same_basis(other);
  entries_ -= other.entries_;
  return *this;
}

OperatorMatrix& OperatorMatrix::operator*=(cplx c) {
  entries_ *= c;
  return *this;
}

OperatorMatrix operator+(OperatorMatrix a, const OperatorMatrix& b) { return a += b; }
OperatorMatrix operator-(OperatorMatrix a, const OperatorMatrix& b) { return a -= b; }
OperatorMatrix operator*(cplx c, OperatorMatrix a) { return a *= c; }

OperatorMatrix operator*(const OperatorMatrix& a, const OperatorMatrix& b) {
  if (!(a.basis() == b.basis())) throw std::invalid_argument("operator matrices live on different bases");
  return OperatorMatrix(a.basis(), a.entries() * b.entries());
}

OperatorMatrix adjoint(const OperatorMatrix& a) {
  return OperatorMatrix(a.basis(), a.entries().adjoint());
}

Eigen::VectorXcd kernel_coefficients(cplx z, const FockBasis& basis) {
  require_finite(z, "kernel_coefficients");
  const int n = basis.dimension();
  const double alpha = basis.alpha();
  Eigen::VectorXcd c = Eigen::VectorXcd::Zero(n);
  if (z == 0.0) {
    c(0) = 1.0;
    return c;
  }
  const double r2 = std::norm(z);
  const double lr = 0.5 * std::log(r2);
  const double ph = -std::arg(z);
  for (int m = 0; m < n; ++m)
    c(m) = std::polar(std::exp(-0.5 * alpha * r2 + log_basis_norm(alpha, m) + m * lr), m * ph);
  return c;
}

OperatorMatrix toeplitz_matrix(const SymbolSpec& g, const FockBasis& basis, const QuadratureSpec& quad) {
  validate(g);
  if (!g.analytic()) throw std::invalid_argument("grid_file symbols must be sampled before assembly");
  // closed form is exact; the quadrature settings are still validated
  if (quad.scheme == QuadratureSpec::Scheme::gauss_hermite) quad.resolved_order(basis.dimension());
  const int n = basis.dimension();
  const double alpha = basis.alpha();
  const double s = alpha + g.decay;
  Eigen::MatrixXcd t = Eigen::MatrixXcd::Zero(n, n);
  if (g.power > 0) {
    // |w|^{2m} e^{-c|w|^2} is radial: diagonal alpha^{k+1} (k+m)! / (k! s^{k+m+1})
    for (int k = 0; k < n; ++k) {
      const int m = g.power;
      t(k, k) = std::exp((k + 1) * std::log(alpha) + lfact(k + m) - lfact(k) - (k + m + 1) * std::log(s));
    }
  } else {
    t = modulated_gaussian_matrix(n, alpha, s, cplx(g.frequency.x(), g.frequency.y()));
  }
  t *= g.amplitude;
  return OperatorMatrix(basis, std::move(t));
}

OperatorMatrix toeplitz_matrix(const ScalarField& g, const FockBasis& basis, const QuadratureSpec& quad,
                               const Vec2& shift) {
  if (g.domain() != Domain::space) throw std::invalid_argument("toeplitz_matrix expects a space-domain symbol");
  const PlaneRule rule = plane_rule(quad, basis.alpha(), basis.dimension());
  Eigen::MatrixXcd vals;
  if (quad.scheme == QuadratureSpec::Scheme::grid && *quad.grid == g.grid() && shift.isZero()) {
    vals = g.samples();
  } else {
    const FieldSampler sampler(g);
    vals = sampler.on_tensor(rule.re.array() - shift.x(), rule.im.array() - shift.y());
  }
  if (!vals.allFinite()) throw std::invalid_argument("symbol is not finite at the quadrature nodes");
  return OperatorMatrix(basis, assemble(rule, vals, basis));
}

OperatorMatrix translated_toeplitz_sum(const ScalarField& g, const FockBasis& basis, const QuadratureSpec& quad,
                                       const std::vector<Vec2>& shifts, const std::vector<cplx>& weights) {
  if (shifts.size() != weights.size()) throw std::invalid_argument("one weight per shift is required");
  if (g.domain() != Domain::space) throw std::invalid_argument("toeplitz_matrix expects a space-domain symbol");
  // Shifts on grid nodes: the weighted translates of the interpolant are the
  // interpolant of a periodic discrete convolution, done in one FFT pass.
  const Grid& grid = g.grid();
  const double h = grid.spacing();
  const int half = grid.points() / 2;
  Eigen::MatrixXcd comb = Eigen::MatrixXcd::Zero(grid.points(), grid.points());
  bool aligned = true;
  for (std::size_t i = 0; i < shifts.size() && aligned; ++i) {
    const double u = shifts[i].x() / h, v = shifts[i].y() / h;
    const long a = std::lround(u), b = std::lround(v);
    if (std::abs(u - a) > 1e-9 || std::abs(v - b) > 1e-9 || std::abs(a) >= half || std::abs(b) >= half) {
      aligned = false;
      break;
    }
    comb(half + a, half + b) += weights[i] / (h * h);
  }
  if (aligned) return toeplitz_matrix(convolve(g, ScalarField(grid, Domain::space, comb)), basis, quad);

  const PlaneRule rule = plane_rule(quad, basis.alpha(), basis.dimension());
  const FieldSampler sampler(g);
  Eigen::MatrixXcd vals = Eigen::MatrixXcd::Zero(rule.re.size(), rule.im.size());
  for (std::size_t i = 0; i < shifts.size(); ++i) {
    if (weights[i] == 0.0) continue;
    vals += weights[i] * sampler.on_tensor(rule.re.array() - shifts[i].x(), rule.im.array() - shifts[i].y());
  }
  if (!vals.allFinite()) throw std::invalid_argument("symbol is not finite at the quadrature nodes");
  return OperatorMatrix(basis, assemble(rule, vals, basis));
}

OperatorMatrix toeplitz_matrix(const std::function<cplx(cplx)>& g, const FockBasis& basis,
                               const QuadratureSpec& quad) {
  const PlaneRule rule = plane_rule(quad, basis.alpha(), basis.dimension());
  Eigen::MatrixXcd vals(rule.re.size(), rule.im.size());
  for (Eigen::Index b = 0; b < rule.im.size(); ++b)
    for (Eigen::Index a = 0; a < rule.re.size(); ++a) vals(a, b) = g(cplx(rule.re(a), rule.im(b)));
  if (!vals.allFinite()) throw std::invalid_argument("symbol is not finite at the quadrature nodes");
  return OperatorMatrix(basis, assemble(rule, vals, basis));
}

OperatorMatrix displacement_matrix(cplx z, const FockBasis& basis) {
  require_finite(z, "displacement_matrix");
  const int n = basis.dimension();
  const double alpha = basis.alpha();
  if (alpha * std::norm(z) > 0.25 * n)
    throw std::invalid_argument("displacement too large for the truncation: need alpha|z|^2 <= N/4");
  if (z == 0.0) return OperatorMatrix::identity(basis);
  Eigen::MatrixXcd ann = Eigen::MatrixXcd::Zero(n, n);
  for (int m = 1; m < n; ++m) ann(m - 1, m) = std::sqrt(double(m));
  const Eigen::MatrixXcd gen = std::sqrt(alpha) * (std::conj(z) * ann.adjoint() - z * ann);
  Eigen::MatrixXcd w = gen.exp();

  const int half = std::max(1, n / 2);
  const Eigen::VectorXcd k = kernel_coefficients(z, basis);
  const double err = (w.col(0).head(half) - k.head(half)).cwiseAbs().maxCoeff();
  if (err > 1e-6)
    throw std::runtime_error("displacement matrix column 0 disagrees with k_z (" + std::to_string(err) + ")");
  return OperatorMatrix(basis, std::move(w));
}

double operator_norm(const OperatorMatrix& a) {
  const Eigen::MatrixXcd& m = a.entries();
  const double scale = m.cwiseAbs().maxCoeff();
  if (scale == 0.0) return 0.0;
  const Eigen::MatrixXcd b = m / scale;
  const Eigen::MatrixXcd h = b.adjoint() * b;
  Eigen::VectorXcd v = Eigen::VectorXcd::Ones(m.cols()).normalized();
  double lambda = 0.0;
  for (int it = 0; it < 500; ++it) {
    Eigen::VectorXcd u = h * v;
    const double nu = u.norm();
    if (nu == 0.0) break;
    const double next = v.dot(u).real();
    v = u / nu;
    if (it > 0 && std::abs(next - lambda) <= 1e-10 * std::abs(next)) {
      lambda = next;
      break;
    }
    lambda = next;
  }
  // Rayleigh quotient of the final iterate
  lambda = std::max(lambda, v.dot(h * v).real());
  return scale * std::sqrt(std::max(lambda, 0.0));
}

Eigen::VectorXd singular_values(const OperatorMatrix& a) {
  const double scale = a.entries().cwiseAbs().maxCoeff();
  if (scale == 0.0) return Eigen::VectorXd::Zero(a.dimension());
  Eigen::JacobiSVD<Eigen::MatrixXcd> svd(a.entries() / scale);
  return svd.singularValues() * scale;
}

double schatten_norm(const OperatorMatrix& a, double p) {
  if (!(p >= 1.0)) throw std::invalid_argument("Schatten index p must be at least 1");
  const Eigen::VectorXd s = singular_values(a);
  const double top = s.size() ? s.maxCoeff() : 0.0;
  if (top == 0.0) return 0.0;
  return top * std::pow((s / top).array().pow(p).sum(), 1.0 / p);
}

cplx berezin(const OperatorMatrix& a, cplx z) { return berezin(a, z, z); }

cplx berezin(const OperatorMatrix& a, cplx z, cplx w) {
  const FockBasis& basis = a.basis();
  const double lim = basis.kernel_radius_sq() * (1.0 + 1e-12);
  if (std::norm(z) > lim || std::norm(w) > lim)
    throw std::invalid_argument("berezin: point outside the truncation-controlled disc |z|^2 <= N/(2 alpha)");
  const Eigen::VectorXcd cz = kernel_coefficients(z, basis);
  const Eigen::VectorXcd cw = kernel_coefficients(w, basis);
  return cw.dot(a.entries() * cz);
}

cplx two_variable_berezin(const SymbolSpec& g, double alpha, cplx z, cplx w) {
  validate(g);
  if (!g.analytic()) throw std::invalid_argument("closed-form Berezin needs an analytic symbol");
  const double s = alpha + g.decay;
  const cplx lam(g.frequency.x(), g.frequency.y());
  const cplx p = cplx(0.0, kPi) * std::conj(lam) + alpha * std::conj(z);
  const cplx q = cplx(0.0, kPi) * lam + alpha * w;
  cplx value = g.amplitude * (alpha / s) * std::exp(p * q / s - 0.5 * alpha * (std::norm(z) + std::norm(w)));
  if (g.power > 0) {
    // m! s^{-m} L_m(-pq/s)
    const int m = g.power;
    const cplx x = -p * q / s;
    cplx l0 = 1.0, l1 = 1.0 - x;
    cplx lm = m == 0 ? l0 : l1;
    for (int k = 1; k < m; ++k) {
      const cplx next = ((2.0 * k + 1.0 - x) * l1 - double(k) * l0) / double(k + 1);
      l0 = l1;
      l1 = next;
      lm = next;
    }
    value *= std::exp(lfact(m) - m * std::log(s)) * lm;
  }
  return value;
}

cplx two_variable_berezin(const std::function<cplx(cplx)>& g, double alpha, cplx z, cplx w, int order) {
  // -alpha(u - w)(conj u - conj z) = -alpha|u - c|^2 - 2i alpha Im((u - c) conj d) + alpha|d|^2
  // with c = (z + w)/2, d = (w - z)/2
  const HermiteRule h = gauss_hermite(order);
  const cplx c = 0.5 * (z + w), d = 0.5 * (w - z);
  const double scale = 1.0 / std::sqrt(alpha);
  const cplx outer = std::exp(alpha * w * std::conj(z) - 0.5 * alpha * (std::norm(z) + std::norm(w)) +
                              alpha * std::norm(d));
  cplx sum = 0.0;
  for (int b = 0; b < order; ++b) {
    for (int a = 0; a < order; ++a) {
      const cplx v(h.nodes(a) * scale, h.nodes(b) * scale);
      const double ph = -2.0 * alpha * (v * std::conj(d)).imag();
      sum += h.weights(a) * h.weights(b) * g(c + v) * std::polar(1.0, ph);
    }
  }
  return sum * outer / kPi;
}

}  // namespace ftz
