#include "ftz/bounds.hpp"

#include <cmath>
#include <functional>
#include <optional>
#include <numbers>
#include <stdexcept>

#include "ftz/parallel.hpp"

namespace ftz {

namespace {

constexpr double kPi = std::numbers::pi;
constexpr double kShellFraction = 0.01;
constexpr double kBoundaryShell = 1.0;

void require_p(double p) {
  if (!(p >= 1.0)) throw std::invalid_argument("p must be at least 1");
}

std::vector<ScalarField> all_jets(const ScalarField& g, double alpha) {
  const ScalarField h = heat_transform(g, 0.5 / alpha);
  std::vector<ScalarField> out;
  out.reserve(derivative_pairs().size());
  for (auto [a, b] : derivative_pairs()) out.push_back(spectral_derivative(h, a, b));
  return out;
}

// Integer lattice offsets (i, j) with |(i, j) * step| <= radius (disc).
std::vector<Vec2> disc_lattice(double radius, double step) {
  if (!(radius > 0.0) || !(step > 0.0)) throw std::invalid_argument("lattice radius and step must be positive");
  const int n = static_cast<int>(std::floor(radius / step + 1e-9));
  std::vector<Vec2> pts;
  for (int j = -n; j <= n; ++j)
    for (int i = -n; i <= n; ++i) {
      const Vec2 p(i * step, j * step);
      if (p.norm() <= radius + 1e-9) pts.push_back(p);
    }
  return pts;
}

}  // namespace

const std::array<std::pair<int, int>, 10>& derivative_pairs() {
  static const std::array<std::pair<int, int>, 10> pairs = {
      {{0, 0}, {1, 0}, {0, 1}, {2, 0}, {1, 1}, {0, 2}, {3, 0}, {2, 1}, {1, 2}, {0, 3}}};
  return pairs;
}

ScalarField jet(const ScalarField& g, int a, int b, double alpha) {
  if (!(alpha > 0.0)) throw std::invalid_argument("alpha must be positive");
  return spectral_derivative(heat_transform(g, 0.5 / alpha), a, b);
}

double carleson(const ScalarField& f, const CarlesonMode& mode) {
  if (f.domain() != Domain::space) throw std::invalid_argument("carleson expects a space-domain field");
  const double top = f.samples().cwiseAbs().maxCoeff();
  const double tol = 1e-12 * std::max(top, 1e-300);
  for (Eigen::Index j = 0; j < f.samples().cols(); ++j)
    for (Eigen::Index i = 0; i < f.samples().rows(); ++i) {
      const cplx v = f.samples()(i, j);
      if (v.real() < -tol || std::abs(v.imag()) > tol)
        throw std::invalid_argument("carleson expects real nonnegative samples");
    }
  const ScalarField pos(f.grid(), Domain::space, f.samples().real().cwiseMax(0.0).cast<cplx>());
  if (mode.kind == CarlesonMode::Kind::heat) {
    if (!(mode.alpha > 0.0)) throw std::invalid_argument("alpha must be positive");
    return field_norm(heat_transform(pos, 2.0 / mode.alpha), Norm::sup());
  }
  if (!(mode.radius > 0.0)) throw std::invalid_argument("ball radius must be positive");
  // convolve() carries the h^2 factor, so this is the Riemann sum over B(x, r)
  const auto disc = ScalarField::from_function(f.grid(), [&](double u, double v) {
    return cplx(u * u + v * v <= mode.radius * mode.radius * (1.0 + 1e-12) ? 1.0 : 0.0);
  });
  return convolve(pos, disc).samples().real().maxCoeff();
}

double schur_bound(const SymbolSpec& g, double alpha, double sample_extent, double sample_step,
                   const QuadratureSpec& quad) {
  validate(g);
  if (!(alpha > 0.0)) throw std::invalid_argument("alpha must be positive");
  if (!(sample_extent > 0.0) || !(sample_step > 0.0) || sample_step > sample_extent)
    throw std::invalid_argument("schur_bound needs 0 < sample_step <= sample_extent");
  const int n = static_cast<int>(std::floor(sample_extent / sample_step + 1e-9));
  const int inner = n / 2;
  const int side = 2 * n + 1;
  const double d2 = sample_step * sample_step;

  std::function<double(cplx, cplx)> kernel;
  std::optional<ScalarField> sampled;
  std::optional<FieldSampler> sampler;
  if (g.analytic()) {
    kernel = [&](cplx z, cplx w) { return std::abs(two_variable_berezin(g, alpha, z, w)); };
  } else {
    if (!quad.grid) throw std::invalid_argument("grid_file symbols need a grid in the quadrature spec");
    sampled = sample_symbol(g, *quad.grid);
    sampler.emplace(*sampled);
    kernel = [&](cplx z, cplx w) {
      return std::abs(two_variable_berezin([&](cplx u) { return sampler->at(u); }, alpha, z, w, 32));
    };
  }

  // row_sums(z) = sum_w |g~(z, w)| d^2 over the full lattice, for inner z;
  // col_sums(w) likewise over z.
  const int inner_side = 2 * inner + 1;
  Eigen::MatrixXd row_sums(inner_side, inner_side), col_sums(inner_side, inner_side);
  parallel_for(inner_side * inner_side, [&](int idx) {
    const int a = idx % inner_side - inner, b = idx / inner_side - inner;
    const cplx p(a * sample_step, b * sample_step);
    double sr = 0.0, sc = 0.0;
    for (int j = 0; j < side; ++j)
      for (int i = 0; i < side; ++i) {
        const cplx q((i - n) * sample_step, (j - n) * sample_step);
        sr += kernel(p, q);
        sc += kernel(q, p);
      }
    row_sums(a + inner, b + inner) = sr * d2;
    col_sums(a + inner, b + inner) = sc * d2;
  });

  auto checked_sup = [&](const Eigen::MatrixXd& s, const char* which) {
    double interior = 0.0, edge = 0.0;
    for (int b = 0; b < inner_side; ++b)
      for (int a = 0; a < inner_side; ++a) {
        const bool on_edge = a == 0 || b == 0 || a == inner_side - 1 || b == inner_side - 1;
        (on_edge ? edge : interior) = std::max(on_edge ? edge : interior, s(a, b));
      }
    if (inner_side > 2 && edge > interior * (1.0 + 1e-9))
      throw std::runtime_error(std::string("schur_bound: sup over ") + which +
                               " attained on the sample boundary; enlarge sample_extent");
    return std::max(edge, interior);
  };
  const double sup_z = checked_sup(row_sums, "z");
  const double sup_w = checked_sup(col_sums, "w");
  return std::sqrt((alpha / kPi) * sup_z * sup_w);
}

double main_bound(const ScalarField& g, double alpha) {
  double total = 0.0;
  for (const ScalarField& j : all_jets(g, alpha))
    total += field_norm(heat_transform(abs_pow(j), 2.0 / alpha), Norm::sup());
  return total;
}

double main_bound(const SymbolSpec& g, double alpha, const Grid& grid) {
  return main_bound(sample_symbol(g, grid), alpha);
}

BoundReport bound_chain_report(const SymbolSpec& g, double alpha, double t, const Grid& grid) {
  if (!(alpha > 0.0)) throw std::invalid_argument("alpha must be positive");
  if (!(t > 0.0) || !(t < 0.5 / alpha)) throw std::invalid_argument("bound chain needs 0 < t < 1/(2 alpha)");
  const ScalarField f = sample_symbol(g, grid);
  double first = 0.0, second = 0.0;
  for (const ScalarField& j : all_jets(f, alpha)) {
    first += field_norm(heat_transform(abs_pow(j), 2.0 / alpha), Norm::sup());
    second += field_norm(j, Norm::sup());
  }
  const double third = field_norm(heat_transform(f, t), Norm::sup());
  BoundReport r;
  r.name = "bound_chain";
  r.symbol = g.describe();
  r.alpha = alpha;
  r.bound = third;
  r.measured = first;
  r.ratio = third > 0.0 ? first / third : 0.0;
  r.extras = {{"heat_of_abs_jets", first},
              {"sup_of_jets", second},
              {"sup_heat_t", third},
              {"ratio_first_second", second > 0.0 ? first / second : 0.0},
              {"ratio_second_third", third > 0.0 ? second / third : 0.0},
              {"t", t}};
  return r;
}

BoundValue schatten_symbol_bound(const SymbolSpec& g, double p, const Grid& grid, SchattenVariant variant,
                                 double alpha) {
  require_p(p);
  const ScalarField f = sample_symbol(g, grid);
  BoundValue out;
  auto add = [&](const ScalarField& h) {
    out.value += field_norm(h, Norm::lp(p));
    if (boundary_mass_fraction(abs_pow(h, p), kBoundaryShell) > kShellFraction) out.divergent = true;
  };
  if (variant == SchattenVariant::plain)
    add(f);
  else
    for (const ScalarField& j : all_jets(f, alpha)) add(j);
  return out;
}

BoundValue kernel_schatten_bound(const OperatorMatrix& a, double p, double w_extent, double w_step,
                                 double z_extent, double z_step) {
  require_p(p);
  const FockBasis& basis = a.basis();
  const double lim = std::sqrt(basis.kernel_radius_sq());
  if (z_extent + w_extent > lim * (1.0 + 1e-12))
    throw std::invalid_argument("kernel_schatten_bound: z_extent + w_extent exceeds the truncation radius sqrt(N/(2 alpha))");
  const std::vector<Vec2> zs = disc_lattice(z_extent, z_step);
  const std::vector<Vec2> ws = disc_lattice(w_extent, w_step);

  std::vector<Eigen::VectorXcd> az(zs.size());
  parallel_for(static_cast<int>(zs.size()), [&](int i) {
    az[i] = a.entries() * kernel_coefficients(cplx(zs[i].x(), zs[i].y()), basis);
  });

  const double z_shell = z_extent - z_step;
  std::vector<double> inner(ws.size());
  std::vector<char> inner_divergent(ws.size(), 0);
  parallel_for(static_cast<int>(ws.size()), [&](int k) {
    double total = 0.0, shell = 0.0;
    for (std::size_t i = 0; i < zs.size(); ++i) {
      const Vec2 zw = zs[i] + ws[k];
      const double v = std::pow(std::abs(kernel_coefficients(cplx(zw.x(), zw.y()), basis).dot(az[i])), p);
      total += v;
      if (zs[i].norm() > z_shell + 1e-9) shell += v;
    }
    inner[k] = total * z_step * z_step;
    inner_divergent[k] = total > 0.0 && shell > kShellFraction * total;
  });

  BoundValue out;
  const double w_shell = w_extent - w_step;
  double total = 0.0, shell = 0.0;
  for (std::size_t k = 0; k < ws.size(); ++k) {
    const double v = std::pow(inner[k], 1.0 / p);
    total += v;
    if (ws[k].norm() > w_shell + 1e-9) shell += v;
    if (inner_divergent[k] && inner[k] > 0.0) out.divergent = true;
  }
  out.value = total * w_step * w_step;
  if (total > 0.0 && shell > kShellFraction * total) out.divergent = true;
  return out;
}

BoundValue product_schatten_bound(const SymbolSpec& f, const SymbolSpec& g, double p, double alpha,
                                  const Grid& grid, const std::vector<Vec2>& w_samples) {
  require_p(p);
  if (w_samples.empty()) throw std::invalid_argument("product_schatten_bound needs at least one w sample");
  const double h = grid.spacing();
  std::vector<std::pair<int, int>> w_index;
  for (const Vec2& w : w_samples) {
    const double si = (w.x() - grid.coordinate(0)) / h, sj = (w.y() - grid.coordinate(0)) / h;
    const long i = std::lround(si), j = std::lround(sj);
    if (std::abs(si - i) > 1e-9 || std::abs(sj - j) > 1e-9 || i < 0 || j < 0 || i >= grid.points() ||
        j >= grid.points())
      throw std::invalid_argument("w samples must be grid nodes");
    w_index.emplace_back(static_cast<int>(i), static_cast<int>(j));
  }
  const std::vector<ScalarField> jf = all_jets(sample_symbol(f, grid), alpha);
  const std::vector<ScalarField> jg = all_jets(sample_symbol(g, grid), alpha);
  const auto coupling = ScalarField::from_function(
      grid, [&](double u, double v) { return cplx(std::exp(-0.5 * alpha * (u * u + v * v))); });

  // H_ab = |J^{a,b} f|^p * G, reused across the inner loop
  std::vector<ScalarField> hf;
  hf.reserve(jf.size());
  for (const ScalarField& j : jf) hf.push_back(reflect(convolve(abs_pow(j, p), coupling)));
  std::vector<ScalarField> pg;
  pg.reserve(jg.size());
  for (const ScalarField& j : jg) pg.push_back(abs_pow(j, p));

  BoundValue out;
  const int n = static_cast<int>(hf.size());
  std::vector<double> terms(static_cast<std::size_t>(n * n), 0.0);
  std::vector<char> flags(terms.size(), 0);
  parallel_for(n * n, [&](int idx) {
    const int ab = idx / n, cd = idx % n;
    const ScalarField c = convolve(pg[cd], hf[ab]);
    double best = -1.0;
    std::pair<int, int> arg{0, 0};
    for (auto [i, j] : w_index) {
      const double v = c(i, j).real();
      if (v > best) {
        best = v;
        arg = {i, j};
      }
    }
    terms[idx] = std::pow(std::max(best, 0.0), 1.0 / p);
    // outer integrand at the maximising w: |J g|^p (eta) H(eta - w)
    const Vec2 w(grid.coordinate(arg.first), grid.coordinate(arg.second));
    const ScalarField shifted = translate_modulate(reflect(hf[ab]), w, Vec2::Zero());
    const ScalarField integrand = pg[cd] * shifted;
    flags[idx] = boundary_mass_fraction(integrand, kBoundaryShell) > kShellFraction;
  });
  for (std::size_t i = 0; i < terms.size(); ++i) {
    out.value += terms[i];
    if (flags[i] && terms[i] > 0.0) out.divergent = true;
  }
  return out;
}

}  // namespace ftz
