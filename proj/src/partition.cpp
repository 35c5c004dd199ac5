#include "ftz/partition.hpp"

#include <cmath>
#include <numbers>
#include <stdexcept>

namespace ftz {

namespace {

double glue(double u) { return u > 0.0 ? std::exp(-1.0 / u) : 0.0; }

double axis_bump(double t) { return smooth_step(2.0 * (1.0 - std::abs(t))); }

}  // namespace

double smooth_step(double u) {
  if (u <= 0.0) return 0.0;
  if (u >= 1.0) return 1.0;
  const double a = glue(u), b = glue(1.0 - u);
  return a / (a + b);
}

double bump(const Vec2& xi) { return axis_bump(xi.x()) * axis_bump(xi.y()); }

double partition_denominator(const Vec2& xi) {
  const long c1 = std::lround(xi.x()), c2 = std::lround(xi.y());
  double sum = 0.0;
  for (long d2 = -1; d2 <= 1; ++d2)
    for (long d1 = -1; d1 <= 1; ++d1) sum += bump(xi - Vec2(double(c1 + d1), double(c2 + d2)));
  return sum;
}

double partition_value(const LatticeIndex& x, const Vec2& xi) {
  const double top = bump(xi - x.cast<double>());
  if (top == 0.0) return 0.0;
  return top / partition_denominator(xi);
}

bool PartitionWindow::in_support(const Vec2& xi) const {
  const Vec2 d = xi - index.cast<double>();
  return d.x() > -1.0 && d.x() <= 1.0 && d.y() > -1.0 && d.y() <= 1.0;
}

void require_window_fits(const LatticeIndex& x, const Grid& grid) {
  const double lo = grid.frequency(0), hi = grid.frequency(grid.points() - 1);
  const int top = std::max(std::abs(x.x()), std::abs(x.y()));
  if (top + 1 > hi || -(top + 1) < lo)
    throw std::invalid_argument("grid frequency range does not contain the window support");
}

PartitionWindow window(const LatticeIndex& x, const Grid& grid) {
  require_window_fits(x, grid);
  ScalarField f = ScalarField::from_function(
      grid, [&](double u, double v) { return cplx(partition_value(x, Vec2(u, v))); }, Domain::frequency);
  return {x, std::move(f)};
}

ScalarField frequency_multiplier(const LatticeIndex& x, double s, const Grid& grid) {
  if (!(s > 0.0)) throw std::invalid_argument("frequency_multiplier requires s > 0");
  const PartitionWindow w = window(x, grid);
  const double pi2 = std::numbers::pi * std::numbers::pi;
  return ScalarField::from_function(
      grid,
      [&](double u, double v) -> cplx {
        const Vec2 xi(u, v);
        if (!w.in_support(xi)) return 0.0;
        const double psi = partition_value(x, xi);
        return psi == 0.0 ? 0.0 : psi * std::exp(pi2 * s * xi.squaredNorm());
      },
      Domain::frequency);
}

ScalarField symbol_piece(const ScalarField& g, const LatticeIndex& x, double alpha) {
  if (!(alpha > 0.0)) throw std::invalid_argument("alpha must be positive");
  if (g.domain() != Domain::space) throw std::invalid_argument("symbol_piece expects a space-domain symbol");
  const PartitionWindow w = window(x, g.grid());
  // F[F^{-1}(g) psi_x] = inverse(forward(g) * psi_x(-.))
  return fourier(fourier(g, Direction::forward) * reflect(w.field), Direction::inverse);
}

}  // namespace ftz
