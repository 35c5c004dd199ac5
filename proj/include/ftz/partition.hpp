#pragma once

#include <Eigen/Dense>

#include "ftz/field.hpp"

namespace ftz {

using LatticeIndex = Eigen::Vector2i;

/// 0 for u <= 0, 1 for u >= 1, C-infinity and monotone in between.
double smooth_step(double u);

/// Product bump: 1 on [-1/2, 1/2]^2, 0 outside (-1, 1)^2.
double bump(const Vec2& xi);

/// psi_x(xi) = bump(xi - x) / sum_y bump(xi - y), with the sum over the lattice
/// points whose bumps reach xi.
double partition_value(const LatticeIndex& x, const Vec2& xi);
/// sum_y bump(xi - y); lies in [1, 4].
double partition_denominator(const Vec2& xi);

struct PartitionWindow {
  LatticeIndex index;
  ScalarField field;  // frequency domain

  /// The square (x1 - 1, x1 + 1] x (x2 - 1, x2 + 1].
  bool in_support(const Vec2& xi) const;
};

PartitionWindow window(const LatticeIndex& x, const Grid& grid);

/// psi_x(xi) e^{pi^2 s |xi|^2} inside the support box, exactly 0 outside.
ScalarField frequency_multiplier(const LatticeIndex& x, double s, const Grid& grid);

/// g_x with inverse transform F^{-1}(H_{1/(2 alpha)} g) psi_x a_{1/(2 alpha)}^{-1}.
/// The heat factor and its inverse cancel, so the piece is formed as
/// F[F^{-1}(g) psi_x] and never multiplies by the growing exponential.
ScalarField symbol_piece(const ScalarField& g, const LatticeIndex& x, double alpha);

/// Throws unless the grid's frequency range contains the support box of x.
void require_window_fits(const LatticeIndex& x, const Grid& grid);

}  // namespace ftz
