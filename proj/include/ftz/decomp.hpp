#pragma once

#include <stdexcept>
#include <vector>

#include "ftz/field.hpp"
#include "ftz/fock.hpp"
#include "ftz/partition.hpp"
#include "ftz/symbol.hpp"

namespace ftz {

struct PieceRecord {
  LatticeIndex index;
  double sup = 0.0;          // sup |g_x|
  double norm = 0.0;         // measured ||T_{g_x}||
  double tail_weight = 0.0;  // piece_tail_estimate(x)
};

struct DecompositionReport {
  double alpha = 1.0;
  int dimension = 0;
  int radius = 0;
  std::vector<PieceRecord> pieces;   // ordered by |x|_inf, then lexicographically
  std::vector<OperatorMatrix> matrices;
  std::vector<ScalarField> fields;
  std::vector<double> residuals;     // ||T_g - sum_{|x|_inf <= r} T_{g_x}||, r = 0..R
  double field_residual = 0.0;       // sup |g - sum g_x|
  bool monotone = true;              // non-increasing up to 1e-12 ||T_g||
};

/// Lattice indices with |x|_inf <= R in report order.
std::vector<LatticeIndex> ordered_indices(int radius);

DecompositionReport decompose(const SymbolSpec& g, double alpha, int radius, const FockBasis& basis,
                              const Grid& grid);

/// main_bound(g) / (1 + |x1| + |x2|)^3.
double piece_tail_estimate(const SymbolSpec& g, const LatticeIndex& x, double alpha, const Grid& grid);

struct DecayError : std::runtime_error {
  using std::runtime_error::runtime_error;
};

/// Fraction of sum |F(psi_x a^{-1}_{1/(2 alpha) + t})| over the grid lying
/// outside |y|_inf <= radius.
double representation_tail_mass(const LatticeIndex& x, double t, double alpha, const Grid& grid, double radius);

struct RepresentationOptions {
  /// Return the truncated quadrature even when the kernel's mass outside the
  /// box exceeds 1e-6, instead of throwing DecayError.
  bool allow_slow_decay = false;
};

/// Trapezoidal sum over the lattice step*Z^2 within |y|_inf <= radius of
/// F(psi_x a^{-1})(y) T_{tau_y H g}, heat time 1/(2 alpha) + t.
OperatorMatrix integral_representation(const SymbolSpec& g, const LatticeIndex& x, double t, double alpha,
                                       const FockBasis& basis, const Grid& grid, double quad_radius,
                                       double quad_step, const RepresentationOptions& opts = {});

/// The symbol whose Toeplitz operator is W_u T_{g_x} W_u, u = -i pi x / (2 alpha),
/// built spectrally.
ScalarField conjugated_symbol(const ScalarField& g, const LatticeIndex& x, double alpha);

/// Operator norm of W_u T_{g_x} W_u - T_{conjugated_symbol} on the leading N/2 block.
double weyl_conjugation_residual(const SymbolSpec& g, const LatticeIndex& x, double alpha, const FockBasis& basis,
                                 const Grid& grid);

/// max over z in the sample set of |H_{1/alpha} g(z) - sum_{|x|_inf <= R} H_{1/alpha} g_x(z)|.
double berezin_decomposition_residual(const SymbolSpec& g, double alpha, int radius, const Grid& grid,
                                      const std::vector<cplx>& zs);

/// {|z| <= radius} on the lattice step*Z^2.
std::vector<cplx> disc_samples(double radius, double step);

}  // namespace ftz
