#pragma once

#include <array>
#include <string>
#include <utility>
#include <vector>

#include "ftz/field.hpp"
#include "ftz/fock.hpp"
#include "ftz/symbol.hpp"

namespace ftz {

/// The ten (a, b) with a + b <= 3.
const std::array<std::pair<int, int>, 10>& derivative_pairs();

/// J^{a,b} g = d^a_{Re} d^b_{Im} H_{1/(2 alpha)} g.
ScalarField jet(const ScalarField& g, int a, int b, double alpha);

struct BoundValue {
  double value = 0.0;
  bool divergent = false;
};

struct BoundReport {
  std::string name;
  std::string symbol;
  double alpha = 1.0;
  double p = 0.0;  // 0 where no Schatten index applies
  double bound = 0.0;
  double measured = 0.0;
  double ratio = 0.0;  // measured / bound
  bool divergent = false;
  std::vector<std::pair<std::string, double>> extras;
};

struct CarlesonMode {
  enum class Kind { ball, heat } kind = Kind::heat;
  double radius = 1.0;
  double alpha = 1.0;

  static CarlesonMode ball(double r) { return {Kind::ball, r, 1.0}; }
  static CarlesonMode heat(double alpha) { return {Kind::heat, 1.0, alpha}; }
};

/// ball: max over grid centres of the Riemann sum of f over B(x, r);
/// heat: sup |H_{2/alpha} f|. f must be real and nonnegative.
double carleson(const ScalarField& f, const CarlesonMode& mode);

/// Geometric mean of sup_z int |g~(z,w)| dw (times alpha/pi) and
/// sup_w int |g~(z,w)| dz. Both integrals run over the lattice of the given
/// step in |.|_inf <= sample_extent; the sups run over the inner half
/// |.|_inf <= sample_extent / 2, and a sup attained only on the inner
/// boundary is an error. Analytic symbols use the closed form; grid_file
/// symbols are sampled on quad's grid and integrated by Gauss-Hermite.
double schur_bound(const SymbolSpec& g, double alpha, double sample_extent, double sample_step,
                   const QuadratureSpec& quad = {});

/// sum over derivative_pairs of sup |H_{2/alpha} |J^{a,b} g||.
double main_bound(const SymbolSpec& g, double alpha, const Grid& grid);
double main_bound(const ScalarField& g, double alpha);

/// (sum sup H_{2/alpha}|J g|, sum sup |J g|, sup |H_t g|) with consecutive ratios.
BoundReport bound_chain_report(const SymbolSpec& g, double alpha, double t, const Grid& grid);

enum class SchattenVariant { plain, derivative };

/// plain: ||g||_{L^p}; derivative: sum ||J^{a,b} g||_{L^p}. Flags divergence
/// when an integrand keeps more than 1% of its mass near the grid boundary.
BoundValue schatten_symbol_bound(const SymbolSpec& g, double p, const Grid& grid, SchattenVariant variant,
                                 double alpha = 1.0);

/// Riemann sum of int_w ( int_z |<A k_z, k_{z+w}>|^p dz )^{1/p} dw over the
/// discs |w| <= w_extent, |z| <= z_extent. Divergent when the outermost shell
/// of either integral carries more than 1% of it.
BoundValue kernel_schatten_bound(const OperatorMatrix& a, double p, double w_extent, double w_step,
                                 double z_extent, double z_step);

/// sum over pairs of sup_w ( iint |J f|^p |J g|^p e^{-alpha|xi - eta + w|^2/2} )^{1/p},
/// each double integral formed by two grid convolutions. w samples must be
/// grid nodes.
BoundValue product_schatten_bound(const SymbolSpec& f, const SymbolSpec& g, double p, double alpha,
                                  const Grid& grid, const std::vector<Vec2>& w_samples);

}  // namespace ftz
