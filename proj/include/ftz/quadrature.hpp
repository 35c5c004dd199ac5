#pragma once

#include <optional>

#include <Eigen/Dense>

#include "ftz/field.hpp"

namespace ftz {

/// Gauss-Hermite rule for the weight e^{-u^2} on the real line. Weights are
/// also kept as logarithms because the outer ones underflow quickly.
struct HermiteRule {
  Eigen::VectorXd nodes;
  Eigen::VectorXd weights;
  Eigen::VectorXd log_weights;
};

HermiteRule gauss_hermite(int order);

struct QuadratureSpec {
  enum class Scheme { gauss_hermite, grid };

  Scheme scheme = Scheme::gauss_hermite;
  int order = 0;  // 0: max(80, 2N + 10)
  std::optional<Grid> grid;

  static QuadratureSpec hermite(int order = 0) { return {Scheme::gauss_hermite, order, std::nullopt}; }
  static QuadratureSpec on_grid(const Grid& g) { return {Scheme::grid, 0, g}; }

  int resolved_order(int dimension) const;
};

/// 2D nodes z_n with log weights for integrals of the form
/// (alpha/pi) * integral F(z) e^{-alpha|z|^2} dv(z) ~= sum_n exp(log_w_n) F(z_n).
/// The Gaussian factor is folded into the weights.
struct PlaneRule {
  Eigen::VectorXd re;   // distinct Re z values (tensor axis)
  Eigen::VectorXd im;   // distinct Im z values
  Eigen::VectorXd log_w_re;
  Eigen::VectorXd log_w_im;
};

PlaneRule plane_rule(const QuadratureSpec& quad, double alpha, int dimension);

}  // namespace ftz
