#pragma once

#include <functional>
#include <vector>

#include <Eigen/Dense>

#include "ftz/field.hpp"
#include "ftz/quadrature.hpp"
#include "ftz/symbol.hpp"

namespace ftz {

/// Weight alpha and truncation dimension N; basis e_m(z) = sqrt(alpha^m/m!) z^m.
class FockBasis {
 public:
  FockBasis(double alpha, int dimension);

  double alpha() const { return alpha_; }
  int dimension() const { return dimension_; }
  bool operator==(const FockBasis& other) const = default;

  /// Largest |z|^2 accepted by kernel-based operations: 0.5 * N / alpha.
  double kernel_radius_sq() const { return 0.5 * dimension_ / alpha_; }

 private:
  double alpha_;
  int dimension_;
};

/// Entry (j, k) = <A e_k, e_j>.
class OperatorMatrix {
 public:
  OperatorMatrix(FockBasis basis, Eigen::MatrixXcd entries);

  static OperatorMatrix identity(const FockBasis& basis);
  static OperatorMatrix zero(const FockBasis& basis);

  const FockBasis& basis() const { return basis_; }
  const Eigen::MatrixXcd& entries() const { return entries_; }
  int dimension() const { return basis_.dimension(); }
  cplx operator()(int j, int k) const { return entries_(j, k); }

  /// Leading n x n block as a matrix on the smaller basis.
  OperatorMatrix leading_block(int n) const;

  OperatorMatrix& operator+=(const OperatorMatrix& other);
  OperatorMatrix& operator-=(const OperatorMatrix& other);
  OperatorMatrix& operator*=(cplx c);

 private:
  void require_same_basis(const OperatorMatrix& other) const;

  FockBasis basis_;
  Eigen::MatrixXcd entries_;
};

OperatorMatrix operator+(OperatorMatrix a, const OperatorMatrix& b);
OperatorMatrix operator-(OperatorMatrix a, const OperatorMatrix& b);
OperatorMatrix operator*(cplx c, OperatorMatrix a);
OperatorMatrix operator*(const OperatorMatrix& a, const OperatorMatrix& b);
OperatorMatrix adjoint(const OperatorMatrix& a);

/// Coefficients of k_z in {e_m}: e^{-alpha|z|^2/2} sqrt(alpha^m/m!) conj(z)^m.
Eigen::VectorXcd kernel_coefficients(cplx z, const FockBasis& basis);

/// Analytic built-ins use exact Gaussian moments; grid_file specs are
/// rejected (sample them and use the field overload).
OperatorMatrix toeplitz_matrix(const SymbolSpec& g, const FockBasis& basis,
                               const QuadratureSpec& quad = {});

/// Symbol tau_shift g where g is a sampled field, evaluated at the quadrature
/// nodes through its trigonometric interpolant (or read directly when the
/// quadrature runs on the field's own grid and the shift is zero).
OperatorMatrix toeplitz_matrix(const ScalarField& g, const FockBasis& basis,
                               const QuadratureSpec& quad = {}, const Vec2& shift = Vec2::Zero());

/// sum_i weights[i] T_{tau_{shifts[i]} g}. Assembly is linear in the symbol,
/// so the node values are accumulated first and assembled once.
OperatorMatrix translated_toeplitz_sum(const ScalarField& g, const FockBasis& basis, const QuadratureSpec& quad,
                                       const std::vector<Vec2>& shifts, const std::vector<cplx>& weights);

/// Plain quadrature of an arbitrary pointwise symbol.
OperatorMatrix toeplitz_matrix(const std::function<cplx(cplx)>& g, const FockBasis& basis,
                               const QuadratureSpec& quad = {});

/// Truncated W_z = exp(sqrt(alpha)(conj(z) A^+ - z A)). Requires
/// alpha|z|^2 <= N/4 and checks that column 0 reproduces k_z.
OperatorMatrix displacement_matrix(cplx z, const FockBasis& basis);

double operator_norm(const OperatorMatrix& a);
Eigen::VectorXd singular_values(const OperatorMatrix& a);
double schatten_norm(const OperatorMatrix& a, double p);

/// c(w)^H A c(z) = <A k_z, k_w>.
cplx berezin(const OperatorMatrix& a, cplx z);
cplx berezin(const OperatorMatrix& a, cplx z, cplx w);

/// <g k_z, k_w> for an analytic symbol, in closed form.
cplx two_variable_berezin(const SymbolSpec& g, double alpha, cplx z, cplx w);
/// Same quantity by Gauss-Hermite quadrature centred between z and w.
cplx two_variable_berezin(const std::function<cplx(cplx)>& g, double alpha, cplx z, cplx w,
                          int order = 60);

}  // namespace ftz
