#pragma once

#include <string>

#include "ftz/field.hpp"

namespace ftz {

/// Declarative description of a test symbol. Every analytic kind is an
/// instance of
///
///     amplitude * |z|^{2m} * e^{-c|z|^2} * e^{2 pi i z.lambda}
///
/// with the unused parameters pinned (c = 0 for constant and plane_wave,
/// m = 0 except for radial_polynomial_gaussian, lambda = 0 unless modulated).
struct SymbolSpec {
  enum class Kind { constant, gaussian, modulated_gaussian, plane_wave, radial_polynomial_gaussian, grid_file };

  Kind kind = Kind::constant;
  cplx amplitude = 1.0;
  double decay = 0.0;
  Vec2 frequency = Vec2::Zero();
  int power = 0;
  std::string path;

  static SymbolSpec constant(cplx value = 1.0);
  static SymbolSpec gaussian(double c);
  static SymbolSpec modulated_gaussian(const Vec2& lambda, double c);
  static SymbolSpec plane_wave(const Vec2& x);
  static SymbolSpec radial_polynomial_gaussian(int m, double c);
  static SymbolSpec grid_file(std::string path);

  SymbolSpec scaled(cplx factor) const;
  bool analytic() const { return kind != Kind::grid_file; }
  /// True when every value is real and >= 0 (for positive amplitudes).
  bool nonnegative() const;
  std::string describe() const;
};

const char* kind_name(SymbolSpec::Kind kind);
SymbolSpec::Kind parse_kind(const std::string& name);

/// Throws for invalid parameters (c <= 0 where a Gaussian is present,
/// negative power, non-finite values).
void validate(const SymbolSpec& spec);

cplx evaluate(const SymbolSpec& spec, cplx z);

/// Space-domain samples of spec on grid; grid_file specs are read with
/// ingest_symbol_csv.
ScalarField sample_symbol(const SymbolSpec& spec, const Grid& grid);

}  // namespace ftz
