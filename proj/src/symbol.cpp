#include "ftz/symbol.hpp"

#include <cmath>
#include <numbers>
#include <sstream>
#include <stdexcept>

#include "ftz/io.hpp"

namespace ftz {

SymbolSpec SymbolSpec::constant(cplx value) {
  SymbolSpec s;
  s.amplitude = value;
  return s;
}

SymbolSpec SymbolSpec::gaussian(double c) {
  SymbolSpec s;
  s.kind = Kind::gaussian;
  s.decay = c;
  validate(s);
  return s;
}

SymbolSpec SymbolSpec::modulated_gaussian(const Vec2& lambda, double c) {
  SymbolSpec s;
  s.kind = Kind::modulated_gaussian;
  s.decay = c;
  s.frequency = lambda;
  validate(s);
  return s;
}

SymbolSpec SymbolSpec::plane_wave(const Vec2& x) {
  SymbolSpec s;
  s.kind = Kind::plane_wave;
  s.frequency = x;
  validate(s);
  return s;
}

SymbolSpec SymbolSpec::radial_polynomial_gaussian(int m, double c) {
  SymbolSpec s;
  s.kind = Kind::radial_polynomial_gaussian;
  s.power = m;
  s.decay = c;
  validate(s);
  return s;
}

SymbolSpec SymbolSpec::grid_file(std::string path) {
  SymbolSpec s;
  s.kind = Kind::grid_file;
  s.path = std::move(path);
  return s;
}

SymbolSpec SymbolSpec::scaled(cplx factor) const {
  SymbolSpec s = *this;
  s.amplitude *= factor;
  return s;
}

bool SymbolSpec::nonnegative() const {
  const bool positive_amp = amplitude.imag() == 0.0 && amplitude.real() >= 0.0;
  switch (kind) {
    case Kind::constant:
    case Kind::gaussian:
    case Kind::radial_polynomial_gaussian:
      return positive_amp;
    case Kind::modulated_gaussian:
    case Kind::plane_wave:
      return positive_amp && frequency.isZero();
    case Kind::grid_file:
      return false;
  }
  return false;
}

const char* kind_name(SymbolSpec::Kind kind) {
  using K = SymbolSpec::Kind;
  switch (kind) {
    case K::constant: return "constant";
    case K::gaussian: return "gaussian";
    case K::modulated_gaussian: return "modulated_gaussian";
    case K::plane_wave: return "plane_wave";
    case K::radial_polynomial_gaussian: return "radial_polynomial_gaussian";
    case K::grid_file: return "grid_file";
  }
  return "?";
}

SymbolSpec::Kind parse_kind(const std::string& name) {
  using K = SymbolSpec::Kind;
  for (K k : {K::constant, K::gaussian, K::modulated_gaussian, K::plane_wave,
              K::radial_polynomial_gaussian, K::grid_file})
    if (name == kind_name(k)) return k;
  throw std::invalid_argument("unknown symbol kind '" + name + "'");
}

std::string SymbolSpec::describe() const {
  std::ostringstream os;
  os.precision(17);
  os << kind_name(kind);
  switch (kind) {
    case Kind::constant: break;
    case Kind::gaussian: os << "(c=" << decay << ")"; break;
    case Kind::modulated_gaussian:
      os << "(lambda=(" << frequency.x() << "," << frequency.y() << "),c=" << decay << ")";
      break;
    case Kind::plane_wave: os << "(x=(" << frequency.x() << "," << frequency.y() << "))"; break;
    case Kind::radial_polynomial_gaussian: os << "(m=" << power << ",c=" << decay << ")"; break;
    case Kind::grid_file: os << "(" << path << ")"; break;
  }
  if (amplitude != cplx(1.0)) os << "*(" << amplitude.real() << "," << amplitude.imag() << ")";
  return os.str();
}

void validate(const SymbolSpec& spec) {
  using K = SymbolSpec::Kind;
  if (!std::isfinite(spec.amplitude.real()) || !std::isfinite(spec.amplitude.imag()))
    throw std::invalid_argument("symbol amplitude must be finite");
  if (!spec.frequency.allFinite()) throw std::invalid_argument("symbol frequency must be finite");
  switch (spec.kind) {
    case K::gaussian:
    case K::modulated_gaussian:
    case K::radial_polynomial_gaussian:
      if (!(spec.decay > 0.0) || !std::isfinite(spec.decay))
        throw std::invalid_argument("gaussian decay rate c must be positive");
      if (spec.power < 0) throw std::invalid_argument("radial power must be non-negative");
      break;
    case K::constant:
    case K::plane_wave:
      if (spec.decay != 0.0 || spec.power != 0)
        throw std::invalid_argument("constant and plane_wave symbols take no decay or power");
      break;
    case K::grid_file:
      if (spec.path.empty()) throw std::invalid_argument("grid_file symbol needs a path");
      break;
  }
}

cplx evaluate(const SymbolSpec& spec, cplx z) {
  if (!spec.analytic()) throw std::invalid_argument("grid_file symbols are not analytic");
  const double r2 = std::norm(z);
  double mag = std::exp(-spec.decay * r2);
  if (spec.power > 0) mag *= std::pow(r2, spec.power);
  const double phase =
      2.0 * std::numbers::pi * (z.real() * spec.frequency.x() + z.imag() * spec.frequency.y());
  return spec.amplitude * std::polar(mag, phase);
}

ScalarField sample_symbol(const SymbolSpec& spec, const Grid& grid) {
  validate(spec);
  if (spec.kind == SymbolSpec::Kind::grid_file) {
    ScalarField f = ingest_symbol_csv(spec.path, grid);
    if (spec.amplitude != cplx(1.0)) f *= spec.amplitude;
    return f;
  }
  return ScalarField::from_function(grid,
                                    [&](double u, double v) { return evaluate(spec, cplx(u, v)); });
}

}  // namespace ftz
