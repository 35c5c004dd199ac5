#pragma once

#include <stdexcept>
#include <string>

#include "ftz/field.hpp"
#include "ftz/fock.hpp"

namespace ftz {

/// File-level failure: missing, unreadable, truncated or malformed input.
class IoError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

/// Matrix cache layout: "FTLZ1", then little-endian u32 N, f64 alpha, and
/// N*N (re, im) f64 pairs in row-major order.
inline constexpr char kMatrixMagic[5] = {'F', 'T', 'L', 'Z', '1'};

void save_matrix(const OperatorMatrix& a, const std::string& path);
OperatorMatrix load_matrix(const std::string& path);
/// Also rejects a cache whose dimension differs from expected_dimension.
OperatorMatrix load_matrix(const std::string& path, int expected_dimension);

/// Text symbol format: a header line "# extent=<L> points=<M>" followed by
/// M*M lines "re,im" in row-major node order (i along Re z, j along Im z).
ScalarField ingest_symbol_csv(const std::string& path, const Grid& grid);
void export_symbol_csv(const ScalarField& f, const std::string& path);

}  // namespace ftz
