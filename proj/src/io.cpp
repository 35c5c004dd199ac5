#include "ftz/io.hpp"

#include <bit>
#include <cmath>
#include <cstdint>
#include <cstdio>
#include <cstring>
#include <fstream>
#include <iterator>
#include <sstream>
#include <vector>

namespace ftz {

namespace {

static_assert(std::endian::native == std::endian::little, "matrix cache assumes a little-endian host");

template <class T>
void put(std::vector<char>& buf, T v) {
  const char* p = reinterpret_cast<const char*>(&v);
  buf.insert(buf.end(), p, p + sizeof(T));
}

template <class T>
T get(const std::vector<char>& buf, std::size_t& pos) {
  T v;
  std::memcpy(&v, buf.data() + pos, sizeof(T));
  pos += sizeof(T);
  return v;
}

std::string trim(std::string s) {
  const auto b = s.find_first_not_of(" \t\r");
  const auto e = s.find_last_not_of(" \t\r");
  return b == std::string::npos ? std::string() : s.substr(b, e - b + 1);
}

double parse_double(const std::string& text, const std::string& path, long line) {
  const std::string t = trim(text);
  std::size_t used = 0;
  double v = 0.0;
  try {
    v = std::stod(t, &used);
  } catch (const std::exception&) {
    used = 0;
  }
  if (t.empty() || used != t.size())
    throw IoError(path + ":" + std::to_string(line) + ": unparsable value '" + t + "'");
  if (!std::isfinite(v)) throw IoError(path + ":" + std::to_string(line) + ": non-finite value");
  return v;
}

}  // namespace

void save_matrix(const OperatorMatrix& a, const std::string& path) {
  const auto n = static_cast<std::uint32_t>(a.dimension());
  std::vector<char> buf(kMatrixMagic, kMatrixMagic + 5);
  put(buf, n);
  put(buf, a.basis().alpha());
  for (std::uint32_t j = 0; j < n; ++j) {
    for (std::uint32_t k = 0; k < n; ++k) {
      put(buf, a(j, k).real());
      put(buf, a(j, k).imag());
    }
  }
  std::ofstream out(path, std::ios::binary | std::ios::trunc);
  if (!out) throw IoError("cannot open '" + path + "' for writing");
  out.write(buf.data(), static_cast<std::streamsize>(buf.size()));
  if (!out) throw IoError("write to '" + path + "' failed");
}

OperatorMatrix load_matrix(const std::string& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw IoError("cannot open '" + path + "'");
  const std::vector<char> buf((std::istreambuf_iterator<char>(in)), std::istreambuf_iterator<char>());
  if (buf.size() < 17 || std::memcmp(buf.data(), kMatrixMagic, 5) != 0)
    throw IoError("'" + path + "' is not a matrix cache (bad magic or header)");
  std::size_t pos = 5;
  const auto n = get<std::uint32_t>(buf, pos);
  const double alpha = get<double>(buf, pos);
  const std::size_t expected = 17 + 16 * std::size_t(n) * n;
  if (buf.size() != expected)
    throw IoError("'" + path + "' has " + std::to_string(buf.size()) + " bytes, expected " +
                  std::to_string(expected));
  if (n == 0 || !(alpha > 0.0)) throw IoError("'" + path + "' has an invalid header");
  Eigen::MatrixXcd m(n, n);
  for (std::uint32_t j = 0; j < n; ++j) {
    for (std::uint32_t k = 0; k < n; ++k) {
      const double re = get<double>(buf, pos);
      const double im = get<double>(buf, pos);
      m(j, k) = cplx(re, im);
    }
  }
  if (!m.allFinite()) throw IoError("'" + path + "' contains non-finite entries");
  return OperatorMatrix(FockBasis(alpha, static_cast<int>(n)), std::move(m));
}

OperatorMatrix load_matrix(const std::string& path, int expected_dimension) {
  OperatorMatrix a = load_matrix(path);
  if (a.dimension() != expected_dimension)
    throw IoError("'" + path + "' holds N=" + std::to_string(a.dimension()) + ", expected N=" +
                  std::to_string(expected_dimension));
  return a;
}

ScalarField ingest_symbol_csv(const std::string& path, const Grid& grid) {
  std::ifstream in(path);
  if (!in) throw IoError("cannot open symbol file '" + path + "'");
  std::string line;
  if (!std::getline(in, line)) throw IoError("'" + path + "' is empty");
  double extent = 0.0;
  int points = 0;
  char tail = 0;
  if (std::sscanf(line.c_str(), "# extent=%lf points=%d %c", &extent, &points, &tail) != 2)
    throw IoError("'" + path + "': header must read '# extent=<L> points=<M>'");
  if (points != grid.points() || extent != grid.extent())
    throw IoError("'" + path + "': header grid does not match the configured grid");

  const int m = grid.points();
  Eigen::MatrixXcd s(m, m);
  long count = 0;
  long lineno = 1;
  while (std::getline(in, line)) {
    ++lineno;
    if (trim(line).empty()) continue;
    if (count >= long(m) * m) throw IoError("'" + path + "': more than M^2 data lines");
    const auto comma = line.find(',');
    if (comma == std::string::npos) throw IoError(path + ":" + std::to_string(lineno) + ": expected 're,im'");
    const double re = parse_double(line.substr(0, comma), path, lineno);
    const double im = parse_double(line.substr(comma + 1), path, lineno);
    // row-major: i (Re axis) is the slow index
    s(count / m, count % m) = cplx(re, im);
    ++count;
  }
  if (count != long(m) * m)
    throw IoError("'" + path + "': expected " + std::to_string(long(m) * m) + " data lines, found " +
                  std::to_string(count));
  return ScalarField(grid, Domain::space, std::move(s));
}

void export_symbol_csv(const ScalarField& f, const std::string& path) {
  if (f.domain() != Domain::space) throw std::invalid_argument("only space-domain fields can be exported");
  std::FILE* out = std::fopen(path.c_str(), "w");
  if (!out) throw IoError("cannot open '" + path + "' for writing");
  std::fprintf(out, "# extent=%.17g points=%d\n", f.grid().extent(), f.grid().points());
  const int m = f.grid().points();
  for (int i = 0; i < m; ++i)
    for (int j = 0; j < m; ++j) std::fprintf(out, "%.17g,%.17g\n", f(i, j).real(), f(i, j).imag());
  if (std::fclose(out) != 0) throw IoError("write to '" + path + "' failed");
}

}  // namespace ftz
