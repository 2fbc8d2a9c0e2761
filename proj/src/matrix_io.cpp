#include "corpca/matrix_io.hpp"

#include <charconv>
#include <cmath>
#include <fstream>
#include <istream>
#include <ostream>
#include <sstream>
#include <system_error>

namespace corpca {

std::string format_double(double v) {
  char buf[64];
  const auto res = std::to_chars(buf, buf + sizeof(buf), v, std::chars_format::general, 17);
  return std::string(buf, res.ptr);
}

void write_matrix(std::ostream& out, const RealMatrix& m) {
  require_finite(m, "matrix");
  out << m.rows() << ' ' << m.cols() << '\n';
  for (Index i = 0; i < m.rows(); ++i) {
    for (Index j = 0; j < m.cols(); ++j) {
      if (j) out << ' ';
      out << format_double(m(i, j));
    }
    out << '\n';
  }
}

namespace {

double parse_double(const std::string& token, Index row) {
  double v = 0.0;
  const char* first = token.data();
  const char* last = first + token.size();
  if (!token.empty() && *first == '+') ++first;
  const auto res = std::from_chars(first, last, v);
  if (res.ec != std::errc() || res.ptr != last || !std::isfinite(v)) {
    throw ParseError("matrix file: bad number '" + token + "' on data row " + std::to_string(row + 1));
  }
  return v;
}

}  // namespace

RealMatrix read_matrix(std::istream& in) {
  std::string line;
  if (!std::getline(in, line)) throw ParseError("matrix file: missing header line");
  std::istringstream header(line);
  long long rows = 0, cols = 0;
  std::string extra;
  if (!(header >> rows >> cols) || (header >> extra)) {
    throw ParseError("matrix file: header must be 'rows cols', got '" + line + "'");
  }
  if (rows < 1 || cols < 1) throw ParseError("matrix file: dimensions must be positive");

  RealMatrix m(rows, cols);
  for (Index i = 0; i < rows; ++i) {
    if (!std::getline(in, line)) {
      throw ParseError("matrix file: expected " + std::to_string(rows) + " rows, found " +
                       std::to_string(i));
    }
    std::istringstream row(line);
    std::string token;
    Index j = 0;
    while (row >> token) {
      if (j >= cols) throw ParseError("matrix file: too many entries on data row " + std::to_string(i + 1));
      m(i, j++) = parse_double(token, i);
    }
    if (j != cols) throw ParseError("matrix file: too few entries on data row " + std::to_string(i + 1));
  }
  require_finite(m, "matrix file");
  return m;
}

void save_matrix(const std::filesystem::path& path, const RealMatrix& m) {
  std::ofstream out(path);
  if (!out) throw IoError("cannot open '" + path.string() + "' for writing");
  write_matrix(out, m);
  if (!out) throw IoError("write failed for '" + path.string() + "'");
}

RealMatrix load_matrix(const std::filesystem::path& path) {
  std::ifstream in(path);
  if (!in) throw IoError("cannot open '" + path.string() + "'");
  try {
    return read_matrix(in);
  } catch (const ParseError& e) {
    throw ParseError(path.string() + ": " + e.what());
  }
}

}  // namespace corpca
