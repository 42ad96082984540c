#include "mpsylv/mmio.hpp"

#include <algorithm>
#include <cctype>
#include <cstdio>
#include <cstdlib>
#include <fstream>
#include <sstream>
#include <vector>

namespace mpsylv {

namespace {

std::string lower(std::string s) {
  std::transform(s.begin(), s.end(), s.begin(),
                 [](unsigned char c) { return static_cast<char>(std::tolower(c)); });
  return s;
}

bool next_data_line(std::istream& in, std::string& line) {
  while (std::getline(in, line)) {
    const auto first = line.find_first_not_of(" \t\r");
    if (first == std::string::npos || line[first] == '%') continue;
    return true;
  }
  return false;
}

double parse_number(const std::string& tok) {
  char* end = nullptr;
  const double v = std::strtod(tok.c_str(), &end);
  if (end == tok.c_str() || *end != '\0') throw MatrixMarketError("bad number: " + tok);
  return v;
}

std::vector<std::string> tokens(const std::string& line) {
  std::istringstream ss(line);
  std::vector<std::string> out;
  std::string t;
  while (ss >> t) out.push_back(t);
  return out;
}

}  // namespace

Matrix read_matrix_market(std::istream& in) {
  std::string header;
  if (!std::getline(in, header)) throw MatrixMarketError("empty input");
  const auto head = tokens(lower(header));
  if (head.size() != 5 || head[0] != "%%matrixmarket" || head[1] != "matrix") {
    throw MatrixMarketError("missing %%MatrixMarket matrix header");
  }
  const std::string& layout = head[2];
  const std::string& field = head[3];
  const std::string& symmetry = head[4];
  if (layout != "array" && layout != "coordinate") throw MatrixMarketError("unknown layout " + layout);
  if (field != "real" && field != "integer" && field != "complex" && field != "double") {
    throw MatrixMarketError("unsupported field " + field);
  }
  if (symmetry != "general" && symmetry != "symmetric" && symmetry != "skew-symmetric" &&
      symmetry != "hermitian") {
    throw MatrixMarketError("unsupported symmetry " + symmetry);
  }
  const bool is_complex = field == "complex";
  const std::size_t values_per_entry = is_complex ? 2 : 1;

  std::string line;
  if (!next_data_line(in, line)) throw MatrixMarketError("missing size line");
  const auto size = tokens(line);
  if (size.size() < 2) throw MatrixMarketError("bad size line");
  const auto rows = static_cast<std::size_t>(std::stoull(size[0]));
  const auto cols = static_cast<std::size_t>(std::stoull(size[1]));
  Matrix M(rows, cols);

  auto store = [&](std::size_t i, std::size_t j, Complex v) {
    if (i >= rows || j >= cols) throw MatrixMarketError("entry index out of range");
    M(i, j) = v;
    if (i == j) return;
    if (symmetry == "symmetric") M(j, i) = v;
    if (symmetry == "skew-symmetric") M(j, i) = -v;
    if (symmetry == "hermitian") M(j, i) = std::conj(v);
  };
  auto value = [&](const std::vector<std::string>& t, std::size_t at) {
    if (t.size() < at + values_per_entry) throw MatrixMarketError("short entry line");
    return is_complex ? Complex(parse_number(t[at]), parse_number(t[at + 1]))
                      : Complex(parse_number(t[at]), 0.0);
  };

  if (layout == "coordinate") {
    if (size.size() < 3) throw MatrixMarketError("coordinate size line needs nnz");
    const auto nnz = static_cast<std::size_t>(std::stoull(size[2]));
    for (std::size_t e = 0; e < nnz; ++e) {
      if (!next_data_line(in, line)) throw MatrixMarketError("truncated coordinate data");
      const auto t = tokens(line);
      if (t.size() < 2) throw MatrixMarketError("bad coordinate entry");
      const auto i = static_cast<std::size_t>(std::stoull(t[0]));
      const auto j = static_cast<std::size_t>(std::stoull(t[1]));
      if (i == 0 || j == 0) throw MatrixMarketError("indices are 1-based");
      store(i - 1, j - 1, value(t, 2));
    }
  } else {
    // column-major; symmetric variants list the lower triangle only
    const bool general = symmetry == "general";
    for (std::size_t j = 0; j < cols; ++j) {
      const std::size_t i0 = general ? 0 : (symmetry == "skew-symmetric" ? j + 1 : j);
      for (std::size_t i = i0; i < rows; ++i) {
        if (!next_data_line(in, line)) throw MatrixMarketError("truncated array data");
        store(i, j, value(tokens(line), 0));
      }
    }
  }
  return M;
}

Matrix read_matrix_market_file(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw MatrixMarketError("cannot open " + path);
  return read_matrix_market(in);
}

void write_matrix_market(std::ostream& out, const Matrix& M) {
  out << "%%MatrixMarket matrix array complex general\n";
  out << M.rows() << ' ' << M.cols() << '\n';
  char buf[96];
  for (std::size_t j = 0; j < M.cols(); ++j) {
    for (std::size_t i = 0; i < M.rows(); ++i) {
      std::snprintf(buf, sizeof buf, "%a %a\n", M(i, j).real(), M(i, j).imag());
      out << buf;
    }
  }
}

void write_matrix_market_file(const std::string& path, const Matrix& M) {
  std::ofstream out(path);
  if (!out) throw MatrixMarketError("cannot write " + path);
  write_matrix_market(out, M);
}

}  // namespace mpsylv
