#include "swe_carleman/matrix_market.hpp"

#include "swe_carleman/format.hpp"

#include <algorithm>
#include <cctype>
#include <fstream>
#include <sstream>
#include <stdexcept>
#include <string>

namespace swe {

namespace {

struct Header {
  std::string format;    // coordinate | array
  std::string field;     // real | integer
  std::string symmetry;  // general | symmetric
};

std::string lower(std::string s) {
  std::transform(s.begin(), s.end(), s.begin(),
                 [](unsigned char ch) { return static_cast<char>(std::tolower(ch)); });
  return s;
}

Header read_header(std::istream& is) {
  std::string line;
  if (!std::getline(is, line)) throw std::runtime_error("matrix market: empty input");
  std::istringstream hs(line);
  std::string banner, object;
  Header h;
  hs >> banner >> object >> h.format >> h.field >> h.symmetry;
  if (banner != "%%MatrixMarket" || lower(object) != "matrix")
    throw std::runtime_error("matrix market: bad banner '" + line + "'");
  h.format = lower(h.format);
  h.field = lower(h.field);
  h.symmetry = lower(h.symmetry);
  if (h.field != "real" && h.field != "integer" && h.field != "double")
    throw std::runtime_error("matrix market: unsupported field '" + h.field + "'");
  if (h.symmetry != "general" && h.symmetry != "symmetric")
    throw std::runtime_error("matrix market: unsupported symmetry '" + h.symmetry + "'");
  return h;
}

std::istringstream next_data_line(std::istream& is) {
  std::string line;
  while (std::getline(is, line)) {
    if (line.empty() || line[0] == '%') continue;
    if (line.find_first_not_of(" \t\r") == std::string::npos) continue;
    return std::istringstream(line);
  }
  throw std::runtime_error("matrix market: unexpected end of input");
}

std::ifstream open(const std::filesystem::path& path) {
  std::ifstream is(path);
  if (!is) throw std::runtime_error("cannot open " + path.string());
  return is;
}

}  // namespace

void write_matrix_market(std::ostream& os, const SparseMatrix& m) {
  os << "%%MatrixMarket matrix coordinate real general\n";
  os << m.rows() << ' ' << m.cols() << ' ' << m.nonZeros() << '\n';
  for (Eigen::Index r = 0; r < m.outerSize(); ++r)
    for (SparseMatrix::InnerIterator it(m, r); it; ++it)
      os << it.row() + 1 << ' ' << it.col() + 1 << ' ' << fmt_double(it.value()) << '\n';
}

void write_matrix_market(std::ostream& os, const Eigen::VectorXd& v) {
  os << "%%MatrixMarket matrix array real general\n";
  os << v.size() << " 1\n";
  for (Eigen::Index i = 0; i < v.size(); ++i) os << fmt_double(v[i]) << '\n';
}

namespace {

SparseMatrix read_coordinate_body(std::istream& is, const Header& h) {
  auto size = next_data_line(is);
  long rows = 0, cols = 0, nnz = 0;
  if (!(size >> rows >> cols >> nnz)) throw std::runtime_error("matrix market: bad size line");
  std::vector<Triplet> t;
  t.reserve(static_cast<std::size_t>(nnz) * (h.symmetry == "symmetric" ? 2 : 1));
  for (long k = 0; k < nnz; ++k) {
    auto ls = next_data_line(is);
    long r = 0, c = 0;
    double v = 0.0;
    if (!(ls >> r >> c >> v)) throw std::runtime_error("matrix market: bad entry line");
    if (r < 1 || r > rows || c < 1 || c > cols)
      throw std::runtime_error("matrix market: entry index out of range");
    t.emplace_back(static_cast<int>(r - 1), static_cast<int>(c - 1), v);
    if (h.symmetry == "symmetric" && r != c)
      t.emplace_back(static_cast<int>(c - 1), static_cast<int>(r - 1), v);
  }
  SparseMatrix m(rows, cols);
  m.setFromTriplets(t.begin(), t.end());
  m.makeCompressed();
  return m;
}

}  // namespace

SparseMatrix read_matrix_market(std::istream& is) {
  const Header h = read_header(is);
  if (h.format != "coordinate") throw std::runtime_error("matrix market: expected coordinate format");
  return read_coordinate_body(is, h);
}

Eigen::VectorXd read_matrix_market_vector(std::istream& is) {
  const Header h = read_header(is);
  if (h.format == "coordinate") {
    SparseMatrix m = read_coordinate_body(is, h);
    if (m.cols() != 1) throw std::runtime_error("matrix market: expected a column vector");
    return Eigen::MatrixXd(m).col(0);
  }
  auto size = next_data_line(is);
  long rows = 0, cols = 0;
  if (!(size >> rows >> cols) || cols != 1)
    throw std::runtime_error("matrix market: expected an n x 1 array");
  Eigen::VectorXd v(rows);
  for (long i = 0; i < rows; ++i) {
    auto ls = next_data_line(is);
    if (!(ls >> v[i])) throw std::runtime_error("matrix market: bad array entry");
  }
  return v;
}

SparseMatrix read_matrix_market(const std::filesystem::path& path) {
  auto is = open(path);
  return read_matrix_market(is);
}

Eigen::VectorXd read_matrix_market_vector(const std::filesystem::path& path) {
  auto is = open(path);
  return read_matrix_market_vector(is);
}

}  // namespace swe
