#pragma once

// Matrix Market coordinate/array I/O. Sparse matrices are written in
// row-major entry order with round-trip decimal values, so identical inputs
// produce byte-identical files.

#include "swe_carleman/sparse.hpp"

#include <filesystem>
#include <iosfwd>

namespace swe {

void write_matrix_market(std::ostream& os, const SparseMatrix& m);
void write_matrix_market(std::ostream& os, const Eigen::VectorXd& v);

SparseMatrix read_matrix_market(std::istream& is);
Eigen::VectorXd read_matrix_market_vector(std::istream& is);

SparseMatrix read_matrix_market(const std::filesystem::path& path);
Eigen::VectorXd read_matrix_market_vector(const std::filesystem::path& path);

}  // namespace swe
