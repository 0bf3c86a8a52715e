#pragma once

#include <Eigen/Dense>
#include <Eigen/Sparse>

#include <cstdint>
#include <vector>

namespace swe {

using SparseMatrix = Eigen::SparseMatrix<double, Eigen::RowMajor>;
using Triplet = Eigen::Triplet<double>;

std::int64_t ipow(std::int64_t base, int exp);

SparseMatrix sparse_identity(Eigen::Index n);
SparseMatrix kron(const SparseMatrix& a, const SparseMatrix& b);

/// Appends the nonzeros of `block` shifted by (row0, col0).
void append_block(std::vector<Triplet>& out, const SparseMatrix& block, Eigen::Index row0,
                  Eigen::Index col0, double scale = 1.0);

SparseMatrix from_triplets(Eigen::Index rows, Eigen::Index cols, std::vector<Triplet>& t);

/// Kronecker power v (x) v (x) ... (x) v, `times` factors.
Eigen::VectorXd kron_power(const Eigen::VectorXd& v, int times);

}  // namespace swe
