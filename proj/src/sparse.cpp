#include "swe_carleman/sparse.hpp"

#include <stdexcept>

namespace swe {

std::int64_t ipow(std::int64_t base, int exp) {
  if (exp < 0) throw std::invalid_argument("ipow: negative exponent");
  std::int64_t r = 1;
  for (int i = 0; i < exp; ++i) r *= base;
  return r;
}

SparseMatrix sparse_identity(Eigen::Index n) {
  SparseMatrix id(n, n);
  id.setIdentity();
  return id;
}

SparseMatrix kron(const SparseMatrix& a, const SparseMatrix& b) {
  std::vector<Triplet> t;
  t.reserve(static_cast<std::size_t>(a.nonZeros()) * static_cast<std::size_t>(b.nonZeros()));
  for (Eigen::Index i = 0; i < a.outerSize(); ++i)
    for (SparseMatrix::InnerIterator ia(a, i); ia; ++ia)
      for (Eigen::Index k = 0; k < b.outerSize(); ++k)
        for (SparseMatrix::InnerIterator ib(b, k); ib; ++ib)
          t.emplace_back(static_cast<int>(ia.row() * b.rows() + ib.row()),
                         static_cast<int>(ia.col() * b.cols() + ib.col()),
                         ia.value() * ib.value());
  return from_triplets(a.rows() * b.rows(), a.cols() * b.cols(), t);
}

void append_block(std::vector<Triplet>& out, const SparseMatrix& block, Eigen::Index row0,
                  Eigen::Index col0, double scale) {
  for (Eigen::Index i = 0; i < block.outerSize(); ++i)
    for (SparseMatrix::InnerIterator it(block, i); it; ++it)
      out.emplace_back(static_cast<int>(row0 + it.row()), static_cast<int>(col0 + it.col()),
                       scale * it.value());
}

SparseMatrix from_triplets(Eigen::Index rows, Eigen::Index cols, std::vector<Triplet>& t) {
  SparseMatrix m(rows, cols);
  m.setFromTriplets(t.begin(), t.end());
  m.prune(0.0);
  m.makeCompressed();
  return m;
}

Eigen::VectorXd kron_power(const Eigen::VectorXd& v, int times) {
  if (times < 1) throw std::invalid_argument("kron_power: times >= 1 required");
  Eigen::VectorXd out = v;
  for (int k = 1; k < times; ++k) {
    Eigen::VectorXd next(out.size() * v.size());
    for (Eigen::Index i = 0; i < out.size(); ++i)
      next.segment(i * v.size(), v.size()) = out[i] * v;
    out = std::move(next);
  }
  return out;
}

}  // namespace swe
