#include "swe_carleman/carleman.hpp"

#include <algorithm>
#include <array>
#include <stdexcept>
#include <string>

namespace swe {

namespace {

using L = LatticeD1Q3;

// Averages a degree-m coefficient row over all permutations of its Kronecker
// slots, so F^(m) acts identically on every ordering of f_a f_b ...
Eigen::MatrixXd symmetrize(const Eigen::MatrixXd& F, int degree) {
  if (degree == 1) return F;
  Eigen::MatrixXd out = Eigen::MatrixXd::Zero(F.rows(), F.cols());
  std::vector<int> digits(static_cast<std::size_t>(degree));
  for (Eigen::Index col = 0; col < F.cols(); ++col) {
    Eigen::Index rem = col;
    for (int s = degree - 1; s >= 0; --s) {
      digits[static_cast<std::size_t>(s)] = static_cast<int>(rem % 3);
      rem /= 3;
    }
    std::vector<int> perm = digits;
    std::sort(perm.begin(), perm.end());
    int count = 0;
    Eigen::VectorXd acc = Eigen::VectorXd::Zero(F.rows());
    do {
      Eigen::Index idx = 0;
      for (int d : perm) idx = idx * 3 + d;
      acc += F.col(idx);
      ++count;
    } while (std::next_permutation(perm.begin(), perm.end()));
    out.col(col) = acc / count;
  }
  return out;
}

Eigen::RowVectorXd outer_row(const std::vector<Eigen::RowVector3d>& factors) {
  Eigen::VectorXd v = factors.front().transpose();
  for (std::size_t k = 1; k < factors.size(); ++k) {
    Eigen::VectorXd next(v.size() * 3);
    for (Eigen::Index i = 0; i < v.size(); ++i)
      next.segment<3>(i * 3) = v[i] * factors[k].transpose();
    v = std::move(next);
  }
  return v.transpose();
}

SparseMatrix to_sparse(const Eigen::MatrixXd& m) {
  SparseMatrix s = m.sparseView(0.0, 0.0);
  s.makeCompressed();
  return s;
}

void check_level_target(int level, int target) {
  if (level < 1 || level > kTruncationOrder || target < level || target > kTruncationOrder ||
      target > level + 2)
    throw std::out_of_range("transfer matrix index out of range: level " +
                            std::to_string(level) + ", target " + std::to_string(target));
}

}  // namespace

const Eigen::MatrixXd& FMatrixSet::degree(int m) const {
  switch (m) {
    case 1: return F1;
    case 2: return F2;
    case 3: return F3;
    default: throw std::out_of_range("F-matrix degree must be 1..3");
  }
}

Eigen::Vector3d FMatrixSet::apply(const Eigen::Vector3d& f) const {
  const Eigen::VectorXd fx = f;
  return F1 * fx + F2 * kron_power(fx, 2) + F3 * kron_power(fx, 3);
}

FMatrixSet build_F_matrices(const PhysParams& p) {
  if (!(p.tau > 0.0)) throw std::invalid_argument("build_F_matrices: tau > 0 required");

  // h = e_h . f and hu = e_m . f are linear in f. Substituting them into
  //   f_i^eq = w_i (h + c_i hu / cs2 + (g h^2/2 - cs2 h + (hu)^2 (2 - h)) k_i)
  // with k_i = (c_i^2 - cs2) / (2 cs2^2) gives a cubic polynomial in f.
  const Eigen::RowVector3d e_h(1.0, 1.0, 1.0);
  const Eigen::RowVector3d e_m(L::c[0], L::c[1], L::c[2]);
  const double cs4 = L::cs2 * L::cs2;

  const Eigen::RowVectorXd hh = outer_row({e_h, e_h});
  const Eigen::RowVectorXd mm = outer_row({e_m, e_m});
  const Eigen::RowVectorXd mmh = outer_row({e_m, e_m, e_h});

  FMatrixSet F{Eigen::MatrixXd::Zero(3, 3), Eigen::MatrixXd::Zero(3, 9),
               Eigen::MatrixXd::Zero(3, 27)};
  for (int i = 0; i < L::kQ; ++i) {
    const double ci = L::c[i];
    const double k = (ci * ci - L::cs2) / (2.0 * cs4);
    Eigen::RowVector3d lin = L::w[i] * (e_h + ci * e_m / L::cs2 - L::cs2 * k * e_h);
    lin[i] -= 1.0;
    F.F1.row(i) = lin;
    F.F2.row(i) = L::w[i] * k * (p.g / 2.0 * hh + 2.0 * mm);
    F.F3.row(i) = -L::w[i] * k * mmh;
  }
  F.F1 /= p.tau;
  F.F2 = symmetrize(F.F2, 2) / p.tau;
  F.F3 = symmetrize(F.F3, 3) / p.tau;
  return F;
}

SparseMatrix kronecker_sum_transfer(const SparseMatrix& op, int level, Eigen::Index base) {
  if (level < 1) throw std::out_of_range("kronecker_sum_transfer: level >= 1 required");
  SparseMatrix sum;
  for (int r = 0; r < level; ++r) {
    SparseMatrix term = op;
    if (r > 0) term = kron(sparse_identity(ipow(base, r)), term);
    if (level - 1 - r > 0) term = kron(term, sparse_identity(ipow(base, level - 1 - r)));
    if (r == 0)
      sum = std::move(term);
    else
      sum += term;
  }
  sum.makeCompressed();
  return sum;
}

SparseMatrix transfer_matrix(const FMatrixSet& F, int level, int target) {
  check_level_target(level, target);
  return kronecker_sum_transfer(to_sparse(F.degree(target - level + 1)), level, L::kQ);
}

SparseMatrix transfer_matrix(const FMatrixSet& F, int level, int target, int grid_points) {
  check_level_target(level, target);
  return kronecker_sum_transfer(lift_to_grid(F, target - level + 1, grid_points), level,
                                static_cast<Eigen::Index>(L::kQ) * grid_points);
}

SparseMatrix lift_to_grid(const FMatrixSet& F, int degree, int alpha, int grid_points) {
  if (grid_points < 1) throw std::invalid_argument("lift_to_grid: N >= 1 required");
  if (alpha < 0 || alpha >= grid_points)
    throw std::out_of_range("lift_to_grid: grid index " + std::to_string(alpha) +
                            " outside [0, " + std::to_string(grid_points) + ")");
  const Eigen::MatrixXd& Fm = F.degree(degree);
  const Eigen::Index width = static_cast<Eigen::Index>(L::kQ) * grid_points;
  // Column (a_1, ..., a_j) of F^(j) reads f_{a_1}(x_alpha) ... f_{a_j}(x_alpha),
  // which sits at phi^[j] index ((3 alpha + a_1) * 3N + (3 alpha + a_2)) * 3N ...
  std::vector<Triplet> t;
  for (Eigen::Index col = 0; col < Fm.cols(); ++col) {
    Eigen::Index rem = col;
    std::array<int, 3> digits{};
    for (int s = degree - 1; s >= 0; --s) {
      digits[static_cast<std::size_t>(s)] = static_cast<int>(rem % 3);
      rem /= 3;
    }
    Eigen::Index target = 0;
    for (int s = 0; s < degree; ++s)
      target = target * width + 3 * alpha + digits[static_cast<std::size_t>(s)];
    for (int i = 0; i < L::kQ; ++i)
      if (Fm(i, col) != 0.0) t.emplace_back(i, static_cast<int>(target), Fm(i, col));
  }
  return from_triplets(L::kQ, ipow(width, degree), t);
}

SparseMatrix lift_to_grid(const FMatrixSet& F, int degree, int grid_points) {
  const Eigen::Index width = static_cast<Eigen::Index>(L::kQ) * grid_points;
  std::vector<Triplet> t;
  for (int a = 0; a < grid_points; ++a)
    append_block(t, lift_to_grid(F, degree, a, grid_points), 3 * a, 0);
  return from_triplets(width, ipow(width, degree), t);
}

SparseMatrix streaming_operator(const PhysParams& p) {
  const int n = p.grid_points;
  if (n < 3)
    throw std::invalid_argument("streaming matrix for one grid point has no meaning: N >= 3 required");
  const double s = gradient_coefficient(p);
  std::vector<Triplet> t;
  for (int a = 0; a < n; ++a) {
    const int right = (a + 1) % n;
    const int left = (a + n - 1) % n;
    for (int i = 0; i < L::kQ; ++i) {
      if (L::c[i] == 0) continue;
      t.emplace_back(3 * a + i, 3 * right + i, -L::c[i] * s);
      t.emplace_back(3 * a + i, 3 * left + i, L::c[i] * s);
    }
  }
  return from_triplets(3 * n, 3 * n, t);
}

std::int64_t carleman_dimension(int grid_points, int order) {
  std::int64_t d = 0;
  for (int j = 1; j <= order; ++j) d += ipow(3LL * grid_points, j);
  return d;
}

std::int64_t level_offset(int grid_points, int level) {
  return carleman_dimension(grid_points, level - 1);
}

SparseMatrix build_collision_matrix(const FMatrixSet& F, int grid_points) {
  if (grid_points < 1) throw std::invalid_argument("build_collision_matrix: N >= 1 required");
  const Eigen::Index base = 3 * grid_points;
  std::array<SparseMatrix, kTruncationOrder + 1> lifted;
  for (int m = 1; m <= kTruncationOrder; ++m) lifted[m] = lift_to_grid(F, m, grid_points);

  std::vector<Triplet> t;
  for (int level = 1; level <= kTruncationOrder; ++level)
    for (int m = 1; level + m - 1 <= kTruncationOrder; ++m) {
      const SparseMatrix block = kronecker_sum_transfer(lifted[m], level, base);
      append_block(t, block, level_offset(grid_points, level),
                   level_offset(grid_points, level + m - 1));
    }
  const auto dim = carleman_dimension(grid_points);
  return from_triplets(dim, dim, t);
}

SparseMatrix build_streaming_matrix(const PhysParams& p) {
  const SparseMatrix S = streaming_operator(p);
  const Eigen::Index base = 3 * p.grid_points;
  std::vector<Triplet> t;
  for (int level = 1; level <= kTruncationOrder; ++level) {
    const auto off = level_offset(p.grid_points, level);
    append_block(t, kronecker_sum_transfer(S, level, base), off, off);
  }
  const auto dim = carleman_dimension(p.grid_points);
  return from_triplets(dim, dim, t);
}

CarlemanMatrix build_carleman(const PhysParams& p, Dynamics dynamics) {
  p.validate(true);
  const auto dim = carleman_dimension(p.grid_points);
  CarlemanMatrix c;
  c.grid_points = p.grid_points;
  c.collision = dynamics.collision ? build_collision_matrix(build_F_matrices(p), p.grid_points)
                                   : SparseMatrix(dim, dim);
  c.streaming = dynamics.streaming ? build_streaming_matrix(p) : SparseMatrix(dim, dim);
  c.total = c.collision + c.streaming;
  c.total.prune(0.0);
  c.total.makeCompressed();
  return c;
}

Eigen::VectorXd embed_state(const DistributionField& field) {
  const Eigen::VectorXd phi = Eigen::Map<const Eigen::VectorXd>(field.data(), field.size());
  const int n = static_cast<int>(field.rows());
  Eigen::VectorXd v(carleman_dimension(n));
  for (int j = 1; j <= kTruncationOrder; ++j) {
    const auto off = level_offset(n, j);
    const auto len = ipow(phi.size(), j);
    v.segment(off, len) = kron_power(phi, j);
  }
  return v;
}

DistributionField extract_state(const Eigen::VectorXd& v, int grid_points) {
  if (grid_points < 1) throw std::invalid_argument("extract_state: N >= 1 required");
  if (v.size() != carleman_dimension(grid_points))
    throw std::invalid_argument("extract_state: vector length " + std::to_string(v.size()) +
                                " != Carleman dimension " +
                                std::to_string(carleman_dimension(grid_points)));
  DistributionField f(grid_points, 3);
  for (int a = 0; a < grid_points; ++a)
    for (int i = 0; i < 3; ++i) f(a, i) = v[3 * a + i];
  return f;
}

}  // namespace swe
