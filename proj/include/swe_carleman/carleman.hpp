#pragma once

// Carleman linearization of the D1Q3 DVBE, truncated at third order.
//
// The state vector is V = (phi, phi (x) phi, phi (x) phi (x) phi) where phi
// stacks the per-point distributions. Level j of V has (3N)^j entries.

#include "swe_carleman/lattice.hpp"
#include "swe_carleman/sparse.hpp"

namespace swe {

inline constexpr int kTruncationOrder = 3;

/// Collision polynomial collected by degree, all scaled by 1/tau:
/// collision(f) = F1 f + F2 f^[2] + F3 f^[3].
struct FMatrixSet {
  Eigen::MatrixXd F1;  // 3 x 3
  Eigen::MatrixXd F2;  // 3 x 9
  Eigen::MatrixXd F3;  // 3 x 27

  const Eigen::MatrixXd& degree(int m) const;
  Eigen::Vector3d apply(const Eigen::Vector3d& f) const;
};

FMatrixSet build_F_matrices(const PhysParams& p);

/// Sum over slots r of I (x) ... (x) op (x) ... (x) I with `level` factors of
/// size `base`. `op` maps base^m -> base, so the result is
/// base^level x base^(level + m - 1).
SparseMatrix kronecker_sum_transfer(const SparseMatrix& op, int level, Eigen::Index base);

/// Single-point transfer matrix A^level_target built from F^(target-level+1).
SparseMatrix transfer_matrix(const FMatrixSet& F, int level, int target);

/// N-point transfer matrix built from the lifted F^(target-level+1).
SparseMatrix transfer_matrix(const FMatrixSet& F, int level, int target, int grid_points);

/// Rows of the lifted degree-j collision operator that belong to grid point
/// alpha (0-based): 3 x (3N)^j, acting on phi^[j].
SparseMatrix lift_to_grid(const FMatrixSet& F, int degree, int alpha, int grid_points);

/// All grid points stacked: 3N x (3N)^j.
SparseMatrix lift_to_grid(const FMatrixSet& F, int degree, int grid_points);

/// Periodic central-difference streaming operator on phi (3N x 3N).
SparseMatrix streaming_operator(const PhysParams& p);

/// Which parts of the DVBE right-hand side enter the Carleman matrix.
struct Dynamics {
  bool collision = true;
  bool streaming = true;
};

struct CarlemanMatrix {
  int grid_points = 0;
  SparseMatrix collision;
  SparseMatrix streaming;
  SparseMatrix total;

  Eigen::Index dim() const { return total.rows(); }
};

std::int64_t carleman_dimension(int grid_points, int order = kTruncationOrder);
std::int64_t level_offset(int grid_points, int level);

SparseMatrix build_collision_matrix(const FMatrixSet& F, int grid_points);
SparseMatrix build_streaming_matrix(const PhysParams& p);
CarlemanMatrix build_carleman(const PhysParams& p, Dynamics dynamics = {});

Eigen::VectorXd embed_state(const DistributionField& field);
DistributionField extract_state(const Eigen::VectorXd& v, int grid_points);

}  // namespace swe
