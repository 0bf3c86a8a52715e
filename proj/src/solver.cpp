#include "swe_carleman/solver.hpp"

#include "swe_carleman/format.hpp"

#include <Eigen/OrderingMethods>
#include <Eigen/SparseLU>
#include <Eigen/SVD>

#include <chrono>
#include <cmath>
#include <functional>
#include <limits>
#include <ostream>

namespace swe {

std::string to_string(SolveMethod m) {
  return m == SolveMethod::block_forward ? "block_forward" : "sparse_direct";
}

std::string to_string(KappaMethod m) {
  return m == KappaMethod::dense_svd ? "dense_svd" : "power_iter";
}

SolveMethod solve_method_from_string(const std::string& s) {
  if (s == "block_forward") return SolveMethod::block_forward;
  if (s == "sparse_direct") return SolveMethod::sparse_direct;
  throw std::invalid_argument("unknown solve method '" + s + "'");
}

KappaMethod kappa_method_from_string(const std::string& s) {
  if (s == "dense_svd") return KappaMethod::dense_svd;
  if (s == "power_iter") return KappaMethod::power_iter;
  throw std::invalid_argument("unknown condition-number method '" + s + "'");
}

namespace {

using ColMajorSparse = Eigen::SparseMatrix<double, Eigen::ColMajor>;

// Forward substitution over time blocks. Row r of block j reads only block
// j-1 (sub-diagonal) and its own unit diagonal entry.
Eigen::VectorXd block_forward(const EulerSystem& sys) {
  const Eigen::Index d = sys.block_dim;
  if (d <= 0 || sys.E.rows() != d * (sys.timesteps + 1))
    throw SolveError("block_forward: system is not partitioned into time blocks");
  Eigen::VectorXd x(sys.E.rows());
  for (Eigen::Index j = 0; j <= sys.timesteps; ++j) {
    const Eigen::Index lo = j * d;
    const Eigen::Index prev = lo - d;
    for (Eigen::Index r = lo; r < lo + d; ++r) {
      double acc = sys.b[r];
      bool diagonal_seen = false;
      for (SparseMatrix::InnerIterator it(sys.E, r); it; ++it) {
        const Eigen::Index c = it.col();
        if (c == r && it.value() == 1.0) {
          diagonal_seen = true;
        } else if (j > 0 && c >= prev && c < lo) {
          acc -= it.value() * x[c];
        } else {
          throw SolveError("block_forward: entry (" + std::to_string(r) + ", " +
                           std::to_string(c) + ") breaks the block lower-bidiagonal structure");
        }
      }
      if (!diagonal_seen) throw SolveError("block_forward: singular pivot at row " + std::to_string(r));
      x[r] = acc;
    }
  }
  return x;
}

Eigen::VectorXd sparse_direct(const EulerSystem& sys) {
  ColMajorSparse A = sys.E;
  A.makeCompressed();
  Eigen::SparseLU<ColMajorSparse, Eigen::COLAMDOrdering<int>> lu;
  lu.analyzePattern(A);
  lu.factorize(A);
  if (lu.info() != Eigen::Success) throw SolveError("sparse_direct: singular pivot (" + lu.lastErrorMessage() + ")");
  Eigen::VectorXd x = lu.solve(sys.b);
  if (lu.info() != Eigen::Success) throw SolveError("sparse_direct: solve failed");
  return x;
}

bool is_unit_lower_triangular(const SparseMatrix& E) {
  if (E.rows() != E.cols()) return false;
  for (Eigen::Index r = 0; r < E.outerSize(); ++r) {
    bool diag = false;
    for (SparseMatrix::InnerIterator it(E, r); it; ++it) {
      if (it.col() > r) return false;
      if (it.col() == r) {
        if (it.value() != 1.0) return false;
        diag = true;
      }
    }
    if (!diag) return false;
  }
  return true;
}

struct PowerResult {
  double eigenvalue = 0.0;
  int iterations = 0;
};

// Largest eigenvalue of a symmetric positive semi-definite operator.
PowerResult power_iteration(const std::function<Eigen::VectorXd(const Eigen::VectorXd&)>& apply,
                            Eigen::Index n, const PowerIterationOptions& opts,
                            const char* what) {
  Eigen::VectorXd x(n);
  for (Eigen::Index i = 0; i < n; ++i) x[i] = 1.0 + 0.5 * std::sin(static_cast<double>(i) + 1.0);
  x.normalize();
  double lambda = 0.0;
  for (int it = 1; it <= opts.max_iterations; ++it) {
    Eigen::VectorXd y = apply(x);
    lambda = x.dot(y);
    const double residual = (y - lambda * x).norm();
    if (!std::isfinite(lambda)) throw ConvergenceError(std::string(what) + ": non-finite iterate", lambda);
    if (residual <= opts.tolerance * std::abs(lambda)) return {lambda, it};
    const double norm = y.norm();
    if (norm == 0.0) return {0.0, it};
    x = y / norm;
  }
  throw ConvergenceError(std::string(what) + ": no convergence after " +
                             std::to_string(opts.max_iterations) + " iterations",
                         lambda);
}

}  // namespace

SolveReport solve(const EulerSystem& sys, SolveMethod method, double tolerance) {
  if (sys.E.rows() != sys.E.cols() || sys.E.rows() != sys.b.size())
    throw std::invalid_argument("solve: E must be square and conform with b");
  const auto t0 = std::chrono::steady_clock::now();
  SolveReport rep;
  rep.method = method;
  rep.x = method == SolveMethod::block_forward ? block_forward(sys) : sparse_direct(sys);
  rep.seconds = std::chrono::duration<double>(std::chrono::steady_clock::now() - t0).count();
  const double bnorm = sys.b.norm();
  const double rnorm = (sys.E * rep.x - sys.b).norm();
  rep.residual = bnorm > 0.0 ? rnorm / bnorm : rnorm;
  if (!(rep.residual <= tolerance))
    throw ResidualError("solve: relative residual " + fmt_double(rep.residual) +
                            " exceeds tolerance " + fmt_double(tolerance),
                        rep.residual);
  return rep;
}

KappaReport condition_number(const Eigen::MatrixXd& A) {
  if (A.rows() == 0 || A.cols() == 0) throw std::invalid_argument("condition_number: empty matrix");
  if (!A.allFinite()) throw std::invalid_argument("condition_number: non-finite entries");
  Eigen::BDCSVD<Eigen::MatrixXd> svd(A);  // singular values only
  if (svd.info() != Eigen::Success) throw ConvergenceError("dense SVD did not converge", 0.0);
  const Eigen::VectorXd& s = svd.singularValues();
  KappaReport r;
  r.method = KappaMethod::dense_svd;
  r.rows = A.rows();
  r.cols = A.cols();
  r.sigma_max = s.maxCoeff();
  r.sigma_min = s.minCoeff();
  r.kappa = r.sigma_min > 0.0 ? r.sigma_max / r.sigma_min : std::numeric_limits<double>::infinity();
  return r;
}

KappaReport condition_number(const SparseMatrix& E, KappaMethod method,
                             const PowerIterationOptions& opts) {
  if (method == KappaMethod::dense_svd) return condition_number(Eigen::MatrixXd(E));

  if (E.rows() != E.cols()) throw std::invalid_argument("power_iter: square matrix required");
  const Eigen::Index n = E.rows();
  const SparseMatrix Et = E.transpose();

  const auto top = power_iteration(
      [&](const Eigen::VectorXd& x) -> Eigen::VectorXd { return Et * (E * x); }, n, opts,
      "power iteration for sigma_max");

  // Inverse iteration on E^T E: apply E^{-1} E^{-T}.
  std::function<Eigen::VectorXd(const Eigen::VectorXd&)> inverse;
  ColMajorSparse Ecol = E;
  Eigen::SparseLU<ColMajorSparse, Eigen::COLAMDOrdering<int>> lu;
  if (is_unit_lower_triangular(E)) {
    inverse = [&](const Eigen::VectorXd& x) -> Eigen::VectorXd {
      const Eigen::VectorXd z = Et.triangularView<Eigen::UnitUpper>().solve(x);
      return E.triangularView<Eigen::UnitLower>().solve(z);
    };
  } else {
    lu.compute(Ecol);
    if (lu.info() != Eigen::Success) throw SolveError("power_iter: matrix is singular");
    inverse = [&](const Eigen::VectorXd& x) -> Eigen::VectorXd {
      const Eigen::VectorXd z = lu.transpose().solve(x);
      return lu.solve(z);
    };
  }
  const auto bottom = power_iteration(inverse, n, opts, "inverse iteration for sigma_min");

  KappaReport r;
  r.method = KappaMethod::power_iter;
  r.rows = E.rows();
  r.cols = E.cols();
  r.sigma_max = std::sqrt(top.eigenvalue);
  r.sigma_min = 1.0 / std::sqrt(bottom.eigenvalue);
  r.kappa = r.sigma_max / r.sigma_min;
  r.iterations = std::max(top.iterations, bottom.iterations);
  return r;
}

void write_kappa_csv_header(std::ostream& os) {
  os << "N,N_t,dim,sigma_max,sigma_min,kappa,method\n";
}

void write_kappa_csv_row(std::ostream& os, int grid_points, int timesteps, const KappaReport& r) {
  os << grid_points << ',' << timesteps << ',' << r.rows << ',' << fmt_double(r.sigma_max) << ','
     << fmt_double(r.sigma_min) << ',' << fmt_double(r.kappa) << ',' << to_string(r.method)
     << '\n';
}

}  // namespace swe
