#pragma once

#include "swe_carleman/euler_lse.hpp"

#include <iosfwd>
#include <stdexcept>
#include <string>

namespace swe {

enum class SolveMethod { block_forward, sparse_direct };
enum class KappaMethod { dense_svd, power_iter };

std::string to_string(SolveMethod m);
std::string to_string(KappaMethod m);
SolveMethod solve_method_from_string(const std::string& s);
KappaMethod kappa_method_from_string(const std::string& s);

inline constexpr double kSolveTolerance = 1e-10;

struct SolveReport {
  Eigen::VectorXd x;
  double residual = 0.0;  // ||E x - b|| / ||b||
  double seconds = 0.0;
  SolveMethod method = SolveMethod::block_forward;
};

struct KappaReport {
  double sigma_max = 0.0;
  double sigma_min = 0.0;
  double kappa = 0.0;
  KappaMethod method = KappaMethod::dense_svd;
  Eigen::Index rows = 0;
  Eigen::Index cols = 0;
  int iterations = 0;  // power iteration only: max over the two runs
};

struct PowerIterationOptions {
  double tolerance = 1e-6;  // relative eigen-residual ||A x - l x|| / l
  int max_iterations = 200000;
};

class SolveError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

/// Raised when the residual of an otherwise completed solve exceeds the tolerance.
class ResidualError : public SolveError {
 public:
  ResidualError(const std::string& what, double residual)
      : SolveError(what), residual_(residual) {}
  double residual() const noexcept { return residual_; }

 private:
  double residual_;
};

class ConvergenceError : public std::runtime_error {
 public:
  ConvergenceError(const std::string& what, double last_estimate)
      : std::runtime_error(what), last_estimate_(last_estimate) {}
  double last_estimate() const noexcept { return last_estimate_; }

 private:
  double last_estimate_;
};

SolveReport solve(const EulerSystem& sys, SolveMethod method,
                  double tolerance = kSolveTolerance);

KappaReport condition_number(const SparseMatrix& E, KappaMethod method,
                             const PowerIterationOptions& opts = {});
KappaReport condition_number(const Eigen::MatrixXd& A);

/// CSV row helpers: N,N_t,dim,sigma_max,sigma_min,kappa,method
void write_kappa_csv_header(std::ostream& os);
void write_kappa_csv_row(std::ostream& os, int grid_points, int timesteps, const KappaReport& r);

}  // namespace swe
