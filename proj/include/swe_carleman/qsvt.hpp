#pragma once

// Degree/cost model for QSVT-based matrix inversion: a bounded odd
// polynomial approximating 1/(2 kappa x) on [-1, -1/kappa] U [1/kappa, 1].
//
// The polynomial is a truncated Chebyshev expansion of the smoothed inverse
//   g_b(x) = (1 - (1 - x^2)^b) / x,
// whose coefficients are binomial tail sums:
//   g_b(x) = 4 sum_j (-1)^j P[X > b + j] T_{2j+1}(x),  X ~ Binomial(2b, 1/2).

#include <Eigen/Dense>

#include <iosfwd>
#include <stdexcept>
#include <vector>

namespace swe {

struct PolyApprox {
  double kappa = 1.0;
  double epsilon = 0.0;
  int smoothing = 0;                // b in g_b
  std::vector<double> odd_coeffs;   // odd_coeffs[j] multiplies T_{2j+1}
  int degree = 0;                   // 2 * (odd_coeffs.size() - 1) + 1
  double achieved_error = 0.0;      // sampled sup |p - 1/(2 kappa x)| on D_kappa
  double max_magnitude = 0.0;       // sampled sup |p| on [-1, 1]

  double operator()(double x) const;
};

struct InversePolyOptions {
  int degree_cap = 20001;
  int samples_per_interval = 10000;
};

class DegreeCapError : public std::runtime_error {
 public:
  DegreeCapError(const std::string& what, double best_error)
      : std::runtime_error(what), best_error_(best_error) {}
  double best_error() const noexcept { return best_error_; }

 private:
  double best_error_;
};

/// Clenshaw evaluation of sum_k c_k T_k(x).
double chebyshev_eval(const std::vector<double>& coeffs, double x);

/// Clenshaw recurrence with a matrix argument (any square M).
Eigen::MatrixXd chebyshev_eval(const std::vector<double>& coeffs, const Eigen::MatrixXd& M);

/// Full Chebyshev coefficient vector (even slots zero) of an odd polynomial.
std::vector<double> expand_odd(const std::vector<double>& odd_coeffs);

PolyApprox inverse_poly(double kappa, double epsilon, const InversePolyOptions& opts = {});

/// Applies p to a symmetric matrix through the Clenshaw recurrence.
Eigen::MatrixXd apply_to_matrix(const PolyApprox& p, const Eigen::MatrixXd& M);

struct DegreeRow {
  double kappa = 0.0;
  double epsilon = 0.0;
  int degree = 0;
  double achieved_error = 0.0;
  double ratio = 0.0;  // degree / (kappa ln kappa)
};

std::vector<DegreeRow> degree_scaling(const std::vector<double>& kappas, double epsilon,
                                      const InversePolyOptions& opts = {});

/// CSV columns kappa,epsilon,degree,achieved_error,ratio_d_over_klogk.
void write_degree_csv(std::ostream& os, const std::vector<DegreeRow>& rows);

/// CSV columns index,value over the full Chebyshev coefficient vector.
void write_coefficients_csv(std::ostream& os, const PolyApprox& p);

}  // namespace swe
