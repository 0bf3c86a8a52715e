#include "swe_carleman/qsvt.hpp"

#include "swe_carleman/format.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <ostream>
#include <string>

namespace swe {

double chebyshev_eval(const std::vector<double>& coeffs, double x) {
  double b1 = 0.0, b2 = 0.0;
  for (std::size_t k = coeffs.size(); k-- > 1;) {
    const double b0 = coeffs[k] + 2.0 * x * b1 - b2;
    b2 = b1;
    b1 = b0;
  }
  return (coeffs.empty() ? 0.0 : coeffs[0]) + x * b1 - b2;
}

Eigen::MatrixXd chebyshev_eval(const std::vector<double>& coeffs, const Eigen::MatrixXd& M) {
  if (M.rows() != M.cols()) throw std::invalid_argument("chebyshev_eval: square matrix required");
  const Eigen::Index n = M.rows();
  const Eigen::MatrixXd I = Eigen::MatrixXd::Identity(n, n);
  Eigen::MatrixXd b1 = Eigen::MatrixXd::Zero(n, n), b2 = Eigen::MatrixXd::Zero(n, n);
  for (std::size_t k = coeffs.size(); k-- > 1;) {
    Eigen::MatrixXd b0 = coeffs[k] * I + 2.0 * M * b1 - b2;
    b2 = std::move(b1);
    b1 = std::move(b0);
  }
  return (coeffs.empty() ? 0.0 : coeffs[0]) * I + M * b1 - b2;
}

std::vector<double> expand_odd(const std::vector<double>& odd_coeffs) {
  std::vector<double> full(2 * odd_coeffs.size(), 0.0);
  for (std::size_t j = 0; j < odd_coeffs.size(); ++j) full[2 * j + 1] = odd_coeffs[j];
  return full;
}

double PolyApprox::operator()(double x) const { return chebyshev_eval(expand_odd(odd_coeffs), x); }

Eigen::MatrixXd apply_to_matrix(const PolyApprox& p, const Eigen::MatrixXd& M) {
  return chebyshev_eval(expand_odd(p.odd_coeffs), M);
}

namespace {

std::vector<double> linspace(double a, double b, int n) {
  std::vector<double> x(static_cast<std::size_t>(n));
  for (int i = 0; i < n; ++i) x[static_cast<std::size_t>(i)] = a + (b - a) * i / (n - 1);
  return x;
}

// tail[i] = P[X >= b + i] for X ~ Binomial(2b, 1/2), i = 0..b+1.
std::vector<double> binomial_upper_tails(int b) {
  const double n = 2.0 * b;
  std::vector<double> pmf(static_cast<std::size_t>(b) + 1);
  for (int i = 0; i <= b; ++i)
    pmf[static_cast<std::size_t>(i)] =
        std::exp(std::lgamma(n + 1.0) - std::lgamma(b + i + 1.0) - std::lgamma(b - i + 1.0) -
                 n * std::log(2.0));
  std::vector<double> tail(static_cast<std::size_t>(b) + 2, 0.0);
  for (int i = b; i >= 0; --i)
    tail[static_cast<std::size_t>(i)] = tail[static_cast<std::size_t>(i) + 1] + pmf[static_cast<std::size_t>(i)];
  return tail;
}

}  // namespace

PolyApprox inverse_poly(double kappa, double epsilon, const InversePolyOptions& opts) {
  if (!(kappa >= 1.0) || !std::isfinite(kappa)) throw std::invalid_argument("inverse_poly: kappa >= 1 required");
  if (!(epsilon > 0.0 && epsilon < 1.0)) throw std::invalid_argument("inverse_poly: 0 < epsilon < 1 required");
  if (opts.samples_per_interval < 2) throw std::invalid_argument("inverse_poly: at least 2 samples required");

  PolyApprox p;
  p.kappa = kappa;
  p.epsilon = epsilon;

  if (kappa == 1.0) {
    // D_1 = {-1, 1}, where 1/(2x) = x/2 exactly.
    p.odd_coeffs = {0.5};
    p.degree = 1;
    p.achieved_error = 0.0;
    p.max_magnitude = 0.5;
    return p;
  }

  // (1 - x^2)^b / (2 kappa x) <= exp(-b / kappa^2) / 2 <= epsilon / 4 on D_kappa,
  // leaving the rest of the budget to the Chebyshev truncation.
  const double bd = std::ceil(kappa * kappa * std::log(2.0 / epsilon));
  if (bd > 1e8) throw DegreeCapError("inverse_poly: smoothing order too large", 1.0);
  p.smoothing = static_cast<int>(bd);
  const int b = p.smoothing;
  const std::vector<double> tail = binomial_upper_tails(b);

  // Positive and negative halves of D_kappa, sampled densely.
  std::vector<double> xs = linspace(1.0 / kappa, 1.0, opts.samples_per_interval);
  const std::size_t half = xs.size();
  for (std::size_t i = 0; i < half; ++i) xs.push_back(-xs[i]);

  const std::size_t m = xs.size();
  std::vector<double> sum(m, 0.0), t_prev(m), t_odd(m), target(m);
  for (std::size_t i = 0; i < m; ++i) {
    t_prev[i] = 1.0;     // T_0
    t_odd[i] = xs[i];    // T_1
    target[i] = 1.0 / (2.0 * kappa * xs[i]);
  }

  const int max_terms = std::min(b, (opts.degree_cap - 1) / 2 + 1);
  double best = std::numeric_limits<double>::infinity();
  for (int j = 0; j < max_terms; ++j) {
    const double sign = (j % 2 == 0) ? 1.0 : -1.0;
    const double c = 4.0 * sign * tail[static_cast<std::size_t>(j) + 1] / (2.0 * kappa);
    p.odd_coeffs.push_back(c);
    double err = 0.0;
    for (std::size_t i = 0; i < m; ++i) {
      sum[i] += c * t_odd[i];
      err = std::max(err, std::abs(sum[i] - target[i]));
      // Advance T_{2j+1} -> T_{2j+3} via T_{k+1} = 2x T_k - T_{k-1}, twice.
      const double t_even = 2.0 * xs[i] * t_odd[i] - t_prev[i];
      const double t_next = 2.0 * xs[i] * t_even - t_odd[i];
      t_prev[i] = t_even;
      t_odd[i] = t_next;
    }
    best = std::min(best, err);
    if (err <= epsilon) {
      p.degree = 2 * j + 1;
      p.achieved_error = err;
      const std::vector<double> full = expand_odd(p.odd_coeffs);
      for (double x : linspace(-1.0, 1.0, 2 * opts.samples_per_interval + 1))
        p.max_magnitude = std::max(p.max_magnitude, std::abs(chebyshev_eval(full, x)));
      if (p.max_magnitude > 1.0)
        throw DegreeCapError("inverse_poly: polynomial exceeds 1 on [-1, 1] (max " +
                                 fmt_double(p.max_magnitude) + ")",
                             err);
      return p;
    }
  }
  throw DegreeCapError("inverse_poly: no admissible polynomial up to degree " +
                           std::to_string(2 * max_terms - 1) + "; best error " + fmt_double(best),
                       best);
}

std::vector<DegreeRow> degree_scaling(const std::vector<double>& kappas, double epsilon,
                                      const InversePolyOptions& opts) {
  std::vector<DegreeRow> rows;
  for (double k : kappas) {
    if (!(k >= 2.0)) throw std::invalid_argument("degree_scaling: kappa >= 2 required");
    const PolyApprox p = inverse_poly(k, epsilon, opts);
    rows.push_back({k, epsilon, p.degree, p.achieved_error, p.degree / (k * std::log(k))});
  }
  return rows;
}

void write_degree_csv(std::ostream& os, const std::vector<DegreeRow>& rows) {
  os << "kappa,epsilon,degree,achieved_error,ratio_d_over_klogk\n";
  for (const auto& r : rows)
    os << fmt_double(r.kappa) << ',' << fmt_double(r.epsilon) << ',' << r.degree << ','
       << fmt_double(r.achieved_error) << ',' << fmt_double(r.ratio) << '\n';
}

void write_coefficients_csv(std::ostream& os, const PolyApprox& p) {
  os << "index,value\n";
  const auto full = expand_odd(p.odd_coeffs);
  for (std::size_t k = 0; k < full.size(); ++k) os << k << ',' << fmt_double(full[k]) << '\n';
}

}  // namespace swe
