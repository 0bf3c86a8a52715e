#include "swe_carleman/lattice.hpp"

#include "swe_carleman/format.hpp"

#include <cmath>
#include <ostream>
#include <vector>

namespace swe {

using L = LatticeD1Q3;

std::string to_string(StreamingScale s) {
  return s == StreamingScale::physical ? "physical" : "lattice";
}

StreamingScale streaming_scale_from_string(const std::string& s) {
  if (s == "physical") return StreamingScale::physical;
  if (s == "lattice") return StreamingScale::lattice;
  throw std::invalid_argument("unknown streaming scale '" + s + "'");
}

void PhysParams::validate(bool needs_streaming) const {
  if (!(tau > 0.0) || !std::isfinite(tau)) throw std::invalid_argument("tau > 0 required");
  if (!(dt > 0.0) || !std::isfinite(dt)) throw std::invalid_argument("dt > 0 required");
  if (!(length > 0.0)) throw std::invalid_argument("length > 0 required");
  if (!std::isfinite(g)) throw std::invalid_argument("g must be finite");
  if (timesteps < 0) throw std::invalid_argument("timesteps >= 0 required");
  if (grid_points < 1) throw std::invalid_argument("N >= 1 required");
  if (needs_streaming && grid_points < 3) throw std::invalid_argument("N >= 3 required");
}

double relaxation_time(double nu, double g, double h_ref) {
  if (!(nu > 0.0) || !(g > 0.0) || !(h_ref > 0.0))
    throw std::invalid_argument("relaxation_time: nu, g and h_ref must be positive");
  return 2.0 * nu / (g * h_ref);
}

double gradient_coefficient(const PhysParams& p) {
  if (p.streaming == StreamingScale::lattice) return 1.0 / p.dt;
  return (p.grid_points - 1) / (2.0 * p.length);
}

std::optional<double> Moments::velocity() const {
  if (h == 0.0) return std::nullopt;
  return hu / h;
}

Distribution equilibrium(double h, double u, double g) {
  if (!(h > 0.0)) throw std::domain_error("equilibrium: depth must be positive");
  const double cs4 = L::cs2 * L::cs2;
  const double quad = g * h / 2.0 - L::cs2 + u * u;
  Distribution f{};
  for (int i = 0; i < L::kQ; ++i) {
    const double ci = L::c[i];
    f[i] = L::w[i] * h * (1.0 + ci * u / L::cs2 + quad * (ci * ci - L::cs2) / (2.0 * cs4));
  }
  return f;
}

Distribution equilibrium_from_moments(double h, double hu, double g, Nonlinearity mode) {
  // h * u^2 is the only non-polynomial term; everything else is h or hu.
  double hu2 = 0.0;
  if (mode == Nonlinearity::exact) {
    if (h == 0.0) throw std::domain_error("equilibrium_from_moments: h == 0");
    hu2 = hu * hu / h;
  } else {
    hu2 = hu * hu * (2.0 - h);
  }
  const double cs4 = L::cs2 * L::cs2;
  const double second = g * h * h / 2.0 - L::cs2 * h + hu2;
  Distribution f{};
  for (int i = 0; i < L::kQ; ++i) {
    const double ci = L::c[i];
    f[i] = L::w[i] * (h + ci * hu / L::cs2 + second * (ci * ci - L::cs2) / (2.0 * cs4));
  }
  return f;
}

Moments moments(const Distribution& f) {
  Moments m;
  for (int i = 0; i < L::kQ; ++i) {
    m.h += f[i];
    m.hu += L::c[i] * f[i];
  }
  return m;
}

Moments moments(const DistributionField& field, Eigen::Index point) {
  return moments(Distribution{field(point, 0), field(point, 1), field(point, 2)});
}

MacroState macro_state(const DistributionField& field) {
  MacroState s{Eigen::VectorXd(field.rows()), Eigen::VectorXd(field.rows())};
  for (Eigen::Index a = 0; a < field.rows(); ++a) {
    const Moments m = moments(field, a);
    s.h[a] = m.h;
    s.u[a] = m.velocity().value_or(std::nan(""));
  }
  return s;
}

DistributionField initial_field(std::span<const double> h, std::span<const double> u) {
  if (h.size() != u.size())
    throw std::invalid_argument("initial_field: h has " + std::to_string(h.size()) +
                                " points but u has " + std::to_string(u.size()));
  DistributionField f(static_cast<Eigen::Index>(h.size()), 3);
  for (std::size_t a = 0; a < h.size(); ++a) {
    if (!(h[a] > 0.0)) throw std::domain_error("initial_field: depth must be positive");
    const auto row = static_cast<Eigen::Index>(a);
    f(row, 0) = h[a] * (2.0 / 3.0);
    f(row, 1) = h[a] * (1.0 / 6.0 + u[a] / 2.0);
    f(row, 2) = h[a] * (1.0 / 6.0 - u[a] / 2.0);
  }
  return f;
}

DistributionField collision_rate(const DistributionField& field, const PhysParams& p,
                                 Nonlinearity mode) {
  DistributionField out(field.rows(), 3);
  for (Eigen::Index a = 0; a < field.rows(); ++a) {
    const Moments m = moments(field, a);
    const Distribution eq = equilibrium_from_moments(m.h, m.hu, p.g, mode);
    for (int i = 0; i < L::kQ; ++i) out(a, i) = (eq[i] - field(a, i)) / p.tau;
  }
  return out;
}

DistributionField streaming_rate(const DistributionField& field, const PhysParams& p) {
  const Eigen::Index n = field.rows();
  if (n < 3) throw std::invalid_argument("streaming needs N >= 3 grid points");
  const double s = gradient_coefficient(p);
  DistributionField out(n, 3);
  for (Eigen::Index a = 0; a < n; ++a) {
    const Eigen::Index right = (a + 1) % n;
    const Eigen::Index left = (a + n - 1) % n;
    for (int i = 0; i < L::kQ; ++i)
      out(a, i) = -L::c[i] * s * (field(right, i) - field(left, i));
  }
  return out;
}

DistributionField rate(const DistributionField& field, const PhysParams& p, Nonlinearity mode) {
  return streaming_rate(field, p) + collision_rate(field, p, mode);
}

DistributionField reference_step(const DistributionField& field, const PhysParams& p,
                                 Nonlinearity mode, int step_index) {
  if (field.rows() < 3) throw std::invalid_argument("reference_step: N >= 3 required");
  for (Eigen::Index a = 0; a < field.rows(); ++a) {
    const double h = moments(field, a).h;
    if (!(h > 0.0) || !std::isfinite(h))
      throw InstabilityError("non-positive depth at point " + std::to_string(a), step_index);
  }
  DistributionField next = field + p.dt * rate(field, p, mode);
  if (!next.allFinite()) throw InstabilityError("non-finite distribution", step_index + 1);
  return next;
}

std::vector<DistributionField> reference_run(const DistributionField& field,
                                             const PhysParams& p, int steps,
                                             Nonlinearity mode) {
  std::vector<DistributionField> out;
  out.reserve(static_cast<std::size_t>(steps) + 1);
  out.push_back(field);
  for (int j = 0; j < steps; ++j) out.push_back(reference_step(out.back(), p, mode, j));
  return out;
}

void write_field_csv(std::ostream& os, const DistributionField& field) {
  os << "x_index,f1,f2,f3,h,u\n";
  for (Eigen::Index a = 0; a < field.rows(); ++a) {
    const Moments m = moments(field, a);
    os << a << ',' << fmt_double(field(a, 0)) << ',' << fmt_double(field(a, 1)) << ','
       << fmt_double(field(a, 2)) << ',' << fmt_double(m.h) << ','
       << fmt_double(m.velocity().value_or(std::nan(""))) << '\n';
  }
}

}  // namespace swe
