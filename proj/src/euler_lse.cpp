#include "swe_carleman/euler_lse.hpp"

#include "swe_carleman/format.hpp"

#include <cmath>
#include <ostream>
#include <stdexcept>
#include <string>

namespace swe {

EulerSystem assemble(const SparseMatrix& C, const Eigen::VectorXd& V0, double dt, int timesteps) {
  if (!(dt > 0.0)) throw std::invalid_argument("assemble: dt > 0 required");
  if (timesteps < 0) throw std::invalid_argument("assemble: timesteps >= 0 required");
  if (C.rows() != C.cols() || C.rows() != V0.size())
    throw std::invalid_argument("assemble: Carleman matrix is " + std::to_string(C.rows()) +
                                "x" + std::to_string(C.cols()) + " but V0 has " +
                                std::to_string(V0.size()) + " entries");
  const Eigen::Index d = C.rows();
  const Eigen::Index blocks = timesteps + 1;

  // -(I + C dt) is fused into one sparse block; C's own diagonal overlaps I.
  SparseMatrix transfer = sparse_identity(d) + dt * C;
  transfer.prune(0.0);

  std::vector<Triplet> t;
  t.reserve(static_cast<std::size_t>(blocks * d + timesteps * transfer.nonZeros()));
  for (Eigen::Index j = 0; j < blocks; ++j) {
    if (j > 0) append_block(t, transfer, j * d, (j - 1) * d, -1.0);
    for (Eigen::Index r = 0; r < d; ++r)
      t.emplace_back(static_cast<int>(j * d + r), static_cast<int>(j * d + r), 1.0);
  }

  EulerSystem sys;
  sys.E = from_triplets(blocks * d, blocks * d, t);
  sys.b = Eigen::VectorXd::Zero(blocks * d);
  sys.b.head(d) = V0;
  sys.dt = dt;
  sys.timesteps = timesteps;
  sys.block_dim = d;
  return sys;
}

std::vector<Eigen::VectorXd> step_explicitly(const SparseMatrix& C, const Eigen::VectorXd& V0,
                                             double dt, int timesteps) {
  if (!(dt > 0.0)) throw std::invalid_argument("step_explicitly: dt > 0 required");
  if (timesteps < 0) throw std::invalid_argument("step_explicitly: timesteps >= 0 required");
  if (C.rows() != C.cols() || C.rows() != V0.size())
    throw std::invalid_argument("step_explicitly: dimension mismatch");
  std::vector<Eigen::VectorXd> out;
  out.reserve(static_cast<std::size_t>(timesteps) + 1);
  out.push_back(V0);
  for (int j = 0; j < timesteps; ++j) {
    Eigen::VectorXd next = out.back() + dt * (C * out.back());
    if (!next.allFinite()) throw InstabilityError("non-finite Carleman state", j + 1);
    out.push_back(std::move(next));
  }
  return out;
}

namespace {

void push_phi(ObservableSeries& s, const double* phi, int n) {
  Eigen::VectorXd h(n), hu(n), u(n);
  for (int a = 0; a < n; ++a) {
    const Moments m = moments(Distribution{phi[3 * a], phi[3 * a + 1], phi[3 * a + 2]});
    h[a] = m.h;
    hu[a] = m.hu;
    u[a] = m.velocity().value_or(std::nan(""));
  }
  s.h.push_back(std::move(h));
  s.hu.push_back(std::move(hu));
  s.u.push_back(std::move(u));
}

}  // namespace

ObservableSeries extract_observables(const Eigen::VectorXd& x, int grid_points, int timesteps) {
  const auto d = carleman_dimension(grid_points);
  if (x.size() != d * (timesteps + 1))
    throw std::invalid_argument("extract_observables: solution length " +
                                std::to_string(x.size()) + " != " +
                                std::to_string(d * (timesteps + 1)));
  ObservableSeries s;
  s.grid_points = grid_points;
  for (int j = 0; j <= timesteps; ++j) push_phi(s, x.data() + j * d, grid_points);
  return s;
}

ObservableSeries observables_from_states(const std::vector<Eigen::VectorXd>& states,
                                         int grid_points) {
  ObservableSeries s;
  s.grid_points = grid_points;
  for (const auto& v : states) {
    if (v.size() < 3 * grid_points)
      throw std::invalid_argument("observables_from_states: state too short");
    push_phi(s, v.data(), grid_points);
  }
  return s;
}

ObservableSeries observables_from_fields(const std::vector<DistributionField>& fields) {
  ObservableSeries s;
  s.grid_points = fields.empty() ? 0 : static_cast<int>(fields.front().rows());
  for (const auto& f : fields) push_phi(s, f.data(), static_cast<int>(f.rows()));
  return s;
}

void write_observables_csv(std::ostream& os, const ObservableSeries& s) {
  os << "t_index,x_index,h,u\n";
  for (std::size_t j = 0; j < s.h.size(); ++j)
    for (Eigen::Index a = 0; a < s.h[j].size(); ++a)
      os << j << ',' << a << ',' << fmt_double(s.h[j][a]) << ',' << fmt_double(s.u[j][a])
         << '\n';
}

}  // namespace swe
