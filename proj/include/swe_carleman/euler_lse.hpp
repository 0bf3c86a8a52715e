#pragma once

#include "swe_carleman/carleman.hpp"

#include <iosfwd>
#include <vector>

namespace swe {

/// Forward-Euler system
///   [ I                    ] [V_0]   [V_0]
///   [ -(I+C dt)  I         ] [V_1] = [ 0 ]
///   [        ...      ...  ] [...]   [...]
/// with timesteps + 1 diagonal blocks of size block_dim.
struct EulerSystem {
  SparseMatrix E;
  Eigen::VectorXd b;
  double dt = 0.0;
  int timesteps = 0;
  Eigen::Index block_dim = 0;

  Eigen::Index dim() const { return E.rows(); }
};

struct ObservableSeries {
  int grid_points = 0;
  std::vector<Eigen::VectorXd> h;   // per time step
  std::vector<Eigen::VectorXd> hu;  // per time step
  std::vector<Eigen::VectorXd> u;   // NaN where h == 0

  int steps() const { return static_cast<int>(h.size()) - 1; }
};

EulerSystem assemble(const SparseMatrix& C, const Eigen::VectorXd& V0, double dt, int timesteps);

/// V_{j+1} = (I + C dt) V_j for j = 0..timesteps-1; returns all timesteps+1 states.
std::vector<Eigen::VectorXd> step_explicitly(const SparseMatrix& C, const Eigen::VectorXd& V0,
                                             double dt, int timesteps);

ObservableSeries extract_observables(const Eigen::VectorXd& x, int grid_points, int timesteps);
ObservableSeries observables_from_states(const std::vector<Eigen::VectorXd>& states,
                                         int grid_points);
ObservableSeries observables_from_fields(const std::vector<DistributionField>& fields);

/// CSV columns t_index,x_index,h,u.
void write_observables_csv(std::ostream& os, const ObservableSeries& s);

}  // namespace swe
