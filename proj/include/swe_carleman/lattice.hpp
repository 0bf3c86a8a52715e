#pragma once

// D1Q3 discrete-velocity model for the 1-D shallow water equations.
//
// Distribution functions are stored per grid point as rows of an N x 3
// matrix, so the row-major buffer is exactly the stacked vector
// phi = (f(x_1), ..., f(x_N)) used by the Carleman lift.

#include <Eigen/Dense>

#include <array>
#include <cstddef>
#include <iosfwd>
#include <optional>
#include <span>
#include <stdexcept>
#include <string>
#include <vector>

namespace swe {

struct LatticeD1Q3 {
  static constexpr int kQ = 3;
  static constexpr std::array<int, 3> c{0, 1, -1};
  static constexpr std::array<double, 3> w{2.0 / 3.0, 1.0 / 6.0, 1.0 / 6.0};
  static constexpr double cs2 = 1.0 / 3.0;
};

/// How the central-difference gradient is scaled in the streaming term.
enum class StreamingScale {
  physical,  // (N-1)/(2L)
  lattice,   // 1/dt
};

std::string to_string(StreamingScale s);
StreamingScale streaming_scale_from_string(const std::string& s);

/// How the hu^2 = (hu)^2 / h term of the equilibrium is evaluated.
enum class Nonlinearity {
  exact,      // (hu)^2 / h
  truncated,  // (hu)^2 (2 - h), the form kept by the third-order Carleman model
};

struct PhysParams {
  double g = 2.0 / 3.0;
  double tau = 1.0;
  double length = 1.0;
  int grid_points = 3;
  double dt = 0.1;
  int timesteps = 1;
  StreamingScale streaming = StreamingScale::physical;

  /// Throws std::invalid_argument naming the offending field.
  void validate(bool needs_streaming = true) const;
};

/// tau = 2 nu / (g h_ref); the relaxation time is frozen at the nominal depth.
double relaxation_time(double nu, double g, double h_ref = 1.0);

/// Coefficient multiplying (f(x+1) - f(x-1)) in the gradient.
double gradient_coefficient(const PhysParams& p);

using Distribution = std::array<double, 3>;
using DistributionField = Eigen::Matrix<double, Eigen::Dynamic, 3, Eigen::RowMajor>;

struct MacroState {
  Eigen::VectorXd h;
  Eigen::VectorXd u;
};

struct Moments {
  double h = 0.0;
  double hu = 0.0;

  /// Empty when h == 0: the velocity is undefined there.
  std::optional<double> velocity() const;
};

class InstabilityError : public std::runtime_error {
 public:
  InstabilityError(const std::string& what, int step)
      : std::runtime_error(what + " at step " + std::to_string(step)), step_(step) {}
  int step() const noexcept { return step_; }

 private:
  int step_;
};

Distribution equilibrium(double h, double u, double g);

/// Equilibrium written in terms of the conserved moments (h, hu).
Distribution equilibrium_from_moments(double h, double hu, double g, Nonlinearity mode);

Moments moments(const Distribution& f);
Moments moments(const DistributionField& field, Eigen::Index point);
MacroState macro_state(const DistributionField& field);

/// h_a * (2/3, 1/6 + u_a/2, 1/6 - u_a/2) at every point.
DistributionField initial_field(std::span<const double> h, std::span<const double> u);

/// Right-hand side of the DVBE: streaming plus BGK collision.
DistributionField rate(const DistributionField& field, const PhysParams& p, Nonlinearity mode);
DistributionField collision_rate(const DistributionField& field, const PhysParams& p,
                                 Nonlinearity mode);
DistributionField streaming_rate(const DistributionField& field, const PhysParams& p);

/// One explicit Euler step of the finite-difference DVBE.
DistributionField reference_step(const DistributionField& field, const PhysParams& p,
                                 Nonlinearity mode, int step_index = 0);

/// Returns the states at steps 0..steps (inclusive).
std::vector<DistributionField> reference_run(const DistributionField& field,
                                             const PhysParams& p, int steps,
                                             Nonlinearity mode);

/// CSV columns x_index,f1,f2,f3,h,u.
void write_field_csv(std::ostream& os, const DistributionField& field);

}  // namespace swe
