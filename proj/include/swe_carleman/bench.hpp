#pragma once

// Validation studies: stable configuration, sound speed, truncation error
// and condition-number scaling. Every study is a pure function of its config;
// sweep points may run on up to `jobs` threads and are merged in parameter
// order.

#include "swe_carleman/carleman.hpp"
#include "swe_carleman/qsvt.hpp"
#include "swe_carleman/solver.hpp"

#include <json.hpp>

#include <iosfwd>
#include <optional>
#include <string>
#include <vector>

namespace swe {

struct LinearFit {
  double slope = 0.0;
  double intercept = 0.0;
  double r2 = 0.0;
  double rss = 0.0;  // residual sum of squares
  int n = 0;
};

/// Least-squares line through (x, y); needs at least two distinct x.
LinearFit fit_linear(const std::vector<double>& x, const std::vector<double>& y);
/// Linear fit of ln y against ln x; every value must be positive.
LinearFit fit_loglog(const std::vector<double>& x, const std::vector<double>& y);

nlohmann::ordered_json to_json(const LinearFit& f);

/// Heights interpreted as given (physical) or as 1 + perturbation (normalized).
enum class HeightMode { physical, normalized };
std::string to_string(HeightMode m);
HeightMode height_mode_from_string(const std::string& s);

/// dt = cfl * (L / (N - 1)) / sqrt(g h0).
double cfl_timestep(double cfl, double length, int grid_points, double g, double h0);

// Stable steady state ------------------------------------------------------

struct StableConfig {
  std::vector<double> h0{0.01, 0.02, 0.03, 0.04, 0.05, 0.06, 0.07, 0.08, 0.09, 0.1};
  int grid_points = 4;
  int timesteps = 4;
  double dt = 0.1;
  double g = 9.81;
  double tau = 1.0;
  double length = 1.0;
  StreamingScale streaming = StreamingScale::physical;
  Dynamics dynamics;
  SolveMethod method = SolveMethod::block_forward;
  int jobs = 1;
};

struct StableRow {
  double h0 = 0.0;
  double dt = 0.0;
  int timesteps = 0;
  double abs_error = 0.0;  // sum_a |h_a(N_t) - h0| / N
  double rel_error = 0.0;  // abs_error / h0
  double residual = 0.0;
};

struct StableResult {
  std::vector<StableRow> rows;         // the h0 sweep at (dt, N_t)
  std::vector<StableRow> halved_rows;  // same sweep at (dt/2, 2 N_t): same final time
  LinearFit fit;                       // rel_error against h0
  bool strictly_increasing = false;
  std::vector<double> halving_ratios;  // rows[i].abs_error / halved_rows[i].abs_error
};

/// Full pipeline for one uniform depth: IC -> Carleman -> Euler system -> solve.
StableRow stable_point(const StableConfig& cfg, double h0, double dt, int timesteps);
StableResult stable_config(const StableConfig& cfg);

// Sound speed --------------------------------------------------------------

/// Which integrator produces the trajectory: the Carleman-linearized
/// system (what the study validates) or the nonlinear finite-difference DVBE.
enum class Simulator { carleman, reference };
std::string to_string(Simulator s);
Simulator simulator_from_string(const std::string& s);

struct SoundConfig {
  std::vector<double> h0{0.02, 0.04, 0.06, 0.08, 0.1};
  double dh0_frac = 0.01;
  int grid_points = 16;
  double length = 1.0;
  double g = 9.81;
  double cfl = 0.1;
  std::optional<double> dt;   // overrides the CFL rule for every point
  std::optional<double> tau;  // default: tau_factor * the largest CFL step of the sweep
  double tau_factor = 3.0;
  int max_steps = 4000;
  StreamingScale streaming = StreamingScale::physical;
  Simulator simulator = Simulator::carleman;
  int jobs = 1;
};

struct SoundRow {
  double h0 = 0.0;
  double dt = 0.0;
  double tau = 0.0;
  int peak_steps = 0;            // steps until the peak leaves the raised half
  double steps_per_point = 0.0;  // n_t
  double v_measured = 0.0;
  double v_analytic = 0.0;
  double rel_error = 0.0;
};

struct SoundResult {
  std::vector<SoundRow> rows;
  LinearFit fit;  // ln v_measured against ln h0
};

/// Relaxation time used for every point of the sweep.
double sound_tau(const SoundConfig& cfg);
double sound_dt(const SoundConfig& cfg, double h0);

/// Index of the largest entry; ties go to the higher index.
Eigen::Index peak_index(const Eigen::VectorXd& h);

SoundRow sound_point(const SoundConfig& cfg, double h0);
SoundResult sound_speed(const SoundConfig& cfg);

// Truncation error ---------------------------------------------------------

struct TruncationConfig {
  std::vector<double> deviations{0.02, 0.01, 0.005};
  HeightMode mode = HeightMode::normalized;
  double base_height = 1.0;  // physical mode only; normalized mode uses 1
  int grid_points = 4;
  int timesteps = 4;
  double dt = 0.1;
  double g = 2.0 / 3.0;
  double tau = 1.0;
  double length = 1.0;
  StreamingScale streaming = StreamingScale::physical;
  int jobs = 1;
};

struct TruncationRow {
  double deviation = 0.0;
  double discrepancy = 0.0;            // max over t, x of |h_carleman - h_exact|
  double discrepancy_truncated = 0.0;  // same against the truncated-nonlinearity integrator
};

struct TruncationResult {
  std::vector<TruncationRow> rows;
  LinearFit fit;  // ln discrepancy against ln deviation, over deviation > 0
};

double truncation_base_height(const TruncationConfig& cfg);
TruncationRow truncation_point(const TruncationConfig& cfg, double deviation);
TruncationResult truncation_error_study(const TruncationConfig& cfg);

// Condition number ---------------------------------------------------------

/// What the grid-point sweep keeps fixed: the spacing L/(N-1) of the
/// timestep sweep (the domain grows with N) or the domain length L.
enum class GridHold { spacing, length };
std::string to_string(GridHold h);
GridHold grid_hold_from_string(const std::string& s);

struct KappaConfig {
  std::vector<int> timesteps{2, 4, 8, 16};
  int timesteps_grid_points = 3;  // N held fixed during the N_t sweep
  std::vector<int> grid_points{3, 4, 5, 6};
  int grid_timesteps = 4;         // N_t held fixed during the N sweep
  GridHold grid_hold = GridHold::spacing;
  double dt = 0.1;
  double g = 2.0 / 3.0;
  double tau = 1.0;
  double length = 1.0;
  StreamingScale streaming = StreamingScale::physical;
  Eigen::Index dense_limit = 5000;  // largest dim handed to the dense SVD
  bool cross_check = true;          // also run power iteration where the SVD runs
  PowerIterationOptions power;
  int jobs = 1;
};

struct KappaRow {
  std::string sweep;  // "timesteps" or "grid_points"
  int grid_points = 0;
  int timesteps = 0;
  KappaReport report;
  std::optional<KappaReport> cross;  // power-iteration report when cross-checked
  std::optional<double> agreement;   // |kappa_dense - kappa_power| / kappa_dense
};

struct KappaResult {
  std::vector<KappaRow> timestep_rows;
  std::vector<KappaRow> grid_rows;
  LinearFit timestep_fit;        // kappa against N_t
  double grid_ratio = 0.0;       // max / min kappa over the N sweep
  double max_agreement = 0.0;    // worst dense/power disagreement
};

/// Domain length used for N grid points under cfg.grid_hold.
double kappa_length(const KappaConfig& cfg, int grid_points);
/// Euler matrix E for (N, N_t); the state is irrelevant to E.
SparseMatrix kappa_matrix(const KappaConfig& cfg, int grid_points, int timesteps);
KappaRow kappa_point(const KappaConfig& cfg, const std::string& sweep, int grid_points,
                     int timesteps);
KappaResult kappa_sweeps(const KappaConfig& cfg);

// Polynomial degree --------------------------------------------------------

struct DegreeConfig {
  std::vector<double> kappas{4, 8, 16, 32, 64};
  double epsilon = 0.01;
  InversePolyOptions options;
  int jobs = 1;
};

struct DegreeResult {
  std::vector<DegreeRow> rows;
  double ratio_spread = 0.0;  // max / min of degree / (kappa ln kappa)
  bool nondecreasing = false;
};

DegreeResult degree_study(const DegreeConfig& cfg);

// Output -------------------------------------------------------------------
// CSV rows lead with the config fields, so every row is self-describing.

void write_csv(std::ostream& os, const StableConfig& cfg, const StableResult& r);
void write_csv(std::ostream& os, const SoundConfig& cfg, const SoundResult& r);
void write_csv(std::ostream& os, const TruncationConfig& cfg, const TruncationResult& r);
void write_csv(std::ostream& os, const KappaConfig& cfg, const KappaResult& r);
void write_csv(std::ostream& os, const DegreeConfig& cfg, const DegreeResult& r);

nlohmann::ordered_json to_json(const StableConfig& cfg, const StableResult& r);
nlohmann::ordered_json to_json(const SoundConfig& cfg, const SoundResult& r);
nlohmann::ordered_json to_json(const TruncationConfig& cfg, const TruncationResult& r);
nlohmann::ordered_json to_json(const KappaConfig& cfg, const KappaResult& r);
nlohmann::ordered_json to_json(const DegreeConfig& cfg, const DegreeResult& r);

/// Runs fn(i) for i in [0, n) on at most `jobs` threads; results land by index.
/// The first exception (lowest index) is rethrown after all workers finish.
template <class T, class Fn>
std::vector<T> parallel_map(std::size_t n, int jobs, Fn fn);

}  // namespace swe

#include "swe_carleman/detail/parallel.hpp"
