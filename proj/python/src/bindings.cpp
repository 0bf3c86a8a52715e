// Python bindings. Sparse matrices cross as scipy.sparse.csr_matrix, fields as
// (N, 3) float arrays, benchmark summaries as JSON strings (parsed in __init__).

#include "swe_carleman/bench.hpp"
#include "swe_carleman/carleman.hpp"
#include "swe_carleman/euler_lse.hpp"
#include "swe_carleman/solver.hpp"

#include <pybind11/eigen.h>
#include <pybind11/pybind11.h>
#include <pybind11/stl.h>

namespace py = pybind11;
using namespace swe;

namespace {

PhysParams make_params(int grid_points, double dt, int timesteps, double tau, double g, double length,
                       const std::string& streaming) {
  PhysParams p;
  p.grid_points = grid_points;
  p.dt = dt;
  p.timesteps = timesteps;
  p.tau = tau;
  p.g = g;
  p.length = length;
  p.streaming = streaming_scale_from_string(streaming);
  p.validate(false);
  return p;
}

py::dict observables_dict(const ObservableSeries& s) {
  const auto steps = static_cast<Eigen::Index>(s.h.size());
  Eigen::MatrixXd h(steps, s.grid_points), u(steps, s.grid_points);
  for (Eigen::Index j = 0; j < steps; ++j) {
    h.row(j) = s.h[static_cast<std::size_t>(j)].transpose();
    u.row(j) = s.u[static_cast<std::size_t>(j)].transpose();
  }
  py::dict d;
  d["h"] = h;
  d["u"] = u;
  return d;
}

}  // namespace

PYBIND11_MODULE(_swe_carleman, m) {
  m.doc() = "Carleman-linearized D1Q3 shallow-water model";

  py::register_exception<InstabilityError>(m, "InstabilityError", PyExc_RuntimeError);
  py::register_exception<ResidualError>(m, "ResidualError", PyExc_RuntimeError);
  py::register_exception<ConvergenceError>(m, "ConvergenceError", PyExc_RuntimeError);
  py::register_exception<DegreeCapError>(m, "DegreeCapError", PyExc_RuntimeError);

  m.attr("WEIGHTS") = LatticeD1Q3::w;
  m.attr("VELOCITIES") = LatticeD1Q3::c;
  m.attr("SOUND_SPEED_SQ") = LatticeD1Q3::cs2;

  m.def("equilibrium", &equilibrium, py::arg("h"), py::arg("u"), py::arg("g") = 2.0 / 3.0);
  m.def(
      "initial_field",
      [](const std::vector<double>& h, const std::vector<double>& u) { return initial_field(h, u); },
      py::arg("h"), py::arg("u"));
  m.def(
      "macro_state",
      [](const DistributionField& f) {
        const auto s = macro_state(f);
        return py::make_tuple(s.h, s.u);
      },
      py::arg("field"));
  m.def("carleman_dimension", [](int n) { return carleman_dimension(n); }, py::arg("grid_points"));

  m.def(
      "build_carleman",
      [](int grid_points, double dt, double tau, double g, double length, const std::string& streaming,
         bool collision, bool with_streaming) {
        const auto p = make_params(grid_points, dt, 1, tau, g, length, streaming);
        const auto C = build_carleman(p, {collision, with_streaming});
        py::dict d;
        d["collision"] = C.collision;
        d["streaming"] = C.streaming;
        d["total"] = C.total;
        return d;
      },
      py::arg("grid_points"), py::arg("dt") = 0.1, py::arg("tau") = 1.0, py::arg("g") = 2.0 / 3.0,
      py::arg("length") = 1.0, py::arg("streaming_scale") = "physical", py::arg("collision") = true,
      py::arg("streaming") = true);

  m.def("embed_state", &embed_state, py::arg("field"));
  m.def("extract_state", &extract_state, py::arg("v"), py::arg("grid_points"));

  m.def(
      "assemble",
      [](const SparseMatrix& C, const Eigen::VectorXd& V0, double dt, int timesteps) {
        const auto sys = assemble(C, V0, dt, timesteps);
        return py::make_tuple(sys.E, sys.b);
      },
      py::arg("C"), py::arg("V0"), py::arg("dt"), py::arg("timesteps"));

  m.def(
      "simulate",
      [](const DistributionField& field, int timesteps, double dt, double tau, double g, double length,
         const std::string& streaming, const std::string& method, double tolerance) {
        const auto p = make_params(static_cast<int>(field.rows()), dt, timesteps, tau, g, length, streaming);
        p.validate(true);
        const auto C = build_carleman(p);
        const auto sys = assemble(C.total, embed_state(field), dt, timesteps);
        const auto rep = solve(sys, solve_method_from_string(method), tolerance);
        py::dict d = observables_dict(extract_observables(rep.x, p.grid_points, timesteps));
        d["residual"] = rep.residual;
        d["dim"] = sys.dim();
        return d;
      },
      py::arg("field"), py::arg("timesteps"), py::arg("dt") = 0.1, py::arg("tau") = 1.0,
      py::arg("g") = 2.0 / 3.0, py::arg("length") = 1.0, py::arg("streaming_scale") = "physical",
      py::arg("method") = "block_forward", py::arg("tolerance") = kSolveTolerance,
      "Carleman pipeline: returns per-step depth h and velocity u as (N_t + 1, N) arrays.");

  m.def(
      "reference_run",
      [](const DistributionField& field, int timesteps, double dt, double tau, double g, double length,
         const std::string& streaming, bool truncated) {
        const auto p = make_params(static_cast<int>(field.rows()), dt, timesteps, tau, g, length, streaming);
        const auto mode = truncated ? Nonlinearity::truncated : Nonlinearity::exact;
        return observables_dict(observables_from_fields(reference_run(field, p, timesteps, mode)));
      },
      py::arg("field"), py::arg("timesteps"), py::arg("dt") = 0.1, py::arg("tau") = 1.0,
      py::arg("g") = 2.0 / 3.0, py::arg("length") = 1.0, py::arg("streaming_scale") = "physical",
      py::arg("truncated") = false);

  m.def(
      "condition_number",
      [](const SparseMatrix& E, const std::string& method) {
        const auto r = method == "dense_svd" ? condition_number(Eigen::MatrixXd(E))
                                             : condition_number(E, kappa_method_from_string(method));
        py::dict d;
        d["sigma_max"] = r.sigma_max;
        d["sigma_min"] = r.sigma_min;
        d["kappa"] = r.kappa;
        d["method"] = to_string(r.method);
        return d;
      },
      py::arg("E"), py::arg("method") = "dense_svd");

  m.def(
      "inverse_poly",
      [](double kappa, double epsilon) {
        const auto p = inverse_poly(kappa, epsilon);
        py::dict d;
        d["kappa"] = p.kappa;
        d["epsilon"] = p.epsilon;
        d["degree"] = p.degree;
        d["achieved_error"] = p.achieved_error;
        d["max_magnitude"] = p.max_magnitude;
        d["coefficients"] = expand_odd(p.odd_coeffs);
        return d;
      },
      py::arg("kappa"), py::arg("epsilon"));
  m.def("chebyshev_eval", py::overload_cast<const std::vector<double>&, double>(&chebyshev_eval),
        py::arg("coefficients"), py::arg("x"));

  m.def(
      "_bench_stable",
      [](const std::vector<double>& h0, int grid_points, int timesteps, double dt, double g, int jobs) {
        StableConfig cfg;
        cfg.h0 = h0;
        cfg.grid_points = grid_points;
        cfg.timesteps = timesteps;
        cfg.dt = dt;
        cfg.g = g;
        cfg.jobs = jobs;
        py::gil_scoped_release release;
        return to_json(cfg, stable_config(cfg)).dump();
      });
  m.def("_bench_sound_speed",
        [](const std::vector<double>& h0, int grid_points, double g, const std::string& simulator, int jobs) {
          SoundConfig cfg;
          cfg.h0 = h0;
          cfg.grid_points = grid_points;
          cfg.g = g;
          cfg.simulator = simulator_from_string(simulator);
          cfg.jobs = jobs;
          py::gil_scoped_release release;
          return to_json(cfg, sound_speed(cfg)).dump();
        });
  m.def("_bench_truncation", [](const std::vector<double>& deviations, int timesteps, int jobs) {
    TruncationConfig cfg;
    cfg.deviations = deviations;
    cfg.timesteps = timesteps;
    cfg.jobs = jobs;
    py::gil_scoped_release release;
    return to_json(cfg, truncation_error_study(cfg)).dump();
  });
  m.def("_bench_kappa", [](const std::vector<int>& timesteps, const std::vector<int>& grid_points,
                           int grid_timesteps, int jobs) {
    KappaConfig cfg;
    cfg.timesteps = timesteps;
    cfg.grid_points = grid_points;
    cfg.grid_timesteps = grid_timesteps;
    cfg.jobs = jobs;
    py::gil_scoped_release release;
    return to_json(cfg, kappa_sweeps(cfg)).dump();
  });
  m.def("_bench_qsvt_degree", [](const std::vector<double>& kappas, double epsilon, int jobs) {
    DegreeConfig cfg;
    cfg.kappas = kappas;
    cfg.epsilon = epsilon;
    cfg.jobs = jobs;
    py::gil_scoped_release release;
    return to_json(cfg, degree_study(cfg)).dump();
  });
}
