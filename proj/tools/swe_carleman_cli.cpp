// swe-carleman: build, solve and benchmark the Carleman-linearized D1Q3
// shallow-water model.
//
// Exit codes: 0 success, 1 runtime failure (instability, non-convergence),
// 2 invalid parameters, config or missing input, 3 solve residual above tolerance.

#include "swe_carleman/bench.hpp"
#include "swe_carleman/euler_lse.hpp"
#include "swe_carleman/format.hpp"
#include "swe_carleman/matrix_market.hpp"

#include <CLI11.hpp>
#include <json.hpp>

#include <cstdlib>
#include <filesystem>
#include <fstream>
#include <iostream>
#include <map>

namespace fs = std::filesystem;
using json = nlohmann::ordered_json;

namespace {

class UsageError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

constexpr int kExitRuntime = 1;
constexpr int kExitUsage = 2;
constexpr int kExitResidual = 3;

// Applies a JSON config object to a (sub)command after parsing: keys are
// long option names with '_' or '-', command-line values take precedence,
// and unknown keys are rejected.
void apply_config(CLI::App& app, const std::string& path) {
  if (path.empty()) return;
  std::ifstream is(path);
  if (!is) throw UsageError("cannot open config file " + path);
  json cfg;
  try {
    cfg = json::parse(is);
  } catch (const json::parse_error& e) {
    throw UsageError("config " + path + ": " + e.what());
  }
  if (!cfg.is_object()) throw UsageError("config " + path + ": top level must be an object");
  for (const auto& [key, value] : cfg.items()) {
    std::string name = key;
    for (char& c : name)
      if (c == '_') c = '-';
    CLI::Option* opt = app.get_option_no_throw("--" + name);
    if (opt == nullptr || name == "config")
      throw UsageError("config " + path + ": unknown key '" + key + "' for '" + app.get_name() + "'");
    if (opt->count() > 0) continue;
    std::vector<std::string> items;
    auto scalar = [&](const json& v) {
      if (v.is_string()) return v.get<std::string>();
      if (v.is_boolean()) return std::string(v.get<bool>() ? "true" : "false");
      if (v.is_number()) return v.dump();
      throw UsageError("config " + path + ": key '" + key + "' has an unsupported value");
    };
    if (value.is_array()) {
      for (const auto& v : value) items.push_back(scalar(v));
    } else {
      items.push_back(scalar(value));
    }
    try {
      for (const auto& s : items) opt->add_result(s);
      opt->run_callback();
    } catch (const CLI::Error& e) {
      throw UsageError("config " + path + ": key '" + key + "': " + e.what());
    }
  }
}

void require_file(const fs::path& p) {
  if (!fs::is_regular_file(p)) throw UsageError("missing input file: " + p.string());
}

json lattice_json() {
  using L = swe::LatticeD1Q3;
  return json{{"velocities", L::c}, {"weights", L::w}, {"sound_speed_sq", L::cs2}};
}

// --- build / solve --------------------------------------------------------

struct SystemOptions {
  int grid_points = 3;
  int timesteps = 1;
  double dt = 0.1;
  double tau = 1.0;
  double g = 2.0 / 3.0;
  double length = 1.0;
  std::string streaming = "physical";
  bool no_collision = false;
  bool no_streaming = false;
  double h0 = 1.0;
  double dh0 = 0.0;
  double u0 = 0.0;

  swe::PhysParams params() const {
    swe::PhysParams p;
    p.g = g;
    p.tau = tau;
    p.length = length;
    p.grid_points = grid_points;
    p.dt = dt;
    p.timesteps = timesteps;
    p.streaming = swe::streaming_scale_from_string(streaming);
    p.validate(true);
    return p;
  }

  swe::Dynamics dynamics() const { return {!no_collision, !no_streaming}; }

  // Depth h0 everywhere, raised by dh0 on the first half, uniform velocity u0.
  swe::DistributionField initial() const {
    std::vector<double> h(static_cast<std::size_t>(grid_points), h0), u(h.size(), u0);
    for (int a = 0; a < grid_points / 2; ++a) h[static_cast<std::size_t>(a)] += dh0;
    return swe::initial_field(h, u);
  }

  json to_json(const swe::PhysParams& p) const {
    return json{{"grid_points", p.grid_points},
                {"truncation_order", swe::kTruncationOrder},
                {"timesteps", p.timesteps},
                {"dt", p.dt},
                {"tau", p.tau},
                {"g", p.g},
                {"length", p.length},
                {"streaming_scale", swe::to_string(p.streaming)},
                {"collision_enabled", !no_collision},
                {"streaming_enabled", !no_streaming},
                {"initial_condition", {{"h0", h0}, {"dh0", dh0}, {"u0", u0}}},
                {"lattice", lattice_json()}};
  }
};

void add_system_options(CLI::App& app, SystemOptions& o) {
  app.add_option("--grid-points,-N", o.grid_points, "grid points N (>= 3)")->capture_default_str();
  app.add_option("--timesteps", o.timesteps, "Euler time steps N_t")->capture_default_str();
  app.add_option("--dt", o.dt, "time step")->capture_default_str();
  app.add_option("--tau", o.tau, "relaxation time")->capture_default_str();
  app.add_option("--g", o.g, "gravitational acceleration")->capture_default_str();
  app.add_option("--length", o.length, "domain length L")->capture_default_str();
  app.add_option("--streaming-scale", o.streaming, "physical: (N-1)/(2L), lattice: 1/dt")
      ->check(CLI::IsMember({"physical", "lattice"}))
      ->capture_default_str();
  app.add_flag("--no-collision", o.no_collision, "drop the collision term from the Carleman matrix");
  app.add_flag("--no-streaming", o.no_streaming, "drop the streaming term from the Carleman matrix");
  app.add_option("--h0", o.h0, "initial depth")->capture_default_str();
  app.add_option("--dh0", o.dh0, "depth added on the first half of the grid")->capture_default_str();
  app.add_option("--u0", o.u0, "initial velocity")->capture_default_str();
}

void write_json(const fs::path& path, const json& j) {
  swe::write_file_atomic(path, [&](std::ostream& os) { os << j.dump(2) << '\n'; });
}

int cmd_build(const SystemOptions& o, const fs::path& out) {
  const swe::PhysParams p = o.params();
  const swe::CarlemanMatrix C = swe::build_carleman(p, o.dynamics());
  const swe::EulerSystem sys = swe::assemble(C.total, swe::embed_state(o.initial()), p.dt, p.timesteps);
  fs::create_directories(out);
  swe::write_file_atomic(out / "carleman.mtx",
                         [&](std::ostream& os) { swe::write_matrix_market(os, C.total); });
  swe::write_file_atomic(out / "euler.mtx", [&](std::ostream& os) { swe::write_matrix_market(os, sys.E); });
  swe::write_file_atomic(out / "rhs.mtx", [&](std::ostream& os) { swe::write_matrix_market(os, sys.b); });
  json meta = o.to_json(p);
  meta["carleman_dim"] = C.dim();
  meta["euler_dim"] = sys.dim();
  meta["files"] = {{"carleman", "carleman.mtx"}, {"euler", "euler.mtx"}, {"rhs", "rhs.mtx"}};
  write_json(out / "metadata.json", meta);
  std::cout << "wrote " << (out / "euler.mtx").string() << " (dim " << sys.dim() << ")\n";
  return 0;
}

int cmd_solve(const SystemOptions& o, const std::string& system_dir, const std::string& method,
              double tolerance, const fs::path& out) {
  swe::EulerSystem sys;
  json meta;
  if (!system_dir.empty()) {
    const fs::path dir(system_dir);
    for (const char* f : {"metadata.json", "euler.mtx", "rhs.mtx"}) require_file(dir / f);
    std::ifstream ms(dir / "metadata.json");
    try {
      meta = json::parse(ms);
    } catch (const json::parse_error& e) {
      throw UsageError((dir / "metadata.json").string() + ": " + e.what());
    }
    sys.E = swe::read_matrix_market(dir / "euler.mtx");
    sys.b = swe::read_matrix_market_vector(dir / "rhs.mtx");
    sys.timesteps = meta.at("timesteps").get<int>();
    sys.dt = meta.at("dt").get<double>();
    sys.block_dim = static_cast<Eigen::Index>(
        swe::carleman_dimension(meta.at("grid_points").get<int>()));
    if (sys.E.rows() != sys.block_dim * (sys.timesteps + 1))
      throw UsageError("euler.mtx dimension " + std::to_string(sys.E.rows()) +
                       " does not match metadata.json");
  } else {
    const swe::PhysParams p = o.params();
    const swe::CarlemanMatrix C = swe::build_carleman(p, o.dynamics());
    sys = swe::assemble(C.total, swe::embed_state(o.initial()), p.dt, p.timesteps);
    meta = o.to_json(p);
  }
  const int N = meta.at("grid_points").get<int>();
  const swe::SolveReport rep = swe::solve(sys, swe::solve_method_from_string(method), tolerance);
  const swe::ObservableSeries obs = swe::extract_observables(rep.x, N, sys.timesteps);

  fs::create_directories(out);
  swe::write_file_atomic(out / "observables.csv",
                         [&](std::ostream& os) { swe::write_observables_csv(os, obs); });
  json report{{"method", swe::to_string(rep.method)},
              {"residual", rep.residual},
              {"tolerance", tolerance},
              {"seconds", rep.seconds},
              {"dim", sys.dim()},
              {"system", meta}};
  write_json(out / "solve_report.json", report);
  std::cout << "residual " << swe::fmt_double(rep.residual) << ", wrote "
            << (out / "observables.csv").string() << '\n';
  return 0;
}

// --- bench ----------------------------------------------------------------

template <class Cfg, class Result>
void write_bench(const fs::path& out, const std::string& stem, const Cfg& cfg, const Result& r) {
  fs::create_directories(out);
  swe::write_file_atomic(out / (stem + ".csv"), [&](std::ostream& os) { swe::write_csv(os, cfg, r); });
  json j = swe::to_json(cfg, r);
  j["lattice"] = lattice_json();
  write_json(out / (stem + ".json"), j);
}

int resolve_jobs(int jobs) {
  if (jobs < 1) throw UsageError("--jobs must be >= 1");
  return jobs;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"Carleman-linearized lattice Boltzmann shallow-water model"};
  app.require_subcommand(1);
  int jobs = 1;
  app.add_option("--jobs,-j", jobs, "worker cap for sweeps")->envname("SWE_CARLEMAN_JOBS")->capture_default_str();

  // build
  SystemOptions build_opts;
  std::string build_out = "system", build_config;
  auto* build = app.add_subcommand("build", "write the Carleman and Euler matrices (Matrix Market) and metadata");
  build->add_option("--config", build_config, "JSON config; flags override it");
  add_system_options(*build, build_opts);
  build->add_option("--out,-o", build_out, "output directory")->capture_default_str();

  // solve
  SystemOptions solve_opts;
  std::string solve_out = "solution", solve_config, system_dir, method = "block_forward";
  double tolerance = swe::kSolveTolerance;
  auto* solve = app.add_subcommand("solve", "solve the Euler system and write observables");
  solve->add_option("--config", solve_config, "JSON config; flags override it");
  add_system_options(*solve, solve_opts);
  solve->add_option("--system", system_dir, "directory written by 'build' (otherwise built in memory)");
  solve->add_option("--method", method)
      ->check(CLI::IsMember({"block_forward", "sparse_direct"}))
      ->capture_default_str();
  solve->add_option("--tolerance", tolerance, "maximum relative residual")->capture_default_str();
  solve->add_option("--out,-o", solve_out, "output directory")->capture_default_str();

  // bench
  auto* bench = app.add_subcommand("bench", "validation studies");
  bench->require_subcommand(1);
  std::string bench_out = "bench";
  std::map<std::string, std::string> bench_config;

  swe::StableConfig stable;
  std::string stable_streaming = "physical", stable_method = "block_forward";
  bool stable_no_collision = false, stable_no_streaming = false;
  auto* b_stable = bench->add_subcommand("stable", "uniform-depth error after N_t steps");
  b_stable->add_option("--config", bench_config["stable"], "JSON config; flags override it");
  b_stable->add_option("--h0", stable.h0, "depths")->delimiter(',')->capture_default_str();
  b_stable->add_option("--grid-points,-N", stable.grid_points)->capture_default_str();
  b_stable->add_option("--timesteps", stable.timesteps)->capture_default_str();
  b_stable->add_option("--dt", stable.dt)->capture_default_str();
  b_stable->add_option("--g", stable.g)->capture_default_str();
  b_stable->add_option("--tau", stable.tau)->capture_default_str();
  b_stable->add_option("--length", stable.length)->capture_default_str();
  b_stable->add_option("--streaming-scale", stable_streaming)->check(CLI::IsMember({"physical", "lattice"}))->capture_default_str();
  b_stable->add_option("--method", stable_method)->check(CLI::IsMember({"block_forward", "sparse_direct"}))->capture_default_str();
  b_stable->add_flag("--no-collision", stable_no_collision);
  b_stable->add_flag("--no-streaming", stable_no_streaming);
  b_stable->add_option("--out,-o", bench_out, "output directory")->capture_default_str();

  swe::SoundConfig sound;
  std::string sound_streaming = "physical", sound_sim = "carleman";
  double sound_dt_opt = 0.0, sound_tau_opt = 0.0;
  auto* b_sound = bench->add_subcommand("sound-speed", "wave speed of a half-domain step");
  b_sound->add_option("--config", bench_config["sound-speed"], "JSON config; flags override it");
  b_sound->add_option("--h0", sound.h0, "depths")->delimiter(',')->capture_default_str();
  b_sound->add_option("--dh0-frac", sound.dh0_frac)->capture_default_str();
  b_sound->add_option("--grid-points,-N", sound.grid_points)->capture_default_str();
  b_sound->add_option("--length", sound.length)->capture_default_str();
  b_sound->add_option("--g", sound.g)->capture_default_str();
  b_sound->add_option("--cfl", sound.cfl, "dt = cfl (L/(N-1)) / sqrt(g h0)")->capture_default_str();
  b_sound->add_option("--dt", sound_dt_opt, "fixed dt instead of the CFL rule");
  b_sound->add_option("--tau", sound_tau_opt, "fixed tau instead of tau-factor * largest dt");
  b_sound->add_option("--tau-factor", sound.tau_factor)->capture_default_str();
  b_sound->add_option("--max-steps", sound.max_steps)->capture_default_str();
  b_sound->add_option("--streaming-scale", sound_streaming)->check(CLI::IsMember({"physical", "lattice"}))->capture_default_str();
  b_sound->add_option("--simulator", sound_sim)->check(CLI::IsMember({"carleman", "reference"}))->capture_default_str();
  b_sound->add_option("--out,-o", bench_out, "output directory")->capture_default_str();

  swe::TruncationConfig trunc;
  std::string trunc_mode = "normalized", trunc_streaming = "physical";
  auto* b_trunc = bench->add_subcommand("truncation", "Carleman vs nonlinear reference against perturbation size");
  b_trunc->add_option("--config", bench_config["truncation"], "JSON config; flags override it");
  b_trunc->add_option("--deviations", trunc.deviations)->delimiter(',')->capture_default_str();
  b_trunc->add_option("--mode", trunc_mode)->check(CLI::IsMember({"normalized", "physical"}))->capture_default_str();
  b_trunc->add_option("--base-height", trunc.base_height, "physical mode only")->capture_default_str();
  b_trunc->add_option("--grid-points,-N", trunc.grid_points)->capture_default_str();
  b_trunc->add_option("--timesteps", trunc.timesteps)->capture_default_str();
  b_trunc->add_option("--dt", trunc.dt)->capture_default_str();
  b_trunc->add_option("--g", trunc.g)->capture_default_str();
  b_trunc->add_option("--tau", trunc.tau)->capture_default_str();
  b_trunc->add_option("--length", trunc.length)->capture_default_str();
  b_trunc->add_option("--streaming-scale", trunc_streaming)->check(CLI::IsMember({"physical", "lattice"}))->capture_default_str();
  b_trunc->add_option("--out,-o", bench_out, "output directory")->capture_default_str();

  swe::KappaConfig kappa;
  std::string kappa_streaming = "physical", kappa_hold = "spacing";
  int dense_limit = static_cast<int>(kappa.dense_limit);
  bool no_cross_check = false;
  auto* b_kappa = bench->add_subcommand("kappa", "condition number of E against N_t and N");
  b_kappa->add_option("--config", bench_config["kappa"], "JSON config; flags override it");
  b_kappa->add_option("--timesteps", kappa.timesteps, "N_t sweep")->delimiter(',')->capture_default_str();
  b_kappa->add_option("--timesteps-grid-points", kappa.timesteps_grid_points, "N during the N_t sweep")->capture_default_str();
  b_kappa->add_option("--grid-points", kappa.grid_points, "N sweep")->delimiter(',')->capture_default_str();
  b_kappa->add_option("--grid-timesteps", kappa.grid_timesteps, "N_t during the N sweep")->capture_default_str();
  b_kappa->add_option("--grid-hold", kappa_hold, "held fixed in the N sweep")->check(CLI::IsMember({"spacing", "length"}))->capture_default_str();
  b_kappa->add_option("--dt", kappa.dt)->capture_default_str();
  b_kappa->add_option("--g", kappa.g)->capture_default_str();
  b_kappa->add_option("--tau", kappa.tau)->capture_default_str();
  b_kappa->add_option("--length", kappa.length)->capture_default_str();
  b_kappa->add_option("--streaming-scale", kappa_streaming)->check(CLI::IsMember({"physical", "lattice"}))->capture_default_str();
  b_kappa->add_option("--dense-limit", dense_limit, "largest dim for the dense SVD")->capture_default_str();
  b_kappa->add_flag("--no-cross-check", no_cross_check, "skip power iteration where the dense SVD runs");
  b_kappa->add_option("--power-tolerance", kappa.power.tolerance)->capture_default_str();
  b_kappa->add_option("--power-max-iterations", kappa.power.max_iterations)->capture_default_str();
  b_kappa->add_option("--out,-o", bench_out, "output directory")->capture_default_str();

  swe::DegreeConfig degree;
  bool dump_coefficients = false;
  auto* b_degree = bench->add_subcommand("qsvt-degree", "minimal inverse-polynomial degree against kappa");
  b_degree->add_option("--config", bench_config["qsvt-degree"], "JSON config; flags override it");
  b_degree->add_option("--kappas", degree.kappas)->delimiter(',')->capture_default_str();
  b_degree->add_option("--eps,--epsilon", degree.epsilon)->capture_default_str();
  b_degree->add_option("--degree-cap", degree.options.degree_cap)->capture_default_str();
  b_degree->add_option("--samples", degree.options.samples_per_interval, "samples per interval")->capture_default_str();
  b_degree->add_flag("--dump-coefficients", dump_coefficients, "also write Chebyshev coefficients per kappa");
  b_degree->add_option("--out,-o", bench_out, "output directory")->capture_default_str();

  try {
    app.parse(argc, argv);
  } catch (const CLI::CallForHelp& e) {
    return app.exit(e);
  } catch (const CLI::CallForAllHelp& e) {
    return app.exit(e);
  } catch (const CLI::ParseError& e) {
    app.exit(e);
    return kExitUsage;
  }

  try {
    jobs = resolve_jobs(jobs);
    if (build->parsed()) {
      apply_config(*build, build_config);
      return cmd_build(build_opts, build_out);
    }
    if (solve->parsed()) {
      apply_config(*solve, solve_config);
      return cmd_solve(solve_opts, system_dir, method, tolerance, solve_out);
    }
    if (b_stable->parsed()) {
      apply_config(*b_stable, bench_config["stable"]);
      stable.streaming = swe::streaming_scale_from_string(stable_streaming);
      stable.method = swe::solve_method_from_string(stable_method);
      stable.dynamics = {!stable_no_collision, !stable_no_streaming};
      stable.jobs = jobs;
      const auto r = swe::stable_config(stable);
      write_bench(bench_out, "stable", stable, r);
      std::cout << "rel_error fit slope " << swe::fmt_double(r.fit.slope) << ", R^2 "
                << swe::fmt_double(r.fit.r2) << '\n';
    } else if (b_sound->parsed()) {
      apply_config(*b_sound, bench_config["sound-speed"]);
      if (b_sound->get_option("--dt")->count() > 0) sound.dt = sound_dt_opt;
      if (b_sound->get_option("--tau")->count() > 0) sound.tau = sound_tau_opt;
      sound.streaming = swe::streaming_scale_from_string(sound_streaming);
      sound.simulator = swe::simulator_from_string(sound_sim);
      sound.jobs = jobs;
      const auto r = swe::sound_speed(sound);
      write_bench(bench_out, "sound_speed", sound, r);
      for (const auto& row : r.rows)
        std::cout << "h0 " << swe::fmt_double(row.h0) << ": v_measured "
                  << swe::fmt_double(row.v_measured) << ", v_analytic "
                  << swe::fmt_double(row.v_analytic) << '\n';
    } else if (b_trunc->parsed()) {
      apply_config(*b_trunc, bench_config["truncation"]);
      trunc.mode = swe::height_mode_from_string(trunc_mode);
      trunc.streaming = swe::streaming_scale_from_string(trunc_streaming);
      trunc.jobs = jobs;
      const auto r = swe::truncation_error_study(trunc);
      write_bench(bench_out, "truncation", trunc, r);
      std::cout << "log-log slope " << swe::fmt_double(r.fit.slope) << '\n';
    } else if (b_kappa->parsed()) {
      apply_config(*b_kappa, bench_config["kappa"]);
      kappa.streaming = swe::streaming_scale_from_string(kappa_streaming);
      kappa.grid_hold = swe::grid_hold_from_string(kappa_hold);
      kappa.dense_limit = dense_limit;
      kappa.cross_check = !no_cross_check;
      kappa.jobs = jobs;
      const auto r = swe::kappa_sweeps(kappa);
      write_bench(bench_out, "kappa", kappa, r);
      std::cout << "kappa vs N_t R^2 " << swe::fmt_double(r.timestep_fit.r2)
                << ", kappa max/min over N " << swe::fmt_double(r.grid_ratio) << '\n';
    } else if (b_degree->parsed()) {
      apply_config(*b_degree, bench_config["qsvt-degree"]);
      degree.jobs = jobs;
      const auto r = swe::degree_study(degree);
      write_bench(bench_out, "qsvt_degree", degree, r);
      if (dump_coefficients)
        for (double k : degree.kappas) {
          const auto p = swe::inverse_poly(k, degree.epsilon, degree.options);
          swe::write_file_atomic(fs::path(bench_out) / ("qsvt_coefficients_kappa_" + swe::fmt_double(k) + ".csv"),
                                 [&](std::ostream& os) { swe::write_coefficients_csv(os, p); });
        }
      for (const auto& row : r.rows)
        std::cout << "kappa " << swe::fmt_double(row.kappa) << ": degree " << row.degree << '\n';
    }
    return 0;
  } catch (const swe::ResidualError& e) {
    std::cerr << "error: " << e.what() << '\n';
    return kExitResidual;
  } catch (const UsageError& e) {
    std::cerr << "error: " << e.what() << '\n';
    return kExitUsage;
  } catch (const std::invalid_argument& e) {
    std::cerr << "error: " << e.what() << '\n';
    return kExitUsage;
  } catch (const std::domain_error& e) {
    std::cerr << "error: " << e.what() << '\n';
    return kExitUsage;
  } catch (const std::out_of_range& e) {
    std::cerr << "error: " << e.what() << '\n';
    return kExitUsage;
  } catch (const json::exception& e) {
    std::cerr << "error: " << e.what() << '\n';
    return kExitUsage;
  } catch (const std::exception& e) {
    std::cerr << "error: " << e.what() << '\n';
    return kExitRuntime;
  }
}
