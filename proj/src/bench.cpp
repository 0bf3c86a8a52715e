#include "swe_carleman/bench.hpp"

#include "swe_carleman/euler_lse.hpp"
#include "swe_carleman/format.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <ostream>
#include <stdexcept>

namespace swe {

using json = nlohmann::ordered_json;

LinearFit fit_linear(const std::vector<double>& x, const std::vector<double>& y) {
  if (x.size() != y.size()) throw std::invalid_argument("fit_linear: x and y differ in length");
  const std::size_t n = x.size();
  if (n < 2) throw std::invalid_argument("fit_linear: at least two points required");
  double mx = 0.0, my = 0.0;
  for (std::size_t i = 0; i < n; ++i) {
    mx += x[i];
    my += y[i];
  }
  mx /= static_cast<double>(n);
  my /= static_cast<double>(n);
  double sxx = 0.0, sxy = 0.0, syy = 0.0;
  for (std::size_t i = 0; i < n; ++i) {
    sxx += (x[i] - mx) * (x[i] - mx);
    sxy += (x[i] - mx) * (y[i] - my);
    syy += (y[i] - my) * (y[i] - my);
  }
  if (sxx == 0.0) throw std::invalid_argument("fit_linear: x values are all equal");
  LinearFit f;
  f.n = static_cast<int>(n);
  f.slope = sxy / sxx;
  f.intercept = my - f.slope * mx;
  for (std::size_t i = 0; i < n; ++i) {
    const double r = y[i] - (f.intercept + f.slope * x[i]);
    f.rss += r * r;
  }
  f.r2 = syy > 0.0 ? 1.0 - f.rss / syy : 1.0;
  return f;
}

LinearFit fit_loglog(const std::vector<double>& x, const std::vector<double>& y) {
  std::vector<double> lx, ly;
  for (std::size_t i = 0; i < x.size() && i < y.size(); ++i) {
    if (!(x[i] > 0.0) || !(y[i] > 0.0))
      throw std::domain_error("fit_loglog: non-positive value at index " + std::to_string(i));
    lx.push_back(std::log(x[i]));
    ly.push_back(std::log(y[i]));
  }
  if (x.size() != y.size()) throw std::invalid_argument("fit_loglog: x and y differ in length");
  return fit_linear(lx, ly);
}

json to_json(const LinearFit& f) {
  return json{{"slope", f.slope}, {"intercept", f.intercept}, {"r2", f.r2}, {"rss", f.rss},
              {"n", f.n}};
}

std::string to_string(HeightMode m) { return m == HeightMode::physical ? "physical" : "normalized"; }

HeightMode height_mode_from_string(const std::string& s) {
  if (s == "physical") return HeightMode::physical;
  if (s == "normalized") return HeightMode::normalized;
  throw std::invalid_argument("unknown height mode '" + s + "'");
}

double cfl_timestep(double cfl, double length, int grid_points, double g, double h0) {
  if (!(cfl > 0.0) || !(g > 0.0) || !(h0 > 0.0) || grid_points < 2 || !(length > 0.0))
    throw std::invalid_argument("cfl_timestep: cfl, g, h0, L > 0 and N >= 2 required");
  return cfl * (length / (grid_points - 1)) / std::sqrt(g * h0);
}

namespace {

double max_discrepancy(const ObservableSeries& a, const ObservableSeries& b) {
  double d = 0.0;
  for (std::size_t j = 0; j < a.h.size(); ++j) d = std::max(d, (a.h[j] - b.h[j]).cwiseAbs().maxCoeff());
  return d;
}

std::string bool_str(bool b) { return b ? "true" : "false"; }

}  // namespace

// Stable steady state ------------------------------------------------------

StableRow stable_point(const StableConfig& cfg, double h0, double dt, int timesteps) {
  if (!(h0 > 0.0)) throw std::invalid_argument("stable_config: h0 > 0 required");
  PhysParams p;
  p.g = cfg.g;
  p.tau = cfg.tau;
  p.length = cfg.length;
  p.grid_points = cfg.grid_points;
  p.dt = dt;
  p.timesteps = timesteps;
  p.streaming = cfg.streaming;
  p.validate(true);

  const std::vector<double> h(static_cast<std::size_t>(cfg.grid_points), h0);
  const std::vector<double> u(h.size(), 0.0);
  const CarlemanMatrix C = build_carleman(p, cfg.dynamics);
  const EulerSystem sys = assemble(C.total, embed_state(initial_field(h, u)), dt, timesteps);
  const SolveReport rep = solve(sys, cfg.method);
  const ObservableSeries obs = extract_observables(rep.x, cfg.grid_points, timesteps);
  if (!obs.h.back().allFinite())
    throw InstabilityError("stable_config: non-finite depth for h0=" + fmt_double(h0) +
                               ", dt=" + fmt_double(dt),
                           timesteps);

  StableRow row;
  row.h0 = h0;
  row.dt = dt;
  row.timesteps = timesteps;
  row.abs_error = (obs.h.back().array() - h0).abs().sum() / cfg.grid_points;
  row.rel_error = row.abs_error / h0;
  row.residual = rep.residual;
  return row;
}

StableResult stable_config(const StableConfig& cfg) {
  if (cfg.h0.empty()) throw std::invalid_argument("stable_config: empty h0 list");
  const std::size_t n = cfg.h0.size();
  // Points 0..n-1 run at (dt, N_t), points n..2n-1 at (dt/2, 2 N_t).
  auto all = parallel_map<StableRow>(2 * n, cfg.jobs, [&](std::size_t i) {
    const bool halved = i >= n;
    return stable_point(cfg, cfg.h0[i % n], halved ? cfg.dt / 2.0 : cfg.dt,
                        halved ? 2 * cfg.timesteps : cfg.timesteps);
  });
  StableResult r;
  r.rows.assign(all.begin(), all.begin() + static_cast<std::ptrdiff_t>(n));
  r.halved_rows.assign(all.begin() + static_cast<std::ptrdiff_t>(n), all.end());
  std::vector<double> x, y;
  for (const auto& row : r.rows) {
    x.push_back(row.h0);
    y.push_back(row.rel_error);
  }
  if (n >= 2) r.fit = fit_linear(x, y);
  r.strictly_increasing = true;
  for (std::size_t i = 1; i < n; ++i)
    if (!(r.rows[i].h0 > r.rows[i - 1].h0 && r.rows[i].rel_error > r.rows[i - 1].rel_error))
      r.strictly_increasing = false;
  for (std::size_t i = 0; i < n; ++i)
    r.halving_ratios.push_back(r.halved_rows[i].abs_error > 0.0
                                   ? r.rows[i].abs_error / r.halved_rows[i].abs_error
                                   : std::numeric_limits<double>::quiet_NaN());
  return r;
}

// Sound speed --------------------------------------------------------------

std::string to_string(Simulator s) { return s == Simulator::carleman ? "carleman" : "reference"; }

Simulator simulator_from_string(const std::string& s) {
  if (s == "carleman") return Simulator::carleman;
  if (s == "reference") return Simulator::reference;
  throw std::invalid_argument("unknown simulator '" + s + "'");
}

double sound_dt(const SoundConfig& cfg, double h0) {
  if (cfg.dt) return *cfg.dt;
  return cfl_timestep(cfg.cfl, cfg.length, cfg.grid_points, cfg.g, h0);
}

double sound_tau(const SoundConfig& cfg) {
  if (cfg.tau) return *cfg.tau;
  if (cfg.h0.empty()) throw std::invalid_argument("sound_speed: empty h0 list");
  double dt_max = 0.0;
  for (double h0 : cfg.h0)
    dt_max = std::max(dt_max, cfl_timestep(cfg.cfl, cfg.length, cfg.grid_points, cfg.g, h0));
  return cfg.tau_factor * dt_max;
}

Eigen::Index peak_index(const Eigen::VectorXd& h) {
  if (h.size() == 0) throw std::invalid_argument("peak_index: empty vector");
  Eigen::Index best = 0;
  for (Eigen::Index a = 1; a < h.size(); ++a)
    if (h[a] >= h[best]) best = a;
  return best;
}

SoundRow sound_point(const SoundConfig& cfg, double h0) {
  if (!(h0 > 0.0)) throw std::invalid_argument("sound_speed: h0 > 0 required");
  if (!(cfg.dh0_frac > 0.0)) throw std::invalid_argument("sound_speed: dh0_frac > 0 required");
  if (cfg.grid_points < 4 || cfg.grid_points % 2 != 0)
    throw std::invalid_argument("sound_speed: even N >= 4 required");
  const int N = cfg.grid_points;
  PhysParams p;
  p.g = cfg.g;
  p.tau = sound_tau(cfg);
  p.length = cfg.length;
  p.grid_points = N;
  p.dt = sound_dt(cfg, h0);
  p.timesteps = cfg.max_steps;
  p.streaming = cfg.streaming;
  p.validate(true);

  // Raised half [0, N/2), undisturbed half [N/2, N).
  std::vector<double> h(static_cast<std::size_t>(N), h0), u(h.size(), 0.0);
  for (int a = 0; a < N / 2; ++a) h[static_cast<std::size_t>(a)] = h0 * (1.0 + cfg.dh0_frac);
  const DistributionField f0 = initial_field(h, u);
  CarlemanMatrix C;
  Eigen::VectorXd V;
  DistributionField f;
  if (cfg.simulator == Simulator::carleman) {
    C = build_carleman(p);
    V = embed_state(f0);
  } else {
    f = f0;
  }

  // The raised block splits into two counter-propagating halves; the peak
  // enters [N/2, N) once they stop overlapping, i.e. after N/4 grid points.
  int found = 0;
  Eigen::VectorXd hs(N);
  for (int step = 1; step <= cfg.max_steps; ++step) {
    if (cfg.simulator == Simulator::carleman) {
      V += p.dt * (C.total * V);
      for (int a = 0; a < N; ++a) hs[a] = V[3 * a] + V[3 * a + 1] + V[3 * a + 2];
    } else {
      f = reference_step(f, p, Nonlinearity::exact, step);
      hs = f.rowwise().sum();
    }
    if (!hs.allFinite())
      throw InstabilityError("sound_speed: non-finite state for h0=" + fmt_double(h0) +
                                 ", dt=" + fmt_double(p.dt) + ", tau=" + fmt_double(p.tau),
                             step);
    if (peak_index(hs) >= N / 2) {
      found = step;
      break;
    }
  }
  if (found == 0)
    throw std::runtime_error("sound_speed: no propagation detected within " +
                             std::to_string(cfg.max_steps) + " steps for h0=" + fmt_double(h0));

  SoundRow row;
  row.h0 = h0;
  row.dt = p.dt;
  row.tau = p.tau;
  row.peak_steps = found;
  row.steps_per_point = found / (N / 4.0);
  row.v_measured = (cfg.length / N) / (row.steps_per_point * p.dt);
  row.v_analytic = std::sqrt(cfg.g * h0);
  row.rel_error = std::abs(row.v_measured - row.v_analytic) / row.v_analytic;
  return row;
}

SoundResult sound_speed(const SoundConfig& cfg) {
  if (cfg.h0.empty()) throw std::invalid_argument("sound_speed: empty h0 list");
  SoundResult r;
  r.rows = parallel_map<SoundRow>(cfg.h0.size(), cfg.jobs,
                                  [&](std::size_t i) { return sound_point(cfg, cfg.h0[i]); });
  if (r.rows.size() >= 2) {
    std::vector<double> x, y;
    for (const auto& row : r.rows) {
      x.push_back(row.h0);
      y.push_back(row.v_measured);
    }
    r.fit = fit_loglog(x, y);
  }
  return r;
}

// Truncation error ---------------------------------------------------------

double truncation_base_height(const TruncationConfig& cfg) {
  return cfg.mode == HeightMode::normalized ? 1.0 : cfg.base_height;
}

TruncationRow truncation_point(const TruncationConfig& cfg, double deviation) {
  if (!(deviation >= 0.0)) throw std::invalid_argument("truncation: deviation >= 0 required");
  PhysParams p;
  p.g = cfg.g;
  p.tau = cfg.tau;
  p.length = cfg.length;
  p.grid_points = cfg.grid_points;
  p.dt = cfg.dt;
  p.timesteps = cfg.timesteps;
  p.streaming = cfg.streaming;
  p.validate(true);

  const double base = truncation_base_height(cfg);
  std::vector<double> h(static_cast<std::size_t>(cfg.grid_points), base), u(h.size(), 0.0);
  for (int a = 0; a < cfg.grid_points / 2; ++a) h[static_cast<std::size_t>(a)] = base + deviation;
  const DistributionField f0 = initial_field(h, u);

  const CarlemanMatrix C = build_carleman(p);
  const EulerSystem sys = assemble(C.total, embed_state(f0), cfg.dt, cfg.timesteps);
  const ObservableSeries carleman =
      extract_observables(solve(sys, SolveMethod::block_forward).x, cfg.grid_points, cfg.timesteps);
  const ObservableSeries exact =
      observables_from_fields(reference_run(f0, p, cfg.timesteps, Nonlinearity::exact));
  const ObservableSeries truncated =
      observables_from_fields(reference_run(f0, p, cfg.timesteps, Nonlinearity::truncated));

  TruncationRow row;
  row.deviation = deviation;
  row.discrepancy = max_discrepancy(carleman, exact);
  row.discrepancy_truncated = max_discrepancy(carleman, truncated);
  return row;
}

TruncationResult truncation_error_study(const TruncationConfig& cfg) {
  if (cfg.deviations.empty()) throw std::invalid_argument("truncation: empty deviation list");
  TruncationResult r;
  r.rows = parallel_map<TruncationRow>(cfg.deviations.size(), cfg.jobs, [&](std::size_t i) {
    return truncation_point(cfg, cfg.deviations[i]);
  });
  std::vector<double> x, y;
  for (const auto& row : r.rows)
    if (row.deviation > 0.0) {
      x.push_back(row.deviation);
      y.push_back(row.discrepancy);
    }
  if (x.size() >= 2) r.fit = fit_loglog(x, y);
  return r;
}

// Condition number ---------------------------------------------------------

std::string to_string(GridHold h) { return h == GridHold::spacing ? "spacing" : "length"; }

GridHold grid_hold_from_string(const std::string& s) {
  if (s == "spacing") return GridHold::spacing;
  if (s == "length") return GridHold::length;
  throw std::invalid_argument("unknown grid hold '" + s + "'");
}

double kappa_length(const KappaConfig& cfg, int grid_points) {
  if (cfg.grid_hold == GridHold::length) return cfg.length;
  if (cfg.timesteps_grid_points < 2) throw std::invalid_argument("kappa: reference N >= 2 required");
  return cfg.length * (grid_points - 1) / (cfg.timesteps_grid_points - 1);
}

SparseMatrix kappa_matrix(const KappaConfig& cfg, int grid_points, int timesteps) {
  PhysParams p;
  p.g = cfg.g;
  p.tau = cfg.tau;
  p.length = kappa_length(cfg, grid_points);
  p.grid_points = grid_points;
  p.dt = cfg.dt;
  p.timesteps = timesteps;
  p.streaming = cfg.streaming;
  p.validate(true);
  const CarlemanMatrix C = build_carleman(p);
  return assemble(C.total, Eigen::VectorXd::Zero(C.dim()), cfg.dt, timesteps).E;
}

KappaRow kappa_point(const KappaConfig& cfg, const std::string& sweep, int grid_points,
                     int timesteps) {
  const SparseMatrix E = kappa_matrix(cfg, grid_points, timesteps);
  KappaRow row;
  row.sweep = sweep;
  row.grid_points = grid_points;
  row.timesteps = timesteps;
  if (E.rows() <= cfg.dense_limit) {
    row.report = condition_number(E, KappaMethod::dense_svd);
    if (cfg.cross_check) {
      row.cross = condition_number(E, KappaMethod::power_iter, cfg.power);
      row.agreement = std::abs(row.report.kappa - row.cross->kappa) / row.report.kappa;
    }
  } else {
    row.report = condition_number(E, KappaMethod::power_iter, cfg.power);
  }
  return row;
}

KappaResult kappa_sweeps(const KappaConfig& cfg) {
  struct Point {
    std::string sweep;
    int n, nt;
  };
  std::vector<Point> points;
  for (int nt : cfg.timesteps) points.push_back({"timesteps", cfg.timesteps_grid_points, nt});
  for (int n : cfg.grid_points) points.push_back({"grid_points", n, cfg.grid_timesteps});
  // The two sweeps may share a point; each distinct (N, N_t) is computed once.
  std::vector<std::size_t> unique_of(points.size());
  std::vector<std::size_t> unique;
  for (std::size_t i = 0; i < points.size(); ++i) {
    std::size_t u = 0;
    while (u < unique.size() &&
           !(points[unique[u]].n == points[i].n && points[unique[u]].nt == points[i].nt))
      ++u;
    if (u == unique.size()) unique.push_back(i);
    unique_of[i] = u;
  }
  const auto computed = parallel_map<KappaRow>(unique.size(), cfg.jobs, [&](std::size_t u) {
    const Point& pt = points[unique[u]];
    return kappa_point(cfg, pt.sweep, pt.n, pt.nt);
  });
  std::vector<KappaRow> rows;
  for (std::size_t i = 0; i < points.size(); ++i) {
    rows.push_back(computed[unique_of[i]]);
    rows.back().sweep = points[i].sweep;
  }

  KappaResult r;
  const auto split = static_cast<std::ptrdiff_t>(cfg.timesteps.size());
  r.timestep_rows.assign(rows.begin(), rows.begin() + split);
  r.grid_rows.assign(rows.begin() + split, rows.end());
  if (r.timestep_rows.size() >= 2) {
    std::vector<double> x, y;
    for (const auto& row : r.timestep_rows) {
      x.push_back(row.timesteps);
      y.push_back(row.report.kappa);
    }
    r.timestep_fit = fit_linear(x, y);
  }
  if (!r.grid_rows.empty()) {
    double lo = std::numeric_limits<double>::infinity(), hi = 0.0;
    for (const auto& row : r.grid_rows) {
      lo = std::min(lo, row.report.kappa);
      hi = std::max(hi, row.report.kappa);
    }
    r.grid_ratio = hi / lo;
  }
  for (const auto& row : rows)
    if (row.agreement) r.max_agreement = std::max(r.max_agreement, *row.agreement);
  return r;
}

// Polynomial degree --------------------------------------------------------

DegreeResult degree_study(const DegreeConfig& cfg) {
  if (cfg.kappas.empty()) throw std::invalid_argument("qsvt-degree: empty kappa list");
  DegreeResult r;
  r.rows = parallel_map<DegreeRow>(cfg.kappas.size(), cfg.jobs, [&](std::size_t i) {
    return degree_scaling({cfg.kappas[i]}, cfg.epsilon, cfg.options).front();
  });
  double lo = std::numeric_limits<double>::infinity(), hi = 0.0;
  r.nondecreasing = true;
  for (std::size_t i = 0; i < r.rows.size(); ++i) {
    lo = std::min(lo, r.rows[i].ratio);
    hi = std::max(hi, r.rows[i].ratio);
    if (i > 0 && r.rows[i].kappa >= r.rows[i - 1].kappa && r.rows[i].degree < r.rows[i - 1].degree)
      r.nondecreasing = false;
  }
  r.ratio_spread = hi / lo;
  return r;
}

// Output -------------------------------------------------------------------

void write_csv(std::ostream& os, const StableConfig& cfg, const StableResult& r) {
  os << "scenario,g,tau,L,N,streaming,collision_enabled,streaming_enabled,method,series,h0,dt,"
        "N_t,abs_error,rel_error,residual\n";
  auto emit = [&](const char* series, const std::vector<StableRow>& rows) {
    for (const auto& row : rows)
      os << "stable," << fmt_double(cfg.g) << ',' << fmt_double(cfg.tau) << ','
         << fmt_double(cfg.length) << ',' << cfg.grid_points << ',' << to_string(cfg.streaming)
         << ',' << bool_str(cfg.dynamics.collision) << ',' << bool_str(cfg.dynamics.streaming)
         << ',' << to_string(cfg.method) << ',' << series << ',' << fmt_double(row.h0) << ','
         << fmt_double(row.dt) << ',' << row.timesteps << ',' << fmt_double(row.abs_error) << ','
         << fmt_double(row.rel_error) << ',' << fmt_double(row.residual) << '\n';
  };
  emit("base", r.rows);
  emit("halved_dt", r.halved_rows);
}

void write_csv(std::ostream& os, const SoundConfig& cfg, const SoundResult& r) {
  os << "scenario,simulator,g,L,N,dh0_frac,cfl,streaming,max_steps,h0,dt,tau,peak_steps,"
        "steps_per_point,v_measured,v_analytic,rel_error\n";
  for (const auto& row : r.rows)
    os << "sound-speed," << to_string(cfg.simulator) << ',' << fmt_double(cfg.g) << ',' << fmt_double(cfg.length) << ','
       << cfg.grid_points << ',' << fmt_double(cfg.dh0_frac) << ',' << fmt_double(cfg.cfl) << ','
       << to_string(cfg.streaming) << ',' << cfg.max_steps << ',' << fmt_double(row.h0) << ','
       << fmt_double(row.dt) << ',' << fmt_double(row.tau) << ',' << row.peak_steps << ','
       << fmt_double(row.steps_per_point) << ',' << fmt_double(row.v_measured) << ','
       << fmt_double(row.v_analytic) << ',' << fmt_double(row.rel_error) << '\n';
}

void write_csv(std::ostream& os, const TruncationConfig& cfg, const TruncationResult& r) {
  os << "scenario,mode,base_height,g,tau,L,N,N_t,dt,streaming,deviation,discrepancy,"
        "discrepancy_truncated\n";
  for (const auto& row : r.rows)
    os << "truncation," << to_string(cfg.mode) << ',' << fmt_double(truncation_base_height(cfg))
       << ',' << fmt_double(cfg.g) << ',' << fmt_double(cfg.tau) << ',' << fmt_double(cfg.length)
       << ',' << cfg.grid_points << ',' << cfg.timesteps << ',' << fmt_double(cfg.dt) << ','
       << to_string(cfg.streaming) << ',' << fmt_double(row.deviation) << ','
       << fmt_double(row.discrepancy) << ',' << fmt_double(row.discrepancy_truncated) << '\n';
}

void write_csv(std::ostream& os, const KappaConfig& cfg, const KappaResult& r) {
  os << "scenario,sweep,grid_hold,g,tau,L,dt,streaming,N,N_t,dim,sigma_max,sigma_min,kappa,"
        "method,kappa_power,agreement\n";
  auto emit = [&](const std::vector<KappaRow>& rows) {
    for (const auto& row : rows)
      os << "kappa," << row.sweep << ',' << to_string(cfg.grid_hold) << ',' << fmt_double(cfg.g)
         << ',' << fmt_double(cfg.tau) << ',' << fmt_double(kappa_length(cfg, row.grid_points))
         << ',' << fmt_double(cfg.dt) << ','
         << to_string(cfg.streaming) << ',' << row.grid_points << ',' << row.timesteps << ','
         << row.report.rows << ',' << fmt_double(row.report.sigma_max) << ','
         << fmt_double(row.report.sigma_min) << ',' << fmt_double(row.report.kappa) << ','
         << to_string(row.report.method) << ','
         << (row.cross ? fmt_double(row.cross->kappa) : std::string()) << ','
         << (row.agreement ? fmt_double(*row.agreement) : std::string()) << '\n';
  };
  emit(r.timestep_rows);
  emit(r.grid_rows);
}

void write_csv(std::ostream& os, const DegreeConfig& cfg, const DegreeResult& r) {
  (void)cfg;
  write_degree_csv(os, r.rows);
}

json to_json(const StableConfig& cfg, const StableResult& r) {
  json rows = json::array();
  for (std::size_t i = 0; i < r.rows.size(); ++i)
    rows.push_back({{"h0", r.rows[i].h0},
                    {"abs_error", r.rows[i].abs_error},
                    {"rel_error", r.rows[i].rel_error},
                    {"halved_dt_abs_error", r.halved_rows[i].abs_error},
                    {"halving_ratio", r.halving_ratios[i]}});
  return json{{"scenario", "stable"},
              {"config",
               {{"h0", cfg.h0},
                {"N", cfg.grid_points},
                {"N_t", cfg.timesteps},
                {"dt", cfg.dt},
                {"g", cfg.g},
                {"tau", cfg.tau},
                {"L", cfg.length},
                {"streaming_scale", to_string(cfg.streaming)},
                {"collision_enabled", cfg.dynamics.collision},
                {"streaming_enabled", cfg.dynamics.streaming},
                {"method", to_string(cfg.method)}}},
              {"fit_rel_error_vs_h0", to_json(r.fit)},
              {"strictly_increasing", r.strictly_increasing},
              {"rows", rows}};
}

json to_json(const SoundConfig& cfg, const SoundResult& r) {
  json rows = json::array();
  for (const auto& row : r.rows)
    rows.push_back({{"h0", row.h0},
                    {"dt", row.dt},
                    {"peak_steps", row.peak_steps},
                    {"v_measured", row.v_measured},
                    {"v_analytic", row.v_analytic},
                    {"rel_error", row.rel_error}});
  json c{{"h0", cfg.h0},          {"dh0_frac", cfg.dh0_frac},
         {"N", cfg.grid_points},  {"L", cfg.length},
         {"g", cfg.g},            {"cfl", cfg.cfl},
         {"tau", sound_tau(cfg)}, {"tau_factor", cfg.tau_factor},
         {"max_steps", cfg.max_steps}, {"streaming_scale", to_string(cfg.streaming)},
         {"simulator", to_string(cfg.simulator)}};
  c["dt"] = cfg.dt ? json(*cfg.dt) : json("cfl");
  return json{{"scenario", "sound-speed"},
              {"config", c},
              {"fit_loglog_v_vs_h0", r.rows.size() >= 2 ? to_json(r.fit) : json(nullptr)},
              {"rows", rows}};
}

json to_json(const TruncationConfig& cfg, const TruncationResult& r) {
  json rows = json::array();
  for (const auto& row : r.rows)
    rows.push_back({{"deviation", row.deviation},
                    {"discrepancy", row.discrepancy},
                    {"discrepancy_truncated", row.discrepancy_truncated}});
  return json{{"scenario", "truncation"},
              {"config",
               {{"deviations", cfg.deviations},
                {"mode", to_string(cfg.mode)},
                {"base_height", truncation_base_height(cfg)},
                {"N", cfg.grid_points},
                {"N_t", cfg.timesteps},
                {"dt", cfg.dt},
                {"g", cfg.g},
                {"tau", cfg.tau},
                {"L", cfg.length},
                {"streaming_scale", to_string(cfg.streaming)}}},
              {"fit_loglog_discrepancy_vs_deviation", r.fit.n >= 2 ? to_json(r.fit) : json(nullptr)},
              {"rows", rows}};
}

json to_json(const KappaConfig& cfg, const KappaResult& r) {
  auto rows_json = [](const std::vector<KappaRow>& rows) {
    json a = json::array();
    for (const auto& row : rows) {
      json j{{"N", row.grid_points},
             {"N_t", row.timesteps},
             {"dim", row.report.rows},
             {"kappa", row.report.kappa},
             {"method", to_string(row.report.method)}};
      if (row.agreement) j["dense_power_agreement"] = *row.agreement;
      a.push_back(j);
    }
    return a;
  };
  return json{{"scenario", "kappa"},
              {"config",
               {{"timesteps", cfg.timesteps},
                {"timesteps_N", cfg.timesteps_grid_points},
                {"grid_points", cfg.grid_points},
                {"grid_N_t", cfg.grid_timesteps},
                {"grid_hold", to_string(cfg.grid_hold)},
                {"dt", cfg.dt},
                {"g", cfg.g},
                {"tau", cfg.tau},
                {"L", cfg.length},
                {"streaming_scale", to_string(cfg.streaming)},
                {"dense_limit", cfg.dense_limit},
                {"power_tolerance", cfg.power.tolerance}}},
              {"fit_kappa_vs_timesteps",
               r.timestep_rows.size() >= 2 ? to_json(r.timestep_fit) : json(nullptr)},
              {"grid_kappa_max_over_min", r.grid_rows.empty() ? json(nullptr) : json(r.grid_ratio)},
              {"max_dense_power_disagreement", r.max_agreement},
              {"timestep_sweep", rows_json(r.timestep_rows)},
              {"grid_sweep", rows_json(r.grid_rows)}};
}

json to_json(const DegreeConfig& cfg, const DegreeResult& r) {
  json rows = json::array();
  for (const auto& row : r.rows)
    rows.push_back({{"kappa", row.kappa},
                    {"degree", row.degree},
                    {"achieved_error", row.achieved_error},
                    {"ratio_d_over_klogk", row.ratio}});
  return json{{"scenario", "qsvt-degree"},
              {"config",
               {{"kappas", cfg.kappas},
                {"epsilon", cfg.epsilon},
                {"degree_cap", cfg.options.degree_cap},
                {"samples_per_interval", cfg.options.samples_per_interval}}},
              {"ratio_max_over_min", r.ratio_spread},
              {"degree_nondecreasing", r.nondecreasing},
              {"rows", rows}};
}

}  // namespace swe
