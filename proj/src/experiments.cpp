// SPDX-License-Identifier: Apache-2.0

#include "msd/experiments.hpp"

#include <algorithm>
#include <cmath>
#include <cstdio>
#include <filesystem>
#include <fstream>
#include <random>
#include <set>

#include "msd/analysis.hpp"
#include "msd/integrate.hpp"
#include "msd/output.hpp"
#include "msd/solutions.hpp"

#ifndef MSD_VERSION
#define MSD_VERSION "unknown"
#endif

namespace msd
{

using nlohmann::json;
namespace fs = std::filesystem;

namespace
{

const std::set<std::string> kTags{"soliton-static", "soliton-moving", "vortex-single", "vortex-pair",
                                  "vortex-ring",    "stability-check", "appendix-demo"};
const std::set<std::string> kBcs{"msd", "l0", "1sd", "exact", "zero"};

constexpr double kInf = std::numeric_limits<double>::infinity();

Exec exec_of(const ExperimentConfig &cfg)
{
  return cfg.exec == "parallel" ? Exec::parallel : Exec::serial;
}

BoundaryCondition make_bc(const std::string &name, const std::optional<bc::ExactSolution> &exact = {})
{
  if (name == "msd") return bc::Msd{};
  if (name == "l0") return bc::LaplacianZero{};
  if (name == "1sd") return bc::OneSided2{};
  if (name == "zero") return bc::ZeroDirichlet{};
  if (name == "exact" && exact) return bc::ExactDirichlet{*exact};
  throw ConfigError("boundary condition '" + name + "' is not available for this experiment");
}

std::string tag_number(double v)
{
  char buf[32];
  std::snprintf(buf, sizeof buf, "%g", v);
  return buf;
}

// Output directory of one run, created on demand; empty when nothing is written.
std::string run_dir(const ExperimentConfig &cfg, const std::string &bc, double r)
{
  if (cfg.out.empty())
  {
    return {};
  }
  const fs::path dir = fs::path(cfg.out) / (bc + "_r" + tag_number(r));
  fs::create_directories(dir);
  return dir.string();
}

std::string join(const std::string &dir, const std::string &name)
{
  return (fs::path(dir) / name).string();
}

int step_count(double t_end, double k)
{
  return std::max(1, int(std::lround(t_end / k)));
}

double resolve_k(const ExperimentConfig &cfg, const ComplexField &psi, const NlseParams &params,
                 const BoundaryCondition &bc)
{
  return cfg.k ? *cfg.k : recommended_timestep(full_stability_bound(psi, params, bc));
}

double background_density(const ExperimentConfig &cfg)
{
  return cfg.omega / cfg.s;
}

Grid square_grid(const ExperimentConfig &cfg, int dim, double r)
{
  if (cfg.grid_points)
  {
    return Grid::centered(dim, *cfg.grid_points, cfg.h);
  }
  return Grid::from_extent(dim, -r, r, cfg.h);
}

double farthest_point(const Grid &g)
{
  double r2 = 0.0;
  for (int a = 0; a < g.dim(); ++a)
  {
    const double lo = g.origin(a), hi = g.coord(a, g.shape(a) - 1);
    r2 += std::max(lo * lo, hi * hi);
  }
  return std::sqrt(r2);
}

RadialProfile vortex_profile(const ExperimentConfig &cfg, double radius)
{
  const double big = radius + 5.0;
  const int n = int(std::ceil(big / cfg.profile_dr));
  return solve_radial_profile(cfg.m, cfg.omega, cfg.a, cfg.s, n * cfg.profile_dr, n).profile;
}

//
// Steps psi for `steps` steps, calling sample(psi, t) at t = 0, every `every` steps
// and at the end. Blow-up and vortex loss end the run early and set the status.
//
template <class Sample>
void drive(Stepper &st, ComplexField &psi, int steps, int every, RunSummary &run, Sample sample)
{
  double t = 0.0;
  try
  {
    sample(psi, t);
    for (int n = 1; n <= steps; ++n)
    {
      t = st.step(psi, t);
      if (n % every == 0 || n == steps)
      {
        sample(psi, t);
      }
    }
    run.t_reached = t;
  }
  catch (const BlowUpError &e)
  {
    run.status = "blowup";
    run.t_reached = e.time();
  }
  catch (const VortexLostError &)
  {
    run.status = "vortex_lost";
    run.t_reached = t;
  }
}

// Writes |Psi|^2 and phase PGMs at t = 0, every `every` time units, and on request.
class Snapshots
{
public:
  Snapshots(std::string dir, double rho, double every) : dir_(std::move(dir)), rho_(rho), every_(every) {}

  void offer(const ComplexField &plane, double t, double k, bool force = false)
  {
    if (dir_.empty())
    {
      return;
    }
    const bool due = every_ > 0.0 && t + 0.5 * k >= next_;
    if (!(force || t == 0.0 || due))
    {
      return;
    }
    write_pgm_mod2(plane, rho_, join(dir_, snapshot_name(t, "mod2")));
    write_pgm_phase(plane, join(dir_, snapshot_name(t, "phase")));
    while (every_ > 0.0 && next_ <= t + 0.5 * k)
    {
      next_ += every_;
    }
  }

private:
  std::string dir_;
  double rho_;
  double every_;
  double next_ = 0.0;
};

void summarize_errors(const ErrorSeries &series, RunSummary &run)
{
  if (run.status == "blowup")
  {
    // An unbounded solution has unbounded error.
    run.err_mean = run.err_max = run.err_mod2_max = kInf;
    return;
  }
  run.err_mean = series.mean_component_average();
  run.err_max = series.component_average();
  run.err_mod2_max = series.max().mod2;
}

// Errors against psi0 exp(i omega t), the exact evolution of a stationary state.
ComponentError rotating_error(const ComplexField &psi, const ComplexField &psi0, double omega, double t)
{
  const cplx rot = std::polar(1.0, omega * t);
  ComponentError e;
  for (std::size_t i = 0; i < psi.size(); ++i)
  {
    const cplx ref = psi0[i] * rot;
    e.real = std::max(e.real, std::abs(psi[i].real() - ref.real()));
    e.imag = std::max(e.imag, std::abs(psi[i].imag() - ref.imag()));
    e.mod2 = std::max(e.mod2, std::abs(mod2(psi[i]) - mod2(ref)));
  }
  return e;
}

RunSummary soliton_run(const ExperimentConfig &cfg, const std::string &bcname, double r)
{
  const SolitonParams sp{cfg.c, cfg.omega, cfg.a, cfg.s};
  const double shift = cfg.c * cfg.t_end;
  const Grid grid = Grid::from_extent(1, -r + std::min(shift, 0.0), r + std::max(shift, 0.0), cfg.h);
  const NlseParams params(cfg.a, cfg.s);
  const auto exact = dark_soliton_solution(sp);
  const BoundaryCondition bc = make_bc(bcname, exact);

  ComplexField psi = ComplexField::sample(grid, [&](const Point &x) { return exact.value(x, 0.0); });
  const ComplexField initial = psi;

  RunSummary run;
  run.bc = bcname;
  run.r = r;
  run.k = resolve_k(cfg, psi, params, bc);
  run.dir = run_dir(cfg, bcname, r);

  Stepper st(grid, params, bc, {run.k, Scheme::rk4, 1e6, exec_of(cfg)});
  ErrorSeries series;
  drive(st, psi, step_count(cfg.t_end, run.k), cfg.sample_every, run,
        [&](const ComplexField &f, double t) { series.push(t, component_error(f, exact.value, t)); });
  summarize_errors(series, run);
  run.boundary_drift = boundary_mod2_drift(initial, psi, st.map());

  if (!run.dir.empty())
  {
    series.write_csv(join(run.dir, "errors.csv"));
    write_state_csv(psi, join(run.dir, "state_final.csv"));
  }
  return run;
}

RunSummary vortex_single_run(const ExperimentConfig &cfg, const std::string &bcname, double r,
                             const RadialProfile &profile)
{
  const Grid grid = square_grid(cfg, 2, r);
  const NlseParams params(cfg.a, cfg.s);
  const BoundaryCondition bc = make_bc(bcname);
  const double rho = background_density(cfg);
  const ComplexField initial = make_vortex_field(grid, {cfg.m, cfg.omega, {0.0, 0.0, 0.0}, profile});
  ComplexField psi = initial;

  RunSummary run;
  run.bc = bcname;
  run.r = cfg.grid_points ? -grid.origin(0) : r;
  run.k = resolve_k(cfg, psi, params, bc);
  run.dir = run_dir(cfg, bcname, run.r);
  run.center_drift = 0.0;

  const TrackOptions topt{rho, 0.5};
  const Vec2 start = track_vortices(initial, 1, topt).front();
  Stepper st(grid, params, bc, {run.k, Scheme::rk4, 1e6, exec_of(cfg)});
  ErrorSeries series;
  VortexTrack track;
  Snapshots snaps(run.dir, rho, cfg.snapshot_every);
  drive(st, psi, step_count(cfg.t_end, run.k), cfg.sample_every, run,
        [&](const ComplexField &f, double t)
        {
          series.push(t, rotating_error(f, initial, cfg.omega, t));
          const Vec2 p = track_vortices(f, 1, topt).front();
          track.push(t, {p});
          run.center_drift = std::max(run.center_drift, std::hypot(p.x - start.x, p.y - start.y));
          snaps.offer(f, t, run.k);
        });
  summarize_errors(series, run);
  run.boundary_drift = boundary_mod2_drift(initial, psi, st.map());

  if (!run.dir.empty())
  {
    if (psi.all_finite())
    {
      snaps.offer(psi, run.t_reached, run.k, true);
    }
    series.write_csv(join(run.dir, "errors.csv"));
    track.write_csv(join(run.dir, "track.csv"), {0.0, 0.0});
    write_state_csv(psi, join(run.dir, "state_final.csv"));
  }
  return run;
}

// Period from the zero crossings of x(t) of the first vortex.
double rotation_period(const VortexTrack &track)
{
  std::vector<double> crossings;
  const auto &ts = track.times();
  const auto &ps = track.positions();
  for (std::size_t n = 1; n < ts.size(); ++n)
  {
    const double x0 = ps[n - 1][0].x, x1 = ps[n][0].x;
    if ((x0 < 0.0) != (x1 < 0.0))
    {
      crossings.push_back(ts[n - 1] + (ts[n] - ts[n - 1]) * x0 / (x0 - x1));
    }
  }
  if (crossings.size() < 2)
  {
    return RunSummary::nan();
  }
  return 2.0 * (crossings.back() - crossings.front()) / double(crossings.size() - 1);
}

RunSummary vortex_pair_run(const ExperimentConfig &cfg, const std::string &bcname, double d,
                           const RadialProfile &profile)
{
  const Grid grid = square_grid(cfg, 2, d);
  const NlseParams params(cfg.a, cfg.s);
  const BoundaryCondition bc = make_bc(bcname);
  const double rho = background_density(cfg);
  const double half = 0.5 * cfg.separation;
  const std::vector<VortexSpec> specs{{cfg.m, cfg.omega, {-half, 0.0, 0.0}, profile},
                                      {cfg.m, cfg.omega, {half, 0.0, 0.0}, profile}};
  ComplexField psi = make_multi_vortex(grid, specs, rho);
  const ComplexField initial = psi;

  RunSummary run;
  run.bc = bcname;
  run.r = cfg.grid_points ? -grid.origin(0) : d;
  run.k = resolve_k(cfg, psi, params, bc);
  run.dir = run_dir(cfg, bcname, run.r);

  const TrackOptions topt{rho, 0.5};
  Stepper st(grid, params, bc, {run.k, Scheme::rk4, 1e6, exec_of(cfg)});
  VortexTrack track;
  Snapshots snaps(run.dir, rho, cfg.snapshot_every);
  drive(st, psi, step_count(cfg.t_end, run.k), cfg.sample_every, run,
        [&](const ComplexField &f, double t)
        {
          track.push(t, track_vortices(f, 2, topt));
          snaps.offer(f, t, run.k);
        });
  run.radius_deviation = run.status == "ok" ? radius_deviation(track, {0.0, 0.0}) : kInf;
  run.period = rotation_period(track);
  run.boundary_drift = boundary_mod2_drift(initial, psi, st.map());

  if (!run.dir.empty())
  {
    if (psi.all_finite())
    {
      snaps.offer(psi, run.t_reached, run.k, true);
    }
    track.write_csv(join(run.dir, "track.csv"), {0.0, 0.0});
    write_state_csv(psi, join(run.dir, "state_final.csv"));
  }
  return run;
}

struct RingSample
{
  double t;
  double radius;
  double axial;
};

// Index of the grid plane closest to coordinate 0 along an axis.
int zero_plane(const Grid &g, int axis)
{
  return std::clamp(int(std::lround(-g.origin(axis) / g.spacing(axis))), 0, g.shape(axis) - 1);
}

RingSample measure_ring(const ComplexField &psi, double t, double rho)
{
  const ComplexField cut = plane_slice(psi, 1, zero_plane(psi.grid(), 1));
  const auto cores = track_vortices(cut, 2, {rho, 0.5});
  // in the x-z cut the ring crosses at (+-R, z)
  return {t, 0.5 * std::abs(cores[0].x - cores[1].x), 0.5 * (cores[0].y + cores[1].y)};
}

Grid ring_grid(const ExperimentConfig &cfg)
{
  if (cfg.grid_points)
  {
    const int n = *cfg.grid_points;
    const double lo = -(n / 2) * cfg.h;
    return Grid(3, {n, n, n}, {cfg.h, cfg.h, cfg.h}, {lo, lo, lo});
  }
  return Grid::from_extent(3, -cfg.radii.front(), cfg.radii.front(), cfg.h);
}

// Axial velocity from a least-squares line through the samples.
double axial_velocity(const std::vector<RingSample> &s)
{
  if (s.size() < 2)
  {
    return 0.0;
  }
  double mt = 0, mz = 0;
  for (const auto &p : s)
  {
    mt += p.t;
    mz += p.axial;
  }
  mt /= double(s.size());
  mz /= double(s.size());
  double num = 0, den = 0;
  for (const auto &p : s)
  {
    num += (p.t - mt) * (p.axial - mz);
    den += (p.t - mt) * (p.t - mt);
  }
  return num / den;
}

// Residual drift of a nearly held ring, with its breathing oscillation fitted out.
double held_axial_velocity(const std::vector<RingSample> &s, double span)
{
  std::vector<double> t, z;
  for (const auto &p : s)
  {
    t.push_back(p.t);
    z.push_back(p.axial);
  }
  return fit_drift_with_oscillation(t, z, 5.0, span).velocity;
}

struct RingRun
{
  RunSummary run;
  std::vector<RingSample> samples;
  ComplexField final_state;
};

RingRun ring_run(const ExperimentConfig &cfg, const std::string &bcname, const ComplexField &bare, double backflow,
                 double t_end, const std::string &dir)
{
  const Grid &grid = bare.grid();
  const NlseParams params(cfg.a, cfg.s);
  const BoundaryCondition bc = make_bc(bcname);
  const double rho = background_density(cfg);
  ComplexField psi = backflow == 0.0 ? bare : add_backflow(bare, {0.0, 0.0, backflow}, cfg.a);

  RingRun rr;
  rr.run.bc = bcname;
  rr.run.r = -grid.origin(0);
  rr.run.backflow = backflow;
  rr.run.k = resolve_k(cfg, psi, params, bc);
  rr.run.dir = dir;
  const int cut = zero_plane(grid, 1);
  Stepper st(grid, params, bc, {rr.run.k, Scheme::rk4, 1e6, exec_of(cfg)});
  Snapshots snaps(dir, rho, cfg.snapshot_every);
  drive(st, psi, step_count(t_end, rr.run.k), cfg.sample_every, rr.run,
        [&](const ComplexField &f, double t)
        {
          snaps.offer(plane_slice(f, 1, cut), t, rr.run.k);
          rr.samples.push_back(measure_ring(f, t, rho));
        });
  if (!dir.empty() && psi.all_finite())
  {
    snaps.offer(plane_slice(psi, 1, cut), rr.run.t_reached, rr.run.k, true);
  }
  rr.final_state = std::move(psi);
  return rr;
}

void write_summary_csv(const std::vector<RunSummary> &runs, const std::string &path)
{
  std::ofstream os(path);
  if (!os)
  {
    throw std::runtime_error("cannot open " + path);
  }
  os << "bc,r,status,k,t_reached,err_mean,err_max,err_mod2_max,boundary_drift,center_drift,"
        "radius_deviation,period,ring_radius_change,ring_axial_shift,backflow\n";
  for (const auto &r : runs)
  {
    os << r.bc << ',' << format_real(r.r) << ',' << r.status << ',' << format_real(r.k) << ','
       << format_real(r.t_reached) << ',' << format_real(r.err_mean) << ',' << format_real(r.err_max) << ','
       << format_real(r.err_mod2_max) << ',' << format_real(r.boundary_drift) << ','
       << format_real(r.center_drift) << ',' << format_real(r.radius_deviation) << ','
       << format_real(r.period) << ',' << format_real(r.ring_radius_change) << ','
       << format_real(r.ring_axial_shift) << ',' << format_real(r.backflow) << '\n';
  }
}

json number_or_null(double v)
{
  return std::isfinite(v) ? json(v) : json(nullptr);
}

json run_json(const RunSummary &r)
{
  return {{"bc", r.bc},
          {"r", r.r},
          {"status", r.status},
          {"k", r.k},
          {"t_reached", r.t_reached},
          {"err_mean", number_or_null(r.err_mean)},
          {"err_max", number_or_null(r.err_max)},
          {"err_mod2_max", number_or_null(r.err_mod2_max)},
          {"boundary_drift", number_or_null(r.boundary_drift)},
          {"center_drift", number_or_null(r.center_drift)},
          {"radius_deviation", number_or_null(r.radius_deviation)},
          {"period", number_or_null(r.period)},
          {"ring_radius_change", number_or_null(r.ring_radius_change)},
          {"ring_axial_shift", number_or_null(r.ring_axial_shift)},
          {"backflow", number_or_null(r.backflow)},
          {"dir", r.dir}};
}

template <class T>
void read_into(const json &j, const char *key, T &dst)
{
  if (j.contains(key))
  {
    dst = j.at(key).get<T>();
  }
}

}  // namespace

ExperimentConfig default_config(const std::string &experiment)
{
  if (!kTags.count(experiment))
  {
    throw ConfigError("unknown experiment '" + experiment + "'");
  }
  ExperimentConfig c;
  c.experiment = experiment;
  if (experiment == "soliton-static")
  {
    c.bcs = {"msd", "l0", "1sd", "exact"};
    c.radii = {5, 10, 15, 20, 25};
    c.k = 0.006;
  }
  else if (experiment == "soliton-moving")
  {
    c.bcs = {"msd", "exact"};
    c.radii = {5, 10, 15, 20, 25};
    c.k = 0.006;
    c.c = 0.5;
  }
  else if (experiment == "vortex-single")
  {
    c.bcs = {"msd", "l0"};
    c.radii = {5, 10, 15, 20, 25, 30, 35};
    c.h = 0.25;
    c.k = 0.01;
    c.t_end = 300.0;
  }
  else if (experiment == "vortex-pair")
  {
    c.bcs = {"msd", "l0"};
    c.radii = {12, 15, 18, 21, 24, 27, 30, 35};
    c.h = 0.25;
    c.k = 0.01;
    c.t_end = 480.0;
  }
  else if (experiment == "vortex-ring")
  {
    c.bcs = {"msd"};
    c.grid_points = 96;
    c.radii = {24};
    c.h = 0.5;
    c.k = 0.035;
    c.t_end = 150.0;
  }
  else if (experiment == "stability-check")
  {
    c.bcs = {"msd"};
    c.k.reset();
  }
  else if (experiment == "appendix-demo")
  {
    c.bcs = {"msd"};
    c.radii = {10};
    c.k = 0.001;
    c.t_end = 0.1;
  }
  return c;
}

ExperimentConfig merge_config(const ExperimentConfig &base, const json &j)
{
  static const std::set<std::string> known{
    "experiment", "bcs",       "radii",     "grid_points",       "h",
    "k",          "t_end",     "a",         "s",                 "omega",
    "c",          "m",         "separation", "ring_radius",      "backflow",
    "ring_seed",  "calibration_time", "calibration_hold_time", "calibration_passes", "dim", "max_steps", "survival_steps",
    "noise",      "sample_every", "snapshot_every", "profile_dr", "seed",
    "exec",       "out"};
  if (!j.is_object())
  {
    throw ConfigError("configuration must be a JSON object");
  }
  for (const auto &item : j.items())
  {
    if (!known.count(item.key()))
    {
      throw ConfigError("unknown configuration key '" + item.key() + "'");
    }
  }
  ExperimentConfig c = base;
  try
  {
    if (j.contains("experiment"))
    {
      c = default_config(j.at("experiment").get<std::string>());
    }
    if (j.contains("bcs"))
    {
      const auto &v = j.at("bcs");
      c.bcs = v.is_string() ? std::vector<std::string>{v.get<std::string>()} : v.get<std::vector<std::string>>();
    }
    if (j.contains("radii"))
    {
      const auto &v = j.at("radii");
      c.radii = v.is_number() ? std::vector<double>{v.get<double>()} : v.get<std::vector<double>>();
    }
    if (j.contains("grid_points"))
    {
      const auto &v = j.at("grid_points");
      c.grid_points = v.is_null() ? std::nullopt : std::optional<int>(v.get<int>());
    }
    if (j.contains("k"))
    {
      const auto &v = j.at("k");
      if (v.is_string() && v.get<std::string>() == "auto")
      {
        c.k.reset();
      }
      else
      {
        c.k = v.get<double>();
      }
    }
    if (j.contains("backflow"))
    {
      const auto &v = j.at("backflow");
      if (v.is_null() || (v.is_string() && v.get<std::string>() == "auto"))
      {
        c.backflow.reset();
      }
      else
      {
        c.backflow = v.get<double>();
      }
    }
    read_into(j, "h", c.h);
    read_into(j, "t_end", c.t_end);
    read_into(j, "a", c.a);
    read_into(j, "s", c.s);
    read_into(j, "omega", c.omega);
    read_into(j, "c", c.c);
    read_into(j, "m", c.m);
    read_into(j, "separation", c.separation);
    read_into(j, "ring_radius", c.ring_radius);
    read_into(j, "ring_seed", c.ring_seed);
    read_into(j, "calibration_time", c.calibration_time);
    read_into(j, "calibration_hold_time", c.calibration_hold_time);
    read_into(j, "calibration_passes", c.calibration_passes);
    read_into(j, "dim", c.dim);
    read_into(j, "max_steps", c.max_steps);
    read_into(j, "survival_steps", c.survival_steps);
    read_into(j, "noise", c.noise);
    read_into(j, "sample_every", c.sample_every);
    read_into(j, "snapshot_every", c.snapshot_every);
    read_into(j, "profile_dr", c.profile_dr);
    read_into(j, "seed", c.seed);
    read_into(j, "exec", c.exec);
    read_into(j, "out", c.out);
  }
  catch (const json::exception &e)
  {
    throw ConfigError(std::string("bad configuration value: ") + e.what());
  }
  return c;
}

json to_json(const ExperimentConfig &c)
{
  return {{"experiment", c.experiment},
          {"bcs", c.bcs},
          {"radii", c.radii},
          {"grid_points", c.grid_points ? json(*c.grid_points) : json(nullptr)},
          {"h", c.h},
          {"k", c.k ? json(*c.k) : json("auto")},
          {"t_end", c.t_end},
          {"a", c.a},
          {"s", c.s},
          {"omega", c.omega},
          {"c", c.c},
          {"m", c.m},
          {"separation", c.separation},
          {"ring_radius", c.ring_radius},
          {"backflow", c.backflow ? json(*c.backflow) : json("auto")},
          {"ring_seed", c.ring_seed},
          {"calibration_time", c.calibration_time},
          {"calibration_hold_time", c.calibration_hold_time},
          {"calibration_passes", c.calibration_passes},
          {"dim", c.dim},
          {"max_steps", c.max_steps},
          {"survival_steps", c.survival_steps},
          {"noise", c.noise},
          {"sample_every", c.sample_every},
          {"snapshot_every", c.snapshot_every},
          {"profile_dr", c.profile_dr},
          {"seed", c.seed},
          {"exec", c.exec},
          {"out", c.out}};
}

void validate(const ExperimentConfig &c)
{
  auto require = [](bool ok, const std::string &msg)
  {
    if (!ok)
    {
      throw ConfigError(msg);
    }
  };
  require(kTags.count(c.experiment) == 1, "unknown experiment '" + c.experiment + "'");
  require(c.h > 0.0, "h must be positive");
  require(!c.k || *c.k > 0.0, "k must be positive or auto");
  require(c.t_end > 0.0, "t_end must be positive");
  require(c.a != 0.0, "a must be nonzero");
  require(!c.bcs.empty(), "at least one boundary condition is required");
  for (const auto &b : c.bcs)
  {
    require(kBcs.count(b) == 1, "unknown boundary condition '" + b + "'");
  }
  require(c.exec == "serial" || c.exec == "parallel", "exec must be serial or parallel");
  require(c.sample_every >= 1, "sample_every must be at least 1");
  require(c.snapshot_every >= 0.0, "snapshot_every must be nonnegative");
  require(c.profile_dr > 0.0, "profile_dr must be positive");
  require(!c.grid_points || *c.grid_points >= 5, "grid_points must be at least 5");
  require(c.grid_points || !c.radii.empty() || c.experiment == "stability-check", "radii must not be empty");
  for (const double r : c.radii)
  {
    require(r > 0.0, "radii must be positive");
  }

  const bool one_d = c.experiment == "soliton-static" || c.experiment == "soliton-moving" ||
                     c.experiment == "appendix-demo" || (c.experiment == "stability-check" && c.dim == 1);
  for (const auto &b : c.bcs)
  {
    require(b != "1sd" || one_d, "1sd is only defined in one dimension");
    require(b != "exact" || c.experiment == "soliton-static" || c.experiment == "soliton-moving",
            "the exact boundary needs a closed-form solution (soliton experiments only)");
  }
  if (c.experiment != "stability-check" || c.s != 0.0)
  {
    require(c.s != 0.0 && c.omega / c.s > 0.0, "omega / s must be positive (background density)");
  }
  if (c.experiment == "soliton-static" || c.experiment == "soliton-moving" || c.experiment == "appendix-demo")
  {
    require(-c.omega / c.a > 0.0, "-omega / a must be positive for the dark soliton");
  }
  if (c.experiment == "appendix-demo")
  {
    require(c.bcs.size() == 1 && c.bcs.front() == "msd", "appendix-demo uses the msd boundary only");
  }
  if (c.experiment == "stability-check")
  {
    require(c.dim >= 1 && c.dim <= 3, "dim must be 1, 2 or 3");
    require(c.max_steps >= 1 && c.survival_steps >= 1, "step limits must be positive");
  }
  if (c.experiment == "vortex-pair")
  {
    require(c.separation > 0.0, "separation must be positive");
  }
  if (c.experiment == "vortex-ring")
  {
    require(c.ring_radius > 0.0, "ring_radius must be positive");
    require(c.calibration_time > 0.0 && c.calibration_passes >= 1, "calibration settings must be positive");
    require(c.calibration_hold_time > 0.0, "calibration settings must be positive");
    require(c.ring_seed == "mirrored" || c.ring_seed == "local", "ring_seed must be mirrored or local");
  }
}

ExperimentResult run_soliton_static(const ExperimentConfig &cfg)
{
  ExperimentResult res;
  for (const double r : cfg.radii)
  {
    for (const auto &b : cfg.bcs)
    {
      res.runs.push_back(soliton_run(cfg, b, r));
    }
  }
  return res;
}

ExperimentResult run_soliton_moving(const ExperimentConfig &cfg)
{
  if (cfg.c == 0.0)
  {
    throw ConfigError("soliton-moving needs a nonzero velocity c");
  }
  return run_soliton_static(cfg);
}

ExperimentResult run_vortex_single(const ExperimentConfig &cfg)
{
  double reach = 0.0;
  for (const double r : cfg.radii)
  {
    reach = std::max(reach, farthest_point(square_grid(cfg, 2, r)));
  }
  const RadialProfile profile = vortex_profile(cfg, reach);
  if (!cfg.out.empty())
  {
    fs::create_directories(cfg.out);
    write_profile_csv(profile, join(cfg.out, "profile.csv"));
  }
  ExperimentResult res;
  const std::vector<double> radii = cfg.grid_points ? std::vector<double>{0.0} : cfg.radii;
  for (const double r : radii)
  {
    for (const auto &b : cfg.bcs)
    {
      res.runs.push_back(vortex_single_run(cfg, b, r, profile));
    }
  }
  return res;
}

ExperimentResult run_vortex_pair(const ExperimentConfig &cfg)
{
  double reach = 0.0;
  for (const double d : cfg.radii)
  {
    reach = std::max(reach, farthest_point(square_grid(cfg, 2, d)));
  }
  const RadialProfile profile = vortex_profile(cfg, reach + 0.5 * cfg.separation);
  if (!cfg.out.empty())
  {
    fs::create_directories(cfg.out);
    write_profile_csv(profile, join(cfg.out, "profile.csv"));
  }
  ExperimentResult res;
  const std::vector<double> radii = cfg.grid_points ? std::vector<double>{0.0} : cfg.radii;
  for (const double d : radii)
  {
    for (const auto &b : cfg.bcs)
    {
      res.runs.push_back(vortex_pair_run(cfg, b, d, profile));
    }
  }
  return res;
}

ExperimentResult run_vortex_ring(const ExperimentConfig &cfg)
{
  const Grid grid = ring_grid(cfg);
  // the ring's cross-section is a 2D vortex at distance up to reach + ring radius
  const RadialProfile profile = vortex_profile(cfg, farthest_point(grid) + cfg.ring_radius);
  const ComplexField bare = cfg.ring_seed == "local"
                              ? make_vortex_ring(grid, cfg.ring_radius, {0.0, 0.0, 0.0}, cfg.m, profile)
                              : make_vortex_ring_mirrored(grid, cfg.ring_radius, {0.0, 0.0, 0.0}, cfg.m, profile);
  if (!cfg.out.empty())
  {
    fs::create_directories(cfg.out);
    write_profile_csv(profile, join(cfg.out, "profile.csv"));
  }

  ExperimentResult res;
  for (const auto &b : cfg.bcs)
  {
    double backflow = 0.0;
    if (cfg.backflow)
    {
      backflow = *cfg.backflow;
    }
    else
    {
      // With back-flow c the ring drifts at U + c; each pass removes the residual drift.
      // Held passes run long enough to average over the ring's breathing.
      for (int pass = 0; pass < cfg.calibration_passes; ++pass)
      {
        const double span = pass == 0 ? cfg.calibration_time : cfg.calibration_hold_time;
        const auto pre = ring_run(cfg, b, bare, backflow, span, {});
        if (pre.run.status != "ok")
        {
          throw std::runtime_error("ring calibration run failed: " + pre.run.status);
        }
        backflow -= pass == 0 ? axial_velocity(pre.samples) : held_axial_velocity(pre.samples, span);
      }
    }

    const std::string dir = run_dir(cfg, b, -grid.origin(0));
    auto rr = ring_run(cfg, b, bare, backflow, cfg.t_end, dir);
    const RingSample first = rr.samples.front();
    double dr = 0.0, dz = 0.0;
    for (const auto &s : rr.samples)
    {
      dr = std::max(dr, std::abs(s.radius - first.radius));
      if (std::abs(s.axial - first.axial) > std::abs(dz))
      {
        dz = s.axial - first.axial;
      }
    }
    rr.run.ring_radius_change = dr / first.radius;
    rr.run.ring_axial_shift = dz;
    if (!dir.empty())
    {
      std::ofstream os(join(dir, "ring.csv"));
      os << "t,radius,axial\n";
      for (const auto &s : rr.samples)
      {
        os << format_real(s.t) << ',' << format_real(s.radius) << ',' << format_real(s.axial) << '\n';
      }
      write_state_csv(rr.final_state, join(dir, "state_final.csv"));
    }
    res.runs.push_back(rr.run);
  }
  return res;
}

ExperimentResult run_stability_check(const ExperimentConfig &cfg)
{
  const int d = cfg.dim;
  const int n = cfg.grid_points.value_or(d == 1 ? 101 : d == 2 ? 41 : 17);
  const std::array<int, 3> shape{n, d >= 2 ? n : 1, d >= 3 ? n : 1};
  const Grid grid(d, shape, {cfg.h, cfg.h, cfg.h}, {0.0, 0.0, 0.0});
  const NlseParams params(cfg.a, cfg.s);
  const BoundaryCondition bc = make_bc(cfg.bcs.front());

  const double level = cfg.s != 0.0 ? std::sqrt(cfg.omega / cfg.s) : 1.0;
  ComplexField seed(grid, level);
  std::mt19937_64 rng(cfg.seed);
  std::uniform_real_distribution<double> u(-cfg.noise, cfg.noise);
  for (std::size_t i = 0; i < seed.size(); ++i)
  {
    seed[i] += cplx(u(rng), u(rng));
  }

  StabilityReport rep;
  rep.dim = d;
  rep.h = cfg.h;
  rep.linear_bound = linear_stability_bound(cfg.h, cfg.a, d);
  const BoundaryMap map = boundary_map(grid);
  ComplexField psi_t(grid);
  {
    Stepper probe(grid, params, bc, {1.0});
    probe.derivative(seed, 0.0, psi_t);
  }
  const auto terms = stability_terms(seed, psi_t, params, map, bc);
  rep.interior_max = terms.interior;
  rep.boundary_max = terms.boundary;
  rep.full_bound = full_stability_bound(seed, psi_t, params, map, bc);
  rep.recommended = recommended_timestep(rep.full_bound);

  auto blows_up = [&](double k, int steps)
  {
    ComplexField psi = seed;
    Stepper st(grid, params, bc, {k, Scheme::rk4, 1e6, exec_of(cfg)});
    double t = 0.0;
    try
    {
      for (int s = 0; s < steps; ++s)
      {
        t = st.step(psi, t);
      }
    }
    catch (const BlowUpError &)
    {
      return true;
    }
    return false;
  };

  double lo = 0.5 * rep.full_bound, hi = 2.0 * rep.full_bound;
  if (blows_up(lo, cfg.max_steps))
  {
    rep.empirical = lo;
  }
  else if (!blows_up(hi, cfg.max_steps))
  {
    rep.empirical = hi;
  }
  else
  {
    for (int it = 0; it < 16; ++it)
    {
      const double mid = 0.5 * (lo + hi);
      (blows_up(mid, cfg.max_steps) ? hi : lo) = mid;
    }
    rep.empirical = 0.5 * (lo + hi);
  }
  rep.recommended_survived = !blows_up(rep.recommended, cfg.survival_steps);

  if (!cfg.out.empty())
  {
    fs::create_directories(cfg.out);
    std::ofstream os(join(cfg.out, "stability.json"));
    os << json{{"dim", rep.dim},
               {"h", rep.h},
               {"linear_bound", rep.linear_bound},
               {"full_bound", rep.full_bound},
               {"interior_max", rep.interior_max},
               {"boundary_max", rep.boundary_max},
               {"empirical_threshold", rep.empirical},
               {"empirical_over_full", rep.empirical / rep.full_bound},
               {"empirical_over_linear", rep.empirical / rep.linear_bound},
               {"recommended", rep.recommended},
               {"recommended_survived", rep.recommended_survived}}
            .dump(2)
       << '\n';
  }
  ExperimentResult res;
  res.stability = rep;
  return res;
}

std::vector<cplx> appendix_loop(std::vector<cplx> u, double h, double k, double a, double s, int steps)
{
  const std::size_t n = u.size();
  const cplx i1(0.0, 1.0);
  std::vector<cplx> ut(n);
  for (int step = 0; step < steps; ++step)
  {
    // Ut = F(U)
    for (std::size_t j = 1; j + 1 < n; ++j)
    {
      ut[j] = i1 * (a * (u[j + 1] - 2.0 * u[j] + u[j - 1]) / (h * h) + s * std::norm(u[j]) * u[j]);
    }
    ut[0] = i1 * std::imag(ut[1] / u[1]) * u[0];
    ut[n - 1] = i1 * std::imag(ut[n - 2] / u[n - 2]) * u[n - 1];
    for (std::size_t j = 0; j < n; ++j)
    {
      u[j] = k * ut[j] + u[j];
    }
  }
  return u;
}

ExperimentResult run_appendix_demo(const ExperimentConfig &cfg)
{
  const double r = cfg.radii.front();
  const double k = cfg.k.value_or(0.001);
  const Grid grid = Grid::from_extent(1, -r, r, cfg.h);
  const SolitonParams sp{cfg.c, cfg.omega, cfg.a, cfg.s};
  const ComplexField initial = ComplexField::sample(grid, [&](const Point &x) { return dark_soliton(x[0], 0.0, sp); });
  const int steps = step_count(cfg.t_end, k);

  const auto literal = appendix_loop({initial.values().begin(), initial.values().end()}, cfg.h, k, cfg.a, cfg.s,
                                     steps);
  ComplexField psi = initial;
  Stepper st(grid, NlseParams(cfg.a, cfg.s), bc::Msd{}, {k, Scheme::euler, 1e6, exec_of(cfg)});
  double t = 0.0;
  for (int n = 0; n < steps; ++n)
  {
    t = st.step(psi, t);
  }

  AppendixReport rep;
  rep.steps = steps;
  for (std::size_t i = 0; i < psi.size(); ++i)
  {
    rep.max_difference = std::max(rep.max_difference, std::abs(psi[i] - literal[i]));
  }

  RunSummary run;
  run.bc = "msd";
  run.r = r;
  run.k = k;
  run.t_reached = t;
  run.dir = run_dir(cfg, "msd", r);
  if (!run.dir.empty())
  {
    write_state_csv(psi, join(run.dir, "state_final.csv"));
  }
  ExperimentResult res;
  res.runs.push_back(run);
  res.appendix = rep;
  return res;
}

ExperimentResult run_experiment(const ExperimentConfig &cfg)
{
  validate(cfg);
  if (!cfg.out.empty())
  {
    fs::create_directories(cfg.out);
  }

  ExperimentResult res;
  const auto &e = cfg.experiment;
  if (e == "soliton-static") res = run_soliton_static(cfg);
  else if (e == "soliton-moving") res = run_soliton_moving(cfg);
  else if (e == "vortex-single") res = run_vortex_single(cfg);
  else if (e == "vortex-pair") res = run_vortex_pair(cfg);
  else if (e == "vortex-ring") res = run_vortex_ring(cfg);
  else if (e == "stability-check") res = run_stability_check(cfg);
  else res = run_appendix_demo(cfg);

  if (!cfg.out.empty())
  {
    json manifest{{"version", MSD_VERSION}, {"seed", cfg.seed}, {"config", to_json(cfg)}};
    json runs = json::array();
    for (const auto &r : res.runs)
    {
      runs.push_back(run_json(r));
    }
    manifest["runs"] = runs;
    if (res.appendix)
    {
      manifest["appendix"] = {{"steps", res.appendix->steps}, {"max_difference", res.appendix->max_difference}};
    }
    std::ofstream(join(cfg.out, "manifest.json")) << manifest.dump(2) << '\n';
    if (!res.runs.empty())
    {
      write_summary_csv(res.runs, join(cfg.out, "summary.csv"));
    }
  }
  return res;
}

int exit_code(const ExperimentResult &result)
{
  if (result.runs.size() != 1)
  {
    return 0;
  }
  const auto &s = result.runs.front().status;
  return s == "blowup" ? 2 : s == "vortex_lost" ? 3 : 0;
}

}  // namespace msd
