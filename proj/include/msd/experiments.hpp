// SPDX-License-Identifier: Apache-2.0

#ifndef MSD_EXPERIMENTS_HPP
#define MSD_EXPERIMENTS_HPP

#include <cstdint>
#include <limits>
#include <optional>
#include <stdexcept>
#include <string>
#include <vector>

#include <json.hpp>

#include "msd/field.hpp"

namespace msd
{

// Raised for configurations that cannot be run; the CLI maps it to exit code 4.
class ConfigError : public std::invalid_argument
{
public:
  using std::invalid_argument::invalid_argument;
};

//
// Full description of one experiment invocation. Sweep lists hold every value to run;
// a single --r / --d / --bc on the command line collapses the list to one entry.
//
struct ExperimentConfig
{
  std::string experiment = "soliton-static";

  std::vector<std::string> bcs;  // msd, l0, 1sd, exact, zero
  std::vector<double> radii;     // r (solitons, single vortex) or d (vortex pair)
  std::optional<int> grid_points;  // square/cubic grid of this many points per axis

  double h = 0.1;
  std::optional<double> k;  // empty = auto (0.8 x full bound of the initial state)
  double t_end = 50.0;

  double a = 1.0;
  double s = -1.0;
  double omega = -1.0;
  double c = 0.0;
  int m = 1;
  double separation = 14.0;  // vortex pair: distance between the cores (each 7 from the centre)
  double ring_radius = 8.0;
  std::optional<double> backflow;  // ring: empty = calibrate, 0 = free ring
  std::string ring_seed = "mirrored";  // mirrored | local
  double calibration_time = 30.0;       // free-ring pass
  double calibration_hold_time = 90.0;  // each later pass, ring held by the current estimate
  int calibration_passes = 2;

  int dim = 1;  // stability-check only
  int max_steps = 20000;
  int survival_steps = 100000;
  double noise = 1e-8;

  int sample_every = 10;         // steps between error / track samples
  double snapshot_every = 0.0;   // time between PGM snapshots, 0 = initial and final only
  double profile_dr = 0.01;
  std::uint64_t seed = 1;
  std::string exec = "serial";   // serial | parallel
  std::string out;               // empty = write nothing
};

// Defaults for an experiment tag. Throws ConfigError for unknown tags.
ExperimentConfig default_config(const std::string &experiment);

// Overlays the keys present in j onto base. Unknown keys are rejected.
ExperimentConfig merge_config(const ExperimentConfig &base, const nlohmann::json &j);

nlohmann::json to_json(const ExperimentConfig &cfg);

// Throws ConfigError when the configuration is inconsistent.
void validate(const ExperimentConfig &cfg);

//
// Outcome of one (bc, r) run. Fields that do not apply to an experiment stay NaN.
//
struct RunSummary
{
  std::string bc;
  double r = 0.0;
  std::string status = "ok";  // ok | blowup | vortex_lost
  double k = 0.0;
  double t_reached = 0.0;
  double err_mean = nan();         // time average of (real + imag) / 2
  double err_max = nan();          // (max real + max imag) / 2 over the run
  double err_mod2_max = nan();
  double boundary_drift = nan();
  double center_drift = nan();     // single vortex
  double radius_deviation = nan(); // vortex pair, percent
  double period = nan();           // vortex pair rotation period
  double ring_radius_change = nan();  // ring, fraction of the initial radius
  double ring_axial_shift = nan();    // ring, signed axial displacement
  double backflow = nan();            // ring
  std::string dir;

  static double nan() { return std::numeric_limits<double>::quiet_NaN(); }
};

struct StabilityReport
{
  int dim = 1;
  double h = 0.0;
  double linear_bound = 0.0;
  double full_bound = 0.0;
  double interior_max = 0.0;  // max |L_i - g|
  double boundary_max = 0.0;  // max |B_b|
  double empirical = 0.0;     // bisected blow-up threshold
  double recommended = 0.0;
  bool recommended_survived = false;
};

struct AppendixReport
{
  int steps = 0;
  double max_difference = 0.0;  // stepper versus the literal loop
};

struct ExperimentResult
{
  std::vector<RunSummary> runs;
  std::optional<StabilityReport> stability;
  std::optional<AppendixReport> appendix;
};

ExperimentResult run_soliton_static(const ExperimentConfig &cfg);
ExperimentResult run_soliton_moving(const ExperimentConfig &cfg);
ExperimentResult run_vortex_single(const ExperimentConfig &cfg);
ExperimentResult run_vortex_pair(const ExperimentConfig &cfg);
ExperimentResult run_vortex_ring(const ExperimentConfig &cfg);
ExperimentResult run_stability_check(const ExperimentConfig &cfg);
ExperimentResult run_appendix_demo(const ExperimentConfig &cfg);

// Dispatches on cfg.experiment and writes manifest.json / summary.csv when cfg.out is set.
ExperimentResult run_experiment(const ExperimentConfig &cfg);

// Euler + MSD written exactly as the short first-order listing: Ut = F(U), both ends
// overwritten from their single inner neighbours, then U = k*Ut + U.
std::vector<cplx> appendix_loop(std::vector<cplx> u, double h, double k, double a, double s, int steps);

// 0 ok, 2 blow-up, 3 vortex lost. Sweeps (more than one run) always report 0.
int exit_code(const ExperimentResult &result);

}  // namespace msd

#endif  // MSD_EXPERIMENTS_HPP
