// SPDX-License-Identifier: Apache-2.0
//
// sim <experiment> [--config file.json] [--bc msd,l0] [--r R | --d D] [--h H] [--k K|auto]
//     [--tend T] [--out DIR] ...
//
// Exit codes: 0 success, 2 blow-up, 3 vortex lost, 4 invalid configuration.

#include <CLI11.hpp>

#include <cmath>
#include <cstdio>
#include <fstream>
#include <map>

#include "msd/experiments.hpp"

using nlohmann::json;

namespace
{

constexpr int kExitBadConfig = 4;

void print_result(const msd::ExperimentResult &res)
{
  if (!res.runs.empty())
  {
    std::printf("%-6s %8s %-12s %10s %10s %12s %12s %12s %12s\n", "bc", "r", "status", "k", "t", "err_mean",
                "err_max", "mod2_max", "extra");
  }
  for (const auto &r : res.runs)
  {
    double extra = r.radius_deviation;
    if (!std::isnan(r.center_drift)) extra = r.center_drift;
    if (!std::isnan(r.ring_axial_shift)) extra = r.ring_axial_shift;
    std::printf("%-6s %8.3f %-12s %10.5f %10.3f %12.4e %12.4e %12.4e %12.4e\n", r.bc.c_str(), r.r,
                r.status.c_str(), r.k, r.t_reached, r.err_mean, r.err_max, r.err_mod2_max, extra);
  }
  if (res.stability)
  {
    const auto &s = *res.stability;
    std::printf("dim %d  h %g\nlinear bound      %.7g\nfull bound        %.7g\n"
                "interior max      %.7g\nboundary row max  %.7g\nempirical         %.7g  (%.3f x full)\n"
                "recommended       %.7g  survived: %s\n",
                s.dim, s.h, s.linear_bound, s.full_bound, s.interior_max, s.boundary_max, s.empirical,
                s.empirical / s.full_bound, s.recommended, s.recommended_survived ? "yes" : "no");
  }
  if (res.appendix)
  {
    std::printf("appendix loop: %d steps, max |stepper - listing| = %.3e\n", res.appendix->steps,
                res.appendix->max_difference);
  }
}

}  // namespace

int main(int argc, char **argv)
{
  CLI::App app{"Finite-difference NLSE experiments with modulus-squared Dirichlet boundaries"};
  app.set_help_flag("--help", "Print this help message and exit");
  std::string experiment, config_path;
  app.add_option("experiment", experiment,
                 "soliton-static | soliton-moving | vortex-single | vortex-pair | vortex-ring | "
                 "stability-check | appendix-demo")
    ->required();
  app.add_option("--config", config_path, "JSON configuration file")->check(CLI::ExistingFile);

  // Every configuration key can be overridden; values are collected as JSON and merged.
  json overrides = json::object();
  std::vector<std::string> bcs;
  std::vector<double> radii;
  std::string k_text, backflow_text;
  std::map<std::string, double> reals;
  std::map<std::string, long long> ints;
  std::map<std::string, std::string> strings;

  app.add_option("--bc,--bcs", bcs, "boundary condition(s): msd, l0, 1sd, exact, zero")->delimiter(',');
  app.add_option("--r,--d,--radii", radii, "domain radius r, or half-width d for vortex-pair")->delimiter(',');
  app.add_option("--k", k_text, "time step or 'auto'");
  app.add_option("--backflow", backflow_text, "ring back-flow velocity or 'auto'");
  for (const auto &[flag, key] : std::vector<std::pair<std::string, std::string>>{
         {"--h", "h"},
         {"--tend,--t_end,--t-end", "t_end"},
         {"--a", "a"},
         {"--s", "s"},
         {"--omega", "omega"},
         {"--c", "c"},
         {"--separation", "separation"},
         {"--ring_radius,--ring-radius", "ring_radius"},
         {"--calibration_time,--calibration-time", "calibration_time"},
         {"--calibration_hold_time,--calibration-hold-time", "calibration_hold_time"},
         {"--noise", "noise"},
         {"--snapshot_every,--snapshot-every", "snapshot_every"},
         {"--profile_dr,--profile-dr", "profile_dr"}})
  {
    app.add_option_function<double>(flag, [&reals, key](double v) { reals[key] = v; });
  }
  for (const auto &[flag, key] : std::vector<std::pair<std::string, std::string>>{
         {"--m", "m"},
         {"--grid_points,--grid-points", "grid_points"},
         {"--calibration_passes,--calibration-passes", "calibration_passes"},
         {"--dim", "dim"},
         {"--max_steps,--max-steps", "max_steps"},
         {"--survival_steps,--survival-steps", "survival_steps"},
         {"--sample_every,--sample-every", "sample_every"},
         {"--seed", "seed"}})
  {
    app.add_option_function<long long>(flag, [&ints, key](long long v) { ints[key] = v; });
  }
  app.add_option_function<std::string>("--ring_seed,--ring-seed",
                                       [&strings](const std::string &v) { strings["ring_seed"] = v; },
                                       "vortex-ring initial state: mirrored | local");
  app.add_option_function<std::string>("--exec", [&strings](const std::string &v) { strings["exec"] = v; },
                                       "serial | parallel");
  app.add_option_function<std::string>("--out", [&strings](const std::string &v) { strings["out"] = v; },
                                       "output directory");

  try
  {
    app.parse(argc, argv);
  }
  catch (const CLI::CallForHelp &e)
  {
    return app.exit(e);
  }
  catch (const CLI::ParseError &e)
  {
    app.exit(e);
    return kExitBadConfig;
  }

  try
  {
    msd::ExperimentConfig cfg = msd::default_config(experiment);
    if (!config_path.empty())
    {
      std::ifstream is(config_path);
      json file;
      try
      {
        file = json::parse(is);
      }
      catch (const json::exception &e)
      {
        throw msd::ConfigError(std::string("cannot parse ") + config_path + ": " + e.what());
      }
      if (file.contains("experiment") && file.at("experiment") != experiment)
      {
        throw msd::ConfigError("config file is for experiment " + file.at("experiment").dump());
      }
      file.erase("experiment");
      cfg = msd::merge_config(cfg, file);
    }

    if (!bcs.empty()) overrides["bcs"] = bcs;
    if (!radii.empty()) overrides["radii"] = radii;
    if (!k_text.empty())
    {
      overrides["k"] = k_text == "auto" ? json("auto") : json(std::stod(k_text));
    }
    if (!backflow_text.empty())
    {
      overrides["backflow"] = backflow_text == "auto" ? json("auto") : json(std::stod(backflow_text));
    }
    for (const auto &[key, v] : reals) overrides[key] = v;
    for (const auto &[key, v] : ints) overrides[key] = v;
    for (const auto &[key, v] : strings) overrides[key] = v;
    if (!radii.empty() && !ints.count("grid_points"))
    {
      overrides["grid_points"] = nullptr;  // an explicit radius replaces a default point count
    }
    cfg = msd::merge_config(cfg, overrides);

    const auto res = msd::run_experiment(cfg);
    print_result(res);
    return msd::exit_code(res);
  }
  catch (const msd::ConfigError &e)
  {
    std::fprintf(stderr, "invalid configuration: %s\n", e.what());
    return kExitBadConfig;
  }
  catch (const std::invalid_argument &e)
  {
    std::fprintf(stderr, "invalid configuration: %s\n", e.what());
    return kExitBadConfig;
  }
  catch (const std::exception &e)
  {
    std::fprintf(stderr, "error: %s\n", e.what());
    return 1;
  }
}
