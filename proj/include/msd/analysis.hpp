// SPDX-License-Identifier: Apache-2.0

#ifndef MSD_ANALYSIS_HPP
#define MSD_ANALYSIS_HPP

#include <functional>
#include <stdexcept>
#include <string>
#include <vector>

#include "msd/field.hpp"

namespace msd
{

struct ComponentError
{
  double real = 0.0;
  double imag = 0.0;
  double mod2 = 0.0;
};

// Infinity norms over every grid point of the differences in Re, Im and |.|^2.
ComponentError component_error(const ComplexField &psi, const ComplexField &reference);
ComponentError component_error(const ComplexField &psi,
                               const std::function<cplx(const Point &, double)> &reference,
                               double t);

class ErrorSeries
{
public:
  // Times must be strictly increasing.
  void push(double t, const ComponentError &e);

  const std::vector<double> &times() const { return times_; }
  const std::vector<ComponentError> &samples() const { return samples_; }
  bool empty() const { return times_.empty(); }

  // Maxima over the whole series.
  ComponentError max() const;
  // (max real error + max imaginary error) / 2
  double component_average() const;
  // Mean over samples of (real error + imaginary error) / 2. Used as the run summary.
  double mean_component_average() const;

  void write_csv(const std::string &path) const;

private:
  std::vector<double> times_;
  std::vector<ComponentError> samples_;
};

struct Vec2
{
  double x = 0.0;
  double y = 0.0;
};

// Thrown when fewer density minima than requested qualify as vortex cores.
class VortexLostError : public std::runtime_error
{
public:
  explicit VortexLostError(const std::string &what) : std::runtime_error(what) {}
};

struct TrackOptions
{
  double rho = 1.0;                // background density
  double threshold_fraction = 0.5; // minima must lie below threshold_fraction * rho
};

// The n deepest local minima of |Psi|^2 among interior points of a 2D field, each
// refined to sub-grid accuracy with a least-squares paraboloid over its 3x3
// neighbourhood. Sorted by depth, deepest first.
std::vector<Vec2> track_vortices(const ComplexField &psi, int n, const TrackOptions &opts = {});

//
// Time series of tracked vortex positions. New frames are matched to the previous
// positions by nearest neighbour so each column follows one vortex.
//
class VortexTrack
{
public:
  void push(double t, std::vector<Vec2> positions);

  const std::vector<double> &times() const { return times_; }
  const std::vector<std::vector<Vec2>> &positions() const { return positions_; }
  std::size_t count() const { return positions_.empty() ? 0 : positions_.front().size(); }
  bool empty() const { return times_.empty(); }

  std::vector<double> radius(std::size_t vortex, const Vec2 &center) const;

  // t, x_i, y_i, radius_i per vortex.
  void write_csv(const std::string &path, const Vec2 &center) const;

private:
  std::vector<double> times_;
  std::vector<std::vector<Vec2>> positions_;
};

// max_t |r(t) - r(0)| / r(0) * 100, taken over every tracked vortex.
double radius_deviation(const VortexTrack &track, const Vec2 &center);

// max_b | |Psi_b(t)|^2 - |Psi_b(0)|^2 | over the boundary points of the map.
double boundary_mod2_drift(const ComplexField &initial, const ComplexField &current,
                           const BoundaryMap &map);

// One value per field of the series, measured against the first.
std::vector<double> boundary_mod2_drift(const std::vector<ComplexField> &series,
                                        const BoundaryMap &map);

struct DriftFit
{
  double velocity = 0.0;
  double period = 0.0;
  double rms_residual = 0.0;
};

// Least-squares fit of z(t) = z0 + v t + A sin(wt) + B cos(wt), with the oscillation
// period 2 pi / w searched over [min_period, max_period]. Separates a steady drift from a
// single dominant oscillation such as a breathing mode.
DriftFit fit_drift_with_oscillation(const std::vector<double> &t, const std::vector<double> &z, double min_period,
                                    double max_period);

}  // namespace msd

#endif  // MSD_ANALYSIS_HPP
