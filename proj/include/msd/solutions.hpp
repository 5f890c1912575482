// SPDX-License-Identifier: Apache-2.0

#ifndef MSD_SOLUTIONS_HPP
#define MSD_SOLUTIONS_HPP

#include <optional>
#include <stdexcept>
#include <string>
#include <vector>

#include "msd/bc.hpp"
#include "msd/field.hpp"

namespace msd
{

//
// Dark soliton moving at velocity c on the background rho = omega / s:
//   Psi = sqrt(omega/s) tanh(sqrt(-omega/(2a)) (x - c t)) exp(i[c x/(2a) + (omega - c^2/(4a)) t])
//
struct SolitonParams
{
  double c = 0.0;
  double omega = -1.0;
  double a = 1.0;
  double s = -1.0;

  // Throws std::invalid_argument unless omega/s > 0 and -omega/a > 0.
  void validate() const;
  double amplitude() const;
  double inverse_width() const;
  double phase_rate() const { return omega - c * c / (4.0 * a); }
};

cplx dark_soliton(double x, double t, const SolitonParams &p);
cplx dark_soliton_dt(double x, double t, const SolitonParams &p);
cplx dark_soliton_dxx(double x, double t, const SolitonParams &p);

// Closed-form solution usable by the exact boundary condition and error metrics.
bc::ExactSolution dark_soliton_solution(const SolitonParams &p);

// Re[sqrt(omega/s + a m^2 / (s r^2))]
double vortex_asymptotic(double r, int m, double omega, double a, double s);

//
// Radial vortex profile f tabulated at r_j = j dr, j = 0..n, with f(0) = 0.
//
struct RadialProfile
{
  int m = 1;
  double omega = -1.0;
  double a = 1.0;
  double s = -1.0;
  double dr = 0.0;
  std::vector<double> f;

  double radius() const { return dr * double(f.size() - 1); }
  // Linear interpolation inside the table; the asymptotic form beyond its end.
  double operator()(double r) const;
};

struct ProfileSolve
{
  RadialProfile profile;
  int iterations = 0;
  double residual = 0.0;  // infinity norm of the discrete ODE residual
};

class NonConvergenceError : public std::runtime_error
{
public:
  NonConvergenceError(int iterations, double residual);
  int iterations() const { return iterations_; }
  double residual() const { return residual_; }

private:
  int iterations_;
  double residual_;
};

struct ProfileSolveOptions
{
  int max_iterations = 100;
  double tolerance = 1e-10;
  // Interior initial iterate f_1..f_{n-1}; the asymptotic profile when empty.
  std::vector<double> initial;
};

// Solves a (f'' + f'/r - m^2 f / r^2) - omega f + s f^3 = 0 on (0, R] with f(0) = 0 and
// f(R) = vortex_asymptotic(R) by Newton's method on the second-order discretization
// with n intervals. Throws NonConvergenceError after max_iterations.
ProfileSolve solve_radial_profile(int m, double omega, double a, double s, double radius, int n,
                                  const ProfileSolveOptions &options = {});

// Discrete ODE residual of a tabulated profile at r_1..r_{n-1}.
std::vector<double> radial_residual(const RadialProfile &profile);

void write_profile_csv(const RadialProfile &profile, const std::string &path);

struct VortexSpec
{
  int m = 1;
  double omega = -1.0;
  Point center{0.0, 0.0, 0.0};
  RadialProfile profile;
};

// f(r) exp(i m theta) about spec.center on a 2D grid.
ComplexField make_vortex_field(const Grid &grid, const VortexSpec &spec);

// sqrt(rho) * prod_j (Psi_j / sqrt(rho))
ComplexField make_multi_vortex(const Grid &grid, const std::vector<VortexSpec> &specs, double rho);

// Multiplies by exp(i c.x / (2a)); leaves |Psi| unchanged.
ComplexField add_backflow(const ComplexField &psi, const Point &velocity, double a);

// Ring of radius ring_radius in the plane z = center[2], axis along z:
//   Psi = f(sqrt(sigma^2 + z^2)) exp(i m atan2(z, sigma)),  sigma = rho_cyl - ring_radius.
ComplexField make_vortex_ring(const Grid &grid, double ring_radius, const Point &center, int m,
                              const RadialProfile &profile);

// Same ring built from its meridional cross-section, a vortex at rho = R and its mirror at
// rho = -R. With d+- = |(rho -+ R, z)|:
//   Psi = f(d-) f(d+) / sqrt(rho_bg) exp(i m [atan2(z, rho - R) - atan2(z, rho + R)]).
// Smooth on the axis, and the phase decays away from the ring.
ComplexField make_vortex_ring_mirrored(const Grid &grid, double ring_radius, const Point &center, int m,
                                       const RadialProfile &profile);

}  // namespace msd

#endif  // MSD_SOLUTIONS_HPP
