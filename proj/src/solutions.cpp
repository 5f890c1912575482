// SPDX-License-Identifier: Apache-2.0

#include "msd/solutions.hpp"

#include <algorithm>
#include <cmath>
#include <fstream>
#include <iomanip>
#include <numbers>
#include <sstream>

namespace msd
{

void SolitonParams::validate() const
{
  if (a == 0.0 || s == 0.0)
  {
    throw std::invalid_argument("dark soliton needs nonzero a and s");
  }
  if (!(omega / s > 0.0))
  {
    throw std::invalid_argument("dark soliton needs omega/s > 0 for a real amplitude");
  }
  if (!(-omega / a > 0.0))
  {
    throw std::invalid_argument("dark soliton needs -omega/a > 0 for a real width");
  }
}

double SolitonParams::amplitude() const
{
  return std::sqrt(omega / s);
}

double SolitonParams::inverse_width() const
{
  return std::sqrt(-omega / (2.0 * a));
}

namespace
{

cplx soliton_phase(double x, double t, const SolitonParams &p)
{
  const double phase = p.c * x / (2.0 * p.a) + p.phase_rate() * t;
  return {std::cos(phase), std::sin(phase)};
}

}  // namespace

cplx dark_soliton(double x, double t, const SolitonParams &p)
{
  p.validate();
  const double u = p.inverse_width() * (x - p.c * t);
  return p.amplitude() * std::tanh(u) * soliton_phase(x, t, p);
}

cplx dark_soliton_dt(double x, double t, const SolitonParams &p)
{
  p.validate();
  const double kappa = p.inverse_width();
  const double u = kappa * (x - p.c * t);
  const double th = std::tanh(u);
  const double sech2 = 1.0 - th * th;
  const cplx e = soliton_phase(x, t, p);
  const double amp = p.amplitude();
  // d/dt of the envelope plus the phase rotation
  return amp * (-p.c * kappa * sech2) * e + cplx(0.0, p.phase_rate()) * (amp * th) * e;
}

cplx dark_soliton_dxx(double x, double t, const SolitonParams &p)
{
  p.validate();
  const double kappa = p.inverse_width();
  const double u = kappa * (x - p.c * t);
  const double th = std::tanh(u);
  const double sech2 = 1.0 - th * th;
  const double q = p.c / (2.0 * p.a);
  const double amp = p.amplitude();
  const double g = th;
  const double g1 = kappa * sech2;
  const double g2 = -2.0 * kappa * kappa * th * sech2;
  // (g e^{iqx})'' = (g'' + 2 i q g' - q^2 g) e^{iqx}
  return amp * cplx(g2 - q * q * g, 2.0 * q * g1) * soliton_phase(x, t, p);
}

bc::ExactSolution dark_soliton_solution(const SolitonParams &p)
{
  p.validate();
  return {[p](const Point &x, double t) { return dark_soliton(x[0], t, p); },
          [p](const Point &x, double t) { return dark_soliton_dt(x[0], t, p); }};
}

double vortex_asymptotic(double r, int m, double omega, double a, double s)
{
  const double arg = omega / s + a * double(m) * double(m) / (s * r * r);
  return arg > 0.0 ? std::sqrt(arg) : 0.0;
}

double RadialProfile::operator()(double r) const
{
  r = std::abs(r);
  const double x = r / dr;
  const std::size_t j = std::size_t(x);
  if (j + 1 >= f.size())
  {
    return r <= radius() ? f.back() : vortex_asymptotic(r, m, omega, a, s);
  }
  const double w = x - double(j);
  return (1.0 - w) * f[j] + w * f[j + 1];
}

NonConvergenceError::NonConvergenceError(int iterations, double residual)
  : std::runtime_error([&]
                       {
                         std::ostringstream os;
                         os << "radial profile Newton solve did not converge after " << iterations
                            << " iterations (residual " << residual << ")";
                         return os.str();
                       }()),
    iterations_(iterations), residual_(residual)
{
}

namespace
{

struct RadialProblem
{
  int m;
  double omega, a, s, dr;
  int n;
  double f_outer;

  // f holds f_0..f_n; returns residuals at j = 1..n-1 in res[0..n-2]
  void residual(const std::vector<double> &f, std::vector<double> &res) const
  {
    const double idr2 = 1.0 / (dr * dr);
    const double m2 = double(m) * double(m);
    for (int j = 1; j < n; ++j)
    {
      const double r = j * dr;
      const double fl = f[j - 1], fc = f[j], fr = f[j + 1];
      const double lap = (fr - 2.0 * fc + fl) * idr2 + (fr - fl) / (2.0 * dr * r) - m2 * fc / (r * r);
      res[j - 1] = a * lap - omega * fc + s * fc * fc * fc;
    }
  }

  void jacobian(const std::vector<double> &f, std::vector<double> &lower, std::vector<double> &diag,
                std::vector<double> &upper) const
  {
    const double idr2 = 1.0 / (dr * dr);
    const double m2 = double(m) * double(m);
    for (int j = 1; j < n; ++j)
    {
      const double r = j * dr;
      lower[j - 1] = a * (idr2 - 1.0 / (2.0 * dr * r));
      upper[j - 1] = a * (idr2 + 1.0 / (2.0 * dr * r));
      diag[j - 1] = a * (-2.0 * idr2 - m2 / (r * r)) - omega + 3.0 * s * f[j] * f[j];
    }
  }
};

double inf_norm(const std::vector<double> &v)
{
  double m = 0.0;
  for (const double x : v)
  {
    m = std::max(m, std::abs(x));
  }
  return m;
}

// Thomas algorithm; lower[0] and upper[last] are ignored. rhs is overwritten with the
// solution.
void solve_tridiagonal(const std::vector<double> &lower, std::vector<double> diag,
                       const std::vector<double> &upper, std::vector<double> &rhs)
{
  const std::size_t n = diag.size();
  for (std::size_t i = 1; i < n; ++i)
  {
    const double w = lower[i] / diag[i - 1];
    diag[i] -= w * upper[i - 1];
    rhs[i] -= w * rhs[i - 1];
  }
  rhs[n - 1] /= diag[n - 1];
  for (std::size_t i = n - 1; i-- > 0;)
  {
    rhs[i] = (rhs[i] - upper[i] * rhs[i + 1]) / diag[i];
  }
}

}  // namespace

ProfileSolve solve_radial_profile(int m, double omega, double a, double s, double radius, int n,
                                  const ProfileSolveOptions &options)
{
  if (m < 1)
  {
    throw std::invalid_argument("radial profile needs winding number m >= 1");
  }
  if (!(omega / s > 0.0) || a == 0.0)
  {
    throw std::invalid_argument("radial profile needs background density omega/s > 0");
  }
  if (!(radius > 0.0) || n < 4)
  {
    throw std::invalid_argument("radial profile needs R > 0 and at least 4 intervals");
  }

  const double dr = radius / n;
  RadialProblem prob{m, omega, a, s, dr, n, vortex_asymptotic(radius, m, omega, a, s)};

  std::vector<double> f(std::size_t(n) + 1);
  f[0] = 0.0;
  f[std::size_t(n)] = prob.f_outer;
  if (options.initial.empty())
  {
    for (int j = 1; j < n; ++j)
    {
      f[j] = vortex_asymptotic(j * dr, m, omega, a, s);
    }
  }
  else
  {
    if (options.initial.size() != std::size_t(n - 1))
    {
      throw std::invalid_argument("initial iterate must have n-1 interior values");
    }
    std::copy(options.initial.begin(), options.initial.end(), f.begin() + 1);
  }

  const std::size_t nu = std::size_t(n - 1);
  std::vector<double> res(nu), lower(nu), diag(nu), upper(nu), step(nu), trial_res(nu);
  std::vector<double> trial(f.size());

  prob.residual(f, res);
  double norm = inf_norm(res);
  int it = 0;
  while (norm >= options.tolerance)
  {
    if (it >= options.max_iterations)
    {
      throw NonConvergenceError(it, norm);
    }
    ++it;
    prob.jacobian(f, lower, diag, upper);
    for (std::size_t i = 0; i < nu; ++i)
    {
      step[i] = -res[i];
    }
    solve_tridiagonal(lower, diag, upper, step);

    // Backtracking on the residual norm keeps the iterate away from the trivial root.
    double lambda = 1.0;
    double trial_norm = 0.0;
    for (int half = 0; half < 30; ++half)
    {
      trial = f;
      for (std::size_t i = 0; i < nu; ++i)
      {
        trial[i + 1] += lambda * step[i];
      }
      prob.residual(trial, trial_res);
      trial_norm = inf_norm(trial_res);
      if (trial_norm < (1.0 - 1e-4 * lambda) * norm || !(norm > 1e3 * options.tolerance))
      {
        break;
      }
      lambda *= 0.5;
    }
    f.swap(trial);
    res.swap(trial_res);
    norm = trial_norm;
  }

  ProfileSolve out;
  out.profile = RadialProfile{m, omega, a, s, dr, std::move(f)};
  out.iterations = it;
  out.residual = norm;
  return out;
}

std::vector<double> radial_residual(const RadialProfile &profile)
{
  const int n = int(profile.f.size()) - 1;
  RadialProblem prob{profile.m, profile.omega, profile.a, profile.s, profile.dr, n, profile.f.back()};
  std::vector<double> res(std::size_t(n - 1));
  prob.residual(profile.f, res);
  return res;
}

void write_profile_csv(const RadialProfile &profile, const std::string &path)
{
  std::ofstream os(path);
  if (!os)
  {
    throw std::runtime_error("cannot open " + path);
  }
  os << "r,f\n" << std::setprecision(17) << std::scientific;
  for (std::size_t j = 0; j < profile.f.size(); ++j)
  {
    os << double(j) * profile.dr << ',' << profile.f[j] << '\n';
  }
}

ComplexField make_vortex_field(const Grid &grid, const VortexSpec &spec)
{
  if (grid.dim() != 2)
  {
    throw std::invalid_argument("make_vortex_field requires a 2D grid");
  }
  return ComplexField::sample(grid, [&](const Point &x)
                              {
                                const double dx = x[0] - spec.center[0];
                                const double dy = x[1] - spec.center[1];
                                const double r = std::hypot(dx, dy);
                                const double theta = std::atan2(dy, dx);
                                return spec.profile(r) * std::polar(1.0, spec.m * theta);
                              });
}

ComplexField make_multi_vortex(const Grid &grid, const std::vector<VortexSpec> &specs, double rho)
{
  if (!(rho > 0.0))
  {
    throw std::invalid_argument("background density must be positive");
  }
  const double amp = std::sqrt(rho);
  ComplexField out(grid, cplx(amp, 0.0));
  for (const auto &spec : specs)
  {
    const ComplexField one = make_vortex_field(grid, spec);
    for (std::size_t i = 0; i < out.size(); ++i)
    {
      out[i] *= one[i] / amp;
    }
  }
  return out;
}

ComplexField add_backflow(const ComplexField &psi, const Point &velocity, double a)
{
  ComplexField out = psi;
  const Grid &g = psi.grid();
  for (std::size_t i = 0; i < out.size(); ++i)
  {
    const Point x = g.coord(i);
    const double phase = (velocity[0] * x[0] + velocity[1] * x[1] + velocity[2] * x[2]) / (2.0 * a);
    out[i] *= std::polar(1.0, phase);
  }
  return out;
}

ComplexField make_vortex_ring(const Grid &grid, double ring_radius, const Point &center, int m,
                              const RadialProfile &profile)
{
  if (grid.dim() != 3)
  {
    throw std::invalid_argument("make_vortex_ring requires a 3D grid");
  }
  return ComplexField::sample(grid, [&](const Point &x)
                              {
                                const double sigma =
                                  std::hypot(x[0] - center[0], x[1] - center[1]) - ring_radius;
                                const double z = x[2] - center[2];
                                return profile(std::hypot(sigma, z)) *
                                       std::polar(1.0, m * std::atan2(z, sigma));
                              });
}

ComplexField make_vortex_ring_mirrored(const Grid &grid, double ring_radius, const Point &center, int m,
                                       const RadialProfile &profile)
{
  if (grid.dim() != 3)
  {
    throw std::invalid_argument("make_vortex_ring_mirrored requires a 3D grid");
  }
  const double root_rho = std::sqrt(profile.omega / profile.s);
  return ComplexField::sample(grid, [&](const Point &x)
                              {
                                const double rho = std::hypot(x[0] - center[0], x[1] - center[1]);
                                const double z = x[2] - center[2];
                                const double amp = profile(std::hypot(rho - ring_radius, z)) *
                                                   profile(std::hypot(rho + ring_radius, z)) / root_rho;
                                const double phase =
                                  std::atan2(z, rho - ring_radius) - std::atan2(z, rho + ring_radius);
                                return amp * std::polar(1.0, m * phase);
                              });
}

}  // namespace msd
