// SPDX-License-Identifier: Apache-2.0

#include "msd/integrate.hpp"

#include <array>
#include <cmath>
#include <sstream>

#include "msd/kernels.hpp"

namespace msd
{

namespace
{

std::string blowup_message(double t, double max_abs)
{
  std::ostringstream os;
  os << "solution blew up at t = " << t << " (max |psi| = " << max_abs << ")";
  return os.str();
}

}  // namespace

BlowUpError::BlowUpError(double t, double max_abs)
  : std::runtime_error(blowup_message(t, max_abs)), time_(t), max_abs_(max_abs)
{
}

Stepper::Stepper(const Grid &grid, NlseParams params, BoundaryCondition bc, StepperConfig config)
  : grid_(grid), params_(std::move(params)), bc_(std::move(bc)), config_(config),
    map_(boundary_map(grid)), k1_(grid), k2_(grid), k3_(grid), k4_(grid), tmp_(grid)
{
  if (!(config_.k > 0.0) || !std::isfinite(config_.k))
  {
    throw std::invalid_argument("time step k must be positive");
  }
  if (std::holds_alternative<bc::OneSided2>(bc_) && grid.dim() != 1)
  {
    throw std::invalid_argument("one-sided boundary condition is only defined on 1D grids");
  }
  if (const auto *e = std::get_if<bc::ExactDirichlet>(&bc_))
  {
    if (!e->solution.value || !e->solution.time_derivative)
    {
      throw std::invalid_argument("exact boundary condition needs a value and a time derivative");
    }
  }
  if (!params_.potential().empty() && params_.potential().size() != grid.size())
  {
    throw std::invalid_argument("potential sampled on a different grid");
  }
}

BoundaryRate Stepper::derivative(const ComplexField &psi, double t, ComplexField &psi_t) const
{
  rhs_interior(psi, params_, t, psi_t, config_.exec);
  return apply_boundary(bc_, psi, psi_t, map_, params_, t);
}

void Stepper::stage(const ComplexField &psi, double t, ComplexField &out) const
{
  const BoundaryRate rate = derivative(psi, t, out);
  if (observer_)
  {
    observer_(psi, out, rate);
  }
}

void Stepper::check(const ComplexField &psi, double t) const
{
  const double m = psi.max_abs();
  if (!(m <= config_.blowup_threshold))
  {
    throw BlowUpError(t, m);
  }
}

double Stepper::step(ComplexField &psi, double t)
{
  const double k = config_.k;
  const Exec ex = config_.exec;
  if (config_.scheme == Scheme::euler)
  {
    stage(psi, t, k1_);
    kernels::axpy(psi.values(), k, k1_.values(), psi.values(), ex);
  }
  else
  {
    stage(psi, t, k1_);
    kernels::axpy(psi.values(), 0.5 * k, k1_.values(), tmp_.values(), ex);
    stage(tmp_, t + 0.5 * k, k2_);
    kernels::axpy(psi.values(), 0.5 * k, k2_.values(), tmp_.values(), ex);
    stage(tmp_, t + 0.5 * k, k3_);
    kernels::axpy(psi.values(), k, k3_.values(), tmp_.values(), ex);
    stage(tmp_, t + k, k4_);
    kernels::rk4_combine(psi.values(), k, k1_.values(), k2_.values(), k3_.values(),
                         k4_.values(), ex);
  }
  const double t_new = t + k;
  if (const auto *e = std::get_if<bc::ExactDirichlet>(&bc_); e && e->overwrite_values)
  {
    for (const auto &pair : map_.pairs)
    {
      psi[pair.b] = e->solution.value(grid_.coord(pair.b), t_new);
    }
  }
  check(psi, t_new);
  return t_new;
}

ComplexField rk4_step(const ComplexField &psi, double t, const NlseParams &params,
                      const BoundaryCondition &bc, double k)
{
  Stepper stepper(psi.grid(), params, bc, StepperConfig{k, Scheme::rk4});
  ComplexField out = psi;
  stepper.step(out, t);
  return out;
}

ComplexField euler_step(const ComplexField &psi, double t, const NlseParams &params,
                        const BoundaryCondition &bc, double k)
{
  Stepper stepper(psi.grid(), params, bc, StepperConfig{k, Scheme::euler});
  ComplexField out = psi;
  stepper.step(out, t);
  return out;
}

cplx rk4_amplification(cplx z)
{
  return 1.0 + z * (1.0 + z * (0.5 + z * (1.0 / 6.0 + z / 24.0)));
}

double linear_stability_bound(double h, double a, int d)
{
  if (!(h > 0.0) || a == 0.0 || d < 1 || d > 3)
  {
    throw std::invalid_argument("linear_stability_bound: need h > 0, a != 0, d in {1,2,3}");
  }
  return h * h / (d * std::sqrt(2.0) * std::abs(a));
}

std::span<const double> stability_g_set(int d)
{
  static constexpr std::array<double, 4> g1{4, 3, 1, 0};
  static constexpr std::array<double, 6> g2{8, 7, 6, 2, 1, 0};
  static constexpr std::array<double, 8> g3{12, 11, 10, 9, 3, 2, 1, 0};
  switch (d)
  {
    case 1:
      return g1;
    case 2:
      return g2;
    case 3:
      return g3;
    default:
      throw std::invalid_argument("stability_g_set: dimension must be 1, 2 or 3");
  }
}

StabilityTerms stability_terms(const ComplexField &psi, const ComplexField &psi_t, const NlseParams &params,
                               const BoundaryMap &map, const BoundaryCondition &bc)
{
  const Grid &g = psi.grid();
  const double h = g.min_spacing();
  const double scale = h * h / params.a();
  const auto gset = stability_g_set(g.dim());

  StabilityTerms terms;
  for (const std::size_t i : map.interior)
  {
    const double li = scale * nonlinear_term(psi[i], params.potential_at(i), params.s());
    for (const double gv : gset)
    {
      terms.interior = std::max(terms.interior, std::abs(li - gv));
    }
  }

  if (std::holds_alternative<bc::LaplacianZero>(bc))
  {
    for (const auto &pair : map.pairs)
    {
      const double bb = scale * nonlinear_term(psi[pair.b], params.potential_at(pair.b), params.s());
      terms.boundary = std::max(terms.boundary, std::abs(bb));
    }
  }
  else if (const auto *m = std::get_if<bc::Msd>(&bc))
  {
    for (const auto &pair : map.pairs)
    {
      double omega = 0.0;
      if (m->frozen_omega)
      {
        omega = *m->frozen_omega;
      }
      else if (mod2(psi[pair.inner]) > m->eps_sing)
      {
        omega = std::imag(psi_t[pair.inner] / psi[pair.inner]);
      }
      terms.boundary = std::max(terms.boundary, std::abs(scale * omega));
    }
  }
  return terms;
}

double full_stability_bound(const ComplexField &psi, const ComplexField &psi_t,
                            const NlseParams &params, const BoundaryMap &map,
                            const BoundaryCondition &bc)
{
  const auto terms = stability_terms(psi, psi_t, params, map, bc);
  const double h = psi.grid().min_spacing();
  return std::sqrt(8.0) / std::max(terms.interior, terms.boundary) * h * h / std::abs(params.a());
}

double full_stability_bound(const ComplexField &psi, const NlseParams &params,
                            const BoundaryCondition &bc)
{
  const BoundaryMap map = boundary_map(psi.grid());
  const ComplexField psi_t = rhs_interior(psi, params, 0.0);
  return full_stability_bound(psi, psi_t, params, map, bc);
}

}  // namespace msd
