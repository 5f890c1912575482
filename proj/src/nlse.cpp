// SPDX-License-Identifier: Apache-2.0

#include "msd/nlse.hpp"

#include <cmath>
#include <stdexcept>

#include "msd/kernels.hpp"

namespace msd
{

NlseParams::NlseParams(double a, double s) : a_(a), s_(s)
{
  if (a == 0.0 || !std::isfinite(a) || !std::isfinite(s))
  {
    throw std::invalid_argument("NLSE dispersion coefficient a must be finite and nonzero");
  }
}

NlseParams::NlseParams(double a, double s, const Grid &grid,
                       const std::function<double(const Point &)> &potential)
  : NlseParams(a, s)
{
  if (potential)
  {
    potential_.resize(grid.size());
    for (std::size_t i = 0; i < grid.size(); ++i)
    {
      potential_[i] = potential(grid.coord(i));
    }
  }
}

void rhs_interior(const ComplexField &psi, const NlseParams &params, double /*t*/,
                  ComplexField &psi_t, Exec exec)
{
  if (!(psi_t.grid() == psi.grid()))
  {
    throw std::invalid_argument("rhs_interior: output field lives on a different grid");
  }
  if (!params.potential().empty() && params.potential().size() != psi.size())
  {
    throw std::invalid_argument("rhs_interior: potential sampled on a different grid");
  }
  const kernels::RhsCoefficients c{params.a(), params.s(), params.potential()};
  if (exec == Exec::parallel)
  {
    kernels::parallel::nlse_rhs(psi.grid(), psi.values(), c, psi_t.values());
  }
  else
  {
    kernels::serial::nlse_rhs(psi.grid(), psi.values(), c, psi_t.values());
  }
}

ComplexField rhs_interior(const ComplexField &psi, const NlseParams &params, double t,
                          Exec exec)
{
  ComplexField out(psi.grid());
  rhs_interior(psi, params, t, out, exec);
  return out;
}

}  // namespace msd
