// SPDX-License-Identifier: Apache-2.0

#include "msd/bc.hpp"

#include <stdexcept>

namespace msd
{

std::string bc_name(const BoundaryCondition &bc)
{
  struct Name
  {
    std::string operator()(const bc::Msd &) const { return "msd"; }
    std::string operator()(const bc::LaplacianZero &) const { return "l0"; }
    std::string operator()(const bc::OneSided2 &) const { return "1sd"; }
    std::string operator()(const bc::ExactDirichlet &) const { return "exact"; }
    std::string operator()(const bc::ZeroDirichlet &) const { return "zero"; }
  };
  return std::visit(Name{}, bc);
}

BoundaryRate msd_apply(const ComplexField &psi, ComplexField &psi_t, const BoundaryMap &map,
                       double eps_sing)
{
  BoundaryRate rate;
  rate.omega_tilde.resize(map.pairs.size());
  for (std::size_t n = 0; n < map.pairs.size(); ++n)
  {
    const auto [b, inner] = map.pairs[n];
    if (mod2(psi[inner]) > eps_sing)
    {
      const double omega = std::imag(psi_t[inner] / psi[inner]);
      psi_t[b] = cplx(0.0, omega) * psi[b];
      rate.omega_tilde[n] = omega;
    }
    else
    {
      psi_t[b] = 0.0;
      rate.omega_tilde[n] = 0.0;
    }
  }
  return rate;
}

BoundaryRate msd_apply_frozen(const ComplexField &psi, ComplexField &psi_t,
                              const BoundaryMap &map, double omega)
{
  BoundaryRate rate;
  rate.omega_tilde.assign(map.pairs.size(), omega);
  for (const auto &[b, inner] : map.pairs)
  {
    psi_t[b] = cplx(-omega * psi[b].imag(), omega * psi[b].real());
  }
  return rate;
}

BoundaryRate msd_apply_split(std::span<const double> psi_re, std::span<const double> psi_im,
                             std::span<double> psi_t_re, std::span<double> psi_t_im,
                             const BoundaryMap &map, double eps_sing)
{
  BoundaryRate rate;
  rate.omega_tilde.resize(map.pairs.size());
  for (std::size_t n = 0; n < map.pairs.size(); ++n)
  {
    const auto [b, inner] = map.pairs[n];
    const double den = psi_re[inner] * psi_re[inner] + psi_im[inner] * psi_im[inner];
    double omega = 0.0;
    if (den > eps_sing)
    {
      omega = (psi_t_im[inner] * psi_re[inner] - psi_t_re[inner] * psi_im[inner]) / den;
    }
    psi_t_re[b] = -omega * psi_im[b];
    psi_t_im[b] = omega * psi_re[b];
    rate.omega_tilde[n] = omega;
  }
  return rate;
}

std::vector<cplx> msd_laplacian(const ComplexField &psi, const ComplexField &lap_interior,
                                const BoundaryMap &map, const NlseParams &params,
                                double eps_sing)
{
  std::vector<cplx> out(map.pairs.size());
  for (std::size_t n = 0; n < map.pairs.size(); ++n)
  {
    const auto [b, inner] = map.pairs[n];
    const double nb = nonlinear_term(psi[b], params.potential_at(b), params.s());
    if (mod2(psi[inner]) > eps_sing)
    {
      const double nin = nonlinear_term(psi[inner], params.potential_at(inner), params.s());
      // Im(i z) = Re(z)
      const double factor =
        std::real(lap_interior[inner] / psi[inner]) + (nin - nb) / params.a();
      out[n] = factor * psi[b];
    }
    else
    {
      out[n] = (-nb / params.a()) * psi[b];
    }
  }
  return out;
}

std::array<cplx, 2> msd_laplacian_cd1d(const ComplexField &psi, const NlseParams &params,
                                       double eps_sing)
{
  const Grid &g = psi.grid();
  if (g.dim() != 1)
  {
    throw std::invalid_argument("msd_laplacian_cd1d requires a 1D grid");
  }
  const double ih2 = 1.0 / (g.spacing(0) * g.spacing(0));
  const std::size_t last = g.size() - 1;
  auto end = [&](std::size_t b, std::size_t b1, std::size_t b2)
  {
    const double nb = nonlinear_term(psi[b], params.potential_at(b), params.s());
    if (mod2(psi[b1]) <= eps_sing)
    {
      return cplx((-nb / params.a()) * psi[b]);
    }
    const double nin = nonlinear_term(psi[b1], params.potential_at(b1), params.s());
    const double stencil = std::imag(cplx(0.0, 1.0) * ((psi[b] + psi[b2]) / psi[b1])) - 2.0;
    return (stencil * ih2 + (nin - nb) / params.a()) * psi[b];
  };
  return {end(0, 1, 2), end(last, last - 1, last - 2)};
}

void l0_apply(const ComplexField &psi, ComplexField &psi_t, const BoundaryMap &map,
              const NlseParams &params)
{
  for (const auto &[b, inner] : map.pairs)
  {
    psi_t[b] = rhs_point(psi[b], 0.0, params.potential_at(b), params);
  }
}

std::array<cplx, 2> one_sided_laplacian(const ComplexField &psi)
{
  const Grid &g = psi.grid();
  if (g.dim() != 1)
  {
    throw std::invalid_argument("one-sided boundary Laplacian is defined for 1D grids only");
  }
  const double ih2 = 1.0 / (g.spacing(0) * g.spacing(0));
  const std::size_t e = g.size() - 1;
  const cplx left = (-psi[3] + 4.0 * psi[2] - 5.0 * psi[1] + 2.0 * psi[0]) * ih2;
  const cplx right = (-psi[e - 3] + 4.0 * psi[e - 2] - 5.0 * psi[e - 1] + 2.0 * psi[e]) * ih2;
  return {left, right};
}

void one_sided_apply(const ComplexField &psi, ComplexField &psi_t, const NlseParams &params)
{
  const auto lap = one_sided_laplacian(psi);
  const std::size_t e = psi.size() - 1;
  psi_t[0] = rhs_point(psi[0], lap[0], params.potential_at(0), params);
  psi_t[e] = rhs_point(psi[e], lap[1], params.potential_at(e), params);
}

void exact_apply(ComplexField &psi_t, const BoundaryMap &map, const bc::ExactSolution &solution,
                 double t)
{
  const Grid &g = psi_t.grid();
  for (const auto &pair : map.pairs)
  {
    psi_t[pair.b] = solution.time_derivative(g.coord(pair.b), t);
  }
}

void zero_apply(ComplexField &psi_t, const BoundaryMap &map)
{
  for (const auto &pair : map.pairs)
  {
    psi_t[pair.b] = 0.0;
  }
}

BoundaryRate apply_boundary(const BoundaryCondition &bc, const ComplexField &psi,
                            ComplexField &psi_t, const BoundaryMap &map,
                            const NlseParams &params, double t)
{
  struct Apply
  {
    const ComplexField &psi;
    ComplexField &psi_t;
    const BoundaryMap &map;
    const NlseParams &params;
    double t;

    BoundaryRate operator()(const bc::Msd &m) const
    {
      if (m.frozen_omega)
      {
        return msd_apply_frozen(psi, psi_t, map, *m.frozen_omega);
      }
      return msd_apply(psi, psi_t, map, m.eps_sing);
    }
    BoundaryRate operator()(const bc::LaplacianZero &) const
    {
      l0_apply(psi, psi_t, map, params);
      return {};
    }
    BoundaryRate operator()(const bc::OneSided2 &) const
    {
      one_sided_apply(psi, psi_t, params);
      return {};
    }
    BoundaryRate operator()(const bc::ExactDirichlet &e) const
    {
      exact_apply(psi_t, map, e.solution, t);
      return {};
    }
    BoundaryRate operator()(const bc::ZeroDirichlet &) const
    {
      zero_apply(psi_t, map);
      return {};
    }
  };
  return std::visit(Apply{psi, psi_t, map, params, t}, bc);
}

}  // namespace msd
