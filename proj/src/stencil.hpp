// SPDX-License-Identifier: Apache-2.0
//
// Per-row stencil bodies shared by the serial and OpenMP kernels. A "row" is the run
// of interior points along axis 0 at fixed (j, k).

#ifndef MSD_SRC_STENCIL_HPP
#define MSD_SRC_STENCIL_HPP

#include <cstddef>

#include "msd/kernels.hpp"

namespace msd::kernels::detail
{

struct RowRange
{
  int j_lo, j_hi, k_lo, k_hi;
};

inline RowRange interior_rows(const Grid &g)
{
  RowRange r{0, 1, 0, 1};
  if (g.dim() >= 2)
  {
    r.j_lo = 1;
    r.j_hi = g.shape(1) - 1;
  }
  if (g.dim() >= 3)
  {
    r.k_lo = 1;
    r.k_hi = g.shape(2) - 1;
  }
  return r;
}

template <int Dim>
inline void laplacian_row(const Grid &g, const cplx *psi, cplx *out, int j, int k)
{
  const int nx = g.shape(0);
  const double ihx = 1.0 / (g.spacing(0) * g.spacing(0));
  const double ihy = Dim >= 2 ? 1.0 / (g.spacing(1) * g.spacing(1)) : 0.0;
  const double ihz = Dim >= 3 ? 1.0 / (g.spacing(2) * g.spacing(2)) : 0.0;
  const std::size_t sy = g.stride(1);
  const std::size_t sz = g.stride(2);
  const std::size_t base = g.index(0, j, k);
  for (int i = 1; i < nx - 1; ++i)
  {
    const std::size_t p = base + std::size_t(i);
    const cplx c2 = 2.0 * psi[p];
    cplx lap = (psi[p + 1] - c2 + psi[p - 1]) * ihx;
    if constexpr (Dim >= 2)
    {
      lap += (psi[p + sy] - c2 + psi[p - sy]) * ihy;
    }
    if constexpr (Dim >= 3)
    {
      lap += (psi[p + sz] - c2 + psi[p - sz]) * ihz;
    }
    out[p] = lap;
  }
}

// Psi_t = i (a lap(Psi) + (s |Psi|^2 - V) Psi)
template <int Dim>
inline void nlse_row(const Grid &g, const cplx *psi, const RhsCoefficients &c, cplx *out,
                     int j, int k)
{
  const int nx = g.shape(0);
  const double ihx = 1.0 / (g.spacing(0) * g.spacing(0));
  const double ihy = Dim >= 2 ? 1.0 / (g.spacing(1) * g.spacing(1)) : 0.0;
  const double ihz = Dim >= 3 ? 1.0 / (g.spacing(2) * g.spacing(2)) : 0.0;
  const std::size_t sy = g.stride(1);
  const std::size_t sz = g.stride(2);
  const std::size_t base = g.index(0, j, k);
  const double *pot = c.potential.empty() ? nullptr : c.potential.data();
  for (int i = 1; i < nx - 1; ++i)
  {
    const std::size_t p = base + std::size_t(i);
    const double pr = psi[p].real();
    const double pi = psi[p].imag();
    double lr = (psi[p + 1].real() - 2.0 * pr + psi[p - 1].real()) * ihx;
    double li = (psi[p + 1].imag() - 2.0 * pi + psi[p - 1].imag()) * ihx;
    if constexpr (Dim >= 2)
    {
      lr += (psi[p + sy].real() - 2.0 * pr + psi[p - sy].real()) * ihy;
      li += (psi[p + sy].imag() - 2.0 * pi + psi[p - sy].imag()) * ihy;
    }
    if constexpr (Dim >= 3)
    {
      lr += (psi[p + sz].real() - 2.0 * pr + psi[p - sz].real()) * ihz;
      li += (psi[p + sz].imag() - 2.0 * pi + psi[p - sz].imag()) * ihz;
    }
    double nl = c.s * (pr * pr + pi * pi);
    if (pot)
    {
      nl -= pot[p];
    }
    const double gr = c.a * lr + nl * pr;
    const double gi = c.a * li + nl * pi;
    out[p] = cplx(-gi, gr);
  }
}

}  // namespace msd::kernels::detail

#endif  // MSD_SRC_STENCIL_HPP
