// SPDX-License-Identifier: Apache-2.0

#include "stencil.hpp"

namespace msd::kernels::serial
{

namespace
{

template <int Dim, class Body>
void for_rows(const Grid &g, Body &&body)
{
  const auto r = detail::interior_rows(g);
  for (int k = r.k_lo; k < r.k_hi; ++k)
  {
    for (int j = r.j_lo; j < r.j_hi; ++j)
    {
      body(j, k);
    }
  }
}

}  // namespace

void laplacian(const Grid &grid, std::span<const cplx> psi, std::span<cplx> out)
{
  switch (grid.dim())
  {
    case 1:
      for_rows<1>(grid, [&](int j, int k) { detail::laplacian_row<1>(grid, psi.data(), out.data(), j, k); });
      break;
    case 2:
      for_rows<2>(grid, [&](int j, int k) { detail::laplacian_row<2>(grid, psi.data(), out.data(), j, k); });
      break;
    default:
      for_rows<3>(grid, [&](int j, int k) { detail::laplacian_row<3>(grid, psi.data(), out.data(), j, k); });
      break;
  }
}

void nlse_rhs(const Grid &grid, std::span<const cplx> psi, const RhsCoefficients &c,
              std::span<cplx> out)
{
  switch (grid.dim())
  {
    case 1:
      for_rows<1>(grid, [&](int j, int k) { detail::nlse_row<1>(grid, psi.data(), c, out.data(), j, k); });
      break;
    case 2:
      for_rows<2>(grid, [&](int j, int k) { detail::nlse_row<2>(grid, psi.data(), c, out.data(), j, k); });
      break;
    default:
      for_rows<3>(grid, [&](int j, int k) { detail::nlse_row<3>(grid, psi.data(), c, out.data(), j, k); });
      break;
  }
}

}  // namespace msd::kernels::serial
