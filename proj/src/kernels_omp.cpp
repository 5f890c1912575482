// SPDX-License-Identifier: Apache-2.0

#include <omp.h>

#include "stencil.hpp"

namespace msd::kernels
{

namespace
{

// Rows are flattened to a single index so that short 2D and thin 3D grids still
// expose enough parallel work.
template <class Body>
void for_rows_omp(const Grid &g, Body &&body)
{
  const auto r = detail::interior_rows(g);
  const int nj = r.j_hi - r.j_lo;
  const long rows = long(nj) * long(r.k_hi - r.k_lo);
#pragma omp parallel for schedule(static)
  for (long row = 0; row < rows; ++row)
  {
    const int j = r.j_lo + int(row % nj);
    const int k = r.k_lo + int(row / nj);
    body(j, k);
  }
}

}  // namespace

namespace parallel
{

// 1D grids are a single row; they go through the serial path.
void laplacian(const Grid &grid, std::span<const cplx> psi, std::span<cplx> out)
{
  switch (grid.dim())
  {
    case 1:
      serial::laplacian(grid, psi, out);
      break;
    case 2:
      for_rows_omp(grid, [&](int j, int k) { detail::laplacian_row<2>(grid, psi.data(), out.data(), j, k); });
      break;
    default:
      for_rows_omp(grid, [&](int j, int k) { detail::laplacian_row<3>(grid, psi.data(), out.data(), j, k); });
      break;
  }
}

void nlse_rhs(const Grid &grid, std::span<const cplx> psi, const RhsCoefficients &c,
              std::span<cplx> out)
{
  switch (grid.dim())
  {
    case 1:
      serial::nlse_rhs(grid, psi, c, out);
      break;
    case 2:
      for_rows_omp(grid, [&](int j, int k) { detail::nlse_row<2>(grid, psi.data(), c, out.data(), j, k); });
      break;
    default:
      for_rows_omp(grid, [&](int j, int k) { detail::nlse_row<3>(grid, psi.data(), c, out.data(), j, k); });
      break;
  }
}

}  // namespace parallel

void axpy(std::span<const cplx> x, double alpha, std::span<const cplx> y,
          std::span<cplx> out, Exec exec)
{
  const long n = long(out.size());
  const cplx *xp = x.data();
  const cplx *yp = y.data();
  cplx *op = out.data();
#pragma omp parallel for schedule(static) if (exec == Exec::parallel)
  for (long i = 0; i < n; ++i)
  {
    op[i] = xp[i] + alpha * yp[i];
  }
}

void rk4_combine(std::span<cplx> psi, double k, std::span<const cplx> k1,
                 std::span<const cplx> k2, std::span<const cplx> k3,
                 std::span<const cplx> k4, Exec exec)
{
  const long n = long(psi.size());
  const double w = k / 6.0;
  cplx *p = psi.data();
#pragma omp parallel for schedule(static) if (exec == Exec::parallel)
  for (long i = 0; i < n; ++i)
  {
    p[i] += w * (k1[i] + 2.0 * k2[i] + 2.0 * k3[i] + k4[i]);
  }
}

int max_threads()
{
  return omp_get_max_threads();
}

}  // namespace msd::kernels
