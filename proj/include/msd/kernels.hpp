// SPDX-License-Identifier: Apache-2.0

#ifndef MSD_KERNELS_HPP
#define MSD_KERNELS_HPP

#include <span>

#include "msd/field.hpp"

//
// Interior stencil kernels. The serial versions are the reference; the parallel
// versions split the same per-row loop over OpenMP threads and produce bit-identical
// results because every output point is computed by the same expression.
//
// Only interior entries of `out` are written.
//
namespace msd::kernels
{

struct RhsCoefficients
{
  double a;
  double s;
  std::span<const double> potential;  // empty means V = 0
};

namespace serial
{
void laplacian(const Grid &grid, std::span<const cplx> psi, std::span<cplx> out);
void nlse_rhs(const Grid &grid, std::span<const cplx> psi, const RhsCoefficients &c,
              std::span<cplx> out);
}  // namespace serial

namespace parallel
{
void laplacian(const Grid &grid, std::span<const cplx> psi, std::span<cplx> out);
void nlse_rhs(const Grid &grid, std::span<const cplx> psi, const RhsCoefficients &c,
              std::span<cplx> out);
}  // namespace parallel

// out[i] = x[i] + alpha * y[i] over every point.
void axpy(std::span<const cplx> x, double alpha, std::span<const cplx> y,
          std::span<cplx> out, Exec exec);

// psi += (k/6) (k1 + 2 k2 + 2 k3 + k4)
void rk4_combine(std::span<cplx> psi, double k, std::span<const cplx> k1,
                 std::span<const cplx> k2, std::span<const cplx> k3,
                 std::span<const cplx> k4, Exec exec);

int max_threads();

}  // namespace msd::kernels

#endif  // MSD_KERNELS_HPP
