// SPDX-License-Identifier: Apache-2.0

#include "msd/field.hpp"

#include <algorithm>
#include <cmath>
#include <stdexcept>
#include <string>

#include "msd/kernels.hpp"

namespace msd
{

Grid::Grid(int dim, std::array<int, 3> shape, std::array<double, 3> spacing,
           std::array<double, 3> origin)
  : dim_(dim), shape_(shape), spacing_(spacing), origin_(origin)
{
  if (dim < 1 || dim > 3)
  {
    throw std::invalid_argument("grid dimension must be 1, 2 or 3, got " + std::to_string(dim));
  }
  for (int a = 0; a < 3; ++a)
  {
    if (a < dim)
    {
      if (shape_[a] < 4)
      {
        throw std::invalid_argument("grid axis " + std::to_string(a) + " has " +
                                    std::to_string(shape_[a]) + " points; at least 4 required");
      }
      if (!(spacing_[a] > 0.0) || !std::isfinite(spacing_[a]))
      {
        throw std::invalid_argument("grid spacing must be positive and finite");
      }
    }
    else
    {
      shape_[a] = 1;
      spacing_[a] = 1.0;
      origin_[a] = 0.0;
    }
  }
}

Grid Grid::uniform(int dim, int n, double h, double lo)
{
  return Grid(dim, {n, n, n}, {h, h, h}, {lo, lo, lo});
}

Grid Grid::from_extent(int dim, double lo, double hi, double h)
{
  if (!(hi > lo) || !(h > 0.0))
  {
    throw std::invalid_argument("grid extent must satisfy hi > lo and h > 0");
  }
  const int n = int(std::lround((hi - lo) / h)) + 1;
  return uniform(dim, n, h, lo);
}

Grid Grid::centered(int dim, int n, double h)
{
  return uniform(dim, n, h, -0.5 * (n - 1) * h);
}

double Grid::min_spacing() const
{
  return *std::min_element(spacing_.begin(), spacing_.begin() + dim_);
}

std::array<int, 3> Grid::unravel(std::size_t idx) const
{
  const std::size_t nx = std::size_t(shape_[0]);
  const std::size_t ny = std::size_t(shape_[1]);
  return {int(idx % nx), int((idx / nx) % ny), int(idx / (nx * ny))};
}

Point Grid::coord(std::size_t idx) const
{
  const auto ijk = unravel(idx);
  Point p{0.0, 0.0, 0.0};
  for (int a = 0; a < dim_; ++a)
  {
    p[a] = coord(a, ijk[a]);
  }
  return p;
}

bool Grid::on_surface(std::size_t idx) const
{
  const auto ijk = unravel(idx);
  for (int a = 0; a < dim_; ++a)
  {
    if (ijk[a] == 0 || ijk[a] == shape_[a] - 1)
    {
      return true;
    }
  }
  return false;
}

bool ComplexField::all_finite() const
{
  return std::all_of(values_.begin(), values_.end(), [](cplx z)
                     { return std::isfinite(z.real()) && std::isfinite(z.imag()); });
}

double ComplexField::max_abs() const
{
  double m2 = 0.0;
  for (const cplx z : values_)
  {
    const double v = mod2(z);
    if (std::isnan(v))
    {
      return v;
    }
    m2 = std::max(m2, v);
  }
  return std::sqrt(m2);
}

BoundaryMap boundary_map(const Grid &grid)
{
  BoundaryMap map;
  const std::size_t n = grid.size();
  map.interior.reserve(n);
  for (std::size_t idx = 0; idx < n; ++idx)
  {
    auto ijk = grid.unravel(idx);
    bool surface = false;
    for (int a = 0; a < grid.dim(); ++a)
    {
      if (ijk[a] == 0)
      {
        ijk[a] = 1;
        surface = true;
      }
      else if (ijk[a] == grid.shape(a) - 1)
      {
        ijk[a] = grid.shape(a) - 2;
        surface = true;
      }
    }
    if (surface)
    {
      map.pairs.push_back({idx, grid.index(ijk[0], ijk[1], ijk[2])});
    }
    else
    {
      map.interior.push_back(idx);
    }
  }
  return map;
}

ComplexField laplacian_cd(const ComplexField &psi, Exec exec)
{
  ComplexField out(psi.grid());
  if (exec == Exec::parallel)
  {
    kernels::parallel::laplacian(psi.grid(), psi.values(), out.values());
  }
  else
  {
    kernels::serial::laplacian(psi.grid(), psi.values(), out.values());
  }
  return out;
}

}  // namespace msd
