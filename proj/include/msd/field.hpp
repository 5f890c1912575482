// SPDX-License-Identifier: Apache-2.0

#ifndef MSD_FIELD_HPP
#define MSD_FIELD_HPP

#include <array>
#include <complex>
#include <cstddef>
#include <span>
#include <vector>

namespace msd
{

using cplx = std::complex<double>;
using Point = std::array<double, 3>;

// |z|^2 without the hypot round trip std::norm takes in non-fast-math builds.
inline double mod2(cplx z)
{
  return z.real() * z.real() + z.imag() * z.imag();
}

enum class Exec
{
  serial,
  parallel
};

//
// Uniform rectangular grid in one, two or three dimensions.
//
// Storage order: axis 0 (x) varies fastest, so the linear index of (i, j, k) is
// i + n0 * (j + n1 * k). Axes beyond dim() have extent 1 and spacing 1. Every module
// that walks a field uses this linearization.
//
class Grid
{
public:
  Grid() = default;

  // Throws std::invalid_argument unless dim is 1..3, every active axis has at least
  // four points and every spacing is strictly positive.
  Grid(int dim, std::array<int, 3> shape, std::array<double, 3> spacing,
       std::array<double, 3> origin);

  // Same number of points, spacing and origin along every active axis.
  static Grid uniform(int dim, int n, double h, double lo);

  // Points lo, lo + h, ... covering [lo, hi] on every active axis (hi rounded to the
  // nearest grid line).
  static Grid from_extent(int dim, double lo, double hi, double h);

  // n points per axis placed symmetrically about zero.
  static Grid centered(int dim, int n, double h);

  int dim() const { return dim_; }
  int shape(int axis) const { return shape_[axis]; }
  double spacing(int axis) const { return spacing_[axis]; }
  double origin(int axis) const { return origin_[axis]; }
  const std::array<int, 3> &shape() const { return shape_; }
  const std::array<double, 3> &spacing() const { return spacing_; }
  double min_spacing() const;

  std::size_t size() const
  {
    return std::size_t(shape_[0]) * std::size_t(shape_[1]) * std::size_t(shape_[2]);
  }
  std::size_t stride(int axis) const
  {
    return axis == 0 ? 1 : axis == 1 ? std::size_t(shape_[0])
                                     : std::size_t(shape_[0]) * std::size_t(shape_[1]);
  }
  std::size_t index(int i, int j = 0, int k = 0) const
  {
    return std::size_t(i) + std::size_t(shape_[0]) * (std::size_t(j) + std::size_t(shape_[1]) * std::size_t(k));
  }
  std::array<int, 3> unravel(std::size_t idx) const;

  double coord(int axis, int i) const { return origin_[axis] + i * spacing_[axis]; }
  Point coord(std::size_t idx) const;

  // True when idx lies on the surface of the grid along any active axis.
  bool on_surface(std::size_t idx) const;

  bool operator==(const Grid &) const = default;

private:
  int dim_ = 1;
  std::array<int, 3> shape_{4, 1, 1};
  std::array<double, 3> spacing_{1.0, 1.0, 1.0};
  std::array<double, 3> origin_{0.0, 0.0, 0.0};
};

//
// Complex solution sampled on a Grid; one value per grid point in Grid storage order.
//
class ComplexField
{
public:
  ComplexField() = default;
  explicit ComplexField(const Grid &grid, cplx fill = {0.0, 0.0})
    : grid_(grid), values_(grid.size(), fill)
  {
  }

  template <class F>
  static ComplexField sample(const Grid &grid, F &&f)
  {
    ComplexField out(grid);
    for (std::size_t i = 0; i < out.size(); ++i)
    {
      out.values_[i] = f(grid.coord(i));
    }
    return out;
  }

  const Grid &grid() const { return grid_; }
  std::size_t size() const { return values_.size(); }
  std::span<cplx> values() { return values_; }
  std::span<const cplx> values() const { return values_; }
  cplx &operator[](std::size_t i) { return values_[i]; }
  const cplx &operator[](std::size_t i) const { return values_[i]; }

  bool all_finite() const;
  double max_abs() const;

private:
  Grid grid_;
  std::vector<cplx> values_;
};

struct BoundaryPair
{
  std::size_t b;
  std::size_t inner;  // b-1: one cell inward along every axis b sits on the surface of
};

//
// Classification of grid points into boundary points (each paired with its inward
// neighbour) and interior points. Both lists are in increasing index order.
//
struct BoundaryMap
{
  std::vector<BoundaryPair> pairs;
  std::vector<std::size_t> interior;
};

BoundaryMap boundary_map(const Grid &grid);

// Second-order central-difference Laplacian at interior points. Boundary entries of
// the result are zero and carry no meaning.
ComplexField laplacian_cd(const ComplexField &psi, Exec exec = Exec::serial);

}  // namespace msd

#endif  // MSD_FIELD_HPP
