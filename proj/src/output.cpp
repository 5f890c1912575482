// SPDX-License-Identifier: Apache-2.0

#include "msd/output.hpp"

#include <algorithm>
#include <cmath>
#include <cstdio>
#include <fstream>
#include <numbers>
#include <stdexcept>
#include <vector>

namespace msd
{

namespace
{

std::ofstream open_or_throw(const std::string &path, std::ios::openmode mode = std::ios::out)
{
  std::ofstream os(path, mode);
  if (!os)
  {
    throw std::runtime_error("cannot open " + path);
  }
  return os;
}

template <class Map>
void write_pgm(const ComplexField &psi, const std::string &path, Map to_byte)
{
  const Grid &g = psi.grid();
  if (g.dim() != 2)
  {
    throw std::invalid_argument("PGM snapshots need a 2D field");
  }
  const int nx = g.shape(0), ny = g.shape(1);
  std::vector<unsigned char> pixels;
  pixels.reserve(std::size_t(nx) * std::size_t(ny));
  for (int j = ny - 1; j >= 0; --j)
  {
    for (int i = 0; i < nx; ++i)
    {
      pixels.push_back(to_byte(psi[g.index(i, j)]));
    }
  }
  auto os = open_or_throw(path, std::ios::out | std::ios::binary);
  os << "P5\n" << nx << ' ' << ny << "\n255\n";
  os.write(reinterpret_cast<const char *>(pixels.data()), std::streamsize(pixels.size()));
}

unsigned char quantize(double unit)
{
  return static_cast<unsigned char>(std::lround(255.0 * std::clamp(unit, 0.0, 1.0)));
}

}  // namespace

std::string format_real(double v)
{
  char buf[40];
  std::snprintf(buf, sizeof buf, "%.17e", v);
  return buf;
}

void write_pgm_mod2(const ComplexField &psi, double rho, const std::string &path)
{
  if (!(rho > 0.0))
  {
    throw std::invalid_argument("write_pgm_mod2: rho must be positive");
  }
  write_pgm(psi, path, [&](cplx z) { return quantize(mod2(z) / (1.05 * rho)); });
}

void write_pgm_phase(const ComplexField &psi, const std::string &path)
{
  write_pgm(psi, path,
            [](cplx z) { return quantize((std::arg(z) + std::numbers::pi) / (2.0 * std::numbers::pi)); });
}

void write_state_csv(const ComplexField &psi, const std::string &path)
{
  const Grid &g = psi.grid();
  auto os = open_or_throw(path);
  os << "i,j,k,re,im\n";
  for (std::size_t idx = 0; idx < psi.size(); ++idx)
  {
    const auto ijk = g.unravel(idx);
    os << ijk[0] << ',' << ijk[1] << ',' << ijk[2] << ',' << format_real(psi[idx].real()) << ','
       << format_real(psi[idx].imag()) << '\n';
  }
}

ComplexField plane_slice(const ComplexField &psi, int normal, int index)
{
  const Grid &g = psi.grid();
  if (g.dim() != 3 || normal < 0 || normal > 2 || index < 0 || index >= g.shape(normal))
  {
    throw std::invalid_argument("plane_slice: needs a 3D field and an in-range plane");
  }
  int axes[2];
  for (int a = 0, n = 0; a < 3; ++a)
  {
    if (a != normal)
    {
      axes[n++] = a;
    }
  }
  const Grid plane(2, {g.shape(axes[0]), g.shape(axes[1]), 1}, {g.spacing(axes[0]), g.spacing(axes[1]), 1.0},
                   {g.origin(axes[0]), g.origin(axes[1]), 0.0});
  ComplexField out(plane);
  for (int v = 0; v < plane.shape(1); ++v)
  {
    for (int u = 0; u < plane.shape(0); ++u)
    {
      std::array<int, 3> ijk{};
      ijk[normal] = index;
      ijk[axes[0]] = u;
      ijk[axes[1]] = v;
      out[plane.index(u, v)] = psi[g.index(ijk[0], ijk[1], ijk[2])];
    }
  }
  return out;
}

std::string snapshot_name(double t, const std::string &kind)
{
  char buf[64];
  std::snprintf(buf, sizeof buf, "snap_%.3f_%s.pgm", t, kind.c_str());
  return buf;
}

}  // namespace msd
