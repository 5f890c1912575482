// SPDX-License-Identifier: Apache-2.0

#include <doctest.h>

#include <cmath>
#include <set>

#include "msd/field.hpp"
#include "unit/helpers.hpp"

using namespace msd;

TEST_CASE("grid validation")
{
  CHECK_THROWS_AS(Grid(0, {5, 5, 5}, {1, 1, 1}, {0, 0, 0}), std::invalid_argument);
  CHECK_THROWS_AS(Grid(4, {5, 5, 5}, {1, 1, 1}, {0, 0, 0}), std::invalid_argument);
  CHECK_THROWS_AS(Grid(2, {5, 3, 1}, {1, 1, 1}, {0, 0, 0}), std::invalid_argument);
  CHECK_THROWS_AS(Grid(1, {5, 1, 1}, {0.0, 1, 1}, {0, 0, 0}), std::invalid_argument);
  CHECK_THROWS_AS(Grid(1, {5, 1, 1}, {-0.1, 1, 1}, {0, 0, 0}), std::invalid_argument);
  // unused axes are ignored
  CHECK_NOTHROW(Grid(1, {4, 0, 0}, {0.5, 0, 0}, {0, 0, 0}));
}

TEST_CASE("grid indexing round-trips")
{
  const Grid g(3, {5, 6, 7}, {0.1, 0.2, 0.3}, {-1, -2, -3});
  CHECK(g.size() == 210);
  for (std::size_t idx = 0; idx < g.size(); idx += 7)
  {
    const auto ijk = g.unravel(idx);
    CHECK(g.index(ijk[0], ijk[1], ijk[2]) == idx);
  }
  CHECK(g.index(1, 0, 0) - g.index(0, 0, 0) == 1);
  CHECK(g.index(0, 1, 0) - g.index(0, 0, 0) == 5);
  CHECK(g.index(0, 0, 1) - g.index(0, 0, 0) == 30);
  const Point p = g.coord(g.index(2, 3, 4));
  CHECK(p[0] == doctest::Approx(-0.8));
  CHECK(p[1] == doctest::Approx(-1.4));
  CHECK(p[2] == doctest::Approx(-1.8));
}

TEST_CASE("grid from extent covers asymmetric domains")
{
  const Grid g = Grid::from_extent(1, -5.0, 30.0, 0.1);
  CHECK(g.shape(0) == 351);
  CHECK(g.coord(0, g.shape(0) - 1) == doctest::Approx(30.0));
  const Grid c = Grid::centered(2, 120, 0.25);
  CHECK(c.coord(0, 0) == doctest::Approx(-14.875));
  CHECK(c.coord(1, 119) == doctest::Approx(14.875));
}

TEST_CASE("boundary map rejects short axes")
{
  CHECK_THROWS_AS(boundary_map(Grid(1, {3, 1, 1}, {1, 1, 1}, {0, 0, 0})), std::invalid_argument);
}

TEST_CASE("boundary map in 1D pairs the two endpoints")
{
  const auto map = boundary_map(Grid::uniform(1, 5, 1.0, 0.0));
  REQUIRE(map.pairs.size() == 2);
  CHECK(map.pairs[0].b == 0);
  CHECK(map.pairs[0].inner == 1);
  CHECK(map.pairs[1].b == 4);
  CHECK(map.pairs[1].inner == 3);
  CHECK(map.interior == std::vector<std::size_t>{1, 2, 3});
}

TEST_CASE("boundary map in 2D steps diagonally at corners")
{
  const Grid g = Grid::uniform(2, 4, 1.0, 0.0);
  const auto map = boundary_map(g);
  CHECK(map.pairs.size() == 12);
  auto inner_of = [&](std::size_t b)
  {
    for (const auto &p : map.pairs)
    {
      if (p.b == b)
      {
        return p.inner;
      }
    }
    FAIL("boundary point not found");
    return std::size_t(0);
  };
  CHECK(inner_of(g.index(0, 0)) == g.index(1, 1));
  CHECK(inner_of(g.index(3, 0)) == g.index(2, 1));
  CHECK(inner_of(g.index(0, 3)) == g.index(1, 2));
  CHECK(inner_of(g.index(2, 0)) == g.index(2, 1));  // face point: normal step only
}

TEST_CASE("boundary map in 3D matches brute-force surface enumeration")
{
  const Grid g = Grid::uniform(3, 4, 0.5, 0.0);
  const auto map = boundary_map(g);

  // oracle: a point is on the surface iff some coordinate is 0 or 3
  std::size_t surface = 0;
  for (int k = 0; k < 4; ++k)
  {
    for (int j = 0; j < 4; ++j)
    {
      for (int i = 0; i < 4; ++i)
      {
        surface += (i == 0 || i == 3 || j == 0 || j == 3 || k == 0 || k == 3) ? 1 : 0;
      }
    }
  }
  CHECK(surface == 56);
  CHECK(map.pairs.size() == surface);

  for (const auto &p : map.pairs)
  {
    if (p.b == g.index(0, 0, 0))
    {
      CHECK(p.inner == g.index(1, 1, 1));
    }
    if (p.b == g.index(0, 0, 2))
    {
      CHECK(p.inner == g.index(1, 1, 2));
    }
  }
}

TEST_CASE("boundary map partitions the grid and neighbours are interior")
{
  for (const Grid &g : {Grid::uniform(1, 9, 1.0, 0.0), Grid(2, {5, 7, 1}, {1, 1, 1}, {0, 0, 0}),
                        Grid(3, {4, 6, 5}, {1, 1, 1}, {0, 0, 0})})
  {
    const auto map = boundary_map(g);
    std::set<std::size_t> seen;
    std::set<std::size_t> boundary;
    for (const auto &p : map.pairs)
    {
      CHECK(seen.insert(p.b).second);
      boundary.insert(p.b);
      CHECK(g.on_surface(p.b));
    }
    for (const auto i : map.interior)
    {
      CHECK(seen.insert(i).second);
      CHECK_FALSE(g.on_surface(i));
    }
    CHECK(seen.size() == g.size());
    for (const auto &p : map.pairs)
    {
      CHECK(boundary.count(p.inner) == 0);
      // the neighbour is one cell away along every surface axis
      const auto b = g.unravel(p.b);
      const auto n = g.unravel(p.inner);
      for (int a = 0; a < g.dim(); ++a)
      {
        const bool surf = b[a] == 0 || b[a] == g.shape(a) - 1;
        CHECK(std::abs(b[a] - n[a]) == (surf ? 1 : 0));
      }
    }
  }
}

TEST_CASE("laplacian of a constant vanishes and a quadratic is exact")
{
  const Grid g = Grid::uniform(1, 21, 0.1, -1.0);
  const ComplexField c(g, cplx(0.3, -2.0));
  const auto lc = laplacian_cd(c);
  const ComplexField q = ComplexField::sample(g, [](const Point &x) { return cplx(x[0] * x[0], 0.0); });
  const auto lq = laplacian_cd(q);
  for (std::size_t i = 1; i + 1 < g.size(); ++i)
  {
    CHECK(std::abs(lc[i]) == 0.0);
    CHECK(lq[i].real() == doctest::Approx(2.0).epsilon(1e-11));
  }
}

TEST_CASE("laplacian of sin(x) stays within the Taylor remainder bound")
{
  const double h = 0.1;
  const Grid g = Grid::uniform(1, 101, h, -5.0);
  const auto f = ComplexField::sample(g, [](const Point &x) { return cplx(std::sin(x[0]), 0.0); });
  const auto lap = laplacian_cd(f);
  double worst = 0.0;
  for (std::size_t i = 1; i + 1 < g.size(); ++i)
  {
    worst = std::max(worst, std::abs(lap[i] + f[i]));
  }
  // h^2/12 * max|sin''''| = 8.33e-4
  CHECK(worst <= 8.4e-4);
  CHECK(worst > 1e-4);  // the bound is nearly attained near sin = +-1
}

TEST_CASE("laplacian is linear and annihilates affine fields")
{
  std::mt19937_64 rng(7);
  const Grid g(3, {6, 5, 7}, {0.3, 0.2, 0.5}, {0, 0, 0});
  const auto map = boundary_map(g);
  for (int trial = 0; trial < 5; ++trial)
  {
    const auto u = test::random_field(g, rng);
    const auto v = test::random_field(g, rng);
    const cplx alpha(0.7, -1.3), beta(-2.1, 0.4);
    ComplexField w(g);
    for (std::size_t i = 0; i < g.size(); ++i)
    {
      w[i] = alpha * u[i] + beta * v[i];
    }
    const auto lu = laplacian_cd(u), lv = laplacian_cd(v), lw = laplacian_cd(w);
    for (const auto i : map.interior)
    {
      CHECK(std::abs(lw[i] - (alpha * lu[i] + beta * lv[i])) < 1e-12 * (1.0 + std::abs(lw[i])));
    }
  }
  const auto affine = ComplexField::sample(g, [](const Point &x)
                                           { return cplx(1.0 + 2.0 * x[0] - x[1] + 0.5 * x[2], 3.0 * x[2] - x[0]); });
  const auto la = laplacian_cd(affine);
  for (const auto i : map.interior)
  {
    CHECK(std::abs(la[i]) < 1e-12);
  }
}

TEST_CASE("field finiteness and max norm")
{
  ComplexField f(Grid::uniform(1, 5, 1.0, 0.0), cplx(3.0, 4.0));
  CHECK(f.all_finite());
  CHECK(f.max_abs() == doctest::Approx(5.0));
  f[2] = cplx(std::nan(""), 0.0);
  CHECK_FALSE(f.all_finite());
  CHECK(std::isnan(f.max_abs()));
}
