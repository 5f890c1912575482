// SPDX-License-Identifier: Apache-2.0

#include <doctest.h>

#include <cmath>
#include <cstdio>
#include <fstream>
#include <numbers>

#include "msd/analysis.hpp"
#include "msd/integrate.hpp"
#include "msd/solutions.hpp"
#include "unit/helpers.hpp"

using namespace msd;

namespace
{

const RadialProfile &profile()
{
  static const RadialProfile p = solve_radial_profile(1, -1.0, 1.0, -1.0, 30.0, 3000).profile;
  return p;
}

VortexTrack circle_track(const std::vector<double> &times, const std::vector<double> &radii)
{
  VortexTrack tr;
  for (std::size_t n = 0; n < times.size(); ++n)
  {
    const double th = 0.3 * double(n);
    tr.push(times[n], {{radii[n] * std::cos(th), radii[n] * std::sin(th)}});
  }
  return tr;
}

}  // namespace

TEST_CASE("component error examples")
{
  const double h = 0.1;
  const Grid g = Grid::uniform(1, 11, h, 0.0);
  std::mt19937_64 rng(51);
  const auto ref = test::random_field(g, rng);
  const auto same = component_error(ref, ref);
  CHECK(same.real == 0.0);
  CHECK(same.imag == 0.0);
  CHECK(same.mod2 == 0.0);

  auto bumped = ref;
  bumped[4] += h * h;
  const auto e = component_error(bumped, ref);
  CHECK(e.real == doctest::Approx(h * h).epsilon(1e-12));
  CHECK(e.imag == 0.0);

  const auto via_fn = component_error(bumped, [&](const Point &x, double) { return ref[std::size_t(std::lround(x[0] / h))]; }, 0.0);
  CHECK(via_fn.real == e.real);
  CHECK(via_fn.mod2 == e.mod2);

  CHECK_THROWS_AS(component_error(ref, ComplexField(Grid::uniform(1, 12, h, 0.0))), std::invalid_argument);
}

TEST_CASE("component error is a seminorm")
{
  std::mt19937_64 rng(52);
  const Grid g = Grid::uniform(2, 9, 0.2, 0.0);
  const ComplexField zero(g);
  for (int trial = 0; trial < 20; ++trial)
  {
    const auto u = test::random_field(g, rng);
    const auto v = test::random_field(g, rng);
    ComplexField sum(g), scaled(g);
    const double lambda = -2.5 + 0.25 * trial;
    for (std::size_t i = 0; i < g.size(); ++i)
    {
      sum[i] = u[i] + v[i];
      scaled[i] = lambda * u[i];
    }
    const auto eu = component_error(u, zero), ev = component_error(v, zero), es = component_error(sum, zero);
    CHECK(es.real <= eu.real + ev.real + 1e-15);
    CHECK(es.imag <= eu.imag + ev.imag + 1e-15);
    const auto el = component_error(scaled, zero);
    CHECK(el.real == doctest::Approx(std::abs(lambda) * eu.real).epsilon(1e-14));
    CHECK(el.imag == doctest::Approx(std::abs(lambda) * eu.imag).epsilon(1e-14));
  }
}

TEST_CASE("error series summaries and csv")
{
  ErrorSeries s;
  s.push(0.0, {0.1, 0.3, 0.0});
  s.push(1.0, {0.5, 0.1, 0.2});
  CHECK_THROWS_AS(s.push(1.0, {}), std::invalid_argument);
  CHECK(s.max().real == 0.5);
  CHECK(s.max().imag == 0.3);
  CHECK(s.component_average() == doctest::Approx(0.4));
  CHECK(s.mean_component_average() == doctest::Approx(0.25));
  CHECK(ErrorSeries{}.mean_component_average() == 0.0);

  const std::string path = "errors_test.csv";
  s.write_csv(path);
  std::ifstream is(path);
  std::string line;
  std::getline(is, line);
  CHECK(line == "t,err_real_max,err_imag_max,err_mod2_max");
  std::getline(is, line);
  CHECK(line == "0.00000000000000000e+00,1.00000000000000006e-01,2.99999999999999989e-01,0.00000000000000000e+00");
  std::remove(path.c_str());
}

TEST_CASE("tracking a single vortex")
{
  const double h = 0.25;
  const Grid g = Grid::centered(2, 61, h);
  for (const Point c : {Point{0.0, 0.0, 0.0}, Point{0.1, -0.07, 0.0}, Point{-0.6, 0.3, 0.0}})
  {
    const auto psi = make_vortex_field(g, {1, -1.0, c, profile()});
    const auto found = track_vortices(psi, 1);
    REQUIRE(found.size() == 1);
    CHECK(std::hypot(found[0].x - c[0], found[0].y - c[1]) < h / 2);
  }
  CHECK_THROWS_AS(track_vortices(ComplexField(g, 1.0), 1), VortexLostError);
  CHECK_THROWS_AS(track_vortices(ComplexField(Grid::uniform(1, 10, h, 0.0), 1.0), 1), std::invalid_argument);
}

TEST_CASE("tracking a vortex pair")
{
  const double h = 0.25;
  const Grid g = Grid::centered(2, 81, h);
  const std::vector<VortexSpec> specs{{1, -1.0, {-3.5, 0.0, 0.0}, profile()}, {1, -1.0, {3.5, 0.0, 0.0}, profile()}};
  const auto psi = make_multi_vortex(g, specs, 1.0);
  const auto found = track_vortices(psi, 2);
  REQUIRE(found.size() == 2);
  CHECK(std::hypot(found[0].x - found[1].x, found[0].y - found[1].y) == doctest::Approx(7.0).epsilon(h / 7.0));
  CHECK_THROWS_AS(track_vortices(psi, 3), VortexLostError);
}

TEST_CASE("tracking is equivariant under whole-cell translation")
{
  const double h = 0.25;
  const Grid g = Grid::centered(2, 61, h);
  const Point c{0.13, -0.21, 0.0};
  const auto base = track_vortices(make_vortex_field(g, {1, -1.0, c, profile()}), 1)[0];
  for (const auto [di, dj] : {std::pair{3, 0}, std::pair{-2, 5}, std::pair{7, -4}})
  {
    // sample the translated field exactly by shifting the grid origin
    const Grid shifted(2, {61, 61, 1}, {h, h, 1.0}, {g.origin(0) + di * h, g.origin(1) + dj * h, 0.0});
    const Point moved{c[0] + di * h, c[1] + dj * h, 0.0};
    const auto got = track_vortices(make_vortex_field(shifted, {1, -1.0, moved, profile()}), 1)[0];
    CHECK(got.x - di * h == doctest::Approx(base.x).epsilon(1e-9));
    CHECK(got.y - dj * h == doctest::Approx(base.y).epsilon(1e-9));
  }
}

TEST_CASE("vortex track matches frames and writes csv")
{
  VortexTrack tr;
  tr.push(0.0, {{-1.0, 0.0}, {1.0, 0.0}});
  tr.push(1.0, {{1.1, 0.1}, {-1.1, -0.1}});  // reported in swapped order
  CHECK(tr.positions()[1][0].x == -1.1);
  CHECK(tr.positions()[1][1].x == 1.1);
  CHECK_THROWS_AS(tr.push(0.5, {{0, 0}, {1, 1}}), std::invalid_argument);
  CHECK_THROWS_AS(tr.push(2.0, {{0, 0}}), std::invalid_argument);

  const std::string path = "track_test.csv";
  tr.write_csv(path, {0.0, 0.0});
  std::ifstream is(path);
  std::string line;
  std::getline(is, line);
  CHECK(line == "t,x_0,y_0,x_1,y_1,radius_0,radius_1");
  std::size_t rows = 0;
  while (std::getline(is, line)) ++rows;
  CHECK(rows == 2);
  std::remove(path.c_str());
}

TEST_CASE("radius deviation")
{
  std::vector<double> times, flat, wobble;
  for (int n = 0; n <= 400; ++n)
  {
    const double t = 0.01 * std::numbers::pi * n;  // hits pi/2 exactly at n = 50
    times.push_back(t);
    flat.push_back(3.5);
    wobble.push_back(3.5 * (1.0 + 0.2 * std::sin(t)));
  }
  CHECK(radius_deviation(circle_track(times, flat), {0, 0}) == doctest::Approx(0.0).epsilon(1e-12));
  const double dev = radius_deviation(circle_track(times, wobble), {0, 0});
  CHECK(dev == doctest::Approx(20.0).epsilon(1e-9));

  std::vector<double> warped;
  for (const double t : times)
  {
    warped.push_back(5.0 + 2.0 * t + t * t);
  }
  CHECK(radius_deviation(circle_track(warped, wobble), {0, 0}) == dev);
  CHECK_THROWS_AS(radius_deviation(VortexTrack{}, {0, 0}), std::invalid_argument);
}

TEST_CASE("boundary drift under frozen rotation is roundoff")
{
  const Grid g = Grid::uniform(2, 8, 0.25, 0.0);
  const auto map = boundary_map(g);
  const ComplexField init(g, cplx(0.6, 0.8));
  std::vector<ComplexField> series{init};
  for (int n = 1; n <= 5; ++n)
  {
    ComplexField f(g);
    for (std::size_t i = 0; i < g.size(); ++i)
    {
      f[i] = init[i] * std::polar(1.0, -0.3 * n);
    }
    series.push_back(f);
  }
  const auto drift = boundary_mod2_drift(series, map);
  REQUIRE(drift.size() == 6);
  CHECK(drift[0] == 0.0);
  for (const double d : drift)
  {
    CHECK(d < 1e-15);
  }
}

TEST_CASE("boundary drift of the rk4 uniform background")
{
  const Grid g = Grid::uniform(1, 16, 0.25, 0.0);
  const auto map = boundary_map(g);
  const ComplexField init(g, 1.0);
  ComplexField psi = init;
  Stepper st(g, NlseParams(1.0, -1.0), bc::Msd{}, {0.01});
  double t = 0.0;
  for (int n = 0; n < 10000; ++n)
  {
    t = st.step(psi, t);
  }
  CHECK(boundary_mod2_drift(init, psi, map) <= 1e4 * std::pow(0.01, 6) / 36.0);
}

TEST_CASE("boundary drift of the still soliton with msd")
{
  const Grid g = Grid::from_extent(1, -10.0, 10.0, 0.1);
  const auto map = boundary_map(g);
  const SolitonParams sp{};
  const auto init = ComplexField::sample(g, [&](const Point &x) { return dark_soliton(x[0], 0.0, sp); });
  ComplexField psi = init;
  Stepper st(g, NlseParams(1.0, -1.0), bc::Msd{}, {0.006});
  double t = 0.0;
  while (t < 50.0 - 1e-9)
  {
    t = st.step(psi, t);
  }
  CHECK(boundary_mod2_drift(init, psi, map) <= 1e-4);
}

TEST_CASE("drift fit separates a steady drift from one oscillation")
{
  std::mt19937_64 rng(31);
  std::uniform_real_distribution<double> u(-1.0, 1.0);
  for (int trial = 0; trial < 20; ++trial)
  {
    const double v = 0.02 * u(rng), amp = 1.0 + 0.5 * u(rng), period = 60.0 + 20.0 * u(rng), phase = 3.0 * u(rng);
    std::vector<double> t, z;
    for (int n = 0; n <= 257; ++n)
    {
      t.push_back(0.35 * n);
      z.push_back(0.4 + v * t.back() + amp * std::sin(2.0 * std::numbers::pi * t.back() / period + phase));
    }
    const auto fit = fit_drift_with_oscillation(t, z, 5.0, 90.0);
    CHECK(std::abs(fit.velocity - v) < 1e-6);
    CHECK(fit.period == doctest::Approx(period).epsilon(1e-5));
    CHECK(fit.rms_residual < 1e-6);
  }
  CHECK_THROWS_AS(fit_drift_with_oscillation({1, 2, 3}, {1, 2, 3}, 5.0, 90.0), std::invalid_argument);
  std::vector<double> t(10, 0.0), z(10, 0.0);
  CHECK_THROWS_AS(fit_drift_with_oscillation(t, z, 9.0, 5.0), std::invalid_argument);
}
