// SPDX-License-Identifier: Apache-2.0

#include <doctest.h>

#include <cmath>

#include "msd/analysis.hpp"
#include "msd/integrate.hpp"
#include "msd/solutions.hpp"
#include "unit/helpers.hpp"

using namespace msd;

namespace
{

const SolitonParams kStill{0.0, -1.0, 1.0, -1.0};

ComplexField soliton_field(const Grid &g, const SolitonParams &sp, double t = 0.0)
{
  return ComplexField::sample(g, [&](const Point &x) { return dark_soliton(x[0], t, sp); });
}

double max_error_vs(const ComplexField &psi, const SolitonParams &sp, double t)
{
  const auto e = component_error(psi, dark_soliton_solution(sp).value, t);
  return std::max(e.real, e.imag);
}

ComplexField run(ComplexField psi, const NlseParams &p, const BoundaryCondition &bc, StepperConfig cfg,
                 int steps)
{
  Stepper st(psi.grid(), p, bc, cfg);
  double t = 0.0;
  for (int n = 0; n < steps; ++n)
  {
    t = st.step(psi, t);
  }
  return psi;
}

}  // namespace

TEST_CASE("stepper rejects invalid configurations")
{
  const Grid g2 = Grid::uniform(2, 5, 0.1, 0.0);
  const NlseParams p(1.0, -1.0);
  CHECK_THROWS_AS(Stepper(g2, p, bc::Msd{}, {0.0}), std::invalid_argument);
  CHECK_THROWS_AS(Stepper(g2, p, bc::Msd{}, {-0.1}), std::invalid_argument);
  CHECK_THROWS_AS(Stepper(g2, p, bc::OneSided2{}, {0.01}), std::invalid_argument);
  CHECK_THROWS_AS(Stepper(g2, p, bc::ExactDirichlet{}, {0.01}), std::invalid_argument);
}

TEST_CASE("rk4 on a uniform background follows the RK4 growth factor")
{
  const double omega = -1.0, s = -1.0, k = 0.01;
  const Grid g = Grid::uniform(2, 8, 0.25, 0.0);
  const int steps = 200;
  // oracle: R(z) = 1 + z + z^2/2 + z^3/6 + z^4/24 written out independently
  const cplx z(0.0, omega * k);
  const cplx r = 1.0 + z + z * z / 2.0 + z * z * z / 6.0 + z * z * z * z / 24.0;
  CHECK(std::abs(rk4_amplification(z) - r) < 1e-16);

  SUBCASE("linear rotation reproduces R^n to roundoff")
  {
    const NlseParams p(1.0, 0.0, g, [&](const Point &) { return -omega; });
    const cplx psi0 = std::polar(1.0, 0.3);
    const auto psi = run(ComplexField(g, psi0), p, bc::Msd{}, {k}, steps);
    const cplx expect = psi0 * std::pow(r, steps);
    for (std::size_t i = 0; i < g.size(); ++i)
    {
      CHECK(std::abs(psi[i] - expect) < 1e-13);
    }
  }

  SUBCASE("nonlinear background stays within the local error of R^n")
  {
    // RK4 stages leave the unit circle, so the cubic term departs from R at O(k^5) per step
    const NlseParams p(1.0, s);
    const cplx psi0 = std::sqrt(omega / s);
    const auto psi = run(ComplexField(g, psi0), p, bc::Msd{}, {k}, steps);
    const cplx expect = psi0 * std::pow(r, steps);
    for (std::size_t i = 0; i < g.size(); ++i)
    {
      CHECK(std::abs(psi[i] - expect) < steps * std::pow(k, 5));
      CHECK(std::abs(psi[i] - psi[0]) < 1e-14);
    }
    const double drift_per_step = std::abs(mod2(psi[0]) - 1.0) / steps;
    CHECK(drift_per_step <= std::pow(std::abs(omega * k), 6) / 72.0 * 1.01 + 1e-16);
  }
}

TEST_CASE("zero field stays zero")
{
  const Grid g = Grid::uniform(1, 10, 0.1, 0.0);
  for (const BoundaryCondition &bc : {BoundaryCondition(bc::Msd{}), BoundaryCondition(bc::LaplacianZero{}),
                                      BoundaryCondition(bc::OneSided2{}), BoundaryCondition(bc::ZeroDirichlet{})})
  {
    CHECK(run(ComplexField(g), NlseParams(1.0, -1.0), bc, {0.005}, 20).max_abs() == 0.0);
  }
}

TEST_CASE("rk4 tracks the still soliton with the exact boundary")
{
  const Grid g = Grid::from_extent(1, -10.0, 10.0, 0.1);
  const NlseParams p(1.0, -1.0);
  const double k = 0.006;
  const auto psi = run(soliton_field(g, kStill), p, bc::ExactDirichlet{dark_soliton_solution(kStill)}, {k}, 100);
  CHECK(max_error_vs(psi, kStill, 100 * k) <= 1e-3);
}

TEST_CASE("rk4 temporal order is four")
{
  const Grid g = Grid::from_extent(1, -8.0, 8.0, 0.1);
  const NlseParams p(1.0, -1.0);
  const BoundaryCondition bc = bc::ExactDirichlet{dark_soliton_solution(kStill)};
  const double t_end = 1.2;
  // reference: same grid, much smaller step
  const auto ref = run(soliton_field(g, kStill), p, bc, {t_end / 1600}, 1600);
  const auto coarse = run(soliton_field(g, kStill), p, bc, {t_end / 200}, 200);
  const auto fine = run(soliton_field(g, kStill), p, bc, {t_end / 400}, 400);
  const double ratio = test::max_diff(coarse, ref) / test::max_diff(fine, ref);
  CHECK(ratio > 12.0);
  CHECK(ratio < 20.0);
}

TEST_CASE("euler step on a uniform background")
{
  const double omega = -1.0, k = 0.01;
  const Grid g = Grid::uniform(1, 6, 0.1, 0.0);
  const ComplexField psi0(g, cplx(1.0, 0.0));
  const auto psi = euler_step(psi0, 0.0, NlseParams(1.0, -1.0), bc::Msd{}, k);
  for (std::size_t i = 0; i < g.size(); ++i)
  {
    CHECK(std::abs(psi[i] - cplx(1.0, omega * k)) < 1e-16);
  }
}

TEST_CASE("euler matches a direct transcription of the first-order MSD loop")
{
  std::mt19937_64 rng(31);
  const double h = 0.2, k = 1e-3;
  const Grid g = Grid::uniform(1, 30, h, 0.0);
  const NlseParams p(1.0, -1.0);
  const ComplexField seed = test::random_field(g, rng);

  // transcription: Ut = F(U); Ut(1) = 1i*imag(Ut(2)/U(2))*U(1); Ut(end) = ...; U = k*Ut + U
  std::vector<cplx> u(seed.values().begin(), seed.values().end());
  const std::size_t n = u.size();
  for (int step = 0; step < 10; ++step)
  {
    std::vector<cplx> ut(n);
    for (std::size_t i = 1; i + 1 < n; ++i)
    {
      const cplx lap = (u[i + 1] - 2.0 * u[i] + u[i - 1]) / (h * h);
      ut[i] = cplx(0.0, 1.0) * (lap - std::norm(u[i]) * u[i]);
    }
    ut[0] = cplx(0.0, 1.0) * std::imag(ut[1] / u[1]) * u[0];
    ut[n - 1] = cplx(0.0, 1.0) * std::imag(ut[n - 2] / u[n - 2]) * u[n - 1];
    for (std::size_t i = 0; i < n; ++i)
    {
      u[i] = k * ut[i] + u[i];
    }
  }

  const auto psi = run(seed, p, bc::Msd{}, {k, Scheme::euler}, 10);
  for (std::size_t i = 0; i < n; ++i)
  {
    CHECK(std::abs(psi[i] - u[i]) <= 1e-13 * std::abs(u[i]));
  }
}

TEST_CASE("euler converges at first order")
{
  const Grid g = Grid::from_extent(1, -10.0, 10.0, 0.1);
  const NlseParams p(1.0, -1.0);
  const BoundaryCondition bc = bc::ExactDirichlet{dark_soliton_solution(kStill)};
  // reference: RK4 on the same grid, so only the temporal error is measured
  const auto ref = run(soliton_field(g, kStill), p, bc, {1e-3}, 500);
  const auto a = run(soliton_field(g, kStill), p, bc, {1e-4, Scheme::euler}, 5000);
  const auto b = run(soliton_field(g, kStill), p, bc, {5e-5, Scheme::euler}, 10000);
  const double ratio = test::max_diff(a, ref) / test::max_diff(b, ref);
  CHECK(ratio == doctest::Approx(2.0).epsilon(0.1));
}

TEST_CASE("stepping commutes with a global phase")
{
  std::mt19937_64 rng(32);
  const Grid g = Grid::uniform(1, 24, 0.2, 0.0);
  const NlseParams p(1.0, -1.0);
  const auto psi = test::random_field(g, rng, 0.8);
  const cplx phase = std::polar(1.0, 0.77);
  ComplexField rotated(g);
  for (std::size_t i = 0; i < g.size(); ++i)
  {
    rotated[i] = phase * psi[i];
  }
  for (const BoundaryCondition &bc : {BoundaryCondition(bc::Msd{}), BoundaryCondition(bc::LaplacianZero{}),
                                      BoundaryCondition(bc::OneSided2{}), BoundaryCondition(bc::ZeroDirichlet{})})
  {
    const auto a = rk4_step(psi, 0.0, p, bc, 0.005);
    const auto b = rk4_step(rotated, 0.0, p, bc, 0.005);
    for (std::size_t i = 0; i < g.size(); ++i)
    {
      CHECK(std::abs(b[i] - phase * a[i]) < 1e-13);
    }
  }
}

TEST_CASE("stage observer sees every stage and msd keeps the boundary flat")
{
  std::mt19937_64 rng(33);
  const Grid g = Grid::uniform(2, 10, 0.25, 0.0);
  ComplexField psi = test::random_field(g, rng);
  Stepper st(g, NlseParams(1.0, -1.0), bc::Msd{}, {0.002});
  int calls = 0;
  double worst = 0.0;
  st.set_stage_observer([&](const ComplexField &state, const ComplexField &deriv, const BoundaryRate &)
                        {
                          ++calls;
                          for (const auto &pr : st.map().pairs)
                          {
                            worst = std::max(worst, std::abs(std::real(std::conj(state[pr.b]) * deriv[pr.b])) /
                                                      (1e-300 + mod2(state[pr.b]) * std::abs(deriv[pr.b] / state[pr.b])));
                          }
                        });
  double t = 0.0;
  for (int n = 0; n < 3; ++n)
  {
    t = st.step(psi, t);
  }
  CHECK(calls == 12);
  CHECK(worst < 1e-15);
}

TEST_CASE("exact boundary in overwrite mode pins boundary values")
{
  const Grid g = Grid::from_extent(1, -6.0, 6.0, 0.1);
  const auto sol = dark_soliton_solution(kStill);
  ComplexField psi = soliton_field(g, kStill);
  Stepper st(g, NlseParams(1.0, -1.0), bc::ExactDirichlet{sol, true}, {0.006});
  double t = 0.0;
  for (int n = 0; n < 10; ++n)
  {
    t = st.step(psi, t);
  }
  CHECK(psi[0] == sol.value(g.coord(0), t));
  CHECK(psi[g.size() - 1] == sol.value(g.coord(g.size() - 1), t));
}

TEST_CASE("blow-up is reported")
{
  const Grid g = Grid::uniform(1, 10, 0.1, 0.0);
  ComplexField psi(g, 1.0);
  psi[4] = cplx(std::nan(""), 0.0);
  Stepper st(g, NlseParams(1.0, -1.0), bc::Msd{}, {0.001});
  CHECK_THROWS_AS(st.step(psi, 0.0), BlowUpError);

  ComplexField big(g, 2e6);
  CHECK_THROWS_AS(st.step(big, 0.0), BlowUpError);
}

TEST_CASE("linear stability bound and recommended step")
{
  CHECK(linear_stability_bound(0.1, 1.0, 1) == doctest::Approx(0.0070711).epsilon(1e-4));
  CHECK(linear_stability_bound(0.25, 1.0, 2) == doctest::Approx(0.0220971).epsilon(1e-4));
  CHECK(linear_stability_bound(0.5, 1.0, 3) == doctest::Approx(0.0589256).epsilon(1e-4));
  CHECK(0.006 < linear_stability_bound(0.1, 1.0, 1));
  CHECK(0.01 < linear_stability_bound(0.25, 1.0, 2));
  CHECK(0.035 < linear_stability_bound(0.5, 1.0, 3));
  CHECK(linear_stability_bound(0.1, -1.0, 1) == linear_stability_bound(0.1, 1.0, 1));
  CHECK_THROWS_AS(linear_stability_bound(0.1, 1.0, 4), std::invalid_argument);

  CHECK(recommended_timestep(0.0070711) == doctest::Approx(0.0056569).epsilon(1e-4));
  CHECK(recommended_timestep(0.0220971) == doctest::Approx(0.0176777).epsilon(1e-4));
  CHECK(0.01 < recommended_timestep(linear_stability_bound(0.25, 1.0, 2)));
  CHECK_THROWS_AS(recommended_timestep(0.0), std::invalid_argument);
}

TEST_CASE("G sets by dimension")
{
  using V = std::vector<double>;
  auto as_vec = [](std::span<const double> s) { return V(s.begin(), s.end()); };
  CHECK(as_vec(stability_g_set(1)) == V{4, 3, 1, 0});
  CHECK(as_vec(stability_g_set(2)) == V{8, 7, 6, 2, 1, 0});
  CHECK(as_vec(stability_g_set(3)) == V{12, 11, 10, 9, 3, 2, 1, 0});
}

TEST_CASE("full stability bound")
{
  const double h = 0.1;
  const Grid g = Grid::uniform(1, 41, h, 0.0);

  SUBCASE("linear case recovers the linear bound")
  {
    std::mt19937_64 rng(34);
    const NlseParams p(1.0, 0.0);
    const auto psi = test::random_field(g, rng);
    CHECK(full_stability_bound(psi, p, bc::ZeroDirichlet{}) ==
          doctest::Approx(linear_stability_bound(h, 1.0, 1)).epsilon(1e-12));
  }

  SUBCASE("uniform background")
  {
    const NlseParams p(1.0, -1.0);
    const ComplexField psi(g, 1.0);
    // L_i = -0.01, max |L_i - G| = 4.01
    const double expect = std::sqrt(8.0) * h * h / 4.01;
    CHECK(expect == doctest::Approx(0.007053).epsilon(1e-3));
    CHECK(full_stability_bound(psi, p, bc::Msd{}) == doctest::Approx(expect).epsilon(1e-12));
    CHECK(full_stability_bound(psi, p, bc::LaplacianZero{}) == doctest::Approx(expect).epsilon(1e-12));
  }

  SUBCASE("msd boundary row binds only for large boundary frequencies")
  {
    const NlseParams p(1.0, -1.0);
    ComplexField psi(g, 1.0);
    const auto map = boundary_map(g);
    ComplexField psi_t = rhs_interior(psi, p, 0.0);
    // B_b = h^2 Im[i Omega] = -0.01, far below 4.01
    CHECK(full_stability_bound(psi, psi_t, p, map, bc::Msd{}) ==
          doctest::Approx(std::sqrt(8.0) * h * h / 4.01));
    psi_t[map.pairs[0].inner] = cplx(0.0, 600.0);
    CHECK(full_stability_bound(psi, psi_t, p, map, bc::Msd{}) ==
          doctest::Approx(std::sqrt(8.0) * h * h / 6.0));
  }
}

TEST_CASE("msd uniform background: blow-up above the bound, stable below")
{
  std::mt19937_64 rng(35);
  const Grid g = Grid::uniform(1, 101, 0.1, 0.0);
  const NlseParams p(1.0, -1.0);
  ComplexField seed(g, 1.0);
  std::uniform_real_distribution<double> u(-1e-8, 1e-8);
  for (std::size_t i = 0; i < g.size(); ++i)
  {
    seed[i] += cplx(u(rng), u(rng));
  }
  const double bound = full_stability_bound(seed, p, bc::Msd{});

  auto blows_up = [&](double k, int steps)
  {
    ComplexField psi = seed;
    Stepper st(g, p, bc::Msd{}, {k});
    double t = 0.0;
    try
    {
      for (int n = 0; n < steps; ++n)
      {
        t = st.step(psi, t);
      }
    }
    catch (const BlowUpError &)
    {
      return true;
    }
    return false;
  };
  CHECK(blows_up(1.3 * bound, 10000));
  CHECK_FALSE(blows_up(0.8 * bound, 100000));
}
