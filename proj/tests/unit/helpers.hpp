// SPDX-License-Identifier: Apache-2.0
//
// Small shared helpers for the unit tests: seeded random fields and norms.

#ifndef MSD_TESTS_HELPERS_HPP
#define MSD_TESTS_HELPERS_HPP

#include <random>

#include "msd/field.hpp"

namespace msd::test
{

inline ComplexField random_field(const Grid &g, std::mt19937_64 &rng, double amp = 1.0)
{
  std::uniform_real_distribution<double> u(-amp, amp);
  ComplexField f(g);
  for (std::size_t i = 0; i < f.size(); ++i)
  {
    f[i] = {u(rng), u(rng)};
  }
  return f;
}

inline double max_diff(const ComplexField &a, const ComplexField &b)
{
  double m = 0.0;
  for (std::size_t i = 0; i < a.size(); ++i)
  {
    m = std::max(m, std::abs(a[i] - b[i]));
  }
  return m;
}

}  // namespace msd::test

#endif
