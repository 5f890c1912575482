// SPDX-License-Identifier: Apache-2.0

#ifndef MSD_NLSE_HPP
#define MSD_NLSE_HPP

#include <functional>
#include <vector>

#include "msd/field.hpp"

namespace msd
{

//
// Coefficients of  i Psi_t + a lap(Psi) - V Psi + s |Psi|^2 Psi = 0.
//
// The potential is stored pre-sampled on the grid it was built for; an empty vector
// stands for V = 0.
//
class NlseParams
{
public:
  NlseParams(double a, double s);
  NlseParams(double a, double s, const Grid &grid,
             const std::function<double(const Point &)> &potential);

  double a() const { return a_; }
  double s() const { return s_; }
  const std::vector<double> &potential() const { return potential_; }
  double potential_at(std::size_t idx) const { return potential_.empty() ? 0.0 : potential_[idx]; }

private:
  double a_;
  double s_;
  std::vector<double> potential_;
};

// N = s |psi|^2 - V
inline double nonlinear_term(cplx psi_value, double v_value, double s)
{
  return s * mod2(psi_value) - v_value;
}

// Psi_t at every interior point. Boundary entries of psi_t are left untouched; a
// boundary condition fills them afterwards. The time argument is unused for the
// time-independent potentials supported here.
void rhs_interior(const ComplexField &psi, const NlseParams &params, double t,
                  ComplexField &psi_t, Exec exec = Exec::serial);

ComplexField rhs_interior(const ComplexField &psi, const NlseParams &params, double t,
                          Exec exec = Exec::serial);

// Psi_t at one point given its Laplacian; used by boundary conditions that supply a
// boundary Laplacian.
inline cplx rhs_point(cplx psi_value, cplx laplacian, double v_value, const NlseParams &p)
{
  const double n = nonlinear_term(psi_value, v_value, p.s());
  const cplx g = p.a() * laplacian + n * psi_value;
  return {-g.imag(), g.real()};
}

}  // namespace msd

#endif  // MSD_NLSE_HPP
