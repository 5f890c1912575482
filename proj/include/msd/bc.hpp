// SPDX-License-Identifier: Apache-2.0

#ifndef MSD_BC_HPP
#define MSD_BC_HPP

#include <functional>
#include <optional>
#include <string>
#include <variant>
#include <vector>

#include "msd/field.hpp"
#include "msd/nlse.hpp"

namespace msd
{

inline constexpr double kDefaultSingularity = 1e-12;

namespace bc
{

// Modulus-squared Dirichlet. The boundary rotates at the real frequency read off the
// inward neighbour; when |Psi_{b-1}|^2 <= eps_sing the point falls back to Psi_t,b = 0.
// Setting frozen_omega replaces the measured frequency by a known constant.
struct Msd
{
  double eps_sing = kDefaultSingularity;
  std::optional<double> frozen_omega;
};

// lap(Psi_b) = 0
struct LaplacianZero
{
};

// One-sided second-order boundary Laplacian; 1D grids only.
struct OneSided2
{
};

// Analytic solution and its time derivative at a physical point.
struct ExactSolution
{
  std::function<cplx(const Point &, double)> value;
  std::function<cplx(const Point &, double)> time_derivative;
};

// Boundary driven by a closed-form solution. By default the analytic Psi_t is injected
// at every stage; with overwrite_values the stepper additionally resets the boundary
// values to the analytic solution after each full step.
struct ExactDirichlet
{
  ExactSolution solution;
  bool overwrite_values = false;
};

// Psi_t,b = 0
struct ZeroDirichlet
{
};

}  // namespace bc

using BoundaryCondition =
  std::variant<bc::Msd, bc::LaplacianZero, bc::OneSided2, bc::ExactDirichlet, bc::ZeroDirichlet>;

std::string bc_name(const BoundaryCondition &bc);

//
// Boundary frequencies, one per BoundaryMap pair, in the order of the map. Entries for
// points that took the singular fallback are zero.
//
struct BoundaryRate
{
  std::vector<double> omega_tilde;
};

// Complex form: Psi_t,b = i Im[Psi_t,b-1 / Psi_b-1] Psi_b.
BoundaryRate msd_apply(const ComplexField &psi, ComplexField &psi_t, const BoundaryMap &map,
                       double eps_sing = kDefaultSingularity);

// Same boundary frequency supplied directly (known solution frequency).
BoundaryRate msd_apply_frozen(const ComplexField &psi, ComplexField &psi_t,
                              const BoundaryMap &map, double omega);

// Real-arithmetic form on separate real/imaginary arrays, each indexed like the grid.
BoundaryRate msd_apply_split(std::span<const double> psi_re, std::span<const double> psi_im,
                             std::span<double> psi_t_re, std::span<double> psi_t_im,
                             const BoundaryMap &map, double eps_sing = kDefaultSingularity);

// Boundary Laplacian implied by the MSD condition, one value per pair:
//   lap(Psi_b) = [Re(lap(Psi_b-1) / Psi_b-1) + (N_b-1 - N_b) / a] Psi_b
// lap_interior must hold the Laplacian at every b-1 point. In the singular case the
// value returned makes the NLSE right-hand side vanish at b.
std::vector<cplx> msd_laplacian(const ComplexField &psi, const ComplexField &lap_interior,
                                const BoundaryMap &map, const NlseParams &params,
                                double eps_sing = kDefaultSingularity);

// The 1D form with the central-difference Laplacian at b-1 substituted in. Returns
// {left, right} boundary Laplacians.
std::array<cplx, 2> msd_laplacian_cd1d(const ComplexField &psi, const NlseParams &params,
                                       double eps_sing = kDefaultSingularity);

// Psi_t,b = i (s |Psi_b|^2 - V_b) Psi_b
void l0_apply(const ComplexField &psi, ComplexField &psi_t, const BoundaryMap &map,
              const NlseParams &params);

// One-sided Laplacian (-Psi_b-3 + 4 Psi_b-2 - 5 Psi_b-1 + 2 Psi_b) / h^2 mirrored at
// each end of a 1D grid, then the full right-hand side. Throws for dim != 1.
void one_sided_apply(const ComplexField &psi, ComplexField &psi_t, const NlseParams &params);

// The one-sided stencil alone: {left, right} boundary Laplacians.
std::array<cplx, 2> one_sided_laplacian(const ComplexField &psi);

void exact_apply(ComplexField &psi_t, const BoundaryMap &map, const bc::ExactSolution &solution,
                 double t);

void zero_apply(ComplexField &psi_t, const BoundaryMap &map);

// Fills the boundary entries of psi_t according to bc. psi_t must already hold the
// interior right-hand side. Only the MSD variants return frequencies.
BoundaryRate apply_boundary(const BoundaryCondition &bc, const ComplexField &psi,
                            ComplexField &psi_t, const BoundaryMap &map,
                            const NlseParams &params, double t);

}  // namespace msd

#endif  // MSD_BC_HPP
