// SPDX-License-Identifier: Apache-2.0

#ifndef MSD_INTEGRATE_HPP
#define MSD_INTEGRATE_HPP

#include <functional>
#include <stdexcept>
#include <string>

#include "msd/bc.hpp"
#include "msd/field.hpp"
#include "msd/nlse.hpp"

namespace msd
{

enum class Scheme
{
  rk4,
  euler
};

struct StepperConfig
{
  double k = 0.0;
  Scheme scheme = Scheme::rk4;
  double blowup_threshold = 1e6;  // on max |Psi|
  Exec exec = Exec::serial;
};

// Raised when a step produces a non-finite value or max |Psi| above the threshold.
class BlowUpError : public std::runtime_error
{
public:
  BlowUpError(double t, double max_abs);
  double time() const { return time_; }
  double max_abs() const { return max_abs_; }

private:
  double time_;
  double max_abs_;
};

//
// Explicit time stepper. Every stage derivative is the interior right-hand side
// followed by the boundary fill of the same stage; the stepper owns its scratch
// buffers so repeated steps do not allocate.
//
class Stepper
{
public:
  // Observer called with (stage state, stage derivative, boundary rate) after each
  // stage derivative is complete.
  using StageObserver =
    std::function<void(const ComplexField &, const ComplexField &, const BoundaryRate &)>;

  Stepper(const Grid &grid, NlseParams params, BoundaryCondition bc, StepperConfig config);

  // Advances psi from t to t + k in place and returns t + k.
  double step(ComplexField &psi, double t);

  // Full derivative (interior and boundary) at (psi, t).
  BoundaryRate derivative(const ComplexField &psi, double t, ComplexField &psi_t) const;

  void set_stage_observer(StageObserver observer) { observer_ = std::move(observer); }

  const StepperConfig &config() const { return config_; }
  const NlseParams &params() const { return params_; }
  const BoundaryCondition &boundary_condition() const { return bc_; }
  const BoundaryMap &map() const { return map_; }

private:
  void stage(const ComplexField &psi, double t, ComplexField &out) const;
  void check(const ComplexField &psi, double t) const;

  Grid grid_;
  NlseParams params_;
  BoundaryCondition bc_;
  StepperConfig config_;
  BoundaryMap map_;
  StageObserver observer_;
  ComplexField k1_, k2_, k3_, k4_, tmp_;
};

ComplexField rk4_step(const ComplexField &psi, double t, const NlseParams &params,
                      const BoundaryCondition &bc, double k);
ComplexField euler_step(const ComplexField &psi, double t, const NlseParams &params,
                        const BoundaryCondition &bc, double k);

// Classic RK4 amplification factor R(z) = 1 + z + z^2/2 + z^3/6 + z^4/24.
cplx rk4_amplification(cplx z);

// k_linear = h^2 / (d sqrt(2) |a|)
double linear_stability_bound(double h, double a, int d);

// The set G of the linearized bound for dimension d.
std::span<const double> stability_g_set(int d);

//
// Linearized RK4+CD bound
//   k < sqrt(8) / max{ ||B||_inf, max_{i, g in G} |L_i - g| } * h^2 / |a|
// with L_i = (h^2/a)(s|Psi_i|^2 - V_i) over interior points and B the boundary row of
// the chosen condition: L0 uses (h^2/a)(s|Psi_b|^2 - V_b), MSD uses
// (h^2/a) Im[Psi_t,b-1 / Psi_b-1]. Conditions without a tabulated row contribute no B
// terms. h is the smallest grid spacing.
//
struct StabilityTerms
{
  double interior = 0.0;  // max over interior i and g in G of |L_i - g|
  double boundary = 0.0;  // ||B||_inf, 0 when the condition has no row
};

StabilityTerms stability_terms(const ComplexField &psi, const ComplexField &psi_t, const NlseParams &params,
                               const BoundaryMap &map, const BoundaryCondition &bc);

double full_stability_bound(const ComplexField &psi, const ComplexField &psi_t,
                            const NlseParams &params, const BoundaryMap &map,
                            const BoundaryCondition &bc);

// Computes psi_t internally.
double full_stability_bound(const ComplexField &psi, const NlseParams &params,
                            const BoundaryCondition &bc);

inline constexpr double kSafetyFactor = 0.8;

inline double recommended_timestep(double bound)
{
  if (!(bound > 0.0))
  {
    throw std::invalid_argument("stability bound must be positive");
  }
  return kSafetyFactor * bound;
}

}  // namespace msd

#endif  // MSD_INTEGRATE_HPP
