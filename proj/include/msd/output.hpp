// SPDX-License-Identifier: Apache-2.0

#ifndef MSD_OUTPUT_HPP
#define MSD_OUTPUT_HPP

#include <string>

#include "msd/field.hpp"

namespace msd
{

// Formats a double with 17 significant digits in scientific notation.
std::string format_real(double v);

//
// 8-bit binary PGM (P5, maxval 255) of a 2D field. Image row 0 is the largest y index,
// so y increases upwards; columns follow x.
//   mod2:  round(255 * clamp(|Psi|^2 / (1.05 rho), 0, 1))
//   phase: round(255 * (arg Psi + pi) / (2 pi))
//
void write_pgm_mod2(const ComplexField &psi, double rho, const std::string &path);
void write_pgm_phase(const ComplexField &psi, const std::string &path);

// "i,j,k,re,im" with one row per grid point in storage order.
void write_state_csv(const ComplexField &psi, const std::string &path);

// 2D field on the plane of a 3D grid where axis `normal` has index `index`. The two
// remaining axes keep their order.
ComplexField plane_slice(const ComplexField &psi, int normal, int index);

// snap_<t>_<kind>.pgm with t printed as %.3f.
std::string snapshot_name(double t, const std::string &kind);

}  // namespace msd

#endif  // MSD_OUTPUT_HPP
