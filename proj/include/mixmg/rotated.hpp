#pragma once

#include "mixmg/complex.hpp"

namespace mixmg {

/// H_0(div) side of the 2D complex: H^1_0 --curl--> RT0 --div--> P0.
///
/// Assembled directly from the Raviart-Thomas basis psi_e (unit normal flux
/// across e, normal = tangent turned clockwise) rather than copied from the
/// edge complex, so that the rotation isomorphism can be checked against it.
struct RotatedLevel {
  SpMat rot;        // interior edges x interior vertices: flux of curl(hat_v)
  SpMat div;        // triangles x interior edges
  SpMat mass_flux;  // RT0 mass on interior edges
  Vec Mt;           // P0 mass diagonal (1/|T|)
  Vec Mv_lumped;    // lumped mass of the sigma space
  SpMat coupling;   // rot^T mass_flux
  SpMat div_stiffness;  // div^T Mt div
};

RotatedLevel assemble_rotated(const MeshLevel& mesh, const DeRhamLevel& level);

/// Full-space RT0 mass matrix by edge-midpoint quadrature.
SpMat assemble_flux_mass(const MeshLevel& mesh);

/// coupling^T Mv_lumped^{-1} coupling + div^T Mt div.
SpMat schur_rotated(const RotatedLevel& level);

/// Load of a constant field against every RT0 basis function (full space).
Vec flux_load_vector(const MeshLevel& mesh, Point field);

/// RT0 prolongation coarse -> fine (full spaces), by two-point Gauss
/// quadrature of the coarse normal flux across each fine edge.
SpMat flux_prolongation(const MeshLevel& coarse, const MeshLevel& fine);

}  // namespace mixmg
