#pragma once

#include <cstdint>

#include "orbitfisher/orbit.hpp"
#include "orbitfisher/report.hpp"

// Equivariant fibration of the orbit of a total state eta0 over the orbit of a
// base state rho0 with a larger stabilizer: the degeneracy partition of rho0 must
// coarsen that of eta0, so g eta0 g* -> g rho0 g* is well defined. Active roots of
// eta0 split into vertical ones (inside a base cluster) and horizontal ones
// (crossing base clusters); fibres are orbits of the per-cluster sub-spectra.
namespace orbitfisher::fibration {

struct OrbitFibration {
  LambdaState total;
  LambdaState base;
  std::vector<RootIndex> vertical_roots;    // alpha, beta from the total spectrum
  std::vector<RootIndex> horizontal_roots;  // alpha, beta from the total spectrum
  int total_dim = 0;
  int base_dim = 0;
  int fibre_dim = 0;
};

OrbitFibration fibration_new(const LambdaState& total, const LambdaState& base,
                             double tol = Tolerances::construction);

OrbitPoint projection(const OrbitFibration& fib, const OrbitPoint& point_total);

// Omega(vertical, horizontal) = 0 at random orbit points.
CheckReport check_symplectic_orthogonality(const OrbitFibration& fib, int samples,
                                           std::uint64_t seed, double tol = 1e-10);

struct InvolutivityReport {
  CheckReport vertical_vertical;      // bracket of vertical frame stays in the base stabilizer
  CheckReport horizontal_vertical;    // bracket lands in the base normal space
  bool pass = false;
};

InvolutivityReport check_involutivity(const OrbitFibration& fib, double tol = 1e-12);

struct BlockDiagonalityReport {
  std::vector<CheckReport> checks;          // one per tensor, cross-block magnitude
  double horizontal_vs_base_gap = 0.0;      // informational, no pass criterion
  bool vertical_fisher_structure_ok = false;
  double vertical_root_residual = 0.0;
  bool pass = false;
};

// Verifies that the canonical tensors on the total orbit are block diagonal in the
// vertical + horizontal frame and that the vertical block of the Fisher structure
// is a linear Fisher structure with roots beta_I / alpha_I over vertical roots.
// The gap between the horizontal Fisher block and the base-orbit tensor is
// reported without a pass criterion.
BlockDiagonalityReport check_tensor_block_diagonality(const OrbitFibration& fib,
                                                      double tol = 1e-10);

struct FibreFactor {
  int cluster_begin = 0;                 // base cluster index range
  int cluster_end = 0;
  std::vector<double> sub_spectrum;      // total eigenvalues inside the cluster
  int dim = 0;                           // orbit dimension of the normalized sub-spectrum
};

struct FibreOrbitDescription {
  std::vector<FibreFactor> factors;
  int fibre_dim = 0;  // equals dim stab(base) - dim stab(total)
};

FibreOrbitDescription fibre_orbit(const OrbitFibration& fib);

}  // namespace orbitfisher::fibration
