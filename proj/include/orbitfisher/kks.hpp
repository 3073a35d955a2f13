#pragma once

#include <cstdint>

#include "orbitfisher/orbit.hpp"
#include "orbitfisher/report.hpp"

namespace orbitfisher::kks {

// Orbit symplectic form evaluated on generator representatives:
//   Omega(ad_X rho, ad_Y rho) = Tr(rho bracket(X, Y)).
// The value depends only on the tangent classes of X and Y.
double kks_eval(const OrbitPoint& point, const HermitianMatrix& x, const HermitianMatrix& y);

struct KksForm {
  LambdaState state;
  RealMatrix matrix;                 // over the transported chart frame
  std::vector<std::string> basis;
};

// Matrix over the transported normal frame; block [[0, 2 alpha_I], [-2 alpha_I, 0]]
// per active root at the reference point.
KksForm kks_matrix(const OrbitPoint& point);

// Jacobi-identity residual |Tr(rho . cyclic bracket sum)| over random Hermitian triples.
CheckReport check_closedness(const LambdaState& state, int samples, std::uint64_t seed,
                             double tol = Tolerances::verification);

// Invariant almost-complex structure: per active plane J(d/dx_I) = +d/dy_I,
// J(d/dy_I) = -d/dx_I, global sign fixed so that Omega(., J.) is positive definite.
struct InvariantComplexStructure {
  std::vector<RootIndex> roots;
  RealMatrix matrix;  // chart-frame representation, blocks [[0, -1], [1, 0]]
};

InvariantComplexStructure invariant_complex_structure(const LambdaState& state);

// Action of the invariant structure on tangent matrices at a point.
HermitianMatrix apply_complex_structure(const OrbitPoint& point, const HermitianMatrix& v);

struct KahlerTriple {
  KksForm omega;
  InvariantComplexStructure j;
  RealMatrix g;  // g = omega.matrix * j.matrix, positive definite
};

KahlerTriple kahler_triple(const OrbitPoint& point);

// Fubini-Study metric of the affine chart around a basepoint of complex projective
// (n-1)-space, from the potential log(1 + |xi|^2). Coordinates are m = n - 1 complex
// numbers given as (re, im) pairs; the result is the real 2m x 2m metric matrix over
// (du_1, dv_1, ..., du_m, dv_m) with the convention g(X, Y) = 2 Re sum g_ab* X_a conj(Y_b).
RealMatrix fubini_study_reference(int n, const std::vector<std::array<double, 2>>& xi);

// Same, validating that the state is pure.
RealMatrix fubini_study_reference(const LambdaState& state, const ChartVector& xi);

}  // namespace orbitfisher::kks
