#pragma once

#include "orbitfisher/kks.hpp"
#include "orbitfisher/orbit.hpp"
#include "orbitfisher/report.hpp"

// Fisher geometry of an isospectral orbit. At a point rho the symmetric
// logarithmic derivative of a tangent matrix v solves (1/2){sld, rho} = v; the
// Fisher tensor over the chart frame is T(v, w) = Tr(rho sld(v) sld(w)), split as
//   G(v, w) = Re T(v, w)   (metric part, per active plane (2 alpha/beta)^2 beta I_2)
//   W(v, w) = Im T(v, w)   (form part, per active plane (2 alpha/beta)^2 alpha [[0,-1],[1,0]])
// For Hermitian P, Q: Tr(rho P Q) = (1/2)Tr(rho {P,Q}) - (i/2)Tr(rho bracket(P,Q)),
// so W(v, w) = -(1/2) Tr(rho bracket(sld(v), sld(w))) identically: the form part is
// -1/2 times the KKS pullback along v -> sld(v).
namespace orbitfisher::fisher {

// Closed-form solver data on the reference frame: the maps below act per active
// plane as
//   d_map:  X -> bracket(X, rho)            (s_I, a_I) -> (-alpha_I a_I, +alpha_I s_I)
//   l_map:  A -> X with (1/2){X, rho} = A   scales the plane by 2 / beta_I
// and are conjugated by the diagonalizer away from the reference point.
class SldSolver {
 public:
  explicit SldSolver(const LambdaState& state);

  const LambdaState& state() const { return state_; }

  HermitianMatrix d_map(const OrbitPoint& point, const HermitianMatrix& x) const;
  HermitianMatrix l_map(const OrbitPoint& point, const HermitianMatrix& a,
                        double tol = Tolerances::verification) const;
  // sld of a tangent matrix: l_map of it.
  HermitianMatrix sld(const OrbitPoint& point, const HermitianMatrix& v,
                      double tol = Tolerances::verification) const;

 private:
  LambdaState state_;
  std::vector<RootIndex> roots_;
  std::vector<HermitianMatrix> s_basis_;
  std::vector<HermitianMatrix> a_basis_;
};

HermitianMatrix d_map(const OrbitPoint& point, const HermitianMatrix& x);
HermitianMatrix l_map(const OrbitPoint& point, const HermitianMatrix& a,
                      double tol = Tolerances::verification);
HermitianMatrix sld(const OrbitPoint& point, const HermitianMatrix& v,
                    double tol = Tolerances::verification);

struct FisherTensor {
  std::vector<std::string> basis;
  RealMatrix f;          // f = g_sym + w_antisym
  RealMatrix g_sym;
  RealMatrix w_antisym;
};

// Assembled numerically over the transported chart frame at the point.
FisherTensor fisher_tensor(const OrbitPoint& point);

// Closed-form chart values at the reference point.
FisherTensor fisher_tensor_chart(const LambdaState& state);

// Verifies W(v, w) = -(1/2) kks_eval(rho, sld(v), sld(w)) over the chart frame and
// that W is nonsingular on the active frame.
CheckReport fisher_form_pullback_check(const OrbitPoint& point,
                                       double tol = Tolerances::verification);

struct FisherStructureTensor {
  std::vector<std::string> basis;
  RealMatrix j;                 // W^{-1} G over the chart frame
  std::vector<double> delta;    // per active root, (beta_I / alpha_I)^2
  double square_residual = 0.0; // || j^2 + diag(delta (x) I_2) ||
};

FisherStructureTensor fisher_structure(const OrbitPoint& point);

// Anticommutator eigenvalue probe for one off-diagonal plane (0-based i < j):
//   beta_direct  = lambda_i + lambda_j, the eigenvalue in {v_ij, rho0} = beta v_ij
//   beta_formula = (1/n) (sum_{(k,m) != (i,j)} alpha_km + 2 (n - floor((n+2)/2)) Tr rho0)
// summing over ordered pairs. The two disagree in general; both are reported.
struct EqMapProbe {
  double beta_direct = 0.0;
  double beta_formula = 0.0;
};

EqMapProbe eval_eq_map(const LambdaState& state, int i, int j);

}  // namespace orbitfisher::fisher
