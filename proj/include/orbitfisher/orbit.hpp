#pragma once

#include <array>
#include <utility>
#include <vector>

#include "orbitfisher/herm.hpp"

namespace orbitfisher {

// Half-open index range [begin, end) of equal eigenvalues in descending order.
struct DegeneracyCluster {
  int begin = 0;
  int end = 0;
  int size() const { return end - begin; }
};

// Spectrum of a trace-one positive-semidefinite reference state rho0 = diag(lambda),
// lambda sorted descending. Entries within a degeneracy cluster are snapped to the
// cluster mean at construction, so equal-eigenvalue comparisons downstream are exact.
class LambdaState {
 public:
  int n() const { return static_cast<int>(lambda_.size()); }
  const RealVector& lambda() const { return lambda_; }
  double degeneracy_tol() const { return degeneracy_tol_; }
  const std::vector<DegeneracyCluster>& clusters() const { return clusters_; }
  int cluster_of(int index) const { return cluster_of_[index]; }
  std::vector<int> multiplicities() const;

  HermitianMatrix rho0() const { return HermitianMatrix::FromDiagonal(lambda_); }
  bool is_pure() const;
  int orbit_dim() const;  // n^2 - sum of squared multiplicities

 private:
  friend LambdaState lambda_state_new(const std::vector<double>&, double, double);
  RealVector lambda_;
  double degeneracy_tol_ = Tolerances::degeneracy;
  std::vector<DegeneracyCluster> clusters_;
  std::vector<int> cluster_of_;
};

LambdaState lambda_state_new(const std::vector<double>& lambda,
                             double construction_tol = Tolerances::construction,
                             double degeneracy_tol = Tolerances::degeneracy);

// Off-diagonal pair I = (i, j), 0-based, i < j, with
//   alpha = lambda_i - lambda_j   (root value; active iff alpha > 0 after snapping)
//   beta  = lambda_i + lambda_j
struct RootIndex {
  int i = 0;
  int j = 1;
  double alpha = 0.0;
  double beta = 0.0;
  bool active = false;
};

std::vector<RootIndex> all_roots(const LambdaState& state);      // lexicographic
std::vector<RootIndex> active_roots(const LambdaState& state);   // lexicographic

// Splitting of Hermitian n x n matrices at rho0 into stabilizer directions
// (diagonals plus inactive planes) and the normal space (active planes).
struct SplittingReport {
  std::vector<HermitianMatrix> stabilizer_basis;
  std::vector<std::pair<OffDiagBasisElement, OffDiagBasisElement>> normal_basis;  // (s_I, a_I)
  int orbit_dim = 0;
};

SplittingReport splitting(const LambdaState& state);

// Real chart coordinates, one (x, y) pair per active root in lexicographic order.
struct ChartVector {
  std::vector<std::array<double, 2>> coords;
};

// Point rho = g rho0 g^dagger on the isospectral orbit of a LambdaState.
class OrbitPoint {
 public:
  static OrbitPoint reference(const LambdaState& state);
  static OrbitPoint from_diagonalizer(const LambdaState& state, const ComplexMatrix& g,
                                      double tol = Tolerances::construction);

  const HermitianMatrix& rho() const { return rho_; }
  const ComplexMatrix& diagonalizer() const { return g_; }
  const LambdaState& state() const { return state_; }

 private:
  OrbitPoint(HermitianMatrix rho, ComplexMatrix g, LambdaState state)
      : rho_(std::move(rho)), g_(std::move(g)), state_(std::move(state)) {}
  HermitianMatrix rho_;
  ComplexMatrix g_;
  LambdaState state_;
};

// rho = exp(i sum_I (x_I s_I + y_I a_I)) rho0 exp(-i ...), coords over active roots.
OrbitPoint exp_chart(const LambdaState& state, const ChartVector& coords);

// ad_X rho = bracket(X, rho).
HermitianMatrix tangent_vector(const OrbitPoint& point, const HermitianMatrix& x);

// Hilbert-Schmidt projection onto the active planes of the reference splitting.
HermitianMatrix project_to_normal(const HermitianMatrix& x, const LambdaState& state);

// Unique X in the transported normal space with bracket(X, rho) = v.
// Requires v tangent at the point: stabilizer components below tol after pullback.
HermitianMatrix phi_map(const OrbitPoint& point, const HermitianMatrix& v,
                        double tol = Tolerances::verification);

// Transported frame data at an orbit point: for each active root I, the pair
// (Ad_g s_I, Ad_g a_I) and matching tangent vectors, in lexicographic root order.
// Frame slots are ordered x_I, y_I per root; labels are "s_ij" / "a_ij".
struct ChartFrame {
  LambdaState state;
  std::vector<RootIndex> roots;
  std::vector<HermitianMatrix> lie_frame;
  std::vector<HermitianMatrix> tangent_frame;
  std::vector<std::string> labels;
  int size() const { return static_cast<int>(lie_frame.size()); }
};

ChartFrame chart_frame(const OrbitPoint& point);

// Coordinates of a tangent matrix in the transported tangent frame.
RealVector chart_coords_of_tangent(const OrbitPoint& point, const HermitianMatrix& v,
                                   double tol = Tolerances::verification);

HermitianMatrix tangent_from_chart_coords(const OrbitPoint& point, const RealVector& coords);

}  // namespace orbitfisher
