#pragma once

#include <optional>
#include <string>
#include <utility>
#include <vector>

#include "orbitfisher/herm.hpp"
#include "orbitfisher/report.hpp"

// Linear Fisher structures on R^{2n}: invertible skew-symmetric real maps, or their
// complex n x n representatives, which are skew-adjoint matrices whose rows are
// mutually orthogonal and nonzero (equivalently M M* is diagonal positive, and
// M^2 = -M M*). Roots are the positive numbers d_r with squares on the diagonal.
namespace orbitfisher::linfisher {

enum class Form { Real, Complex };

struct LinearFisherStructure {
  Form form = Form::Real;
  RealMatrix real_rep;        // used when form == Real
  ComplexMatrix complex_rep;  // used when form == Complex
};

struct MembershipResult {
  bool is_member = false;
  bool skew_ok = false;
  bool rows_ok = false;       // complex form: rows mutually orthogonal and nonzero
  bool invertible_ok = false;
  std::string failure;        // empty when is_member
  std::vector<double> roots;  // descending, with repetitions; empty unless member
};

MembershipResult is_fisher_structure(const LinearFisherStructure& j,
                                     double tol = Tolerances::verification);

// Real 2n x 2n matrix acting on (Re_1..Re_n, Im_1..Im_n).
RealMatrix realification(const ComplexMatrix& m);

struct NormalFormResult {
  std::vector<std::pair<double, int>> roots;  // (d_r, multiplicity), descending
  RealMatrix change_of_basis;                 // orthogonal
  RealMatrix block_matrix;                    // blocks [[0, -d_r I], [d_r I, 0]]
  double residual = 0.0;                      // ||Q B Q^T - J||
};

NormalFormResult normal_form(const LinearFisherStructure& j,
                             double tol = Tolerances::verification,
                             double cluster_tol = 1e-7);

// Componentwise positive rescaling diag(q) J in the coordinate plane decomposition.
// The result must again be a Fisher structure; q entries incompatible with the
// structure's coupling pattern are rejected.
ComplexMatrix scaling_action(const std::vector<double>& q, const ComplexMatrix& m,
                             double tol = Tolerances::verification);

struct UnitaryIntersectionResult {
  ComplexMatrix q_scaling;  // diagonal positive, Q = D^{-1/2}
  ComplexMatrix unitary;    // Q J, unitary and skew-adjoint
  double residual = 0.0;    // || (QJ)(QJ)* - I ||
};

UnitaryIntersectionResult unitary_intersection(const ComplexMatrix& m,
                                               double tol = Tolerances::verification);

struct ManifoldCheckReport {
  std::vector<CheckReport> checks;
  std::vector<int> failing_samples;   // indices of non-member samples
  double root_drift = 0.0;            // max deviation of the sorted root multiset
  bool pass = false;
};

// Checks that every sampled matrix is a Fisher structure and that the root
// multiset is constant across the samples.
ManifoldCheckReport manifold_fisher_check(const std::vector<RealMatrix>& samples,
                                          double tol = Tolerances::verification);

}  // namespace orbitfisher::linfisher
