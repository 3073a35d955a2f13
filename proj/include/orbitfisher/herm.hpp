#pragma once

#include <complex>
#include <stdexcept>
#include <string>

#include <Eigen/Dense>

// Conventions used throughout:
//   - observables are Hermitian n x n matrices; the pairing is hs_inner(A, B) = Tr(AB)
//   - bracket(A, B) = i(AB - BA), Hermitian-valued on Hermitian inputs
//   - anticommutator(A, B) = AB + BA
//   - unitary_exp(X) = exp(iX)
//   - matrix norms are Frobenius unless stated otherwise
namespace orbitfisher {

using Complex = std::complex<double>;
using ComplexMatrix = Eigen::MatrixXcd;
using RealMatrix = Eigen::MatrixXd;
using RealVector = Eigen::VectorXd;

struct Tolerances {
  static constexpr double construction = 1e-12;
  static constexpr double verification = 1e-9;
  static constexpr double degeneracy = 1e-9;  // relative eigenvalue gap
};

class ValidationError : public std::runtime_error {
 public:
  explicit ValidationError(const std::string& what) : std::runtime_error(what) {}
};

class SingularStructureError : public std::runtime_error {
 public:
  explicit SingularStructureError(const std::string& what) : std::runtime_error(what) {}
};

class ConvergenceError : public std::runtime_error {
 public:
  explicit ConvergenceError(const std::string& what) : std::runtime_error(what) {}
};

// Square Hermitian matrix; storage is exactly Hermitian after construction.
class HermitianMatrix {
 public:
  explicit HermitianMatrix(const ComplexMatrix& m, double tol = Tolerances::construction);

  static HermitianMatrix Zero(int n);
  static HermitianMatrix Identity(int n);
  static HermitianMatrix FromDiagonal(const RealVector& d);

  int dim() const { return static_cast<int>(mat_.rows()); }
  const ComplexMatrix& mat() const { return mat_; }

  double norm() const { return mat_.norm(); }
  double real_trace() const { return mat_.trace().real(); }

  HermitianMatrix operator+(const HermitianMatrix& other) const;
  HermitianMatrix operator-(const HermitianMatrix& other) const;
  HermitianMatrix operator*(double scalar) const;

 private:
  struct Unchecked {};
  HermitianMatrix(ComplexMatrix m, Unchecked) : mat_(std::move(m)) {}

  ComplexMatrix mat_;

  friend HermitianMatrix bracket(const HermitianMatrix&, const HermitianMatrix&);
  friend HermitianMatrix anticommutator(const HermitianMatrix&, const HermitianMatrix&);
  friend HermitianMatrix conjugated(const ComplexMatrix&, const HermitianMatrix&);
};

enum class OffDiagKind { Symmetric, Antisymmetric };

// Basis element of the off-diagonal (i, j)-plane, 0-based indices, i < j:
//   Symmetric      s_I = e_ij + e_ji
//   Antisymmetric  a_I = i(e_ij - e_ji)
// Both are Hermitian, traceless, and have hs_inner(b, b) = 2.
struct OffDiagBasisElement {
  int i = 0;
  int j = 1;
  OffDiagKind kind = OffDiagKind::Symmetric;

  HermitianMatrix matrix(int n) const;
  std::string label() const;  // "s_12" / "a_12", 1-based indices
};

HermitianMatrix bracket(const HermitianMatrix& a, const HermitianMatrix& b);
HermitianMatrix anticommutator(const HermitianMatrix& a, const HermitianMatrix& b);
double hs_inner(const HermitianMatrix& a, const HermitianMatrix& b);

// g X g^dagger for unitary g.
HermitianMatrix conjugated(const ComplexMatrix& g, const HermitianMatrix& x);

struct EigenDecomposition {
  ComplexMatrix u;     // unitary, columns are eigenvectors
  RealVector lambda;   // descending
};

// Eigendecomposition with eigenvalues sorted descending and a deterministic
// column convention: in each degenerate cluster (relative gap <= degeneracy_tol)
// the first component of largest modulus is made real positive, then the
// cluster columns are Gram-Schmidt orthonormalized in index order.
EigenDecomposition eigendecompose_canonical(const HermitianMatrix& h,
                                            double degeneracy_tol = Tolerances::degeneracy);

ComplexMatrix unitary_exp(const HermitianMatrix& x);

bool is_unitary(const ComplexMatrix& g, double tol = Tolerances::construction);

}  // namespace orbitfisher
