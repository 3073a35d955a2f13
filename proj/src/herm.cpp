#include "orbitfisher/herm.hpp"

#include <cmath>
#include <sstream>

namespace orbitfisher {

namespace {

void require(bool cond, const std::string& what) {
  if (!cond) throw ValidationError(what);
}

}  // namespace

HermitianMatrix::HermitianMatrix(const ComplexMatrix& m, double tol) {
  require(m.rows() == m.cols(), "HermitianMatrix: matrix must be square");
  require(m.allFinite(), "HermitianMatrix: entries must be finite");
  const double dev = (m - m.adjoint()).norm();
  if (dev > tol * std::max(1.0, m.norm())) {
    std::ostringstream os;
    os << "HermitianMatrix: deviation from Hermiticity " << dev << " exceeds tolerance " << tol;
    throw ValidationError(os.str());
  }
  mat_ = 0.5 * (m + m.adjoint().eval());
}

HermitianMatrix HermitianMatrix::Zero(int n) {
  return HermitianMatrix(ComplexMatrix::Zero(n, n), Unchecked{});
}

HermitianMatrix HermitianMatrix::Identity(int n) {
  return HermitianMatrix(ComplexMatrix::Identity(n, n), Unchecked{});
}

HermitianMatrix HermitianMatrix::FromDiagonal(const RealVector& d) {
  ComplexMatrix m = ComplexMatrix::Zero(d.size(), d.size());
  for (int k = 0; k < d.size(); ++k) m(k, k) = d(k);
  return HermitianMatrix(std::move(m), Unchecked{});
}

HermitianMatrix HermitianMatrix::operator+(const HermitianMatrix& other) const {
  return HermitianMatrix(ComplexMatrix(mat_ + other.mat_), Unchecked{});
}

HermitianMatrix HermitianMatrix::operator-(const HermitianMatrix& other) const {
  return HermitianMatrix(ComplexMatrix(mat_ - other.mat_), Unchecked{});
}

HermitianMatrix HermitianMatrix::operator*(double scalar) const {
  return HermitianMatrix(ComplexMatrix(scalar * mat_), Unchecked{});
}

HermitianMatrix OffDiagBasisElement::matrix(int n) const {
  require(0 <= i && i < j && j < n, "OffDiagBasisElement: need 0 <= i < j < n");
  ComplexMatrix m = ComplexMatrix::Zero(n, n);
  if (kind == OffDiagKind::Symmetric) {
    m(i, j) = 1.0;
    m(j, i) = 1.0;
  } else {
    m(i, j) = Complex(0.0, 1.0);
    m(j, i) = Complex(0.0, -1.0);
  }
  return HermitianMatrix(m);
}

std::string OffDiagBasisElement::label() const {
  std::ostringstream os;
  os << (kind == OffDiagKind::Symmetric ? "s_" : "a_");
  os << (i + 1);
  if (i + 1 >= 10 || j + 1 >= 10) os << "_";
  os << (j + 1);
  return os.str();
}

HermitianMatrix bracket(const HermitianMatrix& a, const HermitianMatrix& b) {
  require(a.dim() == b.dim(), "bracket: dimension mismatch");
  const ComplexMatrix ab = a.mat_ * b.mat_;
  ComplexMatrix c = Complex(0.0, 1.0) * (ab - ab.adjoint().eval());
  // i(AB - BA) is exactly Hermitian by construction since (AB)^dagger = BA.
  return HermitianMatrix(std::move(c), HermitianMatrix::Unchecked{});
}

HermitianMatrix anticommutator(const HermitianMatrix& a, const HermitianMatrix& b) {
  require(a.dim() == b.dim(), "anticommutator: dimension mismatch");
  const ComplexMatrix ab = a.mat_ * b.mat_;
  ComplexMatrix c = ab + ab.adjoint().eval();
  return HermitianMatrix(std::move(c), HermitianMatrix::Unchecked{});
}

double hs_inner(const HermitianMatrix& a, const HermitianMatrix& b) {
  require(a.dim() == b.dim(), "hs_inner: dimension mismatch");
  return (a.mat() * b.mat()).trace().real();
}

HermitianMatrix conjugated(const ComplexMatrix& g, const HermitianMatrix& x) {
  require(g.rows() == x.dim() && g.cols() == x.dim(), "conjugated: dimension mismatch");
  ComplexMatrix m = g * x.mat() * g.adjoint();
  m = 0.5 * (m + m.adjoint().eval());
  return HermitianMatrix(std::move(m), HermitianMatrix::Unchecked{});
}

bool is_unitary(const ComplexMatrix& g, double tol) {
  if (g.rows() != g.cols()) return false;
  const int n = static_cast<int>(g.rows());
  return (g * g.adjoint() - ComplexMatrix::Identity(n, n)).norm() <= tol * std::max(1.0, std::sqrt(double(n)));
}

EigenDecomposition eigendecompose_canonical(const HermitianMatrix& h, double degeneracy_tol) {
  const int n = h.dim();
  Eigen::SelfAdjointEigenSolver<ComplexMatrix> es(h.mat());
  if (es.info() != Eigen::Success) throw ConvergenceError("eigendecompose_canonical: solver failed");

  EigenDecomposition out;
  out.lambda = RealVector(n);
  out.u = ComplexMatrix(n, n);
  for (int k = 0; k < n; ++k) {  // ascending -> descending
    out.lambda(k) = es.eigenvalues()(n - 1 - k);
    out.u.col(k) = es.eigenvectors().col(n - 1 - k);
  }

  // Deterministic column convention within each degenerate cluster.
  int begin = 0;
  while (begin < n) {
    int end = begin + 1;
    while (end < n &&
           std::abs(out.lambda(end - 1) - out.lambda(end)) <=
               degeneracy_tol * std::max(1.0, std::abs(out.lambda(end - 1)))) {
      ++end;
    }
    for (int c = begin; c < end; ++c) {
      int arg = 0;
      double best = -1.0;
      for (int r = 0; r < n; ++r) {
        const double m = std::abs(out.u(r, c));
        if (m > best + 1e-15) {
          best = m;
          arg = r;
        }
      }
      const Complex pivot = out.u(arg, c);
      if (std::abs(pivot) > 0.0) out.u.col(c) *= std::conj(pivot) / std::abs(pivot);
    }
    for (int c = begin; c < end; ++c) {  // modified Gram-Schmidt in index order
      for (int p = begin; p < c; ++p) {
        const Complex proj = (out.u.col(p).adjoint() * out.u.col(c))(0, 0);
        out.u.col(c) -= proj * out.u.col(p);
      }
      const double nrm = out.u.col(c).norm();
      if (nrm < 1e-8) throw ConvergenceError("eigendecompose_canonical: degenerate cluster columns collapsed");
      out.u.col(c) /= nrm;
    }
    begin = end;
  }

  const double residual =
      (out.u * out.lambda.asDiagonal() * out.u.adjoint() - h.mat()).norm();
  if (residual > 1e-9 * std::max(1.0, h.norm())) {
    throw ConvergenceError("eigendecompose_canonical: reconstruction residual too large");
  }
  return out;
}

ComplexMatrix unitary_exp(const HermitianMatrix& x) {
  Eigen::SelfAdjointEigenSolver<ComplexMatrix> es(x.mat());
  if (es.info() != Eigen::Success) throw ConvergenceError("unitary_exp: eigensolver failed");
  const int n = x.dim();
  Eigen::VectorXcd phases(n);
  for (int k = 0; k < n; ++k) {
    phases(k) = std::exp(Complex(0.0, es.eigenvalues()(k)));
  }
  return es.eigenvectors() * phases.asDiagonal() * es.eigenvectors().adjoint();
}

}  // namespace orbitfisher
