#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include <complex>

#include "orbitfisher/herm.hpp"
#include "orbitfisher/sampling.hpp"

using namespace orbitfisher;

namespace {

// Element-wise commutator oracle: i(AB - BA) computed with explicit index loops.
ComplexMatrix bracket_oracle(const ComplexMatrix& a, const ComplexMatrix& b) {
  const int n = static_cast<int>(a.rows());
  ComplexMatrix out = ComplexMatrix::Zero(n, n);
  for (int r = 0; r < n; ++r) {
    for (int c = 0; c < n; ++c) {
      Complex sum = 0.0;
      for (int k = 0; k < n; ++k) sum += a(r, k) * b(k, c) - b(r, k) * a(k, c);
      out(r, c) = Complex(0.0, 1.0) * sum;
    }
  }
  return out;
}

// Scaling-and-squaring power series for exp(iX), independent of the library route.
ComplexMatrix exp_series_oracle(const ComplexMatrix& x) {
  const int n = static_cast<int>(x.rows());
  ComplexMatrix ix = Complex(0.0, 1.0) * x;
  int squarings = 0;
  while (ix.norm() > 0.25) {
    ix *= 0.5;
    ++squarings;
  }
  ComplexMatrix term = ComplexMatrix::Identity(n, n);
  ComplexMatrix sum = term;
  for (int k = 1; k <= 30; ++k) {
    term = term * ix / double(k);
    sum += term;
  }
  for (int s = 0; s < squarings; ++s) sum = sum * sum;
  return sum;
}

}  // namespace

TEST_CASE("hermitian matrix validates and symmetrizes") {
  ComplexMatrix m(2, 2);
  m << Complex(1.0, 0.0), Complex(0.5, 0.25), Complex(0.5, -0.25), Complex(-2.0, 0.0);
  HermitianMatrix h(m);
  CHECK((h.mat() - h.mat().adjoint()).norm() == 0.0);

  ComplexMatrix bad(2, 2);
  bad << Complex(1.0, 0.0), Complex(1.0, 0.0), Complex(0.0, 0.0), Complex(1.0, 0.0);
  CHECK_THROWS_AS(HermitianMatrix{bad}, ValidationError);

  ComplexMatrix imag_diag(2, 2);
  imag_diag << Complex(1.0, 0.5), Complex(0.0, 0.0), Complex(0.0, 0.0), Complex(1.0, 0.0);
  CHECK_THROWS_AS(HermitianMatrix{imag_diag}, ValidationError);
}

TEST_CASE("bracket matches the element-wise oracle and is Hermitian-valued") {
  sampling::Rng rng(7);
  for (int n : {2, 3, 5}) {
    for (int rep = 0; rep < 20; ++rep) {
      const HermitianMatrix a = sampling::random_hermitian(rng, n);
      const HermitianMatrix b = sampling::random_hermitian(rng, n);
      const HermitianMatrix br = bracket(a, b);
      CHECK((br.mat() - bracket_oracle(a.mat(), b.mat())).norm() < 1e-14);
      CHECK((br.mat() - br.mat().adjoint()).norm() == 0.0);
      CHECK((bracket(b, a).mat() + br.mat()).norm() < 1e-14);
    }
  }
}

TEST_CASE("bracket satisfies the cyclic Jacobi identity") {
  sampling::Rng rng(11);
  for (int rep = 0; rep < 50; ++rep) {
    const int n = 2 + rep % 4;
    const HermitianMatrix a = sampling::random_hermitian(rng, n);
    const HermitianMatrix b = sampling::random_hermitian(rng, n);
    const HermitianMatrix c = sampling::random_hermitian(rng, n);
    const HermitianMatrix cyc = bracket(bracket(a, b), c) + bracket(bracket(b, c), a) +
                                bracket(bracket(c, a), b);
    CHECK(cyc.norm() < 1e-10);
  }
}

TEST_CASE("anticommutator and pairing") {
  sampling::Rng rng(13);
  const HermitianMatrix a = sampling::random_hermitian(rng, 3);
  const HermitianMatrix b = sampling::random_hermitian(rng, 3);
  CHECK((anticommutator(a, b).mat() - (a.mat() * b.mat() + b.mat() * a.mat())).norm() < 1e-14);
  CHECK(hs_inner(a, b) == doctest::Approx(hs_inner(b, a)).epsilon(1e-14));
  CHECK(std::abs(hs_inner(a, a) - a.mat().squaredNorm()) < 1e-12);
}

TEST_CASE("off-diagonal basis elements") {
  for (int n : {2, 4}) {
    const HermitianMatrix s = OffDiagBasisElement{0, 1, OffDiagKind::Symmetric}.matrix(n);
    const HermitianMatrix a = OffDiagBasisElement{0, 1, OffDiagKind::Antisymmetric}.matrix(n);
    CHECK(s.mat()(0, 1) == Complex(1.0, 0.0));
    CHECK(s.mat()(1, 0) == Complex(1.0, 0.0));
    CHECK(a.mat()(0, 1) == Complex(0.0, 1.0));
    CHECK(a.mat()(1, 0) == Complex(0.0, -1.0));
    CHECK(hs_inner(s, s) == doctest::Approx(2.0));
    CHECK(hs_inner(a, a) == doctest::Approx(2.0));
    CHECK(hs_inner(s, a) == doctest::Approx(0.0));
    CHECK(s.real_trace() == doctest::Approx(0.0));
  }
  CHECK(OffDiagBasisElement{0, 1, OffDiagKind::Symmetric}.label() == "s_12");
  CHECK(OffDiagBasisElement{2, 3, OffDiagKind::Antisymmetric}.label() == "a_34");
  CHECK(OffDiagBasisElement{0, 11, OffDiagKind::Symmetric}.label() == "s_1_12");
}

TEST_CASE("unitary_exp matches the power-series oracle") {
  sampling::Rng rng(17);
  for (int n : {2, 3, 4}) {
    for (int rep = 0; rep < 10; ++rep) {
      const HermitianMatrix x = sampling::random_hermitian(rng, n, false);
      const ComplexMatrix u = unitary_exp(x);
      CHECK((u - exp_series_oracle(x.mat())).norm() < 1e-12);
      CHECK(is_unitary(u));
    }
  }
}

TEST_CASE("canonical eigendecomposition reconstructs, orders, and is deterministic") {
  sampling::Rng rng(19);
  for (int n : {2, 4, 6}) {
    for (int rep = 0; rep < 10; ++rep) {
      const HermitianMatrix h = sampling::random_hermitian(rng, n, false);
      const EigenDecomposition ed = eigendecompose_canonical(h);
      CHECK((ed.u * ed.lambda.asDiagonal() * ed.u.adjoint() - h.mat()).norm() < 1e-12);
      CHECK(is_unitary(ed.u, 1e-10));
      for (int k = 1; k < n; ++k) CHECK(ed.lambda(k - 1) >= ed.lambda(k));
      const EigenDecomposition again = eigendecompose_canonical(h);
      CHECK((ed.u - again.u).norm() == 0.0);
      CHECK((ed.lambda - again.lambda).norm() == 0.0);
    }
  }
}

TEST_CASE("canonical eigendecomposition handles degenerate spectra") {
  RealVector d(4);
  d << 0.4, 0.4, 0.15, 0.05;
  sampling::Rng rng(23);
  const ComplexMatrix g = sampling::random_unitary(rng, 4);
  const HermitianMatrix h = conjugated(g, HermitianMatrix::FromDiagonal(d));
  const EigenDecomposition ed = eigendecompose_canonical(h);
  CHECK((ed.u * ed.lambda.asDiagonal() * ed.u.adjoint() - h.mat()).norm() < 1e-9);
  CHECK(is_unitary(ed.u, 1e-9));
  CHECK(ed.lambda(0) == doctest::Approx(0.4).epsilon(1e-9));
  CHECK(ed.lambda(1) == doctest::Approx(0.4).epsilon(1e-9));
}
