#include "orbitfisher/kks.hpp"

#include <cmath>

#include "orbitfisher/sampling.hpp"

namespace orbitfisher::kks {

double kks_eval(const OrbitPoint& point, const HermitianMatrix& x, const HermitianMatrix& y) {
  return hs_inner(point.rho(), bracket(x, y));
}

KksForm kks_matrix(const OrbitPoint& point) {
  const ChartFrame frame = chart_frame(point);
  const int m = frame.size();
  KksForm out;
  out.state = point.state();
  out.basis = frame.labels;
  out.matrix = RealMatrix(m, m);
  for (int k = 0; k < m; ++k) {
    for (int l = 0; l < m; ++l) {
      out.matrix(k, l) = kks_eval(point, frame.lie_frame[k], frame.lie_frame[l]);
    }
  }
  return out;
}

CheckReport check_closedness(const LambdaState& state, int samples, std::uint64_t seed,
                             double tol) {
  sampling::Rng rng(seed);
  const int n = state.n();
  const HermitianMatrix rho = state.rho0();
  double worst = 0.0;
  for (int s = 0; s < samples; ++s) {
    const HermitianMatrix x = sampling::random_hermitian(rng, n);
    const HermitianMatrix y = sampling::random_hermitian(rng, n);
    const HermitianMatrix z = sampling::random_hermitian(rng, n);
    const HermitianMatrix cyc =
        bracket(bracket(x, y), z) + bracket(bracket(y, z), x) + bracket(bracket(z, x), y);
    worst = std::max(worst, std::abs(hs_inner(rho, cyc)));
  }
  return make_report("kks_closedness", worst, samples, tol);
}

InvariantComplexStructure invariant_complex_structure(const LambdaState& state) {
  InvariantComplexStructure out;
  out.roots = active_roots(state);
  const int m = 2 * static_cast<int>(out.roots.size());
  out.matrix = RealMatrix::Zero(m, m);
  for (int k = 0; 2 * k < m; ++k) {
    out.matrix(2 * k + 1, 2 * k) = 1.0;
    out.matrix(2 * k, 2 * k + 1) = -1.0;
  }
  return out;
}

HermitianMatrix apply_complex_structure(const OrbitPoint& point, const HermitianMatrix& v) {
  const RealVector c = chart_coords_of_tangent(point, v);
  RealVector jc(c.size());
  for (int k = 0; 2 * k < c.size(); ++k) {
    jc(2 * k) = -c(2 * k + 1);
    jc(2 * k + 1) = c(2 * k);
  }
  return tangent_from_chart_coords(point, jc);
}

KahlerTriple kahler_triple(const OrbitPoint& point) {
  KahlerTriple out;
  out.omega = kks_matrix(point);
  out.j = invariant_complex_structure(point.state());
  out.g = out.omega.matrix * out.j.matrix;
  if (out.g.rows() > 0) {
    const Eigen::SelfAdjointEigenSolver<RealMatrix> es(0.5 * (out.g + out.g.transpose()));
    if (es.eigenvalues()(0) <= 0.0) {
      throw ValidationError("kahler_triple: metric is not positive definite");
    }
  }
  return out;
}

RealMatrix fubini_study_reference(int n, const std::vector<std::array<double, 2>>& xi) {
  if (n < 2) throw ValidationError("fubini_study_reference: need n >= 2");
  const int m = n - 1;
  if (static_cast<int>(xi.size()) != m) {
    throw ValidationError("fubini_study_reference: expected n - 1 affine coordinates");
  }
  Eigen::VectorXcd z(m);
  for (int a = 0; a < m; ++a) z(a) = Complex(xi[a][0], xi[a][1]);
  const double denom = 1.0 + z.squaredNorm();

  // g_ab* = d^2/dxi_a dxi_b* of log(1 + |xi|^2)
  ComplexMatrix gab(m, m);
  for (int a = 0; a < m; ++a) {
    for (int b = 0; b < m; ++b) {
      const double kron = (a == b) ? 1.0 : 0.0;
      gab(a, b) = kron / denom - std::conj(z(a)) * z(b) / (denom * denom);
    }
  }

  // Real metric over (du_1, dv_1, ..., du_m, dv_m): g(X, Y) = 2 Re X^c* g^T ... written
  // entrywise from complex components X^c_a = X_u + i X_v.
  RealMatrix out(2 * m, 2 * m);
  auto comp = [&](int slot) -> Eigen::VectorXcd {
    Eigen::VectorXcd e = Eigen::VectorXcd::Zero(m);
    e(slot / 2) = (slot % 2 == 0) ? Complex(1.0, 0.0) : Complex(0.0, 1.0);
    return e;
  };
  for (int r = 0; r < 2 * m; ++r) {
    for (int c = 0; c < 2 * m; ++c) {
      const Eigen::VectorXcd xr = comp(r);
      const Eigen::VectorXcd yc = comp(c);
      Complex acc = 0.0;
      for (int a = 0; a < m; ++a) {
        for (int b = 0; b < m; ++b) {
          acc += gab(a, b) * xr(a) * std::conj(yc(b));
        }
      }
      out(r, c) = 2.0 * acc.real();
    }
  }
  return out;
}

RealMatrix fubini_study_reference(const LambdaState& state, const ChartVector& xi) {
  if (!state.is_pure()) {
    throw ValidationError("fubini_study_reference: state is not pure");
  }
  return fubini_study_reference(state.n(), {xi.coords.begin(), xi.coords.end()});
}

}  // namespace orbitfisher::kks
