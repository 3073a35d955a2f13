#include "orbitfisher/orbit.hpp"

#include <algorithm>
#include <cmath>
#include <numeric>
#include <sstream>

namespace orbitfisher {

namespace {

void require(bool cond, const std::string& what) {
  if (!cond) throw ValidationError(what);
}

}  // namespace

std::vector<int> LambdaState::multiplicities() const {
  std::vector<int> out;
  out.reserve(clusters_.size());
  for (const auto& c : clusters_) out.push_back(c.size());
  return out;
}

bool LambdaState::is_pure() const {
  return n() >= 1 && lambda_(0) == 1.0 && (n() == 1 || lambda_(1) == 0.0);
}

int LambdaState::orbit_dim() const {
  int sum_sq = 0;
  for (const auto& c : clusters_) sum_sq += c.size() * c.size();
  return n() * n() - sum_sq;
}

LambdaState lambda_state_new(const std::vector<double>& lambda, double construction_tol,
                             double degeneracy_tol) {
  require(!lambda.empty(), "lambda_state_new: empty spectrum");
  require(construction_tol > 0 && degeneracy_tol > 0, "lambda_state_new: tolerances must be positive");
  const int n = static_cast<int>(lambda.size());

  RealVector v(n);
  double sum = 0.0;
  for (int k = 0; k < n; ++k) {
    const double x = lambda[k];
    require(std::isfinite(x), "lambda_state_new: non-finite entry");
    require(x >= -construction_tol, "lambda_state_new: negative entry");
    v(k) = std::max(x, 0.0);
    sum += v(k);
  }
  if (std::abs(sum - 1.0) > construction_tol) {
    std::ostringstream os;
    os << "lambda_state_new: entries sum to " << sum << ", expected 1";
    throw ValidationError(os.str());
  }
  std::sort(v.data(), v.data() + n, std::greater<double>());

  LambdaState state;
  state.degeneracy_tol_ = degeneracy_tol;
  state.cluster_of_.assign(n, 0);

  int begin = 0;
  while (begin < n) {
    int end = begin + 1;
    while (end < n &&
           std::abs(v(end - 1) - v(end)) <= degeneracy_tol * std::max(1.0, std::abs(v(end - 1)))) {
      ++end;
    }
    const double mean = v.segment(begin, end - begin).mean();
    for (int k = begin; k < end; ++k) {
      v(k) = mean;  // snapped: equal eigenvalues compare exactly equal downstream
      state.cluster_of_[k] = static_cast<int>(state.clusters_.size());
    }
    state.clusters_.push_back({begin, end});
    begin = end;
  }
  state.lambda_ = v;
  return state;
}

std::vector<RootIndex> all_roots(const LambdaState& state) {
  std::vector<RootIndex> out;
  const int n = state.n();
  out.reserve(n * (n - 1) / 2);
  for (int i = 0; i < n; ++i) {
    for (int j = i + 1; j < n; ++j) {
      RootIndex r;
      r.i = i;
      r.j = j;
      r.alpha = state.lambda()(i) - state.lambda()(j);
      r.beta = state.lambda()(i) + state.lambda()(j);
      r.active = state.cluster_of(i) != state.cluster_of(j);
      out.push_back(r);
    }
  }
  return out;
}

std::vector<RootIndex> active_roots(const LambdaState& state) {
  std::vector<RootIndex> out;
  for (const auto& r : all_roots(state)) {
    if (r.active) out.push_back(r);
  }
  return out;
}

SplittingReport splitting(const LambdaState& state) {
  SplittingReport report;
  const int n = state.n();
  for (int k = 0; k < n; ++k) {
    RealVector d = RealVector::Zero(n);
    d(k) = 1.0;
    report.stabilizer_basis.push_back(HermitianMatrix::FromDiagonal(d));
  }
  for (const auto& r : all_roots(state)) {
    OffDiagBasisElement s{r.i, r.j, OffDiagKind::Symmetric};
    OffDiagBasisElement a{r.i, r.j, OffDiagKind::Antisymmetric};
    if (r.active) {
      report.normal_basis.emplace_back(s, a);
    } else {
      report.stabilizer_basis.push_back(s.matrix(n));
      report.stabilizer_basis.push_back(a.matrix(n));
    }
  }
  report.orbit_dim = state.orbit_dim();
  return report;
}

OrbitPoint OrbitPoint::reference(const LambdaState& state) {
  return OrbitPoint(state.rho0(), ComplexMatrix::Identity(state.n(), state.n()), state);
}

OrbitPoint OrbitPoint::from_diagonalizer(const LambdaState& state, const ComplexMatrix& g,
                                         double tol) {
  require(g.rows() == state.n() && g.cols() == state.n(),
          "OrbitPoint: diagonalizer dimension mismatch");
  require(is_unitary(g, std::max(tol, 1e-10)), "OrbitPoint: diagonalizer is not unitary");
  return OrbitPoint(conjugated(g, state.rho0()), g, state);
}

OrbitPoint exp_chart(const LambdaState& state, const ChartVector& coords) {
  const auto roots = active_roots(state);
  require(coords.coords.size() == roots.size(),
          "exp_chart: coordinate count must match the number of active roots");
  const int n = state.n();
  ComplexMatrix x = ComplexMatrix::Zero(n, n);
  for (std::size_t k = 0; k < roots.size(); ++k) {
    const auto& r = roots[k];
    const double cx = coords.coords[k][0];
    const double cy = coords.coords[k][1];
    require(std::isfinite(cx) && std::isfinite(cy), "exp_chart: non-finite coordinate");
    x += cx * OffDiagBasisElement{r.i, r.j, OffDiagKind::Symmetric}.matrix(n).mat();
    x += cy * OffDiagBasisElement{r.i, r.j, OffDiagKind::Antisymmetric}.matrix(n).mat();
  }
  const ComplexMatrix g = unitary_exp(HermitianMatrix(x));
  return OrbitPoint::from_diagonalizer(state, g);
}

HermitianMatrix tangent_vector(const OrbitPoint& point, const HermitianMatrix& x) {
  return bracket(x, point.rho());
}

HermitianMatrix project_to_normal(const HermitianMatrix& x, const LambdaState& state) {
  const int n = state.n();
  require(x.dim() == n, "project_to_normal: dimension mismatch");
  ComplexMatrix out = ComplexMatrix::Zero(n, n);
  for (const auto& r : active_roots(state)) {
    const HermitianMatrix s = OffDiagBasisElement{r.i, r.j, OffDiagKind::Symmetric}.matrix(n);
    const HermitianMatrix a = OffDiagBasisElement{r.i, r.j, OffDiagKind::Antisymmetric}.matrix(n);
    out += 0.5 * hs_inner(s, x) * s.mat();
    out += 0.5 * hs_inner(a, x) * a.mat();
  }
  return HermitianMatrix(out);
}

namespace {

struct PlaneCoords {
  std::vector<double> p;  // s_I components of the pulled-back matrix
  std::vector<double> q;  // a_I components
  double off_plane_residual = 0.0;
};

PlaneCoords plane_coords(const LambdaState& state, const std::vector<RootIndex>& roots,
                         const HermitianMatrix& w) {
  const int n = state.n();
  PlaneCoords out;
  out.p.resize(roots.size());
  out.q.resize(roots.size());
  ComplexMatrix recon = ComplexMatrix::Zero(n, n);
  for (std::size_t k = 0; k < roots.size(); ++k) {
    const auto& r = roots[k];
    const HermitianMatrix s = OffDiagBasisElement{r.i, r.j, OffDiagKind::Symmetric}.matrix(n);
    const HermitianMatrix a = OffDiagBasisElement{r.i, r.j, OffDiagKind::Antisymmetric}.matrix(n);
    out.p[k] = 0.5 * hs_inner(s, w);
    out.q[k] = 0.5 * hs_inner(a, w);
    recon += out.p[k] * s.mat() + out.q[k] * a.mat();
  }
  out.off_plane_residual = (w.mat() - recon).norm();
  return out;
}

}  // namespace

HermitianMatrix phi_map(const OrbitPoint& point, const HermitianMatrix& v, double tol) {
  const LambdaState& state = point.state();
  const int n = state.n();
  require(v.dim() == n, "phi_map: dimension mismatch");
  const HermitianMatrix w = conjugated(point.diagonalizer().adjoint(), v);
  const auto roots = active_roots(state);
  const PlaneCoords pc = plane_coords(state, roots, w);
  if (pc.off_plane_residual > tol * std::max(1.0, v.norm())) {
    std::ostringstream os;
    os << "phi_map: input is not tangent at the point (stabilizer component "
       << pc.off_plane_residual << ")";
    throw ValidationError(os.str());
  }
  ComplexMatrix x0 = ComplexMatrix::Zero(n, n);
  for (std::size_t k = 0; k < roots.size(); ++k) {
    const auto& r = roots[k];
    const HermitianMatrix s = OffDiagBasisElement{r.i, r.j, OffDiagKind::Symmetric}.matrix(n);
    const HermitianMatrix a = OffDiagBasisElement{r.i, r.j, OffDiagKind::Antisymmetric}.matrix(n);
    // bracket(s_I, rho0) = -alpha a_I and bracket(a_I, rho0) = +alpha s_I, so the
    // preimage of p s_I + q a_I under ad_(.)rho0 is (-q/alpha) s_I + (p/alpha) a_I.
    x0 += (-pc.q[k] / r.alpha) * s.mat() + (pc.p[k] / r.alpha) * a.mat();
  }
  return conjugated(point.diagonalizer(), HermitianMatrix(x0));
}

ChartFrame chart_frame(const OrbitPoint& point) {
  ChartFrame frame;
  frame.state = point.state();
  frame.roots = active_roots(point.state());
  const int n = point.state().n();
  for (const auto& r : frame.roots) {
    OffDiagBasisElement s{r.i, r.j, OffDiagKind::Symmetric};
    OffDiagBasisElement a{r.i, r.j, OffDiagKind::Antisymmetric};
    for (const auto& b : {s, a}) {
      HermitianMatrix transported = conjugated(point.diagonalizer(), b.matrix(n));
      frame.tangent_frame.push_back(bracket(transported, point.rho()));
      frame.lie_frame.push_back(std::move(transported));
      frame.labels.push_back(b.label());
    }
  }
  return frame;
}

RealVector chart_coords_of_tangent(const OrbitPoint& point, const HermitianMatrix& v, double tol) {
  const LambdaState& state = point.state();
  require(v.dim() == state.n(), "chart_coords_of_tangent: dimension mismatch");
  const HermitianMatrix w = conjugated(point.diagonalizer().adjoint(), v);
  const auto roots = active_roots(state);
  const PlaneCoords pc = plane_coords(state, roots, w);
  if (pc.off_plane_residual > tol * std::max(1.0, v.norm())) {
    throw ValidationError("chart_coords_of_tangent: input is not tangent at the point");
  }
  RealVector coords(2 * static_cast<int>(roots.size()));
  for (std::size_t k = 0; k < roots.size(); ++k) {
    // Tangent frame vectors are E^x_I = -alpha a_I, E^y_I = +alpha s_I after pullback.
    coords(2 * k) = -pc.q[k] / roots[k].alpha;
    coords(2 * k + 1) = pc.p[k] / roots[k].alpha;
  }
  return coords;
}

HermitianMatrix tangent_from_chart_coords(const OrbitPoint& point, const RealVector& coords) {
  const auto roots = active_roots(point.state());
  require(coords.size() == 2 * static_cast<int>(roots.size()),
          "tangent_from_chart_coords: coordinate count mismatch");
  const int n = point.state().n();
  ComplexMatrix w = ComplexMatrix::Zero(n, n);
  for (std::size_t k = 0; k < roots.size(); ++k) {
    const auto& r = roots[k];
    const HermitianMatrix s = OffDiagBasisElement{r.i, r.j, OffDiagKind::Symmetric}.matrix(n);
    const HermitianMatrix a = OffDiagBasisElement{r.i, r.j, OffDiagKind::Antisymmetric}.matrix(n);
    w += coords(2 * k) * (-r.alpha) * a.mat() + coords(2 * k + 1) * r.alpha * s.mat();
  }
  return conjugated(point.diagonalizer(), HermitianMatrix(w));
}

}  // namespace orbitfisher
