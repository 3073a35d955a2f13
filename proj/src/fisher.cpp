#include "orbitfisher/fisher.hpp"

#include <cmath>
#include <sstream>

namespace orbitfisher::fisher {

namespace {

void require(bool cond, const std::string& what) {
  if (!cond) throw ValidationError(what);
}

}  // namespace

SldSolver::SldSolver(const LambdaState& state) : state_(state), roots_(active_roots(state)) {
  const int n = state.n();
  for (const auto& r : roots_) {
    s_basis_.push_back(OffDiagBasisElement{r.i, r.j, OffDiagKind::Symmetric}.matrix(n));
    a_basis_.push_back(OffDiagBasisElement{r.i, r.j, OffDiagKind::Antisymmetric}.matrix(n));
  }
}

HermitianMatrix SldSolver::d_map(const OrbitPoint& point, const HermitianMatrix& x) const {
  return bracket(x, point.rho());
}

HermitianMatrix SldSolver::l_map(const OrbitPoint& point, const HermitianMatrix& a,
                                 double tol) const {
  const int n = state_.n();
  require(a.dim() == n, "l_map: dimension mismatch");
  const HermitianMatrix w = conjugated(point.diagonalizer().adjoint(), a);
  ComplexMatrix x0 = ComplexMatrix::Zero(n, n);
  ComplexMatrix recon = ComplexMatrix::Zero(n, n);
  for (std::size_t k = 0; k < roots_.size(); ++k) {
    const auto& r = roots_[k];
    if (r.beta <= Tolerances::construction) {
      throw ValidationError("l_map: vanishing anticommutator eigenvalue on an active plane");
    }
    const double p = 0.5 * hs_inner(s_basis_[k], w);
    const double q = 0.5 * hs_inner(a_basis_[k], w);
    x0 += (2.0 / r.beta) * (p * s_basis_[k].mat() + q * a_basis_[k].mat());
    recon += p * s_basis_[k].mat() + q * a_basis_[k].mat();
  }
  const double off_plane = (w.mat() - recon).norm();
  if (off_plane > tol * std::max(1.0, a.norm())) {
    std::ostringstream os;
    os << "l_map: input is not in the transported normal space (residual " << off_plane << ")";
    throw ValidationError(os.str());
  }
  return conjugated(point.diagonalizer(), HermitianMatrix(x0));
}

HermitianMatrix SldSolver::sld(const OrbitPoint& point, const HermitianMatrix& v,
                               double tol) const {
  return l_map(point, v, tol);
}

HermitianMatrix d_map(const OrbitPoint& point, const HermitianMatrix& x) {
  return SldSolver(point.state()).d_map(point, x);
}

HermitianMatrix l_map(const OrbitPoint& point, const HermitianMatrix& a, double tol) {
  return SldSolver(point.state()).l_map(point, a, tol);
}

HermitianMatrix sld(const OrbitPoint& point, const HermitianMatrix& v, double tol) {
  return SldSolver(point.state()).sld(point, v, tol);
}

namespace {

struct TensorParts {
  RealMatrix g;
  RealMatrix w;
};

TensorParts assemble_parts(const OrbitPoint& point, const ChartFrame& frame,
                           const std::vector<HermitianMatrix>& slds) {
  const int m = frame.size();
  RealMatrix re(m, m), im(m, m);
  for (int k = 0; k < m; ++k) {
    for (int l = 0; l < m; ++l) {
      const Complex t = (point.rho().mat() * slds[k].mat() * slds[l].mat()).trace();
      re(k, l) = t.real();
      im(k, l) = t.imag();
    }
  }
  TensorParts parts;
  parts.g = 0.5 * (re + re.transpose());
  parts.w = 0.5 * (im - im.transpose());
  return parts;
}

}  // namespace

FisherTensor fisher_tensor(const OrbitPoint& point) {
  const ChartFrame frame = chart_frame(point);
  const SldSolver solver(point.state());
  std::vector<HermitianMatrix> slds;
  slds.reserve(frame.size());
  for (const auto& v : frame.tangent_frame) slds.push_back(solver.sld(point, v));
  const TensorParts parts = assemble_parts(point, frame, slds);

  FisherTensor out;
  out.basis = frame.labels;
  out.g_sym = parts.g;
  out.w_antisym = parts.w;
  out.f = parts.g + parts.w;
  return out;
}

FisherTensor fisher_tensor_chart(const LambdaState& state) {
  const auto roots = active_roots(state);
  const int m = 2 * static_cast<int>(roots.size());
  FisherTensor out;
  out.g_sym = RealMatrix::Zero(m, m);
  out.w_antisym = RealMatrix::Zero(m, m);
  for (std::size_t k = 0; k < roots.size(); ++k) {
    const auto& r = roots[k];
    const double scale = (2.0 * r.alpha / r.beta) * (2.0 * r.alpha / r.beta);
    out.g_sym(2 * k, 2 * k) = scale * r.beta;
    out.g_sym(2 * k + 1, 2 * k + 1) = scale * r.beta;
    out.w_antisym(2 * k, 2 * k + 1) = -scale * r.alpha;
    out.w_antisym(2 * k + 1, 2 * k) = scale * r.alpha;
    OffDiagBasisElement s{r.i, r.j, OffDiagKind::Symmetric};
    OffDiagBasisElement a{r.i, r.j, OffDiagKind::Antisymmetric};
    out.basis.push_back(s.label());
    out.basis.push_back(a.label());
  }
  out.f = out.g_sym + out.w_antisym;
  return out;
}

CheckReport fisher_form_pullback_check(const OrbitPoint& point, double tol) {
  const ChartFrame frame = chart_frame(point);
  const SldSolver solver(point.state());
  std::vector<HermitianMatrix> slds;
  for (const auto& v : frame.tangent_frame) slds.push_back(solver.sld(point, v));
  const TensorParts parts = assemble_parts(point, frame, slds);

  const int m = frame.size();
  double worst = 0.0;
  for (int k = 0; k < m; ++k) {
    for (int l = 0; l < m; ++l) {
      const double pullback = kks::kks_eval(point, slds[k], slds[l]);
      worst = std::max(worst, std::abs(parts.w(k, l) + 0.5 * pullback));
    }
  }
  CheckReport report = make_report("fisher_form_pullback", worst, m * m, tol);
  if (m > 0) {
    const Eigen::JacobiSVD<RealMatrix> svd(parts.w);
    if (svd.singularValues()(m - 1) <= 1e-12) report.pass = false;
  }
  return report;
}

FisherStructureTensor fisher_structure(const OrbitPoint& point) {
  const FisherTensor ft = fisher_tensor(point);
  const int m = static_cast<int>(ft.f.rows());
  FisherStructureTensor out;
  out.basis = ft.basis;
  out.j = RealMatrix::Zero(m, m);
  if (m == 0) return out;

  const Eigen::FullPivLU<RealMatrix> lu(ft.w_antisym);
  if (!lu.isInvertible() || lu.rcond() < 1e-14) {
    throw SingularStructureError("fisher_structure: W is singular on the active frame");
  }
  out.j = lu.solve(ft.g_sym);

  const auto roots = active_roots(point.state());
  RealMatrix delta_mat = RealMatrix::Zero(m, m);
  for (std::size_t k = 0; k < roots.size(); ++k) {
    const double ratio = roots[k].beta / roots[k].alpha;
    out.delta.push_back(ratio * ratio);
    delta_mat(2 * k, 2 * k) = ratio * ratio;
    delta_mat(2 * k + 1, 2 * k + 1) = ratio * ratio;
  }
  out.square_residual = (out.j * out.j + delta_mat).norm();
  return out;
}

EqMapProbe eval_eq_map(const LambdaState& state, int i, int j) {
  const int n = state.n();
  require(0 <= i && i < j && j < n, "eval_eq_map: need 0 <= i < j < n");
  EqMapProbe out;
  out.beta_direct = state.lambda()(i) + state.lambda()(j);
  double alpha_sum = 0.0;
  for (int k = 0; k < n; ++k) {
    for (int m = 0; m < n; ++m) {
      if (k == m) continue;
      if (k == i && m == j) continue;
      alpha_sum += state.lambda()(k) - state.lambda()(m);
    }
  }
  const double trace = state.lambda().sum();
  const int floor_term = (n + 2) / 2;
  out.beta_formula = (alpha_sum + 2.0 * (n - floor_term) * trace) / n;
  return out;
}

}  // namespace orbitfisher::fisher
