#include "orbitfisher/fibration.hpp"

#include <algorithm>
#include <cmath>
#include <set>
#include <sstream>

#include "orbitfisher/fisher.hpp"
#include "orbitfisher/kks.hpp"
#include "orbitfisher/linear_fisher.hpp"
#include "orbitfisher/sampling.hpp"

namespace orbitfisher::fibration {

namespace {

void require(bool cond, const std::string& what) {
  if (!cond) throw ValidationError(what);
}

std::set<int> cluster_boundaries(const LambdaState& state) {
  std::set<int> out;
  for (const auto& c : state.clusters()) {
    if (c.end < state.n()) out.insert(c.end);
  }
  return out;
}

}  // namespace

OrbitFibration fibration_new(const LambdaState& total, const LambdaState& base, double tol) {
  require(total.n() == base.n(), "fibration_new: dimension mismatch");
  (void)tol;

  // Stabilizer inclusion stab(total) <= stab(base): the index partition of the
  // total spectrum must refine that of the base spectrum.
  const std::set<int> total_bounds = cluster_boundaries(total);
  const std::set<int> base_bounds = cluster_boundaries(base);
  for (int b : base_bounds) {
    if (!total_bounds.count(b)) {
      std::ostringstream os;
      os << "fibration_new: partitions incomparable (base cluster boundary at " << b
         << " is not a boundary of the total partition)";
      throw ValidationError(os.str());
    }
  }

  OrbitFibration fib;
  fib.total = total;
  fib.base = base;
  for (const auto& r : active_roots(total)) {
    if (base.cluster_of(r.i) == base.cluster_of(r.j)) {
      fib.vertical_roots.push_back(r);
    } else {
      fib.horizontal_roots.push_back(r);
    }
  }
  fib.total_dim = total.orbit_dim();
  fib.base_dim = base.orbit_dim();
  int stab_base = 0, stab_total = 0;
  for (int m : base.multiplicities()) stab_base += m * m;
  for (int m : total.multiplicities()) stab_total += m * m;
  fib.fibre_dim = stab_base - stab_total;
  return fib;
}

OrbitPoint projection(const OrbitFibration& fib, const OrbitPoint& point_total) {
  require(point_total.state().n() == fib.total.n(), "projection: dimension mismatch");
  require((point_total.state().lambda() - fib.total.lambda()).norm() <= 1e-12,
          "projection: point is not on the total orbit");
  return OrbitPoint::from_diagonalizer(fib.base, point_total.diagonalizer());
}

namespace {

// Combined reference frame: vertical planes then horizontal planes, (s, a) per root.
struct SplitFrame {
  std::vector<RootIndex> roots;            // vertical then horizontal
  int n_vertical = 0;                      // number of vertical roots
  std::vector<HermitianMatrix> lie;        // 2 per root
  std::vector<HermitianMatrix> tangent;    // bracket(lie, eta0)
};

SplitFrame split_frame(const OrbitFibration& fib) {
  SplitFrame frame;
  frame.roots = fib.vertical_roots;
  frame.n_vertical = static_cast<int>(fib.vertical_roots.size());
  frame.roots.insert(frame.roots.end(), fib.horizontal_roots.begin(), fib.horizontal_roots.end());
  const int n = fib.total.n();
  const HermitianMatrix rho = fib.total.rho0();
  for (const auto& r : frame.roots) {
    for (const auto kind : {OffDiagKind::Symmetric, OffDiagKind::Antisymmetric}) {
      HermitianMatrix b = OffDiagBasisElement{r.i, r.j, kind}.matrix(n);
      frame.tangent.push_back(bracket(b, rho));
      frame.lie.push_back(std::move(b));
    }
  }
  return frame;
}

// Coordinates of a normal-space matrix in the frame's lie basis (hs-coordinates).
RealVector lie_coords(const SplitFrame& frame, const HermitianMatrix& w) {
  RealVector out(static_cast<int>(frame.lie.size()));
  for (int k = 0; k < out.size(); ++k) out(k) = 0.5 * hs_inner(frame.lie[k], w);
  return out;
}

double cross_block_magnitude(const RealMatrix& m, int n_vertical) {
  const int split = 2 * n_vertical;
  double worst = 0.0;
  for (int r = 0; r < m.rows(); ++r) {
    for (int c = 0; c < m.cols(); ++c) {
      const bool r_vertical = r < split;
      const bool c_vertical = c < split;
      if (r_vertical != c_vertical) worst = std::max(worst, std::abs(m(r, c)));
    }
  }
  return worst;
}

}  // namespace

CheckReport check_symplectic_orthogonality(const OrbitFibration& fib, int samples,
                                           std::uint64_t seed, double tol) {
  sampling::Rng rng(seed);
  double worst = 0.0;
  long count = 0;
  for (int s = 0; s < samples; ++s) {
    const OrbitPoint point = s == 0 ? OrbitPoint::reference(fib.total)
                                    : OrbitPoint::from_diagonalizer(
                                          fib.total, sampling::random_unitary(rng, fib.total.n()));
    const int n = fib.total.n();
    for (const auto& vr : fib.vertical_roots) {
      for (const auto kind_v : {OffDiagKind::Symmetric, OffDiagKind::Antisymmetric}) {
        const HermitianMatrix v =
            conjugated(point.diagonalizer(), OffDiagBasisElement{vr.i, vr.j, kind_v}.matrix(n));
        for (const auto& hr : fib.horizontal_roots) {
          for (const auto kind_h : {OffDiagKind::Symmetric, OffDiagKind::Antisymmetric}) {
            const HermitianMatrix h = conjugated(
                point.diagonalizer(), OffDiagBasisElement{hr.i, hr.j, kind_h}.matrix(n));
            worst = std::max(worst, std::abs(kks::kks_eval(point, v, h)));
            ++count;
          }
        }
      }
    }
  }
  return make_report("fibration_symplectic_orthogonality", worst, count, tol);
}

InvolutivityReport check_involutivity(const OrbitFibration& fib, double tol) {
  const int n = fib.total.n();
  std::vector<HermitianMatrix> vertical;
  for (const auto& r : fib.vertical_roots) {
    vertical.push_back(OffDiagBasisElement{r.i, r.j, OffDiagKind::Symmetric}.matrix(n));
    vertical.push_back(OffDiagBasisElement{r.i, r.j, OffDiagKind::Antisymmetric}.matrix(n));
  }
  std::vector<HermitianMatrix> horizontal;
  for (const auto& r : fib.horizontal_roots) {
    horizontal.push_back(OffDiagBasisElement{r.i, r.j, OffDiagKind::Symmetric}.matrix(n));
    horizontal.push_back(OffDiagBasisElement{r.i, r.j, OffDiagKind::Antisymmetric}.matrix(n));
  }

  double worst_vv = 0.0;
  long count_vv = 0;
  for (std::size_t a = 0; a < vertical.size(); ++a) {
    for (std::size_t b = a + 1; b < vertical.size(); ++b) {
      // [vertical, vertical] stays in the stabilizer of the base state.
      const HermitianMatrix br = bracket(vertical[a], vertical[b]);
      worst_vv = std::max(worst_vv, project_to_normal(br, fib.base).norm());
      ++count_vv;
    }
  }

  double worst_hv = 0.0;
  long count_hv = 0;
  for (const auto& h : horizontal) {
    for (const auto& v : vertical) {
      // [horizontal, vertical] stays in the normal space of the base splitting.
      const HermitianMatrix br = bracket(h, v);
      worst_hv = std::max(worst_hv, (br - project_to_normal(br, fib.base)).norm());
      ++count_hv;
    }
  }

  InvolutivityReport out;
  out.vertical_vertical = make_report("fibration_vertical_bracket_closure", worst_vv, count_vv, tol);
  out.horizontal_vertical =
      make_report("fibration_mixed_bracket_closure", worst_hv, count_hv, tol);
  out.pass = out.vertical_vertical.pass && out.horizontal_vertical.pass;
  return out;
}

BlockDiagonalityReport check_tensor_block_diagonality(const OrbitFibration& fib, double tol) {
  const SplitFrame frame = split_frame(fib);
  const OrbitPoint point = OrbitPoint::reference(fib.total);
  const fisher::SldSolver solver(fib.total);
  const int m = static_cast<int>(frame.lie.size());

  BlockDiagonalityReport out;

  RealMatrix d_op(m, m), l_op(m, m), phi_op(m, m);
  for (int c = 0; c < m; ++c) {
    d_op.col(c) = lie_coords(frame, bracket(frame.lie[c], point.rho()));
    l_op.col(c) = lie_coords(frame, solver.l_map(point, frame.lie[c]));
    phi_op.col(c) = lie_coords(frame, phi_map(point, frame.tangent[c]));
  }

  RealMatrix omega(m, m);
  for (int r = 0; r < m; ++r) {
    for (int c = 0; c < m; ++c) {
      omega(r, c) = kks::kks_eval(point, frame.lie[r], frame.lie[c]);
    }
  }

  std::vector<HermitianMatrix> slds;
  for (const auto& t : frame.tangent) slds.push_back(solver.sld(point, t));
  RealMatrix g_sym(m, m), w_antisym(m, m);
  {
    RealMatrix re(m, m), im(m, m);
    for (int r = 0; r < m; ++r) {
      for (int c = 0; c < m; ++c) {
        const Complex t = (point.rho().mat() * slds[r].mat() * slds[c].mat()).trace();
        re(r, c) = t.real();
        im(r, c) = t.imag();
      }
    }
    g_sym = 0.5 * (re + re.transpose());
    w_antisym = 0.5 * (im - im.transpose());
  }
  const RealMatrix f = g_sym + w_antisym;

  RealMatrix j_cs(m, m);
  for (int c = 0; c < m; ++c) {
    const HermitianMatrix jv = kks::apply_complex_structure(point, frame.tangent[c]);
    const RealVector w = lie_coords(frame, jv);
    // tangent_k = bracket(lie_k, rho): tangent of (s_I, a_I) is (-alpha a_I, +alpha s_I),
    // so tangent-frame coordinates follow from lie coordinates by a per-plane rotation.
    RealVector coords(m);
    for (int k = 0; 2 * k < m; ++k) {
      const double alpha = frame.roots[k].alpha;
      coords(2 * k) = -w(2 * k + 1) / alpha;
      coords(2 * k + 1) = w(2 * k) / alpha;
    }
    j_cs.col(c) = coords;
  }

  const Eigen::FullPivLU<RealMatrix> lu(w_antisym);
  if (!lu.isInvertible()) {
    throw SingularStructureError("check_tensor_block_diagonality: W singular");
  }
  const RealMatrix j_fisher = lu.solve(g_sym);

  out.checks.push_back(make_report("fibration_block_d", cross_block_magnitude(d_op, frame.n_vertical), m * m, tol));
  out.checks.push_back(make_report("fibration_block_l", cross_block_magnitude(l_op, frame.n_vertical), m * m, tol));
  out.checks.push_back(make_report("fibration_block_phi", cross_block_magnitude(phi_op, frame.n_vertical), m * m, tol));
  out.checks.push_back(make_report("fibration_block_kks", cross_block_magnitude(omega, frame.n_vertical), m * m, tol));
  out.checks.push_back(make_report("fibration_block_fisher", cross_block_magnitude(f, frame.n_vertical), m * m, tol));
  out.checks.push_back(make_report("fibration_block_complex_structure", cross_block_magnitude(j_cs, frame.n_vertical), m * m, tol));
  out.checks.push_back(make_report("fibration_block_fisher_structure", cross_block_magnitude(j_fisher, frame.n_vertical), m * m, tol));

  // Vertical block of the Fisher structure: a linear Fisher structure whose roots
  // are beta/alpha over the vertical roots.
  const int vdim = 2 * frame.n_vertical;
  if (vdim > 0) {
    linfisher::LinearFisherStructure vertical_block;
    vertical_block.form = linfisher::Form::Real;
    vertical_block.real_rep = j_fisher.topLeftCorner(vdim, vdim);
    const auto membership = linfisher::is_fisher_structure(vertical_block);
    out.vertical_fisher_structure_ok = membership.is_member;
    if (membership.is_member) {
      std::vector<double> expected;
      for (const auto& r : fib.vertical_roots) expected.push_back(r.beta / r.alpha);
      std::sort(expected.begin(), expected.end(), std::greater<double>());
      double worst = 0.0;
      for (std::size_t k = 0; k < expected.size(); ++k) {
        worst = std::max(worst, std::abs(membership.roots[k] - expected[k]));
      }
      out.vertical_root_residual = worst;
      out.checks.push_back(make_report("fibration_vertical_fisher_roots", worst,
                                       static_cast<long>(expected.size()), 1e-9));
    } else {
      CheckReport fail;
      fail.check = "fibration_vertical_fisher_roots";
      fail.max_residual = 1.0;
      fail.samples = vdim;
      fail.pass = false;
      out.checks.push_back(fail);
    }
  } else {
    out.vertical_fisher_structure_ok = true;
  }

  // Informational: distance between the horizontal Fisher block and the base-orbit
  // chart tensor (same index pairs, same order). Not a pass criterion.
  const int hdim = 2 * static_cast<int>(fib.horizontal_roots.size());
  if (hdim > 0) {
    const fisher::FisherTensor base_tensor = fisher::fisher_tensor_chart(fib.base);
    const RealMatrix horizontal_block = f.bottomRightCorner(hdim, hdim);
    out.horizontal_vs_base_gap = (horizontal_block - base_tensor.f).cwiseAbs().maxCoeff();
  }

  out.pass = all_pass(out.checks) && out.vertical_fisher_structure_ok;
  return out;
}

FibreOrbitDescription fibre_orbit(const OrbitFibration& fib) {
  FibreOrbitDescription out;
  int stab_diff_check = 0;
  for (const auto& cluster : fib.base.clusters()) {
    FibreFactor factor;
    factor.cluster_begin = cluster.begin;
    factor.cluster_end = cluster.end;
    const int m = cluster.size();
    int sum_sq = 0;
    // Multiplicities of the total spectrum inside this base cluster.
    int k = cluster.begin;
    while (k < cluster.end) {
      int e = k + 1;
      while (e < cluster.end && fib.total.cluster_of(e) == fib.total.cluster_of(k)) ++e;
      sum_sq += (e - k) * (e - k);
      k = e;
    }
    for (int idx = cluster.begin; idx < cluster.end; ++idx) {
      factor.sub_spectrum.push_back(fib.total.lambda()(idx));
    }
    factor.dim = m * m - sum_sq;
    stab_diff_check += factor.dim;
    out.factors.push_back(std::move(factor));
  }
  out.fibre_dim = fib.fibre_dim;
  if (stab_diff_check != fib.fibre_dim) {
    throw ValidationError("fibre_orbit: fibre dimension bookkeeping mismatch");
  }
  return out;
}

}  // namespace orbitfisher::fibration
