#include "orbitfisher/linear_fisher.hpp"

#include <algorithm>
#include <cmath>
#include <sstream>

namespace orbitfisher::linfisher {

namespace {

void require(bool cond, const std::string& what) {
  if (!cond) throw ValidationError(what);
}

std::vector<double> descending_roots_from_eigenvalues(const Eigen::VectorXcd& eigs,
                                                      double cluster_tol) {
  // Roots are |imaginary parts|; each conjugate pair contributes one root.
  std::vector<double> mags;
  for (int k = 0; k < eigs.size(); ++k) {
    if (eigs(k).imag() > 0.0) mags.push_back(eigs(k).imag());
  }
  std::sort(mags.begin(), mags.end(), std::greater<double>());
  // Snap clusters to their mean so repeated roots compare cleanly.
  std::size_t begin = 0;
  while (begin < mags.size()) {
    std::size_t end = begin + 1;
    while (end < mags.size() &&
           mags[end - 1] - mags[end] <= cluster_tol * std::max(1.0, mags[end - 1])) {
      ++end;
    }
    double mean = 0.0;
    for (std::size_t k = begin; k < end; ++k) mean += mags[k];
    mean /= static_cast<double>(end - begin);
    for (std::size_t k = begin; k < end; ++k) mags[k] = mean;
    begin = end;
  }
  return mags;
}

MembershipResult check_real(const RealMatrix& j, double tol) {
  MembershipResult out;
  require(j.rows() == j.cols(), "is_fisher_structure: matrix must be square");
  require(j.allFinite(), "is_fisher_structure: entries must be finite");
  if (j.rows() % 2 != 0) {
    out.failure = "odd dimension";
    return out;
  }
  const double scale = std::max(1.0, j.norm());
  out.skew_ok = (j + j.transpose()).norm() <= tol * scale;
  if (!out.skew_ok) {
    out.failure = "not skew-adjoint";
    return out;
  }
  const Eigen::JacobiSVD<RealMatrix> svd(j);
  const double smin = j.rows() == 0 ? 0.0 : svd.singularValues()(j.rows() - 1);
  out.invertible_ok = smin > tol * scale;
  if (!out.invertible_ok) {
    out.failure = "singular";
    return out;
  }
  out.rows_ok = true;  // no alignment constraint in the real form
  out.is_member = true;
  const Eigen::EigenSolver<RealMatrix> es(j);
  out.roots = descending_roots_from_eigenvalues(es.eigenvalues(), 1e-7);
  return out;
}

MembershipResult check_complex(const ComplexMatrix& m, double tol) {
  MembershipResult out;
  require(m.rows() == m.cols(), "is_fisher_structure: matrix must be square");
  require(m.allFinite(), "is_fisher_structure: entries must be finite");
  const int n = static_cast<int>(m.rows());
  const double scale = std::max(1.0, m.norm());
  out.skew_ok = (m + m.adjoint()).norm() <= tol * scale;
  if (!out.skew_ok) {
    out.failure = "not skew-adjoint";
    return out;
  }
  const ComplexMatrix gram = m * m.adjoint();  // row Gram matrix
  double offdiag = 0.0;
  double min_diag = gram.rows() == 0 ? 0.0 : gram(0, 0).real();
  for (int r = 0; r < n; ++r) {
    min_diag = std::min(min_diag, gram(r, r).real());
    for (int c = 0; c < n; ++c) {
      if (r != c) offdiag = std::max(offdiag, std::abs(gram(r, c)));
    }
  }
  out.rows_ok = offdiag <= tol * scale * scale;
  if (!out.rows_ok) {
    out.failure = "rows not mutually orthogonal";
    return out;
  }
  out.invertible_ok = min_diag > tol * scale * scale;
  if (!out.invertible_ok) {
    out.failure = "zero row";
    return out;
  }
  out.is_member = true;
  for (int r = 0; r < n; ++r) out.roots.push_back(std::sqrt(gram(r, r).real()));
  std::sort(out.roots.begin(), out.roots.end(), std::greater<double>());
  return out;
}

}  // namespace

MembershipResult is_fisher_structure(const LinearFisherStructure& j, double tol) {
  return j.form == Form::Real ? check_real(j.real_rep, tol) : check_complex(j.complex_rep, tol);
}

RealMatrix realification(const ComplexMatrix& m) {
  const int n = static_cast<int>(m.rows());
  RealMatrix out(2 * n, 2 * n);
  out.topLeftCorner(n, n) = m.real();
  out.topRightCorner(n, n) = -m.imag();
  out.bottomLeftCorner(n, n) = m.imag();
  out.bottomRightCorner(n, n) = m.real();
  return out;
}

NormalFormResult normal_form(const LinearFisherStructure& j, double tol, double cluster_tol) {
  const RealMatrix jr = j.form == Form::Real ? j.real_rep : realification(j.complex_rep);
  MembershipResult membership =
      check_real(jr, tol);
  if (!membership.is_member) {
    throw ValidationError("normal_form: input is not a Fisher structure (" + membership.failure +
                          ")");
  }
  const int dim = static_cast<int>(jr.rows());

  // -J^2 is symmetric positive definite; its eigenspaces are the root planes.
  const RealMatrix s = -(jr * jr);
  const Eigen::SelfAdjointEigenSolver<RealMatrix> es(0.5 * (s + s.transpose()));

  // Cluster d^2 values (ascending from the solver); collect descending.
  struct Cluster {
    double d = 0.0;
    std::vector<int> cols;
  };
  std::vector<Cluster> clusters;
  int begin = 0;
  while (begin < dim) {
    int end = begin + 1;
    while (end < dim && std::abs(es.eigenvalues()(end) - es.eigenvalues()(end - 1)) <=
                            cluster_tol * std::max(1.0, std::abs(es.eigenvalues()(end)))) {
      ++end;
    }
    Cluster c;
    double mean = 0.0;
    for (int k = begin; k < end; ++k) {
      mean += es.eigenvalues()(k);
      c.cols.push_back(k);
    }
    c.d = std::sqrt(mean / static_cast<double>(end - begin));
    clusters.push_back(std::move(c));
    begin = end;
  }
  std::reverse(clusters.begin(), clusters.end());  // descending roots

  NormalFormResult out;
  out.change_of_basis = RealMatrix::Zero(dim, dim);
  out.block_matrix = RealMatrix::Zero(dim, dim);
  int col = 0;
  for (const auto& cluster : clusters) {
    const int plane_dim = static_cast<int>(cluster.cols.size());
    if (plane_dim % 2 != 0) {
      throw ValidationError("normal_form: odd-dimensional root plane");
    }
    const int m = plane_dim / 2;
    out.roots.emplace_back(cluster.d, m);

    RealMatrix basis(dim, plane_dim);
    for (int k = 0; k < plane_dim; ++k) basis.col(k) = es.eigenvectors().col(cluster.cols[k]);

    // Adapted pairs (u_a, v_a = J u_a / d) by Gram-Schmidt inside the plane.
    RealMatrix pairs(dim, plane_dim);
    int built = 0;
    for (int cand = 0; cand < plane_dim && built < m; ++cand) {
      RealVector u = basis.col(cand);
      for (int p = 0; p < 2 * built; ++p) u -= pairs.col(p).dot(u) * pairs.col(p);
      const double nrm = u.norm();
      if (nrm < 1e-8) continue;
      u /= nrm;
      const RealVector v = (jr * u) / cluster.d;
      pairs.col(2 * built) = u;
      pairs.col(2 * built + 1) = v;
      ++built;
    }
    if (built != m) throw ConvergenceError("normal_form: failed to build adapted plane basis");

    for (int a = 0; a < m; ++a) {
      out.change_of_basis.col(col + a) = pairs.col(2 * a);
      out.change_of_basis.col(col + m + a) = pairs.col(2 * a + 1);
      out.block_matrix(col + m + a, col + a) = cluster.d;
      out.block_matrix(col + a, col + m + a) = -cluster.d;
    }
    col += plane_dim;
  }

  out.residual =
      (out.change_of_basis * out.block_matrix * out.change_of_basis.transpose() - jr).norm();
  return out;
}

ComplexMatrix scaling_action(const std::vector<double>& q, const ComplexMatrix& m, double tol) {
  require(m.rows() == m.cols(), "scaling_action: matrix must be square");
  const int n = static_cast<int>(m.rows());
  require(static_cast<int>(q.size()) == n, "scaling_action: q size mismatch");
  for (double x : q) {
    require(std::isfinite(x) && x > 0.0, "scaling_action: q entries must be strictly positive");
  }
  {
    LinearFisherStructure in;
    in.form = Form::Complex;
    in.complex_rep = m;
    const MembershipResult check = is_fisher_structure(in, tol);
    if (!check.is_member) {
      throw ValidationError("scaling_action: input is not a Fisher structure (" + check.failure +
                            ")");
    }
  }
  ComplexMatrix out = m;
  for (int r = 0; r < n; ++r) out.row(r) *= q[r];
  LinearFisherStructure scaled;
  scaled.form = Form::Complex;
  scaled.complex_rep = out;
  const MembershipResult check = is_fisher_structure(scaled, tol);
  if (!check.is_member) {
    throw ValidationError(
        "scaling_action: q is incompatible with the structure's plane decomposition (" +
        check.failure + ")");
  }
  return out;
}

UnitaryIntersectionResult unitary_intersection(const ComplexMatrix& m, double tol) {
  LinearFisherStructure in;
  in.form = Form::Complex;
  in.complex_rep = m;
  const MembershipResult check = is_fisher_structure(in, tol);
  if (!check.is_member) {
    throw ValidationError("unitary_intersection: input is not a Fisher structure (" +
                          check.failure + ")");
  }
  const int n = static_cast<int>(m.rows());
  const ComplexMatrix gram = m * m.adjoint();
  UnitaryIntersectionResult out;
  out.q_scaling = ComplexMatrix::Zero(n, n);
  for (int r = 0; r < n; ++r) out.q_scaling(r, r) = 1.0 / std::sqrt(gram(r, r).real());
  out.unitary = out.q_scaling * m;
  out.residual = (out.unitary * out.unitary.adjoint() - ComplexMatrix::Identity(n, n)).norm();
  return out;
}

ManifoldCheckReport manifold_fisher_check(const std::vector<RealMatrix>& samples, double tol) {
  ManifoldCheckReport out;
  std::vector<double> reference_roots;
  double worst_membership = 0.0;
  for (std::size_t k = 0; k < samples.size(); ++k) {
    LinearFisherStructure j;
    j.form = Form::Real;
    j.real_rep = samples[k];
    const MembershipResult res = is_fisher_structure(j, tol);
    if (!res.is_member) {
      out.failing_samples.push_back(static_cast<int>(k));
      worst_membership = 1.0;
      continue;
    }
    if (reference_roots.empty()) {
      reference_roots = res.roots;
    } else if (res.roots.size() != reference_roots.size()) {
      out.root_drift = std::max(out.root_drift, 1.0);
    } else {
      for (std::size_t r = 0; r < res.roots.size(); ++r) {
        out.root_drift = std::max(out.root_drift, std::abs(res.roots[r] - reference_roots[r]));
      }
    }
  }
  CheckReport membership;
  membership.check = "linfisher_membership";
  membership.max_residual = worst_membership;
  membership.samples = static_cast<long>(samples.size());
  membership.pass = out.failing_samples.empty();
  out.checks.push_back(membership);
  out.checks.push_back(
      make_report("linfisher_root_constancy", out.root_drift, static_cast<long>(samples.size()), tol));
  out.pass = all_pass(out.checks);
  return out;
}

}  // namespace orbitfisher::linfisher
