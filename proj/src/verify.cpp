#include "orbitfisher/verify.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <string>

#include <Eigen/Dense>

#include "orbitfisher/fibration.hpp"
#include "orbitfisher/fisher.hpp"
#include "orbitfisher/kks.hpp"
#include "orbitfisher/linear_fisher.hpp"
#include "orbitfisher/sampling.hpp"

namespace orbitfisher::verify {

namespace {

// Aggregates residuals by check name across states and points; pass thresholds
// are resolved once at finish().
class Collector {
 public:
  explicit Collector(double tol_override) : tol_override_(tol_override) {}

  void add(const std::string& name, double residual, long samples, double tol) {
    for (auto& e : entries_) {
      if (e.name == name) {
        e.worst = std::max(e.worst, residual);
        e.samples += samples;
        return;
      }
    }
    entries_.push_back({name, residual, samples, tol, false});
  }

  // Pushed as-is; pass rule not residual-vs-tol (e.g. lower bounds).
  void add_custom(const std::string& name, double value, long samples, bool pass) {
    for (auto& e : entries_) {
      if (e.name == name) {
        e.worst = std::max(e.worst, value);
        e.samples += samples;
        e.custom_pass = e.custom_pass && pass;
        return;
      }
    }
    entries_.push_back({name, value, samples, -1.0, pass});
  }

  SuiteResult finish() const {
    SuiteResult out;
    for (const auto& e : entries_) {
      CheckReport r;
      r.check = e.name;
      r.max_residual = e.worst;
      r.samples = e.samples;
      if (e.tol >= 0.0) {
        const double tol = tol_override_ > 0.0 ? tol_override_ : e.tol;
        r.pass = e.worst <= tol;
      } else {
        r.pass = e.custom_pass;
      }
      out.checks.push_back(std::move(r));
    }
    out.pass = all_pass(out.checks);
    return out;
  }

 private:
  struct Entry {
    std::string name;
    double worst;
    long samples;
    double tol;        // < 0: custom pass rule
    bool custom_pass;
  };
  std::vector<Entry> entries_;
  double tol_override_;
};

struct TestState {
  LambdaState state;
  bool pure = false;
};

// Pure, generic mixed, and (n >= 3) degenerate mixed spectra for each dimension.
std::vector<TestState> suite_states(const SuiteConfig& cfg, sampling::Rng& rng) {
  std::vector<TestState> out;
  for (int n = cfg.n_min; n <= cfg.n_max; ++n) {
    std::vector<double> pure(n, 0.0);
    pure[0] = 1.0;
    out.push_back({lambda_state_new(pure), true});
    out.push_back({sampling::random_lambda_state(rng, n), false});
    if (n >= 3) {
      const LambdaState g = sampling::random_lambda_state(rng, n);
      std::vector<double> merged(g.lambda().data(), g.lambda().data() + n);
      const double mean = 0.5 * (merged[0] + merged[1]);
      merged[0] = merged[1] = mean;
      out.push_back({lambda_state_new(merged), false});
    }
  }
  return out;
}

OrbitPoint sample_point(sampling::Rng& rng, const LambdaState& state, int index) {
  if (index == 0) return OrbitPoint::reference(state);
  if (index % 2 == 1) {
    return OrbitPoint::from_diagonalizer(state, sampling::random_unitary(rng, state.n()));
  }
  return exp_chart(state, sampling::random_chart(rng, state, 0.5));
}

RealMatrix kks_chart_closed_form(const LambdaState& state) {
  const auto roots = active_roots(state);
  const int m = 2 * static_cast<int>(roots.size());
  RealMatrix out = RealMatrix::Zero(m, m);
  for (std::size_t k = 0; k < roots.size(); ++k) {
    out(2 * k, 2 * k + 1) = 2.0 * roots[k].alpha;
    out(2 * k + 1, 2 * k) = -2.0 * roots[k].alpha;
  }
  return out;
}

}  // namespace

SuiteResult run_kks_suite(const SuiteConfig& cfg) {
  sampling::Rng rng(cfg.seed);
  Collector col(cfg.tol_override);
  double min_singular = std::numeric_limits<double>::infinity();
  long singular_samples = 0;

  for (const auto& ts : suite_states(cfg, rng)) {
    const LambdaState& state = ts.state;
    const int n = state.n();
    if (state.orbit_dim() == 0) continue;

    for (int s = 0; s < cfg.samples; ++s) {
      const OrbitPoint point = sample_point(rng, state, s);
      const HermitianMatrix x = sampling::random_hermitian(rng, n);
      const HermitianMatrix y = sampling::random_hermitian(rng, n);

      col.add("kks_antisymmetry",
              std::abs(kks::kks_eval(point, x, y) + kks::kks_eval(point, y, x)), 1, 1e-14);

      const HermitianMatrix stab =
          conjugated(point.diagonalizer(), sampling::random_stabilizer_element(rng, state));
      col.add("kks_well_defined",
              std::abs(kks::kks_eval(point, x + stab, y) - kks::kks_eval(point, x, y)), 1,
              1e-12);

      const ComplexMatrix h = sampling::random_unitary(rng, n);
      const OrbitPoint moved =
          OrbitPoint::from_diagonalizer(state, h * point.diagonalizer());
      col.add("kks_equivariance",
              std::abs(kks::kks_eval(moved, conjugated(h, x), conjugated(h, y)) -
                       kks::kks_eval(point, x, y)),
              1, 1e-10);
    }

    const CheckReport closed = kks::check_closedness(state, cfg.samples, rng.bits(), 1e-10);
    col.add(closed.check, closed.max_residual, closed.samples, 1e-10);

    for (int s = 0; s < 3; ++s) {
      const OrbitPoint point = sample_point(rng, state, s);
      const kks::KksForm form = kks::kks_matrix(point);
      col.add("kks_chart_blocks",
              (form.matrix - kks_chart_closed_form(state)).cwiseAbs().maxCoeff(),
              form.matrix.size(), 1e-12);

      Eigen::JacobiSVD<RealMatrix> svd(form.matrix);
      min_singular = std::min(min_singular, svd.singularValues().minCoeff());
      ++singular_samples;

      const kks::KahlerTriple triple = kks::kahler_triple(point);
      const RealMatrix& g = triple.g;
      const RealMatrix& j = triple.j.matrix;
      const RealMatrix& omega = triple.omega.matrix;
      const int m = static_cast<int>(g.rows());
      double worst = (g - g.transpose()).cwiseAbs().maxCoeff();
      worst = std::max(worst, (j * j + RealMatrix::Identity(m, m)).cwiseAbs().maxCoeff());
      worst = std::max(worst, (j.transpose() * omega * j - omega).cwiseAbs().maxCoeff());
      worst = std::max(worst, (j.transpose() * g * j - g).cwiseAbs().maxCoeff());
      Eigen::SelfAdjointEigenSolver<RealMatrix> eig(0.5 * (g + g.transpose()));
      worst = std::max(worst, std::max(0.0, -eig.eigenvalues().minCoeff()));
      col.add("kks_kahler_triple", worst, 1, 1e-9);
    }

    if (ts.pure && n <= 4) {
      const kks::KahlerTriple triple = kks::kahler_triple(OrbitPoint::reference(state));
      ChartVector origin;
      origin.coords.assign(active_roots(state).size(), {0.0, 0.0});
      const RealMatrix fs = kks::fubini_study_reference(state, origin);
      const double c = (triple.g.cwiseProduct(fs)).sum() / fs.squaredNorm();
      const double rel =
          (triple.g - c * fs).norm() / std::max(1.0, triple.g.norm());
      col.add("kks_fubini_study_origin", rel, 1, 1e-9);
    }
  }

  col.add_custom("kks_nondegeneracy_min_singular_value", min_singular, singular_samples,
                 min_singular >= 1e-12);
  return col.finish();
}

SuiteResult run_fisher_suite(const SuiteConfig& cfg) {
  sampling::Rng rng(cfg.seed + 1);
  Collector col(cfg.tol_override);
  double min_mixed_delta = std::numeric_limits<double>::infinity();
  long mixed_samples = 0;

  for (const auto& ts : suite_states(cfg, rng)) {
    const LambdaState& state = ts.state;
    if (state.orbit_dim() == 0) continue;
    const fisher::SldSolver solver(state);
    const auto roots = active_roots(state);

    // Anticommutator eigenrelation on the reference planes.
    {
      const HermitianMatrix rho = state.rho0();
      double worst = 0.0;
      for (const auto& r : roots) {
        for (const auto kind : {OffDiagKind::Symmetric, OffDiagKind::Antisymmetric}) {
          const HermitianMatrix b = OffDiagBasisElement{r.i, r.j, kind}.matrix(state.n());
          worst = std::max(worst, (anticommutator(b, rho) - b * r.beta).norm());
        }
      }
      col.add("fisher_anticommutator_eigenrelation", worst, 2 * (long)roots.size(), 1e-12);
    }

    for (int s = 0; s < cfg.samples; ++s) {
      const OrbitPoint point = sample_point(rng, state, s);
      const HermitianMatrix v = sampling::random_tangent(rng, point);
      const HermitianMatrix l = solver.sld(point, v);
      col.add("fisher_sld_equation",
              (anticommutator(l, point.rho()) * 0.5 - v).norm() / std::max(1.0, v.norm()), 1,
              1e-10);
    }

    for (int s = 0; s < 3; ++s) {
      const OrbitPoint point = sample_point(rng, state, s);
      const ChartFrame frame = chart_frame(point);
      const int m = frame.size();

      std::vector<HermitianMatrix> slds;
      for (const auto& t : frame.tangent_frame) slds.push_back(solver.sld(point, t));
      double herm_worst = 0.0;
      ComplexMatrix t_raw(m, m);
      for (int r = 0; r < m; ++r) {
        for (int c = 0; c < m; ++c) {
          t_raw(r, c) = (point.rho().mat() * slds[r].mat() * slds[c].mat()).trace();
        }
      }
      for (int r = 0; r < m; ++r) {
        for (int c = 0; c < m; ++c) {
          herm_worst = std::max(herm_worst, std::abs(t_raw(r, c) - std::conj(t_raw(c, r))));
        }
      }
      col.add("fisher_hermitian_symmetry", herm_worst, (long)m * m, 1e-12);

      const fisher::FisherTensor numeric = fisher::fisher_tensor(point);
      const fisher::FisherTensor chart = fisher::fisher_tensor_chart(state);
      col.add("fisher_chart_agreement", (numeric.f - chart.f).cwiseAbs().maxCoeff(),
              numeric.f.size(), 1e-9);

      const CheckReport pullback = fisher::fisher_form_pullback_check(point, 1e-9);
      col.add(pullback.check, pullback.max_residual, pullback.samples, 1e-9);

      const fisher::FisherStructureTensor js = fisher::fisher_structure(point);
      col.add("fisher_structure_square", js.square_residual, 1, 1e-9);
      col.add("fisher_structure_metric_identity",
              (numeric.w_antisym * js.j - numeric.g_sym).cwiseAbs().maxCoeff(), 1, 1e-9);

      RealMatrix delta_mat = RealMatrix::Zero(m, m);
      for (int k = 0; 2 * k < m; ++k) {
        delta_mat(2 * k, 2 * k) = js.delta[k];
        delta_mat(2 * k + 1, 2 * k + 1) = js.delta[k];
      }
      col.add("fisher_structure_scaling_identity",
              (js.j.transpose() * numeric.g_sym * js.j - delta_mat * numeric.g_sym)
                  .cwiseAbs()
                  .maxCoeff(),
              1, 1e-9);

      // Eigenvalues of the structure come in pairs +- i beta/alpha.
      Eigen::EigenSolver<RealMatrix> es(js.j);
      std::vector<double> pos_imag;
      double real_worst = 0.0;
      for (int k = 0; k < m; ++k) {
        real_worst = std::max(real_worst, std::abs(es.eigenvalues()(k).real()));
        if (es.eigenvalues()(k).imag() > 0) pos_imag.push_back(es.eigenvalues()(k).imag());
      }
      std::vector<double> expected;
      for (const auto& r : roots) expected.push_back(r.beta / r.alpha);
      std::sort(pos_imag.begin(), pos_imag.end());
      std::sort(expected.begin(), expected.end());
      double eig_worst = real_worst;
      if (pos_imag.size() != expected.size()) {
        eig_worst = 1.0;
      } else {
        for (std::size_t k = 0; k < expected.size(); ++k) {
          eig_worst = std::max(eig_worst, std::abs(pos_imag[k] - expected[k]));
        }
      }
      col.add("fisher_structure_eigenvalues", eig_worst, m, 1e-9);

      if (ts.pure) {
        double worst = 0.0;
        for (double d : js.delta) worst = std::max(worst, std::abs(d - 1.0));
        col.add("fisher_delta_pure_is_one", worst, (long)js.delta.size(), 1e-9);
      } else {
        for (double d : js.delta) min_mixed_delta = std::min(min_mixed_delta, d);
        mixed_samples += (long)js.delta.size();
      }

      if (s > 0) {
        const fisher::FisherStructureTensor ref =
            fisher::fisher_structure(OrbitPoint::reference(state));
        col.add("fisher_structure_invariance", (js.j - ref.j).cwiseAbs().maxCoeff(), 1,
                1e-9);
      }
    }
  }

  col.add_custom("fisher_delta_mixed_above_one", min_mixed_delta, mixed_samples,
                 min_mixed_delta >= 1.0 + 1e-6);
  return col.finish();
}

SuiteResult run_fibration_suite(const SuiteConfig& cfg) {
  sampling::Rng rng(cfg.seed + 2);
  Collector col(cfg.tol_override);

  struct Pair {
    LambdaState total;
    LambdaState base;
  };
  std::vector<Pair> pairs;
  for (int n = std::max(3, cfg.n_min); n <= cfg.n_max; ++n) {
    const LambdaState total = sampling::random_lambda_state(rng, n);
    {
      std::vector<double> merged(total.lambda().data(), total.lambda().data() + n);
      const double mean = 0.5 * (merged[0] + merged[1]);
      merged[0] = merged[1] = mean;
      pairs.push_back({total, lambda_state_new(merged)});
    }
    pairs.push_back({total, lambda_state_new(std::vector<double>(n, 1.0 / n))});
    pairs.push_back({total, sampling::random_coarsening(rng, total)});
    if (n >= 5) {
      // Degenerate total refined by a coarser base.
      std::vector<double> tot(total.lambda().data(), total.lambda().data() + n);
      tot[0] = tot[1] = 0.5 * (tot[0] + tot[1]);
      const LambdaState total_deg = lambda_state_new(tot);
      std::vector<double> base(tot);
      const double mean = (base[0] + base[1] + base[2]) / 3.0;
      base[0] = base[1] = base[2] = mean;
      pairs.push_back({total_deg, lambda_state_new(base)});
    }
  }

  for (const auto& pr : pairs) {
    const auto fib = fibration::fibration_new(pr.total, pr.base);

    col.add("fibration_dimension_additivity",
            std::abs(double(fib.total_dim - fib.base_dim - fib.fibre_dim)), 1, 0.0);
    col.add("fibration_root_partition",
            std::abs(double(static_cast<int>(fib.vertical_roots.size() +
                                             fib.horizontal_roots.size()) -
                            static_cast<int>(active_roots(pr.total).size()))),
            1, 0.0);

    const auto fibre = fibration::fibre_orbit(fib);
    int fibre_sum = 0;
    for (const auto& f : fibre.factors) fibre_sum += f.dim;
    col.add("fibration_fibre_dimensions", std::abs(double(fibre_sum - fib.fibre_dim)), 1,
            0.0);

    const CheckReport sympl =
        fibration::check_symplectic_orthogonality(fib, std::max(3, cfg.samples / 4),
                                                  rng.bits(), 1e-10);
    col.add(sympl.check, sympl.max_residual, sympl.samples, 1e-10);

    const auto invol = fibration::check_involutivity(fib, 1e-12);
    col.add(invol.vertical_vertical.check, invol.vertical_vertical.max_residual,
            invol.vertical_vertical.samples, 1e-12);
    col.add(invol.horizontal_vertical.check, invol.horizontal_vertical.max_residual,
            invol.horizontal_vertical.samples, 1e-12);

    if (fib.total.orbit_dim() > 0) {
      const auto blocks = fibration::check_tensor_block_diagonality(fib, 1e-10);
      for (const auto& c : blocks.checks) {
        col.add(c.check, c.max_residual, c.samples, c.check == "fibration_vertical_fisher_roots" ? 1e-9 : 1e-10);
      }
    }

    for (int s = 0; s < 3; ++s) {
      const OrbitPoint pt = sample_point(rng, fib.total, s + 1);
      const OrbitPoint down = fibration::projection(fib, pt);
      const EigenDecomposition ed = eigendecompose_canonical(down.rho());
      col.add("fibration_projection_spectrum",
              (ed.lambda - fib.base.lambda()).cwiseAbs().maxCoeff(), 1, 1e-9);
    }
  }

  // Incomparable partitions must be rejected.
  {
    const LambdaState total = lambda_state_new({0.4, 0.4, 0.15, 0.05});
    const LambdaState base = lambda_state_new({0.5, 0.2, 0.2, 0.1});
    bool rejected = false;
    try {
      fibration::fibration_new(total, base);
    } catch (const ValidationError&) {
      rejected = true;
    }
    col.add_custom("fibration_rejects_incomparable", rejected ? 0.0 : 1.0, 1, rejected);
  }

  return col.finish();
}

SuiteResult run_linfisher_suite(const SuiteConfig& cfg) {
  sampling::Rng rng(cfg.seed + 3);
  Collector col(cfg.tol_override);

  for (const auto& ts : suite_states(cfg, rng)) {
    const LambdaState& state = ts.state;
    if (state.orbit_dim() == 0) continue;

    // Fisher structures along one orbit: members with a constant root multiset.
    std::vector<RealMatrix> samples;
    for (int s = 0; s < std::max(3, cfg.samples / 4); ++s) {
      samples.push_back(fisher::fisher_structure(sample_point(rng, state, s)).j);
    }
    const auto manifold = linfisher::manifold_fisher_check(samples, 1e-10);
    for (const auto& c : manifold.checks) col.add(c.check, c.max_residual, c.samples, 1e-10);

    linfisher::LinearFisherStructure j;
    j.form = linfisher::Form::Real;
    j.real_rep = samples[0];
    const auto nf = linfisher::normal_form(j);
    col.add("linfisher_normal_form", nf.residual, 1, 1e-10);

    std::vector<double> expected;
    for (const auto& r : active_roots(state)) expected.push_back(r.beta / r.alpha);
    std::sort(expected.begin(), expected.end(), std::greater<double>());
    std::vector<double> got;
    for (const auto& [d, mult] : nf.roots) {
      for (int k = 0; k < mult; ++k) got.push_back(d);
    }
    double root_worst = got.size() == expected.size() ? 0.0 : 1.0;
    for (std::size_t k = 0; k < std::min(got.size(), expected.size()); ++k) {
      root_worst = std::max(root_worst, std::abs(got[k] - expected[k]));
    }
    col.add("linfisher_normal_form_roots", root_worst, (long)expected.size(), 1e-9);
  }

  // Synthetic complex representatives.
  for (int n = 2; n <= 5; ++n) {
    ComplexMatrix m = ComplexMatrix::Zero(n, n);
    std::vector<double> d(n);
    for (int k = 0; k < n; ++k) {
      d[k] = 1.0 + rng.uniform();
      m(k, k) = Complex(0.0, d[k]);
    }
    linfisher::LinearFisherStructure j;
    j.form = linfisher::Form::Complex;
    j.complex_rep = m;
    const auto membership = linfisher::is_fisher_structure(j);
    col.add_custom("linfisher_complex_membership", membership.is_member ? 0.0 : 1.0, 1,
                   membership.is_member);

    // Realification carries the same root multiset.
    linfisher::LinearFisherStructure jr;
    jr.form = linfisher::Form::Real;
    jr.real_rep = linfisher::realification(m);
    const auto real_membership = linfisher::is_fisher_structure(jr);
    double realif_worst = real_membership.is_member ? 0.0 : 1.0;
    if (real_membership.is_member && membership.is_member) {
      std::vector<double> a = membership.roots, b = real_membership.roots;
      if (a.size() != b.size()) {
        realif_worst = 1.0;
      } else {
        for (std::size_t k = 0; k < a.size(); ++k) {
          realif_worst = std::max(realif_worst, std::abs(a[k] - b[k]));
        }
      }
    }
    col.add("linfisher_realification_roots", realif_worst, n, 1e-12);

    // Group laws of the positive rescaling action on compatible structures.
    std::vector<double> q1(n), q2(n);
    for (int k = 0; k < n; ++k) {
      q1[k] = 0.5 + rng.uniform();
      q2[k] = 0.5 + rng.uniform();
    }
    const ComplexMatrix lhs =
        linfisher::scaling_action(q1, linfisher::scaling_action(q2, m));
    std::vector<double> q12(n);
    for (int k = 0; k < n; ++k) q12[k] = q1[k] * q2[k];
    const ComplexMatrix rhs = linfisher::scaling_action(q12, m);
    double group_worst = (lhs - rhs).cwiseAbs().maxCoeff();
    const ComplexMatrix ident =
        linfisher::scaling_action(std::vector<double>(n, 1.0), m);
    group_worst = std::max(group_worst, (ident - m).cwiseAbs().maxCoeff());
    col.add("linfisher_scaling_group", group_worst, 2, 1e-12);

    const auto ui = linfisher::unitary_intersection(m);
    col.add("linfisher_unitary_intersection", ui.residual, 1, 1e-10);
    linfisher::LinearFisherStructure ju;
    ju.form = linfisher::Form::Complex;
    ju.complex_rep = ui.unitary;
    col.add_custom("linfisher_unitary_is_member",
                   linfisher::is_fisher_structure(ju).is_member ? 0.0 : 1.0, 1,
                   linfisher::is_fisher_structure(ju).is_member);
  }

  // Coupled plane: rescaling with mismatched weights on a coupled pair is rejected.
  {
    ComplexMatrix m = ComplexMatrix::Zero(2, 2);
    m(0, 0) = Complex(0.0, 1.0);
    m(1, 1) = Complex(0.0, -1.0);
    m(0, 1) = Complex(0.7, 0.0);
    m(1, 0) = Complex(-0.7, 0.0);
    const auto membership = linfisher::is_fisher_structure(
        linfisher::LinearFisherStructure{linfisher::Form::Complex, RealMatrix(), m});
    col.add_custom("linfisher_coupled_membership", membership.is_member ? 0.0 : 1.0, 1,
                   membership.is_member);
    bool rejected = false;
    try {
      linfisher::scaling_action({2.0, 3.0}, m);
    } catch (const ValidationError&) {
      rejected = true;
    }
    col.add_custom("linfisher_scaling_rejects_incompatible", rejected ? 0.0 : 1.0, 1,
                   rejected);
    const ComplexMatrix scaled = linfisher::scaling_action({2.0, 2.0}, m);
    const auto scaled_membership = linfisher::is_fisher_structure(
        linfisher::LinearFisherStructure{linfisher::Form::Complex, RealMatrix(), scaled});
    col.add_custom("linfisher_scaling_compatible_member",
                   scaled_membership.is_member ? 0.0 : 1.0, 1, scaled_membership.is_member);
  }

  return col.finish();
}

SuiteResult run_all(const SuiteConfig& cfg) {
  SuiteResult out;
  for (const auto& suite :
       {run_kks_suite(cfg), run_fisher_suite(cfg), run_fibration_suite(cfg),
        run_linfisher_suite(cfg)}) {
    out.checks.insert(out.checks.end(), suite.checks.begin(), suite.checks.end());
  }
  out.pass = all_pass(out.checks);
  return out;
}

}  // namespace orbitfisher::verify
