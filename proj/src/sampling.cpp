#include "orbitfisher/sampling.hpp"

#include <algorithm>
#include <cmath>
#include <numeric>

namespace orbitfisher::sampling {

double Rng::gaussian() {
  if (have_spare_) {
    have_spare_ = false;
    return spare_;
  }
  double u1 = uniform();
  while (u1 <= 0.0) u1 = uniform();
  const double u2 = uniform();
  const double r = std::sqrt(-2.0 * std::log(u1));
  const double theta = 2.0 * M_PI * u2;
  spare_ = r * std::sin(theta);
  have_spare_ = true;
  return r * std::cos(theta);
}

int Rng::uniform_int(int lo, int hi) {
  const auto span = static_cast<std::uint64_t>(hi - lo + 1);
  return lo + static_cast<int>(bits() % span);
}

HermitianMatrix random_hermitian(Rng& rng, int n, bool unit_norm) {
  ComplexMatrix m(n, n);
  for (int r = 0; r < n; ++r) {
    for (int c = 0; c < n; ++c) {
      m(r, c) = Complex(rng.gaussian(), rng.gaussian());
    }
  }
  ComplexMatrix h = 0.5 * (m + m.adjoint().eval());
  if (unit_norm) {
    const double nrm = h.norm();
    if (nrm > 0) h /= nrm;
  }
  return HermitianMatrix(h);
}

ComplexMatrix random_unitary(Rng& rng, int n) {
  return unitary_exp(random_hermitian(rng, n, /*unit_norm=*/false));
}

LambdaState random_lambda_state(Rng& rng, int n, double min_sep) {
  if (min_sep <= 0.0) min_sep = 0.05 / n;
  for (int attempt = 0; attempt < 10000; ++attempt) {
    std::vector<double> v(n);
    double sum = 0.0;
    for (int k = 0; k < n; ++k) {
      double u = rng.uniform();
      while (u <= 0.0) u = rng.uniform();
      v[k] = -std::log(u);
      sum += v[k];
    }
    for (double& x : v) x /= sum;
    std::sort(v.begin(), v.end(), std::greater<double>());
    bool ok = v.back() >= min_sep;
    for (int k = 0; ok && k + 1 < n; ++k) ok = v[k] - v[k + 1] >= min_sep;
    if (!ok) continue;
    return lambda_state_new(v);
  }
  throw ConvergenceError("random_lambda_state: separation constraint not met");
}

ChartVector random_chart(Rng& rng, const LambdaState& state, double scale) {
  ChartVector out;
  out.coords.resize(active_roots(state).size());
  for (auto& c : out.coords) {
    c[0] = scale * rng.gaussian();
    c[1] = scale * rng.gaussian();
  }
  return out;
}

HermitianMatrix random_stabilizer_element(Rng& rng, const LambdaState& state) {
  const int n = state.n();
  ComplexMatrix m = ComplexMatrix::Zero(n, n);
  for (const auto& cluster : state.clusters()) {
    for (int r = cluster.begin; r < cluster.end; ++r) {
      for (int c = cluster.begin; c < cluster.end; ++c) {
        m(r, c) = Complex(rng.gaussian(), rng.gaussian());
      }
    }
  }
  ComplexMatrix h = 0.5 * (m + m.adjoint().eval());
  const double nrm = h.norm();
  if (nrm > 0) h /= nrm;
  return HermitianMatrix(h);
}

HermitianMatrix random_tangent(Rng& rng, const OrbitPoint& point) {
  const auto roots = active_roots(point.state());
  RealVector coords(2 * static_cast<int>(roots.size()));
  for (int k = 0; k < coords.size(); ++k) coords(k) = rng.gaussian();
  return tangent_from_chart_coords(point, coords);
}

LambdaState random_coarsening(Rng& rng, const LambdaState& state) {
  const auto& clusters = state.clusters();
  const int n_clusters = static_cast<int>(clusters.size());
  for (int attempt = 0; attempt < 1000; ++attempt) {
    // Random contiguous grouping of the clusters; 50% chance per boundary to merge.
    std::vector<int> group_of(n_clusters);
    int group = 0;
    group_of[0] = 0;
    for (int c = 1; c < n_clusters; ++c) {
      if (rng.uniform() < 0.5) ++group;
      group_of[c] = group;
    }
    std::vector<double> merged(state.n());
    for (int c = 0; c < n_clusters; ++c) {
      // merged eigenvalue: mean over the whole group, weighted by cluster sizes
      double sum = 0.0;
      int count = 0;
      for (int d = 0; d < n_clusters; ++d) {
        if (group_of[d] != group_of[c]) continue;
        for (int k = clusters[d].begin; k < clusters[d].end; ++k) {
          sum += state.lambda()(k);
          ++count;
        }
      }
      for (int k = clusters[c].begin; k < clusters[c].end; ++k) merged[k] = sum / count;
    }
    LambdaState out = lambda_state_new(merged);
    // Reject accidental extra merges: the coarsening must have exactly one cluster
    // per group so its partition is the chosen one.
    if (static_cast<int>(out.clusters().size()) == group + 1) return out;
  }
  throw ConvergenceError("random_coarsening: could not build a clean coarsening");
}

}  // namespace orbitfisher::sampling
