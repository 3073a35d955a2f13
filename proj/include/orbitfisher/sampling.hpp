#pragma once

#include <cstdint>
#include <random>

#include "orbitfisher/orbit.hpp"

namespace orbitfisher::sampling {

// Deterministic RNG: the uniform and Gaussian transforms are written out here so a
// fixed seed yields the same stream on every standard library.
class Rng {
 public:
  explicit Rng(std::uint64_t seed) : engine_(seed) {}

  double uniform() {  // [0, 1)
    return static_cast<double>(engine_() >> 11) * 0x1.0p-53;
  }

  double uniform(double lo, double hi) { return lo + (hi - lo) * uniform(); }

  double gaussian();

  std::uint64_t bits() { return engine_(); }

  int uniform_int(int lo, int hi);  // inclusive bounds

 private:
  std::mt19937_64 engine_;
  bool have_spare_ = false;
  double spare_ = 0.0;
};

HermitianMatrix random_hermitian(Rng& rng, int n, bool unit_norm = true);

ComplexMatrix random_unitary(Rng& rng, int n);

// Strictly positive descending spectrum with all pairwise gaps and the smallest
// entry at least min_sep (default 0.05 / n).
LambdaState random_lambda_state(Rng& rng, int n, double min_sep = -1.0);

ChartVector random_chart(Rng& rng, const LambdaState& state, double scale = 1.0);

// Random element of the stabilizer algebra of rho0: block Hermitian within each
// degeneracy cluster, zero elsewhere; commutes with rho0 exactly.
HermitianMatrix random_stabilizer_element(Rng& rng, const LambdaState& state);

// Random tangent matrix at a point (combination of transported frame vectors).
HermitianMatrix random_tangent(Rng& rng, const OrbitPoint& point);

// Coarser state obtained by merging adjacent degeneracy clusters of `state` and
// averaging the merged eigenvalues; its stabilizer contains that of `state`.
LambdaState random_coarsening(Rng& rng, const LambdaState& state);

}  // namespace orbitfisher::sampling
