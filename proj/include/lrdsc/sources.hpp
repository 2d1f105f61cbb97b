#pragma once

#include <cstdint>

#include "lrdsc/lattice.hpp"
#include "lrdsc/rng.hpp"

namespace lrdsc {

enum class Marginal { Gaussian, Uniform };
enum class PairMode { Identical, GaussianCorrelated, BoundedDifference };

/// Correlated source pair with equal marginals.
///
///  - Identical: X2 == X1.
///  - GaussianCorrelated: X2 = rho X1 + sqrt(1 - rho^2) W with W an
///    independent copy, so both marginals are the declared Gaussian exactly.
///  - BoundedDifference: X2 = X1 + D with D uniform on the ball of radius
///    delta * sqrt(n); the marginals then differ by a small convolution,
///    which is acceptable for recovery/branch-coverage experiments.
struct SourceModel {
  Marginal marginal = Marginal::Gaussian;
  double sigma2 = 1.0;  // Gaussian variance
  double width = 1.0;   // Uniform support: X ~ U[-width/2, width/2]
  PairMode mode = PairMode::Identical;
  double rho = 1.0;
  double delta = 0.0;
  int n = 1;

  void check() const;

  /// Per-sample differential entropy h(X) in bits (closed form for both
  /// marginals).
  double differential_entropy_bits() const;
};

class PairSampler {
 public:
  PairSampler(const SourceModel& model, std::uint64_t seed, std::uint64_t stream = 0);

  /// Next (x1, x2); deterministic given (seed, stream).
  void next(Vec& x1, Vec& x2);

 private:
  SourceModel model_;
  RngStream rng_;
};

struct TailEstimate {
  double p = 0.0;
  double half_width_99 = 0.0;
  std::uint64_t count = 0;
};

/// Monte Carlo estimate of P[X2^n - X1^n outside the open ball of radius r0].
TailEstimate tail_probability(const SourceModel& model, double r0, std::uint64_t count,
                              std::uint64_t seed);

/// Markov bound 2 n (1 - rho) sigma^2 / r0^2 on the tail probability.
double markov_rho_bound(int n, double sigma2, double rho, double r0);

}  // namespace lrdsc
