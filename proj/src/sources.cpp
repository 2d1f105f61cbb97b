#include "lrdsc/sources.hpp"

#include <cmath>
#include <stdexcept>

namespace lrdsc {

namespace {
constexpr double kTwoPiE = 17.079468445347132;  // 2 * pi * e
}

void SourceModel::check() const {
  if (n < 1) throw std::invalid_argument("source dimension must be positive");
  if (marginal == Marginal::Gaussian && !(sigma2 > 0.0)) {
    throw std::invalid_argument("gaussian marginal needs sigma2 > 0");
  }
  if (marginal == Marginal::Uniform && !(width > 0.0)) {
    throw std::invalid_argument("uniform marginal needs width > 0");
  }
  if (mode == PairMode::GaussianCorrelated) {
    if (marginal != Marginal::Gaussian) {
      throw std::invalid_argument("gaussian-correlated mode requires a gaussian marginal");
    }
    if (!(rho >= -1.0 && rho <= 1.0)) {
      throw std::invalid_argument("correlation coefficient must lie in [-1, 1]");
    }
  }
  if (mode == PairMode::BoundedDifference && !(delta >= 0.0)) {
    throw std::invalid_argument("bounded-difference mode needs delta >= 0");
  }
}

double SourceModel::differential_entropy_bits() const {
  if (marginal == Marginal::Gaussian) return 0.5 * std::log2(kTwoPiE * sigma2);
  return std::log2(width);
}

PairSampler::PairSampler(const SourceModel& model, std::uint64_t seed, std::uint64_t stream)
    : model_(model), rng_(seed, stream) {
  model_.check();
}

void PairSampler::next(Vec& x1, Vec& x2) {
  const int n = model_.n;
  x1.resize(n);
  x2.resize(n);
  const double sd = std::sqrt(model_.sigma2);
  for (int i = 0; i < n; ++i) {
    x1[i] = model_.marginal == Marginal::Gaussian
                ? sd * rng_.gaussian()
                : model_.width * (rng_.uniform() - 0.5);
  }
  switch (model_.mode) {
    case PairMode::Identical:
      x2 = x1;
      return;
    case PairMode::GaussianCorrelated: {
      const double w = std::sqrt(std::max(0.0, 1.0 - model_.rho * model_.rho));
      for (int i = 0; i < n; ++i) x2[i] = model_.rho * x1[i] + w * sd * rng_.gaussian();
      return;
    }
    case PairMode::BoundedDifference: {
      // Uniform on the ball: gaussian direction times radius * U^{1/n}.
      Vec dir(n);
      double norm2 = 0.0;
      do {
        for (int i = 0; i < n; ++i) dir[i] = rng_.gaussian();
        norm2 = dir.squaredNorm();
      } while (norm2 == 0.0);
      const double radius = model_.delta * std::sqrt(static_cast<double>(n)) *
                            std::pow(rng_.uniform(), 1.0 / n);
      x2 = x1 + dir * (radius / std::sqrt(norm2));
      return;
    }
  }
}

TailEstimate tail_probability(const SourceModel& model, double r0, std::uint64_t count,
                              std::uint64_t seed) {
  if (!(r0 > 0.0)) throw std::invalid_argument("r0 must be positive");
  if (count < 1) throw std::invalid_argument("count must be positive");
  PairSampler sampler(model, seed);
  Vec x1, x2;
  std::uint64_t hits = 0;
  for (std::uint64_t k = 0; k < count; ++k) {
    sampler.next(x1, x2);
    if ((x2 - x1).norm() >= r0) ++hits;
  }
  TailEstimate est;
  est.count = count;
  est.p = static_cast<double>(hits) / static_cast<double>(count);
  est.half_width_99 =
      2.5758293035489004 * std::sqrt(est.p * (1.0 - est.p) / static_cast<double>(count));
  return est;
}

double markov_rho_bound(int n, double sigma2, double rho, double r0) {
  if (!(r0 > 0.0)) throw std::invalid_argument("r0 must be positive");
  return 2.0 * n * (1.0 - rho) * sigma2 / (r0 * r0);
}

}  // namespace lrdsc
