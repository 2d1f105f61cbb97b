#include "lrdsc/labeling.hpp"

#include <algorithm>
#include <cmath>
#include <set>
#include <stdexcept>
#include <string>

namespace lrdsc {

namespace {

bool ivec_lex_less(const IVec& a, const IVec& b) {
  for (Eigen::Index i = 0; i < a.size(); ++i) {
    if (a[i] != b[i]) return a[i] < b[i];
  }
  return false;
}

std::vector<std::int64_t> window_bounds(const Lattice& lat, double radius) {
  const int n = lat.dim();
  std::vector<std::int64_t> bound(n);
  double guard = 1.0;
  for (int i = 0; i < n; ++i) {
    bound[i] = static_cast<std::int64_t>(std::ceil(lat.inverse_basis().row(i).norm() * radius)) + 1;
    guard *= 2.0 * static_cast<double>(bound[i]) + 1.0;
  }
  if (guard > 8e7) throw std::runtime_error("labeling enumeration window too large");
  return bound;
}

template <typename F>
void for_each_in_window(const std::vector<std::int64_t>& bound, F&& body) {
  const int n = static_cast<int>(bound.size());
  std::vector<std::int64_t> off(n);
  for (int i = 0; i < n; ++i) off[i] = -bound[i];
  IVec k(n);
  while (true) {
    for (int i = 0; i < n; ++i) k[i] = off[i];
    body(k);
    int i = 0;
    for (; i < n; ++i) {
      if (off[i] < bound[i]) {
        ++off[i];
        for (int j = 0; j < i; ++j) off[j] = -bound[j];
        break;
      }
    }
    if (i == n) break;
  }
}

}  // namespace

LabelingContext LabelingContext::build(const Lattice& side, const Lattice& intermediate,
                                       int mu) {
  if (mu < 2 || mu % 2 != 0) {
    throw std::invalid_argument("labeling requires an even mu >= 2");
  }
  if (!side.same_dimension(intermediate)) throw std::invalid_argument("dimension mismatch");
  const Mat expected = intermediate.basis() * static_cast<double>(mu);
  if ((side.basis() - expected).norm() > 1e-9 * expected.norm()) {
    throw std::invalid_argument("side lattice must equal mu * intermediate exactly");
  }

  LabelingContext ctx;
  ctx.side_ = side;
  ctx.intermediate_ = intermediate;
  ctx.fractional_ = intermediate.scaled(mu / 2.0);
  ctx.mu_ = mu;

  const int n = intermediate.dim();
  const auto gs = side.geometry();
  const auto gf = ctx.fractional_.geometry();
  const double radius = 2.0 * gs.covering_radius + gf.covering_radius;

  // T = V_s(0) intersect Lambda_{s/2}, found by bounded search plus the
  // quantizer membership test; sizes are asserted afterwards, failing loudly
  // if the window was too small.
  const std::int64_t half = mu / 2;
  {
    const auto bound = window_bounds(ctx.fractional_, radius);
    const IVec zero = IVec::Zero(n);
    for_each_in_window(bound, [&](const IVec& f) {
      IVec tau = half * f;
      if (intermediate.quantize_coords(tau, static_cast<std::int64_t>(mu)) == zero) {
        ctx.reps_t_.push_back(tau);
      }
    });
  }
  const std::int64_t expected_t = std::int64_t{1} << n;
  if (static_cast<std::int64_t>(ctx.reps_t_.size()) != expected_t) {
    throw std::runtime_error("|T| = " + std::to_string(ctx.reps_t_.size()) + ", expected " +
                             std::to_string(expected_t));
  }
  std::sort(ctx.reps_t_.begin(), ctx.reps_t_.end(), ivec_lex_less);

  // U = union of the fractional cells of T, intersected with Lambda_in.
  {
    std::set<std::vector<std::int64_t>> tset;
    for (const auto& t : ctx.reps_t_) {
      tset.insert(std::vector<std::int64_t>(t.data(), t.data() + n));
    }
    const auto bound = window_bounds(intermediate, radius);
    for_each_in_window(bound, [&](const IVec& lam) {
      IVec lam_half = half * intermediate.quantize_coords(lam, half);
      std::vector<std::int64_t> key(lam_half.data(), lam_half.data() + n);
      if (tset.count(key)) ctx.reps_u_.push_back(lam);
    });
  }
  std::int64_t expected_u = 1;
  for (int i = 0; i < n; ++i) expected_u *= mu;
  if (static_cast<std::int64_t>(ctx.reps_u_.size()) != expected_u) {
    throw std::runtime_error("|U| = " + std::to_string(ctx.reps_u_.size()) + ", expected " +
                             std::to_string(expected_u));
  }
  std::sort(ctx.reps_u_.begin(), ctx.reps_u_.end(), ivec_lex_less);
  return ctx;
}

LabelDecomposition LabelingContext::decompose(const IVec& lambda) const {
  LabelDecomposition d;
  d.lambda_half = quantize_fractional(lambda);
  d.side = quantize_side(d.lambda_half);
  d.tau = d.lambda_half - d.side;
  return d;
}

IVec LabelingContext::beta(int which, const IVec& lambda) const {
  if (which != 1 && which != 2) throw std::invalid_argument("label index must be 1 or 2");
  const auto d = decompose(lambda);
  const IVec shifted = lambda - d.side - d.tau;
  const std::int64_t mu = mu_;
  if (which == 1) return mu * shifted + d.side;
  return 2 * d.tau - mu * shifted + d.side;
}

IVec LabelingContext::beta_at_point(int which, const Vec& x) const {
  const Vec coords = intermediate_.inverse_basis() * x;
  IVec lambda(coords.size());
  for (Eigen::Index i = 0; i < coords.size(); ++i) {
    const double r = std::round(coords[i]);
    if (std::abs(coords[i] - r) > 1e-9) {
      throw std::invalid_argument("point is not in the intermediate lattice");
    }
    lambda[i] = static_cast<std::int64_t>(r);
  }
  return beta(which, lambda);
}

std::vector<IVec> LabelingContext::beta_preimage_zero(int which) const {
  std::vector<IVec> pre;
  pre.reserve(reps_u_.size());
  std::set<std::vector<std::int64_t>> seen;
  const int n = dim();
  for (const auto& lam : reps_u_) {
    IVec p = lam - beta(which, lam);
    if (!seen.insert(std::vector<std::int64_t>(p.data(), p.data() + n)).second) {
      throw std::runtime_error("beta preimage points are not distinct");
    }
    if (beta(which, p) != IVec::Zero(n)) {
      throw std::runtime_error("beta preimage round-trip failed");
    }
    pre.push_back(std::move(p));
  }
  std::sort(pre.begin(), pre.end(), ivec_lex_less);
  return pre;
}

}  // namespace lrdsc
