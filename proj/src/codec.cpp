#include "lrdsc/codec.hpp"

#include <cmath>
#include <sstream>

namespace lrdsc {

namespace {

std::string fmt(double v) {
  std::ostringstream os;
  os.precision(12);
  os << v;
  return os.str();
}

}  // namespace

LrdscCodec LrdscCodec::validate(const Lattice& central, const Lattice& intermediate, int mu,
                                double r0, const CodecOptions& opts) {
  if (!central.same_dimension(intermediate)) throw ValidationError("dimension mismatch");
  if (!central.has_exact_coords() || !intermediate.has_exact_coords()) {
    throw ValidationError(
        "codec requires lattices with exact coordinate arithmetic "
        "(integer-grid or hexagonal)");
  }
  if (central.kind() != intermediate.kind()) {
    throw ValidationError("central and intermediate lattices must share a kind");
  }
  if (mu < 2 || mu % 2 != 0) throw ValidationError("mu must be a positive even integer");

  LrdscCodec codec;
  codec.unsupported_by_theory_ = false;
  if (mu < 8) {
    if (!opts.unsafe_small_mu) {
      throw ValidationError("mu = " + std::to_string(mu) +
                            " < 8; pass unsafe_small_mu to run anyway (unsupported by theory)");
    }
    codec.unsupported_by_theory_ = true;
  }

  // Intermediate must be an integer scaling of the central lattice.
  const auto pair = make_nested_pair(central, intermediate);
  const int n = central.dim();
  std::int64_t s = pair.coarse_in_fine(0, 0);
  for (int i = 0; i < n; ++i) {
    for (int j = 0; j < n; ++j) {
      const std::int64_t want = (i == j) ? s : 0;
      if (pair.coarse_in_fine(i, j) != want) {
        throw ValidationError("intermediate lattice must be an integer scaling of the central one");
      }
    }
  }
  if (s < 2) throw ValidationError("intermediate/central scale ratio must be >= 2");

  codec.central_ = central;
  codec.intermediate_ = intermediate;
  codec.mu_ = mu;
  codec.s_ = s;
  codec.k_ = pair.index;
  codec.labeling_ =
      LabelingContext::build(intermediate.scaled(static_cast<double>(mu)), intermediate, mu);
  codec.inner_reps_ = coset_representatives(pair);

  const auto gc = central.geometry();
  const auto gi = intermediate.geometry();
  const auto gs = codec.labeling_.side().geometry();
  const auto gf = codec.labeling_.fractional().geometry();
  codec.rbar_c_ = gc.covering_radius;
  codec.r_in_ = gi.inscribed_radius;
  codec.rbar_in_ = gi.covering_radius;
  codec.rbar_s_ = gs.covering_radius;
  codec.r_s_half_ = gf.inscribed_radius;
  codec.g_c_ = gc.second_moment;
  codec.g_s_half_ = gf.second_moment;

  if (!(r0 > 0.0)) throw ValidationError("r0 must be positive");
  const double r0_margin = codec.r_in_ - r0 - 2.0 * codec.rbar_c_;
  if (r0_margin < -1e-12 * codec.r_in_) {
    throw ValidationError("condition r0 + 2 rbar_c <= r_in violated by " + fmt(-r0_margin));
  }
  codec.r0_ = r0;

  codec.gamma_ = 1.0 - 3.0 * codec.rbar_in_ / codec.r_s_half_;
  if (codec.gamma_ <= 0.0) {
    if (!opts.unsafe_small_mu) {
      throw ValidationError("gamma = 1 - 3 rbar_in / r_{s/2} = " + fmt(codec.gamma_) +
                            " <= 0 (needs 3 rbar_in < r_{s/2})");
    }
    codec.unsupported_by_theory_ = true;
  }

  const auto sep = nonadjacent_separation(codec.labeling_.fractional());
  const double width_margin = sep.value - 3.0 * codec.rbar_in_;
  if (!(width_margin > 0.0)) {
    if (!opts.unsafe_small_mu) {
      throw ValidationError("fractional-cell separation " + fmt(sep.value) +
                            " must exceed 3 rbar_in = " + fmt(3.0 * codec.rbar_in_) +
                            " (short by " + fmt(-width_margin) + ")");
    }
    codec.unsupported_by_theory_ = true;
  }

  codec.c_ = opts.c_constant.value_or(static_cast<double>(mu));
  codec.dec_threshold_ = (8.0 + codec.c_) * codec.rbar_s_ + 3.0 * codec.rbar_in_;
  return codec;
}

bool LrdscCodec::in_boundary_set(const IVec& lambda) const {
  if (gamma_ <= 0.0) return true;  // degenerate cell: everything is boundary
  const IVec lam_half = labeling_.quantize_fractional(lambda);
  const Vec diff = intermediate_.point(lambda - lam_half) / gamma_;
  return labeling_.fractional().nearest_index(diff) != IVec::Zero(dim());
}

Description LrdscCodec::encode(int which, const Vec& x) const {
  if (which != 1 && which != 2) throw std::invalid_argument("encoder index must be 1 or 2");
  if (!x.allFinite()) throw std::invalid_argument("encode: non-finite input");

  const IVec ic = central_.nearest_index(x);
  const IVec lam = central_.quantize_coords(ic, s_);  // lambda, intermediate coords
  const IVec u = ic - s_ * lam;                       // residual, central coords

  const auto d = labeling_.decompose(lam);
  const IVec shifted = lam - d.side - d.tau;
  const std::int64_t mu = mu_;

  Description out;
  out.side_point = (which == 1) ? IVec(mu * shifted + d.side)
                                : IVec(2 * d.tau - mu * shifted + d.side);
  out.residual = u;
  out.boundary = in_boundary_set(lam);
  if (out.boundary) out.tau = d.tau;
  return out;
}

Vec LrdscCodec::side_decode(const Description& d) const {
  return intermediate_.point(d.side_point);
}

IVec LrdscCodec::side_decode_coords(const Description& d) const { return s_ * d.side_point; }

IVec LrdscCodec::exact_half(IVec v) const {
  for (Eigen::Index i = 0; i < v.size(); ++i) {
    if (v[i] % 2 != 0) {
      throw std::runtime_error("internal consistency failure: odd coordinate before halving");
    }
    v[i] /= 2;
  }
  return v;
}

IVec LrdscCodec::exact_div_mu(IVec v) const {
  for (Eigen::Index i = 0; i < v.size(); ++i) {
    if (v[i] % mu_ != 0) {
      throw std::runtime_error("internal consistency failure: coordinate not divisible by mu");
    }
    v[i] /= mu_;
  }
  return v;
}

CentralDecodeResult LrdscCodec::central_decode(const Description& d1,
                                               const Description& d2) const {
  if (d1.boundary != d1.tau.has_value() || d2.boundary != d2.tau.has_value()) {
    throw std::invalid_argument("description carries tau iff the boundary flag is set");
  }

  CentralDecodeResult res;
  const Vec ls1 = intermediate_.point(d1.side_point);
  const Vec ls2 = intermediate_.point(d2.side_point);

  if ((ls1 - ls2).norm() > dec_threshold_) {
    // Sources were too far apart; fall back to the side reconstructions.
    res.branch = CentralDecodeResult::Branch::SideFallback;
    res.coords1 = s_ * d1.side_point;
    res.coords2 = s_ * d2.side_point;
    res.x1 = ls1;
    res.x2 = ls2;
    return res;
  }

  const std::int64_t mu = mu_;
  const IVec lam_tilde = central_.quantize_coords(d1.residual - d2.residual, s_);

  IVec l1, l2;
  if (d1.boundary && d2.boundary && *d1.tau != *d2.tau) {
    // The two inputs straddle a fractional cell wall.
    res.branch = CentralDecodeResult::Branch::SplitTau;
    const IVec& tau1 = *d1.tau;
    const IVec& tau2 = *d2.tau;
    const IVec v = exact_half(d1.side_point + d2.side_point + mu * lam_tilde - 2 * tau2 -
                              mu * (tau2 - tau1));
    const IVec w_hat = v - labeling_.quantize_side(v);
    // Q_s(w_hat + (tau2 - tau1)/2), computed exactly on doubled coordinates.
    const IVec q = intermediate_.quantize_coords(2 * w_hat + (tau2 - tau1), 2 * mu);
    const IVec w_tilde = w_hat - mu * q;
    const IVec side_a = v - (mu + 1) * w_tilde;
    const IVec side_b = side_a + 2 * w_tilde;
    l1 = side_a + tau1 + exact_div_mu(d1.side_point - side_a);
    l2 = side_b + tau2 + exact_div_mu(2 * tau2 + side_b - d2.side_point);
  } else {
    // Same fractional cell (or one encoder certifies it).
    res.branch = CentralDecodeResult::Branch::CommonTau;
    const IVec lam_half = exact_half(d1.side_point + d2.side_point + mu * lam_tilde);
    const IVec tau_tilde = lam_half - labeling_.quantize_side(lam_half);
    l1 = lam_half + exact_div_mu(d1.side_point - lam_half + tau_tilde);
    l2 = lam_half + exact_div_mu(tau_tilde + lam_half - d2.side_point);
  }

  res.coords1 = s_ * l1 + d1.residual;
  res.coords2 = s_ * l2 + d2.residual;
  res.x1 = central_.point(res.coords1);
  res.x2 = central_.point(res.coords2);
  return res;
}

}  // namespace lrdsc
