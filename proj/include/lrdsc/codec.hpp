#pragma once

#include <optional>
#include <string>
#include <vector>

#include "lrdsc/labeling.hpp"
#include "lrdsc/lattice.hpp"

namespace lrdsc {

/// Thrown when a nested triple fails one of the validity conditions; the
/// message names the condition and the margin by which it broke.
class ValidationError : public std::runtime_error {
 public:
  explicit ValidationError(const std::string& what) : std::runtime_error(what) {}
};

struct CodecOptions {
  /// Constant c in the central decoder's distance test
  /// ||ls1 - ls2|| <= (8 + c) rbar_s + 3 rbar_in. Defaults to mu.
  std::optional<double> c_constant;
  /// Allows mu < 8, gamma <= 0 and thin fractional cells; such codecs are
  /// flagged unsupported_by_theory (with gamma <= 0 every point counts as
  /// boundary, so encoders always transmit tau).
  bool unsafe_small_mu = false;
};

/// One encoder's output. side_point and tau are integer coordinates in the
/// intermediate basis (multiples of mu and mu/2 respectively); residual is
/// integer coordinates in the central basis and lies in V_in(0).
struct Description {
  IVec side_point;
  IVec residual;
  bool boundary = false;
  std::optional<IVec> tau;
};

struct CentralDecodeResult {
  enum class Branch { SideFallback, CommonTau, SplitTau };
  IVec coords1, coords2;  // reconstructions, central-basis coordinates
  Vec x1, x2;
  Branch branch = Branch::CommonTau;
};

/// Validated nested triple (side, intermediate, central) together with the
/// labeling context, the coset structure, and the derived constants. All
/// decoder arithmetic runs on integer coordinates in the intermediate basis
/// so the mod/quantize steps and the divisions by mu are exact.
class LrdscCodec {
 public:
  /// Checks, with margin diagnostics on failure:
  ///   - intermediate is an integer scaling of central (exact-arithmetic
  ///     kinds only: integer-grid or hexagonal),
  ///   - mu even, and >= 8 unless unsafe_small_mu,
  ///   - r0 + 2 rbar_c <= r_in,
  ///   - gamma = 1 - 3 rbar_in / r_{s/2} > 0,
  ///   - nonadjacent fractional cells separated by more than 3 rbar_in.
  static LrdscCodec validate(const Lattice& central, const Lattice& intermediate, int mu,
                             double r0, const CodecOptions& opts = {});

  const Lattice& central() const { return central_; }
  const Lattice& intermediate() const { return intermediate_; }
  const Lattice& side() const { return labeling_.side(); }
  const Lattice& fractional() const { return labeling_.fractional(); }
  const LabelingContext& labeling() const { return labeling_; }
  const std::vector<IVec>& inner_reps() const { return inner_reps_; }

  int dim() const { return central_.dim(); }
  int mu() const { return mu_; }
  std::int64_t scale_ratio() const { return s_; }  // intermediate = s * central
  std::int64_t k_index() const { return k_; }
  std::int64_t m_index() const { return labeling_.index_m(); }
  double r0() const { return r0_; }
  double gamma() const { return gamma_; }
  double c_constant() const { return c_; }
  bool unsupported_by_theory() const { return unsupported_by_theory_; }

  double r_in() const { return r_in_; }
  double rbar_c() const { return rbar_c_; }
  double rbar_in() const { return rbar_in_; }
  double rbar_s() const { return rbar_s_; }
  double r_s_half() const { return r_s_half_; }
  double nu_c() const { return central_.volume(); }
  double nu_in() const { return intermediate_.volume(); }
  double nu_s() const { return side().volume(); }
  double g_c() const { return g_c_; }
  double g_s_half() const { return g_s_half_; }

  /// Q_c(x) as central-basis coordinates.
  IVec central_quantize(const Vec& x) const { return central_.nearest_index(x); }
  Vec central_point(const IVec& coords) const { return central_.point(coords); }
  Vec intermediate_point(const IVec& coords) const { return intermediate_.point(coords); }

  /// lambda is in the boundary set iff it is within 3 rbar_in of its
  /// fractional cell wall, tested as Q_{s/2}((lambda - lambda_half)/gamma) != 0.
  bool in_boundary_set(const IVec& lambda) const;

  Description encode(int which, const Vec& x) const;

  /// Side decoder: the side point itself.
  Vec side_decode(const Description& d) const;
  IVec side_decode_coords(const Description& d) const;  // central-basis coords

  CentralDecodeResult central_decode(const Description& d1, const Description& d2) const;

 private:
  LrdscCodec() = default;

  IVec exact_half(IVec v) const;
  IVec exact_div_mu(IVec v) const;

  Lattice central_, intermediate_;
  LabelingContext labeling_;
  std::vector<IVec> inner_reps_;
  int mu_ = 0;
  std::int64_t s_ = 0;
  std::int64_t k_ = 0;
  double r0_ = 0.0;
  double gamma_ = 0.0;
  double c_ = 0.0;
  bool unsupported_by_theory_ = false;
  double r_in_ = 0, rbar_c_ = 0, rbar_in_ = 0, rbar_s_ = 0, r_s_half_ = 0;
  double g_c_ = 0, g_s_half_ = 0;
  double dec_threshold_ = 0.0;
};

}  // namespace lrdsc
