#pragma once

#include <vector>

#include "lrdsc/lattice.hpp"

namespace lrdsc {

/// Decomposition of an intermediate-lattice point lambda relative to the
/// fractional and side lattices: lambda_half = Q_{s/2}(lambda),
/// side = Q_s(lambda_half), tau = lambda_half - side. All vectors are
/// integer coordinates in the intermediate basis.
struct LabelDecomposition {
  IVec lambda_half;
  IVec side;
  IVec tau;
};

/// The labeling construction on the nested triple Lambda_s = mu * Lambda_in
/// with fractional lattice Lambda_{s/2} = (mu/2) * Lambda_in.
///
/// T is the set of fractional points inside the side Voronoi cell of the
/// origin (2^n coset representatives of Lambda_s in Lambda_{s/2}); U is the
/// set of intermediate points in the union of the fractional cells of T
/// (mu^n coset representatives of Lambda_s in Lambda_in). Both are stored as
/// integer coordinates in the intermediate basis, so the label maps are
/// computed without floating-point drift.
class LabelingContext {
 public:
  /// `side` must equal mu * intermediate exactly; mu must be even.
  static LabelingContext build(const Lattice& side, const Lattice& intermediate, int mu);

  const Lattice& side() const { return side_; }
  const Lattice& fractional() const { return fractional_; }
  const Lattice& intermediate() const { return intermediate_; }
  int mu() const { return mu_; }
  int dim() const { return intermediate_.dim(); }
  std::int64_t index_m() const { return static_cast<std::int64_t>(reps_u_.size()); }

  const std::vector<IVec>& reps_t() const { return reps_t_; }
  const std::vector<IVec>& reps_u() const { return reps_u_; }

  /// Real-space embedding of intermediate coordinates.
  Vec point(const IVec& coords) const { return intermediate_.point(coords); }

  /// Q_{s/2} of an intermediate point, as intermediate coordinates
  /// (a multiple of mu/2). Exact for integer-grid and hexagonal kinds.
  IVec quantize_fractional(const IVec& v) const {
    return static_cast<std::int64_t>(mu_ / 2) * intermediate_.quantize_coords(v, mu_ / 2);
  }
  /// Q_s of an intermediate point, as intermediate coordinates.
  IVec quantize_side(const IVec& v) const {
    return static_cast<std::int64_t>(mu_) * intermediate_.quantize_coords(v, mu_);
  }

  LabelDecomposition decompose(const IVec& lambda) const;

  /// Label map: which is 1 or 2. lambda is given as intermediate
  /// coordinates; the result is a side-lattice point in intermediate
  /// coordinates (all entries multiples of mu).
  IVec beta(int which, const IVec& lambda) const;

  /// Label map on a real-space point; rejects points that are not in the
  /// intermediate lattice (coordinates further than 1e-9 from integers).
  IVec beta_at_point(int which, const Vec& x) const;

  /// beta_which^{-1}(0) = { lambda - beta(lambda) : lambda in U }; exactly
  /// M distinct intermediate points.
  std::vector<IVec> beta_preimage_zero(int which) const;

  /// Empty context; only assignment is meaningful before build().
  LabelingContext() = default;

 private:
  Lattice side_, fractional_, intermediate_;
  int mu_ = 0;
  std::vector<IVec> reps_t_;
  std::vector<IVec> reps_u_;
};

}  // namespace lrdsc
