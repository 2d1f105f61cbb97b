#pragma once

#include <Eigen/Dense>

#include <cstdint>
#include <optional>
#include <stdexcept>
#include <string>
#include <utility>
#include <vector>

namespace lrdsc {

using Vec = Eigen::VectorXd;
using Mat = Eigen::MatrixXd;
using IVec = Eigen::Matrix<std::int64_t, Eigen::Dynamic, 1>;
using IMat = Eigen::Matrix<std::int64_t, Eigen::Dynamic, Eigen::Dynamic>;

enum class LatticeKind { IntegerGrid, Hexagonal, Generic };

/// Cached Voronoi geometry of a lattice.
///
/// `second_moment` is the dimensionless normalized second moment of the
/// Voronoi cell of the origin; `second_moment_error` is a 99% Monte Carlo
/// half-width (0 when the value is closed form). For generic lattices in
/// dimension 3 or 4 the covering radius is itself a Monte Carlo estimate.
struct LatticeGeometry {
  double volume = 0.0;
  double covering_radius = 0.0;
  double inscribed_radius = 0.0;
  double second_moment = 0.0;
  double second_moment_error = 0.0;
};

struct GeometryOptions {
  std::uint64_t mc_samples = 10'000'000;
  std::uint64_t mc_seed = 0x5eedULL;
};

/// A full-rank lattice given by a generator matrix, with deterministic
/// nearest-point quantization.
///
/// Ties in the nearest-point search are broken by comparing squared
/// distances with relative tolerance 1e-12 and, among tied candidates,
/// choosing the point whose residual x - lambda is lexicographically
/// largest. The rule depends only on the residual, so quantization commutes
/// with lattice translations.
///
/// For the integer-grid and hexagonal kinds the Gram matrix is rational, and
/// quantization of lattice elements given by integer coordinates
/// (`quantize_coords`) is carried out in exact integer arithmetic; the tie
/// rule then applies with no tolerance at all.
class Lattice {
 public:
  /// Empty lattice; only assignment is meaningful before a factory call.
  Lattice() = default;

  static Lattice integer_grid(int n, double scale);
  static Lattice hexagonal(double scale);
  /// Generic lattice; `rows` holds the generator vectors as matrix rows.
  static Lattice from_generator_rows(const Mat& rows);
  /// Config-file entry point: kind + dimension + scale.
  static Lattice make(LatticeKind kind, int n, double scale);

  int dim() const { return n_; }
  LatticeKind kind() const { return kind_; }
  double scale() const { return scale_; }
  /// Basis vectors as matrix columns (points are basis() * integer coords).
  const Mat& basis() const { return basis_; }
  const Mat& inverse_basis() const { return inv_; }
  Mat generator_rows() const { return basis_.transpose(); }
  double volume() const { return volume_; }

  /// sigma * Lambda. The normalized second moment is unchanged.
  Lattice scaled(double sigma) const;

  bool same_dimension(const Lattice& other) const { return n_ == other.n_; }

  Vec point(const IVec& coords) const { return basis_ * coords.cast<double>(); }

  /// Nearest lattice point to x, as integer coordinates in this basis.
  IVec nearest_index(const Vec& x) const;
  Vec nearest_point(const Vec& x) const { return point(nearest_index(x)); }
  /// x mod Lambda = x - Q(x); lies in the Voronoi cell of the origin.
  Vec mod(const Vec& x) const { return x - nearest_point(x); }

  /// Nearest point of the sublattice m*Lambda to the lattice element with
  /// coordinates v, returned as coordinates of the sublattice (the selected
  /// point has coordinates m * result in this basis). Exact for kinds with
  /// an integral Gram matrix.
  IVec quantize_coords(const IVec& v, std::int64_t m) const;
  /// Same, for the sublattice spanned by basis() * R (R integral, columns).
  IVec quantize_coords(const IVec& v, const IMat& R) const;

  /// True when coordinate-space quantization uses exact integer arithmetic.
  bool has_exact_coords() const { return gram2_.has_value(); }

  LatticeGeometry geometry(const GeometryOptions& opts = {}) const;

 private:
  int n_ = 0;
  LatticeKind kind_ = LatticeKind::Generic;
  double scale_ = 1.0;
  Mat basis_;
  Mat inv_;
  double volume_ = 0.0;
  // Scale-free exact machinery for rational-Gram kinds: gram2_ = 2 * base
  // Gram; lex_ maps residual coordinates to integers ordered like the
  // real-space lexicographic comparison.
  std::optional<IMat> gram2_;
  std::optional<IMat> lex_;
};

/// Nested pair: coarse is a sublattice of fine. `coarse_in_fine` expresses
/// the coarse basis in fine coordinates (integral), and `index` is the
/// volume ratio = number of cosets.
struct NestedPair {
  Lattice fine;
  Lattice coarse;
  IMat coarse_in_fine;
  std::int64_t index = 0;
};

/// Builds a NestedPair, rejecting pairs that fail the sublattice test
/// (non-integer coordinates beyond 1e-9) or whose volume ratio is not an
/// integer within 1e-9 relative.
NestedPair make_nested_pair(const Lattice& fine, const Lattice& coarse);

/// Coset representatives of the coarse lattice relative to the fine one,
/// using the Voronoi cell of the coarse origin as fundamental cell.
/// Returns exactly pair.index fine-basis coordinate vectors, sorted.
std::vector<IVec> coset_representatives(const NestedPair& pair);

/// Representative of lambda (fine coords) in coset_representatives(pair).
IVec coset_representative_of(const NestedPair& pair, const IVec& lambda);

struct Separation {
  double value = 0.0;
  /// False when only the conservative center-distance bound was available.
  bool exact = true;
};

/// Smallest distance between points in the closures of two non-adjacent
/// Voronoi cells. Exact (neighbor-shell polygon enumeration) for
/// integer-grid n<=2 and hexagonal; otherwise a flagged bound.
Separation nonadjacent_separation(const Lattice& lat);

/// Monte Carlo estimate of the normalized second moment with a 99%
/// half-width; exposed separately so scale invariance can be tested with
/// independent sampling budgets.
std::pair<double, double> second_moment_mc(const Lattice& lat,
                                           std::uint64_t samples,
                                           std::uint64_t seed);

/// Voronoi cell of the origin as a convex polygon (n == 2 only), vertices
/// counter-clockwise.
std::vector<Eigen::Vector2d> voronoi_cell_polygon(const Lattice& lat);

/// Exact integral of ||x||^2 over a polygon (Green's theorem form).
double polygon_second_moment(const std::vector<Eigen::Vector2d>& poly);
double polygon_area(const std::vector<Eigen::Vector2d>& poly);

}  // namespace lrdsc
