#include "lrdsc/lattice.hpp"

#include <algorithm>
#include <array>
#include <cmath>
#include <limits>
#include <map>
#include <mutex>

#include "lrdsc/rng.hpp"

namespace lrdsc {

namespace {

constexpr double kTieRelTol = 1e-12;
constexpr int kSearchRadius = 2;  // offsets {-2..2}^n around the rounded base
constexpr int kMaxSearchDim = 8;

// Odometer over {-r..r}^n. Returns false when exhausted.
bool advance(int* off, int n, int r) {
  for (int i = 0; i < n; ++i) {
    if (off[i] < r) {
      ++off[i];
      for (int j = 0; j < i; ++j) off[j] = -r;
      return true;
    }
  }
  return false;
}

bool lex_greater(const double* a, const double* b, int n) {
  for (int i = 0; i < n; ++i) {
    if (a[i] != b[i]) return a[i] > b[i];
  }
  return false;
}

bool lex_greater(const std::int64_t* a, const std::int64_t* b, int n) {
  for (int i = 0; i < n; ++i) {
    if (a[i] != b[i]) return a[i] > b[i];
  }
  return false;
}

bool ivec_lex_less(const IVec& a, const IVec& b) {
  for (Eigen::Index i = 0; i < a.size(); ++i) {
    if (a[i] != b[i]) return a[i] < b[i];
  }
  return false;
}

std::int64_t checked_llround(double v) {
  if (!(std::abs(v) < 9.0e15)) {
    throw std::invalid_argument("lattice coordinate out of integer range");
  }
  return std::llround(v);
}

}  // namespace

Lattice Lattice::integer_grid(int n, double scale) {
  if (n < 1) throw std::invalid_argument("lattice dimension must be positive");
  if (n > kMaxSearchDim) throw std::invalid_argument("lattice dimension too large");
  if (!(scale > 0.0)) throw std::invalid_argument("lattice scale must be positive");
  Lattice lat;
  lat.n_ = n;
  lat.kind_ = LatticeKind::IntegerGrid;
  lat.scale_ = scale;
  lat.basis_ = Mat::Identity(n, n) * scale;
  lat.inv_ = Mat::Identity(n, n) / scale;
  lat.volume_ = std::pow(scale, n);
  IMat g = IMat::Zero(n, n);
  IMat l = IMat::Zero(n, n);
  for (int i = 0; i < n; ++i) {
    g(i, i) = 2;
    l(i, i) = 1;
  }
  lat.gram2_ = g;
  lat.lex_ = l;
  return lat;
}

Lattice Lattice::hexagonal(double scale) {
  if (!(scale > 0.0)) throw std::invalid_argument("lattice scale must be positive");
  Lattice lat;
  lat.n_ = 2;
  lat.kind_ = LatticeKind::Hexagonal;
  lat.scale_ = scale;
  // Base generator rows (1,0) and (1/2, sqrt(3)/2); minimum distance 1.
  Mat b(2, 2);
  b << 1.0, 0.5, 0.0, std::sqrt(3.0) / 2.0;
  lat.basis_ = b * scale;
  lat.inv_ = lat.basis_.inverse();
  lat.volume_ = std::sqrt(3.0) / 2.0 * scale * scale;
  IMat g(2, 2);
  g << 2, 1, 1, 2;  // 2 * base Gram
  IMat l(2, 2);
  l << 2, 1, 0, 1;  // residual components (v1 + v2/2, v2*sqrt(3)/2), rescaled
  lat.gram2_ = g;
  lat.lex_ = l;
  return lat;
}

Lattice Lattice::from_generator_rows(const Mat& rows) {
  if (rows.rows() != rows.cols() || rows.rows() < 1) {
    throw std::invalid_argument("generator must be a square matrix");
  }
  if (rows.rows() > kMaxSearchDim) throw std::invalid_argument("lattice dimension too large");
  if (!rows.allFinite()) throw std::invalid_argument("generator must be finite");
  Lattice lat;
  lat.n_ = static_cast<int>(rows.rows());
  lat.kind_ = LatticeKind::Generic;
  lat.scale_ = 1.0;
  lat.basis_ = rows.transpose();
  const double det = lat.basis_.determinant();
  if (!(std::abs(det) > 0.0)) {
    throw std::invalid_argument("generator matrix is singular");
  }
  lat.inv_ = lat.basis_.inverse();
  lat.volume_ = std::abs(det);
  return lat;
}

Lattice Lattice::make(LatticeKind kind, int n, double scale) {
  switch (kind) {
    case LatticeKind::IntegerGrid:
      return integer_grid(n, scale);
    case LatticeKind::Hexagonal:
      if (n != 2) throw std::invalid_argument("hexagonal lattice requires n == 2");
      return hexagonal(scale);
    case LatticeKind::Generic:
      throw std::invalid_argument("generic lattices need an explicit generator");
  }
  throw std::invalid_argument("unknown lattice kind");
}

Lattice Lattice::scaled(double sigma) const {
  if (!(sigma > 0.0)) throw std::invalid_argument("scale factor must be positive");
  Lattice lat(*this);
  lat.scale_ = scale_ * sigma;
  lat.basis_ = basis_ * sigma;
  lat.inv_ = inv_ / sigma;
  lat.volume_ = volume_ * std::pow(sigma, n_);
  return lat;
}

IVec Lattice::nearest_index(const Vec& x) const {
  if (x.size() != n_) throw std::invalid_argument("dimension mismatch");
  if (!x.allFinite()) throw std::invalid_argument("nearest_index: non-finite input");
  const int n = n_;

  std::array<std::int64_t, kMaxSearchDim> base{};
  for (int i = 0; i < n; ++i) {
    double y = 0.0;
    for (int j = 0; j < n; ++j) y += inv_(i, j) * x[j];
    base[i] = checked_llround(y);
  }

  // Residual of the base point; candidate residuals are res0 - B*off.
  std::array<double, kMaxSearchDim> res0{};
  for (int i = 0; i < n; ++i) {
    double p = 0.0;
    for (int j = 0; j < n; ++j) p += basis_(i, j) * static_cast<double>(base[j]);
    res0[i] = x[i] - p;
  }

  std::array<int, kMaxSearchDim> off{};
  std::array<double, kMaxSearchDim> res{}, best_res{};
  std::array<int, kMaxSearchDim> best_off{};

  // Pass 1: smallest squared distance over the candidate window.
  for (int i = 0; i < n; ++i) off[i] = -kSearchRadius;
  double dmin = std::numeric_limits<double>::infinity();
  do {
    double d2 = 0.0;
    for (int i = 0; i < n; ++i) {
      double r = res0[i];
      for (int j = 0; j < n; ++j) r -= basis_(i, j) * off[j];
      res[i] = r;
      d2 += r * r;
    }
    if (d2 < dmin) dmin = d2;
  } while (advance(off.data(), n, kSearchRadius));

  // Pass 2: among near-ties, pick the lexicographically largest residual.
  const double cut = dmin + kTieRelTol * dmin;
  for (int i = 0; i < n; ++i) off[i] = -kSearchRadius;
  bool have = false;
  do {
    double d2 = 0.0;
    for (int i = 0; i < n; ++i) {
      double r = res0[i];
      for (int j = 0; j < n; ++j) r -= basis_(i, j) * off[j];
      res[i] = r;
      d2 += r * r;
    }
    if (d2 <= cut && (!have || lex_greater(res.data(), best_res.data(), n))) {
      have = true;
      best_res = res;
      best_off = off;
    }
  } while (advance(off.data(), n, kSearchRadius));

  IVec out(n);
  for (int i = 0; i < n; ++i) out[i] = base[i] + best_off[i];
  return out;
}

IVec Lattice::quantize_coords(const IVec& v, std::int64_t m) const {
  if (m < 1) throw std::invalid_argument("sublattice multiplier must be >= 1");
  if (v.size() != n_) throw std::invalid_argument("dimension mismatch");
  const int n = n_;

  std::array<std::int64_t, kMaxSearchDim> base{};
  for (int i = 0; i < n; ++i) {
    base[i] = checked_llround(static_cast<double>(v[i]) / static_cast<double>(m));
  }

  if (gram2_) {
    const IMat& g = *gram2_;
    const IMat& lx = *lex_;
    std::array<int, kMaxSearchDim> off{};
    std::array<std::int64_t, kMaxSearchDim> w{}, lw{}, best_lw{};
    std::array<int, kMaxSearchDim> best_off{};

    for (int i = 0; i < n; ++i) off[i] = -kSearchRadius;
    std::int64_t dmin = std::numeric_limits<std::int64_t>::max();
    bool have = false;
    do {
      for (int i = 0; i < n; ++i) w[i] = v[i] - m * (base[i] + off[i]);
      std::int64_t d2 = 0;
      for (int i = 0; i < n; ++i) {
        std::int64_t s = 0;
        for (int j = 0; j < n; ++j) s += g(i, j) * w[j];
        d2 += w[i] * s;
      }
      if (d2 < dmin) {
        dmin = d2;
        have = false;
      }
      if (d2 == dmin) {
        for (int i = 0; i < n; ++i) {
          std::int64_t s = 0;
          for (int j = 0; j < n; ++j) s += lx(i, j) * w[j];
          lw[i] = s;
        }
        if (!have || lex_greater(lw.data(), best_lw.data(), n)) {
          have = true;
          best_lw = lw;
          best_off = off;
        }
      }
    } while (advance(off.data(), n, kSearchRadius));

    IVec out(n);
    for (int i = 0; i < n; ++i) out[i] = base[i] + best_off[i];
    return out;
  }

  // Generic fallback: real arithmetic in the ambient space.
  const Vec x = basis_ * v.cast<double>();
  return scaled(static_cast<double>(m)).nearest_index(x);
}

IVec Lattice::quantize_coords(const IVec& v, const IMat& R) const {
  if (R.rows() != n_ || R.cols() != n_) throw std::invalid_argument("bad sublattice matrix");
  const int n = n_;
  const Mat rinv = R.cast<double>().inverse();
  if (!rinv.allFinite()) throw std::invalid_argument("singular sublattice matrix");

  IVec base(n);
  for (int i = 0; i < n; ++i) {
    double y = 0.0;
    for (int j = 0; j < n; ++j) y += rinv(i, j) * static_cast<double>(v[j]);
    base[i] = checked_llround(y);
  }

  std::array<int, kMaxSearchDim> off{};
  for (int i = 0; i < n; ++i) off[i] = -kSearchRadius;
  IVec t(n), w(n), best(n);

  if (gram2_) {
    const IMat& g = *gram2_;
    const IMat& lx = *lex_;
    std::int64_t dmin = std::numeric_limits<std::int64_t>::max();
    bool have = false;
    IVec best_lw(n);
    do {
      for (int i = 0; i < n; ++i) t[i] = base[i] + off[i];
      w = v - R * t;
      const std::int64_t d2 = w.dot(g * w);
      if (d2 < dmin) {
        dmin = d2;
        have = false;
      }
      if (d2 == dmin) {
        IVec lw = lx * w;
        if (!have || ivec_lex_less(best_lw, lw)) {
          have = true;
          best = t;
          best_lw = lw;
        }
      }
    } while (advance(off.data(), n, kSearchRadius));
    return best;
  }

  // Real-arithmetic fallback with the tolerance tie rule.
  const Vec x = basis_ * v.cast<double>();
  const Mat sub_basis = basis_ * R.cast<double>();
  double dmin = std::numeric_limits<double>::infinity();
  do {
    for (int i = 0; i < n; ++i) t[i] = base[i] + off[i];
    const double d2 = (x - sub_basis * t.cast<double>()).squaredNorm();
    if (d2 < dmin) dmin = d2;
  } while (advance(off.data(), n, kSearchRadius));
  const double cut = dmin + kTieRelTol * dmin;
  for (int i = 0; i < n; ++i) off[i] = -kSearchRadius;
  bool have = false;
  Vec best_res(n);
  do {
    for (int i = 0; i < n; ++i) t[i] = base[i] + off[i];
    const Vec res = x - sub_basis * t.cast<double>();
    if (res.squaredNorm() <= cut) {
      bool better = !have;
      if (have) {
        for (int i = 0; i < n; ++i) {
          if (res[i] != best_res[i]) {
            better = res[i] > best_res[i];
            break;
          }
        }
      }
      if (better) {
        have = true;
        best = t;
        best_res = res;
      }
    }
  } while (advance(off.data(), n, kSearchRadius));
  return best;
}

std::pair<double, double> second_moment_mc(const Lattice& lat, std::uint64_t samples,
                                           std::uint64_t seed) {
  if (samples < 2) throw std::invalid_argument("need at least 2 samples");
  const int n = lat.dim();
  RngStream rng(seed);
  double sum = 0.0, sum2 = 0.0;
  Vec u(n);
  for (std::uint64_t k = 0; k < samples; ++k) {
    for (int i = 0; i < n; ++i) u[i] = rng.uniform();
    // Uniform on a fundamental parallelepiped; mod folds it onto the cell.
    const double r2 = lat.mod(lat.basis() * u).squaredNorm();
    sum += r2;
    sum2 += r2 * r2;
  }
  const double count = static_cast<double>(samples);
  const double mean = sum / count;
  const double var = std::max(0.0, sum2 / count - mean * mean);
  const double denom = n * std::pow(lat.volume(), 2.0 / n);
  const double g = mean / denom;
  const double half = 2.5758293035489004 * std::sqrt(var / count) / denom;
  return {g, half};
}

namespace {

// Cached scale-free normalized second moment of the hexagonal cell, keyed by
// Monte Carlo budget.
std::pair<double, double> hexagonal_g(const GeometryOptions& opts) {
  static std::mutex mu;
  static std::map<std::pair<std::uint64_t, std::uint64_t>, std::pair<double, double>> cache;
  const auto key = std::make_pair(opts.mc_samples, opts.mc_seed);
  {
    std::lock_guard<std::mutex> lock(mu);
    auto it = cache.find(key);
    if (it != cache.end()) return it->second;
  }
  const auto val = second_moment_mc(Lattice::hexagonal(1.0), opts.mc_samples, opts.mc_seed);
  std::lock_guard<std::mutex> lock(mu);
  cache[key] = val;
  return val;
}

double min_vector_norm(const Lattice& lat) {
  const int n = lat.dim();
  std::array<int, kMaxSearchDim> off{};
  for (int i = 0; i < n; ++i) off[i] = -4;
  IVec k(n);
  double best = std::numeric_limits<double>::infinity();
  do {
    bool zero = true;
    for (int i = 0; i < n; ++i) {
      k[i] = off[i];
      if (off[i] != 0) zero = false;
    }
    if (!zero) best = std::min(best, lat.point(k).norm());
  } while (advance(off.data(), n, 4));
  return best;
}

}  // namespace

LatticeGeometry Lattice::geometry(const GeometryOptions& opts) const {
  LatticeGeometry g;
  g.volume = volume_;
  switch (kind_) {
    case LatticeKind::IntegerGrid:
      g.covering_radius = scale_ * std::sqrt(static_cast<double>(n_)) / 2.0;
      g.inscribed_radius = scale_ / 2.0;
      g.second_moment = 1.0 / 12.0;
      g.second_moment_error = 0.0;
      return g;
    case LatticeKind::Hexagonal: {
      g.covering_radius = scale_ / std::sqrt(3.0);
      g.inscribed_radius = scale_ / 2.0;
      const auto [sm, err] = hexagonal_g(opts);
      g.second_moment = sm;
      g.second_moment_error = err;
      return g;
    }
    case LatticeKind::Generic:
      break;
  }
  if (n_ == 1) {
    const double len = std::abs(basis_(0, 0));
    g.covering_radius = len / 2.0;
    g.inscribed_radius = len / 2.0;
    g.second_moment = 1.0 / 12.0;
    g.second_moment_error = 0.0;
    return g;
  }
  if (n_ == 2) {
    const auto poly = voronoi_cell_polygon(*this);
    double rmax = 0.0;
    for (const auto& v : poly) rmax = std::max(rmax, v.norm());
    g.covering_radius = rmax;
    g.inscribed_radius = min_vector_norm(*this) / 2.0;
    const auto [sm, err] = second_moment_mc(*this, opts.mc_samples, opts.mc_seed);
    g.second_moment = sm;
    g.second_moment_error = err;
    return g;
  }
  if (n_ <= 4) {
    g.inscribed_radius = min_vector_norm(*this) / 2.0;
    // Covering radius: Monte Carlo sup estimate (see header).
    RngStream rng(opts.mc_seed ^ 0xc0ffeeULL);
    const std::uint64_t count = std::min<std::uint64_t>(opts.mc_samples, 1'000'000);
    double rmax = 0.0;
    Vec u(n_);
    for (std::uint64_t k = 0; k < count; ++k) {
      for (int i = 0; i < n_; ++i) u[i] = rng.uniform();
      rmax = std::max(rmax, mod(basis_ * u).norm());
    }
    g.covering_radius = rmax;
    const auto [sm, err] = second_moment_mc(*this, opts.mc_samples, opts.mc_seed);
    g.second_moment = sm;
    g.second_moment_error = err;
    return g;
  }
  throw std::invalid_argument("geometry unsupported for generic lattices with n > 4");
}

NestedPair make_nested_pair(const Lattice& fine, const Lattice& coarse) {
  if (!fine.same_dimension(coarse)) throw std::invalid_argument("dimension mismatch");
  const int n = fine.dim();
  const Mat rreal = fine.inverse_basis() * coarse.basis();
  IMat r(n, n);
  for (int i = 0; i < n; ++i) {
    for (int j = 0; j < n; ++j) {
      const double e = rreal(i, j);
      const double rounded = std::round(e);
      if (std::abs(e - rounded) > 1e-9 * std::max(1.0, std::abs(e))) {
        throw std::invalid_argument("not nested: coarse basis has non-integer fine coordinates");
      }
      r(i, j) = static_cast<std::int64_t>(rounded);
    }
  }
  const double det = std::abs(r.cast<double>().determinant());
  const double ratio = coarse.volume() / fine.volume();
  if (std::abs(det - ratio) > 1e-9 * ratio || det < 1.0) {
    throw std::invalid_argument("not nested: volume ratio is not the sublattice index");
  }
  NestedPair pair;
  pair.fine = fine;
  pair.coarse = coarse;
  pair.coarse_in_fine = r;
  pair.index = std::llround(det);
  return pair;
}

std::vector<IVec> coset_representatives(const NestedPair& pair) {
  if (pair.index > 100'000) throw std::invalid_argument("sublattice index too large to enumerate");
  const int n = pair.fine.dim();
  const auto gf = pair.fine.geometry();
  const auto gc = pair.coarse.geometry();
  const double radius = gc.covering_radius + gf.covering_radius;

  // Per-coordinate window bound from the rows of the inverse fine basis.
  std::vector<int> bound(n);
  double volume_guard = 1.0;
  for (int i = 0; i < n; ++i) {
    const double rn = pair.fine.inverse_basis().row(i).norm();
    bound[i] = static_cast<int>(std::ceil(rn * radius)) + 1;
    volume_guard *= 2.0 * bound[i] + 1.0;
  }
  if (volume_guard > 5e7) throw std::invalid_argument("coset enumeration window too large");

  std::vector<IVec> reps;
  std::vector<int> off(n);
  for (int i = 0; i < n; ++i) off[i] = -bound[i];
  IVec k(n);
  const IVec zero = IVec::Zero(n);
  while (true) {
    for (int i = 0; i < n; ++i) k[i] = off[i];
    if (pair.fine.quantize_coords(k, pair.coarse_in_fine) == zero) reps.push_back(k);
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
  if (static_cast<std::int64_t>(reps.size()) != pair.index) {
    throw std::runtime_error("coset enumeration produced " + std::to_string(reps.size()) +
                             " representatives, expected " + std::to_string(pair.index));
  }
  std::sort(reps.begin(), reps.end(), ivec_lex_less);
  return reps;
}

IVec coset_representative_of(const NestedPair& pair, const IVec& lambda) {
  const IVec t = pair.fine.quantize_coords(lambda, pair.coarse_in_fine);
  return lambda - pair.coarse_in_fine * t;
}

std::vector<Eigen::Vector2d> voronoi_cell_polygon(const Lattice& lat) {
  if (lat.dim() != 2) throw std::invalid_argument("voronoi_cell_polygon requires n == 2");
  const double colmax = std::max(lat.basis().col(0).norm(), lat.basis().col(1).norm());

  // Start from a big box, clip by the bisector halfplane of each neighbor.
  const double l = 4.0 * colmax;
  std::vector<Eigen::Vector2d> poly = {{-l, -l}, {l, -l}, {l, l}, {-l, l}};
  IVec k(2);
  for (int a = -4; a <= 4; ++a) {
    for (int b = -4; b <= 4; ++b) {
      if (a == 0 && b == 0) continue;
      k[0] = a;
      k[1] = b;
      const Eigen::Vector2d v = lat.point(k);
      const double c = 0.5 * v.squaredNorm();
      // Clip against <x, v> <= c (Sutherland-Hodgman).
      std::vector<Eigen::Vector2d> out;
      const std::size_t m = poly.size();
      for (std::size_t i = 0; i < m; ++i) {
        const Eigen::Vector2d& p = poly[i];
        const Eigen::Vector2d& q = poly[(i + 1) % m];
        const double dp = p.dot(v) - c;
        const double dq = q.dot(v) - c;
        if (dp <= 0) out.push_back(p);
        if ((dp < 0 && dq > 0) || (dp > 0 && dq < 0)) {
          const double t = dp / (dp - dq);
          out.push_back(p + t * (q - p));
        }
      }
      poly.swap(out);
      if (poly.empty()) throw std::runtime_error("voronoi cell clipping collapsed");
    }
  }
  return poly;
}

double polygon_area(const std::vector<Eigen::Vector2d>& poly) {
  double s = 0.0;
  const std::size_t m = poly.size();
  for (std::size_t i = 0; i < m; ++i) {
    const auto& p = poly[i];
    const auto& q = poly[(i + 1) % m];
    s += p.x() * q.y() - q.x() * p.y();
  }
  return 0.5 * s;
}

double polygon_second_moment(const std::vector<Eigen::Vector2d>& poly) {
  double s = 0.0;
  const std::size_t m = poly.size();
  for (std::size_t i = 0; i < m; ++i) {
    const auto& p = poly[i];
    const auto& q = poly[(i + 1) % m];
    const double cross = p.x() * q.y() - q.x() * p.y();
    s += cross * (p.x() * p.x() + p.x() * q.x() + q.x() * q.x() + p.y() * p.y() +
                  p.y() * q.y() + q.y() * q.y());
  }
  return s / 12.0;
}

namespace {

double segment_distance(const Eigen::Vector2d& p, const Eigen::Vector2d& a,
                        const Eigen::Vector2d& b) {
  const Eigen::Vector2d ab = b - a;
  const double t = std::clamp(ab.dot(p - a) / ab.squaredNorm(), 0.0, 1.0);
  return (p - (a + t * ab)).norm();
}

double polygon_distance(const std::vector<Eigen::Vector2d>& pa,
                        const std::vector<Eigen::Vector2d>& pb) {
  double best = std::numeric_limits<double>::infinity();
  const std::size_t ma = pa.size(), mb = pb.size();
  for (std::size_t i = 0; i < ma; ++i) {
    for (std::size_t j = 0; j < mb; ++j) {
      best = std::min(best, segment_distance(pa[i], pb[j], pb[(j + 1) % mb]));
      best = std::min(best, segment_distance(pb[j], pa[i], pa[(i + 1) % ma]));
    }
  }
  return best;
}

}  // namespace

Separation nonadjacent_separation(const Lattice& lat) {
  const int n = lat.dim();
  const bool supported =
      (lat.kind() == LatticeKind::IntegerGrid && n <= 2) ||
      lat.kind() == LatticeKind::Hexagonal ||
      (lat.kind() == LatticeKind::Generic && n <= 2);
  const auto geo = lat.geometry();

  if (supported && n == 1) {
    // Cells are intervals of length scale; cells k >= 2 apart are separated
    // by (|k| - 1) * scale.
    const double len = std::abs(lat.basis()(0, 0));
    return {len, true};
  }
  if (supported && n == 2) {
    const auto cell = voronoi_cell_polygon(lat);
    const double touch_tol = 1e-9 * geo.covering_radius;
    double best = std::numeric_limits<double>::infinity();
    IVec k(2);
    for (int a = -6; a <= 6; ++a) {
      for (int b = -6; b <= 6; ++b) {
        if (a == 0 && b == 0) continue;
        k[0] = a;
        k[1] = b;
        const Eigen::Vector2d v = lat.point(k);
        if (v.norm() > best + 2.0 * geo.covering_radius) continue;
        std::vector<Eigen::Vector2d> shifted = cell;
        for (auto& p : shifted) p += v;
        const double d = polygon_distance(cell, shifted);
        if (d > touch_tol) best = std::min(best, d);
      }
    }
    return {best, true};
  }

  // Conservative fallback: treat every pair with center distance <= 2 rbar
  // as possibly adjacent and bound the rest by center distance - 2 rbar.
  std::array<int, kMaxSearchDim> off{};
  for (int i = 0; i < n; ++i) off[i] = -4;
  IVec k(n);
  double best = std::numeric_limits<double>::infinity();
  do {
    bool zero = true;
    for (int i = 0; i < n; ++i) {
      k[i] = off[i];
      if (off[i] != 0) zero = false;
    }
    if (!zero) {
      const double d = lat.point(k).norm();
      if (d > 2.0 * geo.covering_radius) best = std::min(best, d - 2.0 * geo.covering_radius);
    }
  } while (advance(off.data(), n, 4));
  return {best, false};
}

}  // namespace lrdsc
