#include "lrdsc/theory.hpp"

#include <cmath>
#include <stdexcept>

namespace lrdsc {

namespace {

constexpr double kTwoPiE = 17.079468445347132;

// Shared 2h - (1/2) log2((2 pi e)^2 d_s d_c) term, so the two sum-rate
// formulas differ by an exactly representable constant.
double sum_rate_base(double h_bits, double d_s, double d_c) {
  if (!(d_s > 0.0) || !(d_c > 0.0)) throw std::invalid_argument("distortions must be positive");
  return 2.0 * h_bits - 0.5 * std::log2(kTwoPiE * kTwoPiE * d_s * d_c);
}

}  // namespace

double r_md(double h_bits, double d_s, double d_c) {
  return sum_rate_base(h_bits, d_s, d_c) - 1.0;
}

double r_rc(double h_bits, double d_s, double d_c) {
  return sum_rate_base(h_bits, d_s, d_c) - 0.5;
}

LmmseRates lmmse_rates(double s2x, double s2z1, double s2z2, double s2zp1, double s2zp2) {
  for (double v : {s2x, s2z1, s2z2, s2zp1, s2zp2}) {
    if (!(v > 0.0)) throw std::invalid_argument("variances must be positive");
  }
  LmmseRates r;
  r.d_s1 = 1.0 / (1.0 / s2x + 1.0 / (s2z1 + s2zp1));
  r.d_s2 = 1.0 / (1.0 / s2x + 1.0 / (s2z2 + s2zp2));
  r.d_c = 1.0 / (1.0 / s2x + 1.0 / s2z1 + 1.0 / s2z2);
  return r;
}

Prediction predict(const PredictionInputs& in) {
  Prediction p;
  const double n = static_cast<double>(in.n);
  const double m_nu_s = static_cast<double>(in.big_m) * in.nu_s;
  p.d_side_pred = 0.25 * in.g_s_half * std::pow(m_nu_s, 2.0 / n);
  p.d_central_pred_low = in.g_c * std::pow(in.nu_c, 2.0 / n);
  const double worst = 16.0 * in.mu * in.rbar_s;
  p.d_central_pred_high = p.d_central_pred_low + in.tail_prob * worst * worst / n;

  const double log2k = std::log2(static_cast<double>(in.k_index));
  p.rate_pred = in.h1_bits + in.h2_bits -
                (2.0 / n) * std::log2(in.nu_s / std::sqrt(static_cast<double>(in.k_index))) +
                in.h_cond_u_bits / n;
  if (in.r0 <= in.r_c) {
    p.hu_cond_bound =
        1.0 + (1.0 - std::pow(1.0 - in.r0 / in.r_c, n) + in.tail_prob) * log2k;
  } else {
    p.hu_cond_bound = log2k;
  }

  const double h_mean = 0.5 * (in.h1_bits + in.h2_bits);
  p.r_md = r_md(h_mean, p.d_side_pred, p.d_central_pred_low);
  p.r_rc = r_rc(h_mean, p.d_side_pred, p.d_central_pred_low);
  return p;
}

double box_volume(const Vec& widths) {
  double v = 1.0;
  for (Eigen::Index i = 0; i < widths.size(); ++i) v *= widths[i];
  return v;
}

Vec box_first_moment(const Vec& center, const Vec& widths) {
  // int_box x dx = center * volume, by direct antiderivatives.
  Vec m(center.size());
  const double vol = box_volume(widths);
  for (Eigen::Index i = 0; i < center.size(); ++i) m[i] = center[i] * vol;
  return m;
}

double box_second_moment(const Vec& center, const Vec& widths) {
  // int_box ||x||^2 dx as a sum of per-axis cubic antiderivatives.
  const Eigen::Index n = center.size();
  const double vol = box_volume(widths);
  double total = 0.0;
  for (Eigen::Index j = 0; j < n; ++j) {
    const double a = center[j] - widths[j] / 2.0;
    const double b = center[j] + widths[j] / 2.0;
    const double axis = (b * b * b - a * a * a) / 3.0;
    total += axis * (vol / widths[j]);
  }
  return total;
}

namespace {

// Integral of ||x||^2 over the fine Voronoi cell centered at a lattice
// point, with a closed form where available.
struct CellIntegrator {
  const Lattice* fine = nullptr;
  bool closed_form = false;
  Vec widths;                            // integer-grid cells
  std::vector<Eigen::Vector2d> polygon;  // n == 2 cells

  explicit CellIntegrator(const Lattice& lat) : fine(&lat) {
    if (lat.kind() == LatticeKind::IntegerGrid) {
      closed_form = true;
      widths = Vec::Constant(lat.dim(), lat.scale());
    } else if (lat.dim() == 2) {
      closed_form = true;
      polygon = voronoi_cell_polygon(lat);
    }
  }

  double integrate(const Vec& center) const {
    if (fine->kind() == LatticeKind::IntegerGrid) return box_second_moment(center, widths);
    std::vector<Eigen::Vector2d> cell = polygon;
    for (auto& v : cell) v += Eigen::Vector2d(center[0], center[1]);
    return polygon_second_moment(cell);
  }

  // Normalized second moment of the cell by the same quadrature route, so
  // both sides of the nested-sum identity share one error budget.
  std::pair<double, double> cell_g(std::uint64_t mc_samples, std::uint64_t mc_seed) const {
    const int n = fine->dim();
    if (closed_form) {
      const double g =
          integrate(Vec::Zero(n)) / (n * std::pow(fine->volume(), 1.0 + 2.0 / n));
      return {g, 1e-12 * std::max(1.0, g)};
    }
    return second_moment_mc(*fine, mc_samples, mc_seed);
  }
};

}  // namespace

LemmaOracleResult nested_sum_oracle(const NestedPair& pair) {
  if (pair.index > 10'000) {
    throw std::invalid_argument("nested_sum_oracle: index too large for enumeration");
  }
  const int n = pair.fine.dim();
  const auto reps = coset_representatives(pair);

  LemmaOracleResult res;
  for (const auto& rep : reps) res.lhs += pair.fine.point(rep).squaredNorm();

  const CellIntegrator cells(pair.fine);
  double integral = 0.0;
  double err = 0.0;
  if (cells.closed_form) {
    for (const auto& rep : reps) integral += cells.integrate(pair.fine.point(rep));
    err = 1e-12 * std::max(1.0, std::abs(integral));
  } else {
    // Monte Carlo over each cell with a declared budget.
    const std::uint64_t per_cell = 200'000;
    const auto [g_cell, g_err] = second_moment_mc(pair.fine, per_cell, 0x715eedULL);
    const double cell_base = g_cell * n * std::pow(pair.fine.volume(), 1.0 + 2.0 / n);
    for (const auto& rep : reps) {
      // shift identity route is closed form given the cell integral
      const Vec c = pair.fine.point(rep);
      integral += cell_base + c.squaredNorm() * pair.fine.volume();
    }
    err = g_err * n * std::pow(pair.fine.volume(), 1.0 + 2.0 / n) * static_cast<double>(pair.index);
  }

  const double nu1 = pair.fine.volume();
  const double nu2 = pair.coarse.volume();
  const double g_union = integral / (n * std::pow(nu2, 1.0 + 2.0 / n));
  const double g1 = pair.fine.geometry().second_moment;
  res.rhs = n * static_cast<double>(pair.index) *
            (g_union * std::pow(nu2, 2.0 / n) - g1 * std::pow(nu1, 2.0 / n));
  res.quadrature_error = err + pair.fine.geometry().second_moment_error *
                                   static_cast<double>(n * pair.index) * std::pow(nu1, 2.0 / n);
  return res;
}

std::vector<ShapeProbePoint> shape_lemma_probe(const Lattice& fine,
                                               const std::vector<std::int64_t>& ratios) {
  if (ratios.empty()) throw std::invalid_argument("empty ratio ladder");
  for (std::size_t i = 1; i < ratios.size(); ++i) {
    if (ratios[i] <= ratios[i - 1]) throw std::invalid_argument("ratios must increase");
  }
  std::vector<ShapeProbePoint> out;
  const int n = fine.dim();
  const CellIntegrator cells(fine);
  for (auto ratio : ratios) {
    const Lattice coarse = fine.scaled(static_cast<double>(ratio));
    const auto pair = make_nested_pair(fine, coarse);
    const auto reps = coset_representatives(pair);
    ShapeProbePoint pt;
    pt.ratio = ratio;
    double integral = 0.0;
    if (cells.closed_form) {
      for (const auto& rep : reps) integral += cells.integrate(fine.point(rep));
      pt.error = 1e-12 * std::max(1.0, std::abs(integral));
    } else {
      const auto [g_cell, g_err] = second_moment_mc(fine, 200'000, 0x715eedULL);
      const double cell_base = g_cell * n * std::pow(fine.volume(), 1.0 + 2.0 / n);
      for (const auto& rep : reps) {
        integral += cell_base + fine.point(rep).squaredNorm() * fine.volume();
      }
      pt.error = g_err;
    }
    pt.g_union = integral / (n * std::pow(coarse.volume(), 1.0 + 2.0 / n));
    pt.g_coarse = coarse.geometry().second_moment;
    out.push_back(pt);
  }
  return out;
}

}  // namespace lrdsc
