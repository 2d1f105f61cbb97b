#pragma once

#include <cstdint>
#include <vector>

#include "lrdsc/lattice.hpp"

namespace lrdsc {

/// Minimum sum rate of symmetric two-channel coding at high resolution:
/// 2h - (1/2) log2(4 (2 pi e)^2 d_s d_c), vanishing terms dropped.
double r_md(double h_bits, double d_s, double d_c);

/// Random-coding counterpart 2h - (1/2) log2(2 (2 pi e)^2 d_s d_c); exceeds
/// r_md by exactly 0.5 bits for identical inputs.
double r_rc(double h_bits, double d_s, double d_c);

struct LmmseRates {
  double d_s1 = 0.0;
  double d_s2 = 0.0;
  double d_c = 0.0;
};

/// Linear-MMSE distortions of the additive-noise test channels:
/// d_{s,i} = (1/s2x + 1/(s2z_i + s2zp_i))^{-1},
/// d_c     = (1/s2x + 1/s2z1 + 1/s2z2)^{-1}.
LmmseRates lmmse_rates(double s2x, double s2z1, double s2z2, double s2zp1, double s2zp2);

/// Leading-order predictions for one experiment point (vanishing terms
/// dropped; the central-distortion upper arm uses the constructive
/// worst-case constant 16 mu rbar_s).
struct Prediction {
  double d_side_pred = 0.0;
  double d_central_pred_low = 0.0;
  double d_central_pred_high = 0.0;
  double rate_pred = 0.0;
  double hu_cond_bound = 0.0;
  double r_md = 0.0;
  double r_rc = 0.0;
};

struct PredictionInputs {
  int n = 1;
  std::int64_t big_m = 0;   // M = mu^n
  std::int64_t k_index = 0; // K
  double mu = 0.0;
  double nu_s = 0.0;
  double nu_c = 0.0;
  double g_s_half = 0.0;
  double g_c = 0.0;
  double rbar_s = 0.0;
  double r0 = 0.0;
  double r_c = 0.0;  // central inscribed radius
  double h1_bits = 0.0;
  double h2_bits = 0.0;
  double h_cond_u_bits = 0.0;  // measured H(U2|U1), bits per block
  double tail_prob = 0.0;
};

Prediction predict(const PredictionInputs& in);

/// Both sides of the nested-sum identity
///   sum_{l in V_coarse(0) cap fine} ||l||^2
///     = n N0 (G(C) nu_coarse^{2/n} - G_fine nu_fine^{2/n}),
/// with G(C) evaluated over the union of fine cells by closed-form cell
/// integrals (boxes/polygons) or Monte Carlo for kinds without them.
struct LemmaOracleResult {
  double lhs = 0.0;
  double rhs = 0.0;
  double quadrature_error = 0.0;
};

LemmaOracleResult nested_sum_oracle(const NestedPair& pair);

struct ShapeProbePoint {
  std::int64_t ratio = 0;
  double g_union = 0.0;      // G of the union-of-fine-cells region
  double g_coarse = 0.0;     // limit target
  double error = 0.0;
};

/// G(C) along a ladder of coarse/fine scale ratios; approaches g_coarse as
/// the ratio grows.
std::vector<ShapeProbePoint> shape_lemma_probe(const Lattice& fine,
                                               const std::vector<std::int64_t>& ratios);

/// Exact integral of ||x||^2 over an axis-aligned box (used as the
/// independent quadrature route in tests and the oracle above).
double box_second_moment(const Vec& center, const Vec& widths);
double box_volume(const Vec& widths);
Vec box_first_moment(const Vec& center, const Vec& widths);

}  // namespace lrdsc
