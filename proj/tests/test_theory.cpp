#include <doctest.h>

#include <cmath>

#include "lrdsc/rng.hpp"
#include "lrdsc/theory.hpp"

using namespace lrdsc;

namespace {
constexpr double kGaussH = 2.0471271918136524;  // 0.5 log2(2 pi e)
}

TEST_CASE("sum-rate formulas at frozen points") {
  // Gaussian with d_s = d_c = d collapses to -1 - log2 d.
  for (double d : {1e-2, 1e-4, 1e-6}) {
    CHECK(r_md(kGaussH, d, d) == doctest::Approx(-1.0 - std::log2(d)).epsilon(1e-12));
  }
  CHECK(r_md(kGaussH, 0.01, 1e-4) == doctest::Approx(8.96578).epsilon(1e-5));
  CHECK(r_rc(kGaussH, 0.01, 1e-4) == doctest::Approx(9.46578).epsilon(1e-5));

  // Doubling the distortion product lowers the rate by exactly half a bit.
  CHECK(r_md(kGaussH, 0.02, 1e-4) ==
        doctest::Approx(r_md(kGaussH, 0.01, 1e-4) - 0.5).epsilon(1e-12));
  // Adding delta to h adds 2 delta.
  CHECK(r_rc(kGaussH + 1.25, 0.01, 1e-4) ==
        doctest::Approx(r_rc(kGaussH, 0.01, 1e-4) + 2.5).epsilon(1e-12));

  CHECK_THROWS_AS(r_md(kGaussH, 0.0, 1e-4), std::invalid_argument);
}

TEST_CASE("the two sum-rate routes differ by exactly half a bit") {
  RngStream rng(113);
  for (int i = 0; i < 100; ++i) {
    const double h = 4.0 * (rng.uniform() - 0.5);
    const double ds = std::pow(10.0, -4.0 * rng.uniform());
    const double dc = ds * std::pow(10.0, -3.0 * rng.uniform());
    CHECK(r_rc(h, ds, dc) - r_md(h, ds, dc) == 0.5);
  }
}

TEST_CASE("lmmse distortions") {
  const auto r = lmmse_rates(1.0, 2e-4, 2e-4, 1e-4, 1e-4);
  CHECK(r.d_c == doctest::Approx(9.999e-5).epsilon(1e-6));
  CHECK(r.d_s1 == r.d_s2);
  CHECK(r.d_s1 == doctest::Approx(1.0 / (1.0 + 1.0 / 3e-4)).epsilon(1e-12));

  // Large source variance: d_c tends to the harmonic mean of the two noises.
  const auto big = lmmse_rates(1e12, 3e-4, 6e-4, 1e-4, 1e-4);
  CHECK(big.d_c == doctest::Approx(3e-4 * 6e-4 / 9e-4).epsilon(1e-6));

  CHECK_THROWS_AS(lmmse_rates(0.0, 1.0, 1.0, 1.0, 1.0), std::invalid_argument);
}

TEST_CASE("point predictions") {
  PredictionInputs in;
  in.n = 1;
  in.big_m = 8;
  in.k_index = 4;
  in.mu = 8;
  in.nu_s = 0.32;   // K mu theta with theta = 0.01
  in.nu_c = 0.01;
  in.g_s_half = 1.0 / 12.0;
  in.g_c = 1.0 / 12.0;
  in.rbar_s = 0.16;
  in.r0 = 0.0025;
  in.r_c = 0.005;
  in.h1_bits = kGaussH;
  in.h2_bits = kGaussH;
  in.h_cond_u_bits = 0.0;
  in.tail_prob = 0.0;

  const auto p = predict(in);
  // Everything is scalar arithmetic here: (1/4) G (M nu_s)^2 etc.
  CHECK(p.d_side_pred == doctest::Approx(0.25 / 12.0 * 2.56 * 2.56).epsilon(1e-12));
  CHECK(p.d_central_pred_low == doctest::Approx(1e-4 / 12.0).epsilon(1e-12));
  CHECK(p.d_central_pred_high == p.d_central_pred_low);  // no tail mass
  CHECK(p.rate_pred ==
        doctest::Approx(2.0 * kGaussH - 2.0 * std::log2(0.32 / 2.0)).epsilon(1e-12));
  CHECK(p.hu_cond_bound ==
        doctest::Approx(1.0 + (1.0 - 0.5) * 2.0).epsilon(1e-12));  // r0/r_c = 1/2
  CHECK(p.d_central_pred_low <= p.d_central_pred_high);
  CHECK(p.r_rc - p.r_md == 0.5);

  // With tail mass the upper arm grows by (16 mu rbar_s)^2 P / n.
  in.tail_prob = 1e-3;
  const auto q = predict(in);
  const double worst = 16.0 * 8.0 * 0.16;
  CHECK(q.d_central_pred_high ==
        doctest::Approx(q.d_central_pred_low + worst * worst * 1e-3).epsilon(1e-12));

  // r0 = 0 would collapse the conditional-entropy bound to 1 + P log2 K.
  in.r0 = 0.0;
  in.tail_prob = 0.0;
  CHECK(predict(in).hu_cond_bound == doctest::Approx(1.0));
}

TEST_CASE("box integrals agree with the change-of-variable identity") {
  // int_{u+A} ||x||^2 = int_A ||x||^2 + 2 <int_A x, u> + ||u||^2 vol(A),
  // with every integral evaluated by direct antiderivatives.
  RngStream rng(127);
  for (int trial = 0; trial < 200; ++trial) {
    const int n = 1 + static_cast<int>(rng.next_u64() % 3);
    Vec c(n), w(n), u(n);
    for (int i = 0; i < n; ++i) {
      c[i] = 4.0 * (rng.uniform() - 0.5);
      w[i] = 0.1 + 3.0 * rng.uniform();
      u[i] = 6.0 * (rng.uniform() - 0.5);
    }
    const double lhs = box_second_moment(c + u, w);
    const double rhs = box_second_moment(c, w) + 2.0 * box_first_moment(c, w).dot(u) +
                       u.squaredNorm() * box_volume(w);
    CHECK(lhs == doctest::Approx(rhs).epsilon(1e-9));
  }
}

TEST_CASE("nested-sum oracle on scalar and planar grids") {
  const auto z1 = Lattice::integer_grid(1, 1.0);
  {
    const auto pair = make_nested_pair(z1, z1.scaled(2.0));
    const auto res = nested_sum_oracle(pair);
    // Representatives under the tie rule are {0, 1}: the sum of squares is 1.
    CHECK(res.lhs == doctest::Approx(1.0).epsilon(1e-12));
    CHECK(res.rhs == doctest::Approx(res.lhs).epsilon(1e-9));
  }
  {
    const auto z2 = Lattice::integer_grid(2, 1.0);
    const auto pair = make_nested_pair(z2, z2.scaled(2.0));
    const auto res = nested_sum_oracle(pair);
    CHECK(res.lhs == doctest::Approx(4.0).epsilon(1e-12));  // {0,1}^2
    CHECK(std::abs(res.lhs - res.rhs) <= 1e-9 * std::max(1.0, res.lhs));
  }

  // Scaling both lattices by sigma scales the sum of squared norms by
  // sigma^2.
  {
    const auto fine = z1.scaled(3.0);
    const auto pair = make_nested_pair(fine, fine.scaled(4.0));
    const auto base = make_nested_pair(z1, z1.scaled(4.0));
    CHECK(nested_sum_oracle(pair).lhs ==
          doctest::Approx(9.0 * nested_sum_oracle(base).lhs).epsilon(1e-12));
  }

  CHECK_THROWS_AS(nested_sum_oracle(make_nested_pair(z1, z1.scaled(20000.0))),
                  std::invalid_argument);
}

TEST_CASE("hexagonal nested-sum oracle uses the exact polygon route") {
  const auto hex = Lattice::hexagonal(1.0);
  const auto pair = make_nested_pair(hex, hex.scaled(4.0));
  const auto res = nested_sum_oracle(pair);
  CHECK(res.quadrature_error < 1e-6);
  CHECK(std::abs(res.lhs - res.rhs) <=
        1e-6 * std::max(1.0, std::abs(res.lhs)) + 4.0 * res.quadrature_error);
}

TEST_CASE("union-cell second moment approaches the coarse lattice value") {
  const auto z1 = Lattice::integer_grid(1, 1.0);
  const auto probe = shape_lemma_probe(z1, {4, 8, 16});
  REQUIRE(probe.size() == 3);
  double prev = std::numeric_limits<double>::infinity();
  for (const auto& pt : probe) {
    const double gap = std::abs(pt.g_union - pt.g_coarse);
    CHECK(gap < prev);
    prev = gap;
  }
  // Closed-form check at ratio 16 against an independent Riemann sum over
  // the union region (-m/2 + 1/2, m/2 + 1/2].
  const double m = 16.0;
  double riemann = 0.0;
  const int steps = 200'000;
  const double lo = -m / 2.0 + 0.5, hi = m / 2.0 + 0.5;
  for (int i = 0; i < steps; ++i) {
    const double x = lo + (hi - lo) * (i + 0.5) / steps;
    riemann += x * x;
  }
  riemann *= (hi - lo) / steps;
  const double g_riemann = riemann / std::pow(m, 3.0);
  CHECK(probe.back().g_union == doctest::Approx(g_riemann).epsilon(1e-6));

  // Degenerate ratio 1: the union region is the fine cell itself.
  const auto unit = shape_lemma_probe(z1, {1});
  CHECK(unit.front().g_union == doctest::Approx(1.0 / 12.0).epsilon(1e-9));

  CHECK_THROWS_AS(shape_lemma_probe(z1, {4, 4}), std::invalid_argument);
}
