#include <doctest.h>

#include <array>
#include <cmath>
#include <map>
#include <vector>

#include "lrdsc/lattice.hpp"
#include "lrdsc/metrics.hpp"
#include "lrdsc/rng.hpp"

using namespace lrdsc;

namespace {

Vec rv1(double a) {
  Vec v(1);
  v[0] = a;
  return v;
}

IVec iv1(std::int64_t a) {
  IVec v(1);
  v[0] = a;
  return v;
}

}  // namespace

TEST_CASE("empirical distortion basics") {
  std::vector<Vec> xs = {rv1(0.0)};
  std::vector<Vec> hats = {rv1(1.0)};
  CHECK(empirical_distortion(xs, hats) == doctest::Approx(1.0));
  CHECK(empirical_distortion(xs, xs) == 0.0);
  CHECK_THROWS_AS(empirical_distortion({}, {}), std::invalid_argument);

  // Uniform source quantized to the unit grid: mean squared error 1/12.
  const auto z = Lattice::integer_grid(1, 1.0);
  RngStream rng(101);
  DistortionAccumulator acc;
  for (int i = 0; i < 1'000'000; ++i) {
    const Vec x = rv1(8.0 * (rng.uniform() - 0.5));
    acc.add(x, z.nearest_point(x));
  }
  CHECK(acc.value() == doctest::Approx(1.0 / 12.0).epsilon(0.02));
}

TEST_CASE("plug-in entropy basics") {
  const std::array<std::uint64_t, 1> one = {7};
  CHECK(plug_in_entropy(one) == 0.0);
  const std::array<std::uint64_t, 2> even = {50, 50};
  CHECK(plug_in_entropy(even) == doctest::Approx(1.0));
  const std::array<std::uint64_t, 8> uniform8 = {3, 3, 3, 3, 3, 3, 3, 3};
  CHECK(plug_in_entropy(uniform8) == doctest::Approx(3.0));
  const std::array<std::uint64_t, 2> zeros = {0, 0};
  CHECK_THROWS_AS(plug_in_entropy(zeros), std::invalid_argument);

  // Miller-Madow adds (S-1)/(2N ln 2).
  const std::array<std::uint64_t, 4> c = {1, 2, 3, 4};
  CHECK(plug_in_entropy(c, true) ==
        doctest::Approx(plug_in_entropy(c) + 3.0 / (2.0 * 10.0 * std::log(2.0))));
}

TEST_CASE("entropy estimator is consistent on a uniform alphabet") {
  const int k = 64;
  RngStream rng(103);
  CountTable table;
  const std::uint64_t n = 1'000'000;
  for (std::uint64_t i = 0; i < n; ++i) {
    table.add(iv1(static_cast<std::int64_t>(rng.next_u64() % k)));
  }
  // Asymptotic sd of the plug-in estimate, plus the O(K/N) bias term.
  const double sd = std::sqrt(static_cast<double>(k - 1)) / ((double)n * std::log(2.0)) +
                    1e-3 / std::sqrt((double)n);
  CHECK(std::abs(table.entropy_bits() - std::log2(static_cast<double>(k))) <=
        3.0 * sd + (k - 1.0) / (2.0 * n * std::log(2.0)));
  CHECK(table.support() == static_cast<std::size_t>(k));
}

TEST_CASE("count tables merge associatively") {
  RngStream rng(107);
  CountTable whole, part1, part2;
  for (int i = 0; i < 5000; ++i) {
    const IVec key = iv1(static_cast<std::int64_t>(rng.next_u64() % 23));
    whole.add(key);
    (i % 2 == 0 ? part1 : part2).add(key);
  }
  CountTable merged = part2;
  merged.merge(part1);
  CHECK(merged.total() == whole.total());
  CHECK(merged.entropy_bits() == whole.entropy_bits());
}

TEST_CASE("conditional entropy against a brute-force double sum") {
  RngStream rng(109);
  JointCountTable joint;
  std::map<std::pair<std::int64_t, std::int64_t>, double> p;
  const int n = 200'000;
  for (int i = 0; i < n; ++i) {
    const std::int64_t a = static_cast<std::int64_t>(rng.next_u64() % 5);
    const std::int64_t b = (a + static_cast<std::int64_t>(rng.next_u64() % 3)) % 5;
    joint.add(iv1(a), iv1(b));
    p[{a, b}] += 1.0;
  }
  // Independent oracle: H(B|A) = -sum p(a,b) log2 p(b|a).
  std::map<std::int64_t, double> pa;
  for (auto& [k, v] : p) {
    v /= n;
    pa[k.first] += v;
  }
  double want = 0.0;
  for (const auto& [k, v] : p) want -= v * std::log2(v / pa[k.first]);
  CHECK(conditional_entropy(joint) == doctest::Approx(want).epsilon(1e-12));

  // Deterministic relation: H(B|A) = 0.
  JointCountTable det;
  for (int a = 0; a < 4; ++a) det.add(iv1(a), iv1(2 * a), 25);
  CHECK(conditional_entropy(det) == doctest::Approx(0.0));

  // Independent uniform K x K: H(B|A) = log2 K.
  JointCountTable indep;
  for (int a = 0; a < 4; ++a) {
    for (int b = 0; b < 4; ++b) indep.add(iv1(a), iv1(b), 10);
  }
  CHECK(conditional_entropy(indep) == doctest::Approx(2.0));
}

TEST_CASE("rate accounting") {
  // Without boundary hits the rate is just the entropy total over n.
  CHECK(rate_account(3.0, 4.0, 0.0, 0.0, 5.0, 2) == doctest::Approx(6.0));
  // P = 1/2 on both encoders, n = 2: each adds Hb(1/2)/n + P = 1 bit/sample.
  CHECK(rate_account(0.0, 0.0, 0.5, 0.5, 0.0, 2) == doctest::Approx(2.0));
  CHECK_THROWS_AS(rate_account(1.0, 1.0, -0.1, 0.0, 0.0, 1), std::invalid_argument);
  CHECK_THROWS_AS(rate_account(1.0, 1.0, 0.0, 1.1, 0.0, 1), std::invalid_argument);
  // Degenerate flags cost exactly the fixed-length label rate.
  CHECK(rate_account(0.0, 0.0, 1.0, 1.0, 0.0, 4) == doctest::Approx(2.0));
}
