#include <doctest.h>

#include <cmath>
#include <set>
#include <vector>

#include "lrdsc/lattice.hpp"
#include "lrdsc/rng.hpp"

using namespace lrdsc;

namespace {

IVec iv(std::initializer_list<std::int64_t> xs) {
  IVec v(static_cast<Eigen::Index>(xs.size()));
  Eigen::Index i = 0;
  for (auto x : xs) v[i++] = x;
  return v;
}

Vec rv(std::initializer_list<double> xs) {
  Vec v(static_cast<Eigen::Index>(xs.size()));
  Eigen::Index i = 0;
  for (auto x : xs) v[i++] = x;
  return v;
}

// Independent oracle: scan every lattice point with basis coordinates in a
// window and return the smallest distance found.
double brute_force_min_distance(const Mat& basis, const Vec& x, int window) {
  double best = std::numeric_limits<double>::infinity();
  const int n = static_cast<int>(basis.rows());
  REQUIRE(n == 2);
  for (int a = -window; a <= window; ++a) {
    for (int b = -window; b <= window; ++b) {
      Vec p = basis.col(0) * a + basis.col(1) * b;
      best = std::min(best, (x - p).norm());
    }
  }
  return best;
}

}  // namespace

TEST_CASE("nearest point on the integer grid") {
  const auto z2 = Lattice::integer_grid(2, 1.0);
  CHECK(z2.nearest_index(rv({0.3, -0.7})) == iv({0, -1}));
  CHECK(z2.nearest_point(rv({0.3, -0.7})).isApprox(rv({0.0, -1.0})));

  // Lattice points are fixed points of the quantizer.
  const auto hex = Lattice::hexagonal(0.7);
  for (auto coords : {iv({0, 0}), iv({3, -2}), iv({-5, 1})}) {
    CHECK(z2.nearest_index(z2.point(coords)) == coords);
    CHECK(hex.nearest_index(hex.point(coords)) == coords);
  }

  CHECK_THROWS_AS(z2.nearest_index(rv({std::nan(""), 0.0})), std::invalid_argument);
}

TEST_CASE("nearest point near a hexagonal deep hole matches brute force") {
  const auto hex = Lattice::hexagonal(1.0);
  // Deep hole at the centroid of (0,0), (1,0), (1/2, sqrt(3)/2); nudge off it.
  const Vec hole = rv({0.5, std::sqrt(3.0) / 6.0});
  RngStream rng(7);
  for (int k = 0; k < 200; ++k) {
    Vec x = hole + 0.2 * rv({rng.uniform() - 0.5, rng.uniform() - 0.5});
    const double got = (x - hex.nearest_point(x)).norm();
    const double want = brute_force_min_distance(hex.basis(), x, 6);
    CHECK(got == doctest::Approx(want).epsilon(1e-12));
  }
}

TEST_CASE("mod lattice lands in the central cell") {
  const auto z2 = Lattice::integer_grid(2, 1.0);
  CHECK(z2.mod(rv({0.3, -0.7})).isApprox(rv({0.3, 0.3})));
  CHECK(z2.mod(z2.point(iv({4, -9}))).norm() == 0.0);

  // mod(x + lambda') == mod(x) for shifts in the first two shells.
  RngStream rng(11);
  for (const auto& lat : {Lattice::integer_grid(2, 1.0), Lattice::hexagonal(1.0)}) {
    for (int k = 0; k < 50; ++k) {
      Vec x = rv({4.0 * (rng.uniform() - 0.5), 4.0 * (rng.uniform() - 0.5)});
      const Vec m0 = lat.mod(x);
      for (int a = -2; a <= 2; ++a) {
        for (int b = -2; b <= 2; ++b) {
          const Vec shift = lat.point(iv({a, b}));
          CHECK((lat.mod(x + shift) - m0).norm() < 1e-9);
        }
      }
    }
  }
}

TEST_CASE("voronoi membership of the mod residual") {
  RngStream rng(13);
  for (const auto& lat : {Lattice::integer_grid(2, 0.5), Lattice::hexagonal(2.0)}) {
    for (int k = 0; k < 100; ++k) {
      const Vec x = rv({6.0 * (rng.uniform() - 0.5), 6.0 * (rng.uniform() - 0.5)});
      const Vec r = lat.mod(x);
      for (int a = -2; a <= 2; ++a) {
        for (int b = -2; b <= 2; ++b) {
          if (a == 0 && b == 0) continue;
          const Vec lam = lat.point(iv({a, b}));
          CHECK(r.norm() <= (r - lam).norm() + 2e-12);
        }
      }
    }
  }
}

TEST_CASE("translation equivariance is exact, ties included") {
  // Dyadic inputs on the unit grid keep every step exactly representable.
  const auto z2 = Lattice::integer_grid(2, 1.0);
  RngStream rng(17);
  for (int k = 0; k < 500; ++k) {
    Vec x(2);
    x[0] = static_cast<double>(static_cast<int>(rng.next_u64() % 2048) - 1024) / 1024.0;
    x[1] = static_cast<double>(static_cast<int>(rng.next_u64() % 2048) - 1024) / 1024.0;
    if (k % 5 == 0) x[0] = 0.5;  // force an exact tie
    if (k % 7 == 0) x[1] = -1.5;
    const IVec q = z2.nearest_index(x);
    for (std::int64_t a : {-3, 0, 2}) {
      for (std::int64_t b : {-1, 0, 5}) {
        const IVec shift = iv({a, b});
        Vec xs = x + z2.point(shift);
        CHECK(z2.nearest_index(xs) == q + shift);
      }
    }
  }

  // Integer-coordinate quantization commutes with sublattice shifts exactly
  // for the rational-Gram kinds.
  const auto hex = Lattice::hexagonal(1.0);
  for (int k = 0; k < 500; ++k) {
    IVec v = iv({static_cast<std::int64_t>(rng.next_u64() % 41) - 20,
                 static_cast<std::int64_t>(rng.next_u64() % 41) - 20});
    IVec t = iv({static_cast<std::int64_t>(rng.next_u64() % 7) - 3,
                 static_cast<std::int64_t>(rng.next_u64() % 7) - 3});
    for (std::int64_t m : {2, 6, 12}) {
      CHECK(hex.quantize_coords(v + m * t, m) == hex.quantize_coords(v, m) + t);
    }
  }
}

TEST_CASE("tie rule favors the lexicographically largest residual") {
  const auto z1 = Lattice::integer_grid(1, 1.0);
  CHECK(z1.nearest_index(rv({0.5}))[0] == 0);
  CHECK(z1.nearest_index(rv({-0.5}))[0] == -1);
  CHECK(z1.nearest_index(rv({1.5}))[0] == 1);

  const auto z2 = Lattice::integer_grid(2, 1.0);
  CHECK(z2.nearest_index(rv({0.5, 0.5})) == iv({0, 0}));
  CHECK(z2.nearest_index(rv({-0.5, 0.5})) == iv({-1, 0}));
}

TEST_CASE("geometry closed forms") {
  const auto z1 = Lattice::integer_grid(1, 1.0);
  auto g1 = z1.geometry();
  CHECK(g1.volume == doctest::Approx(1.0));
  CHECK(g1.covering_radius == doctest::Approx(0.5));
  CHECK(g1.inscribed_radius == doctest::Approx(0.5));
  CHECK(g1.second_moment == doctest::Approx(1.0 / 12.0));
  CHECK(g1.second_moment_error == 0.0);

  const double theta = 0.37;
  const auto z2 = Lattice::integer_grid(2, theta);
  auto g2 = z2.geometry();
  CHECK(g2.volume == doctest::Approx(theta * theta));
  CHECK(g2.covering_radius == doctest::Approx(theta * std::sqrt(2.0) / 2.0));
  CHECK(g2.inscribed_radius == doctest::Approx(theta / 2.0));
  CHECK(g2.second_moment == doctest::Approx(1.0 / 12.0));

  // Volume always equals |det generator|.
  CHECK(z2.volume() == doctest::Approx(std::abs(z2.generator_rows().determinant())));
}

TEST_CASE("hexagonal second moment by monte carlo, cross-checked by exact polygon integral") {
  const auto hex = Lattice::hexagonal(1.0);
  GeometryOptions opts;  // default budget: 1e7 samples
  const auto g = hex.geometry(opts);

  const auto poly = voronoi_cell_polygon(hex);
  const double area = polygon_area(poly);
  CHECK(area == doctest::Approx(hex.volume()).epsilon(1e-12));
  const double g_exact = polygon_second_moment(poly) / (2.0 * area * area);

  CHECK(g.second_moment == doctest::Approx(0.0802).epsilon(1.5e-3));
  CHECK(std::abs(g.second_moment - g_exact) <= 4.0 * g.second_moment_error);
}

TEST_CASE("second moment is scale invariant") {
  // Closed forms are exactly invariant; for the sampled hexagonal value the
  // estimates at three scales must agree within combined Monte Carlo error.
  const auto base = Lattice::hexagonal(1.0);
  const auto [g1, e1] = second_moment_mc(base, 400'000, 21);
  for (double sigma : {0.1, 10.0}) {
    const auto [g2, e2] = second_moment_mc(base.scaled(sigma), 400'000, 22);
    CHECK(std::abs(g2 - g1) <= e1 + e2);
  }
  const auto z3 = Lattice::integer_grid(3, 0.25);
  CHECK(z3.scaled(10.0).geometry().second_moment == z3.geometry().second_moment);
  CHECK(z3.scaled(2.0).volume() == doctest::Approx(z3.volume() * 8.0));
}

TEST_CASE("nonadjacent cell separation") {
  CHECK(nonadjacent_separation(Lattice::integer_grid(1, 1.0)).value == doctest::Approx(1.0));
  const auto sep2 = nonadjacent_separation(Lattice::integer_grid(2, 1.0));
  CHECK(sep2.exact);
  CHECK(sep2.value == doctest::Approx(1.0).epsilon(1e-9));

  // Scaling homogeneity.
  const auto seps = nonadjacent_separation(Lattice::integer_grid(2, 3.5));
  CHECK(seps.value == doctest::Approx(3.5).epsilon(1e-9));

  const auto hx = nonadjacent_separation(Lattice::hexagonal(1.0));
  CHECK(hx.exact);
  CHECK(hx.value == doctest::Approx(1.0 / std::sqrt(3.0)).epsilon(1e-9));

  // Unsupported kinds surface the conservative center-distance bound.
  const auto z3 = nonadjacent_separation(Lattice::integer_grid(3, 1.0));
  CHECK_FALSE(z3.exact);
  CHECK(z3.value > 0.0);
}

TEST_CASE("coset representatives of scaled sublattices") {
  const auto z1 = Lattice::integer_grid(1, 1.0);
  const auto pair1 = make_nested_pair(z1, z1.scaled(4.0));
  CHECK(pair1.index == 4);
  CHECK(coset_representatives(pair1).size() == 4);

  const auto z2 = Lattice::integer_grid(2, 1.0);
  const auto pair2 = make_nested_pair(z2, z2.scaled(2.0));
  CHECK(pair2.index == 4);
  const auto reps = coset_representatives(pair2);
  REQUIRE(reps.size() == 4);
  // One period under the residual-maximizing tie rule: {0,1}^2.
  std::set<std::pair<std::int64_t, std::int64_t>> got;
  for (const auto& r : reps) got.insert({r[0], r[1]});
  CHECK(got == std::set<std::pair<std::int64_t, std::int64_t>>{{0, 0}, {0, 1}, {1, 0}, {1, 1}});

  // Unique decomposition: lambda = rep + coarse point, rep drawn from the list.
  RngStream rng(29);
  std::set<std::vector<std::int64_t>> rep_set;
  for (const auto& r : reps) rep_set.insert({r[0], r[1]});
  for (int k = 0; k < 100; ++k) {
    IVec lam = iv({static_cast<std::int64_t>(rng.next_u64() % 101) - 50,
                   static_cast<std::int64_t>(rng.next_u64() % 101) - 50});
    const IVec rep = coset_representative_of(pair2, lam);
    CHECK(rep_set.count({rep[0], rep[1]}) == 1);
    const IVec diff = lam - rep;
    CHECK(diff[0] % 2 == 0);
    CHECK(diff[1] % 2 == 0);
  }

  CHECK_THROWS_AS(make_nested_pair(z2, z2.scaled(2.0).scaled(0.75)), std::invalid_argument);
}

TEST_CASE("lattice construction guards") {
  CHECK_THROWS_AS(Lattice::integer_grid(0, 1.0), std::invalid_argument);
  CHECK_THROWS_AS(Lattice::integer_grid(1, 0.0), std::invalid_argument);
  CHECK_THROWS_AS(Lattice::hexagonal(-1.0), std::invalid_argument);
  Mat singular(2, 2);
  singular << 1.0, 2.0, 2.0, 4.0;
  CHECK_THROWS_AS(Lattice::from_generator_rows(singular), std::invalid_argument);
}
