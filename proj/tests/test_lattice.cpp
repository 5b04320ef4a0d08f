#include <catch2/catch_amalgamated.hpp>

#include <random>

#include "kspheres/lattice.hpp"
#include "oracles.hpp"

using namespace kspheres;

TEST_CASE("one-dimensional power counts") {
  auto c = one_dim_power_counts(2, 4);
  REQUIRE(c == std::vector<int64_t>{1, 2, 0, 0, 2});

  auto c3 = one_dim_power_counts(3, 8);
  CHECK(c3[0] == 1);
  CHECK(c3[1] == 2);
  CHECK(c3[8] == 2);
  CHECK(std::accumulate(c3.begin(), c3.end(), int64_t(0)) == 5);

  // sum over all levels counts the integer points in [-10, 10]
  auto c100 = one_dim_power_counts(2, 100);
  CHECK(std::accumulate(c100.begin(), c100.end(), int64_t(0)) == 21);

  CHECK_THROWS_AS(one_dim_power_counts(1, 4), domain_error);
  CHECK_THROWS_AS(one_dim_power_counts(2, 100, LatticeBudget{50, 100}), budget_error);
}

TEST_CASE("count_sphere exact small facts") {
  // 24 points on every dyadic 4-sphere with radius 2^j, j >= 1; 8 at radius 1
  CHECK(count_sphere({2, 4, 1}).count == 8);
  for (int j = 1; j <= 5; ++j) {
    int64_t level = int64_t(1) << (2 * j);
    CHECK(count_sphere({2, 4, level}).count == 24);
  }
  CHECK(count_sphere({2, 2, 25}).count == 12);
  CHECK(count_sphere({3, 2, 2}).count == 4);
  CHECK(count_sphere({2, 3, 0}).count == 1);
  CHECK(count_sphere({4, 2, 3}).count == 0);
}

TEST_CASE("count_sphere against Jacobi's four-square formula") {
  for (int64_t n : {1, 2, 3, 4, 12, 30, 97, 256, 1000})
    CHECK(count_sphere({2, 4, n}).count == u128(oracles::jacobi_r4(n)));
}

TEST_CASE("count_sphere against brute force") {
  for (int k : {2, 3, 4})
    for (int d : {1, 2, 3}) {
      auto hist = oracles::brute_force_counts_upto(k, d, 200);
      auto counts = count_all_levels(k, d, 200);
      for (int64_t n = 0; n <= 200; ++n) {
        INFO("k=" << k << " d=" << d << " n=" << n);
        REQUIRE(counts[n] == u128(hist[n]));
      }
    }
}

TEST_CASE("enumeration: order, length, content") {
  SphereSpec spec{2, 2, 25};
  auto pts = enumerate_sphere_points(spec);
  REQUIRE(pts.size() == 12);
  CHECK(std::is_sorted(pts.begin(), pts.end()));
  CHECK(std::find(pts.begin(), pts.end(), std::vector<int64_t>{0, 5}) != pts.end());
  CHECK(std::find(pts.begin(), pts.end(), std::vector<int64_t>{3, 4}) != pts.end());

  auto p1 = enumerate_sphere_points({2, 1, 9});
  REQUIRE(p1 == std::vector<std::vector<int64_t>>{{-3}, {3}});

  CHECK(enumerate_sphere_points({4, 2, 3}).empty());

  // brute-force set equality on a sample
  for (int k : {2, 3})
    for (int64_t n : {11, 50, 169}) {
      SphereSpec s{k, 3, n};
      std::vector<std::vector<int64_t>> brute;
      oracles::brute_force_sphere(k, 3, n, [&](const std::vector<int64_t>& m) { brute.push_back(m); });
      std::sort(brute.begin(), brute.end());
      CHECK(enumerate_sphere_points(s) == brute);
    }

  LatticeBudget tight;
  tight.enumeration_cap = 4;
  CHECK_THROWS_AS(enumerate_sphere_points(spec, tight), budget_error);
}

TEST_CASE("sphere exponential sum: values and oracle agreement") {
  SphereSpec spec{2, 2, 25};
  std::vector<double> zero{0.0, 0.0};
  auto at0 = sphere_exp_sum(spec, zero);
  CHECK(at0.value.real() == Catch::Approx(12.0).margin(1e-12));
  CHECK(at0.value.imag() == Catch::Approx(0.0).margin(1e-12));

  // level 25 is odd: every point has odd coordinate sum, all phases are -1
  std::vector<double> half{0.5, 0.5};
  auto athalf = sphere_exp_sum(spec, half);
  CHECK(athalf.value.real() == Catch::Approx(-12.0).margin(1e-10));
  auto brute = oracles::brute_force_exp_sum(2, 2, 25, half);
  CHECK(std::abs(athalf.value - brute) < 1e-10);

  SphereSpec s4{2, 4, 4};
  std::vector<double> q{0.25, 0.0, 0.0, 0.0};
  auto v = sphere_exp_sum(s4, q);
  CHECK(std::abs(v.value) <= 24.0 + 1e-12);
  CHECK(std::abs(v.value - oracles::brute_force_exp_sum(2, 4, 4, q)) < 1e-10);

  // random frequencies against brute force
  std::mt19937_64 rng(31337);
  std::uniform_real_distribution<double> U(0.0, 1.0);
  for (int trial = 0; trial < 20; ++trial) {
    int k = 2 + int(rng() % 2);
    int d = 2 + int(rng() % 2);
    int64_t n = 1 + int64_t(rng() % 120);
    std::vector<double> xi(d);
    for (auto& x : xi) x = U(rng);
    auto got = sphere_exp_sum({k, d, n}, xi);
    auto want = oracles::brute_force_exp_sum(k, d, n, xi);
    INFO("k=" << k << " d=" << d << " n=" << n);
    CHECK(std::abs(got.value - want) < 1e-9);
  }
}

TEST_CASE("sphere exponential sum: rational path matches real path") {
  SphereSpec spec{2, 3, 50};
  std::vector<int64_t> p{3, 7, 11};
  int64_t Q = 16;
  auto rat = sphere_exp_sum_rational(spec, p, Q);
  std::vector<double> xi{3.0 / 16, 7.0 / 16, 11.0 / 16};
  auto dbl = sphere_exp_sum(spec, xi);
  CHECK(std::abs(rat.value - dbl.value) < 1e-9);
}

TEST_CASE("exponential sum symmetry under signed permutations") {
  SphereSpec spec{3, 3, 92};
  std::vector<double> xi{0.13, 0.57, 0.89};
  auto base = sphere_exp_sum(spec, xi).value;
  std::vector<double> perm{0.57, 0.89, 0.13};
  CHECK(std::abs(sphere_exp_sum(spec, perm).value - base) < 1e-10);
  std::vector<double> neg{1.0 - 0.13, 0.57, 0.89};
  CHECK(std::abs(sphere_exp_sum(spec, neg).value - base) < 1e-9);
}

TEST_CASE("grid Parseval recovers the count") {
  SphereSpec spec{2, 2, 25};
  u128 N = count_sphere(spec).count;
  int64_t M = 2 * (2 * 5 + 1) + 2;  // beyond twice the diameter: exact
  KahanSum acc;
  for (int64_t p1 = 0; p1 < M; ++p1)
    for (int64_t p2 = 0; p2 < M; ++p2) {
      std::vector<int64_t> p{p1, p2};
      acc.add(std::norm(sphere_exp_sum_rational(spec, p, M).value));
    }
  double parseval = acc.value() / double(M * M);
  CHECK(parseval == Catch::Approx(u128_to_double(N)).epsilon(1e-9));
}

TEST_CASE("recursion consistency over the last coordinate") {
  // N_{k,d}(n) = sum_j c_k(j^k) N_{k,d-1}(n - j^k)
  int k = 3, d = 3;
  int64_t n = 120;
  auto lower = count_all_levels(k, d - 1, n);
  u128 acc = lower[n];
  for (int64_t j = 1; ipow_i128(j, k) <= n; ++j) acc += 2 * lower[n - int64_t(ipow_i128(j, k))];
  CHECK(count_sphere({k, d, n}).count == acc);
}

TEST_CASE("budget and validation errors") {
  CHECK_THROWS_AS(count_sphere({2, 3, -1}), domain_error);
  CHECK_THROWS_AS(count_sphere({2, 3, 2'000'000}), budget_error);
  std::vector<double> wrong{0.5};
  CHECK_THROWS_AS(sphere_exp_sum({2, 2, 25}, wrong), domain_error);
}
