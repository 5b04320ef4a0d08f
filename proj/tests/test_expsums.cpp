#include <catch2/catch_amalgamated.hpp>

#include <random>

#include "kspheres/expsums.hpp"
#include "oracles.hpp"

using namespace kspheres;

TEST_CASE("weyl sum basics") {
  WeylSumSpec s;
  s.degree = 3;
  s.length = 100;
  s.t = 0.0;
  s.xi = 0.0;
  CHECK(std::abs(weyl_sum(s) - cplx(100.0, 0.0)) < 1e-10);

  // e(n^2/2) = (-1)^n pairs off over an even range
  s.degree = 2;
  s.t = 0.5;
  CHECK(std::abs(weyl_sum(s)) < 1e-10);

  // seven-term direct evaluation
  s.degree = 3;
  s.length = 7;
  s.t = 1.0 / 7.0;
  cplx direct = 0.0;
  for (int n = 1; n <= 7; ++n) direct += oracles::e(double((int64_t(n) * n * n) % 7) / 7.0);
  CHECK(std::abs(weyl_sum(s) - direct) < 1e-12);
}

TEST_CASE("weyl sum matches the naive long-double oracle") {
  // the naive oracle is trustworthy only while t n^k stays far below 2^63
  std::mt19937_64 rng(99);
  std::uniform_real_distribution<double> U(0.0, 1.0);
  int64_t n_cap[8] = {0, 0, 20000, 3000, 600, 150, 60, 40};
  for (int trial = 0; trial < 12; ++trial) {
    WeylSumSpec s;
    s.degree = 2 + int(rng() % 4);
    s.length = 50 + int64_t(rng() % uint64_t(n_cap[s.degree]));
    s.t = U(rng);
    s.xi = U(rng);
    auto got = weyl_sum(s);
    auto want = oracles::naive_weyl_sum(s.degree, s.length, s.t, s.xi);
    INFO("k=" << s.degree << " N=" << s.length << " t=" << s.t);
    CHECK(std::abs(got - want) < 1e-7 * double(s.length));
  }
}

TEST_CASE("weyl sum at rational t: exact residue oracle, large arguments") {
  // t = 5/16 is exactly representable; t n^5 overflows double phase headroom
  // by many orders while the residue oracle stays exact
  int k = 5;
  int64_t N = 2000, a = 5, q = 16;
  WeylSumSpec s{k, N, double(a) / double(q), 0.0, std::nullopt};
  KahanCplx want;
  for (int64_t n = 1; n <= N; ++n) {
    int64_t nk = 1;
    for (int i = 0; i < k; ++i) nk = nk * (n % q) % q;
    want.add(oracles::e(double(a * nk % q) / double(q)));
  }
  CHECK(std::abs(weyl_sum(s) - want.value()) < 1e-10);
}

TEST_CASE("weyl sum conjugation after range reduction") {
  for (auto [k, N, t, xi] : {std::tuple{2, int64_t(7), 0.3713, 0.11},
                             std::tuple{3, int64_t(100), 0.77251, 0.493},
                             std::tuple{5, int64_t(301), 0.92117, 0.05}}) {
    WeylSumSpec a{k, N, t, xi, std::nullopt};
    WeylSumSpec b{k, N, frac1(-t), frac1(-xi), std::nullopt};
    CHECK(std::abs(weyl_sum(b) - std::conj(weyl_sum(a))) < 1e-12);
  }
}

TEST_CASE("hypothesis ratio") {
  WeylSumSpec s;
  s.degree = 2;
  s.length = 100;
  s.t = 0.5;
  s.xi = 0.0;
  s.rational_anchor = {{1, 2}};
  HypothesisConfig cfg{0.5};
  CHECK(hypothesis_ratio(s, cfg) == Catch::Approx(0.0).margin(1e-10));

  s.rational_anchor.reset();
  CHECK_THROWS_AS(hypothesis_ratio(s, cfg), domain_error);
  CHECK_FALSE(rational_anchor(0.0, 100).has_value());

  // k=3 at t=1/7: ratio finite and positive, computed from the direct sum
  WeylSumSpec c;
  c.degree = 3;
  c.length = 49;
  c.t = 1.0 / 7.0;
  c.xi = 0.0;
  c.rational_anchor = {{1, 7}};
  HypothesisConfig tau{0.25};
  double ratio = hypothesis_ratio(c, tau);
  double env = std::pow(1.0 / 7 + 1.0 / 49 + 7.0 / std::pow(49.0, 3), 0.25);
  CHECK(ratio == Catch::Approx(std::abs(weyl_sum(c)) / (49.0 * env)));
  CHECK(ratio > 0.0);
}

TEST_CASE("gauss sum values") {
  std::vector<int64_t> m0{0};
  CHECK(std::abs(gauss_sum(2, 1, 1, 1, m0).value - cplx(1.0, 0.0)) < 1e-15);
  CHECK(std::abs(gauss_sum(2, 1, 1, 2, m0).value) < 1e-15);
  CHECK(std::abs(gauss_sum(2, 1, 1, 4, m0).value - cplx(0.5, 0.5)) < 1e-14);

  std::vector<int64_t> mz{0, 0, 0};
  CHECK(std::abs(gauss_sum(3, 3, 1, 1, mz).value - cplx(1.0, 0.0)) < 1e-15);

  CHECK_THROWS_AS(gauss_sum(2, 1, 2, 4, m0), domain_error);
}

TEST_CASE("gauss sum product identity vs direct d-dimensional sum") {
  std::mt19937_64 rng(12345);
  for (int trial = 0; trial < 15; ++trial) {
    int k = 2 + int(rng() % 3);
    int d = 1 + int(rng() % 3);
    int64_t q = 1 + int64_t(rng() % 30);
    int64_t a = 1 + int64_t(rng() % q);
    while (gcd_i64(a, q) != 1) a = 1 + int64_t(rng() % q);
    std::vector<int64_t> m(d);
    for (auto& v : m) v = int64_t(rng() % (2 * q)) - int64_t(q);
    auto got = gauss_sum(k, d, a, q, m);
    auto want = oracles::direct_gauss_sum(k, d, a, q, m);
    INFO("k=" << k << " d=" << d << " a=" << a << " q=" << q);
    CHECK(std::abs(got.value - want) < 1e-12);
    CHECK(std::abs(got.value) <= 1.0 + 1e-12);
  }
}

TEST_CASE("gauss sum periodicity in m") {
  std::mt19937_64 rng(777);
  for (int trial = 0; trial < 10; ++trial) {
    int64_t q = 2 + int64_t(rng() % 40);
    int64_t a = 1 + int64_t(rng() % q);
    while (gcd_i64(a, q) != 1) a = 1 + int64_t(rng() % q);
    int64_t m = int64_t(rng() % 1000) - 500;
    auto v1 = gauss_sum_1d(3, a, q, m);
    auto v2 = gauss_sum_1d(3, a, q, ((m % q) + q) % q);
    CHECK(std::abs(v1 - v2) < 1e-13);
  }
}

TEST_CASE("hua diagnostic: quadratic sums are exactly q^(-1/2) at odd primes") {
  for (int64_t p : {3, 5, 7, 11, 13, 97}) {
    double sup = 0.0;
    for (auto& [a, row] : gauss_sum_1d_table(2, p))
      for (auto& v : row) sup = std::max(sup, std::abs(v));
    CHECK(sup * std::sqrt(double(p)) == Catch::Approx(1.0).margin(1e-9));
  }
  auto rep = hua_diagnostic(2, 1, 13);
  CHECK(rep.rows[0].sup_scaled == Catch::Approx(1.0).margin(1e-12));  // q = 1
  CHECK(rep.rows[12].sup_scaled == Catch::Approx(1.0).margin(1e-9));  // q = 13

  auto cubic = hua_diagnostic(3, 1, 50);
  for (auto& row : cubic.rows) CHECK(row.sup_scaled <= 3.0);
  CHECK(cubic.max_scaled > 0.5);

  CHECK_THROWS_AS(hua_diagnostic(2, 1, 500), budget_error);
}

TEST_CASE("tau presets") {
  CHECK(tau_weyl(2) == 0.5);
  CHECK(tau_weyl(3) == 0.25);
  CHECK(tau_wooley(3) == Catch::Approx(1.0 / 12));
  CHECK(tau_wooley(4) == Catch::Approx(1.0 / 16));
  CHECK(tau_montgomery(5) == Catch::Approx(0.2));
}
