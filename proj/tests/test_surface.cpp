#include <catch2/catch_amalgamated.hpp>

#include <random>

#include "kspheres/surface.hpp"
#include "oracles.hpp"

using namespace kspheres;

TEST_CASE("total mass matches the Gamma normalization") {
  // Vol(S^1_k) = Gamma((k+1)/k)^d / Gamma(d/k); k=2,d=2 gives pi/4
  CHECK(vol_s1k(2, 2) == Catch::Approx(PI / 4).epsilon(1e-12));
  for (int k : {2, 3, 4})
    for (int d : {2, 3}) {
      std::vector<double> zero(d, 0.0);
      auto ev = surface_ft(k, d, 1.0, zero);
      INFO("k=" << k << " d=" << d << " err=" << ev.quadrature_error);
      CHECK(ev.value.real() == Catch::Approx(vol_s1k(k, d)).epsilon(1e-3));
      CHECK(std::abs(ev.value.imag()) < 1e-12);
    }
  // mass is constant in r
  std::vector<double> zero{0.0, 0.0};
  auto at3 = surface_ft(3, 2, 3.0, zero);
  CHECK(at3.value.real() == Catch::Approx(vol_s1k(3, 2)).epsilon(1e-3));
}

TEST_CASE("k=2, d=3 matches the classical Euclidean closed form") {
  // normalized transform = Vol * sin(2 pi T)/(2 pi T) along any direction
  for (double T : {0.5, 1.3, 4.2, 9.7}) {
    std::vector<double> xi{T, 0.0, 0.0};
    auto ev = surface_ft(2, 3, 1.0, xi);
    double want = vol_s1k(2, 3) * std::sin(TWO_PI * T) / (TWO_PI * T);
    INFO("T=" << T);
    CHECK(ev.value.real() == Catch::Approx(want).margin(5e-4 + 5.0 * ev.quadrature_error));
  }
}

TEST_CASE("closed k=2 Bessel form agrees with shell quadrature") {
  std::mt19937_64 rng(2024);
  std::uniform_real_distribution<double> U(0.1, 2.0);
  for (int d : {2, 3, 4}) {
    for (int trial = 0; trial < 3; ++trial) {
      std::vector<double> xi(d);
      for (auto& x : xi) x = U(rng);
      double nrm = 0.0;
      for (double x : xi) nrm += x * x;
      auto ev = surface_ft(2, d, 1.0, xi);
      double want = sphere_ft_closed_k2(d, std::sqrt(nrm));
      INFO("d=" << d << " |xi|=" << std::sqrt(nrm) << " qerr=" << ev.quadrature_error);
      CHECK(ev.value.real() == Catch::Approx(want).margin(2e-3 + 10.0 * ev.quadrature_error));
    }
  }
  // d=1 closed form is cos
  CHECK(sphere_ft_closed_k2(1, 0.3) == Catch::Approx(vol_s1k(2, 1) * std::cos(TWO_PI * 0.3)));
}

TEST_CASE("scaling identity dsigma_r(xi) = dsigma_1(r xi)") {
  std::mt19937_64 rng(55);
  std::uniform_real_distribution<double> Ur(0.6, 2.5), Ux(-1.2, 1.2);
  for (int trial = 0; trial < 20; ++trial) {
    int k = 2 + int(rng() % 3);
    int d = 2 + int(rng() % 2);
    double r = Ur(rng);
    std::vector<double> xi(d), rxi(d);
    for (int i = 0; i < d; ++i) {
      xi[i] = Ux(rng);
      rxi[i] = r * xi[i];
    }
    auto lhs = surface_ft(k, d, r, xi);
    auto rhs = surface_ft(k, d, 1.0, rxi);
    INFO("k=" << k << " d=" << d << " r=" << r);
    CHECK(std::abs(lhs.value - rhs.value) <
          1e-4 + 10.0 * (lhs.quadrature_error + rhs.quadrature_error));
  }
}

TEST_CASE("shell budget: d beyond the cap is redirected") {
  std::vector<double> xi(5, 0.0);
  CHECK_THROWS_AS(surface_ft(2, 5, 1.0, xi), budget_error);
}

TEST_CASE("decay exponent at the poles") {
  QuadratureConfig cfg;
  std::vector<double> pole2{1.0, 0.0};
  auto f22 = decay_fit(2, 2, pole2, 1000.0, cfg);
  CHECK_FALSE(f22.inconclusive);
  CHECK(f22.gamma_hat == Catch::Approx(-0.5).margin(0.15));

  std::vector<double> pole3{1.0, 0.0, 0.0};
  auto f23 = decay_fit(2, 3, pole3, 1000.0, cfg);
  CHECK_FALSE(f23.inconclusive);
  CHECK(f23.gamma_hat == Catch::Approx(-1.0).margin(0.15));

  auto f32 = decay_fit(3, 2, pole2, 1000.0, cfg);
  CHECK_FALSE(f32.inconclusive);
  CHECK(f32.gamma_hat == Catch::Approx(-1.0 / 3).margin(0.15));

  // off-pole decay can only be faster than the uniform estimate
  std::vector<double> diag{1.0, 1.0};
  auto f42 = decay_fit(4, 2, diag, 1000.0, cfg);
  CHECK_FALSE(f42.inconclusive);
  CHECK(f42.gamma_hat <= -(2.0 - 1.0) / 4.0 + 0.15);
}

TEST_CASE("theta integral: Gaussian closed form and symmetry") {
  // k=2, xi=0, z=i eps: integral is 1/sqrt(2 eps)
  for (double eps : {0.5, 0.1, 0.02}) {
    auto v = theta_integral_1d(2, cplx(0.0, eps), 0.0);
    CHECK(std::abs(v - cplx(1.0 / std::sqrt(2.0 * eps), 0.0)) < 1e-8 / eps);
  }
  // quadrature path vs closed form, t != 0 and xi != 0
  for (auto [t, eps, xi] : {std::tuple{0.3, 0.05, 0.7}, std::tuple{-0.2, 0.2, 1.9}}) {
    auto q = theta_integral_1d(2, cplx(t, eps), xi);
    auto c = theta_integral_1d_closed_k2(cplx(t, eps), xi);
    INFO("t=" << t << " eps=" << eps << " xi=" << xi);
    CHECK(std::abs(q - c) < 1e-6 * (1.0 + std::abs(c)));
  }
  // conjugation: z -> -conj(z), xi -> -xi conjugates the transform
  std::vector<double> xs{0.4, 1.1};
  auto a = theta_integral(3, 2, cplx(0.15, 0.08), xs);
  std::vector<double> nxs{-0.4, -1.1};
  auto b_val = theta_integral(3, 2, cplx(-0.15, 0.08), nxs);
  CHECK(std::abs(b_val.integral_value - std::conj(a.integral_value)) < 1e-8);

  CHECK_THROWS_AS(theta_integral_1d(2, cplx(0.1, 0.0), 0.0), domain_error);
  CHECK_THROWS_AS(theta_integral_1d(2, cplx(0.1, -0.3), 0.0), domain_error);
}

TEST_CASE("Hardy bound sweep: scaled magnitude stays flat") {
  // sup over xi in {0, random} of |hhat_z| |z|^{d/k}; away from 0 the
  // transform is super-exponentially small, so the sup rides the xi = 0 branch
  for (auto [k, d] : {std::pair{2, 1}, std::pair{3, 1}, std::pair{2, 2}}) {
    std::vector<double> zs, scaled;
    for (double az = 1e-4; az <= 1.0 + 1e-12; az *= std::pow(10.0, 0.25)) {
      cplx z = az * cplx(std::cos(PI / 4), std::sin(PI / 4));
      double sup = 0.0;
      for (double x : {0.0, 0.37}) {
        std::vector<double> xi(d, x);
        sup = std::max(sup, theta_integral(k, d, z, xi).hardy_scaled);
      }
      zs.push_back(az);
      scaled.push_back(sup);
    }
    auto fit = loglog_fit(zs, scaled);
    INFO("k=" << k << " d=" << d << " slope=" << fit.slope);
    CHECK_FALSE(fit.degenerate);
    CHECK(std::abs(fit.slope) < 0.05);
  }
}

TEST_CASE("theta lattice sum: values, periodicity, factorization") {
  // sum e^{-2 pi m^2} = 1 + 2e^{-2pi} + ...
  auto v = theta_lattice_sum_1d(2, cplx(0.0, 1.0), 0.0);
  double want = 1.0 + 2.0 * std::exp(-TWO_PI) + 2.0 * std::exp(-8.0 * PI);
  CHECK(std::abs(v - cplx(want, 0.0)) < 1e-12);

  auto a = theta_lattice_sum_1d(3, cplx(0.21, 0.05), 0.3);
  auto b_shift = theta_lattice_sum_1d(3, cplx(0.21, 0.05), 0.3 + 2.0);
  CHECK(std::abs(a - b_shift) < 1e-12);

  std::vector<double> xy{0.13, 0.77};
  auto d2 = theta_lattice_sum(2, 2, cplx(0.1, 0.09), xy);
  auto f1 = theta_lattice_sum_1d(2, cplx(0.1, 0.09), 0.13);
  auto f2 = theta_lattice_sum_1d(2, cplx(0.1, 0.09), 0.77);
  CHECK(std::abs(d2.sum_value - f1 * f2) < 1e-12);

  CHECK_THROWS_AS(theta_lattice_sum_1d(2, cplx(0.1, -1.0), 0.0), domain_error);
}

TEST_CASE("second Hardy estimate: super-exponential falloff in |q xi - m|") {
  // |hhat_z(xi - m/q)| should decay like exp(-K |q xi - m|^{k/(k-1)});
  // fit the log against that power and record K
  int k = 2;
  double eps = 1e-2, t = 0.0, q = 3.0;
  std::vector<double> xs, logs;
  for (double u = 1.0; u <= 5.0; u += 0.5) {
    double eta = u / q;  // |q xi - m| = u
    auto v = theta_integral_1d(k, cplx(t, eps), eta);
    if (std::abs(v) < 1e-300) continue;
    xs.push_back(std::pow(u, double(k) / (k - 1)));
    logs.push_back(std::log(std::abs(v)));
  }
  REQUIRE(xs.size() >= 5);
  auto fit = ols_fit(xs, logs);
  CHECK_FALSE(fit.degenerate);
  CHECK(fit.slope < 0.0);  // K = -slope, recorded not asserted
}

TEST_CASE("bump function plateau and support") {
  auto psi = make_bump(0.125, 0.25);
  CHECK(psi(0.0) == 1.0);
  CHECK(psi(0.124) == 1.0);
  CHECK(psi(0.26) == 0.0);
  CHECK(psi(-0.26) == 0.0);
  for (double u = -0.3; u <= 0.3; u += 0.01) {
    CHECK(psi(u) >= 0.0);
    CHECK(psi(u) <= 1.0);
  }
  // plateau containment: Psi_1 * Psi = Psi on a grid
  auto psi1 = make_bump(0.25, 0.5);
  for (int i = 0; i <= 10000; ++i) {
    double u = -0.6 + 1.2 * i / 10000.0;
    REQUIRE(psi1(u) * psi(u) == Catch::Approx(psi(u)).margin(1e-15));
  }
  CHECK_THROWS_AS(make_bump(0.3, 0.2), domain_error);
  CHECK_THROWS_AS(make_bump(0.0, 0.2), domain_error);
}
