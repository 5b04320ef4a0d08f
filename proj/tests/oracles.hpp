// Test-only oracles, independent of the library's computation paths:
// brute-force lattice enumeration, direct multi-dimensional Gauss sums,
// classical closed forms, and number-theoretic identities.
#pragma once

#include <cmath>
#include <complex>
#include <cstdint>
#include <functional>
#include <numeric>
#include <vector>

namespace oracles {

using cplx = std::complex<double>;
constexpr double TAU = 6.283185307179586476925286766559;

inline cplx e(double turns) { return {std::cos(TAU * turns), std::sin(TAU * turns)}; }

inline int64_t ipow(int64_t b, int e_) {
  int64_t r = 1;
  for (int i = 0; i < e_; ++i) r *= b;
  return r;
}

// All lattice points with sum |m_i|^k = level, nested loops with pruning only
// on the running sum (no reachability tables, no DP).
inline void brute_force_sphere(int k, int d, int64_t level,
                               const std::function<void(const std::vector<int64_t>&)>& visit) {
  std::vector<int64_t> m(d, 0);
  std::function<void(int, int64_t)> rec = [&](int i, int64_t rem) {
    if (i == d) {
      if (rem == 0) visit(m);
      return;
    }
    int64_t B = 0;
    while (ipow(B + 1, k) <= rem) ++B;
    for (int64_t v = -B; v <= B; ++v) {
      m[i] = v;
      rec(i + 1, rem - ipow(v < 0 ? -v : v, k));
    }
    m[i] = 0;
  };
  rec(0, level);
}

inline int64_t brute_force_count(int k, int d, int64_t level) {
  int64_t c = 0;
  brute_force_sphere(k, d, level, [&](const std::vector<int64_t>&) { ++c; });
  return c;
}

// Histogram of counts for all levels <= n_max in a single box scan.
inline std::vector<int64_t> brute_force_counts_upto(int k, int d, int64_t n_max) {
  std::vector<int64_t> hist(n_max + 1, 0);
  std::vector<int64_t> m(d, 0);
  std::function<void(int, int64_t)> rec = [&](int i, int64_t acc) {
    if (i == d) {
      ++hist[acc];
      return;
    }
    int64_t B = 0;
    while (ipow(B + 1, k) + acc <= n_max) ++B;
    for (int64_t v = -B; v <= B; ++v) rec(i + 1, acc + ipow(v < 0 ? -v : v, k));
  };
  rec(0, 0);
  return hist;
}

inline cplx brute_force_exp_sum(int k, int d, int64_t level, const std::vector<double>& xi) {
  cplx s = 0.0;
  brute_force_sphere(k, d, level, [&](const std::vector<int64_t>& m) {
    double ph = 0.0;
    for (int i = 0; i < d; ++i) ph += double(m[i]) * xi[i];
    s += e(ph - std::floor(ph));
  });
  return s;
}

// Jacobi: r_4(n) = 8 sum_{d | n, 4 !| d} d.
inline int64_t jacobi_r4(int64_t n) {
  int64_t s = 0;
  for (int64_t d = 1; d * d <= n; ++d) {
    if (n % d) continue;
    if (d % 4) s += d;
    int64_t q = n / d;
    if (q != d && q % 4) s += q;
  }
  return 8 * s;
}

// Direct d-dimensional Gauss sum q^{-d} sum_{b in (Z_q)^d} e((a sum b_i^k + b.m)/q).
inline cplx direct_gauss_sum(int k, int d, int64_t a, int64_t q, const std::vector<int64_t>& m) {
  std::vector<int64_t> b(d, 1);
  cplx s = 0.0;
  for (;;) {
    int64_t ph = 0;
    for (int i = 0; i < d; ++i) {
      int64_t bk = 1;
      for (int j = 0; j < k; ++j) bk = bk * b[i] % q;
      ph = (ph + a % q * bk + b[i] % q * (((m[i] % q) + q) % q)) % q;
    }
    s += e(double(ph) / double(q));
    int i = d - 1;
    while (i >= 0 && ++b[i] > q) b[i--] = 1;
    if (i < 0) break;
  }
  return s / std::pow(double(q), d);
}

inline int64_t totient(int64_t n) {
  int64_t r = n;
  for (int64_t p = 2; p * p <= n; ++p)
    if (n % p == 0) {
      while (n % p == 0) n /= p;
      r -= r / p;
    }
  if (n > 1) r -= r / n;
  return r;
}

// Naive O(N) Weyl sum in long double, the reference for moderate N.
inline cplx naive_weyl_sum(int k, int64_t N, long double t, long double xi) {
  long double re = 0, im = 0;
  for (int64_t n = 1; n <= N; ++n) {
    long double nk = 1;
    for (int i = 0; i < k; ++i) nk *= (long double)n;
    long double ph = t * nk + xi * (long double)n;
    ph -= std::floor(ph);
    re += std::cos((long double)TAU * ph);
    im += std::sin((long double)TAU * ph);
  }
  return {double(re), double(im)};
}

}  // namespace oracles
