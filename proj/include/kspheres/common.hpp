// Shared primitives: error types, exact-ish phase arithmetic, compensated
// accumulation, log-log fitting, deterministic parallel loops.
#pragma once

#include <algorithm>
#include <atomic>
#include <cmath>
#include <complex>
#include <cstdint>
#include <functional>
#include <numeric>
#include <optional>
#include <stdexcept>
#include <string>
#include <thread>
#include <vector>

namespace kspheres {

using cplx = std::complex<double>;
using i128 = __int128;
using u128 = unsigned __int128;

inline constexpr double PI = 3.14159265358979323846264338327950288;
inline constexpr double TWO_PI = 2.0 * PI;

// Budget / resource exhaustion (CLI exit code 3).
struct budget_error : std::runtime_error {
  using std::runtime_error::runtime_error;
};

// Domain and precondition violations (CLI exit code 2).
struct domain_error : std::invalid_argument {
  using std::invalid_argument::invalid_argument;
};

// e(x) = exp(2*pi*i*x), x in turns. Reduced to [-1/2, 1/2] so that mirrored
// phases x and 1-x produce exactly conjugate values.
inline cplx unit_phase(double turns) {
  double y = turns - std::floor(turns);
  if (y >= 0.5) y -= 1.0;
  return {std::cos(TWO_PI * y), std::sin(TWO_PI * y)};
}

// Fractional part in [0,1). Exact for |x| < 2^52 (floor subtraction is exact).
inline double frac1(double x) {
  double f = x - std::floor(x);
  if (f >= 1.0) f = 0.0;   // guards x = -tiny rounding to 1.0
  return f;
}

inline i128 ipow_i128(int64_t base, int exp) {
  i128 r = 1;
  for (int i = 0; i < exp; ++i) r *= base;
  return r;
}

inline u128 ipow_u128(uint64_t base, int exp) {
  u128 r = 1;
  for (int i = 0; i < exp; ++i) r *= base;
  return r;
}

inline uint64_t mulmod_u64(uint64_t a, uint64_t b, uint64_t m) {
  return static_cast<uint64_t>((u128)a * b % m);
}

inline uint64_t powmod_u64(uint64_t b, uint64_t e, uint64_t m) {
  uint64_t r = 1 % m;
  b %= m;
  while (e) {
    if (e & 1) r = mulmod_u64(r, b, m);
    b = mulmod_u64(b, b, m);
    e >>= 1;
  }
  return r;
}

inline double u128_to_double(u128 v) {
  return static_cast<double>(static_cast<uint64_t>(v >> 64)) * 18446744073709551616.0 +
         static_cast<double>(static_cast<uint64_t>(v));
}

inline std::string u128_to_string(u128 v) {
  if (v == 0) return "0";
  std::string s;
  while (v) {
    s.push_back(char('0' + int(v % 10)));
    v /= 10;
  }
  std::reverse(s.begin(), s.end());
  return s;
}

// frac(t*n) for 128-bit integer n without catastrophic argument growth.
// n is split into 26-bit chunks; t*2^(26i) mod 1 is exact (power-of-two scaling
// and floor subtraction are exact), and chunk products are accumulated with
// fma-based two-products. Error stays a few ulp independent of n.
inline double frac_prod_mod1(double t, u128 n) {
  double scaled = frac1(t);   // t * 2^(26*i) mod 1, exact at i = 0
  double hi = 0.0, lo = 0.0;
  while (n != 0) {
    double chunk = static_cast<double>(static_cast<uint32_t>(n & 0x3ffffffu));
    n >>= 26;
    double p = chunk * scaled;
    double perr = std::fma(chunk, scaled, -p);  // (p, perr) is the exact product
    p -= std::floor(p);                         // exact: p < 2^26
    // two-sum of (hi, p); the pair (hi, lo) stays an exact representation
    double s = hi + p;
    double z = s - hi;
    double e = (hi - (s - z)) + (p - z);
    hi = s - std::floor(s);  // exact reduce, hi stays in [0, 2)
    lo += e + perr;
    // advance scale: *2^26 is exact, frac1 exact
    scaled = frac1(scaled * 67108864.0);
  }
  return frac1(hi + lo);
}

// Neumaier compensated accumulator.
struct KahanSum {
  double sum = 0.0, c = 0.0;
  void add(double x) {
    double t = sum + x;
    if (std::abs(sum) >= std::abs(x))
      c += (sum - t) + x;
    else
      c += (x - t) + sum;
    sum = t;
  }
  double value() const { return sum + c; }
};

struct KahanCplx {
  KahanSum re, im;
  void add(cplx z) {
    re.add(z.real());
    im.add(z.imag());
  }
  cplx value() const { return {re.value(), im.value()}; }
};

// Ordinary least squares slope of y against x.
struct FitResult {
  double slope = 0.0;
  double intercept = 0.0;
  bool degenerate = true;
};

inline FitResult ols_fit(const std::vector<double>& x, const std::vector<double>& y) {
  FitResult r;
  if (x.size() != y.size() || x.size() < 2) return r;
  double xm = std::accumulate(x.begin(), x.end(), 0.0) / x.size();
  double ym = std::accumulate(y.begin(), y.end(), 0.0) / y.size();
  double sxx = 0.0, sxy = 0.0;
  for (size_t i = 0; i < x.size(); ++i) {
    sxx += (x[i] - xm) * (x[i] - xm);
    sxy += (x[i] - xm) * (y[i] - ym);
  }
  if (sxx <= 0.0) return r;
  r.slope = sxy / sxx;
  r.intercept = ym - r.slope * xm;
  r.degenerate = false;
  return r;
}

// log-log fit of |values| against abscissae, skipping nonpositive entries.
inline FitResult loglog_fit(const std::vector<double>& t, const std::vector<double>& v) {
  std::vector<double> x, y;
  for (size_t i = 0; i < t.size(); ++i)
    if (t[i] > 0.0 && v[i] > 0.0) {
      x.push_back(std::log(t[i]));
      y.push_back(std::log(v[i]));
    }
  return ols_fit(x, y);
}

// Collapses (t, v) samples into per-block maxima over geometric blocks of the
// given ratio; stabilises slope fits of oscillatory magnitudes.
inline void block_maxima(const std::vector<double>& t, const std::vector<double>& v,
                         double block_ratio, std::vector<double>& bt, std::vector<double>& bv) {
  bt.clear();
  bv.clear();
  if (t.empty()) return;
  double lo = t.front(), hi = lo * block_ratio;
  double best = -1.0, where = lo;
  for (size_t i = 0; i < t.size(); ++i) {
    if (t[i] >= hi) {
      if (best >= 0.0) {
        bt.push_back(where);
        bv.push_back(best);
      }
      while (t[i] >= hi) {
        lo = hi;
        hi = lo * block_ratio;
      }
      best = -1.0;
    }
    if (v[i] > best) {
      best = v[i];
      where = t[i];
    }
  }
  if (best >= 0.0) {
    bt.push_back(where);
    bv.push_back(best);
  }
}

// Deterministic worker pool: fixed chunking independent of thread count, so
// per-chunk partials can be reduced in chunk order and results are
// bit-identical for any number of workers.
inline void parallel_chunks(int64_t n_items, int64_t chunk, int threads,
                            const std::function<void(int64_t lo, int64_t hi, int64_t chunk_index)>& body) {
  if (n_items <= 0) return;
  if (chunk <= 0) chunk = 1;
  int64_t n_chunks = (n_items + chunk - 1) / chunk;
  if (threads <= 1 || n_chunks == 1) {
    for (int64_t c = 0; c < n_chunks; ++c)
      body(c * chunk, std::min(n_items, (c + 1) * chunk), c);
    return;
  }
  std::atomic<int64_t> next{0};
  auto worker = [&] {
    for (;;) {
      int64_t c = next.fetch_add(1);
      if (c >= n_chunks) return;
      body(c * chunk, std::min(n_items, (c + 1) * chunk), c);
    }
  };
  int nt = std::min<int64_t>(threads, n_chunks);
  std::vector<std::thread> pool;
  pool.reserve(nt);
  for (int i = 0; i < nt; ++i) pool.emplace_back(worker);
  for (auto& th : pool) th.join();
}

inline int64_t integer_root(int64_t n, int k) {
  if (n < 0) return -1;
  if (n == 0) return 0;
  int64_t r = static_cast<int64_t>(std::floor(std::pow(double(n), 1.0 / k) + 0.5)) + 1;
  while (r > 0 && ipow_i128(r, k) > n) --r;
  return r;
}

inline int64_t gcd_i64(int64_t a, int64_t b) {
  while (b) {
    int64_t t = a % b;
    a = b;
    b = t;
  }
  return a < 0 ? -a : a;
}

}  // namespace kspheres
