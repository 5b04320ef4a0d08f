// Weyl sums S_N = sum_{n=1}^N e(t n^k + xi n), normalized Gauss sums
// G(a,q,m) = q^-d sum_b e((a|b|^k + b.m)/q), and the scaled-supremum
// diagnostic for Hua's bound |G| <~ q^(-d/k).
//
// Weyl phases are computed per term from reduced arguments: frac(t n^k) via
// 26-bit chunked double-double products, so the phase error is a few ulp flat
// in N instead of growing with t n^k.
#pragma once

#include <span>

#include "kspheres/common.hpp"
#include "kspheres/farey.hpp"

namespace kspheres {

struct WeylSumSpec {
  int degree = 2;  // k
  int64_t length = 1;
  double t = 0.0;
  double xi = 0.0;
  std::optional<std::pair<int64_t, int64_t>> rational_anchor;  // (a, q)

  void validate() const {
    if (degree < 2) throw domain_error("WeylSumSpec: k must be >= 2");
    if (length < 1) throw domain_error("WeylSumSpec: N must be >= 1");
    if (rational_anchor) {
      auto [a, q] = *rational_anchor;
      if (!(1 <= a && a < q && q <= length))
        throw domain_error("WeylSumSpec: anchor must satisfy 1 <= a < q <= N");
      if (gcd_i64(a, q) != 1) throw domain_error("WeylSumSpec: anchor not reduced");
      if (std::abs(t - double(a) / double(q)) > 1.0 / (double(q) * double(q)) + 1e-15)
        throw domain_error("WeylSumSpec: anchor violates |t - a/q| <= q^-2");
    }
  }
};

struct HypothesisConfig {
  double tau = 0.5;
  void validate() const {
    if (!(tau > 0.0 && tau <= 1.0)) throw domain_error("HypothesisConfig: tau in (0,1]");
  }
};

// tau presets: Weyl for all k, Wooley for k >= 3 / k >= 4, Montgomery's
// conjectured 1/k.
inline double tau_weyl(int k) { return std::pow(2.0, 1.0 - k); }
inline double tau_wooley(int k) {
  if (k >= 4) return 1.0 / (2.0 * k * (k - 2));
  if (k == 3) return 1.0 / (2.0 * k * (k - 1));
  return tau_weyl(k);
}
inline double tau_montgomery(int k) { return 1.0 / k; }

inline cplx weyl_sum(const WeylSumSpec& spec) {
  spec.validate();
  KahanCplx acc;
  double xi = frac1(spec.xi);
  for (int64_t n = 1; n <= spec.length; ++n) {
    u128 nk = ipow_u128(uint64_t(n), spec.degree);
    double ph = frac_prod_mod1(spec.t, nk);
    double lin = frac1(double(n) * xi);  // n*xi < 2^52 within budgets, exact reduce
    acc.add(unit_phase(frac1(ph + lin)));
  }
  return acc.value();
}

// |S_N| / (N (q^-1 + N^-1 + q N^-k)^tau). Requires the rational anchor.
inline double hypothesis_ratio(const WeylSumSpec& spec, const HypothesisConfig& cfg) {
  spec.validate();
  cfg.validate();
  if (!spec.rational_anchor)
    throw domain_error("hypothesis_ratio: rational anchor required (see rational_anchor())");
  auto [a, q] = *spec.rational_anchor;
  (void)a;
  double N = double(spec.length);
  double envelope = 1.0 / double(q) + 1.0 / N + double(q) * std::pow(N, -double(spec.degree));
  return std::abs(weyl_sum(spec)) / (N * std::pow(envelope, cfg.tau));
}

struct GaussSum {
  int degree = 2;
  int dimension = 1;
  int64_t a = 1, q = 1;
  std::vector<int64_t> m;
  cplx value{1.0, 0.0};
};

// One-dimensional normalized sum q^-1 sum_{b=1..q} e((a b^k + b m)/q),
// residue arithmetic exact mod q.
inline cplx gauss_sum_1d(int k, int64_t a, int64_t q, int64_t m) {
  if (q < 1) throw domain_error("gauss_sum: q must be >= 1");
  if (!(1 <= a && a <= q)) throw domain_error("gauss_sum: need 1 <= a <= q");
  if (gcd_i64(a, q) != 1) throw domain_error("gauss_sum: gcd(a,q) != 1");
  uint64_t uq = uint64_t(q);
  uint64_t ua = uint64_t(a % q == 0 ? q : a % q) % uq;
  uint64_t um = uint64_t(((m % q) + q) % q);
  std::vector<cplx> roots(uq);
  for (uint64_t j = 0; j < uq; ++j) roots[j] = unit_phase(double(j) / double(uq));
  KahanCplx acc;
  for (uint64_t b = 1; b <= uq; ++b) {
    uint64_t bk = powmod_u64(b, uint64_t(k), uq);
    uint64_t ph = (mulmod_u64(ua, bk, uq) + mulmod_u64(b % uq, um, uq)) % uq;
    acc.add(roots[ph]);
  }
  return acc.value() / double(q);
}

// d-fold product of the one-dimensional sums (the q^d direct sum exists only
// as a test oracle).
inline GaussSum gauss_sum(int k, int d, int64_t a, int64_t q, std::span<const int64_t> m) {
  if (int(m.size()) != d) throw domain_error("gauss_sum: m dimension mismatch");
  GaussSum g;
  g.degree = k;
  g.dimension = d;
  g.a = a;
  g.q = q;
  g.m.assign(m.begin(), m.end());
  cplx v = 1.0;
  for (int i = 0; i < d; ++i) v *= gauss_sum_1d(k, a, q, m[i]);
  g.value = v;
  return g;
}

// Per-a table of |g1(a,q,m)| suprema over m, and per-q scaled supremum
// sup_{a,m} |G| * q^(d/k) computed through the product structure.
struct HuaRow {
  int64_t q = 1;
  double sup_scaled = 1.0;  // sup_{a,m} |G(a,q,m)| * q^(d/k)
};

struct HuaReport {
  int degree = 2;
  int dimension = 1;
  std::vector<HuaRow> rows;
  double max_scaled = 0.0;
  double loglog_slope = 0.0;  // slope of log sup_scaled vs log q
};

// All 1-D sums g1(a,q,m) for a single q, indexed [a -> m]; a runs over units.
inline std::vector<std::pair<int64_t, std::vector<cplx>>> gauss_sum_1d_table(int k, int64_t q) {
  uint64_t uq = uint64_t(q);
  std::vector<cplx> roots(uq);
  for (uint64_t j = 0; j < uq; ++j) roots[j] = unit_phase(double(j) / double(uq));
  std::vector<uint64_t> bk(uq + 1);
  for (uint64_t b = 1; b <= uq; ++b) bk[b] = powmod_u64(b, uint64_t(k), uq);
  std::vector<std::pair<int64_t, std::vector<cplx>>> table;
  for (int64_t a = 1; a <= q; ++a) {
    if (gcd_i64(a, q) != 1) continue;
    std::vector<cplx> row(uq);
    for (uint64_t m = 0; m < uq; ++m) {
      cplx s = 0.0;
      for (uint64_t b = 1; b <= uq; ++b) {
        uint64_t ph = (mulmod_u64(uint64_t(a), bk[b], uq) + mulmod_u64(b % uq, m, uq)) % uq;
        s += roots[ph];
      }
      row[m] = s / double(q);
    }
    table.emplace_back(a, std::move(row));
  }
  return table;
}

inline HuaReport hua_diagnostic(int k, int d, int64_t q_max, int64_t q_budget = 200) {
  if (q_max < 1) throw domain_error("hua_diagnostic: q_max must be >= 1");
  if (q_max > q_budget) throw budget_error("hua_diagnostic: q_max exceeds budget");
  HuaReport rep;
  rep.degree = k;
  rep.dimension = d;
  std::vector<double> qs, sups;
  for (int64_t q = 1; q <= q_max; ++q) {
    double sup1 = 0.0;
    for (auto& [a, row] : gauss_sum_1d_table(k, q))
      for (auto& v : row) sup1 = std::max(sup1, std::abs(v));
    double scaled = std::pow(sup1, d) * std::pow(double(q), double(d) / double(k));
    rep.rows.push_back({q, scaled});
    rep.max_scaled = std::max(rep.max_scaled, scaled);
    qs.push_back(double(q));
    sups.push_back(scaled);
  }
  auto fit = loglog_fit(qs, sups);
  rep.loglog_slope = fit.degenerate ? 0.0 : fit.slope;
  return rep;
}

}  // namespace kspheres
