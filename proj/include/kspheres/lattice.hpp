// Exact lattice-point counting on arithmetic k-spheres {m in Z^d : sum |m_i|^k = n},
// lexicographic enumeration, and the sphere exponential sum
//   a_hat_r(xi) = sum_{m in S_r} e(m . xi).
//
// Counts run through a dynamic program over the level axis: the table for
// j coordinates at level s is the j-fold convolution of the one-dimensional
// power-count table. Exponential sums reuse the same recursion with complex
// weights 2 cos(2 pi m xi_j) per |m|, so the cost is O(d * n * n^(1/k)) per
// evaluation and counts stay exact in 128-bit integers.
#pragma once

#include <span>

#include "kspheres/common.hpp"

namespace kspheres {

struct SphereSpec {
  int degree = 2;       // k >= 2
  int dimension = 1;    // d >= 1
  int64_t level = 0;    // n = r^k >= 0

  void validate() const {
    if (degree < 2) throw domain_error("SphereSpec: degree k must be >= 2");
    if (dimension < 1) throw domain_error("SphereSpec: dimension d must be >= 1");
    if (level < 0) throw domain_error("SphereSpec: level n must be >= 0");
  }
  double radius() const { return std::pow(double(level), 1.0 / degree); }
};

struct LatticeBudget {
  int64_t max_level = 1'000'000;
  int64_t enumeration_cap = 10'000'000;  // points per stream
};

struct SphereCount {
  SphereSpec spec;
  u128 count = 0;
};

struct SphereExpSum {
  SphereSpec spec;
  std::vector<double> frequency;
  cplx value{0.0, 0.0};
};

namespace detail {
inline void check_level_budget(const SphereSpec& spec, const LatticeBudget& budget) {
  spec.validate();
  if (spec.level > budget.max_level)
    throw budget_error("lattice: level " + std::to_string(spec.level) +
                       " exceeds budget " + std::to_string(budget.max_level));
}
}  // namespace detail

// c_k[n] = #{m in Z : |m|^k = n}: 1 at n=0, 2 at positive k-th powers, else 0.
inline std::vector<int64_t> one_dim_power_counts(int k, int64_t n_max,
                                                 const LatticeBudget& budget = {}) {
  if (k < 2) throw domain_error("one_dim_power_counts: k must be >= 2");
  if (n_max < 0) throw domain_error("one_dim_power_counts: n_max must be >= 0");
  if (n_max > budget.max_level)
    throw budget_error("one_dim_power_counts: n_max exceeds budget");
  std::vector<int64_t> c(n_max + 1, 0);
  c[0] = 1;
  for (int64_t j = 1; ipow_i128(j, k) <= n_max; ++j) c[ipow_i128(j, k)] += 2;
  return c;
}

// Counts for every level 0..n_max in one DP sweep (d-fold convolution).
inline std::vector<u128> count_all_levels(int k, int d, int64_t n_max,
                                          const LatticeBudget& budget = {}) {
  SphereSpec probe{k, d, n_max};
  detail::check_level_budget(probe, budget);
  int64_t B = integer_root(n_max, k);
  std::vector<u128> cur(n_max + 1, 0);
  cur[0] = 1;
  std::vector<u128> next(n_max + 1);
  for (int dim = 0; dim < d; ++dim) {
    std::fill(next.begin(), next.end(), u128(0));
    for (int64_t s = 0; s <= n_max; ++s) {
      u128 v = cur[s];
      if (v == 0) continue;
      next[s] += v;
      for (int64_t j = 1; j <= B; ++j) {
        int64_t jj = int64_t(ipow_i128(j, k));
        if (s + jj > n_max) break;
        next[s + jj] += 2 * v;
      }
    }
    cur.swap(next);
  }
  return cur;
}

inline SphereCount count_sphere(const SphereSpec& spec, const LatticeBudget& budget = {}) {
  detail::check_level_budget(spec, budget);
  auto counts = count_all_levels(spec.degree, spec.dimension, spec.level, budget);
  return {spec, counts[spec.level]};
}

// Reachability table: reach[j*(n+1)+s] says whether s is a sum of j k-th powers.
// Prunes dead branches during enumeration.
inline std::vector<char> reachability_table(int k, int d, int64_t n_max) {
  int64_t W = n_max + 1;
  std::vector<char> reach((d + 1) * W, 0);
  reach[0] = 1;
  int64_t B = integer_root(n_max, k);
  for (int j = 1; j <= d; ++j) {
    const char* prev = reach.data() + (j - 1) * W;
    char* row = reach.data() + j * W;
    for (int64_t s = 0; s <= n_max; ++s) {
      if (prev[s]) {
        row[s] = 1;
        for (int64_t m = 1; m <= B; ++m) {
          int64_t mk = int64_t(ipow_i128(m, k));
          if (s + mk > n_max) break;
          row[s + mk] = 1;
        }
      }
    }
  }
  return reach;
}

// Visits every lattice point of the sphere exactly once, in lexicographic
// order over Z^d. Throws budget_error if the stream would exceed the cap.
template <typename Visitor>
inline u128 enumerate_sphere(const SphereSpec& spec, Visitor&& visit,
                             const LatticeBudget& budget = {}) {
  detail::check_level_budget(spec, budget);
  u128 total = count_sphere(spec, budget).count;
  if (total > u128(budget.enumeration_cap))
    throw budget_error("enumerate_sphere: " + u128_to_string(total) +
                       " points exceed enumeration cap; use count_sphere");
  int d = spec.dimension, k = spec.degree;
  int64_t n = spec.level;
  auto reach = reachability_table(k, d, n);
  int64_t W = n + 1;
  std::vector<int64_t> m(d, 0);
  u128 emitted = 0;
  // depth-first over coordinates, values ascending
  std::function<void(int, int64_t)> rec = [&](int i, int64_t rem) {
    if (i == d) {
      if (rem == 0) {
        ++emitted;
        visit(std::span<const int64_t>(m.data(), d));
      }
      return;
    }
    int64_t B = integer_root(rem, k);
    for (int64_t v = -B; v <= B; ++v) {
      int64_t rem2 = rem - int64_t(ipow_i128(v < 0 ? -v : v, k));
      if (rem2 < 0) continue;
      if (!reach[(d - i - 1) * W + rem2]) continue;
      m[i] = v;
      rec(i + 1, rem2);
    }
    m[i] = 0;
  };
  rec(0, n);
  return emitted;
}

inline std::vector<std::vector<int64_t>> enumerate_sphere_points(
    const SphereSpec& spec, const LatticeBudget& budget = {}) {
  std::vector<std::vector<int64_t>> pts;
  enumerate_sphere(
      spec, [&](std::span<const int64_t> m) { pts.emplace_back(m.begin(), m.end()); },
      budget);
  return pts;
}

// a_hat_r(xi) via the level-axis DP with per-coordinate weights
// w_j(|m|) = e(m xi_j) + e(-m xi_j) = 2 cos(2 pi m xi_j).
inline SphereExpSum sphere_exp_sum(const SphereSpec& spec, std::span<const double> xi,
                                   const LatticeBudget& budget = {}) {
  detail::check_level_budget(spec, budget);
  if (int(xi.size()) != spec.dimension)
    throw domain_error("sphere_exp_sum: frequency dimension mismatch");
  int64_t n = spec.level;
  int k = spec.degree;
  int64_t B = integer_root(n, k);
  std::vector<cplx> cur(n + 1, cplx(0.0)), next(n + 1);
  cur[0] = 1.0;
  for (int dim = 0; dim < spec.dimension; ++dim) {
    // phases from reduced arguments: frac(m*xi) stays small for every m
    std::vector<double> w(B + 1);
    w[0] = 1.0;
    for (int64_t mj = 1; mj <= B; ++mj)
      w[mj] = 2.0 * std::cos(TWO_PI * frac1(double(mj) * xi[dim]));
    std::fill(next.begin(), next.end(), cplx(0.0));
    for (int64_t s = 0; s <= n; ++s) {
      cplx v = cur[s];
      if (v == cplx(0.0)) continue;
      next[s] += v;
      for (int64_t j = 1; j <= B; ++j) {
        int64_t jj = int64_t(ipow_i128(j, k));
        if (s + jj > n) break;
        next[s + jj] += w[j] * v;
      }
    }
    cur.swap(next);
  }
  SphereExpSum out;
  out.spec = spec;
  out.frequency.assign(xi.begin(), xi.end());
  out.value = cur[n];
  return out;
}

// Rational-frequency variant: xi_i = p_i / Q with phases taken from exact
// residues mod Q, immune to drift on large spheres.
inline SphereExpSum sphere_exp_sum_rational(const SphereSpec& spec,
                                            std::span<const int64_t> p, int64_t Q,
                                            const LatticeBudget& budget = {}) {
  detail::check_level_budget(spec, budget);
  if (Q < 1) throw domain_error("sphere_exp_sum_rational: Q must be >= 1");
  if (int(p.size()) != spec.dimension)
    throw domain_error("sphere_exp_sum_rational: frequency dimension mismatch");
  int64_t n = spec.level;
  int k = spec.degree;
  int64_t B = integer_root(n, k);
  std::vector<double> cos_table(Q);
  for (int64_t j = 0; j < Q; ++j) cos_table[j] = std::cos(TWO_PI * double(j) / double(Q));
  std::vector<cplx> cur(n + 1, cplx(0.0)), next(n + 1);
  cur[0] = 1.0;
  for (int dim = 0; dim < spec.dimension; ++dim) {
    int64_t pq = ((p[dim] % Q) + Q) % Q;
    std::vector<double> w(B + 1);
    w[0] = 1.0;
    for (int64_t mj = 1; mj <= B; ++mj)
      w[mj] = 2.0 * cos_table[int64_t(mulmod_u64(uint64_t(mj % Q), uint64_t(pq), uint64_t(Q)))];
    std::fill(next.begin(), next.end(), cplx(0.0));
    for (int64_t s = 0; s <= n; ++s) {
      cplx v = cur[s];
      if (v == cplx(0.0)) continue;
      next[s] += v;
      for (int64_t j = 1; j <= B; ++j) {
        int64_t jj = int64_t(ipow_i128(j, k));
        if (s + jj > n) break;
        next[s + jj] += w[j] * v;
      }
    }
    cur.swap(next);
  }
  SphereExpSum out;
  out.spec = spec;
  out.frequency.resize(p.size());
  for (size_t i = 0; i < p.size(); ++i) out.frequency[i] = double(p[i]) / double(Q);
  out.value = cur[n];
  return out;
}

// Admissible levels n <= n_max (nonempty spheres), ascending.
inline std::vector<int64_t> admissible_levels(int k, int d, int64_t n_lo, int64_t n_hi,
                                              const LatticeBudget& budget = {}) {
  if (n_hi < n_lo) return {};
  auto counts = count_all_levels(k, d, n_hi, budget);
  std::vector<int64_t> out;
  for (int64_t n = std::max<int64_t>(n_lo, 1); n <= n_hi; ++n)
    if (counts[n] > 0) out.push_back(n);
  return out;
}

}  // namespace kspheres
