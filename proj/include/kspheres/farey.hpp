// Farey sequences, the mediant arc partition of [0,1), and major/minor
// classification. All endpoints are exact rationals; floats appear only at
// the boundary where a measured real t is classified, and even there the
// comparison is exact for the binary value of the double.
#pragma once

#include "kspheres/common.hpp"

namespace kspheres {

// Exact rational on checked __int128. Inputs here are bounded (level budget
// X <= 1e5 keeps every intermediate far below 2^127); overflow throws rather
// than wrapping.
struct Rat {
  i128 num = 0;
  i128 den = 1;

  Rat() = default;
  Rat(i128 n, i128 d) : num(n), den(d) { normalize(); }
  static Rat integer(int64_t n) { return Rat(n, 1); }

  static i128 checked_mul(i128 a, i128 b) {
    i128 r;
    if (__builtin_mul_overflow(a, b, &r)) throw std::overflow_error("Rat: multiply overflow");
    return r;
  }
  static i128 checked_add(i128 a, i128 b) {
    i128 r;
    if (__builtin_add_overflow(a, b, &r)) throw std::overflow_error("Rat: add overflow");
    return r;
  }
  static i128 gcd128(i128 a, i128 b) {
    if (a < 0) a = -a;
    if (b < 0) b = -b;
    while (b) {
      i128 t = a % b;
      a = b;
      b = t;
    }
    return a;
  }
  void normalize() {
    if (den == 0) throw domain_error("Rat: zero denominator");
    if (den < 0) {
      num = -num;
      den = -den;
    }
    i128 g = gcd128(num, den);
    if (g > 1) {
      num /= g;
      den /= g;
    }
  }

  friend Rat operator+(const Rat& a, const Rat& b) {
    return Rat(checked_add(checked_mul(a.num, b.den), checked_mul(b.num, a.den)),
               checked_mul(a.den, b.den));
  }
  friend Rat operator-(const Rat& a, const Rat& b) {
    return Rat(checked_add(checked_mul(a.num, b.den), -checked_mul(b.num, a.den)),
               checked_mul(a.den, b.den));
  }
  friend Rat operator*(const Rat& a, const Rat& b) {
    return Rat(checked_mul(a.num, b.num), checked_mul(a.den, b.den));
  }
  friend bool operator==(const Rat& a, const Rat& b) { return a.num == b.num && a.den == b.den; }
  friend bool operator!=(const Rat& a, const Rat& b) { return !(a == b); }
  friend bool operator<(const Rat& a, const Rat& b) {
    return checked_mul(a.num, b.den) < checked_mul(b.num, a.den);
  }
  friend bool operator<=(const Rat& a, const Rat& b) { return !(b < a); }
  friend bool operator>(const Rat& a, const Rat& b) { return b < a; }
  friend bool operator>=(const Rat& a, const Rat& b) { return !(a < b); }

  double to_double() const { return double(num) / double(den); }
};

// Exact comparison of a double against p/q, interpreting t by its exact
// binary value. Assumes q > 0.
inline int compare_double_rational(double t, i128 p, i128 q) {
  if (!std::isfinite(t)) throw domain_error("compare_double_rational: non-finite t");
  if (t < 0.0) return (p > 0 || (p == 0)) ? (p == 0 && t == 0.0 ? 0 : -1) : 1;
  int e;
  double m = std::frexp(t, &e);              // t = m * 2^e, m in [0.5, 1)
  int64_t mant = int64_t(std::ldexp(m, 53)); // exact: 53-bit integer
  int shift = e - 53;                        // t = mant * 2^shift
  // compare mant * 2^shift * q against p
  i128 lhs = Rat::checked_mul(i128(mant), q);
  if (shift >= 0) {
    for (int i = 0; i < shift; ++i) {
      if (lhs > (i128(1) << 120)) return 1;  // astronomically large
      lhs <<= 1;
    }
    return lhs < p ? -1 : (lhs == p ? 0 : 1);
  }
  i128 rhs = p;
  int s = -shift;
  // p * 2^s may overflow only when t is truly tiny; decide early then
  while (s > 0) {
    if (rhs > (i128(1) << 120)) return lhs == 0 ? (p == 0 ? 0 : -1) : -1;
    rhs <<= 1;
    --s;
  }
  return lhs < rhs ? -1 : (lhs == rhs ? 0 : 1);
}

struct FareyBudget {
  int64_t max_level = 100'000;
};

// One reduced fraction a/q of the dissection with its mediant neighbours.
// The unshifted arc is [lo, hi) except for the glued endpoint arc of 0/1,
// which covers [lo, 1) u [0, hi).
struct FareyArc {
  int64_t a = 0, q = 1;    // reduced fraction a/q
  int64_t q1 = 1, q2 = 1;  // denominators of the Farey neighbours
  Rat lo, hi;              // unshifted endpoints
  bool wraps = false;      // the glued arc of 0/1 = 1/1

  Rat fraction() const { return Rat(a, q); }
  Rat shifted_lo() const { return lo - fraction(); }
  Rat shifted_hi() const { return hi - fraction(); }
  Rat length() const {
    if (!wraps) return hi - lo;
    return (Rat::integer(1) - lo) + hi;
  }
  bool is_major(double R) const { return double(q) < R; }
};

// F(X) as reduced fractions in [0,1], increasing, via the next-term
// recurrence on mediants.
inline std::vector<std::pair<int64_t, int64_t>> farey_sequence(int64_t X,
                                                               const FareyBudget& budget = {}) {
  if (X < 1) throw domain_error("farey_sequence: X must be >= 1");
  if (X > budget.max_level) throw budget_error("farey_sequence: X exceeds budget");
  std::vector<std::pair<int64_t, int64_t>> seq;
  int64_t a = 0, b = 1, c = 1, d = X;
  seq.emplace_back(a, b);
  while (c <= X) {
    seq.emplace_back(c, d);
    int64_t t = (X + b) / d;
    int64_t c2 = t * c - a, d2 = t * d - b;
    a = c;
    b = d;
    c = c2;
    d = d2;
  }
  return seq;
}

// The arc partition at level X. Arcs tile [0,1) exactly; the endpoint arcs of
// 0/1 and 1/1 are glued into one wrapped arc, listed first.
inline std::vector<FareyArc> arc_partition(int64_t X, const FareyBudget& budget = {}) {
  auto seq = farey_sequence(X, budget);
  std::vector<FareyArc> arcs;
  size_t n = seq.size();
  FareyArc glued;
  glued.a = 0;
  glued.q = 1;
  glued.q1 = seq[n - 2].second;  // left neighbour of 1/1
  glued.q2 = seq[1].second;      // right neighbour of 0/1
  glued.lo = Rat(seq[n - 2].first + 1, seq[n - 2].second + 1);  // mediant with 1/1
  glued.hi = Rat(seq[1].first, seq[1].second + 1);              // mediant of 0/1, a1/q1
  glued.wraps = true;
  arcs.push_back(glued);
  for (size_t i = 1; i + 1 < n; ++i) {
    FareyArc arc;
    arc.a = seq[i].first;
    arc.q = seq[i].second;
    arc.q1 = seq[i - 1].second;
    arc.q2 = seq[i + 1].second;
    arc.lo = Rat(seq[i - 1].first + seq[i].first, seq[i - 1].second + seq[i].second);
    arc.hi = Rat(seq[i].first + seq[i + 1].first, seq[i].second + seq[i + 1].second);
    arcs.push_back(arc);
  }
  return arcs;
}

enum class ArcClass { Major, minor };

struct Classified {
  FareyArc arc;
  ArcClass cls = ArcClass::minor;
};

namespace detail {
// containing arc among the partition, by binary search on lo endpoints of the
// non-wrapped arcs (sorted); the wrapped arc catches both ends.
inline const FareyArc& locate(const std::vector<FareyArc>& arcs,
                              const std::function<int(const Rat&)>& cmp_t_vs) {
  // arcs[0] wraps; arcs[1..] have increasing lo
  size_t lo = 1, hi = arcs.size();
  if (arcs.size() == 1 || cmp_t_vs(arcs[1].lo) < 0) return arcs[0];
  while (lo + 1 < hi) {
    size_t mid = (lo + hi) / 2;
    if (cmp_t_vs(arcs[mid].lo) >= 0)
      lo = mid;
    else
      hi = mid;
  }
  // t >= arcs[lo].lo; inside unless t >= arcs[lo].hi (then wrapped end-arc)
  if (cmp_t_vs(arcs[lo].hi) >= 0) return arcs[0];
  return arcs[lo];
}
}  // namespace detail

inline Classified classify(const Rat& t, int64_t X, double R, const FareyBudget& budget = {}) {
  if (t < Rat::integer(0) || t >= Rat::integer(1))
    throw domain_error("classify: t must lie in [0,1)");
  if (R < 1.0) throw domain_error("classify: R must be >= 1");
  auto arcs = arc_partition(X, budget);
  const FareyArc& arc = detail::locate(
      arcs, [&](const Rat& b) { return t < b ? -1 : (t == b ? 0 : 1); });
  return {arc, arc.is_major(R) ? ArcClass::Major : ArcClass::minor};
}

inline Classified classify(double t, int64_t X, double R, const FareyBudget& budget = {}) {
  if (!(t >= 0.0 && t < 1.0)) throw domain_error("classify: t must lie in [0,1)");
  if (R < 1.0) throw domain_error("classify: R must be >= 1");
  auto arcs = arc_partition(X, budget);
  const FareyArc& arc = detail::locate(
      arcs, [&](const Rat& b) { return compare_double_rational(t, b.num, b.den); });
  return {arc, arc.is_major(R) ? ArcClass::Major : ArcClass::minor};
}

// Dissection level for ambient scale R and degree k, per the R^(k-1) rule.
inline int64_t dissection_level(double R, int k) {
  double X = std::pow(R, k - 1);
  int64_t lv = int64_t(std::floor(X));
  return std::max<int64_t>(1, lv);
}

// Continued-fraction convergents of t, as (a, q) pairs with q ascending.
inline std::vector<std::pair<int64_t, int64_t>> convergents(double t, int64_t q_max) {
  std::vector<std::pair<int64_t, int64_t>> out;
  if (!(t >= 0.0 && t < 1.0)) throw domain_error("convergents: t must lie in [0,1)");
  // h/k convergents via the Euclidean expansion of the double's exact value
  double x = t;
  int64_t h0 = 0, k0 = 1, h1 = 1, k1 = 0;
  for (int iter = 0; iter < 64; ++iter) {
    double fl = std::floor(x);
    if (fl > 9.0e17) break;
    int64_t ai = int64_t(fl);
    i128 h2 = i128(ai) * h1 + h0;
    i128 k2 = i128(ai) * k1 + k0;
    if (k2 > q_max) break;
    h0 = h1;
    k0 = k1;
    h1 = int64_t(h2);
    k1 = int64_t(k2);
    if (k1 >= 1) out.emplace_back(h1, k1);
    double rem = x - fl;
    if (rem < 1e-18) break;
    x = 1.0 / rem;
  }
  return out;
}

// Best rational anchor a/q with 1 <= a < q <= q_max and |t - a/q| <= q^-2.
// Among convergents the error is minimized by the largest admissible q;
// exact ties go to the smallest q.
inline std::optional<std::pair<int64_t, int64_t>> rational_anchor(double t, int64_t q_max) {
  auto cs = convergents(t, q_max);
  std::optional<std::pair<int64_t, int64_t>> best;
  double best_err = 2.0;
  for (auto [a, q] : cs) {
    if (a < 1 || a >= q) continue;  // excludes 0/1 and 1/1
    double err = std::abs(t - double(a) / double(q));
    if (err > 1.0 / (double(q) * double(q))) continue;
    if (err < best_err - 1e-18) {
      best_err = err;
      best = {a, q};
    }
  }
  return best;
}

}  // namespace kspheres
