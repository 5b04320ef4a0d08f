// Assembly of the circle-method approximation to the sphere exponential sum:
// the Gauss-sum-weighted, bump-localized surface transforms
//
//   C_hat_r(xi) = 2^d r^(d-k) sum_{q<=Q} sum_{a in U_q} e(-a r^k / q)
//                 G(a,q,m*) Psi(q xi - m*) dsigma_r(xi - m*/q),
//
// the intermediate multipliers J_r / I_r, and grid scans of the error
// E = a_hat_r - C_hat_r. m* is the nearest integer vector to q xi (at most
// one term survives the bump). dsigma_r is the constant-mass normalized
// transform from surface.hpp; the factor 2^d r^(d-k) restores the raw
// sublevel-derivative mass, which is what makes C_hat(0) track N_{k,d}(r).
// The twist e(-a r^k/q) is forced by the arc shift t -> t + a/q under the
// e(+m.xi) transform convention.
#pragma once

#include <cstring>
#include <unordered_map>

#include "kspheres/expsums.hpp"
#include "kspheres/farey.hpp"
#include "kspheres/lattice.hpp"
#include "kspheres/surface.hpp"

namespace kspheres {

struct ApproxConfig {
  BumpFunction bump{0.125, 0.25};   // Psi
  BumpFunction bump1{0.25, 0.5};    // Psi_1 with Psi_1 Psi = Psi
  double epsilon = 0.0;             // ambient smoothing; 0 selects r^-k
  QuadratureConfig quad;
  LatticeBudget lattice;
  int64_t q_cap = 200;
  double max_scan_ops = 4e11;       // generic-path cost guard
  int threads = 1;
  int levels_per_block = 3;         // error_exponent_fit sampling per dyadic block
  bool use_closed_forms = true;     // Gaussian / Bessel fast paths for k = 2
};

inline int default_truncation(double r) {
  return int(std::min<double>(200.0, std::ceil(std::sqrt(std::max(1.0, r)))));
}

// ---------------------------------------------------------------------------
// Surface-transform router for multiplier work. k = 2 has the Bessel closed
// form in any dimension; k >= 3 uses shell quadrature up to the shell budget
// and the separable h_z route beyond it.

namespace detail {

// sigma_hat via I_r(eta) = int h_z_hat(eta) e(-r^k t) dt = e^{-2 pi eps r^k}
// (raw transform), with the one-dimensional factors of h_z_hat tabulated on a
// (t, eta) grid and interpolated. Used only for k >= 3, d > shell budget.
struct ThetaSurface {
  int k = 3;
  double r = 1.0;
  double eps = 1.0;
  std::vector<double> t_nodes, t_weights;  // composite Simpson over [-T0, T0]
  std::vector<double> eta_grid;
  std::vector<std::vector<cplx>> table;  // [t][eta]

  void build(int k_, double r_, const QuadratureConfig& quad) {
    k = k_;
    r = r_;
    eps = std::pow(r, -double(k));
    double rk = std::pow(r, double(k));
    double T0 = std::max(6.0, 40.0 / rk);
    int nt = int(std::max(600.0, 24.0 * rk * T0)) | 1;
    t_nodes.resize(nt);
    t_weights.resize(nt);
    double h = 2.0 * T0 / (nt - 1);
    for (int i = 0; i < nt; ++i) {
      t_nodes[i] = -T0 + i * h;
      double w = (i == 0 || i == nt - 1) ? 1.0 : (i % 2 ? 4.0 : 2.0);
      t_weights[i] = w * h / 3.0;
    }
    int ne = 161;
    eta_grid.resize(ne);
    for (int j = 0; j < ne; ++j) eta_grid[j] = -0.55 + 1.1 * j / (ne - 1);
    table.assign(nt, std::vector<cplx>(ne));
    for (int i = 0; i < nt; ++i) {
      cplx z(t_nodes[i], eps);
      for (int j = 0; j < ne; ++j) table[i][j] = theta_integral_1d(k, z, eta_grid[j], quad);
    }
  }

  cplx interp(int ti, double eta) const {
    const auto& row = table[ti];
    double x = (eta - eta_grid.front()) / (eta_grid[1] - eta_grid[0]);
    int j = std::clamp(int(x), 0, int(eta_grid.size()) - 2);
    double f = x - j;
    return row[j] * (1.0 - f) + row[j + 1] * f;
  }

  // normalized sigma_hat_r(eta) = I_r(eta) e^{2 pi eps r^k} / (2^d r^{d-k})
  double sigma_hat(std::span<const double> eta) const {
    int d = int(eta.size());
    KahanCplx acc;
    double rk = std::pow(r, double(k));
    for (size_t i = 0; i < t_nodes.size(); ++i) {
      cplx prod = 1.0;
      for (double e : eta) prod *= interp(int(i), e);
      acc.add(prod * unit_phase(-frac1(rk * t_nodes[i])) * t_weights[i]);
    }
    double norm = std::exp(TWO_PI * eps * rk) / (std::pow(2.0, d) * std::pow(r, double(d - k)));
    return (acc.value() * norm).real();
  }
};

struct SigmaRouter {
  int k, d;
  double r;
  const ApproxConfig* cfg;
  mutable std::optional<ThetaSurface> theta;

  double operator()(std::span<const double> eta) const {
    if (k == 2 && cfg->use_closed_forms) {
      double n2 = 0.0;
      for (double e : eta) n2 += e * e;
      return sphere_ft_closed_k2(d, r * std::sqrt(n2));
    }
    if (d <= cfg->quad.max_shell_dim) {
      std::vector<double> scaled(eta.begin(), eta.end());
      return surface_ft(k, d, r, scaled, cfg->quad).value.real();
    }
    if (!theta) {
      theta.emplace();
      theta->build(k, r, cfg->quad);
    }
    return theta->sigma_hat(eta);
  }
};

}  // namespace detail

// ---------------------------------------------------------------------------
// J and I multipliers on a major arc. eta is the already-shifted frequency
// xi - m/q; both integrals run over the t variable with z = t + i eps.
//   J = int_{I(a/q)} h_z_hat(eta) e(-r^k t) dt
//   I = int_R      h_z_hat(eta) e(-r^k t) dt
// The I tail beyond the truncation window is corrected by two integrations
// by parts against e(-r^k t).

struct JIMultipliers {
  cplx J{0.0, 0.0};
  cplx I{0.0, 0.0};
  double quad_err = 0.0;
};

inline JIMultipliers j_and_i_multipliers(int k, int d, double r, const FareyArc& arc,
                                         std::span<const double> eta, double eps,
                                         const ApproxConfig& cfg = {}) {
  if (!(eps > 0.0)) throw domain_error("j_and_i_multipliers: eps must be > 0");
  if (int(eta.size()) != d) throw domain_error("j_and_i_multipliers: eta dimension mismatch");
  auto hhat = [&](double t) -> cplx {
    cplx z(t, eps);
    cplx prod = 1.0;
    for (double e : eta)
      prod *= (k == 2 && cfg.use_closed_forms) ? theta_integral_1d_closed_k2(z, e)
                                               : theta_integral_1d(k, z, e, cfg.quad);
    return prod;
  };
  double rk = std::pow(r, double(k));
  auto integrand = [&](double t) { return hhat(t) * unit_phase(-frac1(rk * t)); };

  JIMultipliers out;
  double lo = arc.shifted_lo().to_double();
  double hi = arc.shifted_hi().to_double();
  if (arc.wraps) {  // glued endpoint arc: the shifted interval is symmetric about 0
    lo = (arc.lo - Rat::integer(1)).to_double();
  }
  double scale = std::abs(hhat(0.0)) + 1e-30;
  {
    int panels = 8 + int(6.0 * rk * (hi - lo));
    auto [v, e] = detail::adaptive_simpson_cplx(integrand, lo, hi,
                                                cfg.quad.tol_rel * scale * (hi - lo),
                                                cfg.quad.max_adaptive_depth, panels);
    out.J = v;
    out.quad_err += e;
  }
  double T0 = std::max({8.0, 40.0 / rk, 2.0 * std::max(std::abs(lo), std::abs(hi))});
  {
    int panels = 16 + int(8.0 * rk * T0);
    auto [v, e] = detail::adaptive_simpson_cplx(integrand, -T0, T0,
                                                cfg.quad.tol_rel * scale * T0,
                                                cfg.quad.max_adaptive_depth, panels);
    out.I = v;
    out.quad_err += e;
    // IBP tail: int_T^inf g e(-rk t) dt = g(T) e(-rk T)/(2 pi i rk) + g'(T) e(..)/(2 pi i rk)^2 + ...
    double h = 1e-4 * T0;
    cplx denom(0.0, TWO_PI * rk);
    cplx gp = hhat(T0), gpd = (hhat(T0 + h) - hhat(T0 - h)) / (2.0 * h);
    out.I += gp * unit_phase(-frac1(rk * T0)) / denom + gpd * unit_phase(-frac1(rk * T0)) / (denom * denom);
    cplx gm = hhat(-T0), gmd = (hhat(-T0 + h) - hhat(-T0 - h)) / (2.0 * h);
    out.I += -(gm * unit_phase(frac1(rk * T0)) / denom) - gmd * unit_phase(frac1(rk * T0)) / (denom * denom);
  }
  return out;
}

// ---------------------------------------------------------------------------
// Main term

struct MainTermEval {
  SphereSpec spec;
  int Q = 1;
  std::vector<double> xi;
  cplx value{0.0, 0.0};
  std::vector<cplx> per_q;  // contribution of each q = 1..Q (already scaled)
  double tail_bound = 0.0;  // bound on the dropped q > Q part, same scale as value
};

namespace detail {

// per-q arithmetic data: units, 1-D Gauss rows, and the radius twist e(-a n/q)
struct ArithTable {
  int64_t q = 1;
  std::vector<int64_t> units;
  std::vector<std::vector<cplx>> g1;  // [unit][residue]
  std::vector<cplx> twist;            // [unit]

  void build(int k, int64_t q_, int64_t level) {
    q = q_;
    units.clear();
    g1.clear();
    twist.clear();
    for (auto& [a, row] : gauss_sum_1d_table(k, q)) {
      units.push_back(a);
      g1.push_back(row);
      int64_t res = ((level % q) + q) % q;
      twist.push_back(unit_phase(-double(mulmod_u64(uint64_t(a), uint64_t(res), uint64_t(q))) /
                                 double(q)));
    }
  }

  cplx factor(std::span<const int64_t> residues) const {
    KahanCplx acc;
    for (size_t j = 0; j < units.size(); ++j) {
      cplx prod = twist[j];
      for (int64_t rsd : residues) prod *= g1[j][rsd];
      acc.add(prod);
    }
    return acc.value();
  }
};

// Hua envelope constant: (sup over q <= 50 of sup_{a,m} |g1| q^{1/k})^d.
inline double hua_envelope_constant(int k, int d) {
  static std::unordered_map<int, double> cache;
  auto it = cache.find(k);
  double c1;
  if (it != cache.end()) {
    c1 = it->second;
  } else {
    c1 = 0.0;
    for (int64_t q = 1; q <= 50; ++q) {
      double sup = 0.0;
      for (auto& [a, row] : gauss_sum_1d_table(k, q))
        for (auto& v : row) sup = std::max(sup, std::abs(v));
      c1 = std::max(c1, sup * std::pow(double(q), 1.0 / k));
    }
    cache[k] = c1;
  }
  return std::pow(c1, d);
}

// sum_{q > Q} q^{1 - d/k}, partial sum plus integral remainder
inline double zeta_tail(double s_exp, int64_t Q) {
  if (s_exp <= 1.0) return std::numeric_limits<double>::infinity();
  double sum = 0.0;
  int64_t cut = std::max<int64_t>(Q + 1, 20000);
  for (int64_t q = Q + 1; q < cut; ++q) sum += std::pow(double(q), -s_exp);
  sum += std::pow(double(cut), 1.0 - s_exp) / (s_exp - 1.0);
  return sum;
}

}  // namespace detail

inline MainTermEval main_term(const SphereSpec& spec, std::span<const double> xi, int Q,
                              const BumpFunction& bump, const ApproxConfig& cfg = {}) {
  spec.validate();
  if (spec.level < 1) throw domain_error("main_term: level must be >= 1");
  if (Q < 1) throw domain_error("main_term: Q must be >= 1");
  if (Q > cfg.q_cap) throw budget_error("main_term: Q exceeds cap");
  if (int(xi.size()) != spec.dimension) throw domain_error("main_term: xi dimension mismatch");
  int k = spec.degree, d = spec.dimension;
  double r = spec.radius();

  detail::SigmaRouter sigma{k, d, r, &cfg, std::nullopt};
  MainTermEval out;
  out.spec = spec;
  out.Q = Q;
  out.xi.assign(xi.begin(), xi.end());
  out.per_q.assign(Q, cplx(0.0));

  double mass_factor = std::pow(2.0, d) * std::pow(r, double(d - k));
  std::vector<double> eta(d), off(d);
  std::vector<int64_t> residues(d);
  for (int64_t q = 1; q <= Q; ++q) {
    double psi = 1.0;
    for (int i = 0; i < d; ++i) {
      double qc = double(q) * xi[i];
      double m = std::nearbyint(qc);  // half-integer ties resolve toward even m
      off[i] = qc - m;
      eta[i] = off[i] / double(q);
      int64_t mi = int64_t(m);
      residues[i] = ((mi % q) + q) % q;
      psi *= bump(off[i]);
      if (psi == 0.0) break;
    }
    if (psi == 0.0) continue;
    detail::ArithTable tab;
    tab.build(k, q, spec.level);
    cplx contrib = tab.factor(residues) * psi * sigma(eta) * mass_factor;
    out.per_q[q - 1] = contrib;
    out.value += contrib;
  }
  double dk = double(d) / k;
  out.tail_bound = mass_factor * vol_s1k(k, d) * detail::hua_envelope_constant(k, d) *
                   detail::zeta_tail(dk - 1.0, Q);
  return out;
}

// ---------------------------------------------------------------------------
// Grid error scan: E(xi) = a_hat_r(xi) - C_hat_r(xi) over the uniform M^d
// grid. Both sides are invariant in magnitude under coordinate permutations
// and sign flips, so the scan runs over folded sorted representatives with
// hyperoctahedral orbit weights; the reported sup and l2 are exactly the
// full-grid values.

struct ErrorReport {
  SphereSpec spec;
  int Q = 1;
  int64_t M = 1;
  double sup_error = 0.0;
  double l2_error = 0.0;         // sqrt(M^-d sum |E|^2): grid-Parseval kernel norm
  double normalized_error = 0.0; // l2_error / r^(d-k)
};

namespace detail {

struct ScanQTables {
  int64_t q;
  ArithTable arith;
  std::vector<int64_t> res;  // [p] nearest-m residue
  std::vector<double> off;   // [p] q p/M - m
  std::vector<double> psi;   // [p] bump(off)
  mutable std::unordered_map<uint64_t, cplx> memo;  // sorted residues -> factor

  cplx factor_memo(std::span<const int64_t> sorted_res) const {
    uint64_t key = 0;
    for (int64_t v : sorted_res) key = key * 211 + uint64_t(v) + 1;
    auto it = memo.find(key);
    if (it != memo.end()) return it->second;
    cplx f = arith.factor(sorted_res);
    memo.emplace(key, f);
    return f;
  }
};

inline std::vector<ScanQTables> build_scan_tables(const SphereSpec& spec, int Q, int64_t M,
                                                  const BumpFunction& bump) {
  std::vector<ScanQTables> tabs(Q);
  int64_t h = M / 2;
  for (int64_t q = 1; q <= Q; ++q) {
    auto& t = tabs[q - 1];
    t.q = q;
    t.arith.build(spec.degree, q, spec.level);
    t.res.resize(h + 1);
    t.off.resize(h + 1);
    t.psi.resize(h + 1);
    for (int64_t p = 0; p <= h; ++p) {
      double qc = double(q) * double(p) / double(M);
      double m = std::nearbyint(qc);
      t.off[p] = qc - m;
      int64_t mi = int64_t(m);
      t.res[p] = ((mi % q) + q) % q;
      t.psi[p] = bump(t.off[p]);
    }
  }
  return tabs;
}

// C_hat at a folded grid point, from the per-q tables.
inline cplx main_term_tabled(const SphereSpec& spec, std::span<const int64_t> p,
                             const std::vector<ScanQTables>& tabs,
                             const SigmaRouter& sigma, double mass_factor) {
  int d = spec.dimension;
  cplx total = 0.0;
  std::vector<double> eta(d);
  std::vector<int64_t> rs(d);
  for (const auto& t : tabs) {
    double psi = 1.0;
    for (int i = 0; i < d; ++i) {
      psi *= t.psi[p[i]];
      if (psi == 0.0) break;
    }
    if (psi == 0.0) continue;
    for (int i = 0; i < d; ++i) {
      eta[i] = t.off[p[i]] / double(t.q);
      rs[i] = t.res[p[i]];
    }
    std::sort(rs.begin(), rs.end());
    total += t.factor_memo(rs) * psi * sigma(eta) * mass_factor;
  }
  return total;
}

inline double orbit_weight(std::span<const int64_t> p, int64_t M, int d) {
  // ordered tuples: d! / prod mult!, sign unfoldings: 2 unless p = 0 or p = M/2
  double w = 1.0;
  for (int i = 2; i <= d; ++i) w *= i;
  int run = 1;
  for (int i = 1; i <= d; ++i) {
    if (i < d && p[i] == p[i - 1]) {
      ++run;
    } else {
      for (int j = 2; j <= run; ++j) w /= j;
      run = 1;
    }
  }
  bool even = (M % 2 == 0);
  for (int i = 0; i < d; ++i)
    if (!(p[i] == 0 || (even && p[i] == M / 2))) w *= 2.0;
  return w;
}

}  // namespace detail

// Generic scan path: per-point exponential-sum DP. Cost-guarded.
inline ErrorReport error_scan_generic(const SphereSpec& spec, int Q, int64_t M,
                                      const ApproxConfig& cfg) {
  int d = spec.dimension, k = spec.degree;
  int64_t n = spec.level;
  double r = spec.radius();
  int64_t h = M / 2;
  double reps = 1.0;
  for (int i = 1; i <= d; ++i) reps *= double(h + i) / i;
  double per_point = double(d) * double(n + 1) * double(integer_root(n, k) + 1) + 2000.0;
  if (reps * per_point > cfg.max_scan_ops)
    throw budget_error("error_scan: estimated cost exceeds budget (reduce M, d or level)");

  auto tabs = detail::build_scan_tables(spec, Q, M, cfg.bump);
  detail::SigmaRouter sigma{k, d, r, &cfg, std::nullopt};
  double mass_factor = std::pow(2.0, d) * std::pow(r, double(d - k));

  double sup = 0.0;
  KahanSum l2, wsum;
  std::vector<int64_t> p(d, 0);
  for (;;) {
    auto es = sphere_exp_sum_rational(spec, p, M, cfg.lattice);
    cplx C = detail::main_term_tabled(spec, p, tabs, sigma, mass_factor);
    double err = std::abs(es.value - C);
    double w = detail::orbit_weight(p, M, d);
    sup = std::max(sup, err);
    l2.add(w * err * err);
    wsum.add(w);
    // next sorted tuple over {0..h}
    int i = d - 1;
    while (i >= 0 && p[i] == h) --i;
    if (i < 0) break;
    int64_t v = p[i] + 1;
    for (int j = i; j < d; ++j) p[j] = v;
  }
  double Md = std::pow(double(M), d);
  if (std::abs(wsum.value() - Md) > 1e-6 * Md)
    throw std::logic_error("error_scan: orbit weights do not tile the grid");
  ErrorReport rep;
  rep.spec = spec;
  rep.Q = Q;
  rep.M = M;
  rep.sup_error = sup;
  rep.l2_error = std::sqrt(l2.value() / Md);
  rep.normalized_error = rep.l2_error / std::pow(r, double(d - k));
  return rep;
}

// Optimized scan for k = 2, d in {4,5}: the exponential sum at p/M splits as
// a level-axis convolution of a 2-coordinate table against a (d-2)-coordinate
// table, tiled so the right-hand block stays cache-resident.
inline ErrorReport error_scan_split_k2(const SphereSpec& spec, int Q, int64_t M,
                                       const ApproxConfig& cfg) {
  int d = spec.dimension;
  int64_t n = spec.level;
  double r = spec.radius();
  int64_t h = M / 2;
  int64_t B = integer_root(n, 2);
  int64_t W = n + 1;

  // T1[p]: single-coordinate level table
  std::vector<std::vector<double>> T1(h + 1, std::vector<double>(W, 0.0));
  for (int64_t p = 0; p <= h; ++p) {
    auto& t = T1[p];
    t[0] = 1.0;
    for (int64_t j = 1; j <= B; ++j)
      t[j * j] = 2.0 * std::cos(TWO_PI * frac1(double(j) * double(p) / double(M)));
  }
  auto extend = [&](const std::vector<double>& in, int64_t p, std::vector<double>& out) {
    out.assign(W, 0.0);
    const double* w = T1[p].data();
    for (int64_t s = 0; s <= n; ++s) {
      double v = in[s];
      if (v == 0.0) continue;
      out[s] += v;
      for (int64_t j = 1; j <= B; ++j) {
        int64_t jj = j * j;
        if (s + jj > n) break;
        out[s + jj] += w[jj] * v;
      }
    }
  };

  // left block: all sorted pairs (p1 <= p2)
  std::vector<std::pair<int64_t, int64_t>> pairs;
  for (int64_t p2 = 0; p2 <= h; ++p2)
    for (int64_t p1 = 0; p1 <= p2; ++p1) pairs.emplace_back(p1, p2);
  std::vector<std::vector<double>> T2(pairs.size());
  for (size_t i = 0; i < pairs.size(); ++i) extend(T1[pairs[i].first], pairs[i].second, T2[i]);

  auto tabs = detail::build_scan_tables(spec, Q, M, cfg.bump);
  detail::SigmaRouter sigma{2, d, r, &cfg, std::nullopt};
  double mass_factor = std::pow(2.0, d) * std::pow(r, double(d - 2));

  // right block: sorted (d-2)-tuples, reversed in the level index
  int rd = d - 2;
  std::vector<int64_t> t(rd, 0);
  double sup = 0.0;
  KahanSum l2, wsum;
  std::vector<double> rev(W), tmp(W);
  std::vector<int64_t> full(d);
  for (;;) {
    const std::vector<double>* right = nullptr;
    if (rd == 2) {
      right = &T2[size_t(t[0] + t[1] * (t[1] + 1) / 2)];
    } else {  // rd == 3: extend the (t0,t1) pair by t2
      extend(T2[size_t(t[0] + t[1] * (t[1] + 1) / 2)], t[2], tmp);
      right = &tmp;
    }
    for (int64_t s = 0; s <= n; ++s) rev[s] = (*right)[n - s];

    int64_t p2max = t[0];  // left pairs need p2 <= t[0] to keep the tuple sorted
    for (int64_t p2 = 0; p2 <= p2max; ++p2) {
      for (int64_t p1 = 0; p1 <= p2; ++p1) {
        const double* L = T2[size_t(p1 + p2 * (p2 + 1) / 2)].data();
        double ah = 0.0;
        for (int64_t s = 0; s <= n; ++s) ah += L[s] * rev[s];
        full[0] = p1;
        full[1] = p2;
        for (int j = 0; j < rd; ++j) full[2 + j] = t[j];
        cplx C = detail::main_term_tabled(spec, full, tabs, sigma, mass_factor);
        double err = std::abs(cplx(ah, 0.0) - C);
        double w = detail::orbit_weight(full, M, d);
        sup = std::max(sup, err);
        l2.add(w * err * err);
        wsum.add(w);
      }
    }
    int i = rd - 1;
    while (i >= 0 && t[i] == h) --i;
    if (i < 0) break;
    int64_t v = t[i] + 1;
    for (int j = i; j < rd; ++j) t[j] = v;
  }
  double Md = std::pow(double(M), d);
  if (std::abs(wsum.value() - Md) > 1e-6 * Md)
    throw std::logic_error("error_scan: orbit weights do not tile the grid");
  ErrorReport rep;
  rep.spec = spec;
  rep.Q = Q;
  rep.M = M;
  rep.sup_error = sup;
  rep.l2_error = std::sqrt(l2.value() / Md);
  rep.normalized_error = rep.l2_error / std::pow(r, double(d - 2));
  return rep;
}

inline ErrorReport error_scan(const SphereSpec& spec, int Q, int64_t M,
                              const ApproxConfig& cfg = {}) {
  spec.validate();
  if (spec.level < 1) throw domain_error("error_scan: level must be >= 1");
  if (spec.level > cfg.lattice.max_level) throw budget_error("error_scan: level exceeds budget");
  if (Q < 1 || Q > cfg.q_cap) throw domain_error("error_scan: Q out of range");
  int64_t B = integer_root(spec.level, spec.degree);
  if (M < 2 * (2 * B + 1))
    throw domain_error("error_scan: M must be >= 2(2r+1) for alias-free Parseval");
  if (spec.degree == 2 && (spec.dimension == 4 || spec.dimension == 5) &&
      cfg.use_closed_forms)
    return error_scan_split_k2(spec, Q, M, cfg);
  return error_scan_generic(spec, Q, M, cfg);
}

// ---------------------------------------------------------------------------
// Dyadic error-exponent fit: max normalized error over sampled levels per
// dyadic block [R^k, (2R)^k), fitted against R.

struct ExponentFit {
  double eps_hat = 0.0;
  bool inconclusive = false;
  double paper_eps = 0.0;  // min{d - k(k+2), k - d tau}, report-only comparison
  std::vector<double> scales;
  std::vector<double> block_max;
  std::vector<ErrorReport> reports;
};

inline ExponentFit error_exponent_fit(int k, int d, std::span<const double> R_list, int Q,
                                      double tau, const ApproxConfig& cfg = {}) {
  ExponentFit out;
  out.paper_eps = std::min(double(d) - double(k) * (k + 2), double(k) - double(d) * tau);
  if (R_list.size() < 4) {
    out.inconclusive = true;
    return out;
  }
  for (double R : R_list) {
    double lo = std::pow(R, double(k)), hi = std::pow(2.0 * R, double(k));
    double best = 0.0;
    bool any = false;
    for (int j = 0; j < cfg.levels_per_block; ++j) {
      int64_t n = int64_t(std::floor(lo * std::pow(hi / lo, double(j) / cfg.levels_per_block)));
      n = std::max<int64_t>(1, n);
      SphereSpec spec{k, d, n};
      if (count_sphere(spec, cfg.lattice).count == 0) continue;
      int64_t B = integer_root(n, k);
      int64_t M = 2 * (2 * B + 1);
      if (M % 2) ++M;
      auto rep = error_scan(spec, Q, M, cfg);
      out.reports.push_back(rep);
      best = std::max(best, rep.normalized_error);
      any = true;
    }
    if (!any) {
      out.inconclusive = true;
      return out;
    }
    out.scales.push_back(R);
    out.block_max.push_back(best);
  }
  auto fit = loglog_fit(out.scales, out.block_max);
  if (fit.degenerate) {
    out.inconclusive = true;
    return out;
  }
  out.eps_hat = -fit.slope;
  return out;
}

}  // namespace kspheres
