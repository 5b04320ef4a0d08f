// Gelfand-Leray surface measures on continuous k-spheres {sum |x_i|^k = r^k},
// their Fourier transforms, theta-type functions h_z, and mollified plateau
// bumps.
//
// The transform is computed as the thin-shell sublevel derivative
//   (1/2 delta) int_{r^k - delta <= |x|^k < r^k + delta} e(x.xi) dx
// with Richardson extrapolation in delta, then rescaled so the measure
// carries constant total mass Vol(S^1_k) = Gamma((k+1)/k)^d / Gamma(d/k) for
// every r. Under that normalization dsigma_r(xi) = dsigma_1(r xi) exactly.
//
// Evaluation never charts the surface: coordinates with zero frequency are
// absorbed in closed form through the volume of the (d-p)-dimensional k-ball,
// one oscillating coordinate is absorbed through its sine antiderivative when
// no zero block exists, and the remaining coordinates are integrated
// numerically (adaptive in the innermost, most oscillatory direction).
//
// The raw sublevel derivative carries mass 2^d r^(d-k) times the normalized
// one; multiplier work that needs the raw transform multiplies back.
#pragma once

#include <span>

#include "kspheres/common.hpp"

namespace kspheres {

// Gamma((k+1)/k)^d / Gamma(d/k): constant total surface mass.
inline double vol_s1k(int k, int d) {
  return std::pow(std::tgamma((k + 1.0) / k), d) / std::tgamma(double(d) / k);
}

// Volume of the unit k-ball {sum |x_i|^k <= 1} in z dimensions.
inline double kball_volume(int k, int z) {
  if (z == 0) return 1.0;
  return std::pow(2.0 * std::tgamma(1.0 + 1.0 / k), z) / std::tgamma(1.0 + double(z) / k);
}

struct QuadratureConfig {
  double delta_rel = 5e-3;      // shell half-width relative to r^k (capped by oscillation)
  double tol_rel = 1e-7;        // adaptive tolerance relative to the L1 mass of the integrand
  int base_pts = 49;            // fixed-grid points per outer dimension (odd)
  double pts_per_cycle = 10.0;  // fixed-grid sampling density vs oscillation
  int max_adaptive_depth = 36;
  int max_shell_dim = 4;
};

struct SurfaceMeasureEval {
  int degree = 2;
  int dimension = 1;
  double radius = 1.0;
  std::vector<double> frequency;
  cplx value{0.0, 0.0};
  double quadrature_error = 0.0;
};

namespace detail {

// Adaptive Simpson on [a,b], absolute tolerance, explicit stack. Oscillatory
// integrands must pass init_panels >= a few panels per cycle: a single
// Simpson panel over many cycles aliases into false convergence.
template <typename F>
inline std::pair<double, double> adaptive_simpson(const F& f, double a, double b,
                                                  double abs_tol, int max_depth,
                                                  int init_panels = 1) {
  if (!(b > a)) return {0.0, 0.0};
  struct Frame {
    double a, b, fa, fm, fb, whole;
    int depth;
  };
  auto simpson = [](double fa, double fm, double fb, double h) {
    return h / 6.0 * (fa + 4.0 * fm + fb);
  };
  init_panels = std::clamp(init_panels, 1, 4'000'000);
  std::vector<Frame> stack;
  stack.reserve(size_t(init_panels) + 64);
  double fprev = f(a);
  for (int i = 0; i < init_panels; ++i) {
    double pa = a + (b - a) * double(i) / init_panels;
    double pb = (i + 1 == init_panels) ? b : a + (b - a) * double(i + 1) / init_panels;
    double pfa = fprev;
    double pfb = f(pb);
    double pfm = f(0.5 * (pa + pb));
    stack.push_back({pa, pb, pfa, pfm, pfb, simpson(pfa, pfm, pfb, pb - pa), 0});
    fprev = pfb;
  }
  double total = 0.0, err = 0.0;
  while (!stack.empty()) {
    Frame fr = stack.back();
    stack.pop_back();
    double m = 0.5 * (fr.a + fr.b);
    double lm = 0.5 * (fr.a + m), rm = 0.5 * (m + fr.b);
    double flm = f(lm), frm = f(rm);
    double left = simpson(fr.fa, flm, fr.fm, m - fr.a);
    double right = simpson(fr.fm, frm, fr.fb, fr.b - m);
    double delta = left + right - fr.whole;
    double local_tol = abs_tol * (fr.b - fr.a) / (b - a);
    if (fr.depth >= max_depth || std::abs(delta) <= 15.0 * std::max(local_tol, 1e-300)) {
      total += left + right + delta / 15.0;
      err += std::abs(delta) / 15.0;
    } else {
      stack.push_back({fr.a, m, fr.fa, flm, fr.fm, left, fr.depth + 1});
      stack.push_back({m, fr.b, fr.fm, frm, fr.fb, right, fr.depth + 1});
    }
  }
  return {total, err};
}

// Shell-difference kernel in the level variable w = sum u_j^k over the
// numeric coordinates. Two routes for the absorbed block:
//   A: zero-frequency block of size zb, F(c) = V_zb * c^(zb/k)
//   B: one oscillating coordinate absorbed analytically,
//      F(c) = sin(2 pi c^(1/k) eta) / (pi eta)   (-> 2 c^(1/k) at eta = 0)
struct ShellKernel {
  int k = 2;
  double s = 1.0, delta = 1e-3;
  bool route_a = true;
  int zb = 0;
  double vz = 1.0;
  double eta = 0.0;

  double antideriv(double c) const {
    if (c <= 0.0) return 0.0;
    if (route_a) return vz * std::pow(c, double(zb) / k);
    double x = std::pow(c, 1.0 / k);
    if (eta == 0.0) return 2.0 * x;
    return std::sin(TWO_PI * x * eta) / (PI * eta);
  }
  double operator()(double w) const {
    return (antideriv(s + delta - w) - antideriv(s - delta - w)) / (2.0 * delta);
  }
};

// Integral over the numeric block: int prod_j 2 cos(2 pi eta_j u_j) K(sum u_j^k) du
// on [0, X]^m. The most oscillatory coordinate is integrated adaptively and
// innermost (it sees the thin-shell layer); the rest ride fixed Simpson grids.
struct TensorResult {
  double value = 0.0;
  double error = 0.0;
};

inline TensorResult integrate_numeric_block(const ShellKernel& kern,
                                            std::span<const double> etas,
                                            const QuadratureConfig& cfg, int grid_scale) {
  int m = int(etas.size());
  double X = std::pow(kern.s + kern.delta, 1.0 / kern.k);
  if (m == 0) return {kern(0.0), 0.0};

  int inner = 0;
  for (int j = 1; j < m; ++j)
    if (std::abs(etas[j]) > std::abs(etas[inner])) inner = j;
  double eta_in = etas[inner];

  // inner adaptive integral given the level already consumed by outer dims
  auto inner_integral = [&](double rem, double abs_tol) -> std::pair<double, double> {
    double cap = kern.s + kern.delta - rem;
    if (cap <= 0.0) return {0.0, 0.0};
    double ub = std::pow(cap, 1.0 / kern.k);
    double inner_lo = kern.s - kern.delta - rem;
    double ua = inner_lo > 0.0 ? std::pow(inner_lo, 1.0 / kern.k) : 0.0;
    auto f = [&](double u) {
      return 2.0 * std::cos(TWO_PI * eta_in * u) * kern(rem + std::pow(u, kern.k));
    };
    // the route-B kernel oscillates in the level variable as well
    double kern_cycles = kern.route_a ? 0.0 : std::abs(kern.eta) * ub;
    double v = 0.0, e = 0.0;
    if (ua > 0.0) {
      int panels = 4 + int(6.0 * (std::abs(eta_in) * ua + kern_cycles));
      auto [v1, e1] =
          adaptive_simpson(f, 0.0, ua, abs_tol * 0.5, cfg.max_adaptive_depth, panels);
      v += v1;
      e += e1;
    }
    int panels_bl = 8 + int(6.0 * std::abs(eta_in) * (ub - ua));
    auto [v2, e2] =
        adaptive_simpson(f, ua, ub, abs_tol * 0.5, cfg.max_adaptive_depth, panels_bl);
    return {v + v2, e + e2};
  };

  // crude magnitude scale for tolerances: mass of the shell kernel
  double scale = std::abs(kern.antideriv(kern.s)) / kern.s * X + 1.0;
  double tol = cfg.tol_rel * scale;

  if (m == 1) {
    auto [v, e] = inner_integral(0.0, tol);
    return {v, e};
  }

  // fixed Simpson grids on the outer dimensions
  std::vector<int> idx;
  std::vector<std::vector<double>> nodes, weights;
  for (int j = 0; j < m; ++j) {
    if (j == inner) continue;
    idx.push_back(j);
    double cycles = std::abs(etas[j]) * X;
    int n = std::max(cfg.base_pts, int(cfg.pts_per_cycle * cycles) | 1);
    n = (n * grid_scale) | 1;
    double h = X / (n - 1);
    std::vector<double> xs(n), ws(n);
    for (int i = 0; i < n; ++i) {
      xs[i] = i * h;
      double w = (i == 0 || i == n - 1) ? 1.0 : (i % 2 ? 4.0 : 2.0);
      ws[i] = w * h / 3.0;
    }
    nodes.push_back(std::move(xs));
    weights.push_back(std::move(ws));
  }
  int outer = m - 1;
  std::vector<int> it(outer, 0);
  double total = 0.0, err = 0.0;
  int64_t cells = 1;
  for (auto& xs : nodes) cells *= int64_t(xs.size());
  double cell_tol = tol / double(cells);
  for (;;) {
    double rem = 0.0, wprod = 1.0;
    for (int j = 0; j < outer; ++j) {
      double u = nodes[j][it[j]];
      rem += std::pow(u, kern.k);
      wprod *= weights[j][it[j]] * 2.0 * std::cos(TWO_PI * etas[idx[j]] * u);
    }
    if (rem < kern.s + kern.delta && wprod != 0.0) {
      auto [v, e] = inner_integral(rem, cell_tol / std::max(1e-3, std::abs(wprod)));
      total += wprod * v;
      err += std::abs(wprod) * e;
    }
    int j = 0;
    while (j < outer && ++it[j] == int(nodes[j].size())) it[j++] = 0;
    if (j == outer) break;
  }
  return {total, err};
}

// Raw sublevel-derivative transform (mass 2^d r^(d-k) Vol) at the given
// shell half-width.
inline TensorResult shell_transform_raw(int k, int d, double r, std::span<const double> xi,
                                        double delta, const QuadratureConfig& cfg,
                                        int grid_scale) {
  double s = std::pow(r, double(k));
  std::vector<double> nz;
  for (double x : xi)
    if (x != 0.0) nz.push_back(x);
  int p = int(nz.size());
  int z = d - p;

  ShellKernel kern;
  kern.k = k;
  kern.s = s;
  kern.delta = delta;

  std::vector<double> numeric;
  if (z >= 1) {
    if (p == 0) {
      // promote one zero coordinate to the numeric block so the kernel stays smooth
      numeric.push_back(0.0);
      z -= 1;
    } else {
      numeric = nz;
    }
    kern.route_a = true;
    kern.zb = z;
    kern.vz = kball_volume(k, z);
    if (z == 0) {  // promoted in d = 1: fall through to route B semantics
      kern.route_a = false;
      kern.eta = numeric.back();
      numeric.pop_back();
    }
  } else {
    kern.route_a = false;
    kern.eta = nz.back();
    numeric.assign(nz.begin(), nz.end() - 1);
  }
  return integrate_numeric_block(kern, numeric, cfg, grid_scale);
}

}  // namespace detail

// Normalized transform of the constant-mass Gelfand-Leray measure. The value
// is real (the measure is even); it is stored in the complex field of the
// eval record per the CSV schema.
inline SurfaceMeasureEval surface_ft(int k, int d, double r, std::span<const double> xi,
                                     const QuadratureConfig& cfg = {}) {
  if (k < 2) throw domain_error("surface_ft: k must be >= 2");
  if (d < 1) throw domain_error("surface_ft: d must be >= 1");
  if (!(r > 0.0)) throw domain_error("surface_ft: r must be > 0");
  if (int(xi.size()) != d) throw domain_error("surface_ft: frequency dimension mismatch");
  if (d > cfg.max_shell_dim)
    throw budget_error(
        "surface_ft: dimension beyond shell budget; use the separable h_z route "
        "for multiplier work");
  double s = std::pow(r, double(k));
  double xinorm = 0.0;
  for (double x : xi) xinorm += x * x;
  xinorm = std::sqrt(xinorm);
  // shell width limited so it does not smear the oscillation of the transform
  double delta = cfg.delta_rel * s;
  if (xinorm > 0.0)
    delta = std::min(delta, 0.05 * k * std::pow(r, double(k - 1)) / (TWO_PI * xinorm));
  delta = std::max(delta, 1e-9 * s);

  auto coarse = detail::shell_transform_raw(k, d, r, xi, delta, cfg, 1);
  auto fine = detail::shell_transform_raw(k, d, r, xi, 0.5 * delta, cfg, 2);
  double value_raw = (4.0 * fine.value - coarse.value) / 3.0;
  double err_raw = std::abs(fine.value - coarse.value) / 3.0 + fine.error + coarse.error;

  double norm = std::pow(r, double(k - d)) / std::pow(2.0, d);
  SurfaceMeasureEval out;
  out.degree = k;
  out.dimension = d;
  out.radius = r;
  out.frequency.assign(xi.begin(), xi.end());
  out.value = cplx(value_raw * norm, 0.0);
  out.quadrature_error = err_raw * norm;
  return out;
}

// Closed form for k = 2 in any dimension: the normalized transform is
// Vol(S^1_2) * Gamma(d/2) (x/2)^(1-d/2) J_{d/2-1}(x) at x = 2 pi r |xi|.
inline double sphere_ft_closed_k2(int d, double r_xi_norm) {
  double x = TWO_PI * r_xi_norm;
  double mass = vol_s1k(2, d);
  if (x < 1e-6) return mass * (1.0 - x * x / (2.0 * d));
  double mu;
  switch (d) {
    case 1: mu = std::cos(x); break;
    case 3: mu = std::sin(x) / x; break;
    case 5: mu = 3.0 * (std::sin(x) / x - std::cos(x)) / (x * x); break;
    default: {
      double nu = 0.5 * d - 1.0;
      mu = std::tgamma(0.5 * d) * std::pow(0.5 * x, -nu) * std::cyl_bessel_j(nu, x);
    }
  }
  return mass * mu;
}

// ---------------------------------------------------------------------------
// Decay diagnostics

struct DecayFitResult {
  double gamma_hat = 0.0;
  bool inconclusive = false;
  std::vector<double> T, absval, quad_err;
};

// Fits |dsigma_1(T dir)| ~ T^gamma on block maxima over octaves (the raw
// magnitudes oscillate through Bessel-type zeros).
inline DecayFitResult decay_fit(int k, int d, std::span<const double> direction, double t_max,
                                const QuadratureConfig& cfg = {}, double t_min = 10.0,
                                int pts_per_octave = 6) {
  if (t_max < 100.0) throw domain_error("decay_fit: T_max must be >= 100");
  if (int(direction.size()) != d) throw domain_error("decay_fit: direction dimension mismatch");
  double nrm = 0.0;
  for (double x : direction) nrm += x * x;
  nrm = std::sqrt(nrm);
  if (!(nrm > 0.0)) throw domain_error("decay_fit: zero direction");

  DecayFitResult out;
  double ratio = std::pow(2.0, 1.0 / pts_per_octave);
  for (double T = t_min; T <= t_max * (1.0 + 1e-12); T *= ratio) {
    std::vector<double> xi(direction.begin(), direction.end());
    for (auto& x : xi) x *= T / nrm;
    auto ev = surface_ft(k, d, 1.0, xi, cfg);
    out.T.push_back(T);
    out.absval.push_back(std::abs(ev.value));
    out.quad_err.push_back(ev.quadrature_error);
  }
  // inconclusive when noise drowns the signal on the usable block maxima
  std::vector<double> bt, bv;
  block_maxima(out.T, out.absval, 2.0, bt, bv);
  int drowned = 0;
  for (size_t i = 0; i < out.T.size(); ++i)
    if (out.absval[i] < 2.0 * out.quad_err[i]) ++drowned;
  out.inconclusive = drowned > int(out.T.size()) / 2 || bt.size() < 3;
  auto fit = loglog_fit(bt, bv);
  out.inconclusive = out.inconclusive || fit.degenerate;
  out.gamma_hat = fit.degenerate ? 0.0 : fit.slope;
  return out;
}

// ---------------------------------------------------------------------------
// Theta-type functions h_z(x) = e(|x|^k z), Im z > 0

struct ThetaEval {
  int degree = 2;
  int dimension = 1;
  cplx z{0.0, 1.0};
  std::vector<double> xi;
  cplx integral_value{0.0, 0.0};  // h_z_hat(xi) = prod_i int e(|u|^k z + u xi_i) du
  cplx sum_value{0.0, 0.0};       // sum over Z^d, absolutely convergent
  double hardy_scaled = 0.0;      // |integral_value| * |z|^(d/k)
};

namespace detail {
template <typename F>
inline std::pair<cplx, double> adaptive_simpson_cplx(const F& f, double a, double b,
                                                     double abs_tol, int max_depth,
                                                     int init_panels = 1) {
  auto [re, ere] = adaptive_simpson([&](double x) { return f(x).real(); }, a, b, abs_tol,
                                    max_depth, init_panels);
  auto [im, eim] = adaptive_simpson([&](double x) { return f(x).imag(); }, a, b, abs_tol,
                                    max_depth, init_panels);
  return {cplx(re, im), ere + eim};
}

inline double theta_trunc_radius(int k, double eps) {
  // e^{-2 pi eps u^k} < 1e-16 beyond this point
  return std::pow(36.85 / (TWO_PI * eps), 1.0 / k);
}
}  // namespace detail

// One coordinate of h_z_hat: int_R e(|u|^k z + u xi) du, as the folded
// integral 2 int_0^inf e(u^k z) cos(2 pi xi u) du... with the odd part kept
// (the full fold is e(u^k z)(e(u xi) + e(-u xi))).
inline cplx theta_integral_1d(int k, cplx z, double xi, const QuadratureConfig& cfg = {}) {
  double eps = z.imag();
  if (!(eps > 0.0)) throw domain_error("theta_integral: Im z must be > 0");
  double umax = detail::theta_trunc_radius(k, eps);
  auto f = [&](double u) -> cplx {
    double uk = std::pow(u, double(k));
    cplx w = cplx(0.0, TWO_PI) * (z * uk);
    return std::exp(w) * 2.0 * std::cos(TWO_PI * xi * u);
  };
  double cycles = std::abs(z.real()) * std::pow(umax, double(k)) + std::abs(xi) * umax;
  int panels = 8 + int(6.0 * cycles);
  auto [v, e] = detail::adaptive_simpson_cplx(f, 0.0, umax, cfg.tol_rel * umax,
                                              cfg.max_adaptive_depth, panels);
  (void)e;
  return v;
}

// Gaussian closed form for k = 2: (-2iz)^(-1/2) e(-xi^2/(4z)).
inline cplx theta_integral_1d_closed_k2(cplx z, double xi) {
  cplx a = cplx(2.0 * z.imag(), -2.0 * z.real());  // -2iz, Re > 0
  cplx w = -cplx(xi * xi) / (4.0 * z);
  return std::exp(cplx(0.0, TWO_PI) * w) / std::sqrt(a);
}

inline ThetaEval theta_integral(int k, int d, cplx z, std::span<const double> xi,
                                const QuadratureConfig& cfg = {}) {
  if (int(xi.size()) != d) throw domain_error("theta_integral: xi dimension mismatch");
  if (!(z.imag() > 0.0)) throw domain_error("theta_integral: Im z must be > 0");
  ThetaEval out;
  out.degree = k;
  out.dimension = d;
  out.z = z;
  out.xi.assign(xi.begin(), xi.end());
  cplx v = 1.0;
  for (int i = 0; i < d; ++i) v *= theta_integral_1d(k, z, xi[i], cfg);
  out.integral_value = v;
  out.hardy_scaled = std::abs(v) * std::pow(std::abs(z), double(d) / k);
  return out;
}

// Lattice counterpart sum over Z^d, truncated where the Gaussian-type weight
// drops below 1e-16; 1-periodic in each xi_i.
inline cplx theta_lattice_sum_1d(int k, cplx z, double xi) {
  double eps = z.imag();
  if (!(eps > 0.0)) throw domain_error("theta_lattice_sum: Im z must be > 0");
  int64_t mmax = int64_t(detail::theta_trunc_radius(k, eps)) + 1;
  KahanCplx acc;
  acc.add(1.0);  // m = 0
  for (int64_t m = 1; m <= mmax; ++m) {
    double mk = std::pow(double(m), double(k));
    cplx base = std::exp(cplx(0.0, TWO_PI) * (z * mk));
    acc.add(base * unit_phase(frac1(double(m) * xi)));
    acc.add(base * unit_phase(frac1(-double(m) * xi)));
  }
  return acc.value();
}

inline ThetaEval theta_lattice_sum(int k, int d, cplx z, std::span<const double> xi) {
  if (int(xi.size()) != d) throw domain_error("theta_lattice_sum: xi dimension mismatch");
  ThetaEval out;
  out.degree = k;
  out.dimension = d;
  out.z = z;
  out.xi.assign(xi.begin(), xi.end());
  cplx v = 1.0;
  for (int i = 0; i < d; ++i) v *= theta_lattice_sum_1d(k, z, xi[i]);
  out.sum_value = v;
  return out;
}

// ---------------------------------------------------------------------------
// Mollified plateau bump: 1 on [-s_in, s_in]^d, 0 outside [-s_out, s_out]^d,
// smooth in between via the e^{-1/x} partition profile.

struct BumpFunction {
  double s_in = 0.125;
  double s_out = 0.25;

  double operator()(double u) const {
    double au = std::abs(u);
    if (au <= s_in) return 1.0;
    if (au >= s_out) return 0.0;
    double x = (s_out - au) / (s_out - s_in);
    double f1 = std::exp(-1.0 / x);
    double f2 = std::exp(-1.0 / (1.0 - x));
    return f1 / (f1 + f2);
  }
  double box(std::span<const double> x) const {
    double p = 1.0;
    for (double u : x) {
      p *= (*this)(u);
      if (p == 0.0) break;
    }
    return p;
  }
};

inline BumpFunction make_bump(double s_in, double s_out) {
  if (!(0.0 < s_in && s_in < s_out && s_out <= 0.5))
    throw domain_error("make_bump: need 0 < s_in < s_out <= 1/2");
  return BumpFunction{s_in, s_out};
}

}  // namespace kspheres
