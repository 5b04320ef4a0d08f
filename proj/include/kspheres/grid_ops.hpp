// Discrete k-spherical averaging and maximal operators on the finite torus
// (Z/LZ)^d. A_r f = N^{-1} sum_{y in S_r} f(. - y) with cyclic indexing; a
// window with wrap guard L > 4 r_max reproduces Z^d behaviour for compactly
// supported inputs. Sparse spheres convolve by point lists; dense batches go
// through the FFT, and the two paths agree to round-off.
#pragma once

#include <fstream>

#include "kspheres/lattice.hpp"

namespace kspheres {

struct GridFunction {
  int64_t side = 1;  // L
  int dimension = 1;
  std::vector<cplx> values;  // row-major over (Z/LZ)^d

  static GridFunction zeros(int64_t L, int d) {
    GridFunction g;
    g.side = L;
    g.dimension = d;
    u128 total = 1;
    for (int i = 0; i < d; ++i) {
      total *= u128(L);
      if (total > u128(1) << 34) throw budget_error("GridFunction: L^d too large");
    }
    g.values.assign(size_t(total), cplx(0.0));
    return g;
  }
  static GridFunction delta(int64_t L, int d) {
    auto g = zeros(L, d);
    g.values[0] = 1.0;
    return g;
  }
  static GridFunction constant(int64_t L, int d, cplx c) {
    auto g = zeros(L, d);
    std::fill(g.values.begin(), g.values.end(), c);
    return g;
  }
  // character e(m . xi0) sampled on the grid; xi0 = p / L
  static GridFunction character(int64_t L, int d, std::span<const int64_t> p) {
    auto g = zeros(L, d);
    std::vector<int64_t> m(d, 0);
    for (size_t idx = 0; idx < g.values.size(); ++idx) {
      int64_t ph = 0;
      for (int i = 0; i < d; ++i) ph = (ph + m[i] * (((p[i] % L) + L) % L)) % L;
      g.values[idx] = unit_phase(double(ph) / double(L));
      int i = d - 1;
      while (i >= 0 && ++m[i] == L) m[i--] = 0;
    }
    return g;
  }

  size_t size() const { return values.size(); }
  double lp_norm(double p) const {
    if (std::isinf(p)) {
      double mx = 0.0;
      for (auto& v : values) mx = std::max(mx, std::abs(v));
      return mx;
    }
    KahanSum s;
    for (auto& v : values) s.add(std::pow(std::abs(v), p));
    return std::pow(s.value(), 1.0 / p);
  }
};

// ---------------------------------------------------------------------------
// FFT: radix-2 with Bluestein fallback for general lengths.

namespace detail {

inline void fft_pow2(std::vector<cplx>& a, bool inverse) {
  size_t n = a.size();
  for (size_t i = 1, j = 0; i < n; ++i) {
    size_t bit = n >> 1;
    for (; j & bit; bit >>= 1) j ^= bit;
    j ^= bit;
    if (i < j) std::swap(a[i], a[j]);
  }
  for (size_t len = 2; len <= n; len <<= 1) {
    double ang = (inverse ? 1.0 : -1.0) * TWO_PI / double(len);
    cplx wl(std::cos(ang), std::sin(ang));
    for (size_t i = 0; i < n; i += len) {
      cplx w = 1.0;
      for (size_t j = 0; j < len / 2; ++j) {
        cplx u = a[i + j], v = a[i + j + len / 2] * w;
        a[i + j] = u + v;
        a[i + j + len / 2] = u - v;
        w *= wl;
      }
    }
  }
  if (inverse)
    for (auto& x : a) x /= double(n);
}

inline void dft_any(std::vector<cplx>& a, bool inverse) {
  size_t n = a.size();
  if ((n & (n - 1)) == 0) {
    fft_pow2(a, inverse);
    return;
  }
  // Bluestein: chirp the signal, convolve with the conjugate chirp
  size_t m = 1;
  while (m < 2 * n - 1) m <<= 1;
  double sgn = inverse ? 1.0 : -1.0;
  std::vector<cplx> chirp(n);
  for (size_t j = 0; j < n; ++j) {
    double ph = sgn * PI * double((u128(j) * j) % (2 * n)) / double(n);
    chirp[j] = cplx(std::cos(ph), std::sin(ph));
  }
  std::vector<cplx> x(m, cplx(0.0)), y(m, cplx(0.0));
  for (size_t j = 0; j < n; ++j) x[j] = a[j] * chirp[j];
  for (size_t j = 0; j < n; ++j) {
    y[j] = std::conj(chirp[j]);
    if (j) y[m - j] = std::conj(chirp[j]);
  }
  fft_pow2(x, false);
  fft_pow2(y, false);
  for (size_t j = 0; j < m; ++j) x[j] *= y[j];
  fft_pow2(x, true);
  for (size_t j = 0; j < n; ++j) a[j] = x[j] * chirp[j];
  if (inverse)
    for (auto& v : a) v /= double(n);
}

inline void fft_grid(GridFunction& g, bool inverse) {
  int64_t L = g.side;
  int d = g.dimension;
  size_t total = g.size();
  std::vector<cplx> line(L);
  size_t stride = 1;
  for (int axis = d - 1; axis >= 0; --axis) {
    size_t block = stride * size_t(L);
    for (size_t base = 0; base < total; base += block) {
      for (size_t off = 0; off < stride; ++off) {
        for (int64_t i = 0; i < L; ++i) line[i] = g.values[base + off + stride * i];
        dft_any(line, inverse);
        for (int64_t i = 0; i < L; ++i) g.values[base + off + stride * i] = line[i];
      }
    }
    stride *= size_t(L);
  }
}

}  // namespace detail

enum class ConvMode { Auto, Sparse, Dense };

struct GridOpConfig {
  LatticeBudget lattice;
  ConvMode mode = ConvMode::Auto;
  int64_t sparse_cutoff = 100'000;  // sphere points; above this the FFT path pays off
};

// A_r f: exact convolution with the normalized sphere indicator.
inline GridFunction spherical_average(const GridFunction& f, const SphereSpec& spec,
                                      const GridOpConfig& cfg = {}) {
  spec.validate();
  if (f.dimension != spec.dimension)
    throw domain_error("spherical_average: grid/sphere dimension mismatch");
  u128 N = count_sphere(spec, cfg.lattice).count;
  if (N == 0)
    throw domain_error("spherical_average: empty sphere (level not in the radius set Lambda_{k,d})");
  int64_t L = f.side;
  int d = f.dimension;
  bool dense = cfg.mode == ConvMode::Dense ||
               (cfg.mode == ConvMode::Auto && N >= u128(cfg.sparse_cutoff));
  double invN = 1.0 / u128_to_double(N);

  if (!dense) {
    // scatter from the nonzero sources: out[z + y] += f[z] for y on the sphere,
    // so the cost is #sphere * #nonzero(f) * d
    GridFunction out = GridFunction::zeros(L, d);
    std::vector<size_t> stride(d);
    stride[d - 1] = 1;
    for (int i = d - 2; i >= 0; --i) stride[i] = stride[i + 1] * size_t(L);
    std::vector<std::vector<int64_t>> nz_coord;
    std::vector<cplx> nz_val;
    {
      std::vector<int64_t> z(d, 0);
      for (size_t idx = 0; idx < f.values.size(); ++idx) {
        if (f.values[idx] != cplx(0.0)) {
          nz_coord.push_back(z);
          nz_val.push_back(f.values[idx]);
        }
        int i = d - 1;
        while (i >= 0 && ++z[i] == L) z[i--] = 0;
      }
    }
    std::vector<int64_t> yf(d);
    enumerate_sphere(
        spec,
        [&](std::span<const int64_t> y) {
          for (int i = 0; i < d; ++i) yf[i] = ((y[i] % L) + L) % L;
          for (size_t s = 0; s < nz_val.size(); ++s) {
            size_t idx = 0;
            for (int i = 0; i < d; ++i) {
              int64_t c = nz_coord[s][i] + yf[i];
              if (c >= L) c -= L;
              idx += stride[i] * size_t(c);
            }
            out.values[idx] += nz_val[s];
          }
        },
        cfg.lattice);
    for (auto& v : out.values) v *= invN;
    return out;
  }

  // dense path: fold the indicator onto the grid, convolve in frequency
  GridFunction ind = GridFunction::zeros(L, d);
  std::vector<size_t> stride(d);
  stride[d - 1] = 1;
  for (int i = d - 2; i >= 0; --i) stride[i] = stride[i + 1] * size_t(L);
  enumerate_sphere(
      spec,
      [&](std::span<const int64_t> y) {
        size_t idx = 0;
        for (int i = 0; i < d; ++i) idx += stride[i] * size_t(((y[i] % L) + L) % L);
        ind.values[idx] += 1.0;
      },
      cfg.lattice);
  GridFunction F = f;
  detail::fft_grid(F, false);
  detail::fft_grid(ind, false);
  for (size_t i = 0; i < F.size(); ++i) F.values[i] *= ind.values[i];
  detail::fft_grid(F, true);
  for (auto& v : F.values) v *= invN;
  return F;
}

// sup over r in [R, 2R) of |A_r f|, levels restricted to nonempty spheres.
inline GridFunction dyadic_maximal(const GridFunction& f, int k, int d, double R,
                                   const GridOpConfig& cfg = {}) {
  if (f.dimension != d) throw domain_error("dyadic_maximal: dimension mismatch");
  int64_t n_lo = int64_t(std::ceil(std::pow(R, double(k))));
  int64_t n_hi = int64_t(std::ceil(std::pow(2.0 * R, double(k)))) - 1;
  auto levels = admissible_levels(k, d, std::max<int64_t>(1, n_lo), n_hi, cfg.lattice);
  if (levels.empty()) throw domain_error("dyadic_maximal: no admissible radius in [R, 2R)");
  GridFunction out = GridFunction::zeros(f.side, d);
  for (int64_t n : levels) {
    auto avg = spherical_average(f, SphereSpec{k, d, n}, cfg);
    for (size_t i = 0; i < out.size(); ++i)
      out.values[i] = std::max(out.values[i].real(), std::abs(avg.values[i]));
  }
  return out;
}

// sup over all admissible r <= r_max, streamed level by level.
inline GridFunction full_maximal(const GridFunction& f, int k, int d, double r_max,
                                 const GridOpConfig& cfg = {}) {
  if (f.dimension != d) throw domain_error("full_maximal: dimension mismatch");
  int64_t n_hi = int64_t(std::floor(std::pow(r_max, double(k))));
  auto levels = admissible_levels(k, d, 1, n_hi, cfg.lattice);
  if (levels.empty()) throw domain_error("full_maximal: no admissible radius below r_max");
  GridFunction out = GridFunction::zeros(f.side, d);
  for (int64_t n : levels) {
    auto avg = spherical_average(f, SphereSpec{k, d, n}, cfg);
    for (size_t i = 0; i < out.size(); ++i)
      out.values[i] = std::max(out.values[i].real(), std::abs(avg.values[i]));
  }
  return out;
}

// ---------------------------------------------------------------------------
// l^p threshold probe on the delta function. A_* delta(x) = N(n_x)^{-1} at
// the unique level through x, so ||A_* delta||_p^p partial sums reduce to
// sum over admissible levels of N(n)^{1-p}; exact counts, no grids.

struct ProbeRow {
  double p = 2.0;
  double r_checkpoint = 1.0;
  double partial_sum = 0.0;
  double slope = 0.0;  // fitted log-log growth over the upper half of checkpoints
};

struct ProbeReport {
  int degree = 2;
  int dimension = 1;
  double r_max = 1.0;
  std::vector<ProbeRow> rows;
  double crossover_p = 0.0;        // smallest probed p with flat partial sums
  double paper_threshold = 0.0;    // d / (d - k)
};

inline ProbeReport lp_threshold_probe(int k, int d, std::span<const double> p_list,
                                      double r_max, const LatticeBudget& budget = {},
                                      double flat_slope = 0.02) {
  if (d <= k) throw domain_error("lp_threshold_probe: requires d > k");
  int64_t n_max = int64_t(std::floor(std::pow(r_max, double(k))));
  if (n_max < 4) throw domain_error("lp_threshold_probe: r_max too small");
  auto counts = count_all_levels(k, d, n_max, budget);

  int n_check = 24;
  std::vector<double> r_checks(n_check);
  double r0 = std::max(2.0, std::pow(8.0, 1.0 / k));
  for (int i = 0; i < n_check; ++i)
    r_checks[i] = r0 * std::pow(r_max / r0, double(i) / (n_check - 1));

  auto slope_for = [&](double p, std::vector<double>* sums_out) {
    std::vector<double> sums(n_check, 0.0);
    KahanSum acc;
    double sup_inv = 0.0;
    size_t ci = 0;
    for (int64_t n = 1; n <= n_max && ci < size_t(n_check); ++n) {
      if (counts[n] > 0) {
        double N = u128_to_double(counts[n]);
        if (std::isinf(p))
          sup_inv = std::max(sup_inv, 1.0 / N);
        else
          acc.add(std::pow(N, 1.0 - p));
      }
      while (ci < size_t(n_check) && double(n) >= std::pow(r_checks[ci], double(k)) - 0.5) {
        sums[ci] = std::isinf(p) ? sup_inv : acc.value();
        ++ci;
      }
    }
    for (; ci < size_t(n_check); ++ci)
      sums[ci] = std::isinf(p) ? sup_inv : acc.value();
    if (sums_out) *sums_out = sums;
    std::vector<double> xs, ys;
    for (int i = n_check / 2; i < n_check; ++i) {
      xs.push_back(r_checks[i]);
      ys.push_back(sums[i]);
    }
    auto fit = loglog_fit(xs, ys);
    return fit.degenerate ? 0.0 : fit.slope;
  };

  ProbeReport rep;
  rep.degree = k;
  rep.dimension = d;
  rep.r_max = r_max;
  rep.paper_threshold = double(d) / double(d - k);
  for (double p : p_list) {
    std::vector<double> sums;
    double sl = slope_for(p, &sums);
    for (int i = 0; i < n_check; ++i) rep.rows.push_back({p, r_checks[i], sums[i], sl});
  }
  // empirical crossover on a fine p grid
  rep.crossover_p = 0.0;
  for (double p = 1.05; p <= 3.0 + 1e-9; p += 0.01) {
    if (slope_for(p, nullptr) < flat_slope) {
      rep.crossover_p = p;
      break;
    }
  }
  return rep;
}

// ---------------------------------------------------------------------------
// Flat binary grid I/O: magic, L, d, then L^d complex doubles, little-endian.

inline constexpr char GRID_MAGIC[8] = {'K', 'S', 'G', 'R', 'I', 'D', '0', '1'};

inline void write_grid(const GridFunction& g, const std::string& path) {
  std::ofstream out(path, std::ios::binary);
  if (!out) throw std::runtime_error("write_grid: cannot open " + path);
  out.write(GRID_MAGIC, 8);
  uint64_t L = uint64_t(g.side);
  uint32_t d = uint32_t(g.dimension);
  out.write(reinterpret_cast<const char*>(&L), 8);
  out.write(reinterpret_cast<const char*>(&d), 4);
  for (auto& v : g.values) {
    double re = v.real(), im = v.imag();
    out.write(reinterpret_cast<const char*>(&re), 8);
    out.write(reinterpret_cast<const char*>(&im), 8);
  }
}

inline GridFunction read_grid(const std::string& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw std::runtime_error("read_grid: cannot open " + path);
  char magic[8];
  in.read(magic, 8);
  if (std::memcmp(magic, GRID_MAGIC, 8) != 0) throw std::runtime_error("read_grid: bad magic");
  uint64_t L;
  uint32_t d;
  in.read(reinterpret_cast<char*>(&L), 8);
  in.read(reinterpret_cast<char*>(&d), 4);
  GridFunction g = GridFunction::zeros(int64_t(L), int(d));
  for (auto& v : g.values) {
    double re, im;
    in.read(reinterpret_cast<char*>(&re), 8);
    in.read(reinterpret_cast<char*>(&im), 8);
    v = {re, im};
  }
  if (!in) throw std::runtime_error("read_grid: truncated file");
  return g;
}

}  // namespace kspheres
