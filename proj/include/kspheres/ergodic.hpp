// k-spherical ergodic averages on commuting torus rotations T_j x = x + alpha_j,
// spectral measures of trigonometric observables, and convergence diagnostics.
//
// For f(x) = sum_p c_p e(p.x) the average has the exact spectral form
//   A_r f(x) = sum_p c_p e(p.x) a_hat_r(eta(p)) / N(r),  eta(p)_j = p . alpha_j,
// which ties the module to the lattice exponential sums; the direct orbit sum
// over enumerated sphere points is kept as the second route.
#pragma once

#include "kspheres/lattice.hpp"

namespace kspheres {

struct TorusSystem {
  int state_dim = 1;                         // s
  std::vector<std::vector<double>> alphas;   // d translation vectors in T^s
  // exact representations when the system is rational: alpha[j][i] = num/den
  std::optional<std::vector<std::vector<std::pair<int64_t, int64_t>>>> rationals;

  int dimension() const { return int(alphas.size()); }
  void validate() const {
    if (state_dim < 1) throw domain_error("TorusSystem: state dimension must be >= 1");
    if (alphas.empty()) throw domain_error("TorusSystem: needs at least one translation");
    for (auto& a : alphas)
      if (int(a.size()) != state_dim) throw domain_error("TorusSystem: alpha dimension mismatch");
  }

  static TorusSystem from_doubles(int s, std::vector<std::vector<double>> a) {
    TorusSystem sys;
    sys.state_dim = s;
    sys.alphas = std::move(a);
    for (auto& v : sys.alphas)
      for (auto& x : v) x = frac1(x);
    sys.validate();
    return sys;
  }
  static TorusSystem from_rationals(int s, std::vector<std::vector<std::pair<int64_t, int64_t>>> r) {
    TorusSystem sys;
    sys.state_dim = s;
    for (auto& vec : r) {
      std::vector<double> a;
      for (auto& [num, den] : vec) {
        if (den <= 0) throw domain_error("TorusSystem: rational with nonpositive denominator");
        int64_t g = gcd_i64(num, den);
        a.push_back(frac1(double(num / g) / double(den / g)));
      }
      sys.alphas.push_back(std::move(a));
    }
    sys.rationals = std::move(r);
    sys.validate();
    return sys;
  }
};

struct TrigObservable {
  std::vector<std::vector<int64_t>> freqs;  // p vectors in Z^s
  std::vector<cplx> coeffs;

  void validate(int s) const {
    if (freqs.size() != coeffs.size()) throw domain_error("TrigObservable: size mismatch");
    for (auto& p : freqs)
      if (int(p.size()) != s) throw domain_error("TrigObservable: frequency dimension mismatch");
  }
  cplx eval(std::span<const double> x) const {
    KahanCplx acc;
    for (size_t i = 0; i < freqs.size(); ++i) {
      double ph = 0.0;
      for (size_t j = 0; j < freqs[i].size(); ++j) ph += double(freqs[i][j]) * x[j];
      acc.add(coeffs[i] * unit_phase(frac1(ph)));
    }
    return acc.value();
  }
  cplx mean() const {
    for (size_t i = 0; i < freqs.size(); ++i) {
      bool zero = true;
      for (int64_t v : freqs[i]) zero = zero && v == 0;
      if (zero) return coeffs[i];
    }
    return 0.0;
  }
  double l2_mass() const {
    double m = 0.0;
    for (auto& c : coeffs) m += std::norm(c);
    return m;
  }
};

// eta(p)_j = p . alpha_j mod 1
inline std::vector<double> joint_frequency(const TorusSystem& sys, std::span<const int64_t> p) {
  std::vector<double> eta(sys.dimension());
  for (int j = 0; j < sys.dimension(); ++j) {
    double ph = 0.0;
    for (int i = 0; i < sys.state_dim; ++i) ph += double(p[i]) * sys.alphas[j][i];
    eta[j] = frac1(ph);
  }
  return eta;
}

// ---------------------------------------------------------------------------
// Strong ergodicity: every power family (T_1^q, ..., T_d^q) ergodic, i.e. no
// q >= 1 and p != 0 with q (p . alpha_j) in Z for all j. Rational systems
// always fail (take q = lcm of denominators). Float systems can only be
// falsified inside a search box; outside it the verdict is Undecided.

enum class Ergodicity { NotStronglyErgodic, Undecided };

struct ErgodicityReport {
  Ergodicity status = Ergodicity::Undecided;
  int64_t witness_q = 0;
  std::vector<int64_t> witness_p;
};

inline ErgodicityReport classify_strong_ergodicity(const TorusSystem& sys, int64_t q_max = 50,
                                                   int64_t p_max = 20, double tol = 1e-9) {
  sys.validate();
  ErgodicityReport rep;
  if (sys.rationals) {
    int64_t l = 1;
    for (auto& vec : *sys.rationals)
      for (auto& [num, den] : vec) {
        int64_t g = gcd_i64(num, den);
        int64_t dd = den / g;
        l = l / gcd_i64(l, dd) * dd;
      }
    rep.status = Ergodicity::NotStronglyErgodic;
    rep.witness_q = l;
    rep.witness_p.assign(sys.state_dim, 0);
    rep.witness_p[0] = 1;
    return rep;
  }
  int s = sys.state_dim;
  std::vector<int64_t> p(s, -p_max);
  for (;;) {
    bool zero = true;
    for (int64_t v : p) zero = zero && v == 0;
    if (!zero) {
      for (int64_t q = 1; q <= q_max; ++q) {
        bool all_integer = true;
        for (int j = 0; j < sys.dimension() && all_integer; ++j) {
          double ph = 0.0;
          for (int i = 0; i < s; ++i) ph += double(p[i]) * sys.alphas[j][i];
          double v = frac1(double(q) * ph);
          all_integer = v < tol || v > 1.0 - tol;
        }
        if (all_integer) {
          rep.status = Ergodicity::NotStronglyErgodic;
          rep.witness_q = q;
          rep.witness_p = p;
          return rep;
        }
      }
    }
    int i = s - 1;
    while (i >= 0 && ++p[i] > p_max) p[i--] = -p_max;
    if (i < 0) break;
  }
  rep.status = Ergodicity::Undecided;
  return rep;
}

// ---------------------------------------------------------------------------
// Averages

enum class AveragePath { Auto, Direct, Spectral };

inline cplx ergodic_average(const TorusSystem& sys, const TrigObservable& f,
                            const SphereSpec& spec, std::span<const double> x,
                            AveragePath path = AveragePath::Auto,
                            const LatticeBudget& budget = {}) {
  sys.validate();
  f.validate(sys.state_dim);
  if (int(x.size()) != sys.state_dim) throw domain_error("ergodic_average: point dimension");
  if (spec.dimension != sys.dimension())
    throw domain_error("ergodic_average: sphere dimension must match the family size d");
  u128 N = count_sphere(spec, budget).count;
  if (N == 0) throw domain_error("ergodic_average: empty sphere");
  double invN = 1.0 / u128_to_double(N);

  bool direct = path == AveragePath::Direct ||
                (path == AveragePath::Auto && N <= u128(20000));
  if (direct) {
    KahanCplx acc;
    std::vector<double> y(sys.state_dim);
    enumerate_sphere(
        spec,
        [&](std::span<const int64_t> nvec) {
          for (int i = 0; i < sys.state_dim; ++i) {
            double shift = 0.0;
            for (int j = 0; j < sys.dimension(); ++j)
              shift += double(nvec[j]) * sys.alphas[j][i];
            y[i] = frac1(x[i] + shift);
          }
          acc.add(f.eval(y));
        },
        budget);
    return acc.value() * invN;
  }
  KahanCplx acc;
  for (size_t t = 0; t < f.freqs.size(); ++t) {
    auto eta = joint_frequency(sys, f.freqs[t]);
    cplx ah = sphere_exp_sum(spec, eta, budget).value;
    double ph = 0.0;
    for (int i = 0; i < sys.state_dim; ++i) ph += double(f.freqs[t][i]) * x[i];
    acc.add(f.coeffs[t] * unit_phase(frac1(ph)) * ah);
  }
  return acc.value() * invN;
}

// ---------------------------------------------------------------------------
// Spectral measure: atoms at eta(p) with weights |c_p|^2, merged over equal
// joint frequencies.

struct SpectralMeasure {
  std::vector<std::pair<std::vector<double>, double>> atoms;
  double total_mass = 0.0;

  double mass_at_zero(double tol = 0.0) const {
    double m = 0.0;
    for (auto& [eta, w] : atoms) {
      bool zero = true;
      for (double e : eta) {
        double dist = std::min(e, 1.0 - e);
        zero = zero && dist <= tol;
      }
      if (zero) m += w;
    }
    return m;
  }
  // integral of e(m . eta) against the measure
  cplx integrate_character(std::span<const int64_t> m) const {
    KahanCplx acc;
    for (auto& [eta, w] : atoms) {
      double ph = 0.0;
      for (size_t j = 0; j < eta.size(); ++j) ph += double(m[j]) * eta[j];
      acc.add(w * unit_phase(frac1(ph)));
    }
    return acc.value();
  }
};

inline SpectralMeasure spectral_measure(const TorusSystem& sys, const TrigObservable& f) {
  sys.validate();
  f.validate(sys.state_dim);
  SpectralMeasure nu;
  for (size_t t = 0; t < f.freqs.size(); ++t) {
    auto eta = joint_frequency(sys, f.freqs[t]);
    double w = std::norm(f.coeffs[t]);
    bool merged = false;
    for (auto& [e, wt] : nu.atoms)
      if (e == eta) {
        wt += w;
        merged = true;
        break;
      }
    if (!merged) nu.atoms.emplace_back(eta, w);
    nu.total_mass += w;
  }
  return nu;
}

// <T^m f, f> from the observable algebra (per-frequency, unmerged): the
// independent closed form against which the measure is checked.
inline cplx correlation_closed_form(const TorusSystem& sys, const TrigObservable& f,
                                    std::span<const int64_t> m) {
  KahanCplx acc;
  for (size_t t = 0; t < f.freqs.size(); ++t) {
    auto eta = joint_frequency(sys, f.freqs[t]);
    double ph = 0.0;
    for (size_t j = 0; j < eta.size(); ++j) ph += double(m[j]) * eta[j];
    acc.add(std::norm(f.coeffs[t]) * unit_phase(frac1(ph)));
  }
  return acc.value();
}

// ---------------------------------------------------------------------------
// Scans

// Deterministic quasi-random sample points (Kronecker sequence).
inline std::vector<std::vector<double>> quasi_random_points(int s, int count, uint64_t seed) {
  static const double irr[8] = {0.6180339887498949, 0.4142135623730951, 0.7320508075688772,
                                0.2360679774997896, 0.6457513110645906, 0.3166247903553998,
                                0.6055512754639893, 0.1231056256176605};
  std::vector<std::vector<double>> pts(count, std::vector<double>(s));
  for (int i = 0; i < count; ++i)
    for (int j = 0; j < s; ++j)
      pts[i][j] = frac1(0.5 + double(seed % 97) * 0.0103 + (i + 1) * irr[j % 8]);
  return pts;
}

struct ConvergenceRow {
  int64_t level = 0;
  double max_deviation = 0.0;
};

inline std::vector<ConvergenceRow> convergence_scan(const TorusSystem& sys,
                                                    const TrigObservable& f, int k, int d,
                                                    std::span<const int64_t> levels,
                                                    std::span<const std::vector<double>> xs,
                                                    const LatticeBudget& budget = {}) {
  if (sys.dimension() != d) throw domain_error("convergence_scan: family size != d");
  std::vector<ConvergenceRow> rows;
  cplx mean = f.mean();
  for (int64_t n : levels) {
    SphereSpec spec{k, d, n};
    if (count_sphere(spec, budget).count == 0) continue;
    double dev = 0.0;
    for (auto& x : xs) {
      cplx v = ergodic_average(sys, f, spec, x, AveragePath::Spectral, budget);
      dev = std::max(dev, std::abs(v - mean));
    }
    rows.push_back({n, dev});
  }
  return rows;
}

struct LowHighSplit {
  double low_mass = 0.0;         // nu_f({|eta|_inf <= 1/r_j}), torus distance
  double high_decay_slope = 0.0; // fitted decay of the high-frequency average part
  bool degenerate = false;
  std::vector<ConvergenceRow> high_rows;
};

inline LowHighSplit low_high_split_diagnostic(const TorusSystem& sys, const TrigObservable& f,
                                              int k, int d, double r_j,
                                              std::span<const int64_t> levels,
                                              std::span<const std::vector<double>> xs,
                                              const LatticeBudget& budget = {}) {
  if (!(r_j > 0.0)) throw domain_error("low_high_split: r_j must be > 0");
  if (sys.dimension() != d) throw domain_error("low_high_split: family size != d");
  LowHighSplit out;
  auto nu = spectral_measure(sys, f);
  for (auto& [eta, w] : nu.atoms) {
    double dinf = 0.0;
    for (double e : eta) dinf = std::max(dinf, std::min(e, 1.0 - e));
    if (dinf <= 1.0 / r_j) out.low_mass += w;
  }
  // high-frequency part of the average via the spectral route
  std::vector<double> ts, vs;
  for (int64_t n : levels) {
    SphereSpec spec{k, d, n};
    u128 N = count_sphere(spec, budget).count;
    if (N == 0) continue;
    double invN = 1.0 / u128_to_double(N);
    double dev = 0.0;
    for (auto& x : xs) {
      KahanCplx acc;
      for (size_t t = 0; t < f.freqs.size(); ++t) {
        auto eta = joint_frequency(sys, f.freqs[t]);
        double dinf = 0.0;
        for (double e : eta) dinf = std::max(dinf, std::min(e, 1.0 - e));
        if (dinf <= 1.0 / r_j) continue;  // low part dropped
        cplx ah = sphere_exp_sum(spec, eta, budget).value;
        double ph = 0.0;
        for (int i = 0; i < sys.state_dim; ++i) ph += double(f.freqs[t][i]) * x[i];
        acc.add(f.coeffs[t] * unit_phase(frac1(ph)) * ah);
      }
      dev = std::max(dev, std::abs(acc.value()) * invN);
    }
    out.high_rows.push_back({n, dev});
    ts.push_back(std::pow(double(n), 1.0 / k));  // radius
    vs.push_back(dev);
  }
  std::vector<double> bt, bv;
  block_maxima(ts, vs, 2.0, bt, bv);
  auto fit = loglog_fit(bt, bv);
  out.degenerate = fit.degenerate;
  out.high_decay_slope = fit.degenerate ? 0.0 : fit.slope;
  return out;
}

}  // namespace kspheres
