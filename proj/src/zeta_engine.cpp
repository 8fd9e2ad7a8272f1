#include "zetalab/zeta_engine.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <stdexcept>

#include "zetalab/numeric.hpp"
#include "zetalab/rng.hpp"

namespace zetalab {

namespace {

constexpr long double kPiL = 3.14159265358979323846264338327950288L;
constexpr long double kTwoPiL = 6.28318530717958647692528676655900577L;

// B_{2k} for the Euler-Maclaurin tail, k = 1..16
constexpr double kBernoulli2k[] = {
    1.0 / 6,
    -1.0 / 30,
    1.0 / 42,
    -1.0 / 30,
    5.0 / 66,
    -691.0 / 2730,
    7.0 / 6,
    -3617.0 / 510,
    43867.0 / 798,
    -174611.0 / 330,
    854513.0 / 138,
    -236364091.0 / 2730,
    8553103.0 / 6,
    -23749461029.0 / 870,
    8615841276005.0 / 14322,
    -7709321041217.0 / 510,
};

double phase_cos(long double t, long double log_n, long double extra) {
  long double phi = fmodl(extra - t * log_n, kTwoPiL);
  return std::cos(static_cast<double>(phi));
}

std::complex<double> unit_phase(long double t, long double log_n) {
  // e^{-i t log n} with the product reduced in extended precision
  long double phi = fmodl(t * log_n, kTwoPiL);
  double d = static_cast<double>(phi);
  return {std::cos(d), -std::sin(d)};
}

// psi(z) = cos(2 pi (z^2 - z - 1/16)) / cos(2 pi z); entire, the real
// singularities of the denominator are removable.
std::complex<double> rs_psi(std::complex<double> z) {
  std::complex<double> num = std::cos(2.0 * M_PI * (z * z - z - 0.0625));
  std::complex<double> den = std::cos(2.0 * M_PI * z);
  return num / den;
}

struct PsiDerivatives {
  double d0, d2, d3, d6;
};

// Cauchy-integral derivatives on a circle small enough to stay inside the
// region where the quotient form of psi is well conditioned. The radius is
// chosen so that both real-axis crossings keep clear of the removable
// singularities at odd multiples of 1/4.
PsiDerivatives psi_derivatives(double p) {
  static const double candidates[] = {0.37, 0.39, 0.41, 0.35, 0.33, 0.43, 0.45, 0.31};
  double r = candidates[0];
  for (double cand : candidates) {
    auto dist = [&](double x) {
      double q = std::abs(x - 0.25) / 0.5;
      return 0.5 * std::abs(q - std::floor(q + 0.5));
    };
    if (std::min(dist(p - cand), dist(p + cand)) >= 0.045) {
      r = cand;
      break;
    }
  }
  const int m = 128;
  std::complex<double> mom0 = 0, mom2 = 0, mom3 = 0, mom6 = 0;
  for (int i = 0; i < m; ++i) {
    double phi = 2.0 * M_PI * i / m;
    std::complex<double> e{std::cos(phi), std::sin(phi)};
    std::complex<double> f = rs_psi(p + r * e);
    std::complex<double> einv = std::conj(e);
    std::complex<double> e2 = einv * einv;
    mom0 += f;
    mom2 += f * e2;
    mom3 += f * e2 * einv;
    mom6 += f * e2 * e2 * e2;
  }
  double inv_m = 1.0 / m;
  PsiDerivatives d;
  d.d0 = mom0.real() * inv_m;
  d.d2 = 2.0 * mom2.real() * inv_m / (r * r);
  d.d3 = 6.0 * mom3.real() * inv_m / (r * r * r);
  d.d6 = 720.0 * mom6.real() * inv_m / std::pow(r, 6);
  return d;
}

}  // namespace

long double riemann_siegel_theta(long double t) {
  // theta(t) = (t/2) log(t/2pi) - t/2 - pi/8 + 1/(48t) + 7/(5760 t^3) + ...
  long double u = t / kTwoPiL;
  long double th = 0.5L * t * logl(u) - 0.5L * t - kPiL / 8.0L;
  long double t2 = t * t;
  th += 1.0L / (48.0L * t) + 7.0L / (5760.0L * t * t2) + 31.0L / (80640.0L * t * t2 * t2) +
        127.0L / (430080.0L * t * t2 * t2 * t2);
  return th;
}

ZetaPoint zeta_euler_maclaurin(double t, int min_correction_terms) {
  double at = std::abs(t);
  std::complex<double> s{0.5, at};

  long n_sum = std::max<long>(32, static_cast<long>(0.5 * at) + 16);
  long double tl = at;

  // sum_{n < N} n^{-s}
  KahanSum acc_re, acc_im;
  for (long n = 1; n < n_sum; ++n) {
    long double log_n = logl(static_cast<long double>(n));
    double amp = std::exp(-0.5 * static_cast<double>(log_n));
    std::complex<double> term = amp * unit_phase(tl, log_n);
    acc_re.add(term.real());
    acc_im.add(term.imag());
  }

  long double log_nd = logl(static_cast<long double>(n_sum));
  double amp_n = std::exp(-0.5 * static_cast<double>(log_nd));
  std::complex<double> n_pow_minus_s = amp_n * unit_phase(tl, log_nd);

  // N^{1-s}/(s-1) + N^{-s}/2
  std::complex<double> tail =
      n_pow_minus_s * static_cast<double>(n_sum) / (s - 1.0) + 0.5 * n_pow_minus_s;

  // correction terms B_{2k}/(2k)! (s)_{2k-1} N^{-s-2k+1}, built recursively
  std::complex<double> corr{0.0, 0.0};
  std::complex<double> factor = n_pow_minus_s * s / static_cast<double>(n_sum);  // k = 1 core
  double b_over_fact = kBernoulli2k[0] / 2.0;                                    // B_2/2!
  double est_tail = 0.0;
  for (int k = 1; k <= 16; ++k) {
    std::complex<double> term = b_over_fact * factor;
    corr += term;
    est_tail = std::abs(term);
    if (k >= min_correction_terms && std::abs(term) < 1e-18 * (1.0 + std::abs(corr))) break;
    if (k < 16) {
      factor *= (s + static_cast<double>(2 * k - 1)) * (s + static_cast<double>(2 * k)) /
                (static_cast<double>(n_sum) * static_cast<double>(n_sum));
      b_over_fact = kBernoulli2k[k] / kBernoulli2k[k - 1] * b_over_fact /
                    ((2 * k + 1.0) * (2 * k + 2.0));
    }
  }

  std::complex<double> value{acc_re.value() + tail.real() + corr.real(),
                             acc_im.value() + tail.imag() + corr.imag()};
  if (t < 0) value = std::conj(value);

  ZetaPoint out;
  out.t = t;
  out.value = value;
  out.log_abs = std::abs(value) > 0 ? std::log(std::abs(value))
                                    : -std::numeric_limits<double>::infinity();
  out.method = "euler_maclaurin";
  out.est_error = est_tail + 1e-15 * n_sum * 0.01 + 4e-16;
  return out;
}

ZetaPoint zeta_riemann_siegel(double t) {
  double at = std::abs(t);
  if (at < 30.0) throw std::invalid_argument("riemann_siegel needs |t| >= 30");
  long double tl = at;
  long double theta = riemann_siegel_theta(tl);
  long double theta_mod = fmodl(theta, kTwoPiL);

  double tau = std::sqrt(at / (2.0 * M_PI));
  long n_terms = static_cast<long>(tau);
  double p = tau - static_cast<double>(n_terms);

  KahanSum zsum;
  for (long n = 1; n <= n_terms; ++n) {
    long double log_n = logl(static_cast<long double>(n));
    zsum.add(std::exp(-0.5 * static_cast<double>(log_n)) * phase_cos(tl, log_n, theta_mod));
  }
  double z = 2.0 * zsum.value();

  PsiDerivatives psi = psi_derivatives(p);
  double pi2 = M_PI * M_PI;
  double c0 = psi.d0;
  double c1 = -psi.d3 / (96.0 * pi2);
  double c2 = psi.d2 / (64.0 * pi2) + psi.d6 / (18432.0 * pi2 * pi2);
  double u = at / (2.0 * M_PI);
  double remainder_scale = ((n_terms - 1) % 2 == 0 ? 1.0 : -1.0) * std::pow(u, -0.25);
  z += remainder_scale * (c0 + c1 / std::sqrt(u) + c2 / u);

  double theta_d = static_cast<double>(theta_mod);
  std::complex<double> value = z * std::complex<double>(std::cos(theta_d), -std::sin(theta_d));
  if (t < 0) value = std::conj(value);

  ZetaPoint out;
  out.t = t;
  out.value = value;
  out.log_abs = std::abs(z) > 0 ? std::log(std::abs(z))
                                : -std::numeric_limits<double>::infinity();
  out.method = "riemann_siegel";
  // heuristic: magnitude of the first omitted correction order
  out.est_error = 2.0 * std::pow(u, -0.25 - 1.5) + std::abs(c2) * std::pow(u, -0.25 - 1.0) * 0.1 +
                  2e-10 * (1.0 + std::abs(z));
  return out;
}

ZetaPoint zeta_half_line(double t) {
  double at = std::abs(t);
  if (at > 1e10) throw std::invalid_argument("height out of range: |t| capped at 1e10");
  if (at < 6e4) return zeta_euler_maclaurin(t);
  return zeta_riemann_siegel(t);
}

LevelSetEstimate LevelSetBatch::measure(double v) const {
  long hits = 0;
  for (double x : log_abs)
    if (x > v) ++hits;
  LevelSetEstimate est;
  est.t_big = t_big;
  est.v = v;
  est.n_samples = n_samples;
  est.seed = seed;
  est.fraction = static_cast<double>(hits) / static_cast<double>(n_samples);
  est.std_err = std::sqrt(est.fraction * (1.0 - est.fraction) / static_cast<double>(n_samples));
  return est;
}

LevelSetBatch sample_level_sets(double t_big, long n_samples, uint64_t seed, unsigned threads) {
  if (n_samples < 1) throw std::invalid_argument("need at least one sample");
  LevelSetBatch batch;
  batch.t_big = t_big;
  batch.n_samples = n_samples;
  batch.seed = seed;
  batch.log_abs.assign(n_samples, 0.0);
  uint64_t key = rng::stream_key(seed, "levelset");
  parallel_chunks(static_cast<std::size_t>(n_samples), threads,
                  [&](std::size_t, std::size_t begin, std::size_t end) {
                    for (std::size_t i = begin; i < end; ++i) {
                      double u = rng::uniform01(key, 0, i);
                      double tau = t_big * (1.0 + u);
                      batch.log_abs[i] = zeta_half_line(tau).log_abs;
                    }
                  });
  return batch;
}

LevelSetEstimate level_set_measure(double t_big, double v, long n_samples, uint64_t seed,
                                   unsigned threads) {
  if (n_samples < 1000) throw std::invalid_argument("need at least 10^3 samples");
  return sample_level_sets(t_big, n_samples, seed, threads).measure(v);
}

MomentPair moment_via_levelsets(double t_big, double k, const std::vector<double>& levels,
                                long n_samples, uint64_t seed, unsigned threads) {
  if (levels.size() < 2) throw std::invalid_argument("need at least two levels");
  if (!std::is_sorted(levels.begin(), levels.end()))
    throw std::invalid_argument("levels must ascend");
  LevelSetBatch batch = sample_level_sets(t_big, n_samples, seed, threads);

  double top = levels.back();
  double max_obs = *std::max_element(batch.log_abs.begin(), batch.log_abs.end());
  if (max_obs > top) throw std::invalid_argument("levels span too narrow for the observed range");

  KahanSum direct;
  for (double x : batch.log_abs) direct.add(std::exp(2.0 * k * x));

  // survival function of the sample, integrated against d(e^{2kV}) exactly
  // per level cell with the survival read at the cell midpoint
  std::vector<double> sorted = batch.log_abs;
  std::sort(sorted.begin(), sorted.end());
  auto survival = [&](double v) {
    auto it = std::upper_bound(sorted.begin(), sorted.end(), v);
    return static_cast<double>(sorted.end() - it) / static_cast<double>(sorted.size());
  };
  KahanSum via;
  via.add(std::exp(2.0 * k * levels.front()));  // survival = 1 below the bottom level
  for (std::size_t i = 0; i + 1 < levels.size(); ++i) {
    double mid_surv = survival(0.5 * (levels[i] + levels[i + 1]));
    via.add(mid_surv * (std::exp(2.0 * k * levels[i + 1]) - std::exp(2.0 * k * levels[i])));
  }

  MomentPair out;
  out.direct = direct.value() / static_cast<double>(n_samples);
  out.via_levels = via.value();
  out.n_samples = n_samples;
  return out;
}

ShortIntervalMax short_interval_max(double t_center, double gamma_exp, double log_t,
                                    double grid_step) {
  if (grid_step > 0.05) throw std::invalid_argument("grid_step must be <= 0.05");
  double width = std::pow(log_t, gamma_exp);
  long half = static_cast<long>(std::ceil(width / grid_step));
  ShortIntervalMax out;
  out.max_abs = 0.0;
  out.grid_points = 2 * half + 1;
  for (long i = -half; i <= half; ++i) {
    double h = static_cast<double>(i) * grid_step;
    if (std::abs(h) > width) h = h < 0 ? -width : width;
    double a = std::abs(zeta_half_line(t_center + h).value);
    if (a > out.max_abs) {
      out.max_abs = a;
      out.arg_h = h;
    }
  }
  double root = std::sqrt(1.0 + gamma_exp);
  out.benchmark = std::pow(log_t, root) / std::pow(std::log(log_t), 1.0 / (4.0 * root));
  return out;
}

}  // namespace zetalab
