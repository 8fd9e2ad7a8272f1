#pragma once

#include <complex>
#include <cstdint>
#include <string>
#include <vector>

namespace zetalab {

struct ZetaPoint {
  double t = 0.0;
  std::complex<double> value;
  double log_abs = 0.0;  // -inf at zeros
  std::string method;    // "euler_maclaurin" | "riemann_siegel"
  double est_error = 0.0;
};

// Riemann-Siegel theta, Stirling expansion; accurate for |t| >= ~10.
long double riemann_siegel_theta(long double t);

// zeta(1/2 + it). Euler-Maclaurin below the height where the Riemann-Siegel
// C2 term drops under 1e-6, Riemann-Siegel with C0..C2 corrections above.
// Negative t handled by reflection. |t| capped at 1e10.
ZetaPoint zeta_half_line(double t);

// Forced-method variants. The Euler-Maclaurin path is independent of the
// theta phase and of the Riemann-Siegel machinery, so it doubles as an
// oracle for both.
ZetaPoint zeta_euler_maclaurin(double t, int min_correction_terms = 10);
ZetaPoint zeta_riemann_siegel(double t);

struct LevelSetEstimate {
  double t_big = 0.0;  // the T anchoring [T, 2T]
  double v = 0.0;
  double fraction = 0.0;
  long n_samples = 0;
  double std_err = 0.0;
  uint64_t seed = 0;
};

// Shared sample set for a family of levels: the fractions for ascending V
// are computed from one batch, so monotonicity in V is exact.
struct LevelSetBatch {
  double t_big = 0.0;
  long n_samples = 0;
  uint64_t seed = 0;
  std::vector<double> log_abs;  // log|zeta| at each sampled tau

  LevelSetEstimate measure(double v) const;
};

LevelSetBatch sample_level_sets(double t_big, long n_samples, uint64_t seed,
                                unsigned threads = 0);

LevelSetEstimate level_set_measure(double t_big, double v, long n_samples, uint64_t seed,
                                   unsigned threads = 0);

struct MomentPair {
  double direct = 0.0;    // mean of |zeta|^{2k} over the sample
  double via_levels = 0.0;  // 2k int e^{2kV} meas(V) dV from the same sample
  long n_samples = 0;
};

// Both sides of the level-set/moment identity from one batch. The V-integral
// is done piecewise-exactly in e^{2kV} with the empirical survival function
// sampled mid-interval, so refining levels to the order statistics makes the
// two sides agree identically.
MomentPair moment_via_levelsets(double t_big, double k, const std::vector<double>& levels,
                                long n_samples, uint64_t seed, unsigned threads = 0);

struct ShortIntervalMax {
  double max_abs = 0.0;
  double arg_h = 0.0;      // offset achieving the max
  double benchmark = 0.0;  // (log T)^sqrt(1+gamma) / (log log T)^{1/(4 sqrt(1+gamma))}
  long grid_points = 0;
};

ShortIntervalMax short_interval_max(double t_center, double gamma_exp, double log_t,
                                    double grid_step);

}  // namespace zetalab
