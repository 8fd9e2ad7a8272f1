// Acceptance suite: one line per criterion, every tolerance pinned in code.
// Exit status 0 iff every criterion passes.

#include <chrono>
#include <cmath>
#include <cstdio>
#include <string>
#include <vector>

#include "zetalab/barrier_lab.hpp"
#include "zetalab/dirichlet_sums.hpp"
#include "zetalab/experiments.hpp"
#include "zetalab/indicator_poly.hpp"
#include "zetalab/numeric.hpp"
#include "zetalab/prime_tables.hpp"
#include "zetalab/random_models.hpp"
#include "zetalab/rng.hpp"
#include "zetalab/zeta_engine.hpp"

using namespace zetalab;

namespace {

int g_failures = 0;

struct Timer {
  std::chrono::steady_clock::time_point start = std::chrono::steady_clock::now();
  double seconds() const {
    return std::chrono::duration<double>(std::chrono::steady_clock::now() - start).count();
  }
};

void report(int criterion, const std::string& label, bool pass, const std::string& detail,
            double seconds) {
  if (!pass) ++g_failures;
  std::printf("[%s] criterion %2d: %-34s %s (%.2fs)\n", pass ? "PASS" : "FAIL", criterion,
              label.c_str(), detail.c_str(), seconds);
  std::fflush(stdout);
}

char buf[512];

// 1. lambda0: 0.4912 to 4 decimals, residual < 1e-12, under a millisecond
void criterion_1() {
  Timer timer;
  auto t0 = std::chrono::steady_clock::now();
  double lam = solve_lambda0();
  double solve_ms =
      std::chrono::duration<double, std::milli>(std::chrono::steady_clock::now() - t0).count();
  double resid = std::abs(std::exp(-lam) - lam - 0.5 * lam * lam);
  bool pass = std::round(lam * 1e4) / 1e4 == 0.4912 && resid < 1e-12 && solve_ms < 1.0;
  std::snprintf(buf, sizeof buf, "lambda0=%.6f resid=%.1e solve=%.3fms", lam, resid, solve_ms);
  report(1, "lambda0 solver", pass, buf, timer.seconds());
}

// 2. grid exactness across logT x theta, plus exact unit spacing
void criterion_2() {
  Timer timer;
  bool pass = true;
  for (double log_t : {1e3, 1e4, 1e5})
    for (double theta : {1.0, 2.0, 3.0}) {
      GridParams p;
      p.log_t = log_t;
      p.cutoff = theta;
      CheckpointGrid grid = build_grid(p);
      int brute = 0;
      for (int ell = 1; ell < 100; ++ell)
        if (std::exp(static_cast<double>(ell - 1)) / std::sqrt(log_t) <= std::exp(-theta))
          brute = ell;
      if (grid.capital_l != brute + 1) pass = false;
      for (int ell = 2; ell <= grid.capital_l; ++ell)
        if (grid.t(ell) - grid.t(ell - 1) != 1.0) pass = false;
    }
  report(2, "grid exactness", pass, "9 grids, unit spacing exact", timer.seconds());
}

// 3. zeta evaluator anchors and Hardy-Z realness at 100 random heights
void criterion_3() {
  Timer timer;
  ZetaPoint z0 = zeta_half_line(0.0);
  bool anchor1 = std::abs(z0.value.real() + 1.4603545) < 1e-6 && std::abs(z0.value.imag()) < 1e-9;
  bool anchor2 = std::abs(zeta_half_line(14.134725).value) < 1e-4;
  uint64_t key = rng::stream_key(2026, "hardy_acceptance");
  double worst = 0.0;
  for (int i = 0; i < 100; ++i) {
    double t = 1e3 + (1e6 - 1e3) * rng::uniform01(key, 0, static_cast<uint64_t>(i));
    ZetaPoint z = zeta_euler_maclaurin(t);
    long double th = fmodl(riemann_siegel_theta(static_cast<long double>(t)),
                           6.28318530717958647692528676655900577L);
    double c = std::cos(static_cast<double>(th)), s = std::sin(static_cast<double>(th));
    double re = z.value.real() * c - z.value.imag() * s;
    double im = z.value.real() * s + z.value.imag() * c;
    worst = std::max(worst, std::abs(im) / std::max(std::abs(re), 0.05));
  }
  bool pass = anchor1 && anchor2 && worst <= 1e-5;
  std::snprintf(buf, sizeof buf, "zeta(1/2)=%.8f |zeta(rho_1)|=%.2e maxImZ=%.2e",
                z0.value.real(), std::abs(zeta_half_line(14.134725).value), worst);
  report(3, "zeta evaluator", pass, buf, timer.seconds());
}

// 4. mean-value identity: torus oracle to 1e-6 and tau-average within 1%
void criterion_4() {
  Timer timer;
  // <= 4-prime multiplicative support over {2, 3, 5, 7}
  std::vector<TorusTerm> terms{
      {{1, 0, 0, 0}, {0.7, 0.1}},  {{0, 1, 0, 0}, {-0.4, 0.3}}, {{0, 0, 1, 0}, {0.25, -0.5}},
      {{0, 0, 0, 1}, {0.1, 0.9}},  {{1, 1, 0, 0}, {0.6, 0.0}},  {{2, 0, 1, 0}, {-0.3, 0.2}},
      {{1, 0, 0, 1}, {0.05, 0.4}}, {{0, 2, 0, 0}, {0.33, -0.1}}};
  double expected = 0.0;
  for (auto& t : terms) expected += std::norm(t.coeff);
  TorusProbability oracle = torus_mean_square(terms, 4);
  bool torus_ok = std::abs(oracle.value - expected) <= 1e-6;

  // tau-average over [T, 2T] with N/T <= 1e-3, 1e5 samples
  const int n_big = 50;
  const double t_big = 5e4;
  std::vector<std::complex<double>> b(n_big + 1);
  uint64_t ckey = rng::stream_key(4, "mv_coeffs");
  double target = 0.0;
  for (int n = 2; n <= n_big; ++n) {
    b[n] = {rng::uniform01(ckey, 0, n) - 0.5, rng::uniform01(ckey, 1, n) - 0.5};
    target += std::norm(b[n]);
  }
  long samples = 100000;
  uint64_t tkey = rng::stream_key(4, "mv_tau");
  KahanSum acc;
  for (long i = 0; i < samples; ++i) {
    double tau = t_big * (1.0 + rng::uniform01(tkey, 0, static_cast<uint64_t>(i)));
    std::complex<double> sum{0.0, 0.0};
    for (int n = 2; n <= n_big; ++n) {
      double phi = std::fmod(tau * std::log(static_cast<double>(n)), 6.283185307179586);
      sum += b[n] * std::complex<double>(std::cos(phi), -std::sin(phi));
    }
    acc.add(std::norm(sum));
  }
  double tau_avg = acc.value() / static_cast<double>(samples);
  double rel = std::abs(tau_avg - target) / target;
  bool pass = torus_ok && rel <= 0.01;
  std::snprintf(buf, sizeof buf, "torus err=%.1e tau-average rel=%.4f (N/T=%.0e)",
                std::abs(oracle.value - expected), rel, n_big / t_big);
  report(4, "mean-value identity", pass, buf, timer.seconds());
}

// 5. variance/covariance envelopes at T_ell in {1e4, 1e6, 1e8}, MC at 3 SE
void criterion_5(const PrimeTable& table_1e8) {
  Timer timer;
  bool pass = true;
  double worst_var = 0.0, worst_cov = 0.0;
  for (double x : {1e4, 1e6, 1e8}) {
    double log_cut = std::log(x);
    auto sa = DirichletPolySpec::free_standing(log_cut, 25.0 * log_cut);
    auto sb = DirichletPolySpec::free_standing(log_cut, 50.0 * log_cut);
    SecondOrderStats so = analytic_second_order(sa, sb, table_1e8);
    worst_var = std::max(worst_var, std::abs(so.variance - so.predicted));
    worst_cov = std::max(worst_cov, std::abs(so.covariance - so.predicted));
    if (std::abs(so.variance - so.predicted) > 1.0) pass = false;
    if (std::abs(so.covariance - so.predicted) > 2.0) pass = false;
  }
  // Monte Carlo variance at T_ell = 1e4, 1e5 trials, within 3 SE
  double log_cut = std::log(1e4);
  auto spec = DirichletPolySpec::free_standing(log_cut, 25.0 * log_cut);
  PrimeTable small = sieve_primes(10000);
  SecondOrderStats so = analytic_second_order(spec, spec, small);
  long trials = 100000;
  auto sums = sample_model_sums(spec, small, PhaseModel::steinhaus, 2026, trials, 0);
  double mean = 0.0;
  for (double s : sums) mean += s;
  mean /= static_cast<double>(trials);
  double m2 = 0.0, m4 = 0.0;
  for (double s : sums) {
    double d = (s - mean) * (s - mean);
    m2 += d;
    m4 += d * d;
  }
  m2 /= static_cast<double>(trials);
  m4 /= static_cast<double>(trials);
  double se = std::sqrt((m4 - m2 * m2) / static_cast<double>(trials));
  bool mc_ok = std::abs(m2 - so.variance) <= 3.0 * se;
  pass = pass && mc_ok;
  std::snprintf(buf, sizeof buf, "max|var-pred|=%.3f max|cov-pred|=%.3f mc z=%.2f", worst_var,
                worst_cov, std::abs(m2 - so.variance) / se);
  report(5, "variance and covariance", pass, buf, timer.seconds());
}

// 6. moment bounds: exact torus moments q <= 3 under bound*e, gaussian closed form
void criterion_6() {
  Timer timer;
  PrimeTable table = sieve_primes(12);
  auto from = DirichletPolySpec::free_standing(std::log(4.0), std::nullopt);
  auto to = DirichletPolySpec::free_standing(std::log(11.0), std::nullopt);
  bool pass = true;
  double max_ratio = 0.0;
  for (int q : {1, 2, 3}) {
    MomentBoundReport rep = moment_bound_check(from, to, table, q, 0, 1);
    max_ratio = std::max(max_ratio, rep.ratio);
    if (!(rep.mode == "exact-quadrature" && rep.ratio <= 2.718281828459045)) pass = false;
  }
  // gaussian model against (2q-1)!! var^q at q = 2, on a square-free range
  // where the model sum is exactly gaussian
  PrimeTable t170 = sieve_primes(170);
  auto gfrom = DirichletPolySpec::free_standing(std::log(121.0), std::nullopt);
  auto gto = DirichletPolySpec::free_standing(std::log(168.0), std::nullopt);
  long n = 200000;
  MomentBoundReport grep = moment_bound_check(gfrom, gto, t170, 2, n, 7, PhaseModel::gaussian);
  double var2 = grep.gaussian_closed_form / 3.0;
  double se = std::sqrt(96.0) * var2 / std::sqrt(static_cast<double>(n));
  bool gauss_ok = std::abs(grep.empirical - grep.gaussian_closed_form) <= 4.0 * se;
  pass = pass && gauss_ok;
  std::snprintf(buf, sizeof buf, "max exact ratio=%.3f (ceiling e) gauss z=%.2f", max_ratio,
                std::abs(grep.empirical - grep.gaussian_closed_form) / se);
  report(6, "moment bounds", pass, buf, timer.seconds());
}

// 7. exact Bessel-product MGF ratio <= 10 across the desk grid family
void criterion_7() {
  Timer timer;
  bool pass = true;
  double max_ratio = 0.0;
  std::printf("          mgf ratio table (columns lambda = 1/2, 1, 2):\n");
  for (double log_t : {16.0, 18.0, 20.0, 25.0}) {
    CheckpointGrid grid = build_grid(desk_grid_params(log_t));
    PrimeTable table = sieve_primes(
        static_cast<uint64_t>(std::ceil(std::exp(grid.log_t_ell(grid.capital_l)))) + 1);
    std::printf("          logT=%5.1f:", log_t);
    for (double lambda : {0.5, 1.0, 2.0}) {
      MgfBoundReport rep = mgf_bound_check(1, grid.capital_l, lambda, grid, table);
      max_ratio = std::max(max_ratio, rep.ratio);
      if (rep.ratio > 10.0) pass = false;
      std::printf(" %.4f", rep.ratio);
    }
    std::printf("\n");
  }
  std::snprintf(buf, sizeof buf, "max ratio=%.4f (ceiling 10)", max_ratio);
  report(7, "mgf bound", pass, buf, timer.seconds());
}

// 8. indicator sandwich at the three configurations plus the negative control
void criterion_8() {
  Timer timer;
  bool pass = true;
  std::string detail;
  struct Config { double delta; int a; double x; };
  for (Config c : {Config{3, 5, 30}, Config{5, 5, 50}, Config{10, 4, 100}}) {
    IndicatorPoly poly = build_indicator_poly(c.delta, c.a, c.x);
    SandwichReport rep = validate_sandwich(poly, 10000);
    bool ok = rep.lower_violations == 0 && rep.upper_violations == 0 &&
              poly.degree_ceiling_ok() && poly.coeff_ceiling_ok();
    pass = pass && ok;
    std::snprintf(buf, sizeof buf, "(%g,%d):%ld/%ld ", c.delta, c.a, rep.lower_violations,
                  rep.upper_violations);
    detail += buf;
  }
  IndicatorPoly control = build_indicator_poly(3.0, 5, 30.0);
  control.corrupt_coefficient(0, 2.0);
  SandwichReport bad = validate_sandwich(control, 2000);
  pass = pass && (bad.upper_violations > 0);
  std::snprintf(buf, sizeof buf, "%scontrol violations=%ld", detail.c_str(),
                bad.upper_violations + bad.lower_violations);
  report(8, "indicator sandwich", pass, buf, timer.seconds());
}

// 9. exact event identities on 1e6 steinhaus trajectories
void criterion_9() {
  Timer timer;
  CheckpointGrid grid = build_grid(desk_grid_params());
  BarrierSet barriers = barrier_bounds(grid);
  PrimeTable table = sieve_primes(100000);
  TrajectoryBatch batch =
      sample_trajectories(grid, table, TrajectorySource::steinhaus, 1000000, 2026, 0);
  IncrementGrid inc = build_increment_grid(grid, barriers, grid.capital_l);
  PartitionReport rep = partition_check(batch, barriers, std::nullopt, &inc, grid.capital_l);
  bool pass = rep.partition_exact && rep.implication_failures == 0 && rep.cover_failures == 0 &&
              rep.split_covers;
  std::snprintf(buf, sizeof buf,
                "n=%ld slices=[%ld,%ld,%ld] implication=%ld cover=%ld/%ld", rep.n_total,
                rep.slice[0], rep.slice[1], rep.slice[2], rep.implication_failures,
                rep.cover_failures, rep.cover_applicable);
  report(9, "exact event identities", pass, buf, timer.seconds());
}

// 10. two-point covariance claim at T_ell in {1e4, 1e6}
void criterion_10(const PrimeTable& table_1e8) {
  Timer timer;
  bool pass = true;
  double worst = 0.0;
  for (double x : {1e4, 1e6})
    for (auto [cm, cmp] : {std::pair{50.0, 25.0}, std::pair{60.0, 30.0}, std::pair{100.0, 25.0}}) {
      double log_cut = std::log(x);
      auto sm = DirichletPolySpec::free_standing(log_cut, cm * log_cut);
      auto smp = DirichletPolySpec::free_standing(log_cut, cmp * log_cut);
      SecondOrderStats so = analytic_second_order(sm, smp, table_1e8);
      double diff = std::abs(so.variance - so.covariance);
      worst = std::max(worst, diff);
      if (diff > 2.0) pass = false;
    }
  std::snprintf(buf, sizeof buf, "max |var - cov| = %.4f (bound 2)", worst);
  report(10, "two-point covariance claim", pass, buf, timer.seconds());
}

// 11. surrogate CLT at T_ell = 1e6 and level-set decay at T = e^20
void criterion_11() {
  Timer timer;
  double log_cut = std::log(1e6);
  auto spec = DirichletPolySpec::free_standing(log_cut, 25.0 * log_cut);
  PrimeTable table = sieve_primes(1000000);
  SecondOrderStats so = analytic_second_order(spec, spec, table);
  auto sums = sample_model_sums(spec, table, PhaseModel::steinhaus, 2026, 100000, 0);
  double sd = std::sqrt(so.variance);
  for (double& x : sums) x /= sd;
  double ks = ks_statistic_vs_normal(sums);
  bool ks_ok = ks < 0.01;

  LevelSetBatch batch = sample_level_sets(std::exp(20.0), 2000, 2026, 0);
  double scale = std::sqrt(0.5 * 20.0);
  bool monotone = true;
  double prev = 1.1;
  std::printf("          level-set fractions vs gaussian tail at T=e^20:\n");
  for (double v : {0.5, 1.0, 1.5, 2.0}) {
    LevelSetEstimate est = batch.measure(v * scale);
    // tail by midpoint quadrature of the normal density, the in-test oracle
    double tail = 0.0;
    for (int i = 0; i < 40000; ++i) {
      double x = v + (8.0 * (i + 0.5)) / 40000.0;
      tail += std::exp(-0.5 * x * x) / std::sqrt(2.0 * M_PI) * (8.0 / 40000.0);
    }
    if (est.fraction > prev) monotone = false;
    prev = est.fraction;
    std::printf("          v=%.1f fraction=%.4f (se %.4f) tail=%.4f\n", v, est.fraction,
                est.std_err, tail);
  }
  bool pass = ks_ok && monotone;
  std::snprintf(buf, sizeof buf, "ks=%.4f (<0.01) level fractions monotone=%d", ks, monotone);
  report(11, "selberg clt at desk scale", pass, buf, timer.seconds());
}

// 12. direct vs level-set moment route at k = 1, T = e^15, 1e5 samples
void criterion_12() {
  Timer timer;
  LevelSetBatch batch = sample_level_sets(std::exp(15.0), 100000, 2026, 0);
  double lo = *std::min_element(batch.log_abs.begin(), batch.log_abs.end());
  double hi = *std::max_element(batch.log_abs.begin(), batch.log_abs.end());
  std::vector<double> levels;
  for (int i = 0; i <= 400; ++i)
    levels.push_back(lo - 0.01 + (hi - lo + 0.02) * i / 400.0);
  MomentPair pair = moment_via_levelsets(std::exp(15.0), 1.0, levels, 100000, 2026, 0);
  double rel = std::abs(pair.direct - pair.via_levels) / pair.direct;
  bool pass = rel <= 0.05;
  std::snprintf(buf, sizeof buf, "direct=%.4f via-levels=%.4f rel=%.4f (<0.05)", pair.direct,
                pair.via_levels, rel);
  report(12, "moment identity self-consistency", pass, buf, timer.seconds());
}

}  // namespace

int main() {
  Timer total;
  std::printf("acceptance suite: multiscale barrier laboratory\n");
  criterion_1();
  criterion_2();
  criterion_3();
  criterion_4();
  PrimeTable table_1e8 = sieve_primes(100000000);
  criterion_5(table_1e8);
  criterion_6();
  criterion_7();
  criterion_8();
  criterion_9();
  criterion_10(table_1e8);
  criterion_11();
  criterion_12();
  std::printf("%d of 12 criteria passed in %.1fs\n", 12 - g_failures, total.seconds());
  return g_failures == 0 ? 0 : 1;
}
