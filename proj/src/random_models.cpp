#include "zetalab/random_models.hpp"

#include <algorithm>
#include <cmath>
#include <functional>
#include <stdexcept>

#include <json.hpp>

#include "zetalab/numeric.hpp"
#include "zetalab/rng.hpp"

namespace zetalab {

PhaseAssignment PhaseAssignment::steinhaus(uint64_t seed, uint64_t trial) {
  PhaseAssignment a;
  a.model_ = PhaseModel::steinhaus;
  a.key_ = rng::mix3(seed, 0x5354, trial);
  return a;
}

PhaseAssignment PhaseAssignment::gaussian(uint64_t seed, uint64_t trial) {
  PhaseAssignment a;
  a.model_ = PhaseModel::gaussian;
  a.key_ = rng::mix3(seed, 0x4755, trial);
  return a;
}

PhaseAssignment PhaseAssignment::constant_phase(double angle) {
  PhaseAssignment a;
  a.procedural_ = false;
  a.fixed_angle_ = angle;
  return a;
}

PhaseAssignment PhaseAssignment::from_map(std::unordered_map<uint64_t, double> phases) {
  PhaseAssignment a;
  a.procedural_ = false;
  a.explicit_phases_ = std::move(phases);
  return a;
}

double PhaseAssignment::angle(uint64_t p) const {
  if (procedural_)
    return 6.283185307179586476925286766559 * rng::uniform01(key_, p, 0);
  if (fixed_angle_) return *fixed_angle_;
  auto it = explicit_phases_.find(p);
  if (it == explicit_phases_.end())
    throw std::invalid_argument("phase assignment does not cover prime " + std::to_string(p));
  return it->second;
}

std::complex<double> PhaseAssignment::value(uint64_t p) const {
  if (model_ == PhaseModel::gaussian) return rng::complex_gaussian(key_, p, 0);
  double a = angle(p);
  return {std::cos(a), std::sin(a)};
}

double PhaseAssignment::re_value(uint64_t p) const {
  if (model_ == PhaseModel::gaussian) return value(p).real();
  return std::cos(angle(p));
}

double PhaseAssignment::re_square(uint64_t p) const {
  if (model_ == PhaseModel::gaussian) {
    std::complex<double> z = value(p);
    return z.real() * z.real() - z.imag() * z.imag();
  }
  double c = std::cos(angle(p));
  return 2.0 * c * c - 1.0;  // Re X(p)^2 by multiplicativity
}

double model_partial_sum(const DirichletPolySpec& spec, const PrimeTable& table,
                         const PhaseAssignment& assignment) {
  double cutoff = spec.cutoff();
  if (cutoff > static_cast<double>(table.limit) + 0.5)
    throw std::invalid_argument("table too short for the requested cutoff");

  KahanSum acc;
  for (uint64_t p : table.primes) {
    double pd = static_cast<double>(p);
    if (pd > cutoff) break;
    double log_p = std::log(pd);
    acc.add(spec.weight(log_p) * std::exp(-spec.sigma_j * log_p) * assignment.re_value(p));
  }
  for (uint64_t sq : table.prime_squares) {
    double nd = static_cast<double>(sq);
    if (nd > cutoff) break;
    uint64_t p = static_cast<uint64_t>(std::llround(std::sqrt(nd)));
    double log_p = 0.5 * std::log(nd);
    acc.add(0.5 * spec.weight(2.0 * log_p) * std::exp(-2.0 * spec.sigma_j * log_p) *
            assignment.re_square(p));
  }
  return acc.value();
}

std::vector<double> sample_model_sums(const DirichletPolySpec& spec, const PrimeTable& table,
                                      PhaseModel model, uint64_t seed, long trials,
                                      unsigned threads) {
  double cutoff = spec.cutoff();
  if (cutoff > static_cast<double>(table.limit) + 0.5)
    throw std::invalid_argument("table too short for the requested cutoff");
  // weights depend only on the spec; precompute them once
  std::vector<uint64_t> ps, sq_ps;
  std::vector<double> w, w_sq;
  for (uint64_t p : table.primes) {
    double pd = static_cast<double>(p);
    if (pd > cutoff) break;
    double log_p = std::log(pd);
    ps.push_back(p);
    w.push_back(spec.weight(log_p) * std::exp(-spec.sigma_j * log_p));
  }
  for (uint64_t sq : table.prime_squares) {
    double nd = static_cast<double>(sq);
    if (nd > cutoff) break;
    sq_ps.push_back(static_cast<uint64_t>(std::llround(std::sqrt(nd))));
    double log_p = 0.5 * std::log(nd);
    w_sq.push_back(0.5 * spec.weight(2.0 * log_p) * std::exp(-2.0 * spec.sigma_j * log_p));
  }

  std::vector<double> out(static_cast<std::size_t>(trials), 0.0);
  parallel_chunks(static_cast<std::size_t>(trials), threads,
                  [&](std::size_t, std::size_t begin, std::size_t end) {
                    for (std::size_t trial = begin; trial < end; ++trial) {
                      PhaseAssignment a = model == PhaseModel::steinhaus
                                              ? PhaseAssignment::steinhaus(seed, trial)
                                              : PhaseAssignment::gaussian(seed, trial);
                      KahanSum acc;
                      for (std::size_t i = 0; i < ps.size(); ++i)
                        acc.add(w[i] * a.re_value(ps[i]));
                      for (std::size_t i = 0; i < sq_ps.size(); ++i)
                        acc.add(w_sq[i] * a.re_square(sq_ps[i]));
                      out[trial] = acc.value();
                    }
                  });
  return out;
}

SecondOrderStats analytic_second_order(const DirichletPolySpec& spec_a,
                                       const DirichletPolySpec& spec_b, const PrimeTable& table,
                                       double slack) {
  if (std::abs(spec_a.log_t_ell - spec_b.log_t_ell) > 1e-12)
    throw std::invalid_argument("second-order stats need a shared cutoff");
  double cutoff = spec_a.cutoff();
  if (cutoff > static_cast<double>(table.limit) + 0.5)
    throw std::invalid_argument("table too short for the requested cutoff");

  KahanSum var_a, cov;
  for (uint64_t p : table.primes) {
    double pd = static_cast<double>(p);
    if (pd > cutoff) break;
    double log_p = std::log(pd);
    double fa = spec_a.weight(log_p) * std::exp(-spec_a.sigma_j * log_p);
    double fb = spec_b.weight(log_p) * std::exp(-spec_b.sigma_j * log_p);
    var_a.add(0.5 * fa * fa);
    cov.add(0.5 * fa * fb);
  }
  // square terms carry the 1/2 prefactor and E[(Re X(p)^2)^2] = 1/2, so the
  // exact second-order weight is 1/8; a Monte Carlo run at 10^5 trials can
  // tell 1/8 from the looser 1/4 envelope
  for (uint64_t sq : table.prime_squares) {
    double nd = static_cast<double>(sq);
    if (nd > cutoff) break;
    double log_p = 0.5 * std::log(nd);
    double fa = spec_a.weight(2.0 * log_p) * std::exp(-2.0 * spec_a.sigma_j * log_p);
    double fb = spec_b.weight(2.0 * log_p) * std::exp(-2.0 * spec_b.sigma_j * log_p);
    var_a.add(0.125 * fa * fa);
    cov.add(0.125 * fa * fb);
  }

  SecondOrderStats stats;
  stats.variance = var_a.value();
  stats.covariance = cov.value();
  stats.predicted = 0.5 * std::log(spec_a.log_t_ell);
  stats.slack = slack;
  return stats;
}

namespace {

struct IncrementSupport {
  std::vector<uint64_t> ps;
  std::vector<double> w;  // prime weights
  std::vector<uint64_t> sq_ps;
  std::vector<double> w_sq;  // square-term weights, 1/2 factor included
};

IncrementSupport increment_support(const DirichletPolySpec& from, const DirichletPolySpec& to,
                                   const PrimeTable& table) {
  if (std::abs(from.sigma_j - to.sigma_j) > 1e-15 || std::abs(from.log_t_j - to.log_t_j) > 1e-12)
    throw std::invalid_argument("increment needs a shared abscissa");
  if (from.log_t_ell > to.log_t_ell)
    throw std::invalid_argument("increment needs from-cutoff <= to-cutoff");
  double lo = from.log_t_ell > 0 ? from.cutoff() : 1.0;
  double hi = to.cutoff();
  if (hi > static_cast<double>(table.limit) + 0.5)
    throw std::invalid_argument("table too short for the requested cutoff");
  IncrementSupport s;
  for (uint64_t p : table.primes) {
    double pd = static_cast<double>(p);
    if (pd > hi) break;
    if (pd <= lo) continue;
    double log_p = std::log(pd);
    s.ps.push_back(p);
    s.w.push_back(to.weight(log_p) * std::exp(-to.sigma_j * log_p));
  }
  for (uint64_t sq : table.prime_squares) {
    double nd = static_cast<double>(sq);
    if (nd > hi) break;
    if (nd <= lo) continue;
    s.sq_ps.push_back(static_cast<uint64_t>(std::llround(std::sqrt(nd))));
    double log_p = 0.5 * std::log(nd);
    s.w_sq.push_back(0.5 * to.weight(2.0 * log_p) * std::exp(-2.0 * to.sigma_j * log_p));
  }
  return s;
}

// per-prime summand f_p(theta) = w cos(theta) + v cos(2 theta)
struct Block {
  double w = 0.0;
  double v = 0.0;
};

std::vector<Block> blocks_of(const IncrementSupport& s) {
  std::vector<std::pair<uint64_t, Block>> m;
  auto at = [&](uint64_t p) -> Block& {
    for (auto& kv : m)
      if (kv.first == p) return kv.second;
    m.emplace_back(p, Block{});
    return m.back().second;
  };
  for (std::size_t i = 0; i < s.ps.size(); ++i) at(s.ps[i]).w += s.w[i];
  for (std::size_t i = 0; i < s.sq_ps.size(); ++i) at(s.sq_ps[i]).v += s.w_sq[i];
  std::sort(m.begin(), m.end(), [](auto& a, auto& b) { return a.first < b.first; });
  std::vector<Block> out;
  out.reserve(m.size());
  for (auto& kv : m) out.push_back(kv.second);
  return out;
}

// E[(sum_b f_b)^{2q}] on the phase torus by equispaced tensor quadrature,
// exact for the trigonometric degrees involved (4q < 64).
double exact_moment_tensor(const std::vector<Block>& blocks, int q) {
  const int nodes = 64;
  const double two_pi = 6.283185307179586476925286766559;
  std::size_t d = blocks.size();
  if (d == 0) return q == 0 ? 1.0 : 0.0;
  std::vector<std::vector<double>> f(d, std::vector<double>(nodes));
  for (std::size_t b = 0; b < d; ++b)
    for (int i = 0; i < nodes; ++i) {
      double th = two_pi * i / nodes;
      f[b][i] = blocks[b].w * std::cos(th) + blocks[b].v * std::cos(2.0 * th);
    }
  std::vector<std::size_t> idx(d, 0);
  KahanSum acc;
  for (;;) {
    double y = 0.0;
    for (std::size_t b = 0; b < d; ++b) y += f[b][idx[b]];
    acc.add(std::pow(y, 2 * q));
    std::size_t b = 0;
    while (b < d && ++idx[b] == static_cast<std::size_t>(nodes)) {
      idx[b] = 0;
      ++b;
    }
    if (b == d) break;
  }
  return acc.value() / std::pow(static_cast<double>(nodes), static_cast<double>(d));
}

// Same moment by multinomial expansion over exact per-prime one-dimensional
// moments: the independent second route.
double exact_moment_expansion(const std::vector<Block>& blocks, int q) {
  const int nodes = 512;
  const double two_pi = 6.283185307179586476925286766559;
  std::size_t d = blocks.size();
  int total = 2 * q;
  if (d == 0) return total == 0 ? 1.0 : 0.0;
  std::vector<std::vector<double>> mom(d, std::vector<double>(total + 1, 0.0));
  for (std::size_t b = 0; b < d; ++b) {
    for (int i = 0; i < nodes; ++i) {
      double th = two_pi * i / nodes;
      double fb = blocks[b].w * std::cos(th) + blocks[b].v * std::cos(2.0 * th);
      double pw = 1.0;
      for (int m = 0; m <= total; ++m) {
        mom[b][m] += pw;
        pw *= fb;
      }
    }
    for (int m = 0; m <= total; ++m) mom[b][m] /= nodes;
  }
  std::vector<double> logfact(total + 1, 0.0);
  for (int i = 2; i <= total; ++i) logfact[i] = logfact[i - 1] + std::log(static_cast<double>(i));
  double sum = 0.0;
  std::vector<int> comp(d, 0);
  std::function<void(std::size_t, int, double)> rec = [&](std::size_t b, int rem, double partial) {
    if (b + 1 == d) {
      double logcoef = logfact[total] - logfact[rem];
      for (std::size_t i = 0; i + 1 < d; ++i) logcoef -= logfact[comp[i]];
      sum += std::exp(logcoef) * partial * mom[b][rem];
      return;
    }
    for (int m = 0; m <= rem; ++m) {
      comp[b] = m;
      rec(b + 1, rem - m, partial * mom[b][m]);
    }
  };
  rec(0, total, 1.0);
  return sum;
}

double joint_mgf_quadrature(double cw, double cv) {
  const int nodes = 2048;
  const double two_pi = 6.283185307179586476925286766559;
  KahanSum acc;
  for (int i = 0; i < nodes; ++i) {
    double th = two_pi * i / nodes;
    acc.add(std::exp(cw * std::cos(th) + cv * std::cos(2.0 * th)));
  }
  return acc.value() / nodes;
}

}  // namespace

MomentBoundReport moment_bound_check(const DirichletPolySpec& from, const DirichletPolySpec& to,
                                     const PrimeTable& table, int q, long trials, uint64_t seed,
                                     PhaseModel model, double ceiling,
                                     std::optional<double> total_log_t, int exact_prime_cap) {
  if (q < 1) throw std::invalid_argument("q must be positive");
  IncrementSupport support = increment_support(from, to, table);

  MomentBoundReport rep;
  rep.q = q;
  rep.ceiling = ceiling;
  rep.seed = seed;

  if (total_log_t) {
    rep.length_condition_checked = true;
    double beta_ell = to.log_t_ell / *total_log_t;
    rep.length_condition_ok = 2.0 * q * beta_ell <= 0.25;
    if (!rep.length_condition_ok)
      throw std::invalid_argument("length condition violated: 2q beta_ell > 1/4");
  }

  // t-span of the increment; an empty lower cutoff anchors at the first prime
  double t_hi = std::log(to.log_t_ell);
  double t_lo = from.log_t_ell >= std::log(2.0) ? std::log(from.log_t_ell)
                                                : std::log(std::log(2.0));
  double half_span = 0.5 * (t_hi - t_lo);
  rep.bound = dfactorial_odd(q) * std::pow(half_span, q);

  auto blocks = blocks_of(support);
  KahanSum var_acc;
  for (auto& b : blocks) var_acc.add(0.5 * b.w * b.w + 0.5 * b.v * b.v);
  double increment_var = var_acc.value();
  rep.gaussian_closed_form = dfactorial_odd(q) * std::pow(increment_var, q);

  if (model == PhaseModel::steinhaus && static_cast<int>(blocks.size()) <= exact_prime_cap &&
      q <= 6) {
    rep.mode = "exact-quadrature";
    double m_tensor = exact_moment_tensor(blocks, q);
    double m_expand = exact_moment_expansion(blocks, q);
    if (std::abs(m_tensor - m_expand) > 1e-6 * (1.0 + std::abs(m_tensor)))
      throw std::runtime_error("exact moment routes disagree");
    rep.empirical = m_tensor;
    rep.trials = 0;
  } else {
    rep.mode = "monte-carlo";
    if (trials < 100) throw std::invalid_argument("need at least 100 trials");
    KahanSum acc;
    for (long trial = 0; trial < trials; ++trial) {
      PhaseAssignment a = model == PhaseModel::steinhaus
                              ? PhaseAssignment::steinhaus(seed, static_cast<uint64_t>(trial))
                              : PhaseAssignment::gaussian(seed, static_cast<uint64_t>(trial));
      KahanSum y;
      for (std::size_t i = 0; i < support.ps.size(); ++i)
        y.add(support.w[i] * a.re_value(support.ps[i]));
      for (std::size_t i = 0; i < support.sq_ps.size(); ++i)
        y.add(support.w_sq[i] * a.re_square(support.sq_ps[i]));
      acc.add(std::pow(y.value(), 2 * q));
    }
    rep.empirical = acc.value() / static_cast<double>(trials);
    rep.trials = trials;
  }

  rep.ratio = rep.bound > 0 ? rep.empirical / rep.bound : 0.0;
  rep.pass = rep.ratio <= ceiling;
  double base = std::pow(
      rep.empirical / (std::sqrt(static_cast<double>(q)) * dfactorial_odd(q)), 1.0 / q);
  rep.smallest_c = std::max(0.0, base - half_span);
  return rep;
}

double cosine_mgf_quadrature(double c) {
  const int nodes = 2048;
  const double two_pi = 6.283185307179586476925286766559;
  KahanSum acc;
  for (int i = 0; i < nodes; ++i) acc.add(std::exp(c * std::cos(two_pi * i / nodes)));
  return acc.value() / nodes;
}

MgfBoundReport mgf_bound_check(int k_idx, int ell_idx, double lambda, const CheckpointGrid& grid,
                               const PrimeTable& table, int j_idx) {
  if (k_idx < 0 || ell_idx <= k_idx || ell_idx > grid.capital_l)
    throw std::invalid_argument("need 0 <= k_idx < ell_idx <= capital_l");
  if (j_idx == 0) j_idx = grid.capital_l;

  DirichletPolySpec to = DirichletPolySpec::checkpoint(grid, j_idx, ell_idx);
  DirichletPolySpec from = to;
  from.log_t_ell = k_idx >= 1 ? grid.log_t_ell(k_idx) : 0.0;  // T_0 = 1
  IncrementSupport support = increment_support(from, to, table);
  auto blocks = blocks_of(support);

  KahanSum log_mgf;
  for (auto& b : blocks) {
    if (b.v == 0.0)
      log_mgf.add(std::log(bessel_i0_series(lambda * b.w)));
    else if (b.w == 0.0)
      log_mgf.add(std::log(bessel_i0_series(lambda * b.v)));
    else
      log_mgf.add(std::log(joint_mgf_quadrature(lambda * b.w, lambda * b.v)));
  }

  double t_hi = grid.t(ell_idx);
  double t_lo = k_idx >= 1 ? grid.t(k_idx) : std::log(std::log(2.0));

  MgfBoundReport rep;
  rep.lambda = lambda;
  rep.k_idx = k_idx;
  rep.ell_idx = ell_idx;
  rep.log_mgf = log_mgf.value();
  rep.log_bound = lambda * lambda * (t_hi - t_lo) / 4.0;
  rep.ratio = std::exp(rep.log_mgf - rep.log_bound);
  return rep;
}

double normal_cdf(double x) { return 0.5 * std::erfc(-x / 1.4142135623730950488); }

double ks_statistic_vs_normal(std::vector<double> sample) {
  if (sample.empty()) throw std::invalid_argument("empty sample");
  std::sort(sample.begin(), sample.end());
  double n = static_cast<double>(sample.size());
  double d = 0.0;
  for (std::size_t i = 0; i < sample.size(); ++i) {
    double phi = normal_cdf(sample[i]);
    d = std::max(d, std::abs((i + 1) / n - phi));
    d = std::max(d, std::abs(i / n - phi));
  }
  return d;
}

std::string MomentBoundReport::to_json() const {
  nlohmann::json j;
  j["target_eq"] = "steinhaus_increment_moment";
  j["q"] = q;
  j["empirical"] = empirical;
  j["bound"] = bound;
  j["ratio"] = ratio;
  j["ceiling"] = ceiling;
  j["pass"] = pass;
  j["trials"] = trials;
  j["seed"] = seed;
  j["mode"] = mode;
  j["gaussian_closed_form"] = gaussian_closed_form;
  j["smallest_c"] = smallest_c;
  return j.dump(2);
}

std::string MgfBoundReport::to_json() const {
  nlohmann::json j;
  j["target_eq"] = "steinhaus_increment_mgf";
  j["empirical"] = std::exp(log_mgf);
  j["bound"] = std::exp(log_bound);
  j["ratio"] = ratio;
  j["lambda"] = lambda;
  j["k_idx"] = k_idx;
  j["ell_idx"] = ell_idx;
  j["trials"] = 0;
  j["seed"] = 0;
  return j.dump(2);
}

}  // namespace zetalab
