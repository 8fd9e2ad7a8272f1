#include "zetalab/dirichlet_sums.hpp"

#include <cmath>
#include <stdexcept>

#include "zetalab/numeric.hpp"

namespace zetalab {

DirichletPolySpec DirichletPolySpec::checkpoint(const CheckpointGrid& grid, int j, int ell) {
  if (ell < 1 || ell > grid.capital_l || j < 1 || j > grid.capital_l)
    throw std::invalid_argument("checkpoint index out of range");
  DirichletPolySpec spec;
  spec.j = j;
  spec.ell = ell;
  spec.log_t_j = grid.log_t_ell(j);
  spec.log_t_ell = grid.log_t_ell(ell);
  spec.sigma_j = 0.5 + kLambda / spec.log_t_j;
  return spec;
}

DirichletPolySpec DirichletPolySpec::free_standing(double log_cutoff,
                                                   std::optional<double> log_smoothing,
                                                   std::optional<double> sigma) {
  DirichletPolySpec spec;
  spec.log_t_ell = log_cutoff;
  spec.log_t_j = log_smoothing.value_or(0.0);
  if (sigma)
    spec.sigma_j = *sigma;
  else
    spec.sigma_j = log_smoothing ? 0.5 + kLambda / *log_smoothing : 0.5;
  if (spec.sigma_j <= 0.5 - 1e-15 || spec.sigma_j > 1.0)
    throw std::invalid_argument("sigma_j must lie in [1/2, 1]");
  return spec;
}

double DirichletPolySpec::cutoff() const { return std::exp(log_t_ell); }

double DirichletPolySpec::weight(double log_n) const {
  return log_t_j > 0.0 ? 1.0 - log_n / log_t_j : 1.0;
}

double solve_lambda0() {
  auto f = [](double x) { return std::exp(-x) - x - 0.5 * x * x; };
  double lo = 0.0, hi = 1.0;
  for (int i = 0; i < 60; ++i) {
    double mid = 0.5 * (lo + hi);
    (f(mid) > 0.0 ? lo : hi) = mid;
  }
  double x = 0.5 * (lo + hi);
  for (int i = 0; i < 4; ++i) {
    double fp = -std::exp(-x) - 1.0 - x;
    x -= f(x) / fp;
  }
  return x;
}

double partial_sum(const DirichletPolySpec& spec, const PrimeTable& table, double t) {
  double cutoff = spec.cutoff();
  if (cutoff > static_cast<double>(table.limit) + 0.5)
    throw std::invalid_argument("table too short for the requested cutoff");

  KahanSum acc;
  for (uint64_t p : table.primes) {
    double pd = static_cast<double>(p);
    if (pd > cutoff) break;
    double log_p = std::log(pd);
    acc.add(spec.weight(log_p) * std::exp(-spec.sigma_j * log_p) * std::cos(t * log_p));
  }
  for (uint64_t sq : table.prime_squares) {
    double nd = static_cast<double>(sq);
    if (nd > cutoff) break;
    double log_p = 0.5 * std::log(nd);
    acc.add(0.5 * spec.weight(2.0 * log_p) * std::exp(-2.0 * spec.sigma_j * log_p) *
            std::cos(2.0 * t * log_p));
  }
  return acc.value();
}

void MajorantParams::validate() const {
  static const double lambda0 = solve_lambda0();
  if (!(log_x >= std::log(2.0) - 1e-12 && log_x <= 2.0 * log_t))
    throw std::invalid_argument("x out of range: need 2 <= x <= T^2");
  if (lambda < lambda0 - 1e-12)
    throw std::invalid_argument("lambda below lambda_0");
}

MajorantValue sound_majorant(const MajorantParams& params, const PrimeTable& table, double t) {
  params.validate();
  double x = std::exp(params.log_x);
  if (x > static_cast<double>(table.limit) + 0.5)
    throw std::invalid_argument("table too short for the requested cutoff");

  double sigma = 0.5 + params.lambda / params.log_x;
  KahanSum acc;
  // n = p: Lambda(n)/log n = 1;  n = p^2: Lambda(n)/log n = 1/2
  for (uint64_t p : table.primes) {
    double pd = static_cast<double>(p);
    if (pd > x) break;
    double log_p = std::log(pd);
    acc.add((1.0 - log_p / params.log_x) * std::exp(-sigma * log_p) * std::cos(t * log_p));
  }
  for (uint64_t sq : table.prime_squares) {
    double nd = static_cast<double>(sq);
    if (nd > x) break;
    double log_p = 0.5 * std::log(nd);
    acc.add(0.5 * (1.0 - 2.0 * log_p / params.log_x) * std::exp(-2.0 * sigma * log_p) *
            std::cos(2.0 * t * log_p));
  }

  MajorantValue out;
  out.prime_part = acc.value();
  out.linear_term = 0.5 * (1.0 + params.lambda) * params.log_t / params.log_x;
  out.value = out.prime_part + out.linear_term;
  // dropped p^m, m >= 3: each |term| <= (1/3) p^{-3/2}, total below
  // (1/3) sum_p p^{-3/2} < 0.28; scale by the largest weight present
  out.slack_budget = 0.28;
  return out;
}

}  // namespace zetalab
