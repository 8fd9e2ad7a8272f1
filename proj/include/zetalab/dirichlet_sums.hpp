#pragma once

#include <optional>

#include "zetalab/prime_tables.hpp"
#include "zetalab/scale_grid.hpp"

namespace zetalab {

// One smoothed prime partial sum: abscissa taken at checkpoint j, primes cut
// at checkpoint ell. Smoothing weight a_j(n) = log(T_j/n)/log T_j and
// abscissa sigma_j = 1/2 + lambda/log T_j with lambda = 1/2 for checkpoint
// sums; both can also be set directly for free-standing experiments.
struct DirichletPolySpec {
  int j = 0;    // abscissa index (0 when free-standing)
  int ell = 0;  // cutoff index  (0 when free-standing)
  double sigma_j = 0.5;
  double log_t_j = 0.0;                      // smoothing scale; <= 0 disables smoothing
  double log_t_ell = 0.0;                    // cutoff: sum runs over p <= exp(log_t_ell)

  static constexpr double kLambda = 0.5;

  static DirichletPolySpec checkpoint(const CheckpointGrid& grid, int j, int ell);
  static DirichletPolySpec free_standing(double log_cutoff, std::optional<double> log_smoothing,
                                         std::optional<double> sigma = std::nullopt);

  double cutoff() const;            // exp(log_t_ell)
  double weight(double log_n) const;  // a_j(n), 1 when smoothing disabled
};

// Unique positive root of exp(-lambda) = lambda + lambda^2/2, bisected then
// polished by Newton steps; residual below 1e-12.
double solve_lambda0();

// Re sum_{p <= T_ell} a_j(p) p^{-sigma_j} cos(t log p)
//  + (1/2) Re sum_{p^2 <= T_ell} a_j(p^2) p^{-2 sigma_j} cos(2 t log p)
double partial_sum(const DirichletPolySpec& spec, const PrimeTable& table, double t);

struct MajorantParams {
  double log_x = 0.0;   // truncation, log 2 <= log_x <= 2 log T
  double lambda = 0.5;  // must be >= lambda_0
  double log_t = 0.0;   // natural log of T

  void validate() const;
};

struct MajorantValue {
  double value = 0.0;        // prime-sum part plus the linear term
  double prime_part = 0.0;   // the Dirichlet-polynomial part alone
  double linear_term = 0.0;  // (1+lambda)/2 * log T / log x
  double slack_budget = 0.0; // estimated mass of the dropped p^m, m >= 3 terms
};

// Pointwise majorant of log|zeta(1/2+it)|: prime and prime-square terms of
// the von Mangoldt sum plus the linear term. Higher prime powers are dropped;
// their estimated mass is reported in slack_budget rather than added in.
MajorantValue sound_majorant(const MajorantParams& params, const PrimeTable& table, double t);

}  // namespace zetalab
