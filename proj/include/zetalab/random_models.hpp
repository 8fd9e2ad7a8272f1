#pragma once

#include <complex>
#include <cstdint>
#include <optional>
#include <string>
#include <unordered_map>
#include <vector>

#include "zetalab/dirichlet_sums.hpp"
#include "zetalab/prime_tables.hpp"
#include "zetalab/scale_grid.hpp"

namespace zetalab {

enum class PhaseModel { steinhaus, gaussian };

// One surrogate sample omega: prime -> unit-circle phase (or complex
// gaussian). Procedural by default: the value at any prime is a pure
// function of (seed, trial, prime), so no state is stored or streamed.
// X(p^2) = X(p)^2 always; square phases are never sampled separately.
class PhaseAssignment {
 public:
  static PhaseAssignment steinhaus(uint64_t seed, uint64_t trial);
  static PhaseAssignment gaussian(uint64_t seed, uint64_t trial);
  static PhaseAssignment constant_phase(double angle);
  static PhaseAssignment from_map(std::unordered_map<uint64_t, double> phases);

  PhaseModel model() const { return model_; }
  double angle(uint64_t p) const;
  std::complex<double> value(uint64_t p) const;   // X(p) or Z(p)
  double re_value(uint64_t p) const;              // Re X(p) / Re Z(p)
  double re_square(uint64_t p) const;             // Re X(p)^2 / Re Z(p)^2

 private:
  PhaseModel model_ = PhaseModel::steinhaus;
  bool procedural_ = true;
  uint64_t key_ = 0;
  std::optional<double> fixed_angle_;
  std::unordered_map<uint64_t, double> explicit_phases_;
};

// Same summand as partial_sum with cos(t log p) replaced by Re X(p) and the
// square terms by Re X(p)^2.
double model_partial_sum(const DirichletPolySpec& spec, const PrimeTable& table,
                         const PhaseAssignment& assignment);

std::vector<double> sample_model_sums(const DirichletPolySpec& spec, const PrimeTable& table,
                                      PhaseModel model, uint64_t seed, long trials,
                                      unsigned threads = 0);

struct SecondOrderStats {
  double variance = 0.0;
  double covariance = 0.0;
  double predicted = 0.0;  // (1/2) log log T_ell
  double slack = 1.0;

  bool variance_within_slack() const { return std::abs(variance - predicted) <= slack; }
};

// Exact summed variance/covariance of the Steinhaus sums for two abscissae
// sharing the cutoff ell.
SecondOrderStats analytic_second_order(const DirichletPolySpec& spec_a,
                                       const DirichletPolySpec& spec_b, const PrimeTable& table,
                                       double slack = 1.0);

struct MomentBoundReport {
  int q = 0;
  double empirical = 0.0;  // E[Y^{2q}] (exact or Monte Carlo)
  double bound = 0.0;      // (2q)!/(2^q q!) * ((t_ell - t_k)/2)^q
  double ratio = 0.0;
  double ceiling = 0.0;
  bool pass = false;
  long trials = 0;  // 0 in exact mode
  uint64_t seed = 0;
  std::string mode;
  bool length_condition_checked = false;
  bool length_condition_ok = true;
  double gaussian_closed_form = 0.0;  // (2q-1)!! var^q for the gaussian model
  double smallest_c = 0.0;  // least C with E[Y^{2q}] <= sqrt(q) dfact (var/... + C)^q
  std::string to_json() const;
};

// Moments of the increment Y between the cutoffs of `from` and `to` (shared
// abscissa). Exact mode (quadrature over the phase torus) is used when the
// support holds at most `exact_prime_cap` primes and q <= 6; Monte Carlo
// otherwise. The polynomial-length condition 2q beta_ell <= 1/4 is checked
// against total_log_t when one is supplied.
MomentBoundReport moment_bound_check(const DirichletPolySpec& from, const DirichletPolySpec& to,
                                     const PrimeTable& table, int q, long trials, uint64_t seed,
                                     PhaseModel model = PhaseModel::steinhaus,
                                     double ceiling = 2.718281828459045,
                                     std::optional<double> total_log_t = std::nullopt,
                                     int exact_prime_cap = 4);

struct MgfBoundReport {
  double lambda = 0.0;
  double log_mgf = 0.0;    // exact: sum of log I0 / joint factors
  double log_bound = 0.0;  // lambda^2 (t_ell - t_k) / 4
  double ratio = 0.0;      // mgf / bound
  int k_idx = 0;
  int ell_idx = 0;
  std::string to_json() const;
};

// Exact Steinhaus MGF of the increment between checkpoints k_idx < ell_idx,
// as a product over primes: I0 factors where only one of p, p^2 lands in
// range, a one-dimensional quadrature where both do. k_idx = 0 anchors the
// lower scale at the first prime (log T_0 := log 2).
MgfBoundReport mgf_bound_check(int k_idx, int ell_idx, double lambda, const CheckpointGrid& grid,
                               const PrimeTable& table, int j_idx = 0);

// E[exp(c cos theta)] by quadrature; oracle for the I0 identity.
double cosine_mgf_quadrature(double c);

double normal_cdf(double x);

// Kolmogorov-Smirnov distance between the sample and the standard normal.
double ks_statistic_vs_normal(std::vector<double> sample);

}  // namespace zetalab
