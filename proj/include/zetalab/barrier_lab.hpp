#pragma once

#include <cstdint>
#include <optional>
#include <string>
#include <vector>

#include "zetalab/prime_tables.hpp"
#include "zetalab/random_models.hpp"
#include "zetalab/scale_grid.hpp"

namespace zetalab {

enum class TrajectorySource { zeta_tau, steinhaus, gaussian };

// One trajectory: the triangular array S[ell][j], 1 <= ell <= j <= L, plus
// log|zeta| when the sample lives on the tau space.
struct TrajectorySample {
  TrajectorySource source = TrajectorySource::steinhaus;
  int capital_l = 0;
  std::vector<double> values;  // row ell, entries j = ell..L, packed
  std::optional<double> log_zeta;
  double t_or_seed = 0.0;

  static std::size_t pair_index(int capital_l, int ell, int j);
  double s(int ell, int j) const { return values.at(pair_index(capital_l, ell, j)); }
  double& s_ref(int ell, int j) { return values.at(pair_index(capital_l, ell, j)); }
};

// Columnar batch of trajectories sharing one grid.
struct TrajectoryBatch {
  TrajectorySource source = TrajectorySource::steinhaus;
  CheckpointGrid grid;
  long n = 0;
  uint64_t seed = 0;
  std::vector<double> values;    // n rows of pair-indexed S values
  std::vector<double> log_zeta;  // present only for zeta_tau

  std::size_t pairs() const;
  double s(long i, int ell, int j) const;
  TrajectorySample sample(long i) const;
};

// Draws n trajectories. For the surrogate sources every prime phase is a
// pure function of (seed, trial, prime); for zeta_tau the trajectory is the
// deterministic array at a uniform tau in [T, 2T] with T = exp(grid log_t),
// and log_zeta comes from the half-line evaluator.
TrajectoryBatch sample_trajectories(const CheckpointGrid& grid, const PrimeTable& table,
                                    TrajectorySource source, long n, uint64_t seed,
                                    unsigned threads = 0);

struct EventFlags {
  std::optional<bool> in_h;
  std::vector<bool> in_g;       // cumulative good events, index ell-1
  std::vector<bool> in_a;       // increment events, index ell-1
  std::vector<bool> in_primed;  // widened-barrier containment per ell
  std::optional<int> first_exit;
  bool implication_ok = true;  // (G_{ell-1} and A_ell) => primed containment
};

// default exponent schedule for lower-barrier experiments:
// W = (v - u)/10 and q = ceil(W/5)
int lower_barrier_q(double v, double u);

EventFlags evaluate_events(const TrajectorySample& sample, const BarrierSet& barriers,
                           std::optional<double> v);

struct PartitionReport {
  long n_total = 0;
  long n_h = 0;
  std::vector<long> slice;          // |H cap G_{ell-1} \ G_ell|, ell = 1..L+1
  std::vector<long> upper_breach;   // split counts, ell = 1..L
  std::vector<long> lower_breach;
  bool partition_exact = false;
  bool split_covers = false;        // upper+lower >= slice count per ell
  long implication_failures = 0;
  long cover_applicable = 0;
  long cover_failures = 0;
  std::string to_json() const;
};

struct IncrementGrid {
  int ell = 0;
  std::vector<double> delta;          // Delta_j = c_j
  std::vector<double> slop;           // max(1, sum_{i<=j} Delta_i^{-1})
  std::vector<std::vector<long>> tuples;  // integer coordinates; u_j = m_j / Delta_j
  bool u_bound_4delta_ok = false;      // |u_j| <= 4 Delta_j for every tuple

  bool contains(const std::vector<long>& tuple) const;
};

// Enumerates the tuples u with partial sums in [L_j - slop_j, U_j] for all
// j <= ell. The slop is the larger of 1 and the actual sum of cell widths,
// so the cover stays a theorem for desk-sized c_j; the two coincide once
// sum Delta_i^{-1} <= 1.
IncrementGrid build_increment_grid(const CheckpointGrid& grid, const BarrierSet& barriers,
                                   int ell, std::size_t max_tuples = 2'000'000);

enum class CoverOutcome { covered, not_applicable, failed };

// Checks the inclusion: a sample whose fixed-abscissa walk stays in the
// barriers up to ell must fall in some grid cell tuple.
CoverOutcome increment_grid_cover(const TrajectorySample& sample, const IncrementGrid& inc,
                                  const BarrierSet& barriers, int ell, int j_abscissa);

// Exact partition counts plus the per-sample implication and cover
// assertions, all from one pass over the batch. H is the log_zeta level set
// when v is given and the batch carries log_zeta; otherwise H = everything.
PartitionReport partition_check(const TrajectoryBatch& batch, const BarrierSet& barriers,
                                std::optional<double> v,
                                const IncrementGrid* cover_grid = nullptr, int cover_ell = 0,
                                int cover_abscissa = 0);

// ---- torus oracle ----------------------------------------------------

struct TorusStatistic {
  std::vector<double> w;  // coefficient of cos(theta_p) per prime
  std::vector<double> v;  // coefficient of cos(2 theta_p) per prime
};

struct TorusBox {
  double lo = 0.0;
  double hi = 0.0;
};

struct TorusProbability {
  double value = 0.0;
  double est_error = 0.0;
  long nodes_used = 0;
};

// P(all statistics inside their boxes) for independent uniform phases on
// <= 5 primes. The last angle is integrated in closed form (arc measure)
// when the reducing statistic is cosine-linear there; the remaining
// dimensions use tensor Gauss-Legendre with node doubling and Richardson
// extrapolation until the target absolute error (default 1e-6) stabilizes.
TorusProbability torus_box_probability(const std::vector<TorusStatistic>& stats,
                                       const std::vector<TorusBox>& boxes,
                                       double abs_tol = 1e-6);

// E|sum_n b_n X(n)|^2 over <= 5 primes; each term carries the exponent
// vector of n in the chosen primes. Smooth integrand: tensor Gauss-Legendre
// at >= 64 nodes per dimension with a doubling error estimate.
struct TorusTerm {
  std::vector<int> exponents;
  std::complex<double> coeff;
};
TorusProbability torus_mean_square(const std::vector<TorusTerm>& terms, int dims);

// E[X(n) conj(X(m))] for exponent vectors n, m.
std::complex<double> torus_pair_expectation(const std::vector<int>& n_exp,
                                            const std::vector<int>& m_exp);

// ---- conditioned profiles ---------------------------------------------

struct ProfileBin {
  double lo = 0.0, hi = 0.0;
  long count = 0;
  double empirical = 0.0;  // E[|Q|^2 1(G_ell(u))] / E[|Q|^2] per bin
  double reference = 0.0;  // exp(-u^2/t_ell)/sqrt(t_ell) at the bin center
};

struct OnePointProfile {
  int ell = 0, m = 0, q = 0, j_abscissa = 0;
  double e_q2 = 0.0;  // E[|Q|^2]
  bool length_condition_ok = true;
  std::vector<ProfileBin> bins;
  double max_ratio = 0.0;
  std::string to_csv() const;
};

// Empirical one-point profile: Q = (S_m^{(m)} - S_ell^{(m)})^q conditioned
// on G_{ell-1} and S_ell^{(j)} in [u-1, u] per bin. The polynomial-length
// condition 2 q beta_m <= 1/4 is enforced for zeta_tau batches and only
// flagged for surrogate batches (the surrogate needs no polynomial-length
// hypothesis).
OnePointProfile one_point_profile(const TrajectoryBatch& batch, const BarrierSet& barriers,
                                  int ell, int m, int q, int n_bins, int j_abscissa = 0);

struct TwoPointProfile {
  int ell = 0, m = 0, m_prime = 0;
  double covariance_difference = 0.0;  // |E S^2 - E S S'| by prime sums
  double empirical_correlation = 0.0;
  std::vector<std::vector<long>> joint_counts;  // u bins x w bins on G_{ell-1}
  std::vector<double> u_edges, w_edges;
  double max_ratio = 0.0;  // conditioned mass / two-point reference shape
  std::string to_csv() const;
};

TwoPointProfile two_point_profile(const TrajectoryBatch& batch, const PrimeTable& table,
                                  const BarrierSet& barriers, int ell, int m, int m_prime,
                                  int n_bins);

}  // namespace zetalab
