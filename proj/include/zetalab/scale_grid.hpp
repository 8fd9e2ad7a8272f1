#pragma once

#include <limits>
#include <string>
#include <vector>

namespace zetalab {

// Multiscale checkpoint construction. All scale arithmetic stays in
// (log T, beta) space; T itself is never exponentiated.
struct GridParams {
  double log_t = 0.0;       // natural log of T, must exceed e
  double k = 1.0;           // deviation order
  double v = 0.0;           // deviation level; <= 0 selects k * log log T
  double gamma = 1.0 / 25;  // barrier exponent, must lie in (0, 1/20)
  double cutoff = 2.0;      // theta: checkpoints stop once beta > exp(-theta)

  double loglog_t() const;
  double v_effective() const;
  double kappa() const;  // v / log log T
  void validate() const;
};

struct CheckpointGrid {
  GridParams params;
  std::vector<double> betas;  // beta_ell = e^{ell-1}/sqrt(log T)
  std::vector<double> tls;    // t_ell = log log T_ell, exactly unit-spaced
  std::vector<double> cls;    // c_ell = beta_ell^{-gamma}
  int capital_l = 0;
  double kappa = 0.0;

  // 1-based checkpoint indices; t(0) is the -infinity sentinel for T_0 = 1.
  double beta(int ell) const { return betas.at(ell - 1); }
  double t(int ell) const {
    return ell == 0 ? -std::numeric_limits<double>::infinity() : tls.at(ell - 1);
  }
  double c(int ell) const { return cls.at(ell - 1); }
  double log_t_ell(int ell) const { return betas.at(ell - 1) * params.log_t; }

  std::string to_json() const;
};

struct BarrierSet {
  std::vector<double> lower;        // L_ell = kappa t_ell - c_ell
  std::vector<double> upper;        // U_ell = kappa t_ell + c_ell
  std::vector<double> lower_prime;  // L'_ell = kappa t_ell - 4 c_ell
  std::vector<double> upper_prime;  // U'_ell = kappa t_ell + 4 c_ell

  double L(int ell) const { return lower.at(ell - 1); }
  double U(int ell) const { return upper.at(ell - 1); }
  double Lp(int ell) const { return lower_prime.at(ell - 1); }
  double Up(int ell) const { return upper_prime.at(ell - 1); }
};

struct TruncationIndex {
  int m = 0;
  bool clamped = false;  // set when no beta_m exceeds beta_ell^gamma
};

// capital_l = 1 + max{ell >= 1 : beta_ell <= exp(-cutoff)}.
// Throws "cutoff too large" when even beta_1 exceeds exp(-cutoff).
CheckpointGrid build_grid(const GridParams& params);

BarrierSet barrier_bounds(const CheckpointGrid& grid);

// Smallest m with beta_m > beta_ell^gamma, clamped to capital_l.
TruncationIndex truncation_index(const CheckpointGrid& grid, int ell);

CheckpointGrid grid_from_json(const std::string& text);

}  // namespace zetalab
