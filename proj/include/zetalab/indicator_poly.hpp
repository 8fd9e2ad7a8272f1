#pragma once

#include <complex>
#include <cstdint>
#include <string>
#include <vector>

namespace zetalab {

// Polynomial approximation of the indicator of [0, 1/Delta], held through
// its generator: a Gaussian-mollified indicator amplitude (an erf pair),
// its truncated Fourier series on a period covering [-X, X], and a Taylor
// truncation degree for the exponentials. The Fourier coefficients have a
// closed form, so the polynomial is never expanded into monomials at
// production sizes; Fourier, Taylor and periodization tails are bounded
// analytically and the bounds carried as a certified evaluation budget.
class IndicatorPoly {
 public:
  double delta() const { return delta_; }
  int a_exp() const { return a_exp_; }
  double range_x() const { return range_x_; }
  double slack() const { return slack_; }          // e^{-Delta^{a-2}}
  double period() const { return period_; }
  double alpha() const { return alpha_; }
  double window_lo() const { return x0_; }         // transition centers
  double window_hi() const { return x1_; }
  int64_t n_freq() const { return n_freq_; }
  int64_t degree() const { return taylor_degree_; }
  double eps_total() const { return eps_fourier_ + eps_taylor_ + eps_image_; }

  // closed-form coefficient of e^{2 pi i nu x / P}; corruption applied
  std::complex<double> fourier_coeff(int64_t nu) const;

  // |D(x)|^2 through the generator plus the corruption term; certified only
  // for |x| <= X, flagged (not refused) outside
  double eval_squared(double x, bool* certified = nullptr) const;

  // mollified amplitude alone (no corruption), double precision
  double amplitude(double x) const;

  // negative-control hook: scales the stored coefficient at frequency nu
  void corrupt_coefficient(int64_t nu, double factor);
  bool corrupted() const { return !corruptions_.empty(); }
  // exact contribution of the corrupted coefficients at x
  std::complex<double> corruption_term(double x) const;

  // envelope certificates for the ceilings: degree < 100 X Delta^{3a} and
  // |coeff_l| <= (2pi)^l / l! * Delta^{2a(l+2)}, via
  // sum|c_nu| <= Delta^{4a} and nu_max/P <= Delta^{2a} (checked in logs)
  bool degree_ceiling_ok() const;
  bool coeff_ceiling_ok() const;
  double coeff_mass_bound() const { return coeff_mass_bound_; }

  // literal monomial coefficients Sum_nu c_nu (2 pi i nu / P)^l / l!,
  // materialized in extended precision; feasible only for toy sizes
  // (n_freq and degree capped), used by the dual-evaluation oracle
  bool monomials_feasible() const;
  double eval_squared_monomial_horner(double x) const;

  std::string to_json() const;
  static IndicatorPoly from_json(const std::string& text);

 private:
  friend IndicatorPoly build_indicator_poly_raw(double delta, int a_exp, double range_x,
                                                double slack, double alpha_pad);
  double delta_ = 0.0;
  int a_exp_ = 0;
  double range_x_ = 0.0;
  double slack_ = 0.0;
  double x0_ = 0.0, x1_ = 0.0;
  double alpha_ = 0.0;
  double period_ = 0.0;
  int64_t n_freq_ = 0;
  int64_t taylor_degree_ = 0;
  double eps_fourier_ = 0.0, eps_taylor_ = 0.0, eps_image_ = 0.0;
  double coeff_mass_bound_ = 0.0;
  std::vector<std::pair<int64_t, double>> corruptions_;
};

// Builds the polynomial for the window [0, 1/delta] with margin delta^{-a}
// and slack e^{-delta^{a-2}}; requires delta >= 3 and delta^{a-2} >= 10.
// Throws "construction failed validation" if the built polynomial does not
// survive its own sandwich check after the bounded retry schedule.
IndicatorPoly build_indicator_poly(double delta, int a_exp, double range_x);

// Same construction without the desk preconditions; slack chosen freely.
// Used for toy instances (dual-evaluation oracle) and threshold scans.
IndicatorPoly build_indicator_poly_raw(double delta, int a_exp, double range_x, double slack,
                                       double alpha_pad = 1.05);

struct SandwichReport {
  long grid_points = 0;
  long lower_violations = 0;
  long upper_violations = 0;
  double max_excess = 0.0;  // worst violation in the |D|^2 scale, 0 if none
};

// Both sandwich inequalities at n_grid uniform points of [-X, X] plus the
// window/margin boundary points, in extended precision with the certified
// budget folded in.
SandwichReport validate_sandwich(const IndicatorPoly& poly, long n_grid);

// Smallest delta (on a 0.25-step scan) whose construction validates for the
// given exponent, with X = 10 delta.
double smallest_validating_delta(int a_exp, long n_grid = 2000);

}  // namespace zetalab
