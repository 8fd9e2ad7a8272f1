#include "zetalab/indicator_poly.hpp"

#include <algorithm>
#include <cmath>
#include <stdexcept>

#include <boost/math/special_functions/erf.hpp>
#include <boost/multiprecision/cpp_bin_float.hpp>
#include <json.hpp>

namespace zetalab {

namespace {

using mp50 = boost::multiprecision::cpp_bin_float_50;
using mpwide = boost::multiprecision::number<boost::multiprecision::cpp_bin_float<500>>;

constexpr double kTwoPi = 6.283185307179586476925286766559;

double erfc_upper(double z) {
  // rigorous upper bound valid for z >= 1; clamping large z down only
  // loosens it, which keeps exponents representable
  z = std::min(z, 1000.0);
  if (z < 1.0) return 2.0;
  return std::exp(-z * z);
}

mp50 mp_erfc_clamped(const mp50& z) {
  if (z > 2000) return boost::math::erfc(mp50(2000));  // monotone: still an upper bound
  return boost::math::erfc(z);
}

// ln of Sum_{l > M} z^l / l! bounded by the geometric-dominated first term
double log_taylor_tail(double z, double m) {
  if (z <= 0) return -std::numeric_limits<double>::infinity();
  double ratio = z / (m + 2.0);
  if (ratio >= 0.99) return std::numeric_limits<double>::infinity();
  return (m + 1.0) * std::log(z) - std::lgamma(m + 2.0) - std::log(1.0 - ratio);
}

struct CplxMp {
  mpwide re, im;
  CplxMp operator*(const CplxMp& o) const { return {re * o.re - im * o.im, re * o.im + im * o.re}; }
  CplxMp operator+(const CplxMp& o) const { return {re + o.re, im + o.im}; }
};

}  // namespace

IndicatorPoly build_indicator_poly_raw(double delta, int a_exp, double range_x, double slack,
                                       double alpha_pad) {
  if (!(delta > 1.0) || a_exp < 3) throw std::invalid_argument("need delta > 1 and a >= 3");
  if (!(slack > 0.0 && slack < 1.0)) throw std::invalid_argument("slack must lie in (0,1)");

  IndicatorPoly poly;
  poly.delta_ = delta;
  poly.a_exp_ = a_exp;
  poly.range_x_ = range_x;
  poly.slack_ = slack;

  double window = 1.0 / delta;
  double margin = std::pow(delta, -static_cast<double>(a_exp));
  if (!(range_x > window + 2.0 * margin))
    throw std::invalid_argument("range_x must cover the widened window");
  poly.x0_ = -0.5 * margin;
  poly.x1_ = window + 0.5 * margin;

  double ln_s = std::log(slack);
  poly.alpha_ = (2.0 / margin) * std::sqrt(std::log(8.0) - ln_s) * alpha_pad;
  poly.period_ = 2.0 * range_x + 2.0;

  // Fourier truncation: sum_{|nu|>N} |c_nu| <= e^{-(gN)^2} / (pi g^2 N^2)
  double g = M_PI / (poly.period_ * poly.alpha_);
  double target = ln_s - std::log(64.0);
  auto ln_fourier_tail = [&](double n) {
    return -(g * n) * (g * n) - std::log(M_PI * g * g * n * n);
  };
  double n_freq = std::ceil(1.0 / g);
  while (ln_fourier_tail(n_freq) > target) n_freq = std::ceil(n_freq * 1.05) + 16;
  poly.n_freq_ = static_cast<int64_t>(n_freq);
  poly.eps_fourier_ = std::exp(ln_fourier_tail(n_freq));

  // certified bound on sum |c_nu|: |c_nu| <= min(len/P, 1/(pi nu)) e^{-(g nu)^2}
  double len = poly.x1_ - poly.x0_;
  double a_flat = len / poly.period_;
  double nu_a = std::ceil(1.0 / (M_PI * a_flat));
  double mass = a_flat;                  // nu = 0
  mass += 2.0 * a_flat * nu_a;           // |nu| <= nu_a
  double log_part = std::max(0.0, std::log(1.0 / std::max(g * nu_a, 1e-300)));
  mass += 2.0 / M_PI * (log_part + 0.14);  // |nu| > nu_a
  poly.coeff_mass_bound_ = mass;

  // Taylor truncation of each exponential at total degree M
  double z_max = kTwoPi * n_freq * range_x / poly.period_;
  double t_target = ln_s - std::log(64.0) - std::log(mass);
  double lo = std::ceil(z_max) + 2.0, hi = std::ceil(40.0 * z_max) + 200.0;
  if (log_taylor_tail(z_max, hi) > t_target)
    throw std::runtime_error("construction failed validation: no admissible degree");
  while (hi - lo > 1.0) {
    double mid = std::floor(0.5 * (lo + hi));
    (log_taylor_tail(z_max, mid) <= t_target ? hi : lo) = mid;
  }
  poly.taylor_degree_ = static_cast<int64_t>(hi);
  poly.eps_taylor_ = std::exp(log_taylor_tail(z_max, hi) + std::log(mass));

  // periodization images sit at distance >= P - X - x1 from the window
  double z_img = poly.alpha_ * (poly.period_ - range_x - poly.x1_);
  poly.eps_image_ = 1.2 * erfc_upper(z_img);
  if (z_img > 40.0) poly.eps_image_ = 0.0;  // below any representable margin

  return poly;
}

IndicatorPoly build_indicator_poly(double delta, int a_exp, double range_x) {
  if (!(delta >= 3.0)) throw std::invalid_argument("need delta >= 3");
  double exponent = std::pow(delta, static_cast<double>(a_exp - 2));
  if (!(exponent >= 10.0))
    throw std::invalid_argument("need delta^(a-2) >= 10 for a meaningful sandwich slack");
  double slack = std::exp(-exponent);
  for (double pad : {1.05, 1.2, 1.4}) {
    IndicatorPoly poly = build_indicator_poly_raw(delta, a_exp, range_x, slack, pad);
    SandwichReport rep = validate_sandwich(poly, 2000);
    if (rep.lower_violations == 0 && rep.upper_violations == 0) return poly;
  }
  throw std::runtime_error("construction failed validation");
}

std::complex<double> IndicatorPoly::fourier_coeff(int64_t nu) const {
  std::complex<double> base;
  if (nu == 0) {
    base = {(x1_ - x0_) / period_, 0.0};
  } else {
    double xi = static_cast<double>(nu) / period_;
    std::complex<double> num =
        std::exp(std::complex<double>(0.0, -kTwoPi * xi * x0_)) -
        std::exp(std::complex<double>(0.0, -kTwoPi * xi * x1_));
    base = num / std::complex<double>(0.0, kTwoPi * xi) / period_;
  }
  double damp = std::exp(-std::pow(M_PI * static_cast<double>(nu) / (period_ * alpha_), 2.0));
  base *= damp;
  for (auto& [cnu, factor] : corruptions_)
    if (cnu == nu) base *= factor;
  return base;
}

double IndicatorPoly::amplitude(double x) const {
  return 0.5 * (std::erf(alpha_ * (x - x0_)) - std::erf(alpha_ * (x - x1_)));
}

std::complex<double> IndicatorPoly::corruption_term(double x) const {
  std::complex<double> out{0.0, 0.0};
  for (auto& [nu, factor] : corruptions_) {
    std::complex<double> c = fourier_coeff(nu);       // includes the factor
    std::complex<double> orig = c / factor;           // pristine coefficient
    double angle = std::fmod(kTwoPi * static_cast<double>(nu) * x / period_, kTwoPi);
    out += (c - orig) * std::complex<double>(std::cos(angle), std::sin(angle));
  }
  return out;
}

double IndicatorPoly::eval_squared(double x, bool* certified) const {
  if (certified) *certified = std::abs(x) <= range_x_;
  std::complex<double> d = amplitude(x) + corruption_term(x);
  return std::norm(d);
}

void IndicatorPoly::corrupt_coefficient(int64_t nu, double factor) {
  if (std::llabs(nu) > n_freq_) throw std::invalid_argument("frequency outside the support");
  if (factor == 0.0) throw std::invalid_argument("factor must be nonzero");
  corruptions_.emplace_back(nu, factor);
}

bool IndicatorPoly::degree_ceiling_ok() const {
  double log_ceiling = std::log(100.0) + std::log(range_x_) +
                       3.0 * a_exp_ * std::log(delta_);
  return std::log(static_cast<double>(taylor_degree_)) < log_ceiling;
}

bool IndicatorPoly::coeff_ceiling_ok() const {
  // |coeff_l| <= (2pi)^l/l! * (N/P)^l * sum|c_nu|; the ceiling follows when
  // N/P <= Delta^{2a} and sum|c_nu| <= Delta^{4a}
  double log_freq_ratio = std::log(static_cast<double>(n_freq_)) - std::log(period_);
  double log_delta2a = 2.0 * a_exp_ * std::log(delta_);
  return log_freq_ratio <= log_delta2a &&
         std::log(coeff_mass_bound_) <= 2.0 * log_delta2a;
}

bool IndicatorPoly::monomials_feasible() const {
  // cancellation in the monomial basis consumes ~z_max e-folds of precision
  double z_max = kTwoPi * static_cast<double>(n_freq_) * range_x_ / period_;
  return n_freq_ <= 2000 && taylor_degree_ <= 8000 && z_max < 1000.0;
}

double IndicatorPoly::eval_squared_monomial_horner(double x) const {
  if (!monomials_feasible())
    throw std::runtime_error("monomial expansion infeasible at this size");
  int64_t m = taylor_degree_;
  // coeff_l = sum_nu c_nu (2 pi i nu / P)^l / l!, accumulated per frequency
  std::vector<CplxMp> coeffs(static_cast<std::size_t>(m) + 1, CplxMp{0, 0});
  std::vector<mpwide> inv_l(static_cast<std::size_t>(m) + 1, mpwide(1));
  for (int64_t l = 1; l <= m; ++l) inv_l[static_cast<std::size_t>(l)] = mpwide(1) / l;
  mpwide two_pi_over_p = mpwide(2) * boost::math::constants::pi<mpwide>() / mpwide(period_);
  for (int64_t nu = -n_freq_; nu <= n_freq_; ++nu) {
    std::complex<double> c = fourier_coeff(nu);
    CplxMp acc{mpwide(c.real()), mpwide(c.imag())};
    CplxMp w{0, two_pi_over_p * nu};
    coeffs[0] = coeffs[0] + acc;
    for (int64_t l = 1; l <= m; ++l) {
      acc = acc * w;
      acc.re *= inv_l[static_cast<std::size_t>(l)];
      acc.im *= inv_l[static_cast<std::size_t>(l)];
      coeffs[static_cast<std::size_t>(l)] = coeffs[static_cast<std::size_t>(l)] + acc;
    }
  }
  CplxMp v{0, 0};
  mpwide xm(x);
  for (int64_t l = m; l >= 0; --l) {
    v.re = v.re * xm + coeffs[static_cast<std::size_t>(l)].re;
    v.im = v.im * xm + coeffs[static_cast<std::size_t>(l)].im;
  }
  mpwide norm = v.re * v.re + v.im * v.im;
  return norm.convert_to<double>();
}

SandwichReport validate_sandwich(const IndicatorPoly& poly, long n_grid) {
  if (n_grid < 1000) throw std::invalid_argument("need n_grid >= 10^3");

  double window = 1.0 / poly.delta();
  double margin = std::pow(poly.delta(), -static_cast<double>(poly.a_exp()));
  std::vector<double> points;
  points.reserve(n_grid + 6);
  for (long i = 0; i < n_grid; ++i)
    points.push_back(-poly.range_x() +
                     2.0 * poly.range_x() * static_cast<double>(i) / (n_grid - 1));
  for (double b : {0.0, window, -margin, margin, window - margin, window + margin})
    points.push_back(b);

  mp50 s(poly.slack());
  mp50 eps(poly.eps_total());
  mp50 alpha(poly.alpha());
  mp50 x0(poly.window_lo()), x1(poly.window_hi());

  SandwichReport rep;
  rep.grid_points = static_cast<long>(points.size());
  mp50 worst(0);

  for (double x : points) {
    mp50 xm(x);
    bool in_window = x >= 0.0 && x <= window;
    bool in_widened = x >= -margin && x <= window + margin;

    mp50 defect;  // 1 - amplitude, in tail form
    mp50 leak;    // amplitude upper bound outside the widened window
    if (in_window) {
      defect = 0.5 * mp_erfc_clamped(alpha * (xm - x0)) +
               0.5 * mp_erfc_clamped(alpha * (x1 - xm));
    } else if (!in_widened) {
      if (x < 0)
        leak = 0.5 * mp_erfc_clamped(alpha * (x0 - xm));
      else
        leak = 0.5 * mp_erfc_clamped(alpha * (xm - x1));
    }

    // corruption magnitudes sit at the coefficient scale (~1e-3), far above
    // double roundoff, so the closed trigonometric form in double is ample
    mp50 dc(poly.corrupted() ? std::abs(poly.corruption_term(x)) : 0.0);

    // upper: (amp_ub + |dc| + eps)^2 <= allowed + s
    mp50 amp_ub = in_widened ? mp50(1) : leak;
    mp50 ub = amp_ub + dc + eps;
    mp50 allowed = in_widened ? mp50(1) : mp50(0);
    mp50 upper_excess = ub * ub - (allowed + s);
    if (upper_excess > 0) {
      ++rep.upper_violations;
      worst = std::max(worst, upper_excess);
    }

    // lower, only inside the window: via (1-u)^2 >= 1-2u
    if (in_window) {
      mp50 u = defect + dc + eps;
      mp50 lower_excess = 2 * u - s;
      if (lower_excess > 0) {
        ++rep.lower_violations;
        worst = std::max(worst, lower_excess);
      }
    }
  }

  rep.max_excess = worst.convert_to<double>();
  return rep;
}

double smallest_validating_delta(int a_exp, long n_grid) {
  for (double delta = 1.5; delta <= 20.0; delta += 0.25) {
    double slack = std::exp(-std::pow(delta, static_cast<double>(a_exp - 2)));
    try {
      IndicatorPoly poly = build_indicator_poly_raw(delta, a_exp, 10.0 * delta, slack);
      SandwichReport rep = validate_sandwich(poly, n_grid);
      if (rep.lower_violations == 0 && rep.upper_violations == 0) return delta;
    } catch (const std::exception&) {
      continue;
    }
  }
  return std::numeric_limits<double>::quiet_NaN();
}

std::string IndicatorPoly::to_json() const {
  nlohmann::json j;
  j["delta"] = delta_;
  j["a"] = a_exp_;
  j["x_range"] = range_x_;
  j["slack"] = slack_;
  j["alpha"] = alpha_;
  j["x0"] = x0_;
  j["x1"] = x1_;
  j["period"] = period_;
  j["n_freq"] = n_freq_;
  j["taylor_degree"] = taylor_degree_;
  j["eps_fourier"] = eps_fourier_;
  j["eps_taylor"] = eps_taylor_;
  j["eps_image"] = eps_image_;
  nlohmann::json coeffs = nlohmann::json::array();
  int64_t stored = std::min<int64_t>(n_freq_, 64);
  for (int64_t nu = 0; nu <= stored; ++nu) {
    std::complex<double> c = fourier_coeff(nu);
    char buf[64];
    std::snprintf(buf, sizeof buf, "%.25g %.25g", c.real(), c.imag());
    coeffs.push_back(std::string(buf));
  }
  j["coeffs"] = coeffs;
  nlohmann::json corr = nlohmann::json::array();
  for (auto& [nu, factor] : corruptions_) corr.push_back({{"nu", nu}, {"factor", factor}});
  j["corruptions"] = corr;
  return j.dump(2);
}

IndicatorPoly IndicatorPoly::from_json(const std::string& text) {
  auto j = nlohmann::json::parse(text);
  double delta = j.at("delta").get<double>();
  int a_exp = j.at("a").get<int>();
  double slack = j.at("slack").get<double>();
  // construction is a deterministic function of (delta, a, X, slack, pad);
  // recover the pad from the stored alpha and rebuild
  double margin = std::pow(delta, -static_cast<double>(a_exp));
  double base_alpha = (2.0 / margin) * std::sqrt(std::log(8.0) - std::log(slack));
  double pad = j.at("alpha").get<double>() / base_alpha;
  IndicatorPoly poly =
      build_indicator_poly_raw(delta, a_exp, j.at("x_range").get<double>(), slack, pad);
  if (poly.n_freq_ != j.at("n_freq").get<int64_t>() ||
      poly.taylor_degree_ != j.at("taylor_degree").get<int64_t>())
    throw std::runtime_error("document inconsistent with its parameters");
  for (auto& c : j.at("corruptions"))
    poly.corrupt_coefficient(c.at("nu").get<int64_t>(), c.at("factor").get<double>());
  auto coeffs = j.at("coeffs");
  int64_t stored = std::min<int64_t>(poly.n_freq_, 64);
  for (int64_t nu = 0; nu <= stored; ++nu) {
    double re, im;
    if (std::sscanf(coeffs.at(static_cast<std::size_t>(nu)).get<std::string>().c_str(),
                    "%lg %lg", &re, &im) != 2)
      throw std::runtime_error("malformed coefficient string");
    std::complex<double> c = poly.fourier_coeff(nu);
    if (std::abs(c - std::complex<double>(re, im)) > 1e-12 * (1.0 + std::abs(c)))
      throw std::runtime_error("stored coefficients inconsistent with parameters");
  }
  return poly;
}

}  // namespace zetalab
