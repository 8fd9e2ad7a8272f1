#include "zetalab/scale_grid.hpp"

#include <cmath>
#include <stdexcept>

#include <json.hpp>

namespace zetalab {

double GridParams::loglog_t() const { return std::log(log_t); }

double GridParams::v_effective() const {
  return v > 0.0 ? v : k * loglog_t();
}

double GridParams::kappa() const { return v_effective() / loglog_t(); }

void GridParams::validate() const {
  if (!(log_t > std::exp(1.0))) throw std::invalid_argument("degenerate T: log T must exceed e");
  if (!(k > 0.0)) throw std::invalid_argument("k must be positive");
  if (!(gamma > 0.0 && gamma < 0.05)) throw std::invalid_argument("gamma must lie in (0, 1/20)");
  if (!(cutoff > 0.0)) throw std::invalid_argument("cutoff must be positive");
  double ratio = v_effective() / loglog_t();
  if (!(ratio >= k / 2 && ratio <= 2 * k))
    throw std::invalid_argument("v must stay within [k/2, 2k] times log log T");
}

CheckpointGrid build_grid(const GridParams& params) {
  params.validate();
  const double e = std::exp(1.0);
  double beta1 = 1.0 / std::sqrt(params.log_t);
  double bound = std::exp(-params.cutoff);
  if (beta1 > bound) throw std::invalid_argument("cutoff too large: beta_1 already exceeds exp(-cutoff)");

  CheckpointGrid grid;
  grid.params = params;
  grid.kappa = params.kappa();

  // max{ell : beta_ell <= exp(-cutoff)} then one extra checkpoint past it
  int last_inside = 1;
  double beta = beta1;
  while (beta * e <= bound) {
    beta *= e;
    ++last_inside;
  }
  grid.capital_l = last_inside + 1;

  // t_1 snapped to 40 fractional bits so that t_1 + (ell-1) is exact and
  // successive checkpoints differ by exactly 1.0 in double arithmetic
  double t1 = 0.5 * std::log(params.log_t);
  t1 = std::round(t1 * 0x1.0p40) * 0x1.0p-40;

  grid.betas.resize(grid.capital_l);
  grid.tls.resize(grid.capital_l);
  grid.cls.resize(grid.capital_l);
  beta = beta1;
  for (int ell = 1; ell <= grid.capital_l; ++ell) {
    grid.betas[ell - 1] = beta;
    grid.tls[ell - 1] = t1 + (ell - 1);
    grid.cls[ell - 1] = std::pow(beta, -params.gamma);
    beta *= e;
  }
  return grid;
}

BarrierSet barrier_bounds(const CheckpointGrid& grid) {
  BarrierSet b;
  int n = grid.capital_l;
  b.lower.resize(n);
  b.upper.resize(n);
  b.lower_prime.resize(n);
  b.upper_prime.resize(n);
  for (int ell = 1; ell <= n; ++ell) {
    double mid = grid.kappa * grid.t(ell);
    double c = grid.c(ell);
    b.lower[ell - 1] = mid - c;
    b.upper[ell - 1] = mid + c;
    b.lower_prime[ell - 1] = mid - 4 * c;
    b.upper_prime[ell - 1] = mid + 4 * c;
  }
  return b;
}

TruncationIndex truncation_index(const CheckpointGrid& grid, int ell) {
  if (ell < 1 || ell > grid.capital_l) throw std::invalid_argument("checkpoint index out of range");
  double threshold = std::pow(grid.beta(ell), grid.params.gamma);
  for (int m = 1; m <= grid.capital_l; ++m)
    if (grid.beta(m) > threshold) return {m, false};
  return {grid.capital_l, true};
}

std::string CheckpointGrid::to_json() const {
  nlohmann::json j;
  j["log_t"] = params.log_t;
  j["k"] = params.k;
  j["v"] = params.v_effective();
  j["gamma"] = params.gamma;
  j["cutoff"] = params.cutoff;
  j["betas"] = betas;
  j["tls"] = tls;
  j["cls"] = cls;
  j["capital_l"] = capital_l;
  return j.dump(2);
}

CheckpointGrid grid_from_json(const std::string& text) {
  auto j = nlohmann::json::parse(text);
  GridParams p;
  p.log_t = j.at("log_t").get<double>();
  p.k = j.at("k").get<double>();
  p.v = j.at("v").get<double>();
  p.gamma = j.at("gamma").get<double>();
  p.cutoff = j.at("cutoff").get<double>();
  CheckpointGrid grid = build_grid(p);
  if (grid.capital_l != j.at("capital_l").get<int>())
    throw std::runtime_error("grid document inconsistent with its parameters");
  return grid;
}

}  // namespace zetalab
