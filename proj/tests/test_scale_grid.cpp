#include <doctest.h>

#include <cmath>
#include <stdexcept>

#include "zetalab/scale_grid.hpp"

using namespace zetalab;

namespace {
GridParams params(double log_t, double cutoff, double k = 1.0) {
  GridParams p;
  p.log_t = log_t;
  p.cutoff = cutoff;
  p.k = k;
  return p;
}
}  // namespace

TEST_SUITE("scale_grid") {

TEST_CASE("capital L and betas at the reference configuration") {
  CheckpointGrid grid = build_grid(params(1e4, 2.0));
  CHECK(grid.capital_l == 4);
  CHECK(grid.beta(1) == doctest::Approx(0.01).epsilon(1e-14));
  CHECK(grid.beta(4) == doctest::Approx(std::exp(3.0) / 100.0).epsilon(1e-14));
  // one past the cutoff: beta_{L-1} <= e^{-theta} < beta_L
  CHECK(grid.beta(3) <= std::exp(-2.0));
  CHECK(grid.beta(4) > std::exp(-2.0));
}

TEST_CASE("c_1 at the reference configuration") {
  CheckpointGrid grid = build_grid(params(1e4, 2.0));
  CHECK(grid.c(1) == doctest::Approx(1.2022644346174131).epsilon(1e-13));
}

TEST_CASE("default gamma is 1/25") {
  GridParams p;
  CHECK(p.gamma == doctest::Approx(0.04));
}

TEST_CASE("unit checkpoint spacing is exact in double arithmetic") {
  for (double log_t : {1e3, 1e4, 1e5, 17.9343, 25.0})
    for (double theta : {1.0, 2.0, 3.0}) {
      if (1.0 / std::sqrt(log_t) > std::exp(-theta)) continue;
      CheckpointGrid grid = build_grid(params(log_t, theta));
      for (int ell = 2; ell <= grid.capital_l; ++ell)
        CHECK(grid.t(ell) - grid.t(ell - 1) == 1.0);
      CHECK(grid.t(1) == doctest::Approx(0.5 * std::log(log_t)).epsilon(1e-11));
    }
}

TEST_CASE("capital L matches a brute-force scan") {
  for (double log_t : {1e3, 1e4, 1e5})
    for (double theta : {1.0, 2.0, 3.0}) {
      CheckpointGrid grid = build_grid(params(log_t, theta));
      int max_inside = 0;
      for (int ell = 1; ell < 200; ++ell)
        if (std::exp(static_cast<double>(ell - 1)) / std::sqrt(log_t) <= std::exp(-theta))
          max_inside = ell;
      CHECK(grid.capital_l == max_inside + 1);
    }
}

TEST_CASE("beta increasing, c decreasing, count bound") {
  for (double log_t : {1e3, 1e4, 1e5, 63.2})
    for (double theta : {1.0, 2.0}) {
      CheckpointGrid grid = build_grid(params(log_t, theta));
      for (int ell = 2; ell <= grid.capital_l; ++ell) {
        CHECK(grid.beta(ell) > grid.beta(ell - 1));
        CHECK(grid.c(ell) < grid.c(ell - 1));
        CHECK(grid.beta(ell) == doctest::Approx(std::exp(1.0) * grid.beta(ell - 1)).epsilon(1e-13));
      }
      for (int ell = 1; ell <= grid.capital_l; ++ell) {
        double count = grid.capital_l - ell + 1;
        CHECK(count <= std::log(1.0 / grid.beta(ell)) + 1.0 + 1e-9);
      }
    }
}

TEST_CASE("barrier geometry") {
  CheckpointGrid grid = build_grid(params(1e4, 2.0, 2.0));
  BarrierSet b = barrier_bounds(grid);
  for (int ell = 1; ell <= grid.capital_l; ++ell) {
    double c = grid.c(ell);
    CHECK(b.U(ell) - b.L(ell) == doctest::Approx(2 * c).epsilon(1e-12));
    CHECK(b.Up(ell) - b.U(ell) == doctest::Approx(3 * c).epsilon(1e-12));
    CHECK(b.L(ell) - b.Lp(ell) == doctest::Approx(3 * c).epsilon(1e-12));
    CHECK(b.Up(ell) - b.Lp(ell) == doctest::Approx(8 * c).epsilon(1e-12));
    CHECK(0.5 * (b.L(ell) + b.U(ell)) == doctest::Approx(grid.kappa * grid.t(ell)).epsilon(1e-12));
  }
  // midpoint example: logT = 1e4, k = 2 gives kappa = 2, t_1 = ln 100
  CHECK(grid.kappa == doctest::Approx(2.0).epsilon(1e-12));
  CHECK(grid.kappa * grid.t(1) == doctest::Approx(9.2103403719761827).epsilon(1e-10));
}

TEST_CASE("zero gradient gives symmetric barriers") {
  GridParams p = params(1e4, 2.0);
  p.k = 1e-9;  // kappa -> 0; keep v consistent with the [k/2, 2k] envelope
  p.v = 1e-9 * p.loglog_t();
  CheckpointGrid grid = build_grid(p);
  BarrierSet b = barrier_bounds(grid);
  for (int ell = 1; ell <= grid.capital_l; ++ell) {
    CHECK(b.L(ell) == doctest::Approx(-grid.c(ell)).epsilon(1e-6));
    CHECK(b.U(ell) == doctest::Approx(grid.c(ell)).epsilon(1e-6));
  }
}

TEST_CASE("truncation index scans the beta sequence") {
  CheckpointGrid grid = build_grid(params(1e4, 2.0));
  // threshold for ell = 1: 0.01^{0.04} ~ 0.8318 exceeds every beta: clamps
  TruncationIndex ti = truncation_index(grid, 1);
  CHECK(std::pow(grid.beta(1), grid.params.gamma) == doctest::Approx(0.8318).epsilon(1e-3));
  CHECK(ti.clamped);
  CHECK(ti.m == grid.capital_l);
  // the top checkpoint always clamps or lands at L: beta_L < 1 forces
  // beta_L^gamma > beta_L
  for (double log_t : {1e3, 1e4, 1e5}) {
    CheckpointGrid g = build_grid(params(log_t, 2.0));
    TruncationIndex top = truncation_index(g, g.capital_l);
    CHECK((top.clamped || top.m == g.capital_l));
  }
}

TEST_CASE("gamma below 1/20 keeps the induced length exponent under one") {
  // beta^(1-20 gamma) < 1 whenever gamma < 1/20, checked in log space
  for (double log_t : {1e3, 1e4, 1e5}) {
    CheckpointGrid grid = build_grid(params(log_t, 2.0));
    for (int ell = 1; ell <= grid.capital_l; ++ell)
      CHECK((1.0 - 20.0 * grid.params.gamma) * std::log(grid.beta(ell)) < 0.0);
  }
}

TEST_CASE("rejects degenerate parameters") {
  CHECK_THROWS_WITH_AS(build_grid(params(2.0, 2.0)),
                       doctest::Contains("degenerate T"), std::invalid_argument);
  CHECK_THROWS_WITH_AS(build_grid(params(1e4, 12.0)),
                       doctest::Contains("cutoff too large"), std::invalid_argument);
  GridParams bad_gamma = params(1e4, 2.0);
  bad_gamma.gamma = 0.06;
  CHECK_THROWS_AS(build_grid(bad_gamma), std::invalid_argument);
  GridParams bad_v = params(1e4, 2.0, 1.0);
  bad_v.v = 10.0 * bad_v.loglog_t();
  CHECK_THROWS_AS(build_grid(bad_v), std::invalid_argument);
}

TEST_CASE("json document round-trips") {
  CheckpointGrid grid = build_grid(params(1e4, 2.0, 2.0));
  std::string doc = grid.to_json();
  CHECK(doc.find("\"capital_l\"") != std::string::npos);
  CHECK(doc.find("\"betas\"") != std::string::npos);
  CheckpointGrid back = grid_from_json(doc);
  CHECK(back.capital_l == grid.capital_l);
  CHECK(back.betas == grid.betas);
  CHECK(back.tls == grid.tls);
}

TEST_CASE("asymptotic-regime synthetic grid keeps the u-range arithmetic sound") {
  // log T = 1e300 pushes c_1 to ~1e6 while T itself is never formed
  GridParams p = params(1e300, 300.0);
  CheckpointGrid grid = build_grid(p);
  CHECK(grid.capital_l > 40);
  CHECK(grid.c(1) > 1e5);
  double inv_sum = 0.0;
  for (int ell = 1; ell <= grid.capital_l; ++ell) inv_sum += 1.0 / grid.c(ell);
  CHECK(inv_sum < 1.0);  // the unit slop suffices in this regime
}

}  // TEST_SUITE
