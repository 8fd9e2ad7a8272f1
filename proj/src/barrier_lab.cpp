#include "zetalab/barrier_lab.hpp"

#include <algorithm>
#include <cmath>
#include <functional>
#include <stdexcept>

#include <json.hpp>

#include "zetalab/numeric.hpp"
#include "zetalab/rng.hpp"
#include "zetalab/zeta_engine.hpp"

namespace zetalab {

int lower_barrier_q(double v, double u) {
  double w = (v - u) / 10.0;
  return std::max(0, static_cast<int>(std::ceil(w / 5.0)));
}

std::size_t TrajectorySample::pair_index(int capital_l, int ell, int j) {
  if (ell < 1 || j < ell || j > capital_l) throw std::out_of_range("bad (ell, j) pair");
  std::size_t offset = static_cast<std::size_t>(ell - 1) * capital_l -
                       static_cast<std::size_t>(ell - 1) * (ell - 2) / 2;
  return offset + static_cast<std::size_t>(j - ell);
}

std::size_t TrajectoryBatch::pairs() const {
  int l = grid.capital_l;
  return static_cast<std::size_t>(l) * (l + 1) / 2;
}

double TrajectoryBatch::s(long i, int ell, int j) const {
  return values[static_cast<std::size_t>(i) * pairs() +
                TrajectorySample::pair_index(grid.capital_l, ell, j)];
}

TrajectorySample TrajectoryBatch::sample(long i) const {
  TrajectorySample out;
  out.source = source;
  out.capital_l = grid.capital_l;
  std::size_t np = pairs();
  out.values.assign(values.begin() + static_cast<std::ptrdiff_t>(i * np),
                    values.begin() + static_cast<std::ptrdiff_t>((i + 1) * np));
  if (!log_zeta.empty()) out.log_zeta = log_zeta[static_cast<std::size_t>(i)];
  out.t_or_seed = static_cast<double>(i);
  return out;
}

TrajectoryBatch sample_trajectories(const CheckpointGrid& grid, const PrimeTable& table,
                                    TrajectorySource source, long n, uint64_t seed,
                                    unsigned threads) {
  int big_l = grid.capital_l;
  double top_cutoff = std::exp(grid.log_t_ell(big_l));
  if (top_cutoff > static_cast<double>(table.limit) + 0.5)
    throw std::invalid_argument("table too short for the top checkpoint");

  // per-prime scale block and per-abscissa weights, shared by every sample
  struct PrimeEntry {
    uint64_t p;
    int block;  // least ell with p (or p^2) <= T_ell
    long double log_n;
    std::vector<double> w;  // weight at abscissa j = 1..L
  };
  std::vector<PrimeEntry> entries, sq_entries;
  std::vector<double> cutoffs(big_l + 1, 0.0);
  for (int ell = 1; ell <= big_l; ++ell) cutoffs[ell] = std::exp(grid.log_t_ell(ell));
  std::vector<DirichletPolySpec> specs;
  specs.reserve(big_l);
  for (int j = 1; j <= big_l; ++j)
    specs.push_back(DirichletPolySpec::checkpoint(grid, j, big_l));

  for (uint64_t p : table.primes) {
    double pd = static_cast<double>(p);
    if (pd > cutoffs[big_l]) break;
    PrimeEntry e;
    e.p = p;
    e.block = 1;
    while (pd > cutoffs[e.block]) ++e.block;
    e.log_n = logl(static_cast<long double>(p));
    double log_p = std::log(pd);
    for (int j = 1; j <= big_l; ++j)
      e.w.push_back(specs[j - 1].weight(log_p) * std::exp(-specs[j - 1].sigma_j * log_p));
    entries.push_back(std::move(e));
  }
  for (uint64_t sq : table.prime_squares) {
    double nd = static_cast<double>(sq);
    if (nd > cutoffs[big_l]) break;
    PrimeEntry e;
    e.p = static_cast<uint64_t>(std::llround(std::sqrt(nd)));
    e.block = 1;
    while (nd > cutoffs[e.block]) ++e.block;
    e.log_n = logl(static_cast<long double>(sq));
    double log_p = 0.5 * std::log(nd);
    for (int j = 1; j <= big_l; ++j)
      e.w.push_back(0.5 * specs[j - 1].weight(2.0 * log_p) *
                    std::exp(-2.0 * specs[j - 1].sigma_j * log_p));
    sq_entries.push_back(std::move(e));
  }

  TrajectoryBatch batch;
  batch.source = source;
  batch.grid = grid;
  batch.n = n;
  batch.seed = seed;
  std::size_t np = batch.pairs();
  batch.values.assign(static_cast<std::size_t>(n) * np, 0.0);
  if (source == TrajectorySource::zeta_tau)
    batch.log_zeta.assign(static_cast<std::size_t>(n), 0.0);

  uint64_t tau_key = rng::stream_key(seed, "trajectory_tau");
  const long double two_pi = 6.28318530717958647692528676655900577L;

  parallel_chunks(static_cast<std::size_t>(n), threads, [&](std::size_t, std::size_t begin,
                                                            std::size_t end) {
    // acc[b][j]: contribution of scale block b at abscissa j
    std::vector<std::vector<double>> acc(static_cast<std::size_t>(big_l) + 1,
                                         std::vector<double>(static_cast<std::size_t>(big_l) + 1));
    for (std::size_t i = begin; i < end; ++i) {
      for (auto& row : acc) std::fill(row.begin(), row.end(), 0.0);
      long double tau = 0.0L;
      PhaseAssignment assign = source == TrajectorySource::gaussian
                                   ? PhaseAssignment::gaussian(seed, i)
                                   : PhaseAssignment::steinhaus(seed, i);
      if (source == TrajectorySource::zeta_tau) {
        double u = rng::uniform01(tau_key, 0, i);
        tau = static_cast<long double>(std::exp(grid.params.log_t)) * (1.0L + u);
      }
      for (auto& e : entries) {
        double x;
        if (source == TrajectorySource::zeta_tau)
          x = std::cos(static_cast<double>(fmodl(tau * e.log_n, two_pi)));
        else
          x = assign.re_value(e.p);
        for (int j = 1; j <= big_l; ++j) acc[static_cast<std::size_t>(e.block)][static_cast<std::size_t>(j)] += e.w[static_cast<std::size_t>(j - 1)] * x;
      }
      for (auto& e : sq_entries) {
        double x;
        if (source == TrajectorySource::zeta_tau)
          x = std::cos(static_cast<double>(fmodl(tau * e.log_n, two_pi)));
        else
          x = assign.re_square(e.p);
        for (int j = 1; j <= big_l; ++j) acc[static_cast<std::size_t>(e.block)][static_cast<std::size_t>(j)] += e.w[static_cast<std::size_t>(j - 1)] * x;
      }
      double* row = batch.values.data() + i * np;
      for (int ell = 1; ell <= big_l; ++ell)
        for (int j = ell; j <= big_l; ++j) {
          double s = 0.0;
          for (int b = 1; b <= ell; ++b) s += acc[static_cast<std::size_t>(b)][static_cast<std::size_t>(j)];
          row[TrajectorySample::pair_index(big_l, ell, j)] = s;
        }
      if (source == TrajectorySource::zeta_tau)
        batch.log_zeta[i] = zeta_half_line(static_cast<double>(tau)).log_abs;
    }
  });
  return batch;
}

EventFlags evaluate_events(const TrajectorySample& sample, const BarrierSet& barriers,
                           std::optional<double> v) {
  int big_l = sample.capital_l;
  EventFlags flags;
  flags.in_g.assign(static_cast<std::size_t>(big_l), false);
  flags.in_a.assign(static_cast<std::size_t>(big_l), false);
  flags.in_primed.assign(static_cast<std::size_t>(big_l), false);

  bool g_prev = true;
  for (int ell = 1; ell <= big_l; ++ell) {
    double c_ell = 0.5 * (barriers.U(ell) - barriers.L(ell));
    bool boxed = true, inc_ok = true, primed = true;
    for (int j = ell; j <= big_l; ++j) {
      double s = sample.s(ell, j);
      if (s < barriers.L(ell) || s > barriers.U(ell)) boxed = false;
      double prev = ell >= 2 ? sample.s(ell - 1, j) : 0.0;
      if (std::abs(s - prev) > 2.0 * c_ell) inc_ok = false;
      if (s < barriers.Lp(ell) || s > barriers.Up(ell)) primed = false;
    }
    flags.in_a[static_cast<std::size_t>(ell - 1)] = inc_ok;
    flags.in_primed[static_cast<std::size_t>(ell - 1)] = primed;
    bool g_here = g_prev && boxed;
    flags.in_g[static_cast<std::size_t>(ell - 1)] = g_here;
    if (g_prev && inc_ok && !primed) flags.implication_ok = false;
    if (!g_here && !flags.first_exit) flags.first_exit = ell;
    g_prev = g_here;
  }
  if (sample.log_zeta && v) flags.in_h = *sample.log_zeta > *v;
  return flags;
}

bool IncrementGrid::contains(const std::vector<long>& tuple) const {
  return std::binary_search(tuples.begin(), tuples.end(), tuple);
}

IncrementGrid build_increment_grid(const CheckpointGrid& grid, const BarrierSet& barriers,
                                   int ell, std::size_t max_tuples) {
  if (ell < 1 || ell > grid.capital_l) throw std::invalid_argument("ell out of range");
  IncrementGrid inc;
  inc.ell = ell;
  double inv_sum = 0.0;
  for (int j = 1; j <= ell; ++j) {
    inc.delta.push_back(grid.c(j));
    inv_sum += 1.0 / grid.c(j);
    inc.slop.push_back(std::max(1.0, inv_sum));
  }

  const double tol = 1e-9;
  std::vector<long> current(static_cast<std::size_t>(ell));
  std::vector<std::vector<long>> out;
  std::function<void(int, double)> rec = [&](int j, double partial) {
    double lo = barriers.L(j + 1) - inc.slop[static_cast<std::size_t>(j)] - partial - tol;
    double hi = barriers.U(j + 1) - partial + tol;
    long m_lo = static_cast<long>(std::ceil(lo * inc.delta[static_cast<std::size_t>(j)]));
    long m_hi = static_cast<long>(std::floor(hi * inc.delta[static_cast<std::size_t>(j)]));
    for (long m = m_lo; m <= m_hi; ++m) {
      current[static_cast<std::size_t>(j)] = m;
      double u = static_cast<double>(m) / inc.delta[static_cast<std::size_t>(j)];
      if (j + 1 == ell) {
        if (out.size() >= max_tuples) throw std::runtime_error("increment grid too large");
        out.push_back(current);
      } else {
        rec(j + 1, partial + u);
      }
    }
  };
  rec(0, 0.0);
  std::sort(out.begin(), out.end());
  inc.tuples = std::move(out);

  inc.u_bound_4delta_ok = true;
  for (auto& tuple : inc.tuples)
    for (int j = 0; j < ell; ++j)
      if (std::abs(static_cast<double>(tuple[static_cast<std::size_t>(j)]) /
                   inc.delta[static_cast<std::size_t>(j)]) >
          4.0 * inc.delta[static_cast<std::size_t>(j)])
        inc.u_bound_4delta_ok = false;
  return inc;
}

CoverOutcome increment_grid_cover(const TrajectorySample& sample, const IncrementGrid& inc,
                                  const BarrierSet& barriers, int ell, int j_abscissa) {
  if (j_abscissa == 0) j_abscissa = sample.capital_l;
  for (int j = 1; j <= ell; ++j) {
    double s = sample.s(j, j_abscissa);
    if (s < barriers.L(j) || s > barriers.U(j)) return CoverOutcome::not_applicable;
  }
  std::vector<long> tuple(static_cast<std::size_t>(ell));
  double prev = 0.0;
  for (int j = 1; j <= ell; ++j) {
    double s = sample.s(j, j_abscissa);
    double y = s - prev;
    tuple[static_cast<std::size_t>(j - 1)] =
        static_cast<long>(std::floor(y * inc.delta[static_cast<std::size_t>(j - 1)]));
    prev = s;
  }
  return inc.contains(tuple) ? CoverOutcome::covered : CoverOutcome::failed;
}

PartitionReport partition_check(const TrajectoryBatch& batch, const BarrierSet& barriers,
                                std::optional<double> v, const IncrementGrid* cover_grid,
                                int cover_ell, int cover_abscissa) {
  int big_l = batch.grid.capital_l;
  PartitionReport rep;
  rep.n_total = batch.n;
  rep.slice.assign(static_cast<std::size_t>(big_l) + 1, 0);
  rep.upper_breach.assign(static_cast<std::size_t>(big_l), 0);
  rep.lower_breach.assign(static_cast<std::size_t>(big_l), 0);

  bool has_h = v.has_value() && !batch.log_zeta.empty();
  for (long i = 0; i < batch.n; ++i) {
    TrajectorySample sample = batch.sample(i);
    EventFlags flags = evaluate_events(sample, barriers, v);
    bool in_h = has_h ? *flags.in_h : true;
    if (!flags.implication_ok) ++rep.implication_failures;

    if (in_h) {
      ++rep.n_h;
      // slices H intersect G_{ell-1} minus G_ell, with G_0 = all, G_{L+1} = empty
      int exit_at = flags.first_exit ? *flags.first_exit : big_l + 1;
      ++rep.slice[static_cast<std::size_t>(exit_at - 1)];
    }

    // union split of the exit slice by which barrier side broke
    if (in_h && flags.first_exit) {
      int ell = *flags.first_exit;
      bool up = false, down = false;
      for (int j = ell; j <= big_l; ++j) {
        double s = sample.s(ell, j);
        if (s > barriers.U(ell)) up = true;
        if (s < barriers.L(ell)) down = true;
      }
      if (up) ++rep.upper_breach[static_cast<std::size_t>(ell - 1)];
      if (down) ++rep.lower_breach[static_cast<std::size_t>(ell - 1)];
    }

    if (cover_grid) {
      CoverOutcome outcome = increment_grid_cover(
          sample, *cover_grid, barriers, cover_ell ? cover_ell : big_l, cover_abscissa);
      if (outcome != CoverOutcome::not_applicable) {
        ++rep.cover_applicable;
        if (outcome == CoverOutcome::failed) ++rep.cover_failures;
      }
    }
  }

  long total = 0;
  for (long c : rep.slice) total += c;
  rep.partition_exact = total == rep.n_h;
  rep.split_covers = true;
  for (int ell = 1; ell <= big_l; ++ell)
    if (rep.upper_breach[static_cast<std::size_t>(ell - 1)] +
            rep.lower_breach[static_cast<std::size_t>(ell - 1)] <
        rep.slice[static_cast<std::size_t>(ell - 1)])
      rep.split_covers = false;
  return rep;
}

std::string PartitionReport::to_json() const {
  nlohmann::json j;
  j["n_total"] = n_total;
  j["n_h"] = n_h;
  j["slice"] = slice;
  j["upper_breach"] = upper_breach;
  j["lower_breach"] = lower_breach;
  j["partition_exact"] = partition_exact;
  j["split_covers"] = split_covers;
  j["implication_failures"] = implication_failures;
  j["cover_applicable"] = cover_applicable;
  j["cover_failures"] = cover_failures;
  return j.dump(2);
}

// ---- torus oracle ------------------------------------------------------

namespace {

// composite rule on [0, 2pi): n panels of 8-point Gauss-Legendre, weights
// normalized to the uniform probability measure
void panel_rule(int panels, std::vector<double>& nodes, std::vector<double>& weights) {
  static std::vector<double> gl_nodes, gl_weights;
  if (gl_nodes.empty()) gauss_legendre(8, gl_nodes, gl_weights);
  const double two_pi = 6.283185307179586476925286766559;
  double h = two_pi / panels;
  nodes.clear();
  weights.clear();
  for (int p = 0; p < panels; ++p)
    for (int i = 0; i < 8; ++i) {
      nodes.push_back(h * (p + 0.5 * (gl_nodes[static_cast<std::size_t>(i)] + 1.0)));
      weights.push_back(0.5 * h * gl_weights[static_cast<std::size_t>(i)] / two_pi);
    }
}

// fraction of the circle where lo <= r + w cos(theta) <= hi
double arc_fraction(double r, double w, double lo, double hi) {
  if (w == 0.0) return (r >= lo && r <= hi) ? 1.0 : 0.0;
  double aw = std::abs(w);
  double a = std::max((lo - r) / aw, -1.0);
  double b = std::min((hi - r) / aw, 1.0);
  if (a > b) return 0.0;
  return (std::acos(a) - std::acos(b)) / M_PI;
}

struct TensorEval {
  int dims = 0;
  std::vector<double> nodes, weights;

  template <typename F>
  double integrate(F&& f) const {
    std::vector<double> theta(static_cast<std::size_t>(dims), nodes.empty() ? 0.0 : nodes[0]);
    if (dims == 0) return f(theta);
    std::vector<std::size_t> idx(static_cast<std::size_t>(dims), 0);
    std::size_t n = nodes.size();
    KahanSum acc;
    for (;;) {
      double w = 1.0;
      for (int d = 0; d < dims; ++d) w *= weights[idx[static_cast<std::size_t>(d)]];
      acc.add(w * f(theta));
      int d = 0;
      while (d < dims) {
        auto& id = idx[static_cast<std::size_t>(d)];
        if (++id < n) {
          theta[static_cast<std::size_t>(d)] = nodes[id];
          break;
        }
        id = 0;
        theta[static_cast<std::size_t>(d)] = nodes[0];
        ++d;
      }
      if (d == dims) break;
    }
    return acc.value();
  }
};

}  // namespace

TorusProbability torus_box_probability(const std::vector<TorusStatistic>& stats,
                                       const std::vector<TorusBox>& boxes, double abs_tol) {
  if (stats.empty() || stats.size() != boxes.size())
    throw std::invalid_argument("need one box per statistic");
  int dims = static_cast<int>(stats[0].w.size());
  for (auto& s : stats)
    if (static_cast<int>(s.w.size()) != dims ||
        (!s.v.empty() && static_cast<int>(s.v.size()) != dims))
      throw std::invalid_argument("statistic dimension mismatch");
  if (dims < 1 || dims > 5) throw std::invalid_argument("dimension too high");

  auto v_of = [&](const TorusStatistic& s, int d) {
    return s.v.empty() ? 0.0 : s.v[static_cast<std::size_t>(d)];
  };

  // the last angle integrates in closed form when a single statistic sees it
  // through a pure cosine
  bool reducible = stats.size() == 1 && v_of(stats[0], dims - 1) == 0.0 &&
                   stats[0].w[static_cast<std::size_t>(dims - 1)] != 0.0;

  auto evaluate = [&](int panels) -> double {
    TensorEval te;
    te.dims = reducible ? dims - 1 : dims;
    panel_rule(panels, te.nodes, te.weights);
    if (reducible) {
      const auto& st = stats[0];
      return te.integrate([&](const std::vector<double>& theta) {
        double r = 0.0;
        for (int d = 0; d + 1 < dims; ++d)
          r += st.w[static_cast<std::size_t>(d)] * std::cos(theta[static_cast<std::size_t>(d)]) +
               v_of(st, d) * std::cos(2.0 * theta[static_cast<std::size_t>(d)]);
        return arc_fraction(r, st.w[static_cast<std::size_t>(dims - 1)], boxes[0].lo,
                            boxes[0].hi);
      });
    }
    return te.integrate([&](const std::vector<double>& theta) {
      for (std::size_t k = 0; k < stats.size(); ++k) {
        double r = 0.0;
        for (int d = 0; d < dims; ++d)
          r += stats[k].w[static_cast<std::size_t>(d)] *
                   std::cos(theta[static_cast<std::size_t>(d)]) +
               v_of(stats[k], d) * std::cos(2.0 * theta[static_cast<std::size_t>(d)]);
        if (r < boxes[k].lo || r > boxes[k].hi) return 0.0;
      }
      return 1.0;
    });
  };

  int out_dims = reducible ? dims - 1 : dims;
  int panels = 8;  // 64 nodes per dimension
  int cap = out_dims <= 1 ? 4096 : out_dims == 2 ? 512 : out_dims == 3 ? 128 : 32;
  double prev = evaluate(panels);
  TorusProbability result;
  result.value = prev;
  result.est_error = out_dims == 0 ? 1e-15 : 1.0;
  result.nodes_used = static_cast<long>(std::pow(8.0 * panels, out_dims));
  while (out_dims > 0 && panels < cap) {
    panels *= 2;
    double next = evaluate(panels);
    result.est_error = std::abs(next - prev);
    result.value = next + (next - prev) / 3.0;  // one Richardson sweep
    result.nodes_used = static_cast<long>(std::pow(8.0 * panels, out_dims));
    prev = next;
    if (result.est_error <= abs_tol) break;
  }
  return result;
}

TorusProbability torus_mean_square(const std::vector<TorusTerm>& terms, int dims) {
  if (dims < 1 || dims > 5) throw std::invalid_argument("dimension too high");
  for (auto& t : terms)
    if (static_cast<int>(t.exponents.size()) != dims)
      throw std::invalid_argument("exponent vector dimension mismatch");

  auto integrand = [&](const std::vector<double>& theta) {
    std::complex<double> sum{0.0, 0.0};
    for (auto& t : terms) {
      double phase = 0.0;
      for (int d = 0; d < dims; ++d)
        phase += t.exponents[static_cast<std::size_t>(d)] * theta[static_cast<std::size_t>(d)];
      sum += t.coeff * std::complex<double>(std::cos(phase), std::sin(phase));
    }
    return std::norm(sum);
  };

  TensorEval gl;
  gl.dims = dims;
  panel_rule(8, gl.nodes, gl.weights);  // 64 Gauss-Legendre nodes per dimension
  double v_gl = gl.integrate(integrand);

  // the equispaced rule is exact on trigonometric polynomials: cross route
  TensorEval tz;
  tz.dims = dims;
  const double two_pi = 6.283185307179586476925286766559;
  for (int i = 0; i < 64; ++i) {
    tz.nodes.push_back(two_pi * i / 64);
    tz.weights.push_back(1.0 / 64);
  }
  double v_tz = tz.integrate(integrand);

  TorusProbability out;
  out.value = v_gl;
  out.est_error = std::abs(v_gl - v_tz) + 1e-14;
  out.nodes_used = static_cast<long>(std::pow(64.0, dims));
  return out;
}

std::complex<double> torus_pair_expectation(const std::vector<int>& n_exp,
                                            const std::vector<int>& m_exp) {
  if (n_exp.size() != m_exp.size()) throw std::invalid_argument("exponent size mismatch");
  std::complex<double> out{1.0, 0.0};
  std::vector<double> nodes, weights;
  panel_rule(8, nodes, weights);
  for (std::size_t d = 0; d < n_exp.size(); ++d) {
    int k = n_exp[d] - m_exp[d];
    std::complex<double> factor{0.0, 0.0};
    for (std::size_t i = 0; i < nodes.size(); ++i)
      factor += weights[i] * std::complex<double>(std::cos(k * nodes[i]), std::sin(k * nodes[i]));
    out *= factor;
  }
  return out;
}

// ---- conditioned profiles ----------------------------------------------

namespace {

bool good_up_to(const TrajectoryBatch& batch, const BarrierSet& barriers, long i, int ell) {
  int big_l = batch.grid.capital_l;
  for (int l2 = 1; l2 < ell; ++l2)
    for (int j = l2; j <= big_l; ++j) {
      double s = batch.s(i, l2, j);
      if (s < barriers.L(l2) || s > barriers.U(l2)) return false;
    }
  return true;
}

}  // namespace

OnePointProfile one_point_profile(const TrajectoryBatch& batch, const BarrierSet& barriers,
                                  int ell, int m, int q, int n_bins, int j_abscissa) {
  int big_l = batch.grid.capital_l;
  if (ell < 1 || m < ell || m > big_l) throw std::invalid_argument("need ell <= m <= capital_l");
  if (j_abscissa == 0) j_abscissa = big_l;
  if (j_abscissa < ell) throw std::invalid_argument("abscissa must be >= ell");

  OnePointProfile prof;
  prof.ell = ell;
  prof.m = m;
  prof.q = q;
  prof.j_abscissa = j_abscissa;
  prof.length_condition_ok = 2.0 * q * batch.grid.beta(m) <= 0.25;
  if (!prof.length_condition_ok && batch.source == TrajectorySource::zeta_tau)
    throw std::invalid_argument("length condition violated: 2q beta_m > 1/4");

  double lo = barriers.Lp(ell), hi = barriers.Up(ell);
  double width = (hi - lo) / n_bins;
  prof.bins.assign(static_cast<std::size_t>(n_bins), ProfileBin{});
  for (int b = 0; b < n_bins; ++b) {
    prof.bins[static_cast<std::size_t>(b)].lo = lo + b * width;
    prof.bins[static_cast<std::size_t>(b)].hi = lo + (b + 1) * width;
  }

  std::vector<KahanSum> bin_mass(static_cast<std::size_t>(n_bins));
  KahanSum total_q2;
  for (long i = 0; i < batch.n; ++i) {
    double qval = q == 0 ? 1.0 : std::pow(batch.s(i, m, m) - batch.s(i, ell, m), 2 * q);
    total_q2.add(qval);
    if (!good_up_to(batch, barriers, i, ell)) continue;
    double s_cond = batch.s(i, ell, j_abscissa);
    int b = static_cast<int>(std::floor((s_cond - lo) / width));
    if (b < 0 || b >= n_bins) continue;
    ++prof.bins[static_cast<std::size_t>(b)].count;
    bin_mass[static_cast<std::size_t>(b)].add(qval);
  }

  prof.e_q2 = total_q2.value() / static_cast<double>(batch.n);
  double t_ell = batch.grid.t(ell);
  for (int b = 0; b < n_bins; ++b) {
    auto& bin = prof.bins[static_cast<std::size_t>(b)];
    double u = 0.5 * (bin.lo + bin.hi);
    bin.empirical =
        bin_mass[static_cast<std::size_t>(b)].value() / static_cast<double>(batch.n) / prof.e_q2;
    bin.reference = std::exp(-u * u / t_ell) / std::sqrt(t_ell) * width;
    if (bin.count >= 30 && bin.reference > 0)
      prof.max_ratio = std::max(prof.max_ratio, bin.empirical / bin.reference);
  }
  return prof;
}

std::string OnePointProfile::to_csv() const {
  std::string out = "bin_lo,bin_hi,count,density,reference_density\n";
  char line[160];
  for (auto& bin : bins) {
    std::snprintf(line, sizeof line, "%.17g,%.17g,%ld,%.17g,%.17g\n", bin.lo, bin.hi, bin.count,
                  bin.empirical, bin.reference);
    out += line;
  }
  return out;
}

TwoPointProfile two_point_profile(const TrajectoryBatch& batch, const PrimeTable& table,
                                  const BarrierSet& barriers, int ell, int m, int m_prime,
                                  int n_bins) {
  int big_l = batch.grid.capital_l;
  if (ell < 1 || m < ell || m_prime < ell || m > big_l || m_prime > big_l)
    throw std::invalid_argument("need ell <= m, m' <= capital_l");

  TwoPointProfile prof;
  prof.ell = ell;
  prof.m = m;
  prof.m_prime = m_prime;

  auto spec_m = DirichletPolySpec::checkpoint(batch.grid, m, ell);
  auto spec_mp = DirichletPolySpec::checkpoint(batch.grid, m_prime, ell);
  SecondOrderStats so = analytic_second_order(spec_m, spec_mp, table);
  prof.covariance_difference = std::abs(so.variance - so.covariance);

  double lo = barriers.Lp(ell), hi = barriers.Up(ell);
  double width = (hi - lo) / n_bins;
  for (int b = 0; b <= n_bins; ++b) {
    prof.u_edges.push_back(lo + b * width);
    prof.w_edges.push_back(lo + b * width);
  }
  prof.joint_counts.assign(static_cast<std::size_t>(n_bins),
                           std::vector<long>(static_cast<std::size_t>(n_bins), 0));

  KahanSum su, sw, suu, sww, suw;
  for (long i = 0; i < batch.n; ++i) {
    double a = batch.s(i, ell, m);
    double b = batch.s(i, ell, m_prime);
    su.add(a);
    sw.add(b);
    suu.add(a * a);
    sww.add(b * b);
    suw.add(a * b);
    if (!good_up_to(batch, barriers, i, ell)) continue;
    int bu = static_cast<int>(std::floor((a - lo) / width));
    int bw = static_cast<int>(std::floor((b - lo) / width));
    if (bu < 0 || bu >= n_bins || bw < 0 || bw >= n_bins) continue;
    ++prof.joint_counts[static_cast<std::size_t>(bu)][static_cast<std::size_t>(bw)];
  }

  double n = static_cast<double>(batch.n);
  double mu = su.value() / n, mw = sw.value() / n;
  double vu = suu.value() / n - mu * mu, vw = sww.value() / n - mw * mw;
  prof.empirical_correlation = (suw.value() / n - mu * mw) / std::sqrt(vu * vw);

  double t_ell = batch.grid.t(ell);
  for (int bu = 0; bu < n_bins; ++bu)
    for (int bw = 0; bw < n_bins; ++bw) {
      long count = prof.joint_counts[static_cast<std::size_t>(bu)][static_cast<std::size_t>(bw)];
      if (count < 30) continue;
      double u = lo + (bu + 0.5) * width;
      double w = lo + (bw + 0.5) * width;
      double ref = std::exp(-(u + w) * (u + w) / (4.0 * t_ell)) / std::sqrt(t_ell) *
                   std::exp(-(w - u) * (w - u) / 8.0) * width * width;
      if (ref > 0)
        prof.max_ratio = std::max(prof.max_ratio, static_cast<double>(count) / n / ref);
    }
  return prof;
}

std::string TwoPointProfile::to_csv() const {
  std::string out = "u_lo,u_hi,w_lo,w_hi,count\n";
  char line[160];
  for (std::size_t bu = 0; bu + 1 < u_edges.size(); ++bu)
    for (std::size_t bw = 0; bw + 1 < w_edges.size(); ++bw) {
      std::snprintf(line, sizeof line, "%.17g,%.17g,%.17g,%.17g,%ld\n", u_edges[bu],
                    u_edges[bu + 1], w_edges[bw], w_edges[bw + 1], joint_counts[bu][bw]);
      out += line;
    }
  return out;
}

}  // namespace zetalab
