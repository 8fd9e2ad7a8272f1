#include <pybind11/complex.h>
#include <pybind11/pybind11.h>
#include <pybind11/stl.h>

#include "zetalab/barrier_lab.hpp"
#include "zetalab/numeric.hpp"
#include "zetalab/dirichlet_sums.hpp"
#include "zetalab/experiments.hpp"
#include "zetalab/indicator_poly.hpp"
#include "zetalab/prime_tables.hpp"
#include "zetalab/random_models.hpp"
#include "zetalab/scale_grid.hpp"
#include "zetalab/zeta_engine.hpp"

namespace py = pybind11;
using namespace zetalab;

PYBIND11_MODULE(_zetalab, m) {
  m.doc() = "multiscale checkpoint/barrier laboratory for |zeta| on the critical line";

  py::class_<GridParams>(m, "GridParams")
      .def(py::init([](double log_t, double k, double v, double gamma, double cutoff) {
             GridParams p;
             p.log_t = log_t;
             p.k = k;
             p.v = v;
             p.gamma = gamma;
             p.cutoff = cutoff;
             return p;
           }),
           py::arg("log_t"), py::arg("k") = 1.0, py::arg("v") = 0.0,
           py::arg("gamma") = 1.0 / 25, py::arg("cutoff") = 2.0)
      .def_readwrite("log_t", &GridParams::log_t)
      .def_readwrite("k", &GridParams::k)
      .def_readwrite("v", &GridParams::v)
      .def_readwrite("gamma", &GridParams::gamma)
      .def_readwrite("cutoff", &GridParams::cutoff)
      .def("kappa", &GridParams::kappa);

  py::class_<CheckpointGrid>(m, "CheckpointGrid")
      .def_readonly("betas", &CheckpointGrid::betas)
      .def_readonly("tls", &CheckpointGrid::tls)
      .def_readonly("cls", &CheckpointGrid::cls)
      .def_readonly("capital_l", &CheckpointGrid::capital_l)
      .def_readonly("kappa", &CheckpointGrid::kappa)
      .def("beta", &CheckpointGrid::beta)
      .def("t", &CheckpointGrid::t)
      .def("c", &CheckpointGrid::c)
      .def("log_t_ell", &CheckpointGrid::log_t_ell)
      .def("to_json", &CheckpointGrid::to_json);

  py::class_<BarrierSet>(m, "BarrierSet")
      .def_readonly("lower", &BarrierSet::lower)
      .def_readonly("upper", &BarrierSet::upper)
      .def_readonly("lower_prime", &BarrierSet::lower_prime)
      .def_readonly("upper_prime", &BarrierSet::upper_prime);

  m.def("build_grid", &build_grid);
  m.def("barrier_bounds", &barrier_bounds);
  m.def("truncation_index", [](const CheckpointGrid& g, int ell) {
    TruncationIndex ti = truncation_index(g, ell);
    return py::make_tuple(ti.m, ti.clamped);
  });

  py::class_<PrimeTable>(m, "PrimeTable")
      .def_readonly("limit", &PrimeTable::limit)
      .def_readonly("primes", &PrimeTable::primes)
      .def_readonly("prime_squares", &PrimeTable::prime_squares)
      .def("count", &PrimeTable::count);

  m.def("sieve_primes", &sieve_primes);
  m.def(
      "weighted_prime_sum",
      [](const PrimeTable& t, double sigma, std::optional<double> smoothing, bool squared,
         bool over_sq, std::optional<double> range) {
        WeightedSum w = weighted_prime_sum(t, sigma, smoothing, squared, over_sq, range);
        return py::make_tuple(w.value, w.terms, w.weight_descriptor);
      },
      py::arg("table"), py::arg("sigma"), py::arg("smoothing_log_x") = std::nullopt,
      py::arg("squared") = false, py::arg("over_prime_squares") = false,
      py::arg("range_limit") = std::nullopt);
  m.def("mertens_log_sum", [](const PrimeTable& t, double x) {
    return mertens_log_sum(t, x).value;
  });

  py::class_<DirichletPolySpec>(m, "DirichletPolySpec")
      .def_static("checkpoint", &DirichletPolySpec::checkpoint)
      .def_static("free_standing", &DirichletPolySpec::free_standing, py::arg("log_cutoff"),
                  py::arg("log_smoothing") = std::nullopt, py::arg("sigma") = std::nullopt)
      .def_readonly("sigma_j", &DirichletPolySpec::sigma_j)
      .def_readonly("log_t_j", &DirichletPolySpec::log_t_j)
      .def_readonly("log_t_ell", &DirichletPolySpec::log_t_ell);

  m.def("solve_lambda0", &solve_lambda0);
  m.def("partial_sum", &partial_sum);
  m.def(
      "sound_majorant",
      [](double log_x, double lambda, double log_t, const PrimeTable& table, double t) {
        MajorantParams params;
        params.log_x = log_x;
        params.lambda = lambda;
        params.log_t = log_t;
        MajorantValue v = sound_majorant(params, table, t);
        return py::make_tuple(v.value, v.prime_part, v.linear_term, v.slack_budget);
      },
      py::arg("log_x"), py::arg("lambda"), py::arg("log_t"), py::arg("table"), py::arg("t"));

  py::class_<ZetaPoint>(m, "ZetaPoint")
      .def_readonly("t", &ZetaPoint::t)
      .def_readonly("value", &ZetaPoint::value)
      .def_readonly("log_abs", &ZetaPoint::log_abs)
      .def_readonly("method", &ZetaPoint::method)
      .def_readonly("est_error", &ZetaPoint::est_error);

  m.def("zeta_half_line", &zeta_half_line);
  m.def("zeta_euler_maclaurin", &zeta_euler_maclaurin, py::arg("t"),
        py::arg("min_correction_terms") = 10);
  m.def("riemann_siegel_theta",
        [](double t) { return static_cast<double>(riemann_siegel_theta(t)); });
  m.def(
      "level_set_measure",
      [](double t_big, double v, long n, uint64_t seed, unsigned threads) {
        LevelSetEstimate est = level_set_measure(t_big, v, n, seed, threads);
        return py::make_tuple(est.fraction, est.std_err);
      },
      py::arg("t_big"), py::arg("v"), py::arg("n_samples"), py::arg("seed"),
      py::arg("threads") = 0);
  m.def(
      "moment_via_levelsets",
      [](double t_big, double k, const std::vector<double>& levels, long n, uint64_t seed,
         unsigned threads) {
        MomentPair p = moment_via_levelsets(t_big, k, levels, n, seed, threads);
        return py::make_tuple(p.direct, p.via_levels);
      },
      py::arg("t_big"), py::arg("k"), py::arg("levels"), py::arg("n_samples"), py::arg("seed"),
      py::arg("threads") = 0);
  m.def(
      "short_interval_max",
      [](double t_center, double gamma_exp, double log_t, double step) {
        ShortIntervalMax s = short_interval_max(t_center, gamma_exp, log_t, step);
        return py::make_tuple(s.max_abs, s.arg_h, s.benchmark);
      },
      py::arg("t_center"), py::arg("gamma_exp"), py::arg("log_t"), py::arg("grid_step") = 0.05);

  py::enum_<PhaseModel>(m, "PhaseModel")
      .value("steinhaus", PhaseModel::steinhaus)
      .value("gaussian", PhaseModel::gaussian);

  py::class_<PhaseAssignment>(m, "PhaseAssignment")
      .def_static("steinhaus", &PhaseAssignment::steinhaus)
      .def_static("gaussian", &PhaseAssignment::gaussian)
      .def_static("constant_phase", &PhaseAssignment::constant_phase)
      .def("angle", &PhaseAssignment::angle)
      .def("value", &PhaseAssignment::value);

  m.def("model_partial_sum", &model_partial_sum);
  m.def("sample_model_sums", &sample_model_sums, py::arg("spec"), py::arg("table"),
        py::arg("model"), py::arg("seed"), py::arg("trials"), py::arg("threads") = 0);
  m.def(
      "analytic_second_order",
      [](const DirichletPolySpec& a, const DirichletPolySpec& b, const PrimeTable& t) {
        SecondOrderStats s = analytic_second_order(a, b, t);
        return py::make_tuple(s.variance, s.covariance, s.predicted);
      });
  m.def(
      "mgf_bound_check",
      [](int k_idx, int ell_idx, double lambda, const CheckpointGrid& grid,
         const PrimeTable& table) {
        MgfBoundReport r = mgf_bound_check(k_idx, ell_idx, lambda, grid, table);
        return py::make_tuple(r.ratio, r.log_mgf, r.log_bound);
      });
  m.def("ks_statistic_vs_normal", &ks_statistic_vs_normal);
  m.def("bessel_i0", &bessel_i0_series);

  py::class_<IndicatorPoly>(m, "IndicatorPoly")
      .def_property_readonly("delta", &IndicatorPoly::delta)
      .def_property_readonly("a_exp", &IndicatorPoly::a_exp)
      .def_property_readonly("range_x", &IndicatorPoly::range_x)
      .def_property_readonly("degree", &IndicatorPoly::degree)
      .def_property_readonly("n_freq", &IndicatorPoly::n_freq)
      .def_property_readonly("slack", &IndicatorPoly::slack)
      .def_property_readonly("eps_total", &IndicatorPoly::eps_total)
      .def("eval_squared", [](const IndicatorPoly& p, double x) { return p.eval_squared(x); })
      .def("corrupt_coefficient", &IndicatorPoly::corrupt_coefficient)
      .def("degree_ceiling_ok", &IndicatorPoly::degree_ceiling_ok)
      .def("coeff_ceiling_ok", &IndicatorPoly::coeff_ceiling_ok)
      .def("to_json", &IndicatorPoly::to_json)
      .def_static("from_json", &IndicatorPoly::from_json);

  m.def("build_indicator_poly", &build_indicator_poly);
  m.def(
      "validate_sandwich",
      [](const IndicatorPoly& poly, long n_grid) {
        SandwichReport r = validate_sandwich(poly, n_grid);
        return py::make_tuple(r.grid_points, r.lower_violations, r.upper_violations,
                              r.max_excess);
      },
      py::arg("poly"), py::arg("n_grid") = 10000);

  py::enum_<TrajectorySource>(m, "TrajectorySource")
      .value("zeta_tau", TrajectorySource::zeta_tau)
      .value("steinhaus", TrajectorySource::steinhaus)
      .value("gaussian", TrajectorySource::gaussian);

  py::class_<TrajectoryBatch>(m, "TrajectoryBatch")
      .def_readonly("n", &TrajectoryBatch::n)
      .def("s", &TrajectoryBatch::s);

  m.def("sample_trajectories", &sample_trajectories, py::arg("grid"), py::arg("table"),
        py::arg("source"), py::arg("n"), py::arg("seed"), py::arg("threads") = 0);
  m.def(
      "partition_check",
      [](const TrajectoryBatch& batch, const BarrierSet& barriers, std::optional<double> v) {
        return partition_check(batch, barriers, v).to_json();
      },
      py::arg("batch"), py::arg("barriers"), py::arg("v") = std::nullopt);
  m.def(
      "torus_box_probability",
      [](const std::vector<double>& w, double lo, double hi, double tol) {
        TorusStatistic st;
        st.w = w;
        TorusProbability p = torus_box_probability({st}, {TorusBox{lo, hi}}, tol);
        return py::make_tuple(p.value, p.est_error);
      },
      py::arg("weights"), py::arg("lo"), py::arg("hi"), py::arg("abs_tol") = 1e-6);

  m.def("run_experiment", [](const std::string& experiment, const std::string& params_json,
                             uint64_t seed, unsigned threads) {
    ExperimentConfig cfg;
    cfg.experiment = experiment;
    cfg.params = nlohmann::json::parse(params_json);
    cfg.seed = seed;
    cfg.threads = threads;
    ExperimentReport rep = run_experiment(cfg);
    return py::make_tuple(rep.passed, rep.results_bytes());
  }, py::arg("experiment"), py::arg("params_json") = "{}", py::arg("seed") = 1,
     py::arg("threads") = 0);
}
