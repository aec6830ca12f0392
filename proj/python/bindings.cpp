#include "regcalc/experiments.hpp"
#include "regcalc/noise.hpp"
#include "regcalc/regular_calculus.hpp"

#include <pybind11/eigen.h>
#include <pybind11/pybind11.h>
#include <pybind11/stl.h>

#include <optional>

namespace py = pybind11;
using namespace regcalc;

namespace {

using Vector = Eigen::VectorXd;
using Matrix = Eigen::MatrixXd;

ScalarPath scalar(const TimeGrid& grid, const Vector& v) {
  if (v.size() != grid.nodes()) throw DimensionError("path needs one value per grid node");
  return {grid, v};
}

SamplePath sample(const TimeGrid& grid, const Matrix& m) {
  if (m.rows() != grid.nodes()) throw DimensionError("path needs one row per grid node");
  return {grid, m};
}

Epsilon eps_of(const TimeGrid& grid, int m) {
  if (m > grid.steps()) throw std::invalid_argument("epsilon exceeds the horizon");
  return Epsilon::steps(m);
}

StreamSeed seed_of(std::uint64_t seed, std::uint64_t path, std::uint64_t stream) { return {seed, path, stream}; }

py::dict summary_dict(const SummaryRow& s) {
  py::dict d;
  d["statistic"] = s.statistic;
  d["value"] = s.value;
  d["comparison"] = s.comparison;
  d["threshold"] = s.threshold;
  d["threshold_high"] = s.threshold_high;
  d["fitted_rate"] = s.fitted_rate;
  d["pass"] = s.pass;
  return d;
}

}  // namespace

PYBIND11_MODULE(_core, m) {
  m.doc() = "regcalc core: paths, regularized estimators and experiments";

  py::register_exception<ConfigError>(m, "ConfigError", PyExc_ValueError);
  py::register_exception<ConvergenceError>(m, "ConvergenceError", PyExc_ArithmeticError);

  py::class_<TimeGrid>(m, "TimeGrid")
      .def(py::init<double, int>(), py::arg("horizon"), py::arg("steps"))
      .def_property_readonly("horizon", &TimeGrid::horizon)
      .def_property_readonly("dt", &TimeGrid::dt)
      .def_property_readonly("steps", &TimeGrid::steps)
      .def_property_readonly("nodes", &TimeGrid::nodes)
      .def("times", [](const TimeGrid& g) {
        Vector t(g.nodes());
        for (int j = 0; j < g.nodes(); ++j) t[j] = g.time(j);
        return t;
      })
      .def("__repr__", [](const TimeGrid& g) {
        return "TimeGrid(horizon=" + format_number(g.horizon()) + ", steps=" + std::to_string(g.steps()) + ")";
      });

  // ---- noise

  m.def("sample_brownian",
        [](const TimeGrid& g, std::uint64_t seed, std::uint64_t path, std::uint64_t stream) -> Vector {
          return sample_brownian(g, seed_of(seed, path, stream)).scalar().values;
        },
        py::arg("grid"), py::arg("seed"), py::arg("path") = 0, py::arg("stream") = 0);
  m.def("sample_q_wiener",
        [](const TimeGrid& g, const Vector& lambdas, std::uint64_t seed, std::uint64_t path, std::uint64_t stream)
            -> Matrix { return sample_q_wiener(g, QSpectrum(lambdas), seed_of(seed, path, stream)).path.values; },
        py::arg("grid"), py::arg("lambdas"), py::arg("seed"), py::arg("path") = 0, py::arg("stream") = 0);
  m.def("sample_fbm",
        [](const TimeGrid& g, double hurst, std::uint64_t seed, std::uint64_t path, std::uint64_t stream) -> Vector {
          return sample_fbm(g, hurst, seed_of(seed, path, stream)).scalar().values;
        },
        py::arg("grid"), py::arg("hurst"), py::arg("seed"), py::arg("path") = 0, py::arg("stream") = 0);
  m.def("holder_exponent_estimate",
        [](const TimeGrid& g, const Vector& x, std::vector<int> lags, const std::string& statistic) {
          if (statistic != "rms" && statistic != "max") throw std::invalid_argument("statistic must be rms or max");
          return holder_exponent_estimate(scalar(g, x), lags,
                                          statistic == "rms" ? HolderStatistic::rms_increment
                                                             : HolderStatistic::max_increment);
        },
        py::arg("grid"), py::arg("x"), py::arg("lags") = dyadic_lags(6), py::arg("statistic") = "rms");

  // ---- tensor algebra

  m.def("projective_norm", [](const Matrix& u) { return projective_norm(TensorElement(u)); }, py::arg("u"));
  m.def("trace_pair", [](const Matrix& op, const Matrix& u) { return trace_pair(op, TensorElement(u)); },
        py::arg("op"), py::arg("u"));
  m.def("dual_graph_norm",
        [](const Vector& h, const Vector& mu) { return dual_graph_norm(SpectralVector(h), DiagonalGenerator(mu)); },
        py::arg("h"), py::arg("mu"));

  // ---- mild processes

  py::class_<MildPath>(m, "MildPath")
      .def_property_readonly("X", [](const MildPath& p) -> Matrix { return p.X.values; })
      .def_property_readonly("noise", [](const MildPath& p) -> Matrix { return p.noise->path.values; })
      .def_property_readonly("stoch_int", [](const MildPath& p) -> Matrix { return p.stoch_int.values; })
      .def_property_readonly("drift_int", [](const MildPath& p) -> Matrix { return p.drift_int.values; })
      .def("martingale_part", [](const MildPath& p) -> Matrix { return p.martingale_part().values; })
      .def("remainder", [](const MildPath& p) -> Matrix { return compute_remainder(p).values; });

  m.def("simulate_heat",
        [](const TimeGrid& g, int modes, std::uint64_t seed, std::uint64_t path, double sigma, double q_alpha,
           std::optional<Vector> x0, std::optional<Vector> mu) {
          if (modes < 1) throw std::invalid_argument("modes must be >= 1");
          Vector start = x0.value_or(Vector::Zero(modes));
          auto spec = std::make_shared<ConvolutionSpec>(ConvolutionSpec{
              SpectralVector(start), Drift::zero(modes), Diffusion::constant_diagonal(Vector::Constant(modes, sigma)),
              mu ? DiagonalGenerator(*mu) : DiagonalGenerator::dirichlet_laplacian(modes),
              QSpectrum::power_law(modes, q_alpha)});
          auto noise = std::make_shared<const NoisePath>(sample_q_wiener(g, spec->q, seed_of(seed, path, 0)));
          return simulate_mild(spec, noise);
        },
        "Exponential Euler for dX = AX dt + sigma dW_Q with A the Dirichlet Laplacian unless mu is given.",
        py::arg("grid"), py::arg("modes"), py::arg("seed"), py::arg("path") = 0, py::arg("sigma") = 1.0,
        py::arg("q_alpha") = 2.0, py::arg("x0") = py::none(), py::arg("mu") = py::none());
  m.def("ondrejat_check",
        [](const MildPath& p, const Vector& z) -> Vector { return ondrejat_check(p, SpectralVector(z)).residual; },
        py::arg("path"), py::arg("z"));

  // ---- regularized estimators (eps given as a multiple of dt)

  m.def("forward_integral_eps",
        [](const TimeGrid& g, const Matrix& x, const Matrix& y, int eps) -> py::object {
          const bool xs = x.cols() == 1, ys = y.cols() == 1;
          if (xs && ys) return py::cast(forward_integral_eps(scalar(g, x.col(0)), scalar(g, y.col(0)), eps_of(g, eps)));
          if (xs) return py::cast(forward_integral_eps(scalar(g, x.col(0)), sample(g, y), eps_of(g, eps)).values);
          return py::cast(forward_integral_eps(sample(g, x), sample(g, y), eps_of(g, eps)));
        },
        py::arg("grid"), py::arg("x"), py::arg("y"), py::arg("eps_steps"));
  m.def("ito_sum",
        [](const TimeGrid& g, const Matrix& x, const Matrix& y) -> Vector {
          if (x.cols() == 1 && y.cols() == 1) return ito_sum(scalar(g, x.col(0)), scalar(g, y.col(0)));
          return ito_sum(sample(g, x), sample(g, y));
        },
        py::arg("grid"), py::arg("x"), py::arg("m"));
  m.def("covariation_eps",
        [](const TimeGrid& g, const Vector& x, const Vector& y, int eps) {
          return covariation_eps(scalar(g, x), scalar(g, y), eps_of(g, eps));
        },
        py::arg("grid"), py::arg("x"), py::arg("y"), py::arg("eps_steps"));
  m.def("scalar_qv_eps",
        [](const TimeGrid& g, const Matrix& x, int eps, std::optional<Vector> mu) {
          if (!mu) return scalar_qv_eps(sample(g, x), eps_of(g, eps), QvNorm::hilbert);
          const DiagonalGenerator gen(*mu);
          return scalar_qv_eps(sample(g, x), eps_of(g, eps), QvNorm::dual_graph, &gen);
        },
        "Hilbert norm by default; passing mu switches to the dual graph norm.", py::arg("grid"), py::arg("x"),
        py::arg("eps_steps"), py::arg("mu") = py::none());
  m.def("tensor_cov_eps",
        [](const TimeGrid& g, const Matrix& x, const Matrix& y, int eps) -> Matrix {
          return tensor_cov_eps_final(sample(g, x), sample(g, y), eps_of(g, eps)).mat();
        },
        "Value at the horizon.", py::arg("grid"), py::arg("x"), py::arg("y"), py::arg("eps_steps"));
  m.def("a_eps_statistic",
        [](const TimeGrid& g, const Matrix& x, const Matrix& y, int eps, const Vector& mu) {
          return a_eps_statistic(sample(g, x), sample(g, y), eps_of(g, eps), DiagonalGenerator(mu));
        },
        py::arg("grid"), py::arg("x"), py::arg("y"), py::arg("eps_steps"), py::arg("mu"));
  m.def("young_integral",
        [](const TimeGrid& g, const Vector& x, const Vector& y, int levels, double rel_tol, bool strict) {
          YoungOptions o;
          o.levels = levels;
          o.rel_tol = rel_tol;
          o.strict = strict;
          const YoungResult r = young_integral(scalar(g, x), scalar(g, y), o);
          py::dict d;
          d["value"] = r.value;
          d["level_values"] = r.level_values;
          d["cauchy_gap"] = r.cauchy_gap;
          d["holder_x"] = r.holder_x;
          d["holder_y"] = r.holder_y;
          d["converged"] = r.converged;
          return d;
        },
        py::arg("grid"), py::arg("x"), py::arg("y"), py::arg("levels") = 4, py::arg("rel_tol") = 1e-3,
        py::arg("strict") = true);

  // ---- configuration and experiments

  py::class_<RunConfig>(m, "RunConfig")
      .def(py::init<>())
      .def("set", [](RunConfig& c, const std::string& key, const std::string& value) { apply_setting(c, key, value); })
      .def("validate", [](const RunConfig& c) { validate(c); })
      .def_readwrite("modes", &RunConfig::modes)
      .def_readwrite("dt", &RunConfig::dt)
      .def_readwrite("n_paths", &RunConfig::n_paths)
      .def_readwrite("master_seed", &RunConfig::master_seed)
      .def_readwrite("experiments", &RunConfig::experiments)
      .def_readwrite("output_dir", &RunConfig::output_dir);
  m.def("parse_config", &parse_config, py::arg("text"));
  m.def("load_config", &load_config, py::arg("path"));
  m.def("run_experiment",
        [](const std::string& id, const RunConfig& c, int threads) {
          ExperimentResult r;
          {
            py::gil_scoped_release release;
            r = run_experiment(id, c, threads);
          }
          py::list summary;
          for (const auto& s : r.summary) summary.append(summary_dict(s));
          py::dict d;
          d["id"] = r.id;
          d["anchor"] = r.anchor;
          d["pass"] = r.pass();
          d["summary"] = summary;
          d["rows"] = r.rows.size();
          return d;
        },
        py::arg("id"), py::arg("config"), py::arg("threads") = 1);
}
