#include "ridgeless/data.hpp"
#include "ridgeless/errors.hpp"
#include "ridgeless/estimators.hpp"
#include "ridgeless/features.hpp"
#include "ridgeless/kernels.hpp"
#include "ridgeless/training.hpp"

#include <pybind11/eigen.h>
#include <pybind11/pybind11.h>
#include <pybind11/stl.h>

namespace py = pybind11;
using namespace ridgeless;

namespace {

py::dict trace_dict(const TrainTrace& trace) {
  std::vector<Index> iteration;
  std::vector<double> epoch, loss, frob;
  for (const auto& r : trace.records) {
    iteration.push_back(r.iteration);
    epoch.push_back(r.epoch);
    loss.push_back(r.train_loss);
    frob.push_back(r.trace_frobenius);
  }
  py::dict d;
  d["iteration"] = iteration;
  d["epoch"] = epoch;
  d["train_loss"] = loss;
  d["trace_frobenius"] = frob;
  d["diverged"] = trace.diverged;
  d["diagnostic"] = trace.diagnostic;
  return d;
}

SGDConfig sgd_config(Index batch_size, double learning_rate, Index iterations,
                     std::uint64_t seed, Index record_every) {
  SGDConfig cfg;
  cfg.batch_size = batch_size;
  cfg.learning_rate = learning_rate;
  cfg.iterations = iterations;
  cfg.seed = seed;
  cfg.record_every = record_every;
  return cfg;
}

}  // namespace

PYBIND11_MODULE(_core, m) {
  py::register_exception<DimensionError>(m, "DimensionError", PyExc_ValueError);
  py::register_exception<DomainError>(m, "DomainError", PyExc_ValueError);
  py::register_exception<InfeasibleError>(m, "InfeasibleError", PyExc_ValueError);

  py::class_<KernelSpec>(m, "KernelSpec")
      .def(py::init<double>(), py::arg("bandwidth"))
      .def_property_readonly("bandwidth", &KernelSpec::bandwidth);

  py::class_<FeatureMap>(m, "FeatureMap")
      .def_property_readonly("omega", &FeatureMap::omega)
      .def_property_readonly("phases", &FeatureMap::phases)
      .def_property_readonly("bandwidth", &FeatureMap::bandwidth)
      .def_property_readonly("scale", &FeatureMap::scale)
      .def_property_readonly("seed", &FeatureMap::seed)
      .def_property_readonly("input_dim", &FeatureMap::input_dim)
      .def_property_readonly("num_features", &FeatureMap::num_features)
      .def("__call__", &feature_map_apply, py::arg("x"))
      .def("with_omega", &FeatureMap::with_omega, py::arg("omega"));

  py::class_<KernelModel>(m, "KernelModel")
      .def_readonly("dual_coeffs", &KernelModel::dual_coeffs)
      .def_readonly("ridge", &KernelModel::ridge)
      .def("predict", [](const KernelModel& km, const Matrix& x) { return predict(km, x); });

  py::class_<RFModel>(m, "RFModel")
      .def_readonly("weights", &RFModel::weights)
      .def_readonly("features", &RFModel::features)
      .def("predict", [](const RFModel& rm, const Matrix& x) { return predict(rm, x); });

  py::class_<EffectiveRidge>(m, "EffectiveRidge")
      .def_readonly("lam", &EffectiveRidge::lambda)
      .def_readonly("ratio", &EffectiveRidge::ratio)
      .def_readonly("residual", &EffectiveRidge::residual);

  m.def("sample_feature_map", &sample_feature_map, py::arg("input_dim"), py::arg("num_features"),
        py::arg("bandwidth"), py::arg("seed"), py::arg("scale") = kUnbiasedScale);
  m.def("kernel_matrix", &kernel_matrix, py::arg("x"), py::arg("spec"));
  m.def("kernel_approx_error", &kernel_approx_error, py::arg("fm"), py::arg("x"), py::arg("spec"));
  m.def("effective_dimension",
        py::overload_cast<const Matrix&, double>(&effective_dimension), py::arg("k"),
        py::arg("lam"));
  m.def("effective_ridge",
        py::overload_cast<const Matrix&, Index, double>(&effective_ridge), py::arg("k"),
        py::arg("num_features"), py::arg("tol") = 1e-10);
  m.def("variance_factor", &variance_factor, py::arg("ratio"));

  m.def("fit_kernel_ridgeless",
        [](const Matrix& x, const Matrix& y, const KernelSpec& spec) {
          return fit_kernel_ridgeless(x, y, spec);
        },
        py::arg("x"), py::arg("y"), py::arg("spec"));
  m.def("fit_kernel_ridge", &fit_kernel_ridge, py::arg("x"), py::arg("y"), py::arg("spec"),
        py::arg("lam"));
  m.def("fit_rf_ridgeless",
        [](const Matrix& x, const Matrix& y, const FeatureMap& fm) {
          return fit_rf_ridgeless(x, y, fm);
        },
        py::arg("x"), py::arg("y"), py::arg("fm"));
  m.def("fit_rf_ridge", &fit_rf_ridge, py::arg("x"), py::arg("y"), py::arg("fm"), py::arg("lam"));
  m.def("gd_closed_form",
        [](const Matrix& x, const Matrix& y, const FeatureMap& fm, double gamma, Index t) {
          return gd_closed_form(x, y, fm, gamma, t).model;
        },
        py::arg("x"), py::arg("y"), py::arg("fm"), py::arg("gamma"), py::arg("t"));

  m.def("sgd_train",
        [](const Matrix& x, const Matrix& y, const FeatureMap& fm, Index batch_size,
           double learning_rate, Index iterations, std::uint64_t seed, Index record_every) {
          auto r = sgd_train(x, y, fm,
                             sgd_config(batch_size, learning_rate, iterations, seed, record_every));
          return py::make_tuple(r.model, trace_dict(r.trace));
        },
        py::arg("x"), py::arg("y"), py::arg("fm"), py::arg("batch_size"),
        py::arg("learning_rate"), py::arg("iterations"), py::arg("seed") = 0,
        py::arg("record_every") = 0);
  m.def("rftk_train",
        [](const Matrix& x, const Matrix& y, const FeatureMap& fm, Index batch_size,
           double learning_rate, Index iterations, double trace_weight, double omega_rate,
           Index omega_period, const std::string& loss, std::uint64_t seed, Index record_every) {
          RFTKConfig cfg;
          cfg.sgd = sgd_config(batch_size, learning_rate, iterations, seed, record_every);
          cfg.trace_weight = trace_weight;
          cfg.omega_rate = omega_rate;
          cfg.omega_period = omega_period;
          cfg.loss = parse_loss_kind(loss);
          auto r = rftk_train(x, y, fm, cfg);
          return py::make_tuple(r.model, trace_dict(r.trace));
        },
        py::arg("x"), py::arg("y"), py::arg("fm"), py::arg("batch_size"),
        py::arg("learning_rate"), py::arg("iterations"), py::arg("trace_weight"),
        py::arg("omega_rate"), py::arg("omega_period") = 1, py::arg("loss") = "squared",
        py::arg("seed") = 0, py::arg("record_every") = 0);

  m.def("synthetic_minmax",
        [](Index n, Index d, double noise_sd, std::uint64_t seed) {
          const Dataset ds = synthetic_minmax(n, d, noise_sd, seed);
          return py::make_tuple(ds.x, ds.y);
        },
        py::arg("n"), py::arg("d"), py::arg("noise_sd"), py::arg("seed"));
  m.def("synthetic_slab",
        [](Index n, Index d, std::uint64_t seed) {
          const Dataset ds = synthetic_slab(n, d, seed);
          return py::make_tuple(ds.x, ds.y);
        },
        py::arg("n"), py::arg("d"), py::arg("seed"));
}
