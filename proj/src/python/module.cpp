#include <pybind11/complex.h>
#include <pybind11/functional.h>
#include <pybind11/pybind11.h>
#include <pybind11/stl.h>

#include "hmlab/chaos.hpp"
#include "hmlab/convolution.hpp"
#include "hmlab/eigen.hpp"
#include "hmlab/errors.hpp"
#include "hmlab/io.hpp"
#include "hmlab/multiplier.hpp"
#include "hmlab/transform.hpp"

namespace py = pybind11;
using namespace hmlab;

namespace {

RadialFunction radial_from_values(const ManifoldModel& model,
                                  std::vector<cplx> values,
                                  std::string label) {
  if (values.size() != model.grid().size())
    throw InputError("values length must equal the model grid size");
  RadialFunction f;
  f.grid = model.grid_ptr();
  f.values = std::move(values);
  f.label = std::move(label);
  return f;
}

}  // namespace

PYBIND11_MODULE(_hmlab, m) {
  m.doc() = "radial harmonic analysis and multiplier dynamics on model "
            "manifolds";

  py::register_exception<InputError>(m, "InputError", PyExc_ValueError);
  py::register_exception<StateError>(m, "StateError", PyExc_RuntimeError);
  py::register_exception<NumericalError>(m, "NumericalError",
                                         PyExc_ArithmeticError);

  py::class_<ManifoldModel>(m, "ManifoldModel")
      .def_property_readonly("dimension", &ManifoldModel::dimension)
      .def_property_readonly("rho", &ManifoldModel::rho)
      .def_property_readonly("r_max", &ManifoldModel::r_max)
      .def_property_readonly("calibrated", &ManifoldModel::calibrated)
      .def_property_readonly(
          "grid_nodes",
          [](const ManifoldModel& mm) { return mm.grid().nodes; })
      .def_property_readonly(
          "grid_weights",
          [](const ManifoldModel& mm) { return mm.grid().weights; })
      .def("density", &ManifoldModel::density, py::arg("r"));

  py::class_<RadialFunction>(m, "RadialFunction")
      .def_readonly("values", &RadialFunction::values)
      .def_readonly("label", &RadialFunction::label)
      .def_property_readonly(
          "radii", [](const RadialFunction& f) { return f.grid->nodes; });

  py::class_<SpectralFunction>(m, "SpectralFunction")
      .def_readonly("lambda_nodes", &SpectralFunction::lambda_nodes)
      .def_readonly("values", &SpectralFunction::values)
      .def_readonly("strip_halfwidth", &SpectralFunction::strip_halfwidth)
      .def_readonly("tail_estimate", &SpectralFunction::tail_estimate);

  py::class_<Multiplier>(m, "Multiplier")
      .def_readonly("label", &Multiplier::label);

  py::class_<Rotation>(m, "Rotation")
      .def(py::init([](long long num, long long den) {
             return make_rotation(num, den);
           }),
           py::arg("num"), py::arg("den"))
      .def_readonly("num", &Rotation::num)
      .def_readonly("den", &Rotation::den)
      .def("__repr__", &format_rotation);

  py::class_<UnimodularRoot>(m, "UnimodularRoot")
      .def_readonly("rotation", &UnimodularRoot::rotation)
      .def_readonly("lam", &UnimodularRoot::lambda)
      .def_readonly("residual", &UnimodularRoot::residual)
      .def_readonly("found", &UnimodularRoot::found);

  py::class_<ChaosCertificate>(m, "ChaosCertificate")
      .def_readonly("nu", &ChaosCertificate::nu)
      .def_readonly("lambda0", &ChaosCertificate::lambda0)
      .def_readonly("p", &ChaosCertificate::p)
      .def_readonly("margin", &ChaosCertificate::margin)
      .def_readonly("u_plus", &ChaosCertificate::u_plus)
      .def_readonly("u_minus", &ChaosCertificate::u_minus)
      .def_readonly("roots", &ChaosCertificate::roots)
      .def_property_readonly(
          "verdict",
          [](const ChaosCertificate& c) { return to_string(c.verdict); })
      .def("to_json", &certificate_to_json);

  py::class_<PeriodicPoint>(m, "PeriodicPoint")
      .def_readonly("period", &PeriodicPoint::period);

  m.def(
      "make_state",
      [](std::vector<cplx> lambdas, std::vector<cplx> coeffs) {
        if (lambdas.size() != coeffs.size())
          throw InputError("make_state: mismatched list lengths");
        if (lambdas.empty()) throw InputError("make_state: empty state");
        PeriodicPoint state;
        for (std::size_t j = 0; j < lambdas.size(); ++j)
          state.terms.push_back({lambdas[j], Rotation{0, 1}, 0.0, coeffs[j]});
        return state;
      },
      py::arg("lambdas"), py::arg("coeffs"),
      "spectral combination for simulate_orbit (centers at the basepoint)");

  py::class_<OrbitRecord>(m, "OrbitRecord")
      .def_readonly("norms", &OrbitRecord::norms)
      .def_readonly("log_norms", &OrbitRecord::log_norms)
      .def_readonly("component_moduli", &OrbitRecord::component_moduli)
      .def_readonly("labels", &OrbitRecord::labels)
      .def_readonly("overflowed", &OrbitRecord::overflowed);

  m.def(
      "build_model",
      [](int n, double r_max, int grid_size) {
        return build_model(ModelKind::hyperbolic, n, r_max, grid_size);
      },
      py::arg("n"), py::arg("r_max") = 12.0, py::arg("grid_size") = 1024,
      "hyperbolic model H^n");
  m.def(
      "calibrate",
      [](const ManifoldModel& model, double lambda_max, int num_nodes) {
        SpectralSetup setup;
        setup.lambda_max = lambda_max;
        setup.num_nodes = std::size_t(num_nodes);
        return calibrate_inversion(model, setup);
      },
      py::arg("model"), py::arg("lambda_max") = 50.0,
      py::arg("num_nodes") = 2048,
      "calibrate the inversion normalization; returns kappa");

  m.def("eigenfunction_value", &eigenfunction_value, py::arg("model"),
        py::arg("lam"), py::arg("r"));
  m.def("eigenfunction_profile", &eigenfunction_profile, py::arg("model"),
        py::arg("lam"));
  m.def(
      "ode_residual",
      [](const ManifoldModel& model, cplx lam) {
        return radial_eigenfunction(model, lam).ode_residual;
      },
      py::arg("model"), py::arg("lam"));
  m.def(
      "c_function",
      [](const ManifoldModel& model, double lam) {
        const CFunctionSample s = c_function(model, lam);
        return py::make_tuple(s.c_value, s.fit_residual);
      },
      py::arg("model"), py::arg("lam"));

  m.def("make_radial", &radial_from_values, py::arg("model"),
        py::arg("values"), py::arg("label") = "");
  m.def("gaussian_bump", &gaussian_bump, py::arg("model"), py::arg("width"),
        py::arg("normalized") = true);
  m.def("lp_norm", &lp_norm_radial, py::arg("model"), py::arg("f"),
        py::arg("p"));
  m.def("transform", &spherical_transform_grid, py::arg("model"),
        py::arg("f"));
  m.def("inverse_transform", &inverse_transform, py::arg("model"),
        py::arg("spec"));
  m.def("plancherel_weight", &plancherel_weight, py::arg("model"),
        py::arg("lam"));

  m.def("convolve", &convolve_radial, py::arg("model"), py::arg("f"),
        py::arg("g"));
  m.def(
      "convolve_direct",
      [](const ManifoldModel& model, const RadialFunction& f,
         const RadialFunction& g, std::vector<double> distances) {
        return convolve_direct(model, f, g, distances);
      },
      py::arg("model"), py::arg("f"), py::arg("g"), py::arg("distances"));

  m.def("heat_multiplier", &heat_multiplier, py::arg("t"));
  m.def("sphere_mean_multiplier", &sphere_mean_multiplier, py::arg("r0"));
  m.def("kernel_multiplier", &kernel_multiplier, py::arg("g"),
        py::arg("label") = "kernel");
  m.def("symbol_eval", &symbol_eval, py::arg("model"), py::arg("mult"),
        py::arg("lam"));
  m.def("apply_multiplier", &apply_multiplier, py::arg("model"),
        py::arg("mult"), py::arg("f"));
  m.def("apply_multiplier_kernel_side", &apply_multiplier_kernel_side,
        py::arg("model"), py::arg("mult"), py::arg("f"));
  m.def("heat_kernel_profile", &heat_kernel_profile, py::arg("model"),
        py::arg("t"));

  m.def("chaos_threshold", &chaos_threshold, py::arg("model"), py::arg("p"));
  m.def("solve_strip_parameter", &solve_strip_parameter, py::arg("model"),
        py::arg("p"), py::arg("c"));
  m.def("certify_mixing", &certify_mixing, py::arg("model"), py::arg("mult"),
        py::arg("nu"), py::arg("lambda0"), py::arg("p"));
  m.def(
      "find_unimodular_roots",
      [](const ManifoldModel& model, const Multiplier& mult, cplx nu,
         cplx lambda0, std::vector<Rotation> rotations, double p) {
        return find_unimodular_roots(model, mult, nu, lambda0, rotations, p);
      },
      py::arg("model"), py::arg("mult"), py::arg("nu"), py::arg("lambda0"),
      py::arg("rotations"), py::arg("p"));
  m.def("attach_roots", &attach_roots, py::arg("cert"), py::arg("roots"));
  m.def(
      "build_periodic_point",
      [](std::vector<UnimodularRoot> roots, std::vector<double> centers,
         std::vector<cplx> coeffs) {
        return build_periodic_point(roots, centers, coeffs);
      },
      py::arg("roots"), py::arg("centers"), py::arg("coeffs"));
  m.def("diagonal_defect", &diagonal_defect, py::arg("model"), py::arg("mult"),
        py::arg("nu"), py::arg("point"));
  m.def("verify_periodic", &verify_periodic, py::arg("model"), py::arg("mult"),
        py::arg("point"), py::arg("nu"),
        py::call_guard<py::gil_scoped_release>());
  m.def("simulate_orbit", &simulate_orbit, py::arg("model"), py::arg("mult"),
        py::arg("nu"), py::arg("initial"), py::arg("steps"),
        py::arg("p") = 2.0);
}
