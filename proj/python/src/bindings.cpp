#include <pybind11/pybind11.h>
#include <pybind11/stl.h>

#include "dimrate/entropy.hpp"
#include "dimrate/errors.hpp"
#include "dimrate/gausstheory.hpp"
#include "dimrate/processes.hpp"
#include "dimrate/ratedistortion.hpp"
#include "dimrate/spectral.hpp"
#include "dimrate/verify.hpp"

namespace py = pybind11;
using namespace dimrate;

PYBIND11_MODULE(_dimrate, m) {
  m.doc() = "Information dimension rate laboratory (C++ core)";
  m.attr("__version__") = DIMRATE_VERSION;

  py::register_exception<NumericalError>(m, "NumericalError", PyExc_RuntimeError);

  py::class_<SpectralModel>(m, "SpectralModel")
      .def_static("flat", &SpectralModel::flat, py::arg("level") = 1.0, py::arg("mean") = 0.0)
      .def_static("band", &SpectralModel::band, py::arg("half_width"), py::arg("level"), py::arg("mean") = 0.0)
      .def_static("unit_band", &SpectralModel::unit_band, py::arg("half_width"), py::arg("mean") = 0.0)
      .def_static("ar1", &SpectralModel::ar1, py::arg("coefficient"), py::arg("innovation_variance") = 1.0,
                  py::arg("mean") = 0.0)
      .def_static("from_text", [](const std::string& text) { return spectral_model_from_text(text); })
      .def("density", &SpectralModel::density)
      .def("total_power", &SpectralModel::total_power)
      .def_property_readonly("mean", &SpectralModel::mean)
      .def("to_text", [](const SpectralModel& s) { return to_text(s); });

  m.def("autocovariance", [](const SpectralModel& s, std::int64_t lag) { return autocovariance(s, lag); });
  m.def("support_measure", [](const SpectralModel& s, double eps) { return support_measure(s, eps).measure; },
        py::arg("model"), py::arg("threshold") = 0.0);
  m.def("gaussian_id_rate", &gaussian_id_rate);
  m.def("szego_entropy_rate", [](const SpectralModel& s) {
    const auto r = szego_entropy_rate(s);
    return py::make_tuple(r.value, r.clipped);
  });

  m.def("quantize", &quantize, py::arg("x"), py::arg("m"));
  m.def("quantize_values", [](const std::vector<double>& v, std::int64_t mm) { return quantize_values(v, mm); });
  m.def("sample_gaussian", [](const SpectralModel& s, std::size_t n, std::uint64_t seed) {
    return sample_gaussian(s, n, seed).values;
  });
  m.def("sample_piecewise", [](double rho, std::size_t n, std::uint64_t seed) {
    PiecewiseSpec spec;
    spec.fresh_probability = rho;
    return sample_piecewise(spec, n, seed).values;
  }, py::arg("fresh_probability"), py::arg("n"), py::arg("seed"));

  py::class_<EntropyEstimate>(m, "EntropyEstimate")
      .def_readonly("value", &EntropyEstimate::value)
      .def_readonly("order", &EntropyEstimate::order)
      .def_readonly("samples", &EntropyEstimate::samples)
      .def_readonly("std_error", &EntropyEstimate::std_error);
  m.def("empirical_conditional_entropy",
        [](const std::vector<std::int64_t>& codes, std::size_t j, bool mm) {
          EntropyOptions o;
          o.miller_madow = mm;
          return empirical_conditional_entropy(codes, j, o);
        },
        py::arg("codes"), py::arg("order") = 0, py::arg("miller_madow") = false);
  m.def("markov_entropy_rate_exact", &markov_entropy_rate_exact);
  m.def("quantized_entropy_gaussian", [](double mu, double var, std::int64_t mm) {
    return quantized_entropy_iid(ScalarDensity::gaussian(mu, var), mm);
  });
  m.def("quantized_entropy_uniform", [](std::int64_t mm) {
    return quantized_entropy_iid(ScalarDensity::uniform(0.0, 1.0), mm);
  });

  m.def("reverse_waterfill", [](const SpectralModel& s, double d) {
    const auto w = reverse_waterfill_stationary(s, d);
    return py::make_tuple(w.rate, w.water_level);
  });
  m.def("vector_rd", [](const std::vector<double>& eig, double d) { return vector_rd(eig, d); });
  m.def("rd_dimension", [](const SpectralModel& s) {
    return rd_dimension_estimate(rd_curve(s, default_distortion_grid(s.total_power()))).dimension;
  });

  m.def("bussgang_a1", [](double mu, double var, std::int64_t mm) {
    const auto r = bussgang_a1(mu, var, mm);
    return py::make_tuple(r.a1, r.bound);
  });
  m.def("quantization_error_power", &quantization_error_power);
  m.def("prediction_variance", [](const SpectralModel& s, std::size_t k) { return prediction_variance(s, k).sigma2; });

  m.def("verify", [](int criterion) {
    const auto r = run_criterion(criterion);
    return py::make_tuple(r.pass(), summary_line(r));
  });
}
