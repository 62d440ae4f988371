#include <pybind11/pybind11.h>
#include <pybind11/stl.h>

#include <cmath>

#include "pnrmzi/errors.hpp"
#include "pnrmzi/fisher.hpp"
#include "pnrmzi/optimize.hpp"
#include "pnrmzi/serialize.hpp"
#include "pnrmzi/simulate.hpp"

namespace py = pybind11;
using namespace pnrmzi;

namespace {

// None, "inf" and float('inf') mean perfect resolution; integers are finite thresholds.
Threshold to_threshold(const py::object& obj) {
  if (obj.is_none()) return Threshold::infinite();
  if (py::isinstance<py::str>(obj)) return Threshold::parse(obj.cast<std::string>());
  if (py::isinstance<py::float_>(obj)) {
    const double v = obj.cast<double>();
    if (std::isinf(v) && v > 0) return Threshold::infinite();
    if (v < 0 || v != std::floor(v)) throw py::value_error("n_res must be a non-negative integer or 'inf'");
    return Threshold::finite(static_cast<std::size_t>(v));
  }
  const long long n = obj.cast<long long>();
  if (n < 0) throw py::value_error("n_res must be non-negative");
  return Threshold::finite(static_cast<std::size_t>(n));
}

py::object parse_json(const std::string& text) {
  return py::module_::import("json").attr("loads")(text);
}

}  // namespace

PYBIND11_MODULE(_core, m) {
  m.doc() = "Fisher information of a coherent plus squeezed-vacuum interferometer with photon counting";

  auto base = py::register_exception<Error>(m, "Error", PyExc_RuntimeError);
  py::register_exception<ZeroProbability>(m, "ZeroProbability", base.ptr());
  py::register_exception<CutoffOverflow>(m, "CutoffOverflow", base.ptr());
  py::register_exception<SizeExceeded>(m, "SizeExceeded", base.ptr());
  py::register_exception<DomainError>(m, "DomainError", base.ptr());
  py::register_exception<InsufficientData>(m, "InsufficientData", base.ptr());
  py::register_exception<DegenerateLikelihood>(m, "DegenerateLikelihood", base.ptr());
  py::register_exception<MalformedInput>(m, "MalformedInput", PyExc_ValueError);

  py::class_<LightSource>(m, "LightSource")
      .def(py::init<>())
      .def(py::init([](double alpha_mag, double xi_mag, double theta_a, double theta_b) {
             return LightSource{alpha_mag, theta_a, xi_mag, theta_b};
           }),
           py::arg("alpha_mag"), py::arg("xi_mag"), py::arg("theta_a") = 0.0, py::arg("theta_b") = 0.0)
      .def_static("from_means", &LightSource::from_means, py::arg("mean_a"), py::arg("mean_b"))
      .def_static("from_split", &LightSource::from_split, py::arg("n_bar"), py::arg("alpha2"))
      .def_readwrite("alpha_mag", &LightSource::alpha_mag)
      .def_readwrite("theta_a", &LightSource::theta_a)
      .def_readwrite("xi_mag", &LightSource::xi_mag)
      .def_readwrite("theta_b", &LightSource::theta_b)
      .def_property_readonly("mean_a", &LightSource::mean_a)
      .def_property_readonly("mean_b", &LightSource::mean_b)
      .def_property_readonly("mean_photons", &LightSource::mean_photons)
      .def("phase_matched", &LightSource::phase_matched)
      .def("__repr__", [](const LightSource& s) {
        return "LightSource(mean_a=" + format_number(s.mean_a()) + ", mean_b=" + format_number(s.mean_b()) + ")";
      });

  py::class_<AmplitudeTable>(m, "AmplitudeTable")
      .def_readonly("cutoff", &AmplitudeTable::cutoff)
      .def_readonly("alpha_mag", &AmplitudeTable::alpha_mag)
      .def_readonly("xi_mag", &AmplitudeTable::xi_mag)
      .def("coherent_probability", &AmplitudeTable::coherent_probability)
      .def("squeezed_probability", &AmplitudeTable::squeezed_probability);

  py::class_<NPhotonState>(m, "NPhotonState")
      .def_readonly("total_n", &NPhotonState::total_n)
      .def_readonly("coeffs", &NPhotonState::coeffs)
      .def_readonly("gen_prob", &NPhotonState::gen_prob);

  m.def("coherent_amplitude", [](double a, std::size_t n) { return coherent_amplitude(a, n).value(); });
  m.def("squeezed_amplitude", [](double xi, std::size_t k) { return squeezed_amplitude(xi, k).value(); });
  m.def("build_amplitude_table", &build_amplitude_table, py::arg("source"),
        py::arg("tail_tol") = kDefaultTailTol, py::arg("cutoff_max") = kDefaultCutoffMax);
  m.def("generation_probability", &generation_probability, py::arg("amps"), py::arg("total_n"));
  m.def("postselect", &postselect, py::arg("amps"), py::arg("total_n"));

  m.def(
      "wigner_d_block",
      [](std::size_t n, double phi) {
        const RotationBlock b = wigner_d_block(n, phi);
        std::vector<std::vector<double>> rows(b.dim(), std::vector<double>(b.dim()));
        for (std::size_t i = 0; i < b.dim(); ++i) {
          for (std::size_t j = 0; j < b.dim(); ++j) rows[i][j] = b(i, j);
        }
        return rows;
      },
      py::arg("total_n"), py::arg("phi"));
  m.def("conditional_probabilities",
        py::overload_cast<const NPhotonState&, double>(&conditional_probabilities), py::arg("state"),
        py::arg("phi"));
  m.def("probability_derivatives", py::overload_cast<const NPhotonState&, double>(&probability_derivatives),
        py::arg("state"), py::arg("phi"));

  m.def("cfi_per_n_numeric", py::overload_cast<const NPhotonState&, double>(&cfi_per_n_numeric),
        py::arg("state"), py::arg("phi"));
  m.def("cfi_per_n_analytic", &cfi_per_n_analytic, py::arg("state"), py::arg("alpha_mag"), py::arg("xi_mag"));
  m.def("qfi_per_n_operator_oracle", &qfi_per_n_operator_oracle, py::arg("state"));

  m.def(
      "total_fisher_exact",
      [](const LightSource& src, const py::object& n_res, double tail_tol, double phi) {
        const AmplitudeTable amps = build_amplitude_table(src, tail_tol);
        FisherOptions opt;
        opt.phi = phi;
        return parse_json(to_json(total_fisher_exact(amps, src, to_threshold(n_res), opt)));
      },
      py::arg("source"), py::arg("n_res") = py::none(), py::arg("tail_tol") = kDefaultTailTol,
      py::arg("phi") = 0.7, "Full Fisher report as a dict");
  m.def("total_fisher_ideal", [](const LightSource& s) { return total_fisher_ideal(s).value(); });
  m.def(
      "total_fisher_approx",
      [](const LightSource& s, const py::object& n_res) { return total_fisher_approx(s, to_threshold(n_res)); },
      py::arg("source"), py::arg("n_res"));
  m.def("asymptotic_constant", [] { return asymptotic_constant().leading; });

  m.def(
      "optimize_single_component",
      [](double n_bar, double grid_step, std::optional<std::size_t> n_max) {
        return parse_json(to_json(optimize_single_component(
            n_bar, grid_step, n_max.value_or(default_single_component_n_max(n_bar)))));
      },
      py::arg("n_bar"), py::arg("grid_step") = 0.01, py::arg("n_max") = py::none());
  m.def(
      "optimize_alpha",
      [](double n_bar, const py::object& n_res, const std::string& engine, double grid_step) {
        OptimizeOptions opt;
        opt.grid_step = grid_step;
        const Threshold th = to_threshold(n_res);
        const Engine e = parse_engine(engine);
        return parse_json(to_json(optimize_alpha(n_bar, th, e, opt), n_bar, th, e));
      },
      py::arg("n_bar"), py::arg("n_res") = py::none(), py::arg("engine") = "exact",
      py::arg("grid_step") = 0.01);
  m.def(
      "fit_power_law",
      [](const std::vector<std::pair<double, double>>& pts) { return parse_json(to_json(fit_power_law(pts))); },
      py::arg("points"));

  m.def(
      "sample_clicks",
      [](const LightSource& src, const py::object& n_res, double phi, std::size_t count, std::uint64_t seed) {
        const AmplitudeTable amps = build_amplitude_table(src);
        const auto dist = full_outcome_distribution(amps, to_threshold(n_res), phi);
        py::list out;
        for (const auto& r : sample_clicks(dist, count, seed)) {
          if (r.is_overflow()) {
            out.append(py::none());
          } else {
            out.append(py::make_tuple(r.counts->n_a, r.counts->n_b));
          }
        }
        return out;
      },
      py::arg("source"), py::arg("n_res"), py::arg("phi"), py::arg("count"), py::arg("seed"),
      "Detection records as (n_a, n_b) tuples; None marks an overflow event");
  m.def(
      "crb_experiment",
      [](const LightSource& src, const py::object& n_res, double phi, std::size_t trials,
         std::size_t repetitions, std::uint64_t seed, double phi_step) {
        SimulationOptions opt;
        opt.phi_step = phi_step;
        const auto run = crb_experiment(src, to_threshold(n_res), phi, trials, repetitions, seed, opt);
        py::dict d = parse_json(to_json(run));
        d["estimates"] = run.estimates;
        return d;
      },
      py::arg("source"), py::arg("n_res"), py::arg("phi"), py::arg("trials"), py::arg("repetitions"),
      py::arg("seed"), py::arg("phi_step") = 1e-4);
}
