#include <pybind11/complex.h>
#include <pybind11/numpy.h>
#include <pybind11/pybind11.h>
#include <pybind11/stl.h>

#include <tuple>

#include "bimodal/analysis.hpp"
#include "bimodal/errors.hpp"
#include "bimodal/propagators.hpp"
#include "bimodal/sequences.hpp"

namespace py = pybind11;
using namespace bimodal;

namespace {

using ComplexArray = py::array_t<Complex, py::array::c_style | py::array::forcecast>;

ComplexArray to_numpy(const Propagator& u) {
  ComplexArray out({kDim, kDim});
  auto m = out.mutable_unchecked<2>();
  for (std::size_t i = 0; i < kDim; ++i)
    for (std::size_t j = 0; j < kDim; ++j) m(i, j) = u(i, j);
  return out;
}

ComplexArray to_numpy(const StateVector& s) {
  ComplexArray out(std::vector<py::ssize_t>{kDim});
  auto m = out.mutable_unchecked<1>();
  for (std::size_t i = 0; i < kDim; ++i) m(i) = s[i];
  return out;
}

Propagator propagator_from(const ComplexArray& a) {
  if (a.ndim() != 2 || a.shape(0) != 8 || a.shape(1) != 8) throw py::value_error("expected an 8x8 array");
  auto m = a.unchecked<2>();
  Propagator u;
  for (std::size_t i = 0; i < kDim; ++i)
    for (std::size_t j = 0; j < kDim; ++j) u(i, j) = m(i, j);
  return u;
}

StateVector state_from(const ComplexArray& a) {
  if (a.ndim() != 1 || a.shape(0) != 8) throw py::value_error("expected a length-8 vector");
  auto m = a.unchecked<1>();
  StateVector s;
  for (std::size_t i = 0; i < kDim; ++i) s[i] = m(i);
  return s;
}

Window window_named(const ExperimentParams& p, const std::string& which) {
  if (which == "source") return source_window(p);
  if (which == "probe") return probe_window(p);
  throw py::value_error("window must be 'source' or 'probe'");
}

std::vector<Interval> intervals_from(const std::vector<std::tuple<std::string, double, double>>& raw) {
  std::vector<Interval> out;
  for (const auto& [label, lo, hi] : raw) out.push_back({label, lo, hi});
  return out;
}

py::array_t<double> samples_to_numpy(const std::vector<Sample>& s) {
  py::array_t<double> out({s.size(), std::size_t{2}});
  auto m = out.mutable_unchecked<2>();
  for (std::size_t k = 0; k < s.size(); ++k) {
    m(k, 0) = s[k].t;
    m(k, 1) = s[k].p;
  }
  return out;
}

}  // namespace

PYBIND11_MODULE(_core, m) {
  m.doc() = "Bimodal-cavity detuning simulator (compiled core)";

  py::register_exception<InvalidParams>(m, "InvalidParams", PyExc_ValueError);
  py::register_exception<ConvergenceError>(m, "ConvergenceError", PyExc_ArithmeticError);
  py::register_exception<FitError>(m, "FitError", PyExc_RuntimeError);
  py::register_exception<IoError>(m, "IoError", PyExc_OSError);

  py::enum_<Model>(m, "Model")
      .value("stepwise", Model::stepwise)
      .value("smooth", Model::smooth)
      .value("channel", Model::channel);
  py::enum_<ProfileShape>(m, "ProfileShape")
      .value("linear", ProfileShape::linear)
      .value("raised_cosine", ProfileShape::raised_cosine);
  py::enum_<SwitchShape>(m, "SwitchShape")
      .value("step", SwitchShape::step)
      .value("raised_cosine", SwitchShape::raised_cosine);
  py::enum_<FitKind>(m, "FitKind")
      .value("plain_cosine", FitKind::plain_cosine)
      .value("damped_cosine", FitKind::damped_cosine);

  m.def("khz_to_angular", &khz_to_angular, py::arg("khz"));
  m.def("angular_to_khz", &angular_to_khz, py::arg("omega"));

  py::class_<ExperimentParams>(m, "ExperimentParams")
      .def(py::init<>())
      .def_readwrite("omega", &ExperimentParams::omega)
      .def_readwrite("delta", &ExperimentParams::delta)
      .def_readwrite("lambda_coupling", &ExperimentParams::lambda_coupling)
      .def_readwrite("t_switch", &ExperimentParams::t_switch)
      .def_readwrite("model", &ExperimentParams::model)
      .def_readwrite("profile_shape", &ExperimentParams::profile_shape)
      .def_readwrite("switch_shape", &ExperimentParams::switch_shape)
      .def_readwrite("ode_step", &ExperimentParams::ode_step)
      .def("validate", &ExperimentParams::validate)
      .def("transit_time", &ExperimentParams::transit_time)
      .def("ideal_phase", &ExperimentParams::ideal_phase)
      .def("__repr__", [](const ExperimentParams& p) {
        return "ExperimentParams(model=" + std::string(to_string(p.model)) + ", t_switch=" +
               std::to_string(p.t_switch) + ")";
      });

  // Propagators, as 8x8 complex arrays in the V1..V8 basis.
  m.def("u1_resonant", [](double t, double omega) { return to_numpy(u1_resonant(t, omega)); }, py::arg("t"),
        py::arg("omega"));
  m.def("u2_resonant", [](double t, double omega, double delta) { return to_numpy(u2_resonant(t, omega, delta)); },
        py::arg("t"), py::arg("omega"), py::arg("delta"));
  m.def("u3_free", [](double t, double delta) { return to_numpy(u3_free(t, delta)); }, py::arg("t"),
        py::arg("delta"));
  m.def("u4_probe_mode1",
        [](double t, double omega, double delta) { return to_numpy(u4_probe_mode1(t, omega, delta)); }, py::arg("t"),
        py::arg("omega"), py::arg("delta"));
  m.def("u_minus", [](const ExperimentParams& p, const std::string& w) { return to_numpy(u_minus(p, window_named(p, w))); },
        py::arg("params"), py::arg("window") = "source");
  m.def("u_plus", [](const ExperimentParams& p, const std::string& w) { return to_numpy(u_plus(p, window_named(p, w))); },
        py::arg("params"), py::arg("window") = "source");
  m.def("u_cross", [](const ExperimentParams& p, const std::string& w) { return to_numpy(u_cross(p, window_named(p, w))); },
        py::arg("params"), py::arg("window") = "source");
  m.def("run_source", [](const ExperimentParams& p) { return to_numpy(run_source(p)); }, py::arg("params"));
  m.def("run_probe", [](const ExperimentParams& p) { return to_numpy(run_probe(p)); }, py::arg("params"));
  m.def("unitarity_defect", [](const ComplexArray& u) { return unitarity_defect(propagator_from(u)); }, py::arg("u"));

  py::class_<Timeline>(m, "Timeline")
      .def(py::init<const ExperimentParams&>(), py::arg("params"))
      .def("probability", &Timeline::probability, py::arg("T"))
      .def("probabilities",
           [](const Timeline& tl, const py::array_t<double, py::array::forcecast>& T) {
             auto in = T.unchecked<1>();
             py::array_t<double> out(std::vector<py::ssize_t>{in.shape(0)});
             auto o = out.mutable_unchecked<1>();
             for (py::ssize_t k = 0; k < in.shape(0); ++k) o(k) = tl.probability(in(k));
             return out;
           },
           py::arg("T"))
      .def_property_readonly("mid_state", [](const Timeline& tl) { return to_numpy(tl.mid_state()); })
      .def_property_readonly("source", [](const Timeline& tl) { return to_numpy(tl.source()); })
      .def_property_readonly("probe", [](const Timeline& tl) { return to_numpy(tl.probe()); })
      .def_property_readonly("factor_names", [](const Timeline& tl) {
        std::vector<std::string> names;
        for (const auto& f : tl.factors()) names.push_back(f.name);
        return names;
      });

  m.def(
      "run_full",
      [](const ExperimentParams& p, double T) {
        const SequenceResult r = run_full(p, T);
        py::dict d;
        d["p_excited"] = r.p_excited;
        d["final_state"] = to_numpy(r.final_state);
        d["mid_state"] = to_numpy(r.mid_state);
        return d;
      },
      py::arg("params"), py::arg("T"));
  m.def("ideal_probability", &ideal_probability, py::arg("params"), py::arg("T"));
  m.def("schmidt_coefficients", [](const ComplexArray& s) { return schmidt_coefficients(state_from(s)); },
        py::arg("state"));

  m.def(
      "default_intervals",
      [] {
        std::vector<std::tuple<std::string, double, double>> out;
        for (const auto& iv : default_intervals()) out.emplace_back(iv.label, iv.lo, iv.hi);
        return out;
      });
  m.def(
      "sample_probability",
      [](const ExperimentParams& p, double lo, double hi, std::size_t n) {
        return samples_to_numpy(sample_probability(p, Interval{"", lo, hi}, n));
      },
      py::arg("params"), py::arg("lo"), py::arg("hi"), py::arg("n_points") = 91);
  m.def(
      "fit_cosine",
      [](const py::array_t<double, py::array::forcecast>& t, const py::array_t<double, py::array::forcecast>& p,
         double omega_hint, FitKind kind, double alpha, double beta, double free_start) {
        if (t.ndim() != 1 || p.ndim() != 1 || t.shape(0) != p.shape(0))
          throw py::value_error("t and p must be 1-d arrays of equal length");
        std::vector<Sample> samples;
        auto tv = t.unchecked<1>();
        auto pv = p.unchecked<1>();
        for (py::ssize_t k = 0; k < tv.shape(0); ++k) samples.push_back({tv(k), pv(k)});
        const FitResult r = fit_cosine(samples, FitModel{kind, alpha, beta, free_start}, omega_hint);
        py::dict d;
        d["omega_fit"] = r.omega_fit;
        d["phi_fit"] = r.phi_fit;
        d["amplitude"] = r.amplitude;
        d["residual_rms"] = r.residual_rms;
        return d;
      },
      py::arg("t"), py::arg("p"), py::arg("omega_hint"), py::arg("kind") = FitKind::plain_cosine,
      py::arg("alpha") = 0.0, py::arg("beta") = 0.0, py::arg("free_start") = 0.0);
  m.def("unwrap_phase", &unwrap_phase, py::arg("phi_raw"), py::arg("reference"));
  m.def(
      "sweep_switch_time",
      [](const ExperimentParams& p, const std::vector<double>& grid,
         const std::vector<std::tuple<std::string, double, double>>& intervals, std::size_t n_points) {
        const auto ivs = intervals_from(intervals);
        std::vector<std::tuple<double, std::string, double, double>> out;
        for (const auto& r : sweep_switch_time(p, grid, ivs, n_points))
          out.emplace_back(r.t_switch, r.interval, r.omega_rel, r.phi_rel);
        return out;
      },
      py::arg("params"), py::arg("grid"), py::arg("intervals"), py::arg("n_points") = 91);
}
