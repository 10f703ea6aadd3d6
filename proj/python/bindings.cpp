#include <pybind11/pybind11.h>
#include <pybind11/stl.h>

#include "echolab/classical_rotor.hpp"
#include "echolab/config.hpp"
#include "echolab/decay.hpp"
#include "echolab/error.hpp"
#include "echolab/glauber.hpp"
#include "echolab/harness.hpp"
#include "echolab/qkr.hpp"

namespace py = pybind11;
using namespace echolab;

namespace {

py::dict series_dict(const DecaySeries& s) {
  py::dict d;
  d["t"] = s.times;
  d["value"] = s.values;
  d["stderr"] = s.stderrs;
  return d;
}

py::dict fit_dict(const RateFit& f) {
  py::dict d;
  d["rate"] = f.rate;
  d["rate_stderr"] = f.rate_stderr;
  d["intercept"] = f.intercept;
  d["residual"] = f.residual;
  d["t_min"] = f.window.t_min;
  d["t_max"] = f.window.t_max;
  d["points"] = f.points;
  return d;
}

Region make_region(const std::vector<double>& r) {
  if (r.size() != 4) throw InvalidArgument("region needs theta_lo, theta_hi, p_lo, p_hi");
  return Region{r[0], r[1], r[2], r[3]};
}

}  // namespace

PYBIND11_MODULE(_core, m) {
  m.doc() = "Fidelity decay of mixed states: kicked rotor, driven oscillator and Glauber mixtures";

  auto base = py::register_exception<Error>(m, "EchoLabError", PyExc_RuntimeError);
  py::register_exception<ConfigError>(m, "ConfigError", base.ptr());
  py::register_exception<InvalidArgument>(m, "InvalidArgument", base.ptr());
  py::register_exception<NumericalError>(m, "NumericalError", base.ptr());

  m.attr("__version__") = kCodeVersion;

  m.def("hbar", [](std::size_t n) { return TorusGrid::make(n).hbar(); }, py::arg("n"),
        "Effective Planck constant 2 pi / n of an n-site torus.");

  m.def(
      "rotor_echo",
      [](std::size_t n, double kick, double sigma, std::size_t members, int T, std::uint64_t seed,
         const std::vector<double>& region, bool peres) {
        const auto grid = TorusGrid::make(n);
        const auto mix = uniform_mixture(grid, make_region(region), members, seed);
        EchoRecord rec;
        {
          py::gil_scoped_release release;
          rec = mixture_echo(mix, T, RotorParams::from_sigma(grid, kick, sigma), EchoOptions{peres});
        }
        py::dict d;
        d["coherent"] = rec.coherent;
        d["incoherent"] = rec.incoherent;
        d["peres"] = rec.peres;
        d["cells"] = mix.cell_count();
        return d;
      },
      py::arg("n"), py::arg("kick") = 10.0, py::arg("sigma") = 1.1, py::arg("members") = 64, py::arg("T") = 14,
      py::arg("seed") = 1, py::arg("region") = std::vector<double>{0.2, 0.3, 0.3, 0.4}, py::arg("peres") = true,
      "Coherent, incoherent and Peres fidelities of a uniform packet mixture, t = 0..T.");

  m.def(
      "lyapunov_exponent",
      [](double kick, std::size_t trajectories, std::size_t steps, std::uint64_t seed) {
        const auto e = lyapunov_exponent(kick, trajectories, steps, seed);
        return py::make_tuple(e.exponent, e.standard_error);
      },
      py::arg("kick"), py::arg("trajectories") = 200, py::arg("steps") = 2000, py::arg("seed") = 1);

  m.def(
      "angular_correlation",
      [](double kick, double gamma, std::size_t trajectories, int T, std::uint64_t seed,
         const std::vector<double>& region) {
        const auto ens = ClassicalEnsemble::uniform(make_region(region), trajectories, seed);
        return series_dict(angular_correlation(ens, gamma, kick, T));
      },
      py::arg("kick") = 10.0, py::arg("gamma") = 2.0, py::arg("trajectories") = 100000, py::arg("T") = 14,
      py::arg("seed") = 1, py::arg("region") = std::vector<double>{0.2, 0.3, 0.3, 0.4});

  m.def(
      "fit_decay_rate",
      [](const std::vector<double>& t, const std::vector<double>& values, double t_min, double t_max) {
        DecaySeries s;
        s.times = t;
        s.values = values;
        if (t.size() != values.size()) throw InvalidArgument("t and values differ in length");
        return fit_dict(fit_decay_rate(s, {t_min, t_max}));
      },
      py::arg("t"), py::arg("values"), py::arg("t_min") = 2.0, py::arg("t_max") = 8.0);

  m.def(
      "populations",
      [](const std::string& family, double hbar, int n_max, double delta, double i0, double width) {
        RadialWeight w = family == "gaussian" ? RadialWeight::gaussian(delta)
                         : family == "ring"   ? RadialWeight::ring(i0, width)
                                              : throw InvalidArgument("family must be 'gaussian' or 'ring'");
        return populations_from_weight(w, hbar, n_max).values;
      },
      py::arg("family"), py::arg("hbar"), py::arg("n_max"), py::arg("delta") = 0.0, py::arg("i0") = 0.0,
      py::arg("width") = 0.0, "Number-state populations of a Gaussian or ring Glauber weight.");

  m.def("thermal_populations", &thermal_populations, py::arg("temperature"), py::arg("omega0"), py::arg("hbar"),
        py::arg("anharmonic") = true, py::arg("cutoff") = 1e-16);

  m.def("presets", [] {
    std::vector<std::string> names;
    for (const auto& p : presets()) names.push_back(p.name);
    return names;
  });

  m.def(
      "run",
      [](const std::string& source, bool is_text) {
        const auto cfg = is_text ? ExperimentConfig::parse_string(source) : ExperimentConfig::load(source);
        ResultBundle b;
        {
          py::gil_scoped_release release;
          b = echolab::run(cfg);
        }
        py::dict series;
        for (const auto& s : b.series) series[py::str(s.name)] = series_dict(s.series);
        return py::make_tuple(b.summary.dump(), series);
      },
      py::arg("source"), py::arg("is_text") = false,
      "Runs an experiment from a config path, 'preset:<name>' or (is_text=True) INI text. "
      "Returns (summary JSON string, {series name: {t, value, stderr}}).");
}
