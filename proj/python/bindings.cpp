#include <sstream>
#include <string>
#include <vector>

#include <pybind11/eigen.h>
#include <pybind11/pybind11.h>
#include <pybind11/stl.h>
#include <pybind11/stl/filesystem.h>

#include "fscmt/channel.hpp"
#include "fscmt/config.hpp"
#include "fscmt/equalizer.hpp"
#include "fscmt/experiment.hpp"
#include "fscmt/filterbank.hpp"
#include "fscmt/metrics.hpp"
#include "fscmt/selftest.hpp"
#include "fscmt/transceiver.hpp"

namespace py = pybind11;
using namespace fscmt;

namespace {

std::vector<double> round_trip(int L, int K, int symbols, std::uint64_t seed) {
  const Waveform wf(L, K);
  Rng rng = trial_rng(seed, 0);
  const SymbolMatrix s = random_symbols(L, symbols, Alphabet::pam2, rng);
  const SymbolMatrix est = demodulate_frame(analyze_windows(transmit(s, wf), symbols, 0, wf), wf);
  return measure_sir(s, est, wf.edge_symbols()).values_db();
}

py::dict theory(const std::vector<Eigen::MatrixXcd>& channel, double noise_variance, int L, int K) {
  const SpreadingMatrix A(design_coeffs(K), L);
  const TheorySinr t = theoretical_sinr(channel, noise_variance, A);
  py::dict out;
  out["signal"] = t.signal;
  out["interference"] = t.interference;
  return out;
}

}  // namespace

PYBIND11_MODULE(_fscmt, m) {
  m.doc() = "FS-CMT massive MIMO link-level simulator";
  m.attr("__version__") = version_string();

  py::register_exception<ConfigError>(m, "ConfigError", PyExc_ValueError);
  py::register_exception<SingularBinError>(m, "SingularBinError", PyExc_ArithmeticError);

  m.def("coefficients", [](int K) { return design_coeffs(K).half(); }, py::arg("K"),
        "Prototype coefficients c_0 .. c_{K-1}.");
  m.def("prototype", [](int L, int K) { return synth_time_filter(design_coeffs(K), L).taps; },
        py::arg("L"), py::arg("K") = 4, "Real time-domain prototype of length K*L, centered.");
  m.def("round_trip_sir", &round_trip, py::arg("L"), py::arg("K") = 4, py::arg("symbols") = 64,
        py::arg("seed") = 1, "Per-subcarrier SIR in dB of an ideal back-to-back link.");
  m.def("mmse_combiner", &mmse_combiner, py::arg("H"), py::arg("noise_variance"),
        "W = H (H^H H + sigma^2 I)^-1 for one bin.");
  m.def("theoretical_sinr", &theory, py::arg("channel"), py::arg("noise_variance"), py::arg("L"),
        py::arg("K") = 4, "Closed-form per-user, per-subcarrier signal and interference powers.");

  py::class_<ScenarioConfig>(m, "ScenarioConfig")
      .def_property(
          "scenario", [](const ScenarioConfig& c) { return to_string(c.scenario); },
          [](ScenarioConfig& c, const std::string& s) { c.scenario = parse_scenario(s); })
      .def_readwrite("users", &ScenarioConfig::users)
      .def_readwrite("subcarriers", &ScenarioConfig::subcarriers)
      .def_readwrite("overlap", &ScenarioConfig::overlap)
      .def_readwrite("antennas", &ScenarioConfig::antennas)
      .def_readwrite("symbols_per_frame", &ScenarioConfig::symbols_per_frame)
      .def_readwrite("noise_free", &ScenarioConfig::noise_free)
      .def_readwrite("snr_in_db", &ScenarioConfig::snr_in_db)
      .def_readwrite("realizations", &ScenarioConfig::realizations)
      .def_readwrite("master_seed", &ScenarioConfig::master_seed)
      .def_readwrite("threads", &ScenarioConfig::threads)
      .def_readwrite("out_dir", &ScenarioConfig::out_dir)
      .def("validate", [](const ScenarioConfig& c) { validate(c); })
      .def("to_ini", [](const ScenarioConfig& c) { return to_ini(c); });

  m.def("default_config", [](const std::string& name) { return default_config(parse_scenario(name)); },
        py::arg("scenario"));
  m.def("load_config", [](const std::filesystem::path& p) { return load_config(p); }, py::arg("path"));
  m.def(
      "parse_config",
      [](const std::string& text) {
        std::istringstream in(text);
        return parse_config(in);
      },
      py::arg("text"));

  py::class_<ScenarioResult>(m, "ScenarioResult")
      .def_readonly("config", &ScenarioResult::config)
      .def_readonly("summary", &ScenarioResult::summary)
      .def_readonly("wall_seconds", &ScenarioResult::wall_seconds)
      .def_readonly("threads", &ScenarioResult::threads)
      .def("csv", [](const ScenarioResult& r) { return to_csv(r.rows); })
      .def(
          "write",
          [](const ScenarioResult& r, const std::filesystem::path& dir) {
            const RunRecord rec = write_outputs(r, dir);
            return py::make_tuple(rec.csv_path, rec.meta_path);
          },
          py::arg("out_dir"));

  m.def(
      "run_scenario",
      [](const ScenarioConfig& c, int threads) {
        validate(c);
        py::gil_scoped_release release;
        return run_scenario(c, resolve_threads(threads));
      },
      py::arg("config"), py::arg("threads") = 0);

  m.def("selftest", [] {
    std::vector<py::tuple> out;
    for (const auto& c : run_selftest()) out.push_back(py::make_tuple(c.name, c.passed, c.detail));
    return out;
  });
}
