// SPDX-License-Identifier: Apache-2.0
//
// mirrorroom: mirror-source radio channel toolkit for rectangular rooms
// Copyright (C) 2026 The mirrorroom authors
//
// Licensed under the Apache License, Version 2.0 (the "License");
// you may not use this file except in compliance with the License.
// You may obtain a copy of the License at
// http://www.apache.org/licenses/LICENSE-2.0
//
// Unless required by applicable law or agreed to in writing, software
// distributed under the License is distributed on an "AS IS" BASIS,
// WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
// See the License for the specific language governing permissions and
// limitations under the License.
// ------------------------------------------------------------------------

#include "mirrorroom/channel.hpp"
#include "mirrorroom/cli.hpp"
#include "mirrorroom/config.hpp"
#include "mirrorroom/geometry.hpp"
#include "mirrorroom/montecarlo.hpp"
#include "mirrorroom/theory.hpp"

#include <pybind11/eigen.h>
#include <pybind11/functional.h>
#include <pybind11/stl.h>
#include <pybind11/stl/filesystem.h>

#include <sstream>

namespace py = pybind11;
using namespace mirrorroom;

namespace
{
    MirrorIndex to_index(const std::array<int, 3> &k) { return {k[0], k[1], k[2]}; }
    std::array<int, 3> from_index(const MirrorIndex &k) { return {k.kx, k.ky, k.kz}; }
}

PYBIND11_MODULE(_mirrorroom, m)
{
    m.doc() = "Mirror-source radio channel toolkit for rectangular rooms";

    auto error = py::register_exception<Error>(m, "Error");
    py::register_exception<GeometryError>(m, "GeometryError", error);
    py::register_exception<ResourceLimitError>(m, "ResourceLimitError", error);
    py::register_exception<HorizonError>(m, "HorizonError", error);
    py::register_exception<MomentsError>(m, "MomentsError", error);
    py::register_exception<ConfigError>(m, "ConfigError", error);
    py::register_exception<DomainError>(m, "DomainError", error);
    py::register_exception<EmptySampleError>(m, "EmptySampleError", error);
    py::register_exception<IoError>(m, "IoError", error);

    m.attr("speed_of_light") = default_speed_of_light;
    m.attr("default_gamma2") = default_gamma2;

    // geometry
    py::class_<Room>(m, "Room")
        .def(py::init<const Vec3 &, double>(), py::arg("dimensions"), py::arg("wall_gain"))
        .def(py::init<const Vec3 &, const std::array<double, 6> &>(), py::arg("dimensions"), py::arg("wall_gains"))
        .def_property_readonly("dimensions", &Room::lengths)
        .def("wall_gain", &Room::wall_gain, py::arg("wall"))
        .def_property_readonly("volume", &Room::volume)
        .def_property_readonly("surface", &Room::surface)
        .def_property_readonly("diagonal", &Room::diagonal)
        .def("contains", &Room::contains);

    m.def("mirror_source_position",
          [](const Room &room, const Vec3 &source, const std::array<int, 3> &k) {
              return mirror_source_position(room, source, to_index(k));
          },
          py::arg("room"), py::arg("source"), py::arg("index"));
    m.def("departure_from_arrival",
          [](const std::array<int, 3> &k, const Vec3 &doa) { return departure_from_arrival(to_index(k), doa); },
          py::arg("index"), py::arg("doa"));
    m.def("reflection_gain", [](const Room &room, const std::array<int, 3> &k) { return reflection_gain(room, to_index(k)); },
          py::arg("room"), py::arg("index"));

    // antennas and radio
    py::class_<AntennaPattern>(m, "AntennaPattern")
        .def_static("isotropic", &AntennaPattern::isotropic)
        .def_static("cap", &AntennaPattern::cap, py::arg("beam_fraction"), py::arg("orientation") = Vec3(0.0, 0.0, 1.0))
        .def_static("custom", &AntennaPattern::custom, py::arg("gain"), py::arg("beam_fraction"),
                    py::arg("orientation") = Vec3(0.0, 0.0, 1.0))
        .def_property_readonly("beam_fraction", &AntennaPattern::beam_fraction)
        .def_property_readonly("orientation", &AntennaPattern::orientation)
        .def("with_orientation", &AntennaPattern::with_orientation)
        .def("gain", &AntennaPattern::gain, py::arg("direction"));

    py::enum_<PhaseMode>(m, "PhaseMode")
        .value("carrier", PhaseMode::carrier)
        .value("random", PhaseMode::random);

    py::class_<RadioConfig>(m, "RadioConfig")
        .def(py::init<>())
        .def_static("from_frequency", &RadioConfig::from_frequency, py::arg("center_frequency"), py::arg("bandwidth"),
                    py::arg("speed_of_light") = default_speed_of_light)
        .def_readwrite("wavelength", &RadioConfig::wavelength)
        .def_readwrite("bandwidth", &RadioConfig::bandwidth)
        .def_readwrite("speed_of_light", &RadioConfig::speed_of_light);

    py::class_<PathComponent>(m, "Path")
        .def_property_readonly("index", [](const PathComponent &p) { return from_index(p.index); })
        .def_readonly("delay", &PathComponent::delay)
        .def_readonly("dod", &PathComponent::dod)
        .def_readonly("doa", &PathComponent::doa)
        .def_readonly("power_gain", &PathComponent::power_gain)
        .def_readonly("phase", &PathComponent::phase);

    m.def("enumerate_paths",
          [](const Room &room, const Vec3 &tx, const Vec3 &rx, const RadioConfig &radio, double tau_max,
             const AntennaPattern &tx_pattern, const AntennaPattern &rx_pattern) {
              return enumerate_paths(room, Terminal{tx, tx_pattern}, Terminal{rx, rx_pattern}, radio, tau_max).paths;
          },
          py::arg("room"), py::arg("tx"), py::arg("rx"), py::arg("radio") = RadioConfig{}, py::arg("tau_max"),
          py::arg("tx_pattern") = AntennaPattern::isotropic(), py::arg("rx_pattern") = AntennaPattern::isotropic());

    m.def("synthesize_signal",
          [](const std::vector<PathComponent> &paths, const RadioConfig &radio, double start, double stop, double step) {
              const SignalTrace t = synthesize_signal(paths, radio, TimeGrid::covering(start, stop, step));
              std::vector<double> times;
              for (std::size_t i = 0; i < t.size(); ++i)
                  times.push_back(t.time(i));
              return std::pair{times, t.samples};
          },
          py::arg("paths"), py::arg("radio"), py::arg("start"), py::arg("stop"), py::arg("step"));

    // theory
    py::class_<SceneSummary>(m, "SceneSummary")
        .def_static("from_room", &SceneSummary::from, py::arg("room"), py::arg("radio") = RadioConfig{},
                    py::arg("tx_pattern") = AntennaPattern::isotropic(),
                    py::arg("rx_pattern") = AntennaPattern::isotropic(), py::arg("direct_delay") = std::nullopt)
        .def_readwrite("volume", &SceneSummary::volume)
        .def_readwrite("wall_gain", &SceneSummary::wall_gain)
        .def_readwrite("bandwidth", &SceneSummary::bandwidth)
        .def_readwrite("beam_fraction_tx", &SceneSummary::beam_fraction_tx)
        .def_readwrite("beam_fraction_rx", &SceneSummary::beam_fraction_rx)
        .def_readwrite("direct_delay", &SceneSummary::direct_delay)
        .def_property_readonly("beam_product", &SceneSummary::beam_product);

    py::enum_<ModelMode>(m, "ModelMode")
        .value("deterministic", ModelMode::deterministic)
        .value("randomized", ModelMode::randomized);

    m.def("eyring_count", &eyring_count, py::arg("scene"), py::arg("tau"));
    m.def("approx_count", &approx_count, py::arg("scene"), py::arg("tau"));
    m.def("mean_count", &mean_count, py::arg("scene"), py::arg("tau"));
    m.def("mean_rate", &mean_rate, py::arg("scene"), py::arg("tau"));
    m.def("mixing_time", &mixing_time, py::arg("scene"), py::arg("n_mix") = 1.0);
    m.def("reverberation_time", &reverberation_time, py::arg("scene"));
    m.def("kuttruff_correction", &kuttruff_correction, py::arg("wall_gain"), py::arg("gamma2") = default_gamma2);
    m.def("count_second_moment", &count_second_moment, py::arg("scene"), py::arg("tau"));
    m.def("count_upper_bound", &count_upper_bound, py::arg("scene"), py::arg("tau"));
    m.def("conditional_mean_count", &conditional_mean_count, py::arg("scene"), py::arg("tau"), py::arg("direct_delay"));

    py::class_<PowerDelaySpectrum>(m, "PowerDelaySpectrum")
        .def_readonly("tail_amplitude", &PowerDelaySpectrum::tail_amplitude)
        .def_readonly("onset", &PowerDelaySpectrum::onset)
        .def_readonly("decay_time", &PowerDelaySpectrum::decay_time)
        .def_property_readonly("spike",
                               [](const PowerDelaySpectrum &p) -> std::optional<std::pair<double, double>> {
                                   if (!p.spike)
                                       return std::nullopt;
                                   return std::pair{p.spike->location, p.spike->weight};
                               })
        .def("density", &PowerDelaySpectrum::density, py::arg("tau"));
    m.def("pds", &pds, py::arg("scene"), py::arg("mode") = ModelMode::randomized, py::arg("correction") = 1.0);
    m.def("expected_received_power",
          py::overload_cast<const PowerDelaySpectrum &, double, double>(&expected_received_power), py::arg("spectrum"),
          py::arg("bandwidth"), py::arg("tau"));

    // Monte Carlo
    py::enum_<RandomizationMode>(m, "RandomizationMode")
        .value("both_random", RandomizationMode::both_random)
        .value("fixed_rx", RandomizationMode::fixed_rx)
        .value("fixed_orientation_tx", RandomizationMode::fixed_orientation_tx)
        .value("fixed_distance", RandomizationMode::fixed_distance);

    py::class_<McConfig>(m, "McConfig")
        .def(py::init<>())
        .def_readwrite("runs", &McConfig::runs)
        .def_readwrite("seed", &McConfig::seed)
        .def_readwrite("mode", &McConfig::mode)
        .def_readwrite("room", &McConfig::room)
        .def_readwrite("radio", &McConfig::radio)
        .def_readwrite("tx_pattern", &McConfig::tx_pattern)
        .def_readwrite("rx_pattern", &McConfig::rx_pattern)
        .def_readwrite("tx_position", &McConfig::tx_position)
        .def_readwrite("rx_position", &McConfig::rx_position)
        .def_readwrite("distance", &McConfig::distance)
        .def_readwrite("tau_max", &McConfig::tau_max)
        .def_readwrite("moment_cutoff", &McConfig::moment_cutoff)
        .def_readwrite("phase_mode", &McConfig::phase_mode)
        .def_readwrite("synthesize", &McConfig::synthesize)
        .def_readwrite("threads", &McConfig::threads)
        .def_readwrite("fit_start", &McConfig::fit_start)
        .def_readwrite("fit_stop", &McConfig::fit_stop)
        .def("set_grid", [](McConfig &c, double start, double stop, double step) {
            c.grid = TimeGrid::covering(start, stop, step);
        })
        .def("validate", &McConfig::validate);

    py::class_<McEstimate>(m, "McEstimate")
        .def_readonly("grid", &McEstimate::grid)
        .def_readonly("mean", &McEstimate::mean)
        .def_readonly("std_error", &McEstimate::std_error)
        .def_readonly("runs", &McEstimate::runs);

    py::class_<Ecdf>(m, "Ecdf")
        .def_readonly("values", &Ecdf::values)
        .def_readonly("probabilities", &Ecdf::probabilities)
        .def("__call__", &Ecdf::operator(), py::arg("x"))
        .def("quantile", &Ecdf::quantile, py::arg("p"));

    py::class_<EnsembleResult>(m, "EnsembleResult")
        .def_readonly("count", &EnsembleResult::count)
        .def_readonly("count_raw_second", &EnsembleResult::count_raw_second)
        .def_readonly("power", &EnsembleResult::power)
        .def_readonly("mean_delay", &EnsembleResult::mean_delay)
        .def_readonly("rms_spread", &EnsembleResult::rms_spread)
        .def_readonly("missing_moments", &EnsembleResult::missing_moments);

    py::class_<Check>(m, "Check")
        .def_readonly("name", &Check::name)
        .def_readonly("value", &Check::value)
        .def_readonly("tolerance", &Check::tolerance)
        .def_readonly("passed", &Check::pass)
        .def_readonly("detail", &Check::detail);

    py::class_<ComparisonReport>(m, "ComparisonReport")
        .def_readonly("checks", &ComparisonReport::checks)
        .def_readonly("metrics", &ComparisonReport::metrics)
        .def_readonly("fitted_decay_time", &ComparisonReport::fitted_decay_time)
        .def_property_readonly("passed", &ComparisonReport::pass);

    m.def("run_ensemble", &run_ensemble, py::arg("config"), py::call_guard<py::gil_scoped_release>());
    m.def("compare_with_theory", &compare_with_theory, py::arg("result"), py::arg("config"));

    m.def("run_cli",
          [](const std::vector<std::string> &args) {
              std::ostringstream out, err;
              int code;
              {
                  py::gil_scoped_release release;
                  code = run_cli(args, out, err);
              }
              return py::make_tuple(code, out.str(), err.str());
          },
          py::arg("args"), "Run the command-line tool in-process; returns (exit_code, stdout, stderr).");
}
