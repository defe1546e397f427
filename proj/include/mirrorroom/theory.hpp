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

#pragma once

#include "mirrorroom/antenna.hpp"
#include "mirrorroom/channel.hpp"
#include "mirrorroom/geometry.hpp"

#include <iosfwd>
#include <optional>
#include <span>
#include <string_view>
#include <vector>

namespace mirrorroom
{
    inline constexpr double default_gamma2 = 0.35;

    // Scalar description of a scene as used by the closed-form expressions.
    struct SceneSummary
    {
        double volume = 0.0;
        double surface = 0.0;
        double diagonal = 0.0;
        double wall_gain = 0.0;
        double speed_of_light = default_speed_of_light;
        double wavelength = 0.0;
        double bandwidth = 0.0;
        double beam_fraction_tx = 1.0;
        double beam_fraction_rx = 1.0;
        std::optional<double> direct_delay;

        // Requires a room with a single wall gain.
        static SceneSummary from(const Room &room, const RadioConfig &radio, const AntennaPattern &tx,
                                 const AntennaPattern &rx, std::optional<double> direct_delay = std::nullopt);

        double beam_product() const { return beam_fraction_tx * beam_fraction_rx; }
        void validate() const;
    };

    struct DiracComponent
    {
        double location = 0.0;
        double weight = 0.0;
    };

    enum class CurveUnit
    {
        count,
        rate,          // 1/s
        power_density, // 1/s
        power          // dimensionless received power
    };

    std::string_view to_string(CurveUnit unit);

    struct TheoryCurve
    {
        std::vector<double> delays;
        std::vector<double> values;
        CurveUnit unit = CurveUnit::count;
        std::optional<DiracComponent> dirac;

        // Throws ConfigError unless delays strictly increase, sizes match and the
        // Dirac weight is non-negative.
        void validate() const;
    };

    // Delays are in seconds throughout.

    double eyring_count(const SceneSummary &scene, double tau);

    // Needs scene.direct_delay (ConfigError otherwise).
    double approx_count(const SceneSummary &scene, double tau);

    struct RateValue
    {
        DiracComponent spike;
        double density = 0.0;
    };

    RateValue approx_rate(const SceneSummary &scene, double tau);

    double mean_count(const SceneSummary &scene, double tau);
    double mean_rate(const SceneSummary &scene, double tau);

    double mixing_time(const SceneSummary &scene, double n_mix = 1.0);

    // Throws DomainError unless 0 < g < 1.
    double reverberation_time(const SceneSummary &scene);
    double kuttruff_correction(double wall_gain, double gamma2 = default_gamma2);

    enum class ModelMode
    {
        deterministic, // fixed positions, direct path at scene.direct_delay
        randomized     // random positions and orientations
    };

    ModelMode parse_model_mode(std::string_view name);
    std::string_view to_string(ModelMode mode);

    // Mean number of wall interactions of an image at delay tau.
    double mean_interactions(const SceneSummary &scene, double tau);

    double gain_second_moment(const SceneSummary &scene, double tau, ModelMode mode);

    // Spike-plus-exponential-tail power-delay spectrum.
    struct PowerDelaySpectrum
    {
        std::optional<DiracComponent> spike;
        double tail_amplitude = 0.0; // A in A exp(-tau / decay_time), 1/s
        double onset = 0.0;          // tail is zero for tau <= onset
        double decay_time = 0.0;

        double density(double tau) const;
        TheoryCurve sample(std::span<const double> delays) const;
    };

    // `correction` multiplies the reverberation time (1 for the plain Eyring form).
    PowerDelaySpectrum pds(const SceneSummary &scene, ModelMode mode, double correction = 1.0);

    // E|y(tau)|^2 = int P(tau - t) |s(t)|^2 dt for the sinc pulse of `bandwidth`.
    double expected_received_power(const PowerDelaySpectrum &spectrum, double bandwidth, double tau);
    TheoryCurve expected_received_power(const PowerDelaySpectrum &spectrum, double bandwidth,
                                        std::span<const double> delays);

    double count_second_moment(const SceneSummary &scene, double tau);

    double count_upper_bound(const SceneSummary &scene, double tau);
    double rate_upper_bound(const SceneSummary &scene, double tau);

    double conditional_mean_count(const SceneSummary &scene, double tau, double direct_delay);
    RateValue conditional_rate(const SceneSummary &scene, double tau, double direct_delay);

    // tau_seconds,value,unit; a leading "# dirac_location=...,dirac_weight=..."
    // comment line when the curve carries a Dirac component.
    void write_curve_csv(std::ostream &os, const TheoryCurve &curve);

} // namespace mirrorroom
