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
#include "mirrorroom/geometry.hpp"
#include "mirrorroom/random.hpp"

#include <complex>
#include <cstddef>
#include <iosfwd>
#include <span>
#include <string_view>
#include <vector>

namespace mirrorroom
{
    enum class PhaseMode
    {
        carrier, // phi_k = -2 pi c tau_k / l_c
        random   // i.i.d. uniform [0, 2 pi) per synthesis
    };

    PhaseMode parse_phase_mode(std::string_view name);
    std::string_view to_string(PhaseMode mode);

    struct RadioConfig
    {
        double wavelength = default_speed_of_light / 60e9;
        double bandwidth = 2e9;
        double speed_of_light = default_speed_of_light;

        static RadioConfig from_frequency(double center_frequency, double bandwidth,
                                          double speed_of_light = default_speed_of_light);

        double center_frequency() const { return speed_of_light / wavelength; }

        // Throws ConfigError on non-positive fields.
        void validate() const;

        // The ray model assumes the carrier wavelength is small against the room.
        bool wavelength_small_for(const Room &room) const;
    };

    struct Terminal
    {
        Vec3 position;
        AntennaPattern pattern = AntennaPattern::isotropic();
    };

    struct PathComponent
    {
        MirrorIndex index;
        double delay = 0.0;
        Vec3 dod;
        Vec3 doa;
        double power_gain = 0.0;
        double phase = 0.0; // carrier phase, radians in (-pi, pi]
    };

    // Paths sorted by (delay, index), together with the horizon they were
    // enumerated for.
    struct PathList
    {
        std::vector<PathComponent> paths;
        double horizon = 0.0;

        std::size_t size() const { return paths.size(); }
        bool empty() const { return paths.empty(); }
    };

    PathList enumerate_paths(const Room &room, const Terminal &tx, const Terminal &rx, const RadioConfig &radio,
                             double tau_max, std::size_t index_budget = default_index_budget);

    // Number of paths with delay <= tau. Throws HorizonError beyond the horizon.
    std::size_t arrival_count(const PathList &paths, double tau);

    // Counts at each of the non-decreasing delays in `taus`.
    std::vector<double> arrival_counts(const PathList &paths, std::span<const double> taus);

    // sin(pi B t) / (pi B t), unit peak at t = 0.
    double sinc_pulse(const RadioConfig &radio, double t);

    struct TimeGrid
    {
        double start = 0.0;
        double step = 0.0;
        std::size_t count = 0;

        static TimeGrid covering(double start, double stop, double step);

        double at(std::size_t i) const { return start + static_cast<double>(i) * step; }
        double stop() const { return at(count == 0 ? 0 : count - 1); }
        std::vector<double> values() const;
        void validate() const;
    };

    struct SignalTrace
    {
        double start = 0.0;
        double step = 0.0;
        std::vector<std::complex<double>> samples;

        double time(std::size_t i) const { return start + static_cast<double>(i) * step; }
        std::size_t size() const { return samples.size(); }
        double energy() const;
    };

    // Default padding on both sides of the path delays: 20 pulse widths.
    double default_padding(const RadioConfig &radio);

    // Grid from -padding to tau_max + padding at 1/(4B).
    TimeGrid default_trace_grid(const RadioConfig &radio, double tau_max);

    // y(t) = sum_k |alpha_k| e^{j phi_k} s(t - tau_k) using the stored carrier phases.
    SignalTrace synthesize_signal(std::span<const PathComponent> paths, const RadioConfig &radio, const TimeGrid &grid);

    // Same, with independent uniform phases drawn from `rng`.
    SignalTrace synthesize_signal(std::span<const PathComponent> paths, const RadioConfig &radio, const TimeGrid &grid,
                                  Rng &rng);

    // Dispatch on the phase mode; `rng` is required for PhaseMode::random.
    SignalTrace synthesize_signal(std::span<const PathComponent> paths, const RadioConfig &radio, const TimeGrid &grid,
                                  PhaseMode mode, Rng *rng);

    struct DelayMoments
    {
        double mean_delay = 0.0;
        double rms_spread = 0.0;
    };

    // First moment and centred second moment of |y|^2 over the trace
    // (trapezoidal). Throws MomentsError for zero energy.
    DelayMoments signal_moments(const SignalTrace &trace);

    // CSV with columns t_seconds,re,im,abs2.
    void write_trace_csv(std::ostream &os, const SignalTrace &trace);

    // CSV of a path list: kx,ky,kz,tau_s,gain_pow,dod_x,dod_y,dod_z,doa_x,doa_y,doa_z,phase_rad.
    void write_paths_csv(std::ostream &os, const PathList &paths);

} // namespace mirrorroom
