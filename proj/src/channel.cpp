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
#include "mirrorroom/csv.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <numbers>
#include <ostream>
#include <string>

namespace mirrorroom
{
    using std::numbers::pi;

    PhaseMode parse_phase_mode(std::string_view name)
    {
        if (name == "carrier")
            return PhaseMode::carrier;
        if (name == "random")
            return PhaseMode::random;
        throw ConfigError("unknown phase mode '" + std::string(name) + "' (expected carrier or random)");
    }

    std::string_view to_string(PhaseMode mode)
    {
        return mode == PhaseMode::carrier ? "carrier" : "random";
    }

    RadioConfig RadioConfig::from_frequency(double center_frequency, double bandwidth, double speed_of_light)
    {
        if (!(center_frequency > 0.0))
            throw ConfigError("radio: center frequency must be positive");
        RadioConfig r;
        r.wavelength = speed_of_light / center_frequency;
        r.bandwidth = bandwidth;
        r.speed_of_light = speed_of_light;
        r.validate();
        return r;
    }

    void RadioConfig::validate() const
    {
        if (!(wavelength > 0.0) || !std::isfinite(wavelength))
            throw ConfigError("radio: wavelength must be positive");
        if (!(bandwidth > 0.0) || !std::isfinite(bandwidth))
            throw ConfigError("radio: bandwidth must be positive");
        if (!(speed_of_light > 0.0) || !std::isfinite(speed_of_light))
            throw ConfigError("radio: speed of light must be positive");
    }

    bool RadioConfig::wavelength_small_for(const Room &room) const
    {
        return wavelength * 10.0 <= room.lengths().minCoeff();
    }

    PathList enumerate_paths(const Room &room, const Terminal &tx, const Terminal &rx, const RadioConfig &radio,
                             double tau_max, std::size_t index_budget)
    {
        radio.validate();
        if ((tx.position - rx.position).norm() == 0.0)
            throw GeometryError("enumerate_paths: transmitter and receiver coincide");

        const auto sources = enumerate_indices(room, tx.position, rx.position, tau_max, radio.speed_of_light, index_budget);
        PathList out;
        out.horizon = tau_max;
        out.paths.reserve(sources.size());
        for (const auto &src : sources)
        {
            const Vec3 doa = arrival_direction(src.position, rx.position);
            const double g_rx = rx.pattern.gain(doa);
            if (!(g_rx > 0.0))
                continue;
            const Vec3 dod = departure_from_arrival(src.index, doa);
            const double g_tx = tx.pattern.gain(dod);
            if (!(g_tx > 0.0))
                continue;

            const double spread = 4.0 * pi * radio.speed_of_light * src.delay / radio.wavelength;
            PathComponent p;
            p.index = src.index;
            p.delay = src.delay;
            p.dod = dod;
            p.doa = doa;
            p.power_gain = reflection_gain(room, src.index) * g_tx * g_rx / (spread * spread);
            const double cycles = radio.speed_of_light * src.delay / radio.wavelength;
            p.phase = -2.0 * pi * (cycles - std::round(cycles));
            out.paths.push_back(p);
        }
        std::sort(out.paths.begin(), out.paths.end(), [](const PathComponent &a, const PathComponent &b) {
            return a.delay != b.delay ? a.delay < b.delay : a.index < b.index;
        });
        return out;
    }

    std::size_t arrival_count(const PathList &paths, double tau)
    {
        if (tau > paths.horizon)
            throw HorizonError("arrival_count: delay " + csv::number(tau) + " s beyond enumeration horizon " +
                               csv::number(paths.horizon) + " s");
        const auto it = std::upper_bound(paths.paths.begin(), paths.paths.end(), tau,
                                         [](double t, const PathComponent &p) { return t < p.delay; });
        return static_cast<std::size_t>(it - paths.paths.begin());
    }

    std::vector<double> arrival_counts(const PathList &paths, std::span<const double> taus)
    {
        std::vector<double> out(taus.size());
        std::size_t j = 0;
        double prev = -std::numeric_limits<double>::infinity();
        for (std::size_t i = 0; i < taus.size(); ++i)
        {
            const double t = taus[i];
            if (t < prev)
                throw ConfigError("arrival_counts: delays must be non-decreasing");
            if (t > paths.horizon)
                throw HorizonError("arrival_counts: delay " + csv::number(t) + " s beyond enumeration horizon");
            prev = t;
            while (j < paths.paths.size() && paths.paths[j].delay <= t)
                ++j;
            out[i] = static_cast<double>(j);
        }
        return out;
    }

    double sinc_pulse(const RadioConfig &radio, double t)
    {
        const double x = pi * radio.bandwidth * t;
        return x == 0.0 ? 1.0 : std::sin(x) / x;
    }

    TimeGrid TimeGrid::covering(double start, double stop, double step)
    {
        if (!(step > 0.0) || !(stop >= start))
            throw ConfigError("time grid: need step > 0 and stop >= start");
        TimeGrid g;
        g.start = start;
        g.step = step;
        g.count = static_cast<std::size_t>(std::floor((stop - start) / step + 1e-9)) + 1;
        return g;
    }

    std::vector<double> TimeGrid::values() const
    {
        std::vector<double> v(count);
        for (std::size_t i = 0; i < count; ++i)
            v[i] = at(i);
        return v;
    }

    void TimeGrid::validate() const
    {
        if (!(step > 0.0) || count == 0 || !std::isfinite(start))
            throw ConfigError("time grid: need a finite start, step > 0 and at least one sample");
    }

    double SignalTrace::energy() const
    {
        double e = 0.0;
        for (std::size_t i = 0; i + 1 < samples.size(); ++i)
            e += 0.5 * (std::norm(samples[i]) + std::norm(samples[i + 1])) * step;
        if (samples.size() == 1)
            e = std::norm(samples[0]);
        return e;
    }

    double default_padding(const RadioConfig &radio) { return 20.0 / radio.bandwidth; }

    TimeGrid default_trace_grid(const RadioConfig &radio, double tau_max)
    {
        const double step = 1.0 / (4.0 * radio.bandwidth);
        const double pad = std::ceil(default_padding(radio) / step) * step;
        return TimeGrid::covering(-pad, tau_max + pad, step);
    }

    namespace
    {
        // Adds amp * sinc(B (t_n - tau)) to every grid sample. sin(pi B (t_n - tau))
        // is advanced by a unit rotor and re-anchored periodically.
        void accumulate_pulse(std::vector<std::complex<double>> &y, const TimeGrid &grid, double bandwidth,
                              double tau, std::complex<double> amp)
        {
            constexpr std::size_t anchor_every = 64;
            const double x0 = bandwidth * (grid.start - tau);
            const double dx = bandwidth * grid.step;
            const std::complex<double> rotor(std::cos(pi * dx), std::sin(pi * dx));
            std::complex<double> z;
            for (std::size_t n = 0; n < grid.count; ++n)
            {
                const double x = x0 + static_cast<double>(n) * dx;
                if (n % anchor_every == 0)
                    z = std::complex<double>(std::cos(pi * x), std::sin(pi * x));
                else
                    z *= rotor;
                const double s = std::abs(x) < 1e-9 ? 1.0 : z.imag() / (pi * x);
                y[n] += amp * s;
            }
        }

        SignalTrace make_trace(const TimeGrid &grid)
        {
            grid.validate();
            SignalTrace t;
            t.start = grid.start;
            t.step = grid.step;
            t.samples.assign(grid.count, {0.0, 0.0});
            return t;
        }
    } // namespace

    SignalTrace synthesize_signal(std::span<const PathComponent> paths, const RadioConfig &radio, const TimeGrid &grid)
    {
        SignalTrace trace = make_trace(grid);
        for (const auto &p : paths)
            accumulate_pulse(trace.samples, grid, radio.bandwidth, p.delay, std::polar(std::sqrt(p.power_gain), p.phase));
        return trace;
    }

    SignalTrace synthesize_signal(std::span<const PathComponent> paths, const RadioConfig &radio, const TimeGrid &grid,
                                  Rng &rng)
    {
        SignalTrace trace = make_trace(grid);
        for (const auto &p : paths)
        {
            const double phase = 2.0 * pi * uniform01(rng);
            accumulate_pulse(trace.samples, grid, radio.bandwidth, p.delay, std::polar(std::sqrt(p.power_gain), phase));
        }
        return trace;
    }

    SignalTrace synthesize_signal(std::span<const PathComponent> paths, const RadioConfig &radio, const TimeGrid &grid,
                                  PhaseMode mode, Rng *rng)
    {
        if (mode == PhaseMode::carrier)
            return synthesize_signal(paths, radio, grid);
        if (rng == nullptr)
            throw ConfigError("synthesize_signal: random phase mode needs a random stream");
        return synthesize_signal(paths, radio, grid, *rng);
    }

    DelayMoments signal_moments(const SignalTrace &trace)
    {
        const std::size_t n = trace.size();
        if (n < 2)
            throw MomentsError("signal_moments: need at least two samples");

        // Trapezoid weights: h/2 at the ends, h inside.
        auto weight = [&](std::size_t i) { return (i == 0 || i + 1 == n) ? 0.5 : 1.0; };
        double m0 = 0.0, m1 = 0.0;
        for (std::size_t i = 0; i < n; ++i)
        {
            const double p = weight(i) * std::norm(trace.samples[i]);
            m0 += p;
            m1 += p * trace.time(i);
        }
        if (!(m0 > 0.0))
            throw MomentsError("signal_moments: trace has zero energy");
        const double mean = m1 / m0;
        double m2 = 0.0;
        for (std::size_t i = 0; i < n; ++i)
        {
            const double d = trace.time(i) - mean;
            m2 += weight(i) * std::norm(trace.samples[i]) * d * d;
        }
        return {mean, std::sqrt(m2 / m0)};
    }

    void write_trace_csv(std::ostream &os, const SignalTrace &trace)
    {
        os << "t_seconds,re,im,abs2\n";
        for (std::size_t i = 0; i < trace.size(); ++i)
        {
            const auto &v = trace.samples[i];
            os << csv::number(trace.time(i)) << ',' << csv::number(v.real()) << ',' << csv::number(v.imag()) << ','
               << csv::number(std::norm(v)) << '\n';
        }
    }

    void write_paths_csv(std::ostream &os, const PathList &paths)
    {
        os << "kx,ky,kz,tau_s,gain_pow,dod_x,dod_y,dod_z,doa_x,doa_y,doa_z,phase_rad\n";
        for (const auto &p : paths.paths)
        {
            os << p.index.kx << ',' << p.index.ky << ',' << p.index.kz << ',' << csv::number(p.delay) << ','
               << csv::number(p.power_gain);
            for (int a = 0; a < 3; ++a)
                os << ',' << csv::number(p.dod[a]);
            for (int a = 0; a < 3; ++a)
                os << ',' << csv::number(p.doa[a]);
            os << ',' << csv::number(p.phase) << '\n';
        }
    }

} // namespace mirrorroom
