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

#include "mirrorroom/theory.hpp"
#include "mirrorroom/csv.hpp"

#include <boost/math/quadrature/gauss.hpp>
#include <boost/math/quadrature/gauss_kronrod.hpp>

#include <algorithm>
#include <cmath>
#include <numbers>
#include <ostream>
#include <string>

namespace mirrorroom
{
    using std::numbers::pi;

    SceneSummary SceneSummary::from(const Room &room, const RadioConfig &radio, const AntennaPattern &tx,
                                    const AntennaPattern &rx, std::optional<double> direct_delay)
    {
        if (!room.uniform_gain())
            throw ConfigError("scene summary: closed-form expressions need equal wall gains");
        radio.validate();
        SceneSummary s;
        s.volume = room.volume();
        s.surface = room.surface();
        s.diagonal = room.diagonal();
        s.wall_gain = room.wall_gain(0);
        s.speed_of_light = radio.speed_of_light;
        s.wavelength = radio.wavelength;
        s.bandwidth = radio.bandwidth;
        s.beam_fraction_tx = tx.beam_fraction();
        s.beam_fraction_rx = rx.beam_fraction();
        s.direct_delay = direct_delay;
        s.validate();
        return s;
    }

    void SceneSummary::validate() const
    {
        auto positive = [](double v) { return v > 0.0 && std::isfinite(v); };
        if (!positive(volume) || !positive(surface) || !positive(diagonal) || !positive(speed_of_light) ||
            !positive(wavelength) || !positive(bandwidth))
            throw ConfigError("scene summary: geometric and radio quantities must be positive");
        if (!(wall_gain >= 0.0 && wall_gain <= 1.0))
            throw ConfigError("scene summary: wall gain must lie in [0,1]");
        if (!(beam_fraction_tx > 0.0 && beam_fraction_tx <= 1.0) || !(beam_fraction_rx > 0.0 && beam_fraction_rx <= 1.0))
            throw ConfigError("scene summary: beam fractions must lie in (0,1]");
        if (direct_delay && !(*direct_delay >= 0.0))
            throw ConfigError("scene summary: direct delay must be non-negative");
    }

    std::string_view to_string(CurveUnit unit)
    {
        switch (unit)
        {
        case CurveUnit::count:
            return "count";
        case CurveUnit::rate:
            return "rate_per_s";
        case CurveUnit::power_density:
            return "power_density_per_s";
        case CurveUnit::power:
            return "power";
        }
        return "unknown";
    }

    void TheoryCurve::validate() const
    {
        if (delays.size() != values.size())
            throw ConfigError("theory curve: delays and values differ in length");
        for (std::size_t i = 1; i < delays.size(); ++i)
            if (!(delays[i] > delays[i - 1]))
                throw ConfigError("theory curve: delays must be strictly increasing");
        if (dirac && !(dirac->weight >= 0.0))
            throw ConfigError("theory curve: Dirac weight must be non-negative");
    }

    namespace
    {
        // Volume of the ball of radius c tau divided by V.
        double ball_count(const SceneSummary &s, double tau)
        {
            const double r = s.speed_of_light * tau;
            return 4.0 * pi * r * r * r / (3.0 * s.volume);
        }

        double ball_rate(const SceneSummary &s, double tau)
        {
            const double c = s.speed_of_light;
            return 4.0 * pi * c * c * c * tau * tau / s.volume;
        }

        double require_direct_delay(const SceneSummary &s)
        {
            if (!s.direct_delay)
                throw ConfigError("scene summary: direct-path delay is required for this expression");
            return *s.direct_delay;
        }

        double count_given_direct(const SceneSummary &s, double tau, double tau0)
        {
            if (tau < tau0)
                return 0.0;
            return (1.0 + ball_count(s, tau) - ball_count(s, tau0)) * s.beam_product();
        }

        RateValue rate_given_direct(const SceneSummary &s, double tau, double tau0)
        {
            RateValue r;
            r.spike = {tau0, s.beam_product()};
            r.density = tau > tau0 ? ball_rate(s, tau) * s.beam_product() : 0.0;
            return r;
        }

        double check_log_gain(double g)
        {
            if (!(g > 0.0 && g < 1.0))
                throw DomainError("wall gain must lie strictly between 0 and 1 for a finite reverberation time");
            return std::log(g);
        }

        double spreading(const SceneSummary &s, double tau)
        {
            const double a = 4.0 * pi * s.speed_of_light * tau / s.wavelength;
            return a * a;
        }
    } // namespace

    double eyring_count(const SceneSummary &scene, double tau)
    {
        return tau > 0.0 ? ball_count(scene, tau) : 0.0;
    }

    double approx_count(const SceneSummary &scene, double tau)
    {
        return count_given_direct(scene, tau, require_direct_delay(scene));
    }

    RateValue approx_rate(const SceneSummary &scene, double tau)
    {
        return rate_given_direct(scene, tau, require_direct_delay(scene));
    }

    double mean_count(const SceneSummary &scene, double tau)
    {
        return tau > 0.0 ? ball_count(scene, tau) * scene.beam_product() : 0.0;
    }

    double mean_rate(const SceneSummary &scene, double tau)
    {
        return tau > 0.0 ? ball_rate(scene, tau) * scene.beam_product() : 0.0;
    }

    double mixing_time(const SceneSummary &scene, double n_mix)
    {
        if (!(n_mix > 0.0))
            throw DomainError("mixing_time: N_mix must be positive");
        const double c = scene.speed_of_light;
        return std::sqrt(n_mix * scene.bandwidth * scene.volume / (4.0 * pi * c * c * c * scene.beam_product()));
    }

    double reverberation_time(const SceneSummary &scene)
    {
        const double lg = check_log_gain(scene.wall_gain);
        return -4.0 * scene.volume / (scene.speed_of_light * scene.surface * lg);
    }

    double kuttruff_correction(double wall_gain, double gamma2)
    {
        const double lg = check_log_gain(wall_gain);
        if (!(gamma2 >= 0.0))
            throw DomainError("kuttruff_correction: gamma^2 must be non-negative");
        const double denom = 1.0 + gamma2 * lg / 2.0;
        if (!(denom > 0.0))
            throw DomainError("kuttruff_correction: correction diverges for this gamma^2 and wall gain");
        return 1.0 / denom;
    }

    ModelMode parse_model_mode(std::string_view name)
    {
        if (name == "deterministic")
            return ModelMode::deterministic;
        if (name == "randomized")
            return ModelMode::randomized;
        throw ConfigError("unknown model mode '" + std::string(name) + "' (expected deterministic or randomized)");
    }

    std::string_view to_string(ModelMode mode)
    {
        return mode == ModelMode::deterministic ? "deterministic" : "randomized";
    }

    double mean_interactions(const SceneSummary &scene, double tau)
    {
        return tau * scene.speed_of_light * scene.surface / (4.0 * scene.volume);
    }

    double gain_second_moment(const SceneSummary &scene, double tau, ModelMode mode)
    {
        if (!(tau > 0.0))
            throw DomainError("gain_second_moment: delay must be positive");
        const double directivity = 1.0 / scene.beam_product();
        if (mode == ModelMode::deterministic)
        {
            const double tau0 = require_direct_delay(scene);
            if (tau < tau0)
                throw DomainError("gain_second_moment: delay precedes the direct path");
            if (tau == tau0)
                return directivity / spreading(scene, tau);
        }
        return std::pow(scene.wall_gain, mean_interactions(scene, tau)) / spreading(scene, tau) * directivity;
    }

    double PowerDelaySpectrum::density(double tau) const
    {
        return tau > onset ? tail_amplitude * std::exp(-tau / decay_time) : 0.0;
    }

    TheoryCurve PowerDelaySpectrum::sample(std::span<const double> delays) const
    {
        TheoryCurve c;
        c.delays.assign(delays.begin(), delays.end());
        c.values.reserve(delays.size());
        for (double t : delays)
            c.values.push_back(density(t));
        c.unit = CurveUnit::power_density;
        c.dirac = spike;
        c.validate();
        return c;
    }

    PowerDelaySpectrum pds(const SceneSummary &scene, ModelMode mode, double correction)
    {
        if (!(correction > 0.0))
            throw DomainError("pds: correction factor must be positive");
        PowerDelaySpectrum p;
        p.tail_amplitude = scene.wavelength * scene.wavelength * scene.speed_of_light / (4.0 * pi * scene.volume);
        p.decay_time = correction * reverberation_time(scene);
        if (mode == ModelMode::deterministic)
        {
            const double tau0 = require_direct_delay(scene);
            if (!(tau0 > 0.0))
                throw DomainError("pds: direct delay must be positive");
            p.onset = tau0;
            p.spike = DiracComponent{tau0, 1.0 / spreading(scene, tau0)};
        }
        return p;
    }

    double expected_received_power(const PowerDelaySpectrum &spectrum, double bandwidth, double tau)
    {
        if (!(bandwidth > 0.0))
            throw DomainError("expected_received_power: bandwidth must be positive");
        auto sinc2 = [](double x) {
            if (x == 0.0)
                return 1.0;
            const double s = std::sin(pi * x) / (pi * x);
            return s * s;
        };

        double total = 0.0;
        if (spectrum.spike)
            total += spectrum.spike->weight * sinc2(bandwidth * (tau - spectrum.spike->location));

        // Tail in pulse units x = B (tau - u). Near the pulse: unit cells between
        // sinc zeros. Far in the past of u (x < -far) sin^2 averages to 1/2 and
        // y = 1/x maps the half line onto [1/x_far, 0).
        constexpr double far = 200.0;
        const double x_high = bandwidth * (tau - spectrum.onset);
        if (spectrum.tail_amplitude == 0.0)
            return total;
        auto density = [&](double x) { return std::exp(-(tau - x / bandwidth) / spectrum.decay_time); };
        auto integrand = [&](double x) { return density(x) * sinc2(x); };
        using boost::math::quadrature::gauss;
        double tail = 0.0;
        double a = -far;
        while (a < x_high)
        {
            const double b = std::min(std::floor(a) + 1.0, x_high);
            tail += gauss<double, 15>::integrate(integrand, a, b);
            a = b;
        }
        const double x_far = std::min(-far, x_high);
        auto envelope = [&](double y) { return y < 0.0 ? density(1.0 / y) / (2.0 * pi * pi) : 0.0; };
        tail += boost::math::quadrature::gauss_kronrod<double, 31>::integrate(envelope, 1.0 / x_far, 0.0, 15, 1e-12);
        return total + spectrum.tail_amplitude * tail / bandwidth;
    }

    TheoryCurve expected_received_power(const PowerDelaySpectrum &spectrum, double bandwidth,
                                        std::span<const double> delays)
    {
        TheoryCurve c;
        c.delays.assign(delays.begin(), delays.end());
        c.values.reserve(delays.size());
        for (double t : delays)
            c.values.push_back(expected_received_power(spectrum, bandwidth, t));
        c.unit = CurveUnit::power;
        c.validate();
        return c;
    }

    double count_second_moment(const SceneSummary &scene, double tau)
    {
        const double half = scene.diagonal / (2.0 * scene.speed_of_light);
        const double m = mean_count(scene, tau);
        return m * m + 0.25 * (mean_count(scene, tau + half) - mean_count(scene, tau - half));
    }

    double count_upper_bound(const SceneSummary &scene, double tau)
    {
        return eyring_count(scene, tau) * std::min(scene.beam_fraction_tx, scene.beam_fraction_rx);
    }

    double rate_upper_bound(const SceneSummary &scene, double tau)
    {
        return tau > 0.0 ? ball_rate(scene, tau) * std::min(scene.beam_fraction_tx, scene.beam_fraction_rx) : 0.0;
    }

    // The conditional expressions coincide with approx_count/approx_rate; they
    // take tau0 explicitly because it is the conditioning variable here.
    double conditional_mean_count(const SceneSummary &scene, double tau, double direct_delay)
    {
        if (!(direct_delay > 0.0))
            throw DomainError("conditional_mean_count: direct delay must be positive");
        return count_given_direct(scene, tau, direct_delay);
    }

    RateValue conditional_rate(const SceneSummary &scene, double tau, double direct_delay)
    {
        if (!(direct_delay > 0.0))
            throw DomainError("conditional_rate: direct delay must be positive");
        return rate_given_direct(scene, tau, direct_delay);
    }

    void write_curve_csv(std::ostream &os, const TheoryCurve &curve)
    {
        curve.validate();
        if (curve.dirac)
            os << "# dirac_location=" << csv::number(curve.dirac->location)
               << ",dirac_weight=" << csv::number(curve.dirac->weight) << '\n';
        os << "tau_seconds,value,unit\n";
        const auto unit = to_string(curve.unit);
        for (std::size_t i = 0; i < curve.delays.size(); ++i)
            os << csv::number(curve.delays[i]) << ',' << csv::number(curve.values[i]) << ',' << unit << '\n';
    }

} // namespace mirrorroom
