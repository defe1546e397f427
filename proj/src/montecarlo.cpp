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

#include "mirrorroom/montecarlo.hpp"
#include "mirrorroom/csv.hpp"

#include <json.hpp>

#include <algorithm>
#include <atomic>
#include <cmath>
#include <exception>
#include <fstream>
#include <limits>
#include <mutex>
#include <numbers>
#include <thread>

namespace mirrorroom
{
    RandomizationMode parse_randomization_mode(std::string_view name)
    {
        if (name == "both-random")
            return RandomizationMode::both_random;
        if (name == "fixed-rx")
            return RandomizationMode::fixed_rx;
        if (name == "fixed-orientation-tx")
            return RandomizationMode::fixed_orientation_tx;
        if (name == "fixed-distance")
            return RandomizationMode::fixed_distance;
        throw ConfigError("unknown randomization mode '" + std::string(name) +
                          "' (expected both-random, fixed-rx, fixed-orientation-tx or fixed-distance)");
    }

    std::string_view to_string(RandomizationMode mode)
    {
        switch (mode)
        {
        case RandomizationMode::both_random:
            return "both-random";
        case RandomizationMode::fixed_rx:
            return "fixed-rx";
        case RandomizationMode::fixed_orientation_tx:
            return "fixed-orientation-tx";
        case RandomizationMode::fixed_distance:
            return "fixed-distance";
        }
        return "unknown";
    }

    void McConfig::validate() const
    {
        if (runs < 1)
            throw ConfigError("mc.runs: at least one run is required");
        radio.validate();
        grid.validate();
        if (!(tau_max > 0.0) || !std::isfinite(tau_max))
            throw ConfigError("mc.tau_max_s: must be positive");
        if (!(moment_cutoff > 0.0) || moment_cutoff > tau_max)
            throw ConfigError("mc.moment_cutoff_s: must lie in (0, tau_max]");
        if (grid.start < 0.0 || grid.stop() > tau_max * (1.0 + 1e-12))
            throw ConfigError("mc.grid: must lie within [0, tau_max]");
        if (!(fit_stop > fit_start))
            throw ConfigError("mc.fit_window_s: stop must exceed start");
        if (mode != RandomizationMode::both_random && !room.contains(rx_position))
            throw ConfigError("positions.rx_m: receiver must lie inside the room");
        if (mode == RandomizationMode::fixed_distance)
        {
            const double d = fixed_distance();
            if (!(d > 0.0) || !(d < room.diagonal()))
                throw ConfigError("mc.distance_m: distance must lie in (0, room diagonal)");
        }
    }

    double McEstimate::sample_variance(std::size_t i) const
    {
        return std_error.at(i) * std_error.at(i) * static_cast<double>(runs);
    }

    double Ecdf::operator()(double x) const
    {
        const auto it = std::upper_bound(values.begin(), values.end(), x);
        if (it == values.begin())
            return 0.0;
        return probabilities[static_cast<std::size_t>(it - values.begin()) - 1];
    }

    double Ecdf::quantile(double p) const
    {
        if (values.empty())
            throw EmptySampleError("ecdf: empty");
        const auto it = std::lower_bound(probabilities.begin(), probabilities.end(), p);
        if (it == probabilities.end())
            return values.back();
        return values[static_cast<std::size_t>(it - probabilities.begin())];
    }

    Ecdf ecdf(std::span<const double> samples)
    {
        std::vector<double> v;
        v.reserve(samples.size());
        for (double s : samples)
            if (std::isfinite(s))
                v.push_back(s);
        if (v.empty())
            throw EmptySampleError("ecdf: no finite samples");
        std::sort(v.begin(), v.end());
        const double n = static_cast<double>(v.size());
        Ecdf out;
        // Tied values collapse into one step so probabilities strictly increase.
        for (std::size_t i = 0; i < v.size(); ++i)
        {
            if (i + 1 < v.size() && v[i + 1] == v[i])
                continue;
            out.values.push_back(v[i]);
            out.probabilities.push_back(static_cast<double>(i + 1) / n);
        }
        return out;
    }

    namespace
    {
        struct Prepared
        {
            std::vector<double> grid;
            TimeGrid trace_grid;
            // Index of each evaluation delay in the trace grid, empty when the
            // grids are not aligned.
            std::vector<std::size_t> eval_index;
        };

        Prepared prepare(const McConfig &cfg)
        {
            Prepared p;
            p.grid = cfg.grid.values();
            const double h = 1.0 / (4.0 * cfg.radio.bandwidth);
            const double pad = std::ceil(default_padding(cfg.radio) / h) * h;
            const double stop = std::max(cfg.moment_cutoff, cfg.grid.stop()) + pad;
            p.trace_grid = TimeGrid::covering(cfg.grid.start - pad, stop, h);

            const double ratio = cfg.grid.step / h;
            const double offset = pad / h;
            if (std::abs(ratio - std::round(ratio)) < 1e-9 && std::abs(offset - std::round(offset)) < 1e-9)
            {
                const auto r = static_cast<std::size_t>(std::llround(ratio));
                const auto o = static_cast<std::size_t>(std::llround(offset));
                for (std::size_t i = 0; i < p.grid.size(); ++i)
                {
                    const std::size_t j = o + i * r;
                    if (j >= p.trace_grid.count)
                    {
                        p.eval_index.clear();
                        break;
                    }
                    p.eval_index.push_back(j);
                }
            }
            return p;
        }

        struct RunOutput
        {
            RunRecord record;
            std::vector<double> counts;
            std::vector<double> power;
        };

        struct Pose
        {
            Vec3 tx, rx, tx_orientation, rx_orientation;
        };

        Pose sample_pose(const McConfig &cfg, Rng &rng)
        {
            Pose p;
            switch (cfg.mode)
            {
            case RandomizationMode::both_random:
                p.tx = sample_position(rng, cfg.room);
                p.tx_orientation = sample_orientation(rng);
                p.rx = sample_position(rng, cfg.room);
                p.rx_orientation = sample_orientation(rng);
                break;
            case RandomizationMode::fixed_rx:
                p.tx = sample_position(rng, cfg.room);
                p.tx_orientation = sample_orientation(rng);
                p.rx = cfg.rx_position;
                p.rx_orientation = cfg.rx_pattern.orientation();
                break;
            case RandomizationMode::fixed_orientation_tx:
                p.tx = sample_position(rng, cfg.room);
                p.tx_orientation = cfg.tx_pattern.orientation();
                p.rx = cfg.rx_position;
                p.rx_orientation = cfg.rx_pattern.orientation();
                break;
            case RandomizationMode::fixed_distance:
            {
                // Rejection on the pair keeps the joint law uniform given the distance.
                const double d = cfg.fixed_distance();
                constexpr int max_attempts = 1'000'000;
                int attempt = 0;
                for (; attempt < max_attempts; ++attempt)
                {
                    p.rx = sample_position(rng, cfg.room);
                    p.tx = p.rx + d * sample_orientation(rng);
                    if (cfg.room.contains(p.tx))
                        break;
                }
                if (attempt == max_attempts)
                    throw ConfigError("mc.distance_m: could not place a transmitter at the requested distance");
                p.tx_orientation = sample_orientation(rng);
                p.rx_orientation = sample_orientation(rng);
                break;
            }
            }
            return p;
        }

        RunOutput simulate_run(const McConfig &cfg, const Prepared &prep, std::size_t run)
        {
            Rng rng = make_stream(cfg.seed, run);
            const Pose pose = sample_pose(cfg, rng);

            const Terminal tx{pose.tx, cfg.tx_pattern.kind() == AntennaPattern::Kind::isotropic
                                           ? cfg.tx_pattern
                                           : cfg.tx_pattern.with_orientation(pose.tx_orientation)};
            const Terminal rx{pose.rx, cfg.rx_pattern.kind() == AntennaPattern::Kind::isotropic
                                           ? cfg.rx_pattern
                                           : cfg.rx_pattern.with_orientation(pose.rx_orientation)};
            PathList paths = enumerate_paths(cfg.room, tx, rx, cfg.radio, std::max(cfg.tau_max, prep.grid.back()));

            RunOutput out;
            out.record.run = run;
            out.record.tx_position = pose.tx;
            out.record.rx_position = pose.rx;
            out.record.tx_orientation = pose.tx_orientation;
            out.record.rx_orientation = pose.rx_orientation;
            out.record.direct_delay = path_delay(pose.tx, pose.rx, cfg.radio.speed_of_light);
            out.record.path_count = paths.size();
            out.counts = arrival_counts(paths, prep.grid);

            if (!cfg.synthesize)
                return out;

            const std::size_t used = arrival_count(paths, cfg.moment_cutoff);
            std::vector<PathComponent> signal_paths(paths.paths.begin(), paths.paths.begin() + static_cast<std::ptrdiff_t>(used));
            if (cfg.phase_mode == PhaseMode::random)
                for (auto &p : signal_paths)
                    p.phase = 2.0 * std::numbers::pi * uniform01(rng);

            const SignalTrace trace = synthesize_signal(signal_paths, cfg.radio, prep.trace_grid);
            out.power.resize(prep.grid.size());
            if (!prep.eval_index.empty())
            {
                for (std::size_t i = 0; i < prep.grid.size(); ++i)
                    out.power[i] = std::norm(trace.samples[prep.eval_index[i]]);
            }
            else
            {
                const SignalTrace at_grid = synthesize_signal(signal_paths, cfg.radio, cfg.grid);
                for (std::size_t i = 0; i < prep.grid.size(); ++i)
                    out.power[i] = std::norm(at_grid.samples[i]);
            }

            if (trace.energy() > 0.0)
                out.record.moments = signal_moments(trace);
            return out;
        }

        // Mean and standard error of per-run curves, reduced in run order.
        McEstimate reduce(const std::vector<double> &grid, const std::vector<RunOutput> &outs,
                          const std::vector<double> RunOutput::*curve, bool square)
        {
            const std::size_t n = outs.size();
            McEstimate e;
            e.grid = grid;
            e.runs = n;
            e.mean.assign(grid.size(), 0.0);
            e.std_error.assign(grid.size(), 0.0);
            for (std::size_t i = 0; i < grid.size(); ++i)
            {
                double sum = 0.0;
                for (const auto &o : outs)
                {
                    const double v = (o.*curve)[i];
                    sum += square ? v * v : v;
                }
                const double mean = sum / static_cast<double>(n);
                double ss = 0.0;
                for (const auto &o : outs)
                {
                    const double v = (o.*curve)[i];
                    const double d = (square ? v * v : v) - mean;
                    ss += d * d;
                }
                e.mean[i] = mean;
                e.std_error[i] = n > 1 ? std::sqrt(ss / static_cast<double>(n - 1) / static_cast<double>(n)) : 0.0;
            }
            return e;
        }
    } // namespace

    EnsembleResult run_ensemble(const McConfig &cfg)
    {
        cfg.validate();
        const Prepared prep = prepare(cfg);

        std::vector<RunOutput> outs(cfg.runs);
        unsigned workers = cfg.threads != 0 ? cfg.threads : std::max(1u, std::thread::hardware_concurrency());
        workers = static_cast<unsigned>(std::min<std::size_t>(workers, cfg.runs));

        std::atomic<std::size_t> next{0};
        std::exception_ptr failure;
        std::mutex failure_mutex;
        auto work = [&] {
            for (;;)
            {
                const std::size_t i = next.fetch_add(1);
                if (i >= cfg.runs)
                    return;
                try
                {
                    outs[i] = simulate_run(cfg, prep, i);
                }
                catch (...)
                {
                    std::lock_guard lock(failure_mutex);
                    if (!failure)
                        failure = std::current_exception();
                    next.store(cfg.runs);
                    return;
                }
            }
        };
        if (workers <= 1)
            work();
        else
        {
            std::vector<std::jthread> pool;
            pool.reserve(workers);
            for (unsigned w = 0; w < workers; ++w)
                pool.emplace_back(work);
        }
        if (failure)
            std::rethrow_exception(failure);

        EnsembleResult res;
        res.count = reduce(prep.grid, outs, &RunOutput::counts, false);
        res.count_raw_second = reduce(prep.grid, outs, &RunOutput::counts, true);
        if (cfg.synthesize)
        {
            res.power = reduce(prep.grid, outs, &RunOutput::power, false);
            std::vector<double> mean_delays, spreads;
            for (const auto &o : outs)
            {
                if (o.record.moments)
                {
                    mean_delays.push_back(o.record.moments->mean_delay);
                    spreads.push_back(o.record.moments->rms_spread);
                }
                else
                    ++res.missing_moments;
            }
            if (!mean_delays.empty())
            {
                res.mean_delay = ecdf(mean_delays);
                res.rms_spread = ecdf(spreads);
            }
        }
        res.runs.reserve(outs.size());
        for (auto &o : outs)
            res.runs.push_back(std::move(o.record));
        return res;
    }

    bool ComparisonReport::pass() const
    {
        return std::all_of(checks.begin(), checks.end(), [](const Check &c) { return c.pass; });
    }

    const Check *ComparisonReport::find(std::string_view name) const
    {
        for (const auto &c : checks)
            if (c.name == name)
                return &c;
        return nullptr;
    }

    double fit_decay_time(std::span<const double> grid, std::span<const double> values, double start, double stop)
    {
        if (grid.empty() || grid.size() != values.size())
            throw ConfigError("fit window: grid and values must be non-empty and of equal length");
        if (start < grid.front() - 1e-15 || stop > grid.back() + 1e-15 || !(stop > start))
            throw ConfigError("fit window [" + csv::number(start) + ", " + csv::number(stop) +
                              "] s lies outside the evaluation grid");
        double n = 0.0, sx = 0.0, sy = 0.0, sxx = 0.0, sxy = 0.0;
        for (std::size_t i = 0; i < grid.size(); ++i)
        {
            if (grid[i] < start || grid[i] > stop || !(values[i] > 0.0))
                continue;
            const double x = grid[i], y = std::log(values[i]);
            n += 1.0;
            sx += x;
            sy += y;
            sxx += x * x;
            sxy += x * y;
        }
        if (n < 2.0)
            throw ConfigError("fit window: fewer than two positive samples");
        const double slope = (n * sxy - sx * sy) / (n * sxx - sx * sx);
        return -1.0 / slope;
    }

    ComparisonReport compare_with_theory(const EnsembleResult &result, const McConfig &cfg)
    {
        const SceneSummary scene = SceneSummary::from(cfg.room, cfg.radio, cfg.tx_pattern, cfg.rx_pattern);
        const Tolerances &tol = cfg.tolerances;
        const auto &grid = result.count.grid;
        ComparisonReport rep;

        auto max_rel_error = [&](auto theory_at, auto include) {
            double worst = -1.0;
            for (std::size_t i = 0; i < grid.size(); ++i)
            {
                const double th = theory_at(grid[i]);
                if (!include(grid[i], th) || !(th > 0.0))
                    continue;
                worst = std::max(worst, std::abs(result.count.mean[i] - th) / th);
            }
            return worst;
        };

        switch (cfg.mode)
        {
        case RandomizationMode::both_random:
        case RandomizationMode::fixed_rx:
        {
            const double err = max_rel_error([&](double t) { return mean_count(scene, t); },
                                             [&](double, double th) { return th >= tol.min_count; });
            Check c{"mean_count_rel_error", err, tol.mean_count_rel, err >= 0.0 && err <= tol.mean_count_rel, ""};
            c.detail = err < 0.0 ? "no grid delay reaches the minimum expected count"
                                 : "max |mc - E[N]| / E[N] where E[N] >= " + csv::number(tol.min_count);
            rep.checks.push_back(c);

            // Raw second moment against the uncorrelated-image approximation.
            double worst = -1.0;
            double min_ratio = std::numeric_limits<double>::infinity();
            for (std::size_t i = 0; i < grid.size(); ++i)
            {
                if (grid[i] < tol.second_moment_min_delay)
                    continue;
                const double approx = count_second_moment(scene, grid[i]);
                if (!(approx > 0.0))
                    continue;
                worst = std::max(worst, std::abs(result.count_raw_second.mean[i] - approx) / approx);
                const double m = mean_count(scene, grid[i]);
                const double approx_var = approx - m * m;
                const double emp_var = result.count.sample_variance(i);
                min_ratio = std::min(min_ratio, emp_var > 0.0 ? approx_var / emp_var
                                                              : std::numeric_limits<double>::infinity());
            }
            rep.checks.push_back({"second_moment_rel_error", worst, tol.second_moment_rel,
                                  worst >= 0.0 && worst <= tol.second_moment_rel,
                                  "max |E_mc[N^2] - approx| / approx for tau >= " +
                                      csv::number(tol.second_moment_min_delay) + " s"});
            if (tol.variance_overshoot_ratio)
                rep.checks.push_back({"variance_overshoot_min_ratio", min_ratio, *tol.variance_overshoot_ratio,
                                      min_ratio >= *tol.variance_overshoot_ratio,
                                      "min (approx E[N^2] - E[N]^2) / var_mc over tau >= " +
                                          csv::number(tol.second_moment_min_delay) + " s"});
            else
                rep.metrics.emplace_back("variance_overshoot_min_ratio", min_ratio);
            break;
        }
        case RandomizationMode::fixed_orientation_tx:
        {
            double worst_sigma = -std::numeric_limits<double>::infinity();
            double worst_equality = 0.0;
            // The transmitter is the randomized terminal here, so only an isotropic
            // transmitter gives exact equality. With an isotropic receiver the
            // departure cones of the image lattice around the fixed receiver are
            // not uniform and the count oscillates about the bound.
            const bool equality = cfg.tx_pattern.kind() == AntennaPattern::Kind::isotropic;
            for (std::size_t i = 0; i < grid.size(); ++i)
            {
                const double bound = count_upper_bound(scene, grid[i]);
                const double se = result.count.std_error[i];
                const double excess = result.count.mean[i] - bound;
                if (excess > 0.0)
                    worst_sigma = std::max(worst_sigma, se > 0.0 ? excess / se : std::numeric_limits<double>::infinity());
                else
                    worst_sigma = std::max(worst_sigma, 0.0);
                if (equality && bound >= 1.0)
                    worst_equality = std::max(worst_equality, se > 0.0 ? std::abs(excess) / se
                                                                       : std::numeric_limits<double>::infinity());
            }
            rep.checks.push_back({"count_upper_bound_sigma", worst_sigma, tol.bound_sigmas,
                                  worst_sigma <= tol.bound_sigmas,
                                  "max (mc - bound) / se over the grid"});
            if (equality)
                rep.checks.push_back({"count_upper_bound_equality_sigma", worst_equality, tol.bound_sigmas,
                                      worst_equality <= tol.bound_sigmas,
                                      "max |mc - bound| / se where bound >= 1 (isotropic transmitter)"});
            break;
        }
        case RandomizationMode::fixed_distance:
        {
            const double tau0 = cfg.fixed_distance() / cfg.radio.speed_of_light;
            const double from = tau0 + scene.diagonal / cfg.radio.speed_of_light;
            const double err = max_rel_error([&](double t) { return conditional_mean_count(scene, t, tau0); },
                                             [&](double t, double) { return t >= from; });
            rep.checks.push_back({"conditional_count_rel_error", err, tol.conditional_rel,
                                  err >= 0.0 && err <= tol.conditional_rel,
                                  "max |mc - E[N|tau0]| / E[N|tau0] for tau >= tau0 + D/c"});
            break;
        }
        }

        if (result.power)
        {
            rep.reverberation_time = reverberation_time(scene);
            rep.correction = kuttruff_correction(scene.wall_gain, cfg.gamma2);
            const double fitted = fit_decay_time(result.power->grid, result.power->mean, cfg.fit_start, cfg.fit_stop);
            rep.fitted_decay_time = fitted;
            const double corrected = rep.correction * rep.reverberation_time;
            const double err = std::abs(fitted / corrected - 1.0);
            rep.checks.push_back({"tail_fit_rel_error", err, tol.tail_fit_rel, err <= tol.tail_fit_rel,
                                  "|T_fit / (xi T) - 1| over the fit window"});
            const double discrepancy = fitted / rep.reverberation_time - 1.0;
            if (tol.uncorrected_discrepancy)
                rep.checks.push_back({"uncorrected_discrepancy", discrepancy, tol.uncorrected_band,
                                      std::abs(discrepancy - *tol.uncorrected_discrepancy) <= tol.uncorrected_band,
                                      "T_fit / T - 1, expected " + csv::number(*tol.uncorrected_discrepancy)});
            else
                rep.metrics.emplace_back("uncorrected_discrepancy", discrepancy);
            rep.metrics.emplace_back("uncorrected_slope_deviation", 1.0 - rep.reverberation_time / fitted);

            for (const double corr : {1.0, rep.correction})
            {
                const PowerDelaySpectrum spectrum = pds(scene, ModelMode::randomized, corr);
                double worst = 0.0;
                for (std::size_t i = 0; i < result.power->grid.size(); ++i)
                {
                    const double t = result.power->grid[i];
                    if (t < cfg.fit_start || t > cfg.fit_stop)
                        continue;
                    const double th = expected_received_power(spectrum, cfg.radio.bandwidth, t);
                    worst = std::max(worst, std::abs(result.power->mean[i] - th) / th);
                }
                rep.metrics.emplace_back(corr == 1.0 ? "power_rel_error_uncorrected" : "power_rel_error_corrected",
                                         worst);
            }
        }
        return rep;
    }

    namespace
    {
        std::ofstream open_output(const std::filesystem::path &path)
        {
            std::ofstream os(path, std::ios::binary);
            if (!os)
                throw IoError("cannot open '" + path.string() + "' for writing");
            os.imbue(std::locale::classic());
            return os;
        }

        void write_estimate(std::ostream &os, const McEstimate &e, const McEstimate *second)
        {
            os << "tau_seconds,mean,std_error";
            if (second)
                os << ",raw_second_moment,raw_second_moment_std_error";
            os << '\n';
            for (std::size_t i = 0; i < e.grid.size(); ++i)
            {
                os << csv::number(e.grid[i]) << ',' << csv::number(e.mean[i]) << ',' << csv::number(e.std_error[i]);
                if (second)
                    os << ',' << csv::number(second->mean[i]) << ',' << csv::number(second->std_error[i]);
                os << '\n';
            }
        }

        void write_ecdf(std::ostream &os, const std::optional<Ecdf> &e)
        {
            os << "value,probability\n";
            if (!e)
                return;
            for (std::size_t i = 0; i < e->size(); ++i)
                os << csv::number(e->values[i]) << ',' << csv::number(e->probabilities[i]) << '\n';
        }

        nlohmann::json finite_or_null(double v)
        {
            return std::isfinite(v) ? nlohmann::json(v) : nlohmann::json(nullptr);
        }
    } // namespace

    void write_bundle(const std::filesystem::path &dir, const EnsembleResult &result, const ComparisonReport &report,
                      const std::string &manifest_json)
    {
        std::error_code ec;
        std::filesystem::create_directories(dir, ec);
        if (ec)
            throw IoError("cannot create output directory '" + dir.string() + "': " + ec.message());

        {
            auto os = open_output(dir / "counts.csv");
            write_estimate(os, result.count, &result.count_raw_second);
        }
        {
            auto os = open_output(dir / "power.csv");
            if (result.power)
                write_estimate(os, *result.power, nullptr);
            else
                os << "tau_seconds,mean,std_error\n";
        }
        {
            auto os = open_output(dir / "ecdf_mean_delay.csv");
            write_ecdf(os, result.mean_delay);
        }
        {
            auto os = open_output(dir / "ecdf_rms.csv");
            write_ecdf(os, result.rms_spread);
        }

        nlohmann::ordered_json rep;
        rep["pass"] = report.pass();
        rep["runs"] = result.count.runs;
        rep["missing_moments"] = result.missing_moments;
        if (result.power)
        {
            rep["reverberation_time_s"] = report.reverberation_time;
            rep["correction_factor"] = report.correction;
            rep["fitted_decay_time_s"] = report.fitted_decay_time ? nlohmann::json(*report.fitted_decay_time)
                                                                  : nlohmann::json(nullptr);
        }
        rep["checks"] = nlohmann::json::array();
        for (const auto &c : report.checks)
            rep["checks"].push_back({{"name", c.name},
                                     {"value", finite_or_null(c.value)},
                                     {"tolerance", c.tolerance},
                                     {"pass", c.pass},
                                     {"detail", c.detail}});
        rep["metrics"] = nlohmann::json::object();
        for (const auto &[name, value] : report.metrics)
            rep["metrics"][name] = finite_or_null(value);
        {
            auto os = open_output(dir / "report.json");
            os << rep.dump(2) << '\n';
        }
        {
            auto os = open_output(dir / "manifest.json");
            os << manifest_json << '\n';
        }
    }

} // namespace mirrorroom
