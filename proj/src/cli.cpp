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

#include "mirrorroom/cli.hpp"
#include "mirrorroom/config.hpp"
#include "mirrorroom/csv.hpp"

#include <CLI11.hpp>

#include <algorithm>
#include <fstream>
#include <iostream>
#include <optional>
#include <sstream>

namespace mirrorroom
{
    namespace
    {
        struct CommonOptions
        {
            std::string config;
        };

        RunConfig load(const CommonOptions &opt, std::ostream &err)
        {
            RunConfig cfg = opt.config.empty() ? parse_config(nlohmann::json::object()) : load_config(opt.config);
            if (!cfg.radio.wavelength_small_for(cfg.room))
                err << "warning: carrier wavelength " << csv::number(cfg.radio.wavelength)
                    << " m is not small against the room; the specular ray model may not apply\n";
            return cfg;
        }

        std::ofstream open_file(const std::filesystem::path &path)
        {
            if (path.has_parent_path())
            {
                std::error_code ec;
                std::filesystem::create_directories(path.parent_path(), ec);
                if (ec)
                    throw IoError("cannot create directory '" + path.parent_path().string() + "': " + ec.message());
            }
            std::ofstream os(path, std::ios::binary);
            if (!os)
                throw IoError("cannot open '" + path.string() + "' for writing");
            os.imbue(std::locale::classic());
            return os;
        }

        TimeGrid parse_grid_flag(const std::string &text)
        {
            std::stringstream ss(text);
            ss.imbue(std::locale::classic());
            double start = 0.0, stop = 0.0, step = 0.0;
            char c1 = 0, c2 = 0;
            if (!(ss >> start >> c1 >> stop >> c2 >> step) || c1 != ':' || c2 != ':' || !ss.eof())
                throw ConfigError("--grid: expected start:stop:step in seconds, got '" + text + "'");
            return TimeGrid::covering(start, stop, step);
        }

        struct PathsOptions
        {
            std::optional<double> tau_max;
            std::string out;
        };

        int cmd_paths(const CommonOptions &common, const PathsOptions &opt, std::ostream &out, std::ostream &err)
        {
            const RunConfig cfg = load(common, err);
            if (!cfg.has_positions())
                throw ConfigError("positions: paths needs positions.tx_m and positions.rx_m");
            const double tau_max = opt.tau_max.value_or(cfg.output.tau_max);
            const PathList paths = enumerate_paths(cfg.room, cfg.tx_terminal(), cfg.rx_terminal(), cfg.radio, tau_max);
            if (opt.out.empty() || opt.out == "-")
                write_paths_csv(out, paths);
            else
            {
                auto os = open_file(opt.out);
                write_paths_csv(os, paths);
            }
            return exit_ok;
        }

        struct TheoryOptions
        {
            std::vector<std::string> curves;
            std::string grid;
            std::string model;
            bool correction = false;
            std::string out_dir;
        };

        int cmd_theory(const CommonOptions &common, const TheoryOptions &opt, std::ostream &err)
        {
            RunConfig cfg = load(common, err);
            const std::vector<std::string> curves = opt.curves.empty() ? cfg.output.curves : opt.curves;
            for (const auto &name : curves)
                if (name != "count" && name != "rate" && name != "pds" && name != "mixing")
                    throw ConfigError("--curves: unknown curve '" + name + "' (expected count, rate, pds, mixing)");
            const TimeGrid grid = opt.grid.empty() ? cfg.output.grid : parse_grid_flag(opt.grid);
            const ModelMode model = opt.model.empty() ? cfg.output.model : parse_model_mode(opt.model);
            const bool corrected = opt.correction || cfg.output.apply_correction;
            const std::filesystem::path dir = opt.out_dir.empty() ? cfg.output.dir : std::filesystem::path(opt.out_dir);

            const SceneSummary scene = cfg.scene();
            if (model == ModelMode::deterministic && !scene.direct_delay)
                throw ConfigError("positions: the deterministic model needs both positions");
            const std::vector<double> delays = grid.values();

            for (const auto &name : curves)
            {
                auto os = open_file(dir / (name + ".csv"));
                if (name == "mixing")
                {
                    os << "tau_mix_seconds,n_mix,bandwidth_hz,volume_m3,beam_product\n"
                       << csv::number(mixing_time(scene, cfg.n_mix)) << ',' << csv::number(cfg.n_mix) << ','
                       << csv::number(scene.bandwidth) << ',' << csv::number(scene.volume) << ','
                       << csv::number(scene.beam_product()) << '\n';
                    continue;
                }
                TheoryCurve curve;
                if (name == "pds")
                {
                    const double corr = corrected ? kuttruff_correction(scene.wall_gain, cfg.gamma2) : 1.0;
                    curve = pds(scene, model, corr).sample(delays);
                }
                else
                {
                    curve.delays = delays;
                    curve.unit = name == "count" ? CurveUnit::count : CurveUnit::rate;
                    for (double t : delays)
                    {
                        if (model == ModelMode::randomized)
                            curve.values.push_back(name == "count" ? mean_count(scene, t) : mean_rate(scene, t));
                        else if (name == "count")
                            curve.values.push_back(approx_count(scene, t));
                        else
                            curve.values.push_back(approx_rate(scene, t).density);
                    }
                    if (model == ModelMode::deterministic && name == "rate")
                        curve.dirac = approx_rate(scene, *scene.direct_delay).spike;
                }
                write_curve_csv(os, curve);
            }
            return exit_ok;
        }

        struct McOptions
        {
            std::optional<std::uint64_t> runs;
            std::optional<std::uint64_t> seed;
            std::optional<unsigned> threads;
            std::string mode;
            std::string out_dir;
            bool check = false;
        };

        int cmd_mc(const CommonOptions &common, const McOptions &opt, std::ostream &out, std::ostream &err)
        {
            RunConfig cfg = load(common, err);
            if (!cfg.mc)
                throw ConfigError("mc: section required for the mc command");
            McConfig &mc = *cfg.mc;
            if (opt.runs)
                mc.runs = static_cast<std::size_t>(*opt.runs);
            if (opt.seed)
                mc.seed = *opt.seed;
            if (opt.threads)
                mc.threads = *opt.threads;
            if (!opt.mode.empty())
                mc.mode = parse_randomization_mode(opt.mode);
            mc.validate();
            const std::filesystem::path dir = opt.out_dir.empty() ? cfg.output.dir : std::filesystem::path(opt.out_dir);

            const EnsembleResult result = run_ensemble(mc);
            const ComparisonReport report = compare_with_theory(result, mc);
            write_bundle(dir, result, report, to_json(cfg).dump(2));

            for (const auto &c : report.checks)
                out << (c.pass ? "PASS " : "FAIL ") << c.name << " value=" << csv::number(c.value)
                    << " tolerance=" << csv::number(c.tolerance) << '\n';
            out << "report: " << (report.pass() ? "PASS" : "FAIL") << " (" << (dir / "report.json").string() << ")\n";
            return (opt.check && !report.pass()) ? exit_check_failed : exit_ok;
        }

        struct SignalOptions
        {
            std::string out;
            std::optional<double> tau_max;
            std::uint64_t seed = 1;
        };

        int cmd_signal(const CommonOptions &common, const SignalOptions &opt, std::ostream &err)
        {
            const RunConfig cfg = load(common, err);
            if (!cfg.has_positions())
                throw ConfigError("positions: signal needs positions.tx_m and positions.rx_m");
            const double tau_max = opt.tau_max.value_or(cfg.output.tau_max);
            const PathList paths = enumerate_paths(cfg.room, cfg.tx_terminal(), cfg.rx_terminal(), cfg.radio, tau_max);
            const TimeGrid grid = cfg.output.signal_grid.value_or(default_trace_grid(cfg.radio, tau_max));
            Rng rng = make_stream(opt.seed, 0);
            const SignalTrace trace = synthesize_signal(paths.paths, cfg.radio, grid, cfg.phase_mode, &rng);
            const std::filesystem::path path = opt.out.empty() ? cfg.output.dir / "signal.csv" : std::filesystem::path(opt.out);
            auto os = open_file(path);
            write_trace_csv(os, trace);
            return exit_ok;
        }
    } // namespace

    int run_cli(const std::vector<std::string> &args, std::ostream &out, std::ostream &err)
    {
        CLI::App app{"Mirror-source radio channel toolkit for rectangular rooms", "mirrorroom"};
        app.require_subcommand(1);

        CommonOptions common;
        auto add_config = [&](CLI::App *sub) {
            sub->add_option("-c,--config", common.config, "JSON run configuration (schema_version 1)");
        };

        PathsOptions paths_opt;
        auto *paths = app.add_subcommand("paths", "List propagation paths for the configured positions as CSV");
        add_config(paths);
        paths->add_option("--tau-max", paths_opt.tau_max, "Delay horizon in seconds (overrides output.tau_max_s)");
        paths->add_option("-o,--out", paths_opt.out, "Output CSV file; '-' or absent writes to stdout");

        TheoryOptions theory_opt;
        auto *theory = app.add_subcommand("theory", "Write closed-form curves (count, rate, pds, mixing) as CSV");
        add_config(theory);
        theory->add_option("--curves", theory_opt.curves, "Comma-separated subset of count,rate,pds,mixing")
            ->delimiter(',');
        theory->add_option("--grid", theory_opt.grid, "Delay grid start:stop:step in seconds");
        theory->add_option("--model", theory_opt.model, "deterministic or randomized");
        theory->add_flag("--correction", theory_opt.correction, "Scale the reverberation time by the Kuttruff factor");
        theory->add_option("--out-dir", theory_opt.out_dir, "Output directory (overrides output.dir)");

        McOptions mc_opt;
        auto *mc = app.add_subcommand("mc", "Run a Monte Carlo ensemble and write the results bundle");
        add_config(mc);
        mc->add_option("--runs", mc_opt.runs, "Number of runs (overrides mc.runs)");
        mc->add_option("--seed", mc_opt.seed, "Master seed (overrides mc.seed)");
        mc->add_option("--threads", mc_opt.threads, "Worker cap; 0 uses all cores (overrides mc.threads)");
        mc->add_option("--mode", mc_opt.mode,
                       "both-random, fixed-rx, fixed-orientation-tx or fixed-distance (overrides mc.mode)");
        mc->add_option("--out-dir", mc_opt.out_dir, "Bundle directory (overrides output.dir)");
        mc->add_flag("--check", mc_opt.check, "Exit with status 1 when any report check fails");

        SignalOptions signal_opt;
        auto *signal = app.add_subcommand("signal", "Synthesize the received baseband signal as CSV");
        add_config(signal);
        signal->add_option("-o,--out", signal_opt.out, "Output CSV file (default output.dir/signal.csv)");
        signal->add_option("--tau-max", signal_opt.tau_max, "Delay horizon in seconds (overrides output.tau_max_s)");
        signal->add_option("--seed", signal_opt.seed, "Seed for radio.phase_mode = random");

        std::vector<std::string> reversed(args.rbegin(), args.rend());
        try
        {
            app.parse(reversed);
        }
        catch (const CLI::ParseError &e)
        {
            const int code = app.exit(e, out, err);
            return code == 0 ? exit_ok : exit_usage;
        }

        try
        {
            if (paths->parsed())
                return cmd_paths(common, paths_opt, out, err);
            if (theory->parsed())
                return cmd_theory(common, theory_opt, err);
            if (mc->parsed())
                return cmd_mc(common, mc_opt, out, err);
            if (signal->parsed())
                return cmd_signal(common, signal_opt, err);
        }
        catch (const IoError &e)
        {
            err << "error: " << e.what() << '\n';
            return exit_io;
        }
        catch (const Error &e)
        {
            err << "error: " << e.what() << '\n';
            return exit_usage;
        }
        return exit_usage;
    }

} // namespace mirrorroom
