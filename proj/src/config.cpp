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

#include "mirrorroom/config.hpp"

#include <fstream>
#include <set>
#include <sstream>

namespace mirrorroom
{
    using nlohmann::json;

    namespace
    {
        // Strict reader for one JSON object: typed getters record the keys they
        // consume and finish() rejects anything left over.
        class Section
        {
        public:
            Section(const json &node, std::string path) : node_(node), path_(std::move(path))
            {
                if (!node_.is_object())
                    fail(path_, "expected an object");
            }

            bool has(const std::string &key) const { return node_.contains(key); }

            std::string key_path(const std::string &key) const { return path_.empty() ? key : path_ + "." + key; }

            const json *get(const std::string &key)
            {
                seen_.insert(key);
                const auto it = node_.find(key);
                return it == node_.end() ? nullptr : &*it;
            }

            std::optional<double> number(const std::string &key)
            {
                const json *v = get(key);
                if (!v)
                    return std::nullopt;
                if (!v->is_number())
                    fail(key_path(key), "expected a number");
                return v->get<double>();
            }

            double number(const std::string &key, double fallback) { return number(key).value_or(fallback); }

            std::optional<std::uint64_t> unsigned_integer(const std::string &key)
            {
                const json *v = get(key);
                if (!v)
                    return std::nullopt;
                if (v->is_number_unsigned())
                    return v->get<std::uint64_t>();
                if (v->is_number_integer())
                    fail(key_path(key), "expected a non-negative integer");
                fail(key_path(key), "expected an integer");
            }

            std::optional<bool> boolean(const std::string &key)
            {
                const json *v = get(key);
                if (!v)
                    return std::nullopt;
                if (!v->is_boolean())
                    fail(key_path(key), "expected true or false");
                return v->get<bool>();
            }

            std::optional<std::string> string(const std::string &key)
            {
                const json *v = get(key);
                if (!v)
                    return std::nullopt;
                if (!v->is_string())
                    fail(key_path(key), "expected a string");
                return v->get<std::string>();
            }

            std::optional<std::vector<double>> numbers(const std::string &key, std::size_t expected)
            {
                const json *v = get(key);
                if (!v)
                    return std::nullopt;
                if (!v->is_array() || v->size() != expected)
                    fail(key_path(key), "expected an array of " + std::to_string(expected) + " numbers");
                std::vector<double> out;
                for (std::size_t i = 0; i < v->size(); ++i)
                {
                    if (!(*v)[i].is_number())
                        fail(key_path(key) + "[" + std::to_string(i) + "]", "expected a number");
                    out.push_back((*v)[i].get<double>());
                }
                return out;
            }

            std::optional<Vec3> vec3(const std::string &key)
            {
                const auto v = numbers(key, 3);
                if (!v)
                    return std::nullopt;
                return Vec3((*v)[0], (*v)[1], (*v)[2]);
            }

            std::optional<Section> child(const std::string &key)
            {
                const json *v = get(key);
                if (!v)
                    return std::nullopt;
                return Section(*v, key_path(key));
            }

            void finish() const
            {
                for (auto it = node_.begin(); it != node_.end(); ++it)
                    if (!seen_.count(it.key()))
                        fail(key_path(it.key()), "unknown key");
            }

            [[noreturn]] static void fail(const std::string &path, const std::string &what)
            {
                throw ConfigError(path + ": " + what);
            }

            const std::string &path() const { return path_; }

        private:
            const json &node_;
            std::string path_;
            std::set<std::string> seen_;
        };

        // Re-throws library validation errors with the section's key path.
        template <class F>
        auto at_path(const std::string &path, F &&f)
        {
            try
            {
                return f();
            }
            catch (const ConfigError &e)
            {
                throw ConfigError(path + ": " + e.what());
            }
        }

        TimeGrid parse_grid(Section s)
        {
            const double start = s.number("start_s", 0.0);
            const auto stop = s.number("stop_s");
            const auto step = s.number("step_s");
            s.finish();
            if (!stop || !step)
                Section::fail(s.path(), "start_s, stop_s and step_s are required (start_s defaults to 0)");
            return at_path(s.path(), [&] { return TimeGrid::covering(start, *stop, *step); });
        }

        AntennaSpec parse_antenna(Section s)
        {
            AntennaSpec spec;
            const std::string kind = s.string("pattern").value_or("isotropic");
            const auto omega = s.number("beam_fraction");
            const auto orientation = s.vec3("orientation");
            const auto aim = s.string("aim");
            s.finish();
            if (aim && *aim != "los")
                Section::fail(s.key_path("aim"), "only \"los\" is supported");
            if (aim && orientation)
                Section::fail(s.key_path("aim"), "give either aim or orientation, not both");
            spec.aim_los = aim.has_value();
            if (kind == "isotropic")
            {
                if (omega && *omega != 1.0)
                    Section::fail(s.key_path("beam_fraction"), "isotropic patterns have beam fraction 1");
                spec.pattern = AntennaPattern::isotropic();
            }
            else if (kind == "cap")
            {
                if (!omega)
                    Section::fail(s.key_path("beam_fraction"), "required for cap patterns");
                spec.pattern = at_path(s.key_path("beam_fraction"), [&] {
                    return AntennaPattern::cap(*omega, orientation.value_or(Vec3::UnitZ()));
                });
            }
            else
                Section::fail(s.key_path("pattern"), "expected \"isotropic\" or \"cap\"");
            return spec;
        }

        // Number, or null to switch the check off.
        void optional_number(Section &s, const char *key, std::optional<double> &slot)
        {
            const json *v = s.get(key);
            if (!v)
                return;
            if (v->is_null())
                slot.reset();
            else if (v->is_number())
                slot = v->get<double>();
            else
                Section::fail(s.key_path(key), "expected a number or null");
        }

        Tolerances parse_tolerances(Section s)
        {
            Tolerances t;
            t.mean_count_rel = s.number("mean_count_rel", t.mean_count_rel);
            t.min_count = s.number("min_count", t.min_count);
            t.bound_sigmas = s.number("bound_sigmas", t.bound_sigmas);
            t.conditional_rel = s.number("conditional_rel", t.conditional_rel);
            t.tail_fit_rel = s.number("tail_fit_rel", t.tail_fit_rel);
            optional_number(s, "uncorrected_discrepancy", t.uncorrected_discrepancy);
            t.uncorrected_band = s.number("uncorrected_band", t.uncorrected_band);
            t.second_moment_rel = s.number("second_moment_rel", t.second_moment_rel);
            t.second_moment_min_delay = s.number("second_moment_min_delay_s", t.second_moment_min_delay);
            optional_number(s, "variance_overshoot_ratio", t.variance_overshoot_ratio);
            s.finish();
            return t;
        }

        json grid_json(const TimeGrid &g)
        {
            return {{"start_s", g.start}, {"stop_s", g.stop()}, {"step_s", g.step}};
        }

        json antenna_json(const AntennaSpec &a)
        {
            json j;
            if (a.pattern.kind() == AntennaPattern::Kind::isotropic)
                j["pattern"] = "isotropic";
            else
            {
                j["pattern"] = "cap";
                j["beam_fraction"] = a.pattern.beam_fraction();
                if (a.aim_los)
                    j["aim"] = "los";
                else
                    j["orientation"] = {a.pattern.orientation()[0], a.pattern.orientation()[1],
                                        a.pattern.orientation()[2]};
            }
            return j;
        }

        json vec_json(const Vec3 &v) { return {v[0], v[1], v[2]}; }
    } // namespace

    RunConfig parse_config(const json &doc)
    {
        Section top(doc, "");
        RunConfig cfg;

        if (const auto v = top.unsigned_integer("schema_version"); v && *v != config_schema_version)
            Section::fail("schema_version", "unsupported version " + std::to_string(*v) + " (expected 1)");

        if (auto s = top.child("room"))
        {
            const auto dims = s->vec3("dimensions_m").value_or(Vec3(5.0, 5.0, 3.0));
            const auto g = s->number("wall_gain");
            const auto gains = s->numbers("wall_gains", 6);
            cfg.gamma2 = s->number("gamma2", cfg.gamma2);
            s->finish();
            if (g && gains)
                Section::fail(s->key_path("wall_gains"), "give either wall_gain or wall_gains, not both");
            cfg.room = at_path(s->path(), [&] {
                if (gains)
                    return Room(dims, {(*gains)[0], (*gains)[1], (*gains)[2], (*gains)[3], (*gains)[4], (*gains)[5]});
                return Room(dims, g.value_or(0.6));
            });
            if (!(cfg.gamma2 >= 0.0))
                Section::fail(s->key_path("gamma2"), "must be non-negative");
        }

        if (auto s = top.child("radio"))
        {
            const auto fc = s->number("center_frequency_hz");
            const auto wl = s->number("wavelength_m");
            const double bw = s->number("bandwidth_hz", 2e9);
            const double c = s->number("speed_of_light_mps", default_speed_of_light);
            const auto phase = s->string("phase_mode");
            cfg.n_mix = s->number("n_mix", cfg.n_mix);
            s->finish();
            if (fc && wl)
                Section::fail(s->key_path("wavelength_m"), "give either center_frequency_hz or wavelength_m, not both");
            cfg.radio = at_path(s->path(), [&] {
                if (wl)
                {
                    RadioConfig r{*wl, bw, c};
                    r.validate();
                    return r;
                }
                return RadioConfig::from_frequency(fc.value_or(60e9), bw, c);
            });
            if (phase)
                cfg.phase_mode = at_path(s->key_path("phase_mode"), [&] { return parse_phase_mode(*phase); });
            if (!(cfg.n_mix > 0.0))
                Section::fail(s->key_path("n_mix"), "must be positive");
        }

        if (auto s = top.child("antennas"))
        {
            if (auto tx = s->child("tx"))
                cfg.tx = parse_antenna(*tx);
            if (auto rx = s->child("rx"))
                cfg.rx = parse_antenna(*rx);
            s->finish();
        }

        if (auto s = top.child("positions"))
        {
            cfg.tx_position = s->vec3("tx_m");
            cfg.rx_position = s->vec3("rx_m");
            s->finish();
            if (cfg.tx_position && !cfg.room.contains(*cfg.tx_position))
                Section::fail(s->key_path("tx_m"), "must lie inside the room");
            if (cfg.rx_position && !cfg.room.contains(*cfg.rx_position))
                Section::fail(s->key_path("rx_m"), "must lie inside the room");
        }

        if (auto s = top.child("mc"))
        {
            McConfig mc;
            if (const auto runs = s->unsigned_integer("runs"))
                mc.runs = static_cast<std::size_t>(*runs);
            if (const auto seed = s->unsigned_integer("seed"))
                mc.seed = *seed;
            if (const auto mode = s->string("mode"))
                mc.mode = at_path(s->key_path("mode"), [&] { return parse_randomization_mode(*mode); });
            mc.tau_max = s->number("tau_max_s", mc.tau_max);
            mc.moment_cutoff = s->number("moment_cutoff_s", mc.moment_cutoff);
            if (const auto phase = s->string("phase_mode"))
                mc.phase_mode = at_path(s->key_path("phase_mode"), [&] { return parse_phase_mode(*phase); });
            if (auto g = s->child("grid"))
                mc.grid = parse_grid(*g);
            if (const auto threads = s->unsigned_integer("threads"))
                mc.threads = static_cast<unsigned>(*threads);
            mc.distance = s->number("distance_m");
            if (const auto synth = s->boolean("synthesize"))
                mc.synthesize = *synth;
            if (const auto w = s->numbers("fit_window_s", 2))
            {
                mc.fit_start = (*w)[0];
                mc.fit_stop = (*w)[1];
            }
            if (auto t = s->child("tolerances"))
                mc.tolerances = parse_tolerances(*t);
            s->finish();
            cfg.mc = mc;
        }

        if (auto s = top.child("output"))
        {
            OutputSpec &o = cfg.output;
            if (const auto dir = s->string("dir"))
                o.dir = *dir;
            o.tau_max = s->number("tau_max_s", o.tau_max);
            if (auto g = s->child("grid"))
                o.grid = parse_grid(*g);
            if (const json *curves = s->get("curves"))
            {
                if (!curves->is_array())
                    Section::fail(s->key_path("curves"), "expected an array of curve names");
                o.curves.clear();
                for (std::size_t i = 0; i < curves->size(); ++i)
                {
                    if (!(*curves)[i].is_string())
                        Section::fail(s->key_path("curves") + "[" + std::to_string(i) + "]", "expected a string");
                    o.curves.push_back((*curves)[i].get<std::string>());
                }
            }
            if (const auto model = s->string("model"))
                o.model = at_path(s->key_path("model"), [&] { return parse_model_mode(*model); });
            if (const auto corr = s->boolean("apply_correction"))
                o.apply_correction = *corr;
            if (auto g = s->child("signal_grid"))
                o.signal_grid = parse_grid(*g);
            s->finish();
            if (!(o.tau_max >= 0.0))
                Section::fail(s->key_path("tau_max_s"), "must be non-negative");
        }
        top.finish();

        // Propagate the shared sections into the Monte Carlo description.
        if (cfg.mc)
        {
            McConfig &mc = *cfg.mc;
            mc.room = cfg.room;
            mc.radio = cfg.radio;
            mc.tx_pattern = cfg.tx.pattern;
            mc.rx_pattern = cfg.rx.pattern;
            mc.gamma2 = cfg.gamma2;
            if (cfg.tx_position)
                mc.tx_position = *cfg.tx_position;
            if (cfg.rx_position)
                mc.rx_position = *cfg.rx_position;
            if (cfg.has_positions())
            {
                mc.tx_pattern = cfg.tx_terminal().pattern;
                mc.rx_pattern = cfg.rx_terminal().pattern;
            }
        }
        return cfg;
    }

    RunConfig load_config(const std::filesystem::path &path)
    {
        std::ifstream is(path);
        if (!is)
            throw ConfigError("cannot read config file '" + path.string() + "'");
        json doc;
        try
        {
            doc = json::parse(is);
        }
        catch (const json::parse_error &e)
        {
            throw ConfigError("config file '" + path.string() + "' is not valid JSON: " + e.what());
        }
        return parse_config(doc);
    }

    namespace
    {
        AntennaPattern aimed(const AntennaSpec &spec, const std::optional<Vec3> &self, const std::optional<Vec3> &other)
        {
            if (!spec.aim_los || spec.pattern.kind() == AntennaPattern::Kind::isotropic)
                return spec.pattern;
            if (!self || !other)
                throw ConfigError("antennas: aim \"los\" needs both positions");
            return spec.pattern.with_orientation(arrival_direction(*other, *self));
        }
    } // namespace

    Terminal RunConfig::tx_terminal() const
    {
        if (!tx_position)
            throw ConfigError("positions.tx_m: required");
        return {*tx_position, aimed(tx, tx_position, rx_position)};
    }

    Terminal RunConfig::rx_terminal() const
    {
        if (!rx_position)
            throw ConfigError("positions.rx_m: required");
        return {*rx_position, aimed(rx, rx_position, tx_position)};
    }

    SceneSummary RunConfig::scene() const
    {
        std::optional<double> tau0;
        if (has_positions())
            tau0 = path_delay(*tx_position, *rx_position, radio.speed_of_light);
        return SceneSummary::from(room, radio, tx.pattern, rx.pattern, tau0);
    }

    nlohmann::ordered_json to_json(const RunConfig &cfg)
    {
        nlohmann::ordered_json j;
        j["schema_version"] = config_schema_version;
        j["room"] = {{"dimensions_m", vec_json(cfg.room.lengths())},
                     {"wall_gains", cfg.room.wall_gains()},
                     {"gamma2", cfg.gamma2}};
        j["radio"] = {{"wavelength_m", cfg.radio.wavelength},
                      {"bandwidth_hz", cfg.radio.bandwidth},
                      {"speed_of_light_mps", cfg.radio.speed_of_light},
                      {"phase_mode", std::string(to_string(cfg.phase_mode))},
                      {"n_mix", cfg.n_mix}};
        j["antennas"] = {{"tx", antenna_json(cfg.tx)}, {"rx", antenna_json(cfg.rx)}};
        if (cfg.tx_position || cfg.rx_position)
        {
            j["positions"] = nlohmann::ordered_json::object();
            if (cfg.tx_position)
                j["positions"]["tx_m"] = vec_json(*cfg.tx_position);
            if (cfg.rx_position)
                j["positions"]["rx_m"] = vec_json(*cfg.rx_position);
        }
        if (cfg.mc)
        {
            const McConfig &mc = *cfg.mc;
            nlohmann::ordered_json m;
            m["runs"] = mc.runs;
            m["seed"] = mc.seed;
            m["mode"] = std::string(to_string(mc.mode));
            m["tau_max_s"] = mc.tau_max;
            m["moment_cutoff_s"] = mc.moment_cutoff;
            m["phase_mode"] = std::string(to_string(mc.phase_mode));
            m["grid"] = grid_json(mc.grid);
            m["threads"] = mc.threads;
            if (mc.mode == RandomizationMode::fixed_distance)
                m["distance_m"] = mc.fixed_distance();
            m["synthesize"] = mc.synthesize;
            m["fit_window_s"] = {mc.fit_start, mc.fit_stop};
            const Tolerances &t = mc.tolerances;
            m["tolerances"] = {{"mean_count_rel", t.mean_count_rel},
                               {"min_count", t.min_count},
                               {"bound_sigmas", t.bound_sigmas},
                               {"conditional_rel", t.conditional_rel},
                               {"tail_fit_rel", t.tail_fit_rel},
                               {"uncorrected_discrepancy", t.uncorrected_discrepancy ? json(*t.uncorrected_discrepancy) : json(nullptr)},
                               {"uncorrected_band", t.uncorrected_band},
                               {"second_moment_rel", t.second_moment_rel},
                               {"second_moment_min_delay_s", t.second_moment_min_delay},
                               {"variance_overshoot_ratio", t.variance_overshoot_ratio ? json(*t.variance_overshoot_ratio) : json(nullptr)}};
            j["mc"] = m;
        }
        nlohmann::ordered_json o;
        o["dir"] = cfg.output.dir.string();
        o["tau_max_s"] = cfg.output.tau_max;
        o["grid"] = grid_json(cfg.output.grid);
        o["curves"] = cfg.output.curves;
        o["model"] = std::string(to_string(cfg.output.model));
        o["apply_correction"] = cfg.output.apply_correction;
        if (cfg.output.signal_grid)
            o["signal_grid"] = grid_json(*cfg.output.signal_grid);
        j["output"] = o;
        return j;
    }

} // namespace mirrorroom
