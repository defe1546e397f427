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
#include "mirrorroom/montecarlo.hpp"
#include "mirrorroom/theory.hpp"

#include <json.hpp>

#include <filesystem>
#include <optional>
#include <string>
#include <vector>

namespace mirrorroom
{
    inline constexpr int config_schema_version = 1;

    // Antenna section as written in the file. `aim_los` points a cap along the
    // line of sight to the other terminal once positions are known.
    struct AntennaSpec
    {
        AntennaPattern pattern = AntennaPattern::isotropic();
        bool aim_los = false;
    };

    struct OutputSpec
    {
        std::filesystem::path dir = ".";
        double tau_max = 120e-9;
        TimeGrid grid = TimeGrid::covering(0.0, 120e-9, 0.25e-9);
        std::vector<std::string> curves{"count", "rate", "pds", "mixing"};
        ModelMode model = ModelMode::randomized;
        bool apply_correction = false;
        std::optional<TimeGrid> signal_grid; // default: 1/(4B) over [-20/B, tau_max + 20/B]
    };

    // Fully resolved configuration document (schema_version 1). Every section is
    // optional; defaults reproduce a 5 x 5 x 3 m room with g = 0.6 at 60 GHz
    // carrier and 2 GHz bandwidth.
    struct RunConfig
    {
        Room room{Vec3(5.0, 5.0, 3.0), 0.6};
        double gamma2 = default_gamma2;
        RadioConfig radio;
        PhaseMode phase_mode = PhaseMode::carrier;
        double n_mix = 1.0;
        AntennaSpec tx;
        AntennaSpec rx;
        std::optional<Vec3> tx_position;
        std::optional<Vec3> rx_position;
        std::optional<McConfig> mc;
        OutputSpec output;

        // Patterns with line-of-sight aiming resolved; needs both positions.
        Terminal tx_terminal() const;
        Terminal rx_terminal() const;
        bool has_positions() const { return tx_position.has_value() && rx_position.has_value(); }

        SceneSummary scene() const;
    };

    // Throws ConfigError naming the offending key path, e.g. "room.dimensions_m[2]".
    RunConfig parse_config(const nlohmann::json &doc);
    RunConfig load_config(const std::filesystem::path &path);

    // Canonical JSON echo of the resolved configuration.
    nlohmann::ordered_json to_json(const RunConfig &cfg);

} // namespace mirrorroom
