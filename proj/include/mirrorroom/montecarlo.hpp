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
#include "mirrorroom/theory.hpp"

#include <cstdint>
#include <filesystem>
#include <optional>
#include <span>
#include <string>
#include <string_view>
#include <utility>
#include <vector>

namespace mirrorroom
{
    // How antenna placement and orientation are drawn per run.
    enum class RandomizationMode
    {
        both_random,          // both positions and orientations uniform
        fixed_rx,             // rx pose from the config; tx position and orientation uniform
        fixed_orientation_tx, // rx pose fixed; tx position uniform, tx orientation from the config
        fixed_distance        // orientations uniform; positions uniform subject to |r_T - r_R| = distance
    };

    RandomizationMode parse_randomization_mode(std::string_view name);
    std::string_view to_string(RandomizationMode mode);

    struct Tolerances
    {
        double mean_count_rel = 0.03;  // |mc - theory| / theory where theory >= min_count
        double min_count = 100.0;
        double bound_sigmas = 3.0;     // fixed-orientation-tx: mean - k*se <= bound
        double conditional_rel = 0.05; // fixed-distance, tau >= tau0 + D/c
        double tail_fit_rel = 0.05;    // fitted decay time vs corrected reverberation time
        std::optional<double> uncorrected_discrepancy = 0.09; // T_fit / T - 1; unset skips the check
        double uncorrected_band = 0.03;
        double second_moment_rel = 0.15;
        double second_moment_min_delay = 40e-9;
        std::optional<double> variance_overshoot_ratio = 1.0; // min approx/empirical variance; unset skips
    };

    struct McConfig
    {
        std::size_t runs = 2000;
        std::uint64_t seed = 1;
        RandomizationMode mode = RandomizationMode::both_random;
        Room room{Vec3(5.0, 5.0, 3.0), 0.6};
        RadioConfig radio;
        AntennaPattern tx_pattern = AntennaPattern::isotropic();
        AntennaPattern rx_pattern = AntennaPattern::isotropic();
        Vec3 tx_position{2.5, 2.5, 1.5};
        Vec3 rx_position{3.8, 4.0, 0.6};
        std::optional<double> distance; // fixed_distance; defaults to |tx - rx|
        double tau_max = 120e-9;
        double moment_cutoff = 120e-9;
        PhaseMode phase_mode = PhaseMode::random;
        TimeGrid grid = TimeGrid::covering(0.0, 120e-9, 0.25e-9);
        bool synthesize = true; // power curve and delay moments
        unsigned threads = 0;   // 0: hardware concurrency
        double gamma2 = default_gamma2;
        double fit_start = 40e-9;
        double fit_stop = 110e-9;
        Tolerances tolerances;

        void validate() const;
        double fixed_distance() const { return distance.value_or((tx_position - rx_position).norm()); }
    };

    struct McEstimate
    {
        std::vector<double> grid;
        std::vector<double> mean;
        std::vector<double> std_error;
        std::size_t runs = 0;

        // Unbiased sample variance recovered from the standard error.
        double sample_variance(std::size_t i) const;
    };

    struct Ecdf
    {
        std::vector<double> values;
        std::vector<double> probabilities;

        // Right-continuous evaluation F(x) = #{v <= x} / n.
        double operator()(double x) const;
        double quantile(double p) const;
        std::size_t size() const { return values.size(); }
    };

    // Throws EmptySampleError when no finite sample is present.
    Ecdf ecdf(std::span<const double> samples);

    struct RunRecord
    {
        std::size_t run = 0;
        Vec3 tx_position;
        Vec3 rx_position;
        Vec3 tx_orientation;
        Vec3 rx_orientation;
        double direct_delay = 0.0;
        std::size_t path_count = 0;
        std::optional<DelayMoments> moments;
    };

    struct EnsembleResult
    {
        McEstimate count;
        McEstimate count_raw_second; // E[N(tau)^2]
        std::optional<McEstimate> power;
        std::optional<Ecdf> mean_delay;
        std::optional<Ecdf> rms_spread;
        std::size_t missing_moments = 0;
        std::vector<RunRecord> runs;
    };

    EnsembleResult run_ensemble(const McConfig &cfg);

    struct Check
    {
        std::string name;
        double value = 0.0;
        double tolerance = 0.0;
        bool pass = false;
        std::string detail;
    };

    struct ComparisonReport
    {
        std::vector<Check> checks;
        double reverberation_time = 0.0;
        double correction = 1.0;
        std::optional<double> fitted_decay_time;
        std::vector<std::pair<std::string, double>> metrics; // reported, not gated

        bool pass() const;
        const Check *find(std::string_view name) const;
    };

    // Least-squares decay time of log(values) over [start, stop].
    // Throws ConfigError when the window leaves the grid or holds fewer than two
    // positive samples.
    double fit_decay_time(std::span<const double> grid, std::span<const double> values, double start, double stop);

    ComparisonReport compare_with_theory(const EnsembleResult &result, const McConfig &cfg);

    // counts.csv, power.csv, ecdf_mean_delay.csv, ecdf_rms.csv, report.json,
    // manifest.json. `manifest` is the resolved configuration echoed verbatim.
    // Throws IoError when the directory cannot be written.
    void write_bundle(const std::filesystem::path &dir, const EnsembleResult &result, const ComparisonReport &report,
                      const std::string &manifest_json);

} // namespace mirrorroom
