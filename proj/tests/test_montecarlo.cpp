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

#include <catch2/catch_amalgamated.hpp>

#include "mirrorroom/montecarlo.hpp"

#include <json.hpp>

#include <algorithm>
#include <cmath>
#include <filesystem>
#include <fstream>
#include <numeric>
#include <numbers>

using namespace mirrorroom;
using Catch::Matchers::WithinAbs;
using Catch::Matchers::WithinRel;

namespace
{
    McConfig small_config(std::size_t runs = 12)
    {
        McConfig cfg;
        cfg.runs = runs;
        cfg.seed = 99;
        cfg.tau_max = 40e-9;
        cfg.moment_cutoff = 40e-9;
        cfg.grid = TimeGrid::covering(0.0, 40e-9, 0.5e-9);
        cfg.fit_start = 10e-9;
        cfg.fit_stop = 35e-9;
        cfg.threads = 1;
        return cfg;
    }

    // Counts on the grid for one recorded run, rebuilt from its pose.
    std::vector<double> replay_counts(const McConfig &cfg, const RunRecord &r)
    {
        auto orient = [](const AntennaPattern &p, const Vec3 &o) {
            return p.kind() == AntennaPattern::Kind::isotropic ? p : p.with_orientation(o);
        };
        const PathList pl = enumerate_paths(cfg.room, Terminal{r.tx_position, orient(cfg.tx_pattern, r.tx_orientation)},
                                            Terminal{r.rx_position, orient(cfg.rx_pattern, r.rx_orientation)},
                                            cfg.radio, cfg.grid.stop() * (1.0 + 1e-12));
        std::vector<double> out;
        for (double t : cfg.grid.values())
            out.push_back(static_cast<double>(std::count_if(pl.paths.begin(), pl.paths.end(),
                                                            [&](const PathComponent &p) { return p.delay <= t; })));
        return out;
    }

    bool same(const EnsembleResult &a, const EnsembleResult &b)
    {
        bool ok = a.count.mean == b.count.mean && a.count.std_error == b.count.std_error &&
                  a.count_raw_second.mean == b.count_raw_second.mean && a.missing_moments == b.missing_moments &&
                  a.power.has_value() == b.power.has_value() && a.runs.size() == b.runs.size();
        if (ok && a.power)
            ok = a.power->mean == b.power->mean && a.power->std_error == b.power->std_error;
        if (ok && a.rms_spread)
            ok = a.rms_spread->values == b.rms_spread->values && a.mean_delay->values == b.mean_delay->values;
        for (std::size_t i = 0; ok && i < a.runs.size(); ++i)
            ok = a.runs[i].tx_position == b.runs[i].tx_position && a.runs[i].rx_orientation == b.runs[i].rx_orientation;
        return ok;
    }

    double bootstrap_median_se(const std::vector<double> &x, std::uint64_t seed)
    {
        Rng rng = make_stream(seed, 0);
        std::vector<double> meds, r(x.size());
        for (int b = 0; b < 400; ++b)
        {
            for (auto &v : r)
                v = x[static_cast<std::size_t>(uniform01(rng) * static_cast<double>(x.size()))];
            std::nth_element(r.begin(), r.begin() + static_cast<std::ptrdiff_t>(r.size() / 2), r.end());
            meds.push_back(r[r.size() / 2]);
        }
        double m = 0.0, s = 0.0;
        for (double v : meds)
            m += v;
        m /= static_cast<double>(meds.size());
        for (double v : meds)
            s += (v - m) * (v - m);
        return std::sqrt(s / static_cast<double>(meds.size() - 1));
    }

    double median(std::vector<double> x)
    {
        std::nth_element(x.begin(), x.begin() + static_cast<std::ptrdiff_t>(x.size() / 2), x.end());
        return x[x.size() / 2];
    }
}

TEST_CASE("Monte Carlo - mode names")
{
    for (auto m : {RandomizationMode::both_random, RandomizationMode::fixed_rx, RandomizationMode::fixed_orientation_tx,
                   RandomizationMode::fixed_distance})
        CHECK(parse_randomization_mode(to_string(m)) == m);
    CHECK_THROWS_AS(parse_randomization_mode("both_random"), ConfigError);
}

TEST_CASE("Monte Carlo - configuration validation")
{
    McConfig cfg = small_config();
    CHECK_NOTHROW(cfg.validate());
    cfg.runs = 0;
    CHECK_THROWS_AS(cfg.validate(), ConfigError);
    cfg = small_config();
    cfg.moment_cutoff = 50e-9;
    CHECK_THROWS_AS(cfg.validate(), ConfigError);
    cfg = small_config();
    cfg.grid = TimeGrid::covering(0.0, 60e-9, 1e-9);
    CHECK_THROWS_AS(cfg.validate(), ConfigError);
    cfg = small_config();
    cfg.mode = RandomizationMode::fixed_distance;
    cfg.distance = 8.0; // beyond the diagonal of 5 x 5 x 3
    CHECK_THROWS_AS(cfg.validate(), ConfigError);
    CHECK_THROWS_AS(run_ensemble(cfg), ConfigError);
}

TEST_CASE("Monte Carlo - determinism across repeats and worker counts")
{
    McConfig cfg = small_config(9);
    cfg.tx_pattern = AntennaPattern::cap(0.5);
    cfg.rx_pattern = AntennaPattern::cap(0.25);
    const EnsembleResult a = run_ensemble(cfg);
    const EnsembleResult b = run_ensemble(cfg);
    cfg.threads = 4;
    const EnsembleResult c = run_ensemble(cfg);
    cfg.threads = 9;
    const EnsembleResult d = run_ensemble(cfg);
    CHECK(same(a, b));
    CHECK(same(a, c));
    CHECK(same(a, d));

    McConfig one = small_config(1);
    const EnsembleResult e = run_ensemble(one);
    const EnsembleResult f = run_ensemble(one);
    CHECK(same(e, f));
    CHECK(e.count.std_error == std::vector<double>(e.count.grid.size(), 0.0));

    McConfig other = small_config(9);
    other.seed = 100;
    other.tx_pattern = cfg.tx_pattern;
    other.rx_pattern = cfg.rx_pattern;
    CHECK_FALSE(same(a, run_ensemble(other)));
}

TEST_CASE("Monte Carlo - estimators match a replay of the runs")
{
    McConfig cfg = small_config(25);
    cfg.tx_pattern = AntennaPattern::cap(0.5);
    cfg.synthesize = false;
    const EnsembleResult r = run_ensemble(cfg);
    REQUIRE(r.runs.size() == 25);
    CHECK_FALSE(r.power.has_value());

    const std::size_t m = cfg.grid.count;
    std::vector<double> sum(m, 0.0), sum2(m, 0.0), sum4(m, 0.0);
    std::vector<std::vector<double>> all;
    for (const auto &rec : r.runs)
        all.push_back(replay_counts(cfg, rec));
    for (const auto &c : all)
        for (std::size_t i = 0; i < m; ++i)
        {
            sum[i] += c[i];
            sum2[i] += c[i] * c[i];
        }
    const double n = 25.0;
    for (std::size_t i = 0; i < m; ++i)
    {
        const double mean = sum[i] / n;
        double ss = 0.0, ss2 = 0.0;
        for (const auto &c : all)
        {
            ss += (c[i] - mean) * (c[i] - mean);
            ss2 += (c[i] * c[i] - sum2[i] / n) * (c[i] * c[i] - sum2[i] / n);
        }
        CHECK_THAT(r.count.mean[i], WithinAbs(mean, 1e-12 * (1.0 + mean)));
        CHECK_THAT(r.count.std_error[i], WithinAbs(std::sqrt(ss / (n - 1) / n), 1e-9));
        CHECK_THAT(r.count.sample_variance(i), WithinAbs(ss / (n - 1), 1e-7));
        CHECK_THAT(r.count_raw_second.mean[i], WithinAbs(sum2[i] / n, 1e-9 * (1.0 + sum2[i])));
        CHECK_THAT(r.count_raw_second.std_error[i], WithinAbs(std::sqrt(ss2 / (n - 1) / n), 1e-6));
    }
}

TEST_CASE("Monte Carlo - sampling per mode")
{
    McConfig cfg = small_config(40);
    cfg.synthesize = false;
    cfg.tx_pattern = AntennaPattern::cap(0.3, Vec3(0.0, 1.0, 0.0));
    cfg.rx_pattern = AntennaPattern::cap(0.4, Vec3(1.0, 0.0, 0.0));

    SECTION("both random")
    {
        const EnsembleResult r = run_ensemble(cfg);
        for (const auto &rec : r.runs)
        {
            CHECK(cfg.room.contains(rec.tx_position));
            CHECK(cfg.room.contains(rec.rx_position));
            CHECK_THAT(rec.tx_orientation.norm(), WithinAbs(1.0, 1e-12));
        }
        CHECK(r.runs[0].rx_position != r.runs[1].rx_position);
    }
    SECTION("fixed receiver")
    {
        cfg.mode = RandomizationMode::fixed_rx;
        const EnsembleResult r = run_ensemble(cfg);
        for (const auto &rec : r.runs)
        {
            CHECK(rec.rx_position == cfg.rx_position);
            CHECK(rec.rx_orientation == cfg.rx_pattern.orientation());
        }
        CHECK(r.runs[0].tx_orientation != r.runs[1].tx_orientation);
    }
    SECTION("fixed transmitter orientation")
    {
        cfg.mode = RandomizationMode::fixed_orientation_tx;
        const EnsembleResult r = run_ensemble(cfg);
        for (const auto &rec : r.runs)
        {
            CHECK(rec.rx_position == cfg.rx_position);
            CHECK(rec.tx_orientation == cfg.tx_pattern.orientation());
            CHECK(cfg.room.contains(rec.tx_position));
        }
        CHECK(r.runs[0].tx_position != r.runs[1].tx_position);
    }
    SECTION("fixed distance")
    {
        cfg.mode = RandomizationMode::fixed_distance;
        cfg.distance = 2.0;
        const EnsembleResult r = run_ensemble(cfg);
        for (const auto &rec : r.runs)
        {
            CHECK_THAT((rec.tx_position - rec.rx_position).norm(), WithinRel(2.0, 1e-12));
            CHECK(cfg.room.contains(rec.tx_position));
            CHECK(cfg.room.contains(rec.rx_position));
            CHECK_THAT(rec.direct_delay, WithinRel(2.0 / 3e8, 1e-12));
        }
    }
}

TEST_CASE("Monte Carlo - empirical CDF")
{
    const std::vector<double> single{4.0};
    const Ecdf a = ecdf(single);
    CHECK(a(3.999) == 0.0);
    CHECK(a(4.0) == 1.0);

    const std::vector<double> three{3.0, 1.0, 2.0};
    const Ecdf b = ecdf(three);
    CHECK(b.values == std::vector<double>{1.0, 2.0, 3.0});
    CHECK_THAT(b.probabilities[0], WithinRel(1.0 / 3.0, 1e-15));
    CHECK_THAT(b.probabilities[1], WithinRel(2.0 / 3.0, 1e-15));
    CHECK(b.probabilities[2] == 1.0);
    CHECK(b(2.5) == b.probabilities[1]);
    CHECK(b.quantile(0.5) == 2.0);
    CHECK(b.quantile(1.0) == 3.0);

    const std::vector<double> ties{1.0, 1.0, std::nan(""), 2.0};
    const Ecdf c = ecdf(ties);
    CHECK(c.values == std::vector<double>{1.0, 2.0});
    CHECK_THAT(c.probabilities[0], WithinRel(2.0 / 3.0, 1e-15));

    const std::vector<double> none{std::nan(""), INFINITY};
    CHECK_THROWS_AS(ecdf(none), EmptySampleError);
    CHECK_THROWS_AS(ecdf(std::span<const double>{}), EmptySampleError);
}

TEST_CASE("Monte Carlo - empty channels are counted, not fatal")
{
    McConfig cfg = small_config(60);
    cfg.tau_max = 15e-9;
    cfg.moment_cutoff = 15e-9;
    cfg.grid = TimeGrid::covering(0.0, 15e-9, 0.5e-9);
    cfg.tx_pattern = AntennaPattern::cap(0.02);
    cfg.rx_pattern = AntennaPattern::cap(0.02);
    const EnsembleResult r = run_ensemble(cfg);
    CHECK(r.missing_moments > 0);
    std::size_t with = 0;
    for (const auto &rec : r.runs)
        with += rec.moments.has_value() ? 1 : 0;
    CHECK(with + r.missing_moments == cfg.runs);
    if (with > 0)
        CHECK(r.rms_spread->size() == with);
}

TEST_CASE("Monte Carlo - decay fit")
{
    std::vector<double> t, v;
    for (double x = 0.0; x <= 120e-9; x += 0.5e-9)
    {
        t.push_back(x);
        v.push_back(3.0 * std::exp(-x / 17e-9));
    }
    CHECK_THAT(fit_decay_time(t, v, 40e-9, 110e-9), WithinRel(17e-9, 1e-9));
    CHECK_THROWS_AS(fit_decay_time(t, v, 40e-9, 130e-9), ConfigError);
    CHECK_THROWS_AS(fit_decay_time(t, v, -1e-9, 50e-9), ConfigError);
    std::vector<double> zeros(t.size(), 0.0);
    CHECK_THROWS_AS(fit_decay_time(t, zeros, 40e-9, 110e-9), ConfigError);
}

TEST_CASE("Monte Carlo - comparison on theory-exact input passes")
{
    McConfig cfg;
    cfg.runs = 1000;
    const SceneSummary s = SceneSummary::from(cfg.room, cfg.radio, cfg.tx_pattern, cfg.rx_pattern);
    const std::vector<double> grid = cfg.grid.values();
    const PowerDelaySpectrum p = pds(s, ModelMode::randomized, kuttruff_correction(0.6, cfg.gamma2));

    EnsembleResult r;
    r.count.grid = r.count_raw_second.grid = grid;
    r.count.runs = r.count_raw_second.runs = cfg.runs;
    McEstimate power;
    power.grid = grid;
    power.runs = cfg.runs;
    for (double t : grid)
    {
        const double m = mean_count(s, t);
        const double second = count_second_moment(s, t);
        r.count.mean.push_back(m);
        // Empirical variance set to half the approximation.
        r.count.std_error.push_back(std::sqrt(0.5 * (second - m * m) / cfg.runs));
        r.count_raw_second.mean.push_back(second);
        r.count_raw_second.std_error.push_back(0.0);
        power.mean.push_back(expected_received_power(p, cfg.radio.bandwidth, t));
        power.std_error.push_back(0.0);
    }
    r.power = power;

    const ComparisonReport rep = compare_with_theory(r, cfg);
    CHECK(rep.pass());
    REQUIRE(rep.find("mean_count_rel_error"));
    CHECK(rep.find("mean_count_rel_error")->value < 1e-12);
    CHECK(rep.find("second_moment_rel_error")->value < 1e-12);
    CHECK_THAT(rep.find("variance_overshoot_min_ratio")->value, WithinRel(2.0, 1e-9));

    // Plain least squares on log power over the window.
    double n = 0.0, sx = 0.0, sy = 0.0, sxx = 0.0, sxy = 0.0;
    for (std::size_t i = 0; i < grid.size(); ++i)
        if (grid[i] >= cfg.fit_start && grid[i] <= cfg.fit_stop)
        {
            const double y = std::log(power.mean[i]);
            n += 1.0;
            sx += grid[i];
            sy += y;
            sxx += grid[i] * grid[i];
            sxy += grid[i] * y;
        }
    const double fitted = -(n * sxx - sx * sx) / (n * sxy - sx * sy);
    const double xi_t = kuttruff_correction(0.6) * reverberation_time(s);
    CHECK_THAT(*rep.fitted_decay_time, WithinRel(fitted, 1e-9));
    CHECK_THAT(rep.find("tail_fit_rel_error")->value, WithinAbs(std::abs(fitted / xi_t - 1.0), 1e-9));
    CHECK_THAT(rep.find("uncorrected_discrepancy")->value, WithinAbs(fitted / reverberation_time(s) - 1.0, 1e-9));
    // Pulse leakage from the onset tilts the smoothed tail only slightly.
    CHECK_THAT(fitted, WithinRel(xi_t, 0.01));
    CHECK(rep.find("no_such_check") == nullptr);

    // Variance above the approximation trips the overshoot check.
    for (std::size_t i = 0; i < grid.size(); ++i)
        r.count.std_error[i] *= 2.0;
    CHECK_FALSE(compare_with_theory(r, cfg).find("variance_overshoot_min_ratio")->pass);
    cfg.tolerances.variance_overshoot_ratio.reset();
    CHECK(compare_with_theory(r, cfg).find("variance_overshoot_min_ratio") == nullptr);

    cfg.fit_stop = 200e-9;
    CHECK_THROWS_AS(compare_with_theory(r, cfg), ConfigError);
}

TEST_CASE("Monte Carlo - fixed transmitter orientation meets the bound")
{
    McConfig cfg;
    cfg.runs = 500;
    cfg.seed = 41;
    cfg.mode = RandomizationMode::fixed_orientation_tx;
    cfg.synthesize = false;
    cfg.tau_max = 60e-9;
    cfg.moment_cutoff = 60e-9;
    cfg.grid = TimeGrid::covering(0.0, 60e-9, 1e-9);
    cfg.rx_pattern = AntennaPattern::cap(0.5, Vec3(1.0, 0.0, 0.0));

    // Images of a uniform transmitter fill space uniformly, so the receiver cone
    // sees exactly omega_R of the ball.
    const ComparisonReport eq = compare_with_theory(run_ensemble(cfg), cfg);
    REQUIRE(eq.find("count_upper_bound_equality_sigma"));
    CHECK(eq.find("count_upper_bound_equality_sigma")->pass);
    CHECK(eq.find("count_upper_bound_sigma")->pass);

    cfg.tx_pattern = AntennaPattern::cap(0.25, Vec3(0.0, 0.6, 0.8));
    const ComparisonReport both = compare_with_theory(run_ensemble(cfg), cfg);
    CHECK(both.find("count_upper_bound_sigma")->pass);
    CHECK(both.find("count_upper_bound_equality_sigma") == nullptr);
}

TEST_CASE("Monte Carlo - isotropic mean count at 50 ns")
{
    McConfig cfg;
    cfg.runs = 2000;
    cfg.seed = 5;
    cfg.synthesize = false;
    cfg.tau_max = 50e-9;
    cfg.moment_cutoff = 50e-9;
    cfg.grid = TimeGrid::covering(0.0, 50e-9, 1e-9);
    const EnsembleResult r = run_ensemble(cfg);
    const SceneSummary s = SceneSummary::from(cfg.room, cfg.radio, cfg.tx_pattern, cfg.rx_pattern);
    CHECK_THAT(r.count.mean.back(), WithinRel(mean_count(s, 50e-9), 0.03));
}

TEST_CASE("Monte Carlo - directive antennas spread the counts")
{
    auto counts_at_40 = [](double omega) {
        McConfig cfg;
        cfg.runs = 800;
        cfg.seed = 12;
        cfg.synthesize = false;
        cfg.tau_max = 40e-9;
        cfg.moment_cutoff = 40e-9;
        cfg.grid = TimeGrid::covering(40e-9, 40e-9, 1e-9);
        if (omega < 1.0)
        {
            cfg.tx_pattern = AntennaPattern::cap(omega);
            cfg.rx_pattern = AntennaPattern::cap(omega);
        }
        const EnsembleResult r = run_ensemble(cfg);
        std::vector<double> c;
        for (const auto &rec : r.runs)
            c.push_back(replay_counts(cfg, rec).back());
        return c;
    };
    // Variance and its standard error from the fourth central moment.
    auto var_se = [](const std::vector<double> &x) {
        const double n = static_cast<double>(x.size());
        double m = 0.0;
        for (double v : x)
            m += v;
        m /= n;
        double m2 = 0.0, m4 = 0.0;
        for (double v : x)
        {
            m2 += std::pow(v - m, 2);
            m4 += std::pow(v - m, 4);
        }
        m2 /= n;
        m4 /= n;
        return std::pair{m2 * n / (n - 1), std::sqrt((m4 - m2 * m2) / n)};
    };
    const auto iso = counts_at_40(1.0);
    const auto dir = counts_at_40(0.25);
    const auto [v_iso, se_iso] = var_se(iso);
    const auto [v_dir, se_dir] = var_se(dir);
    const double m_iso = std::accumulate(iso.begin(), iso.end(), 0.0) / iso.size();
    const double m_dir = std::accumulate(dir.begin(), dir.end(), 0.0) / dir.size();
    // Dispersion index var / mean; shared orientations make directive counts clump.
    UNSCOPED_INFO("dispersion iso " << v_iso / m_iso << " +- " << se_iso / m_iso << ", directive " << v_dir / m_dir
                                    << " +- " << se_dir / m_dir);
    CHECK(v_dir / m_dir - v_iso / m_iso > 3.0 * std::hypot(se_iso / m_iso, se_dir / m_dir));
}

TEST_CASE("Monte Carlo - delay spread depends on directivity")
{
    auto rms = [](double omega) {
        McConfig cfg;
        cfg.runs = 300;
        cfg.seed = 3;
        if (omega < 1.0)
        {
            cfg.tx_pattern = AntennaPattern::cap(omega);
            cfg.rx_pattern = AntennaPattern::cap(omega);
        }
        const EnsembleResult r = run_ensemble(cfg);
        REQUIRE(r.rms_spread.has_value());
        CHECK(r.mean_delay->size() + r.missing_moments == cfg.runs);
        std::vector<double> v;
        for (const auto &rec : r.runs)
            if (rec.moments)
                v.push_back(rec.moments->rms_spread);
        return v;
    };
    const auto a = rms(1.0), b = rms(0.25);
    const double se = std::hypot(bootstrap_median_se(a, 1), bootstrap_median_se(b, 2));
    CHECK(std::abs(median(a) - median(b)) > 3.0 * se);
}

TEST_CASE("Monte Carlo - results bundle")
{
    McConfig cfg = small_config(6);
    const EnsembleResult r = run_ensemble(cfg);
    const ComparisonReport rep = compare_with_theory(r, cfg);
    const auto dir = std::filesystem::temp_directory_path() / "mirrorroom_bundle_test";
    std::filesystem::remove_all(dir);
    write_bundle(dir, r, rep, "{\"seed\": 99}");
    for (const char *f : {"counts.csv", "power.csv", "ecdf_mean_delay.csv", "ecdf_rms.csv", "report.json",
                          "manifest.json"})
        CHECK(std::filesystem::exists(dir / f));

    std::ifstream counts(dir / "counts.csv");
    std::string header;
    std::getline(counts, header);
    CHECK(header == "tau_seconds,mean,std_error,raw_second_moment,raw_second_moment_std_error");
    std::ifstream ecdf_file(dir / "ecdf_rms.csv");
    std::getline(ecdf_file, header);
    CHECK(header == "value,probability");

    std::ifstream report_file(dir / "report.json");
    const auto report = nlohmann::json::parse(report_file);
    CHECK(report.at("runs") == 6);
    CHECK(report.at("pass").is_boolean());
    CHECK(report.at("checks").is_array());
    CHECK(report.at("checks").size() == rep.checks.size());
    std::ifstream manifest(dir / "manifest.json");
    CHECK(nlohmann::json::parse(manifest).at("seed") == 99);

    // A regular file where the directory should go.
    const auto blocker = dir / "blocker";
    std::ofstream(blocker) << "x";
    CHECK_THROWS_AS(write_bundle(blocker / "sub", r, rep, "{}"), IoError);
    std::filesystem::remove_all(dir);
}
