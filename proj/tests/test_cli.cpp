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

#include "mirrorroom/cli.hpp"

#include <json.hpp>

#include <cmath>
#include <filesystem>
#include <fstream>
#include <sstream>

using namespace mirrorroom;
namespace fs = std::filesystem;
using Catch::Matchers::ContainsSubstring;
using Catch::Matchers::WithinAbs;
using Catch::Matchers::WithinRel;

namespace
{
    struct Result
    {
        int code;
        std::string out;
        std::string err;
    };

    Result run(const std::vector<std::string> &args)
    {
        std::ostringstream out, err;
        const int code = run_cli(args, out, err);
        return {code, out.str(), err.str()};
    }

    std::string slurp(const fs::path &p)
    {
        std::ifstream is(p, std::ios::binary);
        return {std::istreambuf_iterator<char>(is), std::istreambuf_iterator<char>()};
    }

    std::vector<std::string> lines(const std::string &text)
    {
        std::vector<std::string> out;
        std::istringstream is(text);
        for (std::string l; std::getline(is, l);)
            out.push_back(l);
        return out;
    }

    std::vector<double> fields(const std::string &line)
    {
        std::vector<double> out;
        std::istringstream is(line);
        for (std::string f; std::getline(is, f, ',');)
            out.push_back(std::stod(f));
        return out;
    }

    struct Workspace
    {
        fs::path dir;
        explicit Workspace(const std::string &name) : dir(fs::temp_directory_path() / name)
        {
            fs::remove_all(dir);
            fs::create_directories(dir);
        }
        ~Workspace() { fs::remove_all(dir); }

        std::string write(const std::string &name, const nlohmann::json &doc) const
        {
            std::ofstream(dir / name) << doc.dump(2);
            return (dir / name).string();
        }
    };

    const nlohmann::json desk = nlohmann::json::parse(R"({
        "schema_version": 1,
        "positions": {"tx_m": [2.5, 2.5, 1.5], "rx_m": [3.8, 4.0, 0.6]}
    })");
}

TEST_CASE("CLI - help and usage")
{
    const Result help = run({"--help"});
    CHECK(help.code == 0);
    for (const char *sub : {"paths", "theory", "mc", "signal"})
        CHECK_THAT(help.out, ContainsSubstring(sub));

    const Result paths_help = run({"paths", "--help"});
    CHECK(paths_help.code == 0);
    for (const char *flag : {"--config", "--tau-max", "--out"})
        CHECK_THAT(paths_help.out, ContainsSubstring(flag));
    const Result theory_help = run({"theory", "--help"});
    for (const char *flag : {"--config", "--curves", "--grid", "--model", "--correction", "--out-dir"})
        CHECK_THAT(theory_help.out, ContainsSubstring(flag));
    const Result mc_help = run({"mc", "--help"});
    for (const char *flag : {"--config", "--runs", "--seed", "--threads", "--mode", "--out-dir", "--check"})
        CHECK_THAT(mc_help.out, ContainsSubstring(flag));
    const Result signal_help = run({"signal", "--help"});
    for (const char *flag : {"--config", "--out", "--tau-max", "--seed"})
        CHECK_THAT(signal_help.out, ContainsSubstring(flag));

    CHECK(run({}).code == exit_usage);
    CHECK(run({"frobnicate"}).code == exit_usage);
    CHECK(run({"theory", "--bogus"}).code == exit_usage);
}

TEST_CASE("CLI - paths")
{
    Workspace ws("mirrorroom_cli_paths");
    const std::string cfg = ws.write("desk.json", desk);

    const Result r = run({"paths", "-c", cfg, "--tau-max", "30e-9"});
    REQUIRE(r.code == 0);
    const auto ls = lines(r.out);
    REQUIRE(ls.size() > 2);
    CHECK(ls[0] == "kx,ky,kz,tau_s,gain_pow,dod_x,dod_y,dod_z,doa_x,doa_y,doa_z,phase_rad");
    const auto first = fields(ls[1]);
    CHECK(first[0] == 0.0);
    CHECK(first[1] == 0.0);
    CHECK(first[2] == 0.0);
    CHECK_THAT(first[3], WithinAbs(7.265e-9, 1e-12));
    double prev = 0.0;
    for (std::size_t i = 1; i < ls.size(); ++i)
    {
        const auto f = fields(ls[i]);
        CHECK(f[3] >= prev);
        CHECK(f[3] <= 30e-9);
        prev = f[3];
    }

    const Result empty = run({"paths", "-c", cfg, "--tau-max", "5e-9"});
    CHECK(empty.code == 0);
    CHECK(lines(empty.out).size() == 1);

    const fs::path a = ws.dir / "a.csv", b = ws.dir / "b.csv";
    CHECK(run({"paths", "-c", cfg, "-o", a.string()}).code == 0);
    CHECK(run({"paths", "-c", cfg, "-o", b.string()}).code == 0);
    CHECK(slurp(a) == slurp(b));
    CHECK(slurp(a).size() > 1000);

    // Hemispheres aimed along the line of sight keep the direct path.
    nlohmann::json aimed = desk;
    aimed["antennas"] = {{"tx", {{"pattern", "cap"}, {"beam_fraction", 0.5}, {"aim", "los"}}},
                         {"rx", {{"pattern", "cap"}, {"beam_fraction", 0.5}, {"aim", "los"}}}};
    const Result ra = run({"paths", "-c", ws.write("aimed.json", aimed), "--tau-max", "20e-9"});
    REQUIRE(ra.code == 0);
    const auto la = lines(ra.out);
    REQUIRE(la.size() > 1);
    CHECK(la[1].rfind("0,0,0,", 0) == 0);
    CHECK(la.size() < ls.size());

    const Result nopos = run({"paths"});
    CHECK(nopos.code == exit_usage);
    CHECK_THAT(nopos.err, ContainsSubstring("positions"));
}

TEST_CASE("CLI - theory curves")
{
    Workspace ws("mirrorroom_cli_theory");
    const std::string cfg = ws.write("desk.json", desk);
    const fs::path out = ws.dir / "curves";

    REQUIRE(run({"theory", "-c", cfg, "--out-dir", out.string()}).code == 0);
    for (const char *f : {"count.csv", "rate.csv", "pds.csv", "mixing.csv"})
        CHECK(fs::exists(out / f));
    const auto mixing = lines(slurp(out / "mixing.csv"));
    REQUIRE(mixing.size() == 2);
    CHECK(mixing[0] == "tau_mix_seconds,n_mix,bandwidth_hz,volume_m3,beam_product");
    CHECK_THAT(fields(mixing[1])[0], WithinRel(21e-9, 0.02));

    const auto count = lines(slurp(out / "count.csv"));
    CHECK(count[0] == "tau_seconds,value,unit");
    CHECK(count.size() == 482);
    CHECK_THAT(count.back(), ContainsSubstring(",count"));

    // The randomized spectrum does not see the antennas.
    nlohmann::json directive = desk;
    directive["antennas"] = {{"tx", {{"pattern", "cap"}, {"beam_fraction", 0.25}}},
                             {"rx", {{"pattern", "cap"}, {"beam_fraction", 0.5}}}};
    const fs::path out2 = ws.dir / "directive";
    REQUIRE(run({"theory", "-c", ws.write("dir.json", directive), "--curves", "pds,mixing", "--out-dir",
                 out2.string()})
                .code == 0);
    CHECK(slurp(out2 / "pds.csv") == slurp(out / "pds.csv"));
    CHECK_THAT(fields(lines(slurp(out2 / "mixing.csv"))[1])[0], WithinRel(21e-9 / std::sqrt(0.125), 0.02));
    CHECK_FALSE(fs::exists(out2 / "count.csv"));

    const fs::path out3 = ws.dir / "det";
    REQUIRE(run({"theory", "-c", cfg, "--curves", "rate,pds", "--model", "deterministic", "--grid", "0:50e-9:1e-9",
                 "--correction", "--out-dir", out3.string()})
                .code == 0);
    const auto rate = lines(slurp(out3 / "rate.csv"));
    CHECK(rate[0].rfind("# dirac_location=", 0) == 0);
    CHECK(rate.size() == 53);
    CHECK(lines(slurp(out3 / "pds.csv"))[0].rfind("# dirac_location=", 0) == 0);

    CHECK(run({"theory", "-c", cfg, "--curves", "count,volume", "--out-dir", out.string()}).code == exit_usage);
    CHECK(run({"theory", "-c", cfg, "--grid", "0:1", "--out-dir", out.string()}).code == exit_usage);
    CHECK(run({"theory", "--model", "deterministic", "--out-dir", out.string()}).code == exit_usage);
}

TEST_CASE("CLI - Monte Carlo")
{
    Workspace ws("mirrorroom_cli_mc");
    nlohmann::json doc = desk;
    doc["mc"] = {{"runs", 3},
                 {"tau_max_s", 60e-9},
                 {"moment_cutoff_s", 60e-9},
                 {"grid", {{"start_s", 0}, {"stop_s", 60e-9}, {"step_s", 0.5e-9}}},
                 {"fit_window_s", {20e-9, 55e-9}}};
    const std::string cfg = ws.write("mc.json", doc);

    const fs::path a = ws.dir / "a", b = ws.dir / "b";
    const Result ra = run({"mc", "-c", cfg, "--runs", "1", "--seed", "7", "--out-dir", a.string()});
    const Result rb = run({"mc", "-c", cfg, "--runs", "1", "--seed", "7", "--threads", "3", "--out-dir", b.string()});
    REQUIRE(ra.code == 0);
    REQUIRE(rb.code == 0);
    CHECK_THAT(ra.out, ContainsSubstring("report: "));
    for (const char *f : {"counts.csv", "power.csv", "ecdf_mean_delay.csv", "ecdf_rms.csv", "report.json"})
        CHECK(slurp(a / f) == slurp(b / f));
    const auto manifest = nlohmann::json::parse(slurp(a / "manifest.json"));
    CHECK(manifest.at("mc").at("seed") == 7);
    CHECK(manifest.at("mc").at("runs") == 1);

    CHECK(run({"mc", "-c", cfg, "--runs", "0", "--out-dir", a.string()}).code == exit_usage);
    CHECK(run({"mc", "-c", cfg, "--mode", "nowhere", "--out-dir", a.string()}).code == exit_usage);
    CHECK(run({"mc", "-c", ws.write("nomc.json", desk)}).code == exit_usage);

    // A regular file in place of the bundle directory.
    std::ofstream(ws.dir / "file") << "x";
    const Result io = run({"mc", "-c", cfg, "--runs", "1", "--out-dir", (ws.dir / "file" / "sub").string()});
    CHECK(io.code == exit_io);

    // --check turns a failing report into exit status 1.
    doc["mc"]["tolerances"] = {{"mean_count_rel", 1e-9}, {"min_count", 1.0}};
    const std::string strict = ws.write("strict.json", doc);
    const Result fail = run({"mc", "-c", strict, "--out-dir", a.string(), "--check"});
    CHECK(fail.code == exit_check_failed);
    CHECK_THAT(fail.out, ContainsSubstring("FAIL mean_count_rel_error"));
    CHECK(run({"mc", "-c", strict, "--out-dir", a.string()}).code == 0);
    const auto report = nlohmann::json::parse(slurp(a / "report.json"));
    CHECK(report.at("pass") == false);
}

TEST_CASE("CLI - signal")
{
    Workspace ws("mirrorroom_cli_signal");
    // Absorbing walls leave the direct path alone.
    nlohmann::json doc = desk;
    doc["room"] = {{"wall_gain", 0.0}};
    const std::string cfg = ws.write("toy.json", doc);
    const fs::path out = ws.dir / "sig.csv";
    REQUIRE(run({"signal", "-c", cfg, "-o", out.string(), "--tau-max", "30e-9"}).code == 0);
    const auto ls = lines(slurp(out));
    CHECK(ls[0] == "t_seconds,re,im,abs2");
    double best = -1.0, at = 0.0;
    for (std::size_t i = 1; i < ls.size(); ++i)
    {
        const auto f = fields(ls[i]);
        if (f[3] > best)
        {
            best = f[3];
            at = f[0];
        }
    }
    const double tau0 = std::sqrt(4.75) / 3e8;
    CHECK(std::abs(at - tau0) <= 0.125e-9);
    // Peak sample sits off the pulse centre by at most half a step.
    const double x = M_PI * 2e9 * (at - tau0);
    const double shape = x == 0.0 ? 1.0 : std::sin(x) / x;
    CHECK_THAT(best, WithinRel(std::pow(0.005 / (4.0 * M_PI * std::sqrt(4.75)), 2) * shape * shape, 1e-6));

    const fs::path out2 = ws.dir / "sig2.csv";
    REQUIRE(run({"signal", "-c", cfg, "-o", out2.string(), "--tau-max", "30e-9"}).code == 0);
    CHECK(slurp(out) == slurp(out2));

    nlohmann::json random = doc;
    random["radio"] = {{"phase_mode", "random"}};
    const std::string rcfg = ws.write("random.json", random);
    const fs::path r1 = ws.dir / "r1.csv", r2 = ws.dir / "r2.csv", r3 = ws.dir / "r3.csv";
    CHECK(run({"signal", "-c", rcfg, "-o", r1.string(), "--seed", "4"}).code == 0);
    CHECK(run({"signal", "-c", rcfg, "-o", r2.string(), "--seed", "4"}).code == 0);
    CHECK(run({"signal", "-c", rcfg, "-o", r3.string(), "--seed", "5"}).code == 0);
    CHECK(slurp(r1) == slurp(r2));
    CHECK(slurp(r1) != slurp(r3));

    CHECK(run({"signal", "-o", out.string()}).code == exit_usage);
}

TEST_CASE("CLI - configuration diagnostics")
{
    Workspace ws("mirrorroom_cli_config");
    nlohmann::json doc = desk;
    doc["radio"] = {{"bandwith_hz", 1e9}};
    const Result bad = run({"theory", "-c", ws.write("bad.json", doc)});
    CHECK(bad.code == exit_usage);
    CHECK_THAT(bad.err, ContainsSubstring("radio.bandwith_hz"));

    CHECK(run({"theory", "-c", (ws.dir / "absent.json").string()}).code == exit_usage);

    nlohmann::json low = desk;
    low["radio"] = {{"center_frequency_hz", 1e8}};
    const Result warn = run({"theory", "-c", ws.write("low.json", low), "--curves", "mixing", "--out-dir",
                             ws.dir.string()});
    CHECK(warn.code == 0);
    CHECK_THAT(warn.err, ContainsSubstring("warning"));
}
