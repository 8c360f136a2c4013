// SPDX-License-Identifier: Apache-2.0
//
// scf3d: spatial correlation and mutual information of 3D MIMO channels
// Copyright (C) 2026 The scf3d authors
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

#include "scf3d/experiments.hpp"

#include <catch2/catch_amalgamated.hpp>

#include <cmath>
#include <sstream>

using namespace scf3d;

namespace
{
    // Small settings so that every experiment finishes in a few seconds.
    ExperimentSpec small(const std::string &name, unsigned threads = 1)
    {
        ExperimentSpec s;
        s.name = name;
        s.draws = 40;
        s.seed = 7;
        s.threads = threads;
        if (name == "multiuser-tilt-sweep")
            s.overrides = {{"users", "4"}, {"bs_ports", "8"}, {"drops", "2"}, {"tilt_list", "95,97"}};
        else if (name == "mi-vs-kappa")
            s.overrides = {{"kappa_list", "3,10"}, {"antennas_list", "6"}};
        else if (name == "pinhole")
            s.overrides = {{"paths_list", "5,20"}};
        return s;
    }
}

TEST_CASE("every experiment produces a well-formed table", "[experiments]")
{
    for (const auto &name : experiment_names())
    {
        INFO(name);
        const auto t = run_experiment(small(name));
        CHECK(t.name == name);
        REQUIRE_FALSE(t.columns.empty());
        REQUIRE_FALSE(t.rows.empty());
        CHECK_FALSE(t.checks.empty());
        for (const auto &row : t.rows)
        {
            REQUIRE(row.size() == t.columns.size());
            for (double v : row)
                CHECK(std::isfinite(v));
        }
        const std::string csv = t.to_csv();
        CHECK(csv.find("# seed = 7") != std::string::npos);
        CHECK(csv.find("# check ") != std::string::npos);
    }
}

TEST_CASE("experiment output does not depend on the thread count", "[experiments][property]")
{
    for (const std::string name : {"scf-tx", "det-mi-verify", "mi-vs-sigma", "multiuser-tilt-sweep"})
    {
        INFO(name);
        CHECK(run_experiment(small(name, 1)).to_csv() == run_experiment(small(name, 3)).to_csv());
    }
}

TEST_CASE("defaults are tagged and overrides are marked", "[experiments]")
{
    auto spec = small("scf-tx");
    spec.overrides["tolerance"] = "0.5";
    const std::string csv = run_experiment(spec).to_csv();
    CHECK(csv.find("# tolerance = 0.5  # override") != std::string::npos);
    CHECK(csv.find("# validation-setup") != std::string::npos);
    for (const auto &name : experiment_names())
    {
        const Params p = experiment_defaults(name);
        for (const auto &e : p.entries())
        {
            INFO(name << "." << e.key);
            CHECK_FALSE(e.tag.empty());
        }
    }
}

TEST_CASE("bad experiment requests raise configuration errors", "[experiments]")
{
    ExperimentSpec s;
    s.name = "nope";
    CHECK_THROWS_AS(run_experiment(s), ConfigError);
    CHECK_THROWS_AS(experiment_defaults("nope"), ConfigError);
    s = small("scf-tx");
    s.overrides["bogus"] = "1";
    CHECK_THROWS_AS(run_experiment(s), ConfigError);
    s = small("scf-tx");
    s.overrides["tx_kappa"] = "abc";
    CHECK_THROWS_AS(run_experiment(s), ConfigError);
}

TEST_CASE("information columns convert to bits", "[experiments]")
{
    auto t = run_experiment(small("det-mi-verify"));
    REQUIRE_FALSE(t.information_columns.empty());
    const int c = t.column(t.information_columns.front());
    const double nats = t.rows[0][c];
    t.convert_to_bits();
    CHECK(t.rows[0][c] == Catch::Approx(nats / std::log(2.0)).epsilon(1e-14));
    CHECK(t.to_csv().find("# information_units = bits") != std::string::npos);
    t.convert_to_bits();
    CHECK(t.rows[0][c] == Catch::Approx(nats / std::log(2.0)).epsilon(1e-14));
}

TEST_CASE("harness entry points", "[experiments]")
{
    auto p = scf_defaults();
    const auto t = run_scf(p);
    CHECK(t.rows.front()[t.column("abs")] > 0.0);
    auto c = channel_defaults();
    const auto a = run_channel_gen(c, 3, 4, 1), b = run_channel_gen(c, 3, 4, 2);
    REQUIRE(a.size() == 4);
    for (int i = 0; i < 4; ++i)
        CHECK(a[i].h == b[i].h);
}
