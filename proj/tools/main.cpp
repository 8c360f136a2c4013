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

#include "scf3d/channel.hpp"
#include "scf3d/config.hpp"
#include "scf3d/experiments.hpp"
#include "scf3d/validation.hpp"

#include <CLI11.hpp>

#include <fstream>
#include <iostream>
#include <memory>

namespace
{
    struct Options
    {
        std::string config_path;
        std::uint64_t seed = 1;
        std::string out;
        int draws = 2000;
        bool bits = false;
        bool nats = false;
        unsigned threads = 1;
        std::vector<std::string> assignments;
    };

    // Config file section for the command, with --set assignments applied on top.
    std::map<std::string, std::string> overrides(const Options &o, const std::string &section)
    {
        scf3d::ConfigFile file = o.config_path.empty() ? scf3d::ConfigFile{} : scf3d::ConfigFile::load(o.config_path);
        for (const auto &a : o.assignments)
        {
            const auto eq = a.find('=');
            if (eq == std::string::npos)
                throw scf3d::ConfigError("--set expects key=value, got '" + a + "'");
            file.apply_assignment(a.substr(0, eq).find('.') == std::string::npos ? section + "." + a : a);
        }
        return file.has_section(section) ? file.section(section) : std::map<std::string, std::string>{};
    }

    class Output
    {
    public:
        explicit Output(const std::string &path, bool binary = false)
        {
            if (path.empty() || path == "-")
                return;
            file_ = std::make_unique<std::ofstream>(path, binary ? std::ios::binary : std::ios::out);
            if (!*file_)
                throw scf3d::ConfigError("cannot open " + path + " for writing");
        }
        std::ostream &stream() { return file_ ? *file_ : std::cout; }

    private:
        std::unique_ptr<std::ofstream> file_;
    };

    int emit(scf3d::ResultTable t, const Options &o)
    {
        if (o.bits)
            t.convert_to_bits();
        Output out(o.out);
        t.write_csv(out.stream());
        for (const auto &c : t.checks)
            if (!c.passed)
            {
                std::cerr << "check failed: " << c.name << '\n';
                return 1;
            }
        return 0;
    }

    int run_named(const std::string &experiment, const std::string &section, const Options &o,
                  std::map<std::string, std::string> extra = {})
    {
        scf3d::ExperimentSpec spec;
        spec.name = experiment;
        spec.overrides = std::move(extra);
        for (auto &kv : overrides(o, section))
            spec.overrides[kv.first] = kv.second;
        spec.draws = o.draws;
        spec.seed = o.seed;
        spec.threads = o.threads;
        return emit(scf3d::run_experiment(spec), o);
    }
}

int main(int argc, char **argv)
{
    CLI::App app{"Spatial correlation and mutual information of 3D MIMO channels"};
    app.require_subcommand(1);
    Options o;
    app.add_option("--config", o.config_path, "Configuration file")->check(CLI::ExistingFile);
    app.add_option("--seed", o.seed, "Random seed");
    app.add_option("--out", o.out, "Output path (stdout when omitted)");
    app.add_option("--draws", o.draws, "Monte-Carlo draws")->check(CLI::PositiveNumber);
    auto *bits = app.add_flag("--bits", o.bits, "Report information in bits");
    app.add_flag("--nats", o.nats, "Report information in nats (default)")->excludes(bits);
    app.add_option("--threads", o.threads, "Worker threads, 0 for all cores");
    app.add_option("--set", o.assignments, "Override a parameter: [section.]key=value");
    app.fallthrough();

    auto *scf = app.add_subcommand("scf", "Correlation function and matrix of one link end");
    bool matrix = false;
    scf->add_flag("--matrix", matrix, "Write the correlation matrix instead of rho(lag)");

    auto *gen = app.add_subcommand("channel-gen", "Draw channel realizations");
    int count = 1;
    std::string format = "binary";
    gen->add_option("--count", count, "Number of realizations")->check(CLI::PositiveNumber);
    gen->add_option("--format", format, "binary or csv")->check(CLI::IsMember({"binary", "csv"}));

    auto *mono = app.add_subcommand("mi-mono", "Deterministic and Monte-Carlo mono-user MI");
    auto *multi = app.add_subcommand("mi-multi", "Multi-user RZF rate");
    auto *validate = app.add_subcommand("validate", "Run every oracle and invariant check");

    auto *run = app.add_subcommand("run", "Run a named experiment");
    std::string experiment;
    run->add_option("experiment", experiment, "Experiment name")
        ->required()
        ->check(CLI::IsMember(scf3d::experiment_names()));
    auto *list = app.add_subcommand("list", "List experiments");

    try
    {
        app.parse(argc, argv);
    }
    catch (const CLI::ParseError &e)
    {
        const int code = app.exit(e);
        return code == 0 ? 0 : 2;
    }

    try
    {
        if (*list)
        {
            for (const auto &n : scf3d::experiment_names())
                std::cout << n << '\n';
            return 0;
        }
        if (*scf)
        {
            scf3d::Params p = scf3d::scf_defaults();
            p.override_with(overrides(o, "scf"), "[scf]");
            if (matrix)
            {
                const scf3d::ScfConfig cfg = scf3d::side_scf_config(p, "", int(p.integer("truncation")));
                Output out(o.out);
                (p.flag("planar") ? scf3d::correlation_matrix_2d(cfg.azimuth, cfg.spacing_over_lambda,
                                                                 cfg.port_count, cfg.truncation, cfg.gain_scale)
                                  : scf3d::correlation_matrix(cfg))
                    .write_csv(out.stream());
                return 0;
            }
            return emit(scf3d::run_scf(p), o);
        }
        if (*gen)
        {
            scf3d::Params p = scf3d::channel_defaults();
            p.override_with(overrides(o, "channel-gen"), "[channel-gen]");
            const auto batch = scf3d::run_channel_gen(p, o.seed, count, o.threads);
            Output out(o.out, format == "binary");
            if (format == "binary")
                scf3d::write_realizations(out.stream(), batch);
            else
                for (const auto &r : batch)
                {
                    out.stream() << "# draw = " << r.draw << ", generator = " << scf3d::to_string(r.tag) << '\n';
                    scf3d::write_csv(out.stream(), r.h);
                }
            return 0;
        }
        if (*mono)
            return run_named("det-mi-verify", "mi-mono", o);
        if (*multi)
            return run_named("multiuser-tilt-sweep", "mi-multi", o, {{"tilt_list", "96"}});
        if (*validate)
        {
            const scf3d::ValidationReport r = scf3d::validate({o.seed, o.draws, o.threads});
            Output out(o.out);
            r.write(out.stream());
            return r.passed() ? 0 : 1;
        }
        return run_named(experiment, experiment, o);
    }
    catch (const scf3d::ConfigError &e)
    {
        std::cerr << "configuration error: " << e.what() << '\n';
        return 2;
    }
    catch (const std::invalid_argument &e)
    {
        std::cerr << "invalid parameter: " << e.what() << '\n';
        return 2;
    }
    catch (const std::exception &e)
    {
        std::cerr << "error: " << e.what() << '\n';
        return 3;
    }
}
