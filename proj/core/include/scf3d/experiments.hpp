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

#ifndef SCF3D_EXPERIMENTS_HPP
#define SCF3D_EXPERIMENTS_HPP

#include "scf3d/channel.hpp"
#include "scf3d/config.hpp"
#include "scf3d/scf.hpp"

#include <cstdint>
#include <iosfwd>
#include <map>
#include <string>
#include <vector>

namespace scf3d
{
    struct Check
    {
        std::string name;
        double measured = 0.0;
        double threshold = 0.0;
        bool passed = false;
        std::string detail;
    };

    struct ResultTable
    {
        std::string name;
        std::vector<std::string> metadata; // written as-is, each starting with '#'
        std::vector<std::string> columns;
        std::vector<std::vector<double>> rows;
        std::vector<Check> checks;
        std::vector<std::string> information_columns; // nats unless converted

        bool passed() const;
        // Rescales the information columns by 1 / ln 2 and updates the units line.
        void convert_to_bits();
        int column(const std::string &name) const;
        void write_csv(std::ostream &out) const;
        std::string to_csv() const;
    };

    struct ExperimentSpec
    {
        std::string name;
        std::map<std::string, std::string> overrides;
        int draws = 2000;
        std::uint64_t seed = 1;
        unsigned threads = 1;
    };

    std::vector<std::string> experiment_names();
    // Complete default parameter set of an experiment; throws ConfigError for unknown names.
    Params experiment_defaults(const std::string &name);
    ResultTable run_experiment(const ExperimentSpec &spec);

    // One link end described by prefixed parameters ("tx_", "rx_", or ""):
    //   az_density  von_mises | uniform | tabulated    kappa, mu_deg, az_lo_deg, az_hi_deg, az_table
    //   el_density  laplacian | uniform | tabulated    theta0_deg, sigma_deg, el_lo_deg, el_hi_deg, el_table
    //   h_pattern   omni | sector                      phi3db_deg
    //   v_pattern   omni | sector                      tilt_deg, theta3db_deg
    //   pattern_floor, gain_dbi, spacing (d / lambda), ports, fs_path (auto | closed | quadrature)
    struct SideDefaults
    {
        std::string az_density = "von_mises";
        double kappa = 5.0, mu_deg = 0.0, az_lo_deg = -180.0, az_hi_deg = 180.0;
        std::string el_density = "laplacian";
        double theta0_deg = 90.0, sigma_deg = 10.0, el_lo_deg = 80.0, el_hi_deg = 100.0;
        std::string h_pattern = "omni";
        double phi3db_deg = 70.0;
        std::string v_pattern = "omni";
        double tilt_deg = 95.0, theta3db_deg = 15.0;
        double gain_dbi = 0.0;
        double spacing = 0.5;
        int ports = 10;
    };

    void add_side_params(Params &p, const std::string &prefix, const SideDefaults &d, const std::string &tag);
    AngularSpectrum side_azimuth(const Params &p, const std::string &prefix);
    AngularSpectrum side_elevation(const Params &p, const std::string &prefix);
    LinkEnd side_link_end(const Params &p, const std::string &prefix);
    // truncation <= 0 selects max(15, select_truncation(spacing, ports - 1, gain)).
    ScfConfig side_scf_config(const Params &p, const std::string &prefix, int truncation);

    // Harness entry points behind the CLI subcommands other than `run`.
    Params scf_defaults();
    ResultTable run_scf(const Params &p);
    Params channel_defaults();
    std::vector<ChannelRealization> run_channel_gen(const Params &p, std::uint64_t seed, int count, unsigned threads);
}

#endif
