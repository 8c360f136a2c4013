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

#ifndef SCF3D_CHANNEL_HPP
#define SCF3D_CHANNEL_HPP

#include "scf3d/scf.hpp"
#include "scf3d/spectra.hpp"

#include <Eigen/Dense>

#include <cstdint>
#include <iosfwd>
#include <string>
#include <vector>

namespace scf3d
{
    // Angles, patterns and array geometry of one link end.
    struct LinkEnd
    {
        AngularDensity azimuth;
        AngularDensity elevation;
        AntennaPattern azimuth_pattern;
        AntennaPattern elevation_pattern;
        double spacing_over_lambda;
        int port_count;
        double gain_scale = 1.0;

        // Power gain g(phi, theta) = gain_scale g_H(phi) g_V(theta).
        double gain(double phi, double theta) const;
    };

    struct ParametricConfig
    {
        int paths;
        LinkEnd transmit; // base station, N_BS ports
        LinkEnd receive;  // mobile, N_MS ports
        // Elevation fixed at pi / 2 with unit vertical gain on both ends.
        bool planar = false;
    };

    enum class GeneratorTag : std::uint32_t
    {
        parametric_3d = 1,
        parametric_2d = 2,
        kronecker = 3
    };

    const char *to_string(GeneratorTag tag);

    struct ChannelRealization
    {
        Eigen::MatrixXcd h; // N_MS x N_BS, entry (u, s)
        std::uint64_t seed = 0;
        std::uint64_t draw = 0; // stream index under the seed
        GeneratorTag tag = GeneratorTag::parametric_3d;
    };

    // Sum of `paths` plane waves with i.i.d. CN(0, 1/N) amplitudes:
    //   H(u, s) = sum_n alpha_n sqrt(g_t) e^{i beta_t s sin(phi_n) sin(theta_n)}
    //                           sqrt(g_r) e^{i beta_r u sin(varphi_n) sin(vartheta_n)}
    // with ports indexed from 0. Deterministic in (seed, draw).
    ChannelRealization draw_parametric(const ParametricConfig &config, std::uint64_t seed, std::uint64_t draw = 0);

    // Principal square root of a Hermitian PSD matrix by eigendecomposition. Throws
    // std::invalid_argument when the input is not Hermitian to 1e-10 or has an eigenvalue
    // below -1e-9 trace / order; small negative eigenvalues are clipped.
    Eigen::MatrixXcd matrix_sqrt_psd(const Eigen::MatrixXcd &m);

    // H = R_MS^{1/2} X R_BS^{1/2}; the square roots are computed once.
    class KroneckerGenerator
    {
    public:
        KroneckerGenerator(const CorrelationMatrix &r_ms, const CorrelationMatrix &r_bs);
        KroneckerGenerator(const Eigen::MatrixXcd &r_ms, const Eigen::MatrixXcd &r_bs);

        ChannelRealization operator()(std::uint64_t seed, std::uint64_t draw = 0) const;

        int rows() const { return int(sqrt_ms_.rows()); }
        int cols() const { return int(sqrt_bs_.rows()); }

    private:
        Eigen::MatrixXcd sqrt_ms_;
        Eigen::MatrixXcd sqrt_bs_;
    };

    ChannelRealization draw_kronecker(const CorrelationMatrix &r_ms, const CorrelationMatrix &r_bs,
                                      std::uint64_t seed, std::uint64_t draw = 0);

    // Flat binary record, little-endian:
    //   "SCFH", u32 version, u32 rows, u32 cols, u64 count, u64 seed, u32 tag, u32 reserved,
    //   then count matrices in row-major order as (re, im) float64 pairs.
    void write_realizations(std::ostream &out, const std::vector<ChannelRealization> &batch);
    std::vector<ChannelRealization> read_realizations(std::istream &in);

    // Row-major, each entry as "re,im".
    void write_csv(std::ostream &out, const Eigen::MatrixXcd &h);
}

#endif
