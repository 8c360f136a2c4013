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
#include "scf3d/rng.hpp"
#include "scf3d/sampling.hpp"

#include <cmath>
#include <cstdio>
#include <cstring>
#include <istream>
#include <numbers>
#include <ostream>
#include <stdexcept>

namespace scf3d
{
    namespace
    {
        constexpr double pi = std::numbers::pi;
        constexpr std::uint32_t format_version = 1;

        void put_u32(std::ostream &out, std::uint32_t v)
        {
            unsigned char b[4];
            for (int i = 0; i < 4; ++i)
                b[i] = (unsigned char)(v >> (8 * i));
            out.write(reinterpret_cast<const char *>(b), 4);
        }

        void put_u64(std::ostream &out, std::uint64_t v)
        {
            put_u32(out, std::uint32_t(v));
            put_u32(out, std::uint32_t(v >> 32));
        }

        void put_f64(std::ostream &out, double d)
        {
            std::uint64_t v;
            std::memcpy(&v, &d, 8);
            put_u64(out, v);
        }

        std::uint32_t get_u32(std::istream &in)
        {
            unsigned char b[4];
            if (!in.read(reinterpret_cast<char *>(b), 4))
                throw std::runtime_error("truncated realization record");
            return std::uint32_t(b[0]) | std::uint32_t(b[1]) << 8 | std::uint32_t(b[2]) << 16 |
                   std::uint32_t(b[3]) << 24;
        }

        std::uint64_t get_u64(std::istream &in)
        {
            const std::uint64_t lo = get_u32(in);
            const std::uint64_t hi = get_u32(in);
            return lo | hi << 32;
        }

        double get_f64(std::istream &in)
        {
            const std::uint64_t v = get_u64(in);
            double d;
            std::memcpy(&d, &v, 8);
            return d;
        }

        void check_end(const LinkEnd &e, const char *name)
        {
            if (e.port_count < 1)
                throw std::invalid_argument(std::string(name) + ": port count must be positive");
            if (!(e.spacing_over_lambda > 0.0))
                throw std::invalid_argument(std::string(name) + ": spacing must be positive");
            if (!(e.gain_scale > 0.0))
                throw std::invalid_argument(std::string(name) + ": gain scale must be positive");
            if (e.azimuth.axis() != Axis::azimuth || e.elevation.axis() != Axis::elevation)
                throw std::invalid_argument(std::string(name) + ": densities attached to the wrong axes");
        }

        // Fills column n of the steering matrix for one path.
        struct EndSampler
        {
            const LinkEnd &end;
            AngleSampler azimuth;
            AngleSampler elevation;
            bool planar;

            EndSampler(const LinkEnd &e, bool planar_)
                : end(e), azimuth(e.azimuth), elevation(e.elevation), planar(planar_)
            {
            }

            void steer(RandomStream &rng, Eigen::MatrixXcd &a, int n) const
            {
                const double phi = azimuth(rng);
                double theta = pi / 2.0;
                double g = end.gain_scale * end.azimuth_pattern.gain(phi);
                if (!planar)
                {
                    theta = elevation(rng);
                    g *= end.elevation_pattern.gain(theta);
                }
                const double amp = std::sqrt(g);
                const double k = 2.0 * pi * end.spacing_over_lambda * std::sin(phi) * std::sin(theta);
                for (int s = 0; s < a.rows(); ++s)
                    a(s, n) = std::polar(amp, k * double(s));
            }
        };
    }

    double LinkEnd::gain(double phi, double theta) const
    {
        return gain_scale * azimuth_pattern.gain(phi) * elevation_pattern.gain(theta);
    }

    const char *to_string(GeneratorTag tag)
    {
        switch (tag)
        {
        case GeneratorTag::parametric_3d:
            return "parametric-3d";
        case GeneratorTag::parametric_2d:
            return "parametric-2d";
        case GeneratorTag::kronecker:
            return "kronecker";
        }
        return "unknown";
    }

    ChannelRealization draw_parametric(const ParametricConfig &config, std::uint64_t seed, std::uint64_t draw)
    {
        if (config.paths < 1)
            throw std::invalid_argument("draw_parametric: need at least one path");
        check_end(config.transmit, "transmit");
        check_end(config.receive, "receive");
        const EndSampler tx(config.transmit, config.planar), rx(config.receive, config.planar);
        const int n = config.paths;
        Eigen::MatrixXcd at(config.transmit.port_count, n), ar(config.receive.port_count, n);
        Eigen::VectorXcd alpha(n);
        RandomStream rng(seed, draw);
        const double amp = 1.0 / std::sqrt(double(n));
        for (int p = 0; p < n; ++p)
        {
            tx.steer(rng, at, p);
            rx.steer(rng, ar, p);
            alpha(p) = amp * rng.complex_normal();
        }
        ChannelRealization out;
        out.h = ar * alpha.asDiagonal() * at.transpose();
        out.seed = seed;
        out.draw = draw;
        out.tag = config.planar ? GeneratorTag::parametric_2d : GeneratorTag::parametric_3d;
        return out;
    }

    Eigen::MatrixXcd matrix_sqrt_psd(const Eigen::MatrixXcd &m)
    {
        if (m.rows() != m.cols() || m.rows() == 0)
            throw std::invalid_argument("matrix_sqrt_psd: need a non-empty square matrix");
        const double scale = std::max(1.0, m.cwiseAbs().maxCoeff());
        if ((m - m.adjoint()).cwiseAbs().maxCoeff() > 1e-10 * scale)
            throw std::invalid_argument("matrix_sqrt_psd: matrix is not Hermitian");
        Eigen::SelfAdjointEigenSolver<Eigen::MatrixXcd> es(m);
        if (es.info() != Eigen::Success)
            throw std::runtime_error("matrix_sqrt_psd: eigendecomposition failed");
        const double tol = 1e-9 * std::abs(m.trace().real()) / double(m.rows());
        if (es.eigenvalues().minCoeff() < -tol)
            throw std::invalid_argument("matrix_sqrt_psd: matrix is not positive semidefinite");
        const Eigen::VectorXd root = es.eigenvalues().cwiseMax(0.0).cwiseSqrt();
        Eigen::MatrixXcd s = es.eigenvectors() * root.asDiagonal() * es.eigenvectors().adjoint();
        return 0.5 * (s + s.adjoint());
    }

    KroneckerGenerator::KroneckerGenerator(const CorrelationMatrix &r_ms, const CorrelationMatrix &r_bs)
        : KroneckerGenerator(r_ms.dense(), r_bs.dense())
    {
    }

    KroneckerGenerator::KroneckerGenerator(const Eigen::MatrixXcd &r_ms, const Eigen::MatrixXcd &r_bs)
        : sqrt_ms_(matrix_sqrt_psd(r_ms)), sqrt_bs_(matrix_sqrt_psd(r_bs))
    {
    }

    ChannelRealization KroneckerGenerator::operator()(std::uint64_t seed, std::uint64_t draw) const
    {
        RandomStream rng(seed, draw);
        Eigen::MatrixXcd x(rows(), cols());
        for (int i = 0; i < x.rows(); ++i)
            for (int j = 0; j < x.cols(); ++j)
                x(i, j) = rng.complex_normal();
        ChannelRealization out;
        out.h = sqrt_ms_ * x * sqrt_bs_;
        out.seed = seed;
        out.draw = draw;
        out.tag = GeneratorTag::kronecker;
        return out;
    }

    ChannelRealization draw_kronecker(const CorrelationMatrix &r_ms, const CorrelationMatrix &r_bs,
                                      std::uint64_t seed, std::uint64_t draw)
    {
        return KroneckerGenerator(r_ms, r_bs)(seed, draw);
    }

    void write_realizations(std::ostream &out, const std::vector<ChannelRealization> &batch)
    {
        const std::uint32_t rows = batch.empty() ? 0 : std::uint32_t(batch.front().h.rows());
        const std::uint32_t cols = batch.empty() ? 0 : std::uint32_t(batch.front().h.cols());
        for (const auto &r : batch)
            if (r.h.rows() != rows || r.h.cols() != cols)
                throw std::invalid_argument("write_realizations: mixed dimensions in batch");
        out.write("SCFH", 4);
        put_u32(out, format_version);
        put_u32(out, rows);
        put_u32(out, cols);
        put_u64(out, batch.size());
        put_u64(out, batch.empty() ? 0 : batch.front().seed);
        put_u32(out, batch.empty() ? 0 : std::uint32_t(batch.front().tag));
        put_u32(out, 0);
        for (const auto &r : batch)
            for (int i = 0; i < r.h.rows(); ++i)
                for (int j = 0; j < r.h.cols(); ++j)
                {
                    put_f64(out, r.h(i, j).real());
                    put_f64(out, r.h(i, j).imag());
                }
    }

    std::vector<ChannelRealization> read_realizations(std::istream &in)
    {
        char magic[4];
        if (!in.read(magic, 4) || std::memcmp(magic, "SCFH", 4) != 0)
            throw std::runtime_error("not a realization record");
        if (get_u32(in) != format_version)
            throw std::runtime_error("unsupported realization record version");
        const std::uint32_t rows = get_u32(in), cols = get_u32(in);
        const std::uint64_t count = get_u64(in), seed = get_u64(in);
        const std::uint32_t tag = get_u32(in);
        get_u32(in);
        if (tag < 1 || tag > 3)
            throw std::runtime_error("unknown generator tag in realization record");
        std::vector<ChannelRealization> batch;
        batch.reserve(count);
        for (std::uint64_t k = 0; k < count; ++k)
        {
            ChannelRealization r;
            r.h.resize(rows, cols);
            for (std::uint32_t i = 0; i < rows; ++i)
                for (std::uint32_t j = 0; j < cols; ++j)
                {
                    const double re = get_f64(in);
                    const double im = get_f64(in);
                    r.h(i, j) = {re, im};
                }
            r.seed = seed;
            r.draw = k;
            r.tag = GeneratorTag(tag);
            batch.push_back(std::move(r));
        }
        return batch;
    }

    void write_csv(std::ostream &out, const Eigen::MatrixXcd &h)
    {
        char buf[64];
        for (int i = 0; i < h.rows(); ++i)
        {
            for (int j = 0; j < h.cols(); ++j)
            {
                std::snprintf(buf, sizeof buf, "%s%.17g,%.17g", j ? "," : "", h(i, j).real(), h(i, j).imag());
                out << buf;
            }
            out << '\n';
        }
    }
}
