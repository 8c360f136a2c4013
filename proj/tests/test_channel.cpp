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

#include "oracles.hpp"
#include "scf3d/channel.hpp"

#include <catch2/catch_amalgamated.hpp>

#include <sstream>

using namespace scf3d;
using Catch::Matchers::WithinAbs;
using oracle::deg;
using oracle::pi;

namespace
{
    LinkEnd transmit_end(int ports = 6, double spacing = 0.5)
    {
        return LinkEnd{AngularDensity::von_mises(2 * pi / 3, 5.0),
                       AngularDensity::laplacian_elevation(deg(90), deg(7)),
                       AntennaPattern::unit(),
                       AntennaPattern::vertical(deg(95), deg(15)),
                       spacing,
                       ports,
                       2.0};
    }

    LinkEnd receive_end(int ports = 4)
    {
        return LinkEnd{AngularDensity::von_mises(2 * pi / 3, 5.0),
                       AngularDensity::laplacian_elevation(deg(90), deg(10)),
                       AntennaPattern::unit(),
                       AntennaPattern::unit(),
                       0.5,
                       ports,
                       1.0};
    }
}

TEST_CASE("parametric draws are deterministic in seed and draw index", "[channel]")
{
    const ParametricConfig cfg{20, transmit_end(), receive_end(), false};
    const auto a = draw_parametric(cfg, 5, 17), b = draw_parametric(cfg, 5, 17), c = draw_parametric(cfg, 5, 18);
    REQUIRE(a.h.rows() == 4);
    REQUIRE(a.h.cols() == 6);
    CHECK(a.h == b.h);
    CHECK(a.h != c.h);
    CHECK(a.seed == 5);
    CHECK(a.draw == 17);
    CHECK(a.tag == GeneratorTag::parametric_3d);
    CHECK(draw_parametric(ParametricConfig{20, transmit_end(), receive_end(), true}, 5, 17).tag ==
          GeneratorTag::parametric_2d);
}

TEST_CASE("parametric channel covariance factors into transmit and receive correlation", "[channel]")
{
    const ParametricConfig cfg{10, transmit_end(), receive_end(), false};
    const int draws = 4000;
    std::vector<std::complex<double>> mean(6, 0.0);
    std::vector<double> m2(6, 0.0);
    for (int d = 0; d < draws; ++d)
    {
        const auto r = draw_parametric(cfg, 1, d);
        for (int l = 0; l < 6; ++l)
        {
            const auto v = r.h(1, l) * std::conj(r.h(1, 0));
            mean[l] += v;
            m2[l] += std::norm(v);
        }
    }
    for (int l = 0; l < 6; ++l)
    {
        mean[l] /= draws;
        const double se = std::sqrt((m2[l] / draws - std::norm(mean[l])) / draws);
        // rho_t(l) rho_r(0) with rho_r(0) = 1 for a unit receive pattern.
        const oracle::Side s{2 * pi / 3, 5.0, 0.0, deg(90), deg(7), deg(95), deg(15), 2.0, 0.5};
        INFO("lag " << l);
        CHECK(std::abs(mean[l] - oracle::rho(s, l)) < 5.0 * se + 1e-3);
    }
}

TEST_CASE("Kronecker draws carry the prescribed covariance", "[channel]")
{
    const CorrelationMatrix r_bs({{1.0, 0.0}, {0.5, 0.4}, {0.09, 0.4}});
    const CorrelationMatrix r_ms({{1.0, 0.0}, {-0.3, 0.2}});
    const KroneckerGenerator gen(r_ms, r_bs);
    REQUIRE(gen.rows() == 2);
    REQUIRE(gen.cols() == 3);
    const int draws = 40000;
    Eigen::MatrixXcd acc_bs = Eigen::MatrixXcd::Zero(3, 3), acc_ms = Eigen::MatrixXcd::Zero(2, 2);
    for (int d = 0; d < draws; ++d)
    {
        const auto h = gen(3, d).h;
        acc_bs += h.row(0).transpose() * h.row(0).adjoint().transpose(); // E[H(0,s) conj H(0,s')]
        acc_ms += h.col(0) * h.col(0).adjoint();
    }
    acc_bs /= draws;
    acc_ms /= draws;
    for (int s = 0; s < 3; ++s)
        for (int t = 0; t < 3; ++t)
            CHECK(std::abs(acc_bs(s, t) - std::conj(r_bs(s, t))) < 0.03);
    for (int u = 0; u < 2; ++u)
        for (int v = 0; v < 2; ++v)
            CHECK(std::abs(acc_ms(u, v) - r_ms(u, v)) < 0.03);
    CHECK(draw_kronecker(r_ms, r_bs, 3, 9).h == gen(3, 9).h);
    CHECK(gen(3, 9).tag == GeneratorTag::kronecker);
}

TEST_CASE("PSD square root", "[channel]")
{
    Eigen::MatrixXcd m(2, 2);
    m << 2.0, std::complex<double>(0.5, 0.5), std::complex<double>(0.5, -0.5), 1.0;
    const Eigen::MatrixXcd s = matrix_sqrt_psd(m);
    CHECK((s * s - m).norm() < 1e-13);
    CHECK((s - s.adjoint()).norm() < 1e-14);
    Eigen::MatrixXcd bad = m;
    bad(0, 1) += 0.1;
    CHECK_THROWS_AS(matrix_sqrt_psd(bad), std::invalid_argument);
    Eigen::MatrixXcd neg = Eigen::MatrixXcd::Identity(2, 2);
    neg(1, 1) = -0.5;
    CHECK_THROWS_AS(matrix_sqrt_psd(neg), std::invalid_argument);
}

TEST_CASE("realizations round-trip through the binary format", "[channel]")
{
    const ParametricConfig cfg{5, transmit_end(3), receive_end(2), false};
    std::vector<ChannelRealization> batch{draw_parametric(cfg, 8, 0), draw_parametric(cfg, 8, 1)};
    std::stringstream buf;
    write_realizations(buf, batch);
    const auto back = read_realizations(buf);
    REQUIRE(back.size() == 2);
    for (int i = 0; i < 2; ++i)
    {
        CHECK(back[i].h == batch[i].h);
        CHECK(back[i].draw == batch[i].draw);
        CHECK(back[i].seed == 8);
        CHECK(back[i].tag == GeneratorTag::parametric_3d);
    }
    std::stringstream junk("XXXX0000000000000000000000000000000000");
    CHECK_THROWS_AS(read_realizations(junk), std::runtime_error);
    std::ostringstream csv;
    write_csv(csv, batch[0].h);
    const std::string text = csv.str();
    CHECK(std::count(text.begin(), text.end(), '\n') == 2);
}

TEST_CASE("invalid channel configurations are rejected", "[channel]")
{
    CHECK_THROWS_AS(draw_parametric(ParametricConfig{0, transmit_end(), receive_end(), false}, 1), std::invalid_argument);
    LinkEnd bad = transmit_end();
    bad.port_count = 0;
    CHECK_THROWS_AS(draw_parametric(ParametricConfig{3, bad, receive_end(), false}, 1), std::invalid_argument);
}
