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
#include "scf3d/infotheory.hpp"
#include "scf3d/rng.hpp"

#include <catch2/catch_amalgamated.hpp>

using namespace scf3d;
using Catch::Matchers::WithinAbs;
using Catch::Matchers::WithinRel;
using oracle::deg;
using oracle::pi;

namespace
{
    Eigen::MatrixXcd random_matrix(int rows, int cols, std::uint64_t stream)
    {
        RandomStream r(99, stream);
        Eigen::MatrixXcd m(rows, cols);
        for (int i = 0; i < rows; ++i)
            for (int j = 0; j < cols; ++j)
                m(i, j) = r.complex_normal();
        return m;
    }

    CorrelationMatrix exponential_correlation(int n, std::complex<double> r)
    {
        std::vector<std::complex<double>> row(n);
        for (int k = 0; k < n; ++k)
            row[k] = std::pow(r, k);
        return CorrelationMatrix(row);
    }
}

TEST_CASE("mutual information equals the eigenvalue sum", "[infotheory]")
{
    const Eigen::MatrixXcd h = random_matrix(5, 7, 0);
    for (double s2 : {0.1, 1.0, 10.0})
    {
        Eigen::SelfAdjointEigenSolver<Eigen::MatrixXcd> es(h * h.adjoint());
        double ref = 0.0;
        for (double l : es.eigenvalues())
            ref += std::log(1.0 + l / (7.0 * s2));
        CHECK_THAT(mutual_information(h, s2), WithinRel(ref, 1e-12));
    }
}

TEST_CASE("identity correlation gives the golden-ratio fixed point", "[infotheory]")
{
    const auto id = CorrelationMatrix::identity(20);
    const auto s = deterministic_mi(id, id, 1.0);
    const double k = (std::sqrt(5.0) - 1.0) / 2.0;
    CHECK_THAT(s.kappa, WithinAbs(k, 1e-10));
    CHECK_THAT(s.kappa_bar, WithinAbs(k, 1e-10));
    CHECK_THAT(s.v, WithinAbs(2.0 * std::log(1.0 + k) - k * k, 1e-10));
}

TEST_CASE("fixed point satisfies its defining equations", "[infotheory][property]")
{
    const auto r_bs = exponential_correlation(12, {0.7, 0.3});
    const auto r_ms = exponential_correlation(9, {-0.2, 0.5});
    for (double s2 : {0.01, 0.3, 1.0, 5.0})
    {
        const auto s = deterministic_mi(r_bs, r_ms, s2);
        const double n = 12.0;
        const Eigen::MatrixXcd i_bs = Eigen::MatrixXcd::Identity(12, 12), i_ms = Eigen::MatrixXcd::Identity(9, 9);
        const double kappa = (r_ms.dense() * (i_ms + s.kappa_bar / s2 * r_ms.dense()).inverse()).trace().real() / n;
        const double kappa_bar = (r_bs.dense() * (i_bs + s.kappa / s2 * r_bs.dense()).inverse()).trace().real() / n;
        CHECK_THAT(s.kappa, WithinRel(kappa, 1e-9));
        CHECK_THAT(s.kappa_bar, WithinRel(kappa_bar, 1e-9));
        const double v = std::log((i_bs + s.kappa / s2 * r_bs.dense()).determinant().real()) / n +
                         std::log((i_ms + s.kappa_bar / s2 * r_ms.dense()).determinant().real()) / n -
                         s.kappa * s.kappa_bar / s2;
        CHECK_THAT(s.v, WithinRel(v, 1e-9));
        CHECK(s.v > 0.0);
    }
}

TEST_CASE("deterministic equivalent decreases with noise and tracks Monte-Carlo", "[infotheory]")
{
    const auto r_bs = exponential_correlation(20, {0.5, 0.5});
    const auto r_ms = exponential_correlation(20, {0.3, -0.1});
    double prev = 1e300;
    for (double s2 : {0.01, 0.1, 1.0, 10.0})
    {
        const double v = deterministic_mi(r_bs, r_ms, s2).v;
        CHECK(v < prev);
        prev = v;
    }
    const KroneckerGenerator gen(r_ms, r_bs);
    double mean = 0.0;
    const int draws = 1000;
    for (int d = 0; d < draws; ++d)
        mean += mutual_information(gen(4, d), 1.0) / 20.0;
    mean /= draws;
    CHECK_THAT(deterministic_mi(r_bs, r_ms, 1.0).v, WithinRel(mean, 0.02));
}

TEST_CASE("eigenvalue form matches the matrix form", "[infotheory]")
{
    const auto r_bs = exponential_correlation(10, {0.6, 0.0});
    const auto r_ms = exponential_correlation(10, {0.0, 0.4});
    const auto a = deterministic_mi(r_bs, r_ms, 0.5), b = deterministic_mi(r_bs.eigenvalues(), r_ms.eigenvalues(), 0.5);
    CHECK_THAT(a.v, WithinRel(b.v, 1e-12));
    CHECK_THROWS_AS(deterministic_mi(r_bs, r_ms, 0.0), std::invalid_argument);
}

TEST_CASE("RZF precoder meets the power constraint and matches the N x N form", "[infotheory]")
{
    const Eigen::MatrixXcd h = random_matrix(8, 3, 1);
    const double zeta = 0.2, power = 2.0;
    const Eigen::MatrixXcd g = rzf_precoder(h, zeta, power);
    CHECK_THAT((g.adjoint() * g).trace().real(), WithinRel(power, 1e-12));
    Eigen::MatrixXcd big = h * h.adjoint();
    big.diagonal().array() += zeta * 8.0;
    Eigen::MatrixXcd ref = big.inverse() * h;
    ref *= std::sqrt(power / ref.squaredNorm());
    CHECK((g - ref).norm() < 1e-12);
    const Eigen::VectorXd all = sinr_all(h, g);
    for (int k = 0; k < 3; ++k)
    {
        double interference = 0.0;
        for (int j = 0; j < 3; ++j)
            if (j != k)
                interference += std::norm(h.col(k).dot(g.col(j)));
        const double ref_sinr = std::norm(h.col(k).dot(g.col(k))) / (interference + 1.0);
        CHECK_THAT(sinr(k, h, g), WithinRel(ref_sinr, 1e-12));
        CHECK_THAT(all(k), WithinRel(ref_sinr, 1e-12));
    }
    CHECK_THROWS_AS(rzf_precoder(h, 0.0), std::invalid_argument);
}

TEST_CASE("link budget and geometry", "[infotheory]")
{
    CHECK_THAT(uma_path_loss_db(1000.0), WithinAbs(128.1, 1e-12));
    CHECK_THAT(uma_path_loss_db(100.0), WithinAbs(90.5, 1e-12));
    const LinkBudget b;
    CHECK_THAT(large_scale_factor(100.0, b), WithinRel(40.0 * std::pow(10.0, (-90.5 + 17.0 + 6.0) / 10.0) / 1.13e-13, 1e-12));
    CHECK_THAT(elevation_los(23.5, 250.0), WithinAbs(deg(95.37), deg(0.01)));
    CHECK_THAT(elevation_los(23.5, 100.0), WithinAbs(deg(103.23), deg(0.01)));
    CHECK(elevation_los(0.0, 10.0) == pi / 2);
}

TEST_CASE("user channels have the prescribed covariance", "[infotheory]")
{
    const auto r = exponential_correlation(4, {0.6, 0.2});
    const int draws = 20000;
    Eigen::MatrixXcd acc = Eigen::MatrixXcd::Zero(4, 4);
    for (int d = 0; d < draws; ++d)
    {
        const Eigen::VectorXcd h = user_channel(r, 3.0, 6, d);
        acc += h * h.adjoint();
    }
    acc /= draws;
    // Each entry has standard error about 3 / sqrt(draws).
    const Eigen::MatrixXcd dev = acc - 3.0 * r.dense();
    CHECK(dev.cwiseAbs().maxCoeff() < 5.0 * 3.0 / std::sqrt(double(draws)));
}

TEST_CASE("multi-user simulation is reproducible across thread counts", "[infotheory][property]")
{
    MultiUserConfig cfg;
    cfg.users = 4;
    cfg.bs_ports = 8;
    const auto r = exponential_correlation(8, {0.5, 0.1});
    for (int k = 0; k < 4; ++k)
    {
        cfg.correlation_sqrt.push_back(r.sqrt());
        cfg.large_scale.push_back(100.0 * (k + 1));
    }
    const auto a = simulate_multiuser(cfg, 12, 40, 1), b = simulate_multiuser(cfg, 12, 40, 3);
    REQUIRE(a.per_draw.size() == 40);
    CHECK(a.per_draw == b.per_draw);
    CHECK(a.mean_rate == b.mean_rate);
    CHECK(a.mean_rate > 0.0);
    CHECK_THAT(a.zeta, WithinRel(1.0 / (4.0 * 250.0), 1e-12));
    const auto tail = simulate_multiuser(cfg, 12, 10, 1, 30);
    for (int i = 0; i < 10; ++i)
        CHECK(tail.per_draw[i] == a.per_draw[30 + i]);
}
