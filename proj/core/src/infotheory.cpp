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

#include "scf3d/infotheory.hpp"
#include "scf3d/parallel.hpp"
#include "scf3d/rng.hpp"

#include <cmath>
#include <numbers>
#include <numeric>
#include <stdexcept>

namespace scf3d
{
    namespace
    {
        constexpr int fixed_point_cap = 10000;
        constexpr double fixed_point_target = 1e-13;
        constexpr double fixed_point_accept = 1e-10;

        struct FixedPointMap
        {
            const Eigen::VectorXd &bs;
            const Eigen::VectorXd &ms;
            double n_bs;
            double s2;

            double kappa_of(double kappa_bar) const
            {
                double s = 0.0;
                for (double l : ms)
                    s += l / (1.0 + kappa_bar * l / s2);
                return s / n_bs;
            }

            double kappa_bar_of(double kappa) const
            {
                double s = 0.0;
                for (double l : bs)
                    s += l / (1.0 + kappa * l / s2);
                return s / n_bs;
            }

            double residual(double k, double kb) const
            {
                return std::max(std::abs(k - kappa_of(kb)), std::abs(kb - kappa_bar_of(k)));
            }
        };

        bool iterate(const FixedPointMap &f, double damping, FixedPointSolution &sol)
        {
            double k = sol.kappa, kb = sol.kappa_bar;
            for (int it = 1; it <= fixed_point_cap; ++it)
            {
                const double k_new = f.kappa_of(kb);
                const double kb_new = f.kappa_bar_of(k);
                k = (1.0 - damping) * k + damping * k_new;
                kb = (1.0 - damping) * kb + damping * kb_new;
                const double r = f.residual(k, kb);
                sol.iterations += 1;
                if (r <= fixed_point_target * std::max(1.0, std::max(k, kb)))
                {
                    sol.kappa = k;
                    sol.kappa_bar = kb;
                    sol.residual = r;
                    return true;
                }
            }
            sol.kappa = k;
            sol.kappa_bar = kb;
            sol.residual = f.residual(k, kb);
            return sol.residual <= fixed_point_accept;
        }
    }

    double mutual_information(const Eigen::MatrixXcd &h, double noise_variance)
    {
        if (!(noise_variance > 0.0))
            throw std::invalid_argument("mutual_information: noise variance must be positive");
        const double scale = 1.0 / (double(h.cols()) * noise_variance);
        Eigen::MatrixXcd a = Eigen::MatrixXcd::Identity(h.rows(), h.rows());
        a.noalias() += scale * h * h.adjoint();
        Eigen::LLT<Eigen::MatrixXcd> llt(a);
        if (llt.info() != Eigen::Success)
            throw std::runtime_error("mutual_information: factorization failed");
        double logdet = 0.0;
        const auto &l = llt.matrixLLT();
        for (int i = 0; i < l.rows(); ++i)
            logdet += 2.0 * std::log(l(i, i).real());
        return logdet;
    }

    double mutual_information(const ChannelRealization &h, double noise_variance)
    {
        return mutual_information(h.h, noise_variance);
    }

    FixedPointSolution deterministic_mi(const Eigen::VectorXd &eig_bs, const Eigen::VectorXd &eig_ms,
                                        double noise_variance)
    {
        if (!(noise_variance > 0.0))
            throw std::invalid_argument("deterministic_mi: noise variance must be positive");
        if (eig_bs.size() == 0 || eig_ms.size() == 0)
            throw std::invalid_argument("deterministic_mi: empty spectrum");
        if (eig_bs.minCoeff() < 0.0 || eig_ms.minCoeff() < 0.0)
            throw std::invalid_argument("deterministic_mi: correlation matrices must be PSD");
        const FixedPointMap f{eig_bs, eig_ms, double(eig_bs.size()), noise_variance};
        FixedPointSolution sol;
        sol.kappa = eig_ms.sum() / f.n_bs;
        sol.kappa_bar = eig_bs.sum() / f.n_bs;
        FixedPointSolution start = sol;
        if (!iterate(f, 0.5, sol))
        {
            const int used = sol.iterations;
            sol = start;
            sol.iterations = used;
            if (!iterate(f, 1.0, sol))
                throw std::runtime_error("deterministic_mi: fixed point did not converge");
        }
        double v = -sol.kappa * sol.kappa_bar / noise_variance;
        for (double l : eig_bs)
            v += std::log1p(sol.kappa * l / noise_variance) / f.n_bs;
        for (double l : eig_ms)
            v += std::log1p(sol.kappa_bar * l / noise_variance) / f.n_bs;
        sol.v = v;
        return sol;
    }

    FixedPointSolution deterministic_mi(const CorrelationMatrix &r_bs, const CorrelationMatrix &r_ms,
                                        double noise_variance)
    {
        return deterministic_mi(r_bs.eigenvalues(), r_ms.eigenvalues(), noise_variance);
    }

    Eigen::MatrixXcd rzf_precoder(const Eigen::MatrixXcd &h, double zeta, double power)
    {
        if (!(zeta > 0.0) || !(power > 0.0))
            throw std::invalid_argument("rzf_precoder: zeta and power must be positive");
        const int k = int(h.cols());
        Eigen::MatrixXcd gram = h.adjoint() * h;
        gram.diagonal().array() += zeta * double(h.rows());
        Eigen::LLT<Eigen::MatrixXcd> llt(gram);
        if (llt.info() != Eigen::Success)
            throw std::runtime_error("rzf_precoder: factorization failed");
        Eigen::MatrixXcd g = h * llt.solve(Eigen::MatrixXcd::Identity(k, k));
        const double norm2 = g.squaredNorm();
        if (!(norm2 > 0.0))
            throw std::runtime_error("rzf_precoder: zero precoder");
        g *= std::sqrt(power / norm2);
        return g;
    }

    Eigen::VectorXd sinr_all(const Eigen::MatrixXcd &h, const Eigen::MatrixXcd &g)
    {
        if (h.rows() != g.rows() || h.cols() != g.cols())
            throw std::invalid_argument("sinr: channel and precoder dimensions differ");
        const Eigen::MatrixXcd m = h.adjoint() * g;
        Eigen::VectorXd out(m.rows());
        for (int k = 0; k < m.rows(); ++k)
        {
            const double signal = std::norm(m(k, k));
            const double total = m.row(k).squaredNorm();
            out(k) = signal / (std::max(0.0, total - signal) + 1.0);
        }
        return out;
    }

    double sinr(int k, const Eigen::MatrixXcd &h, const Eigen::MatrixXcd &g)
    {
        if (k < 0 || k >= h.cols())
            throw std::out_of_range("sinr: user index out of range");
        const Eigen::VectorXcd m = g.adjoint() * h.col(k); // conj of h_k^H g_j
        const double signal = std::norm(m(k));
        return signal / (std::max(0.0, m.squaredNorm() - signal) + 1.0);
    }

    Eigen::VectorXcd user_channel(const Eigen::MatrixXcd &r_sqrt, double large_scale, std::uint64_t seed,
                                  std::uint64_t draw)
    {
        if (!(large_scale > 0.0))
            throw std::invalid_argument("user_channel: large-scale factor must be positive");
        RandomStream rng(seed, draw);
        Eigen::VectorXcd z(r_sqrt.cols());
        for (int i = 0; i < z.size(); ++i)
            z(i) = rng.complex_normal();
        return std::sqrt(large_scale) * (r_sqrt * z);
    }

    Eigen::VectorXcd user_channel(const CorrelationMatrix &r, double large_scale, std::uint64_t seed,
                                  std::uint64_t draw)
    {
        return user_channel(matrix_sqrt_psd(r.dense()), large_scale, seed, draw);
    }

    double uma_path_loss_db(double distance_m)
    {
        if (!(distance_m > 0.0))
            throw std::invalid_argument("uma_path_loss_db: distance must be positive");
        return 128.1 + 37.6 * std::log10(distance_m / 1000.0);
    }

    double large_scale_factor(double distance_m, const LinkBudget &b)
    {
        const double db = -uma_path_loss_db(distance_m) + b.antenna_gain_dbi + b.shadow_fading_db;
        return b.tx_power_w * std::pow(10.0, db / 10.0) / b.noise_w;
    }

    double elevation_los(double height_difference_m, double ground_distance_m)
    {
        if (!(ground_distance_m > 0.0))
            throw std::invalid_argument("elevation_los: ground distance must be positive");
        return std::numbers::pi / 2.0 + std::atan(height_difference_m / ground_distance_m);
    }

    double MultiUserConfig::effective_zeta() const
    {
        if (zeta > 0.0)
            return zeta;
        if (large_scale.empty())
            throw std::invalid_argument("MultiUserConfig: no users");
        const double mean = std::accumulate(large_scale.begin(), large_scale.end(), 0.0) / double(large_scale.size());
        return 1.0 / (double(large_scale.size()) * mean);
    }

    MultiUserResult simulate_multiuser(const MultiUserConfig &c, std::uint64_t seed, int draws, unsigned threads,
                                       std::uint64_t first_draw)
    {
        if (c.users < 1 || c.bs_ports < c.users)
            throw std::invalid_argument("simulate_multiuser: need 1 <= K <= N_BS");
        if (int(c.correlation_sqrt.size()) != c.users || int(c.large_scale.size()) != c.users)
            throw std::invalid_argument("simulate_multiuser: per-user inputs do not match K");
        for (int k = 0; k < c.users; ++k)
        {
            if (c.correlation_sqrt[k].rows() != c.bs_ports || c.correlation_sqrt[k].cols() != c.bs_ports)
                throw std::invalid_argument("simulate_multiuser: correlation size does not match N_BS");
            if (!(c.large_scale[k] > 0.0))
                throw std::invalid_argument("simulate_multiuser: large-scale factors must be positive");
        }
        if (draws < 1)
            throw std::invalid_argument("simulate_multiuser: need at least one draw");
        MultiUserResult res;
        res.zeta = c.effective_zeta();
        res.per_draw.assign(draws, 0.0);
        parallel_for(std::size_t(draws), threads, [&](std::size_t i) {
            RandomStream rng(seed, first_draw + i);
            Eigen::MatrixXcd h(c.bs_ports, c.users);
            Eigen::VectorXcd z(c.bs_ports);
            for (int k = 0; k < c.users; ++k)
            {
                for (int s = 0; s < c.bs_ports; ++s)
                    z(s) = rng.complex_normal();
                h.col(k) = std::sqrt(c.large_scale[k]) * (c.correlation_sqrt[k] * z);
            }
            const Eigen::MatrixXcd g = rzf_precoder(h, res.zeta, c.power);
            const Eigen::VectorXd gamma = sinr_all(h, g);
            double rate = 0.0;
            for (int k = 0; k < c.users; ++k)
                rate += std::log1p(gamma(k));
            res.per_draw[i] = rate / double(c.users);
        });
        double sum = 0.0;
        for (double r : res.per_draw)
            sum += r;
        res.mean_rate = sum / double(draws);
        double ss = 0.0;
        for (double r : res.per_draw)
            ss += (r - res.mean_rate) * (r - res.mean_rate);
        res.std_error = draws > 1 ? std::sqrt(ss / double(draws - 1) / double(draws)) : 0.0;
        return res;
    }
}
