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

#ifndef SCF3D_INFOTHEORY_HPP
#define SCF3D_INFOTHEORY_HPP

#include "scf3d/channel.hpp"
#include "scf3d/scf.hpp"

#include <Eigen/Dense>

#include <cstdint>
#include <vector>

namespace scf3d
{
    // log det(I + H H^H / (N_BS sigma^2)) in nats, N_BS = H.cols().
    double mutual_information(const Eigen::MatrixXcd &h, double noise_variance);
    double mutual_information(const ChannelRealization &h, double noise_variance);

    struct FixedPointSolution
    {
        double kappa = 0.0;
        double kappa_bar = 0.0;
        double v = 0.0; // nats per transmit antenna
        int iterations = 0;
        double residual = 0.0;
    };

    // Deterministic equivalent of E[I] / N_BS for H = R_MS^{1/2} X R_BS^{1/2}.
    // Damped iteration (factor 0.5) with a plain-iteration fallback, capped at 1e4 steps each.
    FixedPointSolution deterministic_mi(const CorrelationMatrix &r_bs, const CorrelationMatrix &r_ms,
                                        double noise_variance);
    // Same from eigenvalues; n_bs normalizes the traces.
    FixedPointSolution deterministic_mi(const Eigen::VectorXd &eig_bs, const Eigen::VectorXd &eig_ms,
                                        double noise_variance);

    // G = sqrt(beta) (H H^H + zeta N_BS I)^{-1} H with tr(G^H G) = power. H is N_BS x K with
    // user channels as columns; evaluated in the equivalent K x K form H (H^H H + zeta N_BS I)^{-1}.
    Eigen::MatrixXcd rzf_precoder(const Eigen::MatrixXcd &h, double zeta, double power = 1.0);

    // gamma_k = |h_k^H g_k|^2 / (h_k^H G G^H h_k - |h_k^H g_k|^2 + 1).
    double sinr(int k, const Eigen::MatrixXcd &h, const Eigen::MatrixXcd &g);
    Eigen::VectorXd sinr_all(const Eigen::MatrixXcd &h, const Eigen::MatrixXcd &g);

    // h = sqrt(rho) R^{1/2} z with z ~ CN(0, I), drawn from stream `draw` under `seed`.
    Eigen::VectorXcd user_channel(const Eigen::MatrixXcd &r_sqrt, double large_scale, std::uint64_t seed,
                                  std::uint64_t draw = 0);
    Eigen::VectorXcd user_channel(const CorrelationMatrix &r, double large_scale, std::uint64_t seed,
                                  std::uint64_t draw = 0);

    // Urban-macro path loss 128.1 + 37.6 log10(d / 1 km) in dB.
    double uma_path_loss_db(double distance_m);

    struct LinkBudget
    {
        double tx_power_w = 40.0;
        double antenna_gain_dbi = 17.0;
        double shadow_fading_db = 6.0;
        double noise_w = 1.13e-13;
    };

    // rho = P_Tx PL AG SF / sigma^2 (linear).
    double large_scale_factor(double distance_m, const LinkBudget &budget = {});

    // Elevation coordinate of the line of sight from the base station, measured from the array
    // axis so that 90 deg is the horizon: pi/2 + atan(height_difference / ground_distance).
    double elevation_los(double height_difference_m, double ground_distance_m);

    struct MultiUserConfig
    {
        int users = 0;   // K
        int bs_ports = 0; // N_BS
        std::vector<Eigen::MatrixXcd> correlation_sqrt; // R_BS,k^{1/2}, one per user
        std::vector<double> large_scale;                // rho_k
        double zeta = 0.0;                              // <= 0 selects 1 / (K mean rho)
        double power = 1.0;
        std::vector<double> theta_los; // informational, radians

        double effective_zeta() const;
    };

    struct MultiUserResult
    {
        double mean_rate = 0.0;   // mean over draws of sum_k log(1 + gamma_k) / K, nats
        double std_error = 0.0;
        std::vector<double> per_draw; // index order
        double zeta = 0.0;
    };

    // Draws `draws` channel sets (stream first_draw + i) and averages the per-user RZF rate.
    MultiUserResult simulate_multiuser(const MultiUserConfig &config, std::uint64_t seed, int draws,
                                       unsigned threads = 1, std::uint64_t first_draw = 0);
}

#endif
